//! HTTP service for the street map.
//!
//! | Route | Body |
//! |---|---|
//! | `GET /cities` | JSON array of city summaries |
//! | `GET /cities/{id}/streets` | GeoJSON FeatureCollection, `X-Total-Count` header |
//! | `GET /cities/{id}/streets/random` | one GeoJSON Feature, or 204 |
//! | `GET /cities/{id}/stats` | `{theme, total, counts}` |
//!
//! Filters are query parameters `theme`, `from`, `to`, `tags` (comma
//! separated) and `seed`. Errors are `{code, field, message}` JSON.

mod config;
mod error;
mod params;

use std::collections::BTreeMap;
use std::sync::Arc;

use axum::extract::{Path, RawQuery, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use honorifics_core::domain::{BoundingBox, CityId, LonLat, ThemeLayer};
use honorifics_core::geomatch::features::to_feature;
use honorifics_core::store::{FileStore, Snapshot, SnapshotHandle, SnapshotStore, StoreError};
use serde::Serialize;
use tower_http::compression::CompressionLayer;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use tower_http::services::ServeDir;

pub use config::{ConfigError, ServeConfig};
pub use error::{ApiError, ErrorBody};
pub use params::StreetParams;

pub const GEOJSON_CONTENT_TYPE: &str = "application/geo+json";
pub const TOTAL_COUNT_HEADER: &str = "x-total-count";

#[derive(Clone)]
pub struct AppState {
    pub snapshot: Arc<SnapshotHandle>,
    pub config: Arc<ServeConfig>,
}

impl AppState {
    pub fn new(snapshot: Arc<SnapshotHandle>, config: ServeConfig) -> Self {
        AppState { snapshot, config: Arc::new(config) }
    }

    fn snapshot(&self) -> Result<Arc<Snapshot>, ApiError> {
        self.snapshot.current().ok_or(ApiError::NoSnapshot)
    }

    fn city(&self, snap: &Snapshot, id: &str) -> Result<CityId, ApiError> {
        id.parse::<CityId>()
            .ok()
            .filter(|c| self.config.serves(*c) && snap.city(*c).is_ok())
            .ok_or_else(|| ApiError::UnknownCity(id.to_string()))
    }
}

#[derive(Debug, Serialize)]
pub struct CitySummary {
    pub id: CityId,
    pub display_name: String,
    pub center: LonLat,
    pub bounding_box: BoundingBox,
    pub year_range: (i32, i32),
    pub count: usize,
}

#[derive(Debug, Serialize)]
pub struct StatsBody {
    pub theme: ThemeLayer,
    pub total: usize,
    pub counts: BTreeMap<String, usize>,
}

fn geojson_response(body: Vec<u8>, total: usize) -> Response {
    (
        [
            (header::CONTENT_TYPE, HeaderValue::from_static(GEOJSON_CONTENT_TYPE)),
            (header::HeaderName::from_static(TOTAL_COUNT_HEADER), HeaderValue::from(total)),
        ],
        body,
    )
        .into_response()
}

async fn cities(State(st): State<AppState>) -> Result<Json<Vec<CitySummary>>, ApiError> {
    let snap = st.snapshot()?;
    let out = snap
        .cities()
        .filter(|c| st.config.serves(c.city))
        .map(|c| CitySummary {
            id: c.city,
            display_name: c.display_name.clone(),
            center: c.center,
            bounding_box: c.bounding_box,
            year_range: c.year_range,
            count: snap.city_count(c.city).unwrap_or(0),
        })
        .collect();
    Ok(Json(out))
}

async fn streets(State(st): State<AppState>, Path(id): Path<String>, RawQuery(q): RawQuery) -> Result<Response, ApiError> {
    let snap = st.snapshot()?;
    let city = st.city(&snap, &id)?;
    let filter = StreetParams::parse(q.as_deref())?.filter(city)?;
    let hits = snap.query(&filter)?;
    let fc = geojson::FeatureCollection {
        bbox: None,
        features: hits.iter().filter_map(|f| to_feature(f)).collect(),
        foreign_members: None,
    };
    let body = serde_json::to_vec(&fc).map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(geojson_response(body, hits.len()))
}

async fn random_street(State(st): State<AppState>, Path(id): Path<String>, RawQuery(q): RawQuery) -> Result<Response, ApiError> {
    let snap = st.snapshot()?;
    let city = st.city(&snap, &id)?;
    let params = StreetParams::parse(q.as_deref())?;
    let filter = params.filter(city)?;
    match snap.random_street(&filter, params.seed) {
        Ok(f) => {
            let feature = to_feature(f).ok_or_else(|| ApiError::Internal("stored feature has no geometry".into()))?;
            let body = serde_json::to_vec(&feature).map_err(|e| ApiError::Internal(e.to_string()))?;
            Ok(geojson_response(body, 1))
        }
        Err(StoreError::NoMatch) => Ok(StatusCode::NO_CONTENT.into_response()),
        Err(e) => Err(e.into()),
    }
}

async fn stats(State(st): State<AppState>, Path(id): Path<String>, RawQuery(q): RawQuery) -> Result<Json<StatsBody>, ApiError> {
    let snap = st.snapshot()?;
    let city = st.city(&snap, &id)?;
    let theme = StreetParams::parse(q.as_deref())?.theme.unwrap_or(ThemeLayer::Occupation);
    let counts = snap.stats(city, theme)?;
    Ok(Json(StatsBody { theme, total: counts.values().sum(), counts }))
}

async fn not_found() -> ApiError {
    ApiError::NotFound
}

/// Builds the application: API routes, gzip, CORS and, when configured,
/// static assets for every other path.
pub fn router(state: AppState) -> Router {
    let config = state.config.clone();
    let api = Router::new()
        .route("/cities", get(cities))
        .route("/cities/{id}/streets", get(streets))
        .route("/cities/{id}/streets/random", get(random_street))
        .route("/cities/{id}/stats", get(stats))
        .with_state(state);
    let app = match &config.static_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir)),
        None => api.fallback(not_found),
    };
    let app = if config.cors_origins.is_empty() {
        app
    } else {
        let origins = if config.cors_origins.iter().any(|o| o == "*") {
            AllowOrigin::any()
        } else {
            AllowOrigin::list(config.cors_origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()))
        };
        app.layer(CorsLayer::new().allow_origin(origins).allow_methods(Any).expose_headers([
            header::HeaderName::from_static(TOTAL_COUNT_HEADER),
        ]))
    };
    app.layer(CompressionLayer::new().gzip(true))
}

/// Reloads `store` into `handle` on every SIGHUP. Failed reloads keep the
/// current snapshot.
#[cfg(unix)]
pub async fn reload_on_sighup(handle: Arc<SnapshotHandle>, store: FileStore) -> std::io::Result<()> {
    use tokio::signal::unix::{signal, SignalKind};
    let mut hup = signal(SignalKind::hangup())?;
    while hup.recv().await.is_some() {
        let s = store.clone();
        match tokio::task::spawn_blocking(move || s.load()).await {
            Ok(Ok(snap)) => {
                log::info!("reloaded {} features from {}", snap.len(), store.path().display());
                handle.replace(snap);
            }
            Ok(Err(e)) => log::error!("reload failed, keeping current snapshot: {e}"),
            Err(e) => log::error!("reload task failed: {e}"),
        }
    }
    Ok(())
}

/// Serves until Ctrl-C.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
