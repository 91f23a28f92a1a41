//! OSM street extracts stored as GeoJSON FeatureCollections of ways.

use std::collections::BTreeSet;
use std::path::Path;

use geojson::{feature::Id, FeatureCollection, GeoJson, Value};
use serde_json::Value as Json;
use thiserror::Error;

use super::geometry::Geometry;
use crate::domain::LonLat;

/// Property names consulted, in order, when a feature has no `id`.
const ID_PROPERTIES: [&str; 4] = ["@id", "osm_id", "way_id", "id"];
const DISTRICT_PROPERTIES: [&str; 4] = ["district", "addr:district", "addr:suburb", "is_in:district"];

#[derive(Debug, Clone, PartialEq)]
pub struct NamedWay {
    pub way_id: String,
    pub name: String,
    pub geometry: Geometry,
    pub district: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OsmExtract {
    /// Sorted by `way_id`; ids are unique.
    pub ways: Vec<NamedWay>,
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("cannot read extract: {0}")]
    Io(#[from] std::io::Error),
    #[error("extract is not a GeoJSON FeatureCollection: {0}")]
    NotGeoJson(String),
    #[error("feature {index} has no way id")]
    MissingId { index: usize },
    #[error("duplicate way id {0}")]
    DuplicateId(String),
    #[error("way {0} has an empty geometry")]
    EmptyGeometry(String),
    #[error("way {way_id} has an invalid coordinate {position:?}")]
    BadCoordinate { way_id: String, position: Vec<f64> },
}

fn id_string(v: &Json) -> Option<String> {
    match v {
        Json::String(s) if !s.trim().is_empty() => Some(s.trim().to_string()),
        Json::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn to_line(way_id: &str, positions: &[Vec<f64>]) -> Result<Vec<LonLat>, ExtractError> {
    positions
        .iter()
        .map(|p| {
            let ll = match p.as_slice() {
                [lon, lat, ..] => LonLat::new(*lon, *lat),
                _ => LonLat::new(f64::NAN, f64::NAN),
            };
            if ll.in_wgs84_range() {
                Ok(ll)
            } else {
                Err(ExtractError::BadCoordinate { way_id: way_id.to_string(), position: p.clone() })
            }
        })
        .collect()
}

impl OsmExtract {
    pub fn from_geojson_str(text: &str) -> Result<Self, ExtractError> {
        let gj: GeoJson = text.parse().map_err(|e: geojson::Error| ExtractError::NotGeoJson(e.to_string()))?;
        let fc = FeatureCollection::try_from(gj).map_err(|e| ExtractError::NotGeoJson(e.to_string()))?;
        Self::from_feature_collection(fc)
    }

    pub fn from_path(path: &Path) -> Result<Self, ExtractError> {
        Self::from_geojson_str(&std::fs::read_to_string(path)?)
    }

    /// Keeps named line features; points, polygons and unnamed ways are
    /// skipped.
    pub fn from_feature_collection(fc: FeatureCollection) -> Result<Self, ExtractError> {
        let mut ways = Vec::new();
        let mut seen = BTreeSet::new();
        for (index, f) in fc.features.into_iter().enumerate() {
            let props = f.properties.unwrap_or_default();
            let Some(name) = props.get("name").and_then(Json::as_str).map(str::trim).filter(|s| !s.is_empty())
            else {
                continue;
            };
            let Some(geom) = f.geometry else { continue };
            let way_id = match &f.id {
                Some(Id::String(s)) => Some(s.clone()),
                Some(Id::Number(n)) => Some(n.to_string()),
                None => ID_PROPERTIES.iter().find_map(|k| props.get(*k).and_then(id_string)),
            }
            .ok_or(ExtractError::MissingId { index })?;
            let geometry = match &geom.value {
                Value::LineString(l) => Geometry::LineString(to_line(&way_id, l)?),
                Value::MultiLineString(ls) => Geometry::MultiLineString(
                    ls.iter().map(|l| to_line(&way_id, l)).collect::<Result<_, _>>()?,
                ),
                _ => continue,
            };
            if geometry.is_empty() {
                return Err(ExtractError::EmptyGeometry(way_id));
            }
            if !seen.insert(way_id.clone()) {
                return Err(ExtractError::DuplicateId(way_id));
            }
            let district = DISTRICT_PROPERTIES
                .iter()
                .find_map(|k| props.get(*k).and_then(Json::as_str))
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(String::from);
            ways.push(NamedWay { way_id, name: name.to_string(), geometry, district });
        }
        ways.sort_by(|a, b| a.way_id.cmp(&b.way_id));
        Ok(OsmExtract { ways })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fc(features: &str) -> String {
        format!(r#"{{"type":"FeatureCollection","features":[{features}]}}"#)
    }

    #[test]
    fn reads_named_lines_and_skips_the_rest() {
        let text = fc(r#"
            {"type":"Feature","id":"way/2","properties":{"name":"Rue B","district":"5e"},
             "geometry":{"type":"LineString","coordinates":[[2.3,48.8],[2.31,48.8]]}},
            {"type":"Feature","properties":{"osm_id":1,"name":"Rue A"},
             "geometry":{"type":"MultiLineString","coordinates":[[[2.3,48.8],[2.31,48.81]]]}},
            {"type":"Feature","properties":{"@id":"way/3"},
             "geometry":{"type":"LineString","coordinates":[[2.3,48.8],[2.31,48.8]]}},
            {"type":"Feature","properties":{"@id":"node/4","name":"Bus stop"},
             "geometry":{"type":"Point","coordinates":[2.3,48.8]}}
        "#);
        let x = OsmExtract::from_geojson_str(&text).unwrap();
        let ids: Vec<_> = x.ways.iter().map(|w| w.way_id.as_str()).collect();
        assert_eq!(ids, ["1", "way/2"]);
        assert_eq!(x.ways[1].district.as_deref(), Some("5e"));
        assert_eq!(x.ways[0].district, None);
    }

    #[test]
    fn rejects_duplicates_and_bad_coordinates() {
        let dup = fc(r#"
            {"type":"Feature","id":"a","properties":{"name":"X"},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}},
            {"type":"Feature","id":"a","properties":{"name":"Y"},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}}
        "#);
        assert!(matches!(OsmExtract::from_geojson_str(&dup), Err(ExtractError::DuplicateId(id)) if id == "a"));
        let bad = fc(r#"{"type":"Feature","id":"b","properties":{"name":"X"},"geometry":{"type":"LineString","coordinates":[[0,95],[1,1]]}}"#);
        assert!(matches!(OsmExtract::from_geojson_str(&bad), Err(ExtractError::BadCoordinate { .. })));
        let empty = fc(r#"{"type":"Feature","id":"c","properties":{"name":"X"},"geometry":{"type":"MultiLineString","coordinates":[]}}"#);
        assert!(matches!(OsmExtract::from_geojson_str(&empty), Err(ExtractError::EmptyGeometry(_))));
        let noid = fc(r#"{"type":"Feature","properties":{"name":"X"},"geometry":{"type":"LineString","coordinates":[[0,0],[1,1]]}}"#);
        assert!(matches!(OsmExtract::from_geojson_str(&noid), Err(ExtractError::MissingId { index: 0 })));
        assert!(matches!(OsmExtract::from_geojson_str("[]"), Err(ExtractError::NotGeoJson(_))));
    }
}
