//! GeoJSON encoding of matched streets.
//!
//! Each feature has `id` = record_id and carries every canonical record
//! field as a property (absent values as `null`), plus
//! `representative_point` as `[lon, lat]`, `match_method` and `way_ids`.

use std::io::{Read, Write};

use geojson::{feature::Id, Feature, FeatureCollection, GeoJson, JsonObject, Value};
use serde_json::Value as Json;
use thiserror::Error;

use super::geometry::Geometry;
use super::matcher::{MatchMethod, StreetFeature};
use crate::domain::{LonLat, StreetRecord};

pub const EXTRA_PROPERTIES: [&str; 3] = ["representative_point", "match_method", "way_ids"];

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a FeatureCollection: {0}")]
    NotGeoJson(String),
    #[error("feature {index}: {message}")]
    Invalid { index: usize, message: String },
}

fn position(p: &LonLat) -> Vec<f64> {
    vec![p.lon, p.lat]
}

fn to_geojson_geometry(g: &Geometry) -> geojson::Geometry {
    let value = match g {
        Geometry::LineString(l) => Value::LineString(l.iter().map(position).collect()),
        Geometry::MultiLineString(ls) => {
            Value::MultiLineString(ls.iter().map(|l| l.iter().map(position).collect()).collect())
        }
    };
    geojson::Geometry::new(value)
}

/// `None` for unmatched features, which have no map representation.
pub fn to_feature(f: &StreetFeature) -> Option<Feature> {
    let geometry = f.geometry.as_ref()?;
    let point = f.representative_point?;
    let Json::Object(mut props) = serde_json::to_value(&f.record).expect("records serialize") else {
        unreachable!("records serialize as objects")
    };
    props.insert("representative_point".into(), serde_json::json!([point.lon, point.lat]));
    props.insert("match_method".into(), Json::String(f.match_method.as_str().into()));
    props.insert("way_ids".into(), serde_json::json!(f.way_ids));
    Some(Feature {
        bbox: None,
        geometry: Some(to_geojson_geometry(geometry)),
        id: Some(Id::String(f.record.record_id.clone())),
        properties: Some(props),
        foreign_members: None,
    })
}

/// Matched features only, ordered by record_id.
pub fn to_feature_collection(features: &[StreetFeature]) -> FeatureCollection {
    let mut matched: Vec<&StreetFeature> = features.iter().filter(|f| f.is_matched()).collect();
    matched.sort_by(|a, b| a.record.record_id.cmp(&b.record.record_id));
    FeatureCollection {
        bbox: None,
        features: matched.into_iter().filter_map(to_feature).collect(),
        foreign_members: None,
    }
}

fn to_line(v: &[Vec<f64>]) -> Result<Vec<LonLat>, String> {
    v.iter()
        .map(|p| match p.as_slice() {
            [lon, lat, ..] if LonLat::new(*lon, *lat).in_wgs84_range() => Ok(LonLat::new(*lon, *lat)),
            _ => Err(format!("invalid position {p:?}")),
        })
        .collect()
}

pub fn from_feature(f: &Feature) -> Result<StreetFeature, String> {
    let mut props: JsonObject = f.properties.clone().ok_or("missing properties")?;
    let point = props
        .remove("representative_point")
        .ok_or("missing representative_point")
        .and_then(|v| serde_json::from_value::<LonLat>(v).map_err(|_| "representative_point is not [lon, lat]"))?;
    let method: MatchMethod = props
        .remove("match_method")
        .and_then(|v| v.as_str().map(String::from))
        .ok_or("missing match_method")?
        .parse()
        .map_err(|e: crate::domain::ParseEnumError| e.to_string())?;
    if method == MatchMethod::Unmatched {
        return Err("unmatched feature carries geometry".into());
    }
    let way_ids: Vec<String> = match props.remove("way_ids") {
        Some(v) => serde_json::from_value(v).map_err(|e| format!("way_ids: {e}"))?,
        None => Vec::new(),
    };
    let record: StreetRecord =
        serde_json::from_value(Json::Object(props)).map_err(|e| format!("record: {e}"))?;
    if let Some(id) = &f.id {
        let id = match id {
            Id::String(s) => s.clone(),
            Id::Number(n) => n.to_string(),
        };
        if id != record.record_id {
            return Err(format!("id {id} differs from record_id {}", record.record_id));
        }
    }
    let geometry = match f.geometry.as_ref().map(|g| &g.value) {
        Some(Value::LineString(l)) => Geometry::LineString(to_line(l)?),
        Some(Value::MultiLineString(ls)) => {
            Geometry::MultiLineString(ls.iter().map(|l| to_line(l)).collect::<Result<_, _>>()?)
        }
        Some(_) => return Err("geometry is not a (Multi)LineString".into()),
        None => return Err("missing geometry".into()),
    };
    if geometry.is_empty() {
        return Err("empty geometry".into());
    }
    if !point.in_wgs84_range() {
        return Err("representative_point out of range".into());
    }
    Ok(StreetFeature { record, geometry: Some(geometry), representative_point: Some(point), match_method: method, way_ids })
}

pub fn from_feature_collection(fc: &FeatureCollection) -> Result<Vec<StreetFeature>, FeatureError> {
    fc.features
        .iter()
        .enumerate()
        .map(|(index, f)| from_feature(f).map_err(|message| FeatureError::Invalid { index, message }))
        .collect()
}

pub fn parse_feature_collection(text: &str) -> Result<FeatureCollection, FeatureError> {
    let gj: GeoJson = text.parse().map_err(|e: geojson::Error| FeatureError::NotGeoJson(e.to_string()))?;
    FeatureCollection::try_from(gj).map_err(|e| FeatureError::NotGeoJson(e.to_string()))
}

/// Writes the collection followed by a newline. Identical input yields
/// identical bytes.
pub fn write_features_geojson<W: Write>(mut w: W, features: &[StreetFeature]) -> Result<(), FeatureError> {
    let fc = to_feature_collection(features);
    serde_json::to_writer(&mut w, &fc).map_err(|e| FeatureError::Io(e.into()))?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn read_features_geojson<R: Read>(mut r: R) -> Result<Vec<StreetFeature>, FeatureError> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    from_feature_collection(&parse_feature_collection(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::sample;

    fn matched() -> StreetFeature {
        StreetFeature {
            record: sample(),
            geometry: Some(Geometry::LineString(vec![LonLat::new(2.28, 48.87), LonLat::new(2.29, 48.86)])),
            representative_point: Some(LonLat::new(2.285, 48.865)),
            match_method: MatchMethod::Exact,
            way_ids: vec!["way/1".into()],
        }
    }

    #[test]
    fn round_trip_and_stable_bytes() {
        let fs = vec![matched(), StreetFeature::unmatched(sample())];
        let mut a = Vec::new();
        write_features_geojson(&mut a, &fs).unwrap();
        let mut b = Vec::new();
        write_features_geojson(&mut b, &fs).unwrap();
        assert_eq!(a, b);
        let back = read_features_geojson(a.as_slice()).unwrap();
        assert_eq!(back, vec![matched()]);
    }

    #[test]
    fn properties_hold_every_field() {
        let f = to_feature(&matched()).unwrap();
        let p = f.properties.unwrap();
        for col in crate::domain::CANONICAL_HEADER.split(',').chain(EXTRA_PROPERTIES) {
            assert!(p.contains_key(col), "{col}");
        }
        assert_eq!(p["image_url"], Json::Null);
        assert_eq!(p["representative_point"], serde_json::json!([2.285, 48.865]));
    }

    #[test]
    fn rejects_bad_features() {
        let mut f = to_feature(&matched()).unwrap();
        f.id = Some(Id::String("other".into()));
        assert!(from_feature(&f).unwrap_err().contains("differs"));
        let mut g = to_feature(&matched()).unwrap();
        g.geometry = Some(geojson::Geometry::new(Value::Point(vec![0.0, 0.0])));
        assert!(from_feature(&g).is_err());
    }
}
