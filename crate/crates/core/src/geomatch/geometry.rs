use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::LonLat;

const EARTH_RADIUS_M: f64 = 6_371_008.8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Geometry {
    LineString(Vec<LonLat>),
    MultiLineString(Vec<Vec<LonLat>>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("geometry has no coordinates")]
    EmptyGeometry,
}

impl Geometry {
    pub fn lines(&self) -> Vec<&[LonLat]> {
        match self {
            Geometry::LineString(l) => vec![l.as_slice()],
            Geometry::MultiLineString(ls) => ls.iter().map(Vec::as_slice).collect(),
        }
    }

    pub fn positions(&self) -> impl Iterator<Item = &LonLat> {
        self.lines().into_iter().flat_map(|l| l.iter())
    }

    pub fn is_empty(&self) -> bool {
        self.positions().next().is_none()
    }

    /// Mean of all vertices.
    pub fn centroid(&self) -> Option<LonLat> {
        let (mut lon, mut lat, mut n) = (0.0, 0.0, 0usize);
        for p in self.positions() {
            lon += p.lon;
            lat += p.lat;
            n += 1;
        }
        (n > 0).then(|| LonLat::new(lon / n as f64, lat / n as f64))
    }

    /// Joins several geometries into one multi-line geometry.
    pub fn merge<'a>(parts: impl IntoIterator<Item = &'a Geometry>) -> Geometry {
        let lines = parts
            .into_iter()
            .flat_map(|g| g.lines().into_iter().map(<[LonLat]>::to_vec))
            .collect();
        Geometry::MultiLineString(lines)
    }
}

/// Great-circle distance in meters.
pub fn haversine_m(a: LonLat, b: LonLat) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

pub fn line_length_m(line: &[LonLat]) -> f64 {
    line.windows(2).map(|w| haversine_m(w[0], w[1])).sum()
}

/// Distance from `p` to segment `a`–`b`, on a local equirectangular
/// projection centred at `p`. Accurate at street scale.
pub fn point_segment_m(p: LonLat, a: LonLat, b: LonLat) -> f64 {
    let k = p.lat.to_radians().cos();
    let project = |q: LonLat| {
        (
            (q.lon - p.lon).to_radians() * k * EARTH_RADIUS_M,
            (q.lat - p.lat).to_radians() * EARTH_RADIUS_M,
        )
    };
    let (ax, ay) = project(a);
    let (bx, by) = project(b);
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (-(ax * dx + ay * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (ax + t * dx, ay + t * dy);
    (cx * cx + cy * cy).sqrt()
}

fn point_line_m(p: LonLat, line: &[LonLat]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [only] => haversine_m(p, *only),
        _ => line
            .windows(2)
            .map(|w| point_segment_m(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Smallest distance between two geometries, in meters.
pub fn geometry_distance_m(a: &Geometry, b: &Geometry) -> f64 {
    let one_way = |from: &Geometry, to: &Geometry| {
        from.positions()
            .flat_map(|p| to.lines().into_iter().map(move |l| point_line_m(*p, l)))
            .fold(f64::INFINITY, f64::min)
    };
    one_way(a, b).min(one_way(b, a))
}

/// Point halfway along the longest member line, measured by arc length.
/// Ties between equally long members go to the first.
pub fn representative_point(geometry: &Geometry) -> Result<LonLat, GeometryError> {
    let mut longest: Option<(&[LonLat], f64)> = None;
    for line in geometry.lines().into_iter().filter(|l| !l.is_empty()) {
        let len = line_length_m(line);
        if longest.is_none_or(|(_, best)| len > best) {
            longest = Some((line, len));
        }
    }
    let (line, total) = longest.ok_or(GeometryError::EmptyGeometry)?;
    if total == 0.0 {
        return Ok(line[0]);
    }
    let half = total / 2.0;
    let mut walked = 0.0;
    for w in line.windows(2) {
        let seg = haversine_m(w[0], w[1]);
        if seg > 0.0 && walked + seg >= half {
            let t = (half - walked) / seg;
            return Ok(LonLat::new(
                w[0].lon + t * (w[1].lon - w[0].lon),
                w[0].lat + t * (w[1].lat - w[0].lat),
            ));
        }
        walked += seg;
    }
    Ok(*line.last().expect("non-empty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(lon: f64, lat: f64) -> LonLat {
        LonLat::new(lon, lat)
    }

    /// Planar distance in degrees from `q` to the nearest segment.
    fn planar_distance(q: LonLat, g: &Geometry) -> f64 {
        let mut best = f64::INFINITY;
        for line in g.lines() {
            if line.len() == 1 {
                best = best.min(((q.lon - line[0].lon).powi(2) + (q.lat - line[0].lat).powi(2)).sqrt());
            }
            for w in line.windows(2) {
                let (dx, dy) = (w[1].lon - w[0].lon, w[1].lat - w[0].lat);
                let len2 = dx * dx + dy * dy;
                let t = if len2 == 0.0 { 0.0 } else {
                    (((q.lon - w[0].lon) * dx + (q.lat - w[0].lat) * dy) / len2).clamp(0.0, 1.0)
                };
                let (cx, cy) = (w[0].lon + t * dx, w[0].lat + t * dy);
                best = best.min(((q.lon - cx).powi(2) + (q.lat - cy).powi(2)).sqrt());
            }
        }
        best
    }

    #[test]
    fn straight_segment_midpoint() {
        let g = Geometry::LineString(vec![p(0.0, 0.0), p(2.0, 0.0)]);
        let m = representative_point(&g).unwrap();
        assert!((m.lon - 1.0).abs() < 1e-12 && m.lat.abs() < 1e-12);
    }

    #[test]
    fn longest_member_is_used() {
        // Members of length 1 and 3 degrees along the equator.
        let short = vec![p(10.0, 0.0), p(11.0, 0.0)];
        let long = vec![p(0.0, 0.0), p(1.0, 0.0), p(3.0, 0.0)];
        let lengths = [line_length_m(&short), line_length_m(&long)];
        assert!(lengths[1] > lengths[0]);
        let g = Geometry::MultiLineString(vec![short, long]);
        let m = representative_point(&g).unwrap();
        assert!((m.lon - 1.5).abs() < 1e-9, "{m:?}");
    }

    #[test]
    fn degenerate_geometries() {
        let g = Geometry::LineString(vec![p(2.35, 48.85)]);
        assert_eq!(representative_point(&g).unwrap(), p(2.35, 48.85));
        let g = Geometry::LineString(vec![p(1.0, 1.0), p(1.0, 1.0)]);
        assert_eq!(representative_point(&g).unwrap(), p(1.0, 1.0));
        assert_eq!(
            representative_point(&Geometry::LineString(vec![])),
            Err(GeometryError::EmptyGeometry)
        );
        assert_eq!(
            representative_point(&Geometry::MultiLineString(vec![vec![], vec![]])),
            Err(GeometryError::EmptyGeometry)
        );
    }

    #[test]
    fn haversine_known_value() {
        // One degree of latitude is about 111.2 km.
        let d = haversine_m(p(0.0, 0.0), p(0.0, 1.0));
        assert!((d - 111_195.0).abs() < 10.0, "{d}");
    }

    #[test]
    fn distance_between_touching_and_far_lines() {
        let a = Geometry::LineString(vec![p(2.30, 48.85), p(2.31, 48.85)]);
        let b = Geometry::LineString(vec![p(2.31, 48.85), p(2.32, 48.85)]);
        assert!(geometry_distance_m(&a, &b) < 1e-6);
        let c = Geometry::LineString(vec![p(2.40, 48.85), p(2.41, 48.85)]);
        let d = geometry_distance_m(&a, &c);
        assert!((d - haversine_m(p(2.31, 48.85), p(2.40, 48.85))).abs() < 5.0, "{d}");
    }

    fn coord() -> impl Strategy<Value = LonLat> {
        (-10.0f64..10.0, 40.0f64..55.0).prop_map(|(lon, lat)| p(lon, lat))
    }

    proptest! {
        #[test]
        fn representative_point_lies_on_geometry(
            lines in proptest::collection::vec(proptest::collection::vec(coord(), 1..8), 1..4)
        ) {
            let g = Geometry::MultiLineString(lines);
            let m = representative_point(&g).unwrap();
            prop_assert!(planar_distance(m, &g) <= 1e-9);
        }
    }
}
