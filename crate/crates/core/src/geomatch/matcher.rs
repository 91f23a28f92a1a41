//! Name-based matching of street records against an OSM extract.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::extract::{NamedWay, OsmExtract};
use super::geometry::{geometry_distance_m, haversine_m, representative_point, Geometry};
use super::names::{match_key, Language};
use crate::domain::{CityConfig, CityId, LonLat, StreetRecord};

pub const DEFAULT_MERGE_RADIUS_M: f64 = 2_000.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchMethod {
    Exact,
    Normalized,
    Unmatched,
}

impl MatchMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            MatchMethod::Exact => "exact",
            MatchMethod::Normalized => "normalized",
            MatchMethod::Unmatched => "unmatched",
        }
    }
}

impl std::str::FromStr for MatchMethod {
    type Err = crate::domain::ParseEnumError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "exact" => Ok(MatchMethod::Exact),
            "normalized" => Ok(MatchMethod::Normalized),
            "unmatched" => Ok(MatchMethod::Unmatched),
            other => Err(crate::domain::ParseEnumError { kind: "match_method", value: other.to_string() }),
        }
    }
}

/// A record joined with its geometry. `geometry` and
/// `representative_point` are both `Some` exactly when the record matched.
#[derive(Debug, Clone, PartialEq)]
pub struct StreetFeature {
    pub record: StreetRecord,
    pub geometry: Option<Geometry>,
    pub representative_point: Option<LonLat>,
    pub match_method: MatchMethod,
    /// Sorted; empty when unmatched.
    pub way_ids: Vec<String>,
}

impl StreetFeature {
    pub fn unmatched(record: StreetRecord) -> Self {
        StreetFeature {
            record,
            geometry: None,
            representative_point: None,
            match_method: MatchMethod::Unmatched,
            way_ids: Vec::new(),
        }
    }

    pub fn is_matched(&self) -> bool {
        self.match_method != MatchMethod::Unmatched
    }
}

fn casefold(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}

fn district_tokens(s: &str) -> Vec<String> {
    s.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(String::from)
        .collect()
}

fn district_matches(tag: &str, district: &str) -> bool {
    let (t, d) = (district_tokens(tag), district_tokens(district));
    !t.is_empty() && !d.is_empty() && (t.iter().all(|x| d.contains(x)) || d.iter().all(|x| t.contains(x)))
}

/// Immutable lookup structure over one city's extract.
#[derive(Debug, Clone)]
pub struct OsmIndex {
    city: CityId,
    center: LonLat,
    language: Language,
    merge_radius_m: f64,
    ways: Vec<NamedWay>,
    centroids: Vec<LonLat>,
    exact: HashMap<String, Vec<usize>>,
    normalized: HashMap<String, Vec<usize>>,
}

impl OsmIndex {
    pub fn new(extract: OsmExtract, config: &CityConfig) -> Self {
        let mut ways = extract.ways;
        ways.sort_by(|a, b| a.way_id.cmp(&b.way_id));
        let language = Language::of(config.city);
        let mut exact: HashMap<String, Vec<usize>> = HashMap::new();
        let mut normalized: HashMap<String, Vec<usize>> = HashMap::new();
        for (i, w) in ways.iter().enumerate() {
            exact.entry(casefold(&w.name)).or_default().push(i);
            normalized.entry(match_key(&w.name, language)).or_default().push(i);
        }
        let centroids = ways
            .iter()
            .map(|w| w.geometry.centroid().unwrap_or(config.center))
            .collect();
        OsmIndex {
            city: config.city,
            center: config.center,
            language,
            merge_radius_m: DEFAULT_MERGE_RADIUS_M,
            ways,
            centroids,
            exact,
            normalized,
        }
    }

    pub fn with_merge_radius(mut self, meters: f64) -> Self {
        self.merge_radius_m = meters;
        self
    }

    pub fn city(&self) -> CityId {
        self.city
    }

    pub fn ways(&self) -> &[NamedWay] {
        &self.ways
    }

    /// Mean centroid of the ways tagged with `district`, or the city center
    /// when none are.
    pub fn reference_point(&self, district: Option<&str>) -> LonLat {
        let Some(d) = district.filter(|d| !d.trim().is_empty()) else {
            return self.center;
        };
        let hits: Vec<LonLat> = self
            .ways
            .iter()
            .zip(&self.centroids)
            .filter(|(w, _)| w.district.as_deref().is_some_and(|t| district_matches(t, d)))
            .map(|(_, c)| *c)
            .collect();
        if hits.is_empty() {
            return self.center;
        }
        let n = hits.len() as f64;
        LonLat::new(
            hits.iter().map(|c| c.lon).sum::<f64>() / n,
            hits.iter().map(|c| c.lat).sum::<f64>() / n,
        )
    }

    /// Groups candidate indices into single-linkage clusters under the merge
    /// radius. Output clusters and their members are in ascending index
    /// order, hence in way_id order.
    fn clusters(&self, candidates: &[usize]) -> Vec<Vec<usize>> {
        let n = candidates.len();
        let mut label: Vec<usize> = (0..n).collect();
        fn root(label: &mut [usize], mut i: usize) -> usize {
            while label[i] != i {
                label[i] = label[label[i]];
                i = label[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (&self.ways[candidates[i]].geometry, &self.ways[candidates[j]].geometry);
                if geometry_distance_m(a, b) <= self.merge_radius_m {
                    let (ri, rj) = (root(&mut label, i), root(&mut label, j));
                    label[ri.max(rj)] = ri.min(rj);
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let r = root(&mut label, i);
            let g = *slot.entry(r).or_insert_with(|| {
                groups.push(Vec::new());
                groups.len() - 1
            });
            groups[g].push(candidates[i]);
        }
        groups
    }

    fn resolve(&self, record: &StreetRecord, candidates: &[usize], method: MatchMethod) -> StreetFeature {
        let mut sorted = candidates.to_vec();
        sorted.sort_unstable();
        let clusters = self.clusters(&sorted);
        let chosen = if clusters.len() == 1 {
            &clusters[0]
        } else {
            let reference = self.reference_point(record.district.as_deref());
            let nearest = sorted
                .iter()
                .copied()
                .min_by(|&a, &b| {
                    let da = haversine_m(self.centroids[a], reference);
                    let db = haversine_m(self.centroids[b], reference);
                    da.total_cmp(&db).then_with(|| self.ways[a].way_id.cmp(&self.ways[b].way_id))
                })
                .expect("candidates are non-empty");
            clusters.iter().find(|c| c.contains(&nearest)).expect("every candidate is clustered")
        };
        let geometry = match chosen.as_slice() {
            [one] => self.ways[*one].geometry.clone(),
            many => Geometry::merge(many.iter().map(|&i| &self.ways[i].geometry)),
        };
        let point = representative_point(&geometry).expect("extract geometries are non-empty");
        StreetFeature {
            record: record.clone(),
            geometry: Some(geometry),
            representative_point: Some(point),
            match_method: method,
            way_ids: chosen.iter().map(|&i| self.ways[i].way_id.clone()).collect(),
        }
    }
}

/// Exact casefolded name first, then the normalized key; unmatched
/// otherwise, including records from another city.
pub fn match_street(record: &StreetRecord, index: &OsmIndex) -> StreetFeature {
    if record.city != index.city {
        return StreetFeature::unmatched(record.clone());
    }
    if let Some(c) = index.exact.get(&casefold(&record.street_name)) {
        return index.resolve(record, c, MatchMethod::Exact);
    }
    if let Some(c) = index.normalized.get(&match_key(&record.street_name, index.language)) {
        return index.resolve(record, c, MatchMethod::Normalized);
    }
    StreetFeature::unmatched(record.clone())
}

/// Matches records in parallel; output order follows input order.
pub fn match_all(records: &[StreetRecord], index: &OsmIndex) -> Vec<StreetFeature> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(8);
    if records.len() < 64 || workers == 1 {
        return records.iter().map(|r| match_street(r, index)).collect();
    }
    let chunk = records.len().div_ceil(workers);
    std::thread::scope(|s| {
        let handles: Vec<_> = records
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|r| match_street(r, index)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("matcher thread panicked")).collect()
    })
}
