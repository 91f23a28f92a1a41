use std::collections::{BTreeMap, HashMap};
use std::fmt;

use geojson::FeatureCollection;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{QueryFilter, StoreError};
use crate::domain::{validate_record, CityConfig, CityId, ThemeLayer};
use crate::geomatch::features::{from_feature, to_feature_collection};
use crate::geomatch::StreetFeature;

/// One problem found while loading a snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub index: usize,
    pub record_id: Option<String>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.record_id {
            Some(id) => write!(f, "feature {} ({id}): {}", self.index, self.message),
            None => write!(f, "feature {}: {}", self.index, self.message),
        }
    }
}

#[derive(Debug, Default)]
struct CityIndex {
    /// Ascending positions into `Snapshot::features`.
    members: Vec<usize>,
    by_year: BTreeMap<i32, Vec<usize>>,
    by_theme: HashMap<ThemeLayer, HashMap<String, Vec<usize>>>,
}

/// Immutable indexed set of matched streets.
///
/// Features are held in record_id order and every index list is ascending,
/// so merged index hits come out in record_id order without sorting by key.
#[derive(Debug, Default)]
pub struct Snapshot {
    features: Vec<StreetFeature>,
    cities: BTreeMap<CityId, CityConfig>,
    index: HashMap<CityId, CityIndex>,
}

fn intersect(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j, mut out) = (0, 0, Vec::new());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn union<'a>(lists: impl Iterator<Item = &'a Vec<usize>>) -> Vec<usize> {
    let mut out: Vec<usize> = lists.flatten().copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl Snapshot {
    /// Builds a snapshot over the given cities. Every feature must be
    /// matched, satisfy the record invariants, belong to a listed city and
    /// carry a unique record_id.
    pub fn new(mut features: Vec<StreetFeature>, cities: Vec<CityConfig>) -> Result<Self, StoreError> {
        let cities: BTreeMap<CityId, CityConfig> = cities.into_iter().map(|c| (c.city, c)).collect();
        let mut diagnostics = Vec::new();
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (index, f) in features.iter().enumerate() {
            let mut problem = |message: String| {
                diagnostics.push(Diagnostic { index, record_id: Some(f.record.record_id.clone()), message })
            };
            for v in validate_record(&f.record) {
                problem(format!("{}: {}", v.field, v.rule));
            }
            if !f.is_matched() || f.geometry.is_none() || f.representative_point.is_none() {
                problem("feature has no geometry".into());
            }
            if !cities.contains_key(&f.record.city) {
                problem(format!("city {} is not registered", f.record.city));
            }
            if let Some(first) = seen.insert(&f.record.record_id, index) {
                problem(format!("record_id duplicates feature {first}"));
            }
        }
        if !diagnostics.is_empty() {
            return Err(StoreError::InvalidSnapshot(diagnostics));
        }
        features.sort_by(|a, b| a.record.record_id.cmp(&b.record.record_id));

        let mut index: HashMap<CityId, CityIndex> = cities.keys().map(|c| (*c, CityIndex::default())).collect();
        for (i, f) in features.iter().enumerate() {
            let r = &f.record;
            let ci = index.get_mut(&r.city).expect("cities were checked");
            ci.members.push(i);
            if let Some(y) = r.denomination_year {
                ci.by_year.entry(y).or_default().push(i);
            }
            for theme in ThemeLayer::ALL {
                ci.by_theme.entry(*theme).or_default().entry(r.theme_value(*theme)).or_default().push(i);
            }
        }
        Ok(Snapshot { features, cities, index })
    }

    /// Loads matcher output over the built-in city registry.
    pub fn from_feature_collection(fc: &FeatureCollection) -> Result<Self, StoreError> {
        Self::from_feature_collection_with(fc, CityConfig::builtins())
    }

    pub fn from_feature_collection_with(fc: &FeatureCollection, cities: Vec<CityConfig>) -> Result<Self, StoreError> {
        let mut features = Vec::with_capacity(fc.features.len());
        let mut diagnostics = Vec::new();
        for (index, f) in fc.features.iter().enumerate() {
            match from_feature(f) {
                Ok(sf) => features.push(sf),
                Err(message) => {
                    let record_id = f
                        .property("record_id")
                        .and_then(|v| v.as_str())
                        .map(String::from);
                    diagnostics.push(Diagnostic { index, record_id, message });
                }
            }
        }
        if !diagnostics.is_empty() {
            return Err(StoreError::InvalidSnapshot(diagnostics));
        }
        Self::new(features, cities)
    }

    pub fn to_feature_collection(&self) -> FeatureCollection {
        to_feature_collection(&self.features)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    /// Registered cities in id order.
    pub fn cities(&self) -> impl Iterator<Item = &CityConfig> {
        self.cities.values()
    }

    pub fn city(&self, city: CityId) -> Result<&CityConfig, StoreError> {
        self.cities.get(&city).ok_or(StoreError::UnknownCity(city))
    }

    pub fn city_count(&self, city: CityId) -> Result<usize, StoreError> {
        Ok(self.city_index(city)?.members.len())
    }

    /// All features in record_id order.
    pub fn features(&self) -> &[StreetFeature] {
        &self.features
    }

    fn city_index(&self, city: CityId) -> Result<&CityIndex, StoreError> {
        self.index.get(&city).ok_or(StoreError::UnknownCity(city))
    }

    /// Features admitted by `filter`, in record_id order. Streets without a
    /// denomination year are excluded whenever a year range is set.
    pub fn query(&self, filter: &QueryFilter) -> Result<Vec<&StreetFeature>, StoreError> {
        let filter = filter.validated()?;
        let ci = self.city_index(filter.city)?;
        let by_year = filter.year_range.map(|(from, to)| union(ci.by_year.range(from..=to).map(|(_, v)| v)));
        let by_tag = filter.tags.as_ref().map(|tags| {
            let values = ci.by_theme.get(&filter.theme);
            union(tags.iter().filter_map(|t| values.and_then(|m| m.get(t))))
        });
        let hits = match (by_year, by_tag) {
            (None, None) => ci.members.clone(),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => intersect(&a, &b),
        };
        Ok(hits.into_iter().map(|i| &self.features[i]).collect())
    }

    /// Uniform draw from `query(filter)`. With a seed the draw is
    /// reproducible; without one it uses OS entropy.
    pub fn random_street(&self, filter: &QueryFilter, seed: Option<u64>) -> Result<&StreetFeature, StoreError> {
        let hits = self.query(filter)?;
        if hits.is_empty() {
            return Err(StoreError::NoMatch);
        }
        let mut rng = match seed {
            Some(s) => ChaCha8Rng::seed_from_u64(s),
            None => ChaCha8Rng::from_entropy(),
        };
        Ok(hits[rng.gen_range(0..hits.len())])
    }

    /// Feature count per theme value over one city. Counts sum to the
    /// city's feature total.
    pub fn stats(&self, city: CityId, theme: ThemeLayer) -> Result<BTreeMap<String, usize>, StoreError> {
        let ci = self.city_index(city)?;
        Ok(ci
            .by_theme
            .get(&theme)
            .map(|m| m.iter().map(|(k, v)| (k.clone(), v.len())).collect())
            .unwrap_or_default())
    }

    /// Earliest and latest denomination year among a city's features.
    pub fn year_span(&self, city: CityId) -> Result<Option<(i32, i32)>, StoreError> {
        let ci = self.city_index(city)?;
        Ok(ci.by_year.keys().next().zip(ci.by_year.keys().next_back()).map(|(a, b)| (*a, *b)))
    }
}
