//! Deterministic synthetic data for tests: street features, OSM extracts
//! and query filters.

use std::collections::BTreeSet;

use honorifics_core::domain::{
    CityConfig, CityId, Country, Gender, LonLat, OccupationGroup, Source, StreetRecord, ThemeLayer,
};
use honorifics_core::geomatch::{representative_point, Geometry, MatchMethod, NamedWay, StreetFeature};
use honorifics_core::store::QueryFilter;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const COUNTRIES: [&str; 7] = ["FR", "AT", "GB", "US", "DE", "IT", "unknown"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A minimal valid record.
pub fn record(city: CityId, record_id: &str, street_name: &str) -> StreetRecord {
    StreetRecord {
        record_id: record_id.into(),
        street_name: street_name.into(),
        district: None,
        denomination_year: None,
        honoree_name: format!("Honoree of {street_name}"),
        gender: Gender::Unknown,
        occupation_raw: String::new(),
        occupation_group: OccupationGroup::Other,
        country: Country::Unknown,
        birth_year: None,
        death_year: None,
        honoree_url: None,
        image_url: None,
        source: Source::Curated,
        city,
    }
}

/// Short east-west segment starting at `origin`.
pub fn segment(origin: LonLat, length_deg: f64) -> Geometry {
    Geometry::LineString(vec![origin, LonLat::new(origin.lon + length_deg, origin.lat)])
}

pub fn matched(record: StreetRecord, geometry: Geometry, way_id: &str) -> StreetFeature {
    let p = representative_point(&geometry).expect("non-empty");
    StreetFeature {
        record,
        geometry: Some(geometry),
        representative_point: Some(p),
        match_method: MatchMethod::Exact,
        way_ids: vec![way_id.into()],
    }
}

/// `n` valid matched features spread over the four cities. About a tenth
/// lack a denomination year.
pub fn synthetic_features(n: usize, seed: u64) -> Vec<StreetFeature> {
    let mut r = rng(seed);
    (0..n)
        .map(|i| {
            let city = *CityId::ALL.choose(&mut r).unwrap();
            let cfg = CityConfig::builtin(city);
            let mut rec = record(city, &format!("{city}-{i:06}"), &format!("Synthetic Street {i}"));
            if r.gen_bool(0.9) {
                rec.denomination_year = Some(r.gen_range(cfg.year_range.0..=cfg.year_range.1));
            }
            rec.gender = *Gender::ALL.choose(&mut r).unwrap();
            rec.occupation_group = *OccupationGroup::ALL.choose(&mut r).unwrap();
            rec.occupation_raw = rec.occupation_group.label().to_string();
            rec.country = COUNTRIES.choose(&mut r).unwrap().parse().unwrap();
            if r.gen_bool(0.5) {
                let b = r.gen_range(1000..1950);
                rec.birth_year = Some(b);
                rec.death_year = Some(b + r.gen_range(1..100));
            }
            let origin = LonLat::new(
                cfg.center.lon + r.gen_range(-0.05..0.05),
                cfg.center.lat + r.gen_range(-0.05..0.05),
            );
            matched(rec, segment(origin, r.gen_range(0.0005..0.01)), &format!("w{i}"))
        })
        .collect()
}

/// Values a theme can take in data from [`synthetic_features`], plus one
/// that never occurs.
pub fn theme_domain(theme: ThemeLayer) -> Vec<String> {
    match theme {
        ThemeLayer::Occupation => OccupationGroup::ALL.iter().map(|g| g.as_str().to_string()).collect(),
        ThemeLayer::Gender => Gender::ALL.iter().map(|g| g.as_str().to_string()).collect(),
        ThemeLayer::Country => COUNTRIES.iter().chain(&["JP"]).map(|c| c.to_string()).collect(),
        ThemeLayer::Period => {
            let mut v: Vec<String> = (1800..1830).map(|y| y.to_string()).collect();
            v.push("unknown".into());
            v
        }
    }
}

/// Random valid filter: sometimes a year range (possibly empty of data),
/// sometimes a tag set drawn from the theme's domain.
pub fn random_filter(r: &mut impl Rng) -> QueryFilter {
    let city = *CityId::ALL.choose(r).unwrap();
    let theme = *ThemeLayer::ALL.choose(r).unwrap();
    let mut f = QueryFilter::new(city, theme);
    if r.gen_bool(0.6) {
        let a = r.gen_range(1000..2030);
        let b = r.gen_range(1000..2030);
        f = f.years(a.min(b), a.max(b));
    }
    if r.gen_bool(0.6) {
        let domain = theme_domain(theme);
        let k = r.gen_range(0..=domain.len().min(5));
        let tags: BTreeSet<String> = domain.choose_multiple(r, k).cloned().collect();
        f.tags = Some(tags);
    }
    f
}

/// Perturbs a street name so that only normalized matching can find it,
/// using abbreviations the city's rule set knows: a spelled-out type
/// becomes its short form, otherwise spaces become hyphens.
pub fn abbreviate(name: &str, city: CityId) -> String {
    let boulevard = if city == CityId::Paris { "Bd " } else { "Blvd " };
    let pairs = [(" Street", " St"), (" Avenue", " Ave"), ("Boulevard ", boulevard), ("straße", "str.")];
    for (long, short) in pairs {
        if name.contains(long) {
            return name.replacen(long, short, 1);
        }
    }
    name.replace(' ', "-")
}

/// Synthetic extract for `city`: `n` ways with distinct names, each a
/// short segment, laid on a grid around the city center.
pub fn synthetic_ways(city: CityId, n: usize) -> Vec<NamedWay> {
    let cfg = CityConfig::builtin(city);
    let kinds = ["Street", "Avenue", "Boulevard", "Place", "Lane"];
    (0..n)
        .map(|i| {
            let kind = kinds[i % kinds.len()];
            let name = match kind {
                "Boulevard" | "Place" => format!("{kind} Person{i:03}"),
                _ => format!("Person{i:03} {kind}"),
            };
            let origin = LonLat::new(
                cfg.center.lon + (i % 10) as f64 * 0.01 - 0.05,
                cfg.center.lat + (i / 10) as f64 * 0.01 - 0.05,
            );
            NamedWay { way_id: format!("way/{:04}", 1000 + i), name, geometry: segment(origin, 0.002), district: None }
        })
        .collect()
}
