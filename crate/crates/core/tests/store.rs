use std::collections::{BTreeMap, BTreeSet};

use honorifics_core::domain::{CityConfig, CityId, Gender, StreetRecord, ThemeLayer};
use honorifics_core::geomatch::features::to_feature_collection;
use honorifics_core::store::{FileStore, QueryFilter, Snapshot, SnapshotHandle, SnapshotStore, StoreError};
use honorifics_testkit as kit;
use proptest::prelude::*;
use rand::Rng;

/// Linear scan written against the raw record fields.
fn oracle(features: &[honorifics_core::geomatch::StreetFeature], f: &QueryFilter) -> Vec<String> {
    let mut out: Vec<String> = features
        .iter()
        .map(|x| &x.record)
        .filter(|r| r.city == f.city)
        .filter(|r| match f.year_range {
            None => true,
            Some((a, b)) => matches!(r.denomination_year, Some(y) if y >= a && y <= b),
        })
        .filter(|r| match &f.tags {
            None => true,
            Some(tags) => {
                let v = match f.theme {
                    ThemeLayer::Occupation => r.occupation_group.to_string(),
                    ThemeLayer::Gender => r.gender.to_string(),
                    ThemeLayer::Country => r.country.to_string(),
                    ThemeLayer::Period => r.denomination_year.map(|y| y.to_string()).unwrap_or("unknown".into()),
                };
                tags.contains(&v)
            }
        })
        .map(|r| r.record_id.clone())
        .collect();
    out.sort();
    out
}

fn ids(hits: &[&honorifics_core::geomatch::StreetFeature]) -> Vec<String> {
    hits.iter().map(|f| f.record.record_id.clone()).collect()
}

#[test]
fn query_equals_linear_scan() {
    let features = kit::synthetic_features(1000, 7);
    let snap = Snapshot::new(features.clone(), CityConfig::builtins()).unwrap();
    let mut r = kit::rng(11);
    let mut nonempty = 0;
    for _ in 0..200 {
        let f = kit::random_filter(&mut r);
        let got = ids(&snap.query(&f).unwrap());
        assert_eq!(got, oracle(&features, &f), "{f:?}");
        nonempty += usize::from(!got.is_empty());
    }
    assert!(nonempty > 50);
}

#[test]
fn monotonicity() {
    let features = kit::synthetic_features(1000, 8);
    let snap = Snapshot::new(features, CityConfig::builtins()).unwrap();
    let mut r = kit::rng(12);
    for _ in 0..200 {
        let f = kit::random_filter(&mut r);
        let base = snap.query(&f).unwrap().len();
        if let Some(tags) = f.tags.as_ref().filter(|t| !t.is_empty()) {
            let domain = kit::theme_domain(f.theme);
            let extra = &domain[r.gen_range(0..domain.len())];
            let mut g = f.clone();
            let mut more: BTreeSet<String> = tags.clone();
            more.insert(extra.clone());
            g.tags = Some(more);
            assert!(snap.query(&g).unwrap().len() >= base);
            let mut h = f.clone();
            let mut fewer = tags.clone();
            fewer.pop_first();
            if !fewer.is_empty() {
                h.tags = Some(fewer);
                assert!(snap.query(&h).unwrap().len() <= base);
            }
        }
        if let Some((a, b)) = f.year_range {
            let wide = QueryFilter { year_range: Some((a - 50, b + 50)), ..f.clone() };
            assert!(snap.query(&wide).unwrap().len() >= base);
        }
    }
}

#[test]
fn stats_totals_match_city_query() {
    let features = kit::synthetic_features(500, 9);
    let snap = Snapshot::new(features, CityConfig::builtins()).unwrap();
    for city in CityId::ALL {
        let total = snap.query(&QueryFilter::new(*city, ThemeLayer::Gender)).unwrap().len();
        for theme in ThemeLayer::ALL {
            assert_eq!(snap.stats(*city, *theme).unwrap().values().sum::<usize>(), total);
        }
    }
}

fn seven_streets() -> Snapshot {
    let features = (0..7)
        .map(|i| {
            let mut r: StreetRecord = kit::record(CityId::Vienna, &format!("v{i}"), &format!("Gasse {i}"));
            r.gender = if i < 4 { Gender::Female } else { Gender::Male };
            r.denomination_year = Some(1850 + 5 * i);
            kit::matched(r, kit::segment(honorifics_core::domain::LonLat::new(16.37, 48.2 + i as f64 * 0.01), 0.001), "w")
        })
        .collect();
    Snapshot::new(features, CityConfig::builtins()).unwrap()
}

#[test]
fn stats_examples() {
    let snap = seven_streets();
    let expected = BTreeMap::from([("female".to_string(), 4), ("male".to_string(), 3)]);
    assert_eq!(snap.stats(CityId::Vienna, ThemeLayer::Gender).unwrap(), expected);
    assert!(snap.stats(CityId::Paris, ThemeLayer::Gender).unwrap().is_empty());
    let one = Snapshot::new(vec![kit::synthetic_features(1, 3).remove(0)], CityConfig::builtins()).unwrap();
    let c = one.features()[0].record.city;
    assert_eq!(one.stats(c, ThemeLayer::Occupation).unwrap().values().copied().collect::<Vec<_>>(), [1]);
}

#[test]
fn year_range_and_tag_examples() {
    let snap = seven_streets();
    let f = QueryFilter::new(CityId::Vienna, ThemeLayer::Period).years(1853, 1870);
    assert_eq!(ids(&snap.query(&f).unwrap()), ["v1", "v2", "v3", "v4"]);
    let none = QueryFilter::new(CityId::Vienna, ThemeLayer::Occupation).tags(["writers"]);
    assert!(snap.query(&none).unwrap().is_empty());
    assert_eq!(snap.query(&QueryFilter::new(CityId::Vienna, ThemeLayer::Period)).unwrap().len(), 7);
}

#[test]
fn unknown_city_and_bad_filters() {
    let only_paris = Snapshot::new(Vec::new(), vec![CityConfig::builtin(CityId::Paris)]).unwrap();
    let f = QueryFilter::new(CityId::London, ThemeLayer::Gender);
    assert!(matches!(only_paris.query(&f), Err(StoreError::UnknownCity(CityId::London))));
    assert!(matches!(only_paris.stats(CityId::London, ThemeLayer::Gender), Err(StoreError::UnknownCity(_))));
    let bad = QueryFilter::new(CityId::Paris, ThemeLayer::Gender).tags(["divers"]);
    assert!(matches!(only_paris.query(&bad), Err(StoreError::InvalidFilter(_))));
}

#[test]
fn random_street_examples() {
    let snap = seven_streets();
    let single = QueryFilter::new(CityId::Vienna, ThemeLayer::Period).years(1850, 1850);
    assert_eq!(snap.random_street(&single, None).unwrap().record.record_id, "v0");
    let nothing = QueryFilter::new(CityId::Vienna, ThemeLayer::Period).years(1000, 1001);
    assert!(matches!(snap.random_street(&nothing, Some(1)), Err(StoreError::NoMatch)));
    let all = QueryFilter::new(CityId::Vienna, ThemeLayer::Gender);
    for seed in 0..20 {
        assert_eq!(
            snap.random_street(&all, Some(seed)).unwrap().record.record_id,
            snap.random_street(&all, Some(seed)).unwrap().record.record_id
        );
    }
}

#[test]
fn invalid_snapshot_names_features() {
    let mut features = kit::synthetic_features(5, 1);
    features[2].record.honoree_name = " ".into();
    features[4].record.record_id = features[0].record.record_id.clone();
    match Snapshot::new(features, CityConfig::builtins()) {
        Err(StoreError::InvalidSnapshot(d)) => {
            let idx: Vec<usize> = d.iter().map(|x| x.index).collect();
            assert_eq!(idx, [2, 4]);
        }
        other => panic!("{other:?}"),
    }
    let fc = to_feature_collection(&kit::synthetic_features(100, 2));
    assert_eq!(Snapshot::from_feature_collection(&fc).unwrap().len(), 100);
    let empty = to_feature_collection(&[]);
    assert_eq!(Snapshot::from_feature_collection(&empty).unwrap().len(), 0);
    let mut broken = fc.clone();
    broken.features[3].properties.as_mut().unwrap().remove("honoree");
    match Snapshot::from_feature_collection(&broken) {
        Err(StoreError::InvalidSnapshot(d)) => assert_eq!(d[0].index, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn file_store_round_trip_and_handle_swap() {
    let dir = tempfile::tempdir().unwrap();
    let store = FileStore::new(dir.path().join("db/streets.json"));
    let snap = Snapshot::new(kit::synthetic_features(50, 4), CityConfig::builtins()).unwrap();
    store.save(&snap).unwrap();
    let back = store.load().unwrap();
    assert_eq!(back.features(), snap.features());
    let handle = SnapshotHandle::empty();
    assert!(handle.current().is_none());
    handle.replace(back);
    let first = handle.current().unwrap();
    handle.replace(Snapshot::new(Vec::new(), CityConfig::builtins()).unwrap());
    assert_eq!(first.len(), 50);
    assert_eq!(handle.current().unwrap().len(), 0);
    std::fs::write(store.path(), "{}").unwrap();
    assert!(matches!(store.load(), Err(StoreError::Corrupt(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]
    #[test]
    fn seeded_draw_is_a_member(seed in any::<u64>(), data_seed in 0u64..50) {
        let features = kit::synthetic_features(60, data_seed);
        let snap = Snapshot::new(features.clone(), CityConfig::builtins()).unwrap();
        let mut r = kit::rng(seed);
        let f = kit::random_filter(&mut r);
        let expect = oracle(&features, &f);
        match snap.random_street(&f, Some(seed)) {
            Ok(x) => prop_assert!(expect.contains(&x.record.record_id)),
            Err(StoreError::NoMatch) => prop_assert!(expect.is_empty()),
            Err(e) => prop_assert!(false, "{e}"),
        }
    }
}
