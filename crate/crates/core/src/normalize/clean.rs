use std::collections::HashMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::{map_occupation, normalize_country, normalize_gender, parse_year};
use crate::domain::{validate_record, CityId, Gender, OccupationGroup, StreetRecord};
use crate::ingest::RawRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectionKind {
    /// Failed a hard invariant.
    Dropped,
    /// Duplicate of a richer record that was kept.
    Merged,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rejection {
    /// Position in the input list.
    pub index: usize,
    pub city: CityId,
    pub streetname: String,
    pub kind: RejectionKind,
    pub reason: String,
    /// For merges, the id of the record that absorbed this one.
    pub kept_record_id: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CleanReport {
    pub rejections: Vec<Rejection>,
    /// Non-fatal problems, as `(input index, message)`.
    pub warnings: Vec<(usize, String)>,
}

impl CleanReport {
    pub fn dropped(&self) -> usize {
        self.rejections
            .iter()
            .filter(|r| r.kind == RejectionKind::Dropped)
            .count()
    }

    pub fn merged(&self) -> usize {
        self.rejections.len() - self.dropped()
    }
}

fn collapse(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn non_blank(s: &Option<String>) -> Option<String> {
    s.as_deref().map(collapse).filter(|s| !s.is_empty())
}

/// Key under which two records of one city are the same street.
pub fn street_key(street_name: &str) -> String {
    collapse(street_name).to_lowercase()
}

/// Stable identifier derived from the city and the street key.
pub fn derive_record_id(city: CityId, street_name: &str) -> String {
    let digest = Sha256::digest(street_key(street_name).as_bytes());
    let hex: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
    format!("{city}-{hex}")
}

/// Applies every field normalizer. Returns the record and any warnings;
/// the record may still violate invariants.
pub fn normalize_record(raw: &RawRecord) -> (StreetRecord, Vec<String>) {
    let mut warnings = Vec::new();
    let mut year = |field: &str, value: &Option<String>| {
        let parsed = parse_year(value.as_deref().unwrap_or(""));
        if let Some(w) = parsed.warning {
            warnings.push(format!("{field}: {w}"));
        }
        parsed.year
    };
    let denomination_year = year("denomination", &raw.denomination);
    let birth_year = year("dob", &raw.dob);
    let death_year = year("dod", &raw.dod);

    let occupation_raw = non_blank(&raw.occupation).unwrap_or_default();
    let occupation_group = raw
        .occupation_group
        .as_deref()
        .and_then(|g| g.parse::<OccupationGroup>().ok())
        .unwrap_or_else(|| map_occupation(&occupation_raw));
    let street_name = collapse(&raw.street_name);

    let record = StreetRecord {
        record_id: derive_record_id(raw.city, &street_name),
        street_name,
        district: non_blank(&raw.district),
        denomination_year,
        honoree_name: non_blank(&raw.honoree_name).unwrap_or_default(),
        gender: raw
            .gender
            .as_deref()
            .map_or(Gender::Unknown, normalize_gender),
        occupation_raw,
        occupation_group,
        country: normalize_country(raw.country.as_deref().unwrap_or("")),
        birth_year,
        death_year,
        honoree_url: non_blank(&raw.honoree_url),
        image_url: non_blank(&raw.image_url),
        source: raw.source,
        city: raw.city,
    };
    warnings.extend(raw.flags.iter().cloned());
    (record, warnings)
}

/// Number of optional attributes carrying a real value.
pub fn populated_fields(r: &StreetRecord) -> usize {
    [
        r.district.is_some(),
        r.denomination_year.is_some(),
        r.gender != Gender::Unknown,
        !r.occupation_raw.is_empty(),
        !r.country.is_unknown(),
        r.birth_year.is_some(),
        r.death_year.is_some(),
        r.honoree_url.is_some(),
        r.image_url.is_some(),
    ]
    .into_iter()
    .filter(|b| *b)
    .count()
}

/// Normalizes, validates and deduplicates raw records.
///
/// Records breaking an invariant are dropped. Among valid records sharing
/// `(city, street key)` the one with the most populated fields is kept,
/// ties going to the earliest `retrieved_at` and then to input order.
/// Output is sorted by `record_id`.
pub fn clean_dataset(records: &[RawRecord]) -> (Vec<StreetRecord>, CleanReport) {
    let mut report = CleanReport::default();
    let mut valid: Vec<(usize, StreetRecord)> = Vec::new();

    for (index, raw) in records.iter().enumerate() {
        let (record, warnings) = normalize_record(raw);
        report
            .warnings
            .extend(warnings.into_iter().map(|w| (index, w)));
        let violations = validate_record(&record);
        if violations.is_empty() {
            valid.push((index, record));
        } else {
            report.rejections.push(Rejection {
                index,
                city: raw.city,
                streetname: raw.street_name.clone(),
                kind: RejectionKind::Dropped,
                reason: violations
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join("; "),
                kept_record_id: None,
            });
        }
    }

    let mut groups: HashMap<(CityId, String), Vec<usize>> = HashMap::new();
    for (pos, (_, r)) in valid.iter().enumerate() {
        groups
            .entry((r.city, street_key(&r.street_name)))
            .or_default()
            .push(pos);
    }

    let mut keep = vec![true; valid.len()];
    for members in groups.values().filter(|m| m.len() > 1) {
        let winner = *members
            .iter()
            .min_by(|&&a, &&b| {
                let (ia, ra) = &valid[a];
                let (ib, rb) = &valid[b];
                populated_fields(rb)
                    .cmp(&populated_fields(ra))
                    .then(records[*ia].retrieved_at.cmp(&records[*ib].retrieved_at))
                    .then(ia.cmp(ib))
            })
            .expect("non-empty group");
        let kept_id = valid[winner].1.record_id.clone();
        for &m in members.iter().filter(|&&m| m != winner) {
            keep[m] = false;
            let (index, r) = &valid[m];
            report.rejections.push(Rejection {
                index: *index,
                city: r.city,
                streetname: records[*index].street_name.clone(),
                kind: RejectionKind::Merged,
                reason: format!("duplicate of input #{}", valid[winner].0),
                kept_record_id: Some(kept_id.clone()),
            });
        }
    }
    report.rejections.sort_by_key(|r| r.index);

    let mut out: Vec<StreetRecord> = valid
        .into_iter()
        .zip(keep)
        .filter_map(|((_, r), k)| k.then_some(r))
        .collect();
    out.sort_by(|a, b| a.record_id.cmp(&b.record_id));
    (out, report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Source, validate_dataset};
    use chrono::{Duration, TimeZone, Utc};

    fn raw(name: &str, honoree: Option<&str>) -> RawRecord {
        let at = Utc.with_ymd_and_hms(2021, 1, 1, 0, 0, 0).unwrap();
        let mut r = RawRecord::new(name, CityId::Paris, Source::Wikidata, at);
        r.honoree_name = honoree.map(str::to_string);
        r.occupation = Some("writer".into());
        r
    }

    /// 12 records: 2 without honoree, one duplicate pair.
    fn defective_fixture() -> Vec<RawRecord> {
        let mut v: Vec<RawRecord> = (0..9)
            .map(|i| raw(&format!("Rue Numéro {i}"), Some(&format!("Person {i}"))))
            .collect();
        v.push(raw("Rue sans Nom", None));
        v.push(raw("Rue Vide", Some("   ")));
        v.push(raw("rue  numéro 3", Some("Person 3")));
        v
    }

    #[test]
    fn fixture_with_known_defects() {
        let input = defective_fixture();
        assert_eq!(input.len(), 12);
        let (out, report) = clean_dataset(&input);
        assert_eq!(out.len(), 9);
        assert_eq!(report.rejections.len(), 3);
        assert_eq!(report.dropped(), 2);
        assert_eq!(report.merged(), 1);
        assert!(report.rejections[0].reason.contains("honoree"));
        assert_eq!(out.len() + report.rejections.len(), input.len());
        assert!(validate_dataset(&out).is_empty());
    }

    #[test]
    fn clean_input_is_identity_sized() {
        let input: Vec<_> = (0..5)
            .map(|i| raw(&format!("Avenue {i}"), Some("Someone")))
            .collect();
        let (out, report) = clean_dataset(&input);
        assert_eq!(out.len(), 5);
        assert!(report.rejections.is_empty());
    }

    #[test]
    fn richer_duplicate_is_kept() {
        let poor = raw("Rue Colette", Some("Colette"));
        let mut rich = raw("Rue Colette", Some("Colette"));
        rich.gender = Some("female".into());
        rich.country = Some("France".into());
        rich.dob = Some("1873".into());
        let (out, report) = clean_dataset(&[poor, rich]);
        assert_eq!(out.len(), 1);
        assert_eq!(populated_fields(&out[0]), 4);
        assert_eq!(report.rejections[0].index, 0);
        assert_eq!(report.rejections[0].kept_record_id.as_deref(), Some(out[0].record_id.as_str()));
    }

    #[test]
    fn equal_richness_prefers_earliest_retrieval() {
        let mut late = raw("Rue Colette", Some("Late"));
        late.retrieved_at += Duration::days(1);
        let early = raw("Rue Colette", Some("Early"));
        let (out, _) = clean_dataset(&[late, early]);
        assert_eq!(out[0].honoree_name, "Early");
    }

    #[test]
    fn birth_after_death_is_dropped() {
        let mut r = raw("Rue X", Some("X"));
        r.dob = Some("1900".into());
        r.dod = Some("1850".into());
        let (out, report) = clean_dataset(&[r]);
        assert!(out.is_empty());
        assert!(report.rejections[0].reason.contains("birth_year < death_year"));
    }

    #[test]
    fn same_name_in_two_cities_is_not_a_duplicate() {
        let a = raw("Mozartstraße", Some("Mozart"));
        let mut b = a.clone();
        b.city = CityId::Vienna;
        let (out, report) = clean_dataset(&[a, b]);
        assert_eq!(out.len(), 2);
        assert!(report.rejections.is_empty());
    }

    #[test]
    fn fields_are_normalized() {
        let mut r = raw(" Rue  de Rivoli ", Some("Battle of Rivoli"));
        r.gender = Some("Weiblich".into());
        r.country = Some("Austria-Hungary".into());
        r.denomination = Some("53".into());
        let (rec, warnings) = normalize_record(&r);
        assert_eq!(rec.street_name, "Rue de Rivoli");
        assert_eq!(rec.gender, Gender::Female);
        assert_eq!(rec.country.as_str(), "AT");
        assert_eq!(rec.occupation_group, OccupationGroup::Writers);
        assert_eq!(rec.denomination_year, None);
        assert_eq!(warnings.len(), 1);
    }

    #[test]
    fn record_ids_are_stable() {
        assert_eq!(
            derive_record_id(CityId::Paris, "Rue de Rivoli"),
            derive_record_id(CityId::Paris, " rue  de RIVOLI")
        );
        assert_ne!(
            derive_record_id(CityId::Paris, "Rue de Rivoli"),
            derive_record_id(CityId::Vienna, "Rue de Rivoli")
        );
    }
}
