use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use chrono::Datelike;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{slug_enum, CityId, OccupationGroup, ParseEnumError};

/// Earliest denomination year accepted anywhere in the dataset.
pub const MIN_YEAR: i32 = 1000;

pub fn current_year() -> i32 {
    chrono::Utc::now().year()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gender {
    Female,
    Male,
    Unknown,
}

slug_enum!(Gender, "gender", {
    Female => "female",
    Male => "male",
    Unknown => "unknown",
});

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Source {
    Wikidata,
    Wikihistory,
    AnnotatedCsv,
    Curated,
}

slug_enum!(Source, "source", {
    Wikidata => "wikidata",
    Wikihistory => "wikihistory",
    AnnotatedCsv => "annotated_csv",
    Curated => "curated",
});

/// ISO 3166-1 alpha-2 code of the honoree's country of origin.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Country {
    Code([u8; 2]),
    Unknown,
}

impl Country {
    /// Accepts any two ASCII letters; case is folded to upper.
    pub fn from_code(code: &str) -> Option<Self> {
        match code.trim().as_bytes() {
            [a, b] if a.is_ascii_alphabetic() && b.is_ascii_alphabetic() => {
                Some(Country::Code([a.to_ascii_uppercase(), b.to_ascii_uppercase()]))
            }
            _ => None,
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Country::Code(code) => std::str::from_utf8(code).expect("ascii"),
            Country::Unknown => "unknown",
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Country::Unknown)
    }
}

impl fmt::Debug for Country {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Country({})", self.as_str())
    }
}

impl fmt::Display for Country {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Country {
    type Err = ParseEnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("unknown") {
            return Ok(Country::Unknown);
        }
        Country::from_code(s).ok_or_else(|| ParseEnumError::new("country code", s))
    }
}

impl Serialize for Country {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Country {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One honorific street. Field order and serde names follow the canonical
/// CSV exchange header.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreetRecord {
    pub record_id: String,
    #[serde(rename = "streetname")]
    pub street_name: String,
    pub district: Option<String>,
    #[serde(rename = "denomination")]
    pub denomination_year: Option<i32>,
    #[serde(rename = "honoree")]
    pub honoree_name: String,
    pub gender: Gender,
    #[serde(rename = "occupation")]
    pub occupation_raw: String,
    pub occupation_group: OccupationGroup,
    pub country: Country,
    #[serde(rename = "dob")]
    pub birth_year: Option<i32>,
    #[serde(rename = "dod")]
    pub death_year: Option<i32>,
    pub honoree_url: Option<String>,
    pub image_url: Option<String>,
    pub source: Source,
    pub city: CityId,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Violation {
    pub field: &'static str,
    pub rule: String,
}

impl Violation {
    fn new(field: &'static str, rule: impl Into<String>) -> Self {
        Self {
            field,
            rule: rule.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.rule)
    }
}

/// Checks every per-record invariant. An empty list means the record is
/// valid.
pub fn validate_record(record: &StreetRecord) -> Vec<Violation> {
    validate_record_at(record, current_year())
}

pub(crate) fn validate_record_at(record: &StreetRecord, this_year: i32) -> Vec<Violation> {
    let mut out = Vec::new();
    if record.record_id.trim().is_empty() {
        out.push(Violation::new("record_id", "must be non-empty"));
    }
    if record.street_name.trim().is_empty() {
        out.push(Violation::new("streetname", "must be non-empty"));
    }
    if record.honoree_name.trim().is_empty() {
        out.push(Violation::new("honoree", "must be non-empty"));
    }
    if let (Some(birth), Some(death)) = (record.birth_year, record.death_year) {
        if birth >= death {
            out.push(Violation::new("dob", "birth_year < death_year"));
        }
    }
    if let Some(year) = record.denomination_year {
        if !(MIN_YEAR..=this_year).contains(&year) {
            out.push(Violation::new(
                "denomination",
                format!("{MIN_YEAR} <= year <= current year"),
            ));
        }
    }
    for (field, value) in [
        ("district", &record.district),
        ("honoree_url", &record.honoree_url),
        ("image_url", &record.image_url),
    ] {
        if value.as_deref().is_some_and(|v| v.trim().is_empty()) {
            out.push(Violation::new(field, "present values must be non-empty"));
        }
    }
    out
}

/// Per-record violations plus snapshot-level `record_id` uniqueness.
/// Returns `(index, violation)` pairs in input order.
pub fn validate_dataset(records: &[StreetRecord]) -> Vec<(usize, Violation)> {
    let this_year = current_year();
    let mut seen: HashMap<&str, usize> = HashMap::new();
    let mut out = Vec::new();
    for (i, r) in records.iter().enumerate() {
        out.extend(validate_record_at(r, this_year).into_iter().map(|v| (i, v)));
        if let Some(first) = seen.insert(&r.record_id, i) {
            out.push((
                i,
                Violation::new("record_id", format!("duplicates record #{first}")),
            ));
        }
    }
    out
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn sample() -> StreetRecord {
        StreetRecord {
            record_id: "paris-0001".into(),
            street_name: "Rue Victor Hugo".into(),
            district: Some("16e arrondissement".into()),
            denomination_year: Some(1885),
            honoree_name: "Victor Hugo".into(),
            gender: Gender::Male,
            occupation_raw: "writer".into(),
            occupation_group: OccupationGroup::Writers,
            country: Country::from_code("FR").unwrap(),
            birth_year: Some(1802),
            death_year: Some(1885),
            honoree_url: Some("https://en.wikipedia.org/wiki/Victor_Hugo".into()),
            image_url: None,
            source: Source::Wikidata,
            city: CityId::Paris,
        }
    }

    #[test]
    fn well_formed_record_has_no_violations() {
        assert!(validate_record(&sample()).is_empty());
    }

    #[test]
    fn death_before_birth() {
        let mut r = sample();
        r.birth_year = Some(1900);
        r.death_year = Some(1850);
        let v = validate_record(&r);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "dob");
        assert_eq!(v[0].rule, "birth_year < death_year");
    }

    #[test]
    fn paris_minimum_denomination_is_valid() {
        let mut r = sample();
        r.denomination_year = Some(1202);
        assert!(validate_record(&r).is_empty());
    }

    #[test]
    fn denomination_bounds() {
        let mut r = sample();
        r.denomination_year = Some(999);
        assert_eq!(validate_record(&r)[0].field, "denomination");
        r.denomination_year = Some(current_year() + 1);
        assert_eq!(validate_record(&r)[0].field, "denomination");
        r.denomination_year = Some(current_year());
        assert!(validate_record(&r).is_empty());
    }

    #[test]
    fn blank_names() {
        let mut r = sample();
        r.street_name = "  ".into();
        r.honoree_name = String::new();
        let fields: Vec<_> = validate_record(&r).iter().map(|v| v.field).collect();
        assert_eq!(fields, ["streetname", "honoree"]);
    }

    #[test]
    fn validation_is_pure() {
        let mut r = sample();
        r.birth_year = Some(1990);
        r.street_name.clear();
        assert_eq!(validate_record(&r), validate_record(&r));
    }

    #[test]
    fn duplicate_ids_in_dataset() {
        let a = sample();
        let mut b = sample();
        b.street_name = "Avenue Victor Hugo".into();
        let v = validate_dataset(&[a, b]);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].0, 1);
        assert_eq!(v[0].1.field, "record_id");
    }

    #[test]
    fn country_parsing() {
        assert_eq!("fr".parse::<Country>().unwrap().as_str(), "FR");
        assert_eq!("Unknown".parse::<Country>().unwrap(), Country::Unknown);
        assert!("FRA".parse::<Country>().is_err());
        assert!("F1".parse::<Country>().is_err());
    }
}
