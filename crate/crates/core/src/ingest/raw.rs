use std::io::{Read, Write};

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::domain::{CityId, Source};

/// A street as a source delivered it, before any normalization. Every
/// attribute is free text; only the street name, city and provenance are
/// guaranteed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawRecord {
    pub record_id: Option<String>,
    pub street_name: String,
    pub city: CityId,
    pub district: Option<String>,
    pub denomination: Option<String>,
    pub honoree_name: Option<String>,
    pub gender: Option<String>,
    pub occupation: Option<String>,
    pub occupation_group: Option<String>,
    pub country: Option<String>,
    pub dob: Option<String>,
    pub dod: Option<String>,
    pub honoree_url: Option<String>,
    pub image_url: Option<String>,
    pub source: Source,
    pub source_url: Option<String>,
    pub retrieved_at: DateTime<Utc>,
    /// Review and warning flags attached along the way, e.g.
    /// `review:country` or `untranslated:occupation`.
    pub flags: Vec<String>,
}

impl RawRecord {
    pub fn new(
        street_name: impl Into<String>,
        city: CityId,
        source: Source,
        retrieved_at: DateTime<Utc>,
    ) -> Self {
        Self {
            record_id: None,
            street_name: street_name.into(),
            city,
            district: None,
            denomination: None,
            honoree_name: None,
            gender: None,
            occupation: None,
            occupation_group: None,
            country: None,
            dob: None,
            dod: None,
            honoree_url: None,
            image_url: None,
            source,
            source_url: None,
            retrieved_at,
            flags: Vec::new(),
        }
    }

    /// Mutable access to an attribute by its canonical column name.
    pub fn field_mut(&mut self, column: &str) -> Option<&mut Option<String>> {
        Some(match column {
            "district" => &mut self.district,
            "denomination" => &mut self.denomination,
            "honoree" => &mut self.honoree_name,
            "gender" => &mut self.gender,
            "occupation" => &mut self.occupation,
            "occupation_group" => &mut self.occupation_group,
            "country" => &mut self.country,
            "dob" => &mut self.dob,
            "dod" => &mut self.dod,
            "honoree_url" => &mut self.honoree_url,
            "image_url" => &mut self.image_url,
            _ => return None,
        })
    }
}

/// Columns that carry street/honoree attributes (everything except the
/// street name, identifiers and provenance).
pub const ATTRIBUTE_COLUMNS: &[&str] = &[
    "district",
    "denomination",
    "honoree",
    "gender",
    "occupation",
    "occupation_group",
    "country",
    "dob",
    "dod",
    "honoree_url",
    "image_url",
];

/// Header of the raw-record CSV: the canonical columns plus provenance.
pub const RAW_HEADER: &str = "record_id,streetname,district,denomination,honoree,gender,occupation,occupation_group,country,dob,dod,honoree_url,image_url,source,city,source_url,retrieved_at,flags";

#[derive(Serialize, Deserialize)]
struct RawRow {
    record_id: Option<String>,
    streetname: String,
    district: Option<String>,
    denomination: Option<String>,
    honoree: Option<String>,
    gender: Option<String>,
    occupation: Option<String>,
    occupation_group: Option<String>,
    country: Option<String>,
    dob: Option<String>,
    dod: Option<String>,
    honoree_url: Option<String>,
    image_url: Option<String>,
    source: Source,
    city: CityId,
    source_url: Option<String>,
    retrieved_at: DateTime<Utc>,
    flags: Option<String>,
}

impl From<&RawRecord> for RawRow {
    fn from(r: &RawRecord) -> Self {
        Self {
            record_id: r.record_id.clone(),
            streetname: r.street_name.clone(),
            district: r.district.clone(),
            denomination: r.denomination.clone(),
            honoree: r.honoree_name.clone(),
            gender: r.gender.clone(),
            occupation: r.occupation.clone(),
            occupation_group: r.occupation_group.clone(),
            country: r.country.clone(),
            dob: r.dob.clone(),
            dod: r.dod.clone(),
            honoree_url: r.honoree_url.clone(),
            image_url: r.image_url.clone(),
            source: r.source,
            city: r.city,
            source_url: r.source_url.clone(),
            retrieved_at: r.retrieved_at,
            flags: (!r.flags.is_empty()).then(|| r.flags.join(";")),
        }
    }
}

impl From<RawRow> for RawRecord {
    fn from(r: RawRow) -> Self {
        Self {
            record_id: r.record_id,
            street_name: r.streetname,
            city: r.city,
            district: r.district,
            denomination: r.denomination,
            honoree_name: r.honoree,
            gender: r.gender,
            occupation: r.occupation,
            occupation_group: r.occupation_group,
            country: r.country,
            dob: r.dob,
            dod: r.dod,
            honoree_url: r.honoree_url,
            image_url: r.image_url,
            source: r.source,
            source_url: r.source_url,
            retrieved_at: r.retrieved_at,
            flags: r
                .flags
                .map(|f| f.split(';').map(str::to_string).collect())
                .unwrap_or_default(),
        }
    }
}

pub fn write_raw_csv<W: Write>(writer: W, records: &[RawRecord]) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(RAW_HEADER.split(','))?;
    }
    for r in records {
        w.serialize(RawRow::from(r))?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_raw_csv<R: Read>(reader: R) -> csv::Result<Vec<RawRecord>> {
    csv::Reader::from_reader(reader)
        .deserialize::<RawRow>()
        .map(|r| r.map(RawRecord::from))
        .collect()
}
