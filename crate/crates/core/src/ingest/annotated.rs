use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use chrono::{DateTime, Utc};

use super::{IngestError, RawRecord, ATTRIBUTE_COLUMNS};
use crate::domain::{CityId, Source};
use crate::normalize::street_key;

/// All annotators' answers for one street.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotationSet {
    /// Case- and whitespace-folded street name.
    pub street_key: String,
    /// Street name as first written by an annotator.
    pub street_name: String,
    pub city: CityId,
    pub annotators: Vec<String>,
    /// Column → non-blank values in annotator order. Columns nobody filled
    /// in are absent.
    pub fields: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Imported {
    Records(Vec<RawRecord>),
    Annotations(Vec<AnnotationSet>),
}

fn required_columns(source: Source) -> Result<&'static [&'static str], IngestError> {
    match source {
        Source::Curated => Ok(&["streetname", "honoree"]),
        Source::AnnotatedCsv => Ok(&["streetname", "annotator"]),
        other => Err(IngestError::UnsupportedSource(other)),
    }
}

/// Reads a curated file (one row per street) into raw records, or an
/// annotated file (one row per street and annotator) into annotation sets
/// grouped by street, in order of first appearance.
///
/// Header names are matched case-insensitively against the canonical
/// column names; unknown columns are ignored.
pub fn import_annotated_csv(
    path: &Path,
    source: Source,
    city: CityId,
    retrieved_at: DateTime<Utc>,
) -> Result<Imported, IngestError> {
    let required = required_columns(source)?;
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let header: Vec<String> = reader
        .headers()?
        .iter()
        .map(|h| h.trim().to_lowercase())
        .collect();
    let missing: Vec<String> = required
        .iter()
        .filter(|c| !header.iter().any(|h| h == *c))
        .map(|c| c.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(IngestError::SchemaMismatch { missing });
    }
    let col = |name: &str| header.iter().position(|h| h == name);
    let street_col = col("streetname").expect("checked");
    let url = path.display().to_string();

    let mut rows = Vec::new();
    for row in reader.records() {
        let row = row?;
        if row.iter().all(str::is_empty) {
            continue;
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(IngestError::EmptyFile);
    }

    let cell = |row: &csv::StringRecord, name: &str| {
        col(name)
            .and_then(|i| row.get(i))
            .filter(|v| !v.is_empty())
            .map(str::to_string)
    };

    if source == Source::Curated {
        let records = rows
            .iter()
            .map(|row| {
                let mut r = RawRecord::new(
                    row.get(street_col).unwrap_or_default(),
                    city,
                    source,
                    retrieved_at,
                );
                r.record_id = cell(row, "record_id");
                for column in ATTRIBUTE_COLUMNS {
                    *r.field_mut(column).expect("attribute column") = cell(row, column);
                }
                r.source_url = Some(url.clone());
                r
            })
            .collect();
        return Ok(Imported::Records(records));
    }

    let mut sets: Vec<AnnotationSet> = Vec::new();
    let mut by_key: HashMap<String, usize> = HashMap::new();
    for row in &rows {
        let name = row.get(street_col).unwrap_or_default();
        let key = street_key(name);
        let idx = *by_key.entry(key.clone()).or_insert_with(|| {
            sets.push(AnnotationSet {
                street_key: key,
                street_name: name.to_string(),
                city,
                annotators: Vec::new(),
                fields: BTreeMap::new(),
            });
            sets.len() - 1
        });
        let set = &mut sets[idx];
        set.annotators
            .push(cell(row, "annotator").unwrap_or_else(|| format!("anon-{}", set.annotators.len())));
        for column in ATTRIBUTE_COLUMNS {
            if let Some(v) = cell(row, column) {
                set.fields.entry(column.to_string()).or_default().push(v);
            }
        }
    }
    Ok(Imported::Annotations(sets))
}
