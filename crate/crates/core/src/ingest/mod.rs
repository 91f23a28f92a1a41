//! Source adapters producing [`RawRecord`]s, plus multi-annotator conflict
//! resolution and field translation.
//!
//! Fixture layout used by tests and the sample pipeline:
//! `fixtures/<city>/<source>/*` with `<source>` one of `wikidata`,
//! `wikihistory`, `csv`, and the OSM extract under `fixtures/<city>/osm/`.

mod annotated;
mod conflict;
mod crawler;
mod http;
mod raw;
mod translate;
mod wikidata;
mod wikipage;

pub use annotated::{import_annotated_csv, AnnotationSet, Imported};
pub use conflict::{resolve_conflicts, vote_key};
pub use crawler::Crawler;
pub use http::{Fetcher, RetryPolicy};
pub use raw::{read_raw_csv, write_raw_csv, RawRecord, ATTRIBUTE_COLUMNS, RAW_HEADER};
pub use translate::{
    translate_fields, DictionaryTranslator, IdentityTranslator, TranslateError, Translator,
};
pub use wikidata::{fetch_wikidata_streets, parse_sparql_results, street_query, WikidataSource};
pub use wikipage::{parse_wiki_street_page, PageContext};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("source unavailable: {url} ({attempts} attempts): {message}")]
    SourceUnavailable {
        url: String,
        attempts: u32,
        message: String,
    },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("not a street page: {0}")]
    NotAStreetPage(String),
    #[error("schema mismatch: missing column(s) {}", missing.join(", "))]
    SchemaMismatch { missing: Vec<String> },
    #[error("file has no data rows")]
    EmptyFile,
    #[error("{0} is not a CSV source")]
    UnsupportedSource(crate::domain::Source),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
