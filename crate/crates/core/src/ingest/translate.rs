use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::RawRecord;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("translation failed: {0}")]
pub struct TranslateError(pub String);

/// Text in, text out.
pub trait Translator {
    fn translate(&self, text: &str) -> Result<String, TranslateError>;
}

pub struct IdentityTranslator;

impl Translator for IdentityTranslator {
    fn translate(&self, text: &str) -> Result<String, TranslateError> {
        Ok(text.to_string())
    }
}

/// Bundled German → English dictionary of occupations and common terms.
pub const GERMAN_ENGLISH: &str = include_str!("../../data/de_en_dictionary.csv");

/// Phrase-level dictionary lookup. Lists (`,`, `;`, ` und `) are translated
/// item by item; unknown items pass through unchanged.
pub struct DictionaryTranslator {
    entries: HashMap<String, String>,
}

impl DictionaryTranslator {
    pub fn parse(text: &str) -> Result<Self, csv::Error> {
        let mut entries = HashMap::new();
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        for row in reader.records() {
            let row = row?;
            entries.insert(row[0].trim().to_lowercase(), row[1].trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn german_english() -> &'static Self {
        static DICT: OnceLock<DictionaryTranslator> = OnceLock::new();
        DICT.get_or_init(|| Self::parse(GERMAN_ENGLISH).expect("bundled dictionary is valid"))
    }

    fn lookup(&self, item: &str) -> String {
        let trimmed = item.trim();
        self.entries
            .get(&trimmed.to_lowercase())
            .cloned()
            .unwrap_or_else(|| trimmed.to_string())
    }
}

impl Translator for DictionaryTranslator {
    fn translate(&self, text: &str) -> Result<String, TranslateError> {
        if let Some(hit) = self.entries.get(&text.trim().to_lowercase()) {
            return Ok(hit.clone());
        }
        let items: Vec<String> = text
            .split([',', ';'])
            .flat_map(|part| part.split(" und "))
            .map(|item| self.lookup(item))
            .filter(|s| !s.is_empty())
            .collect();
        Ok(items.join(", "))
    }
}

/// Translates the occupation and district of a record. Names are proper
/// nouns and stay as they are. A failing field keeps its original text and
/// gains an `untranslated:<field>` flag.
pub fn translate_fields(record: &RawRecord, translator: &dyn Translator) -> RawRecord {
    let mut out = record.clone();
    for (name, field) in [
        ("occupation", &mut out.occupation),
        ("district", &mut out.district),
    ] {
        let Some(text) = field.as_deref() else {
            continue;
        };
        match translator.translate(text) {
            Ok(t) => *field = Some(t),
            Err(e) => {
                log::warn!("{}: {name}: {e}", record.street_name);
                out.flags.push(format!("untranslated:{name}"));
            }
        }
    }
    out
}
