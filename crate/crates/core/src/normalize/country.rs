//! Country names → ISO 3166-1 alpha-2.
//!
//! Historical states resolve by the successor-state rule: a state maps to
//! the present-day country that holds its capital (Austria-Hungary → AT,
//! Kingdom of Prussia → DE, Ottoman Empire → TR).

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use crate::domain::Country;

pub const COUNTRY_TABLE: &str = include_str!("../../data/countries.csv");
pub const HISTORICAL_TABLE: &str = include_str!("../../data/historical_countries.csv");

struct CountryIndex {
    codes: HashSet<String>,
    names: HashMap<String, String>,
}

fn fold(s: &str) -> String {
    let s = s.trim().to_lowercase().replace(['–', '—', '‑'], "-").replace('’', "'");
    let s = s.trim_matches(|c: char| c == '.' || c == ',' || c.is_whitespace());
    let s = s.strip_prefix("the ").unwrap_or(s);
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

fn index() -> &'static CountryIndex {
    static INDEX: OnceLock<CountryIndex> = OnceLock::new();
    INDEX.get_or_init(|| {
        let mut codes = HashSet::new();
        let mut names = HashMap::new();
        for row in reader(COUNTRY_TABLE).records() {
            let row = row.expect("shipped country table is valid");
            let code = row[0].to_string();
            for name in row[1].split('|') {
                names.insert(fold(name), code.clone());
            }
            codes.insert(code);
        }
        for row in reader(HISTORICAL_TABLE).records() {
            let row = row.expect("shipped historical table is valid");
            names.insert(fold(&row[0]), row[1].to_string());
        }
        CountryIndex { codes, names }
    })
}

pub fn is_iso_country_code(code: &str) -> bool {
    index().codes.contains(code)
}

/// Resolves a country name, demonym, historical state or ISO code.
pub fn normalize_country(raw: &str) -> Country {
    let key = fold(raw);
    if key.is_empty() {
        return Country::Unknown;
    }
    let idx = index();
    if let Some(code) = idx.names.get(&key) {
        return Country::from_code(code).unwrap_or(Country::Unknown);
    }
    let upper = key.to_uppercase();
    if idx.codes.contains(&upper) {
        return Country::from_code(&upper).unwrap_or(Country::Unknown);
    }
    Country::Unknown
}
