use std::sync::OnceLock;

use regex::Regex;

/// Years outside this window are treated as parse noise.
pub const YEAR_WINDOW: (i32, i32) = (1000, 2100);

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum YearWarning {
    OutOfRange(i32),
    Unrecognized(String),
}

impl std::fmt::Display for YearWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            YearWarning::OutOfRange(y) => write!(
                f,
                "year {y} outside [{}, {}]",
                YEAR_WINDOW.0, YEAR_WINDOW.1
            ),
            YearWarning::Unrecognized(s) => write!(f, "unrecognized date `{s}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ParsedYear {
    pub year: Option<i32>,
    pub warning: Option<YearWarning>,
}

const MONTHS: &[&str] = &[
    "january", "february", "march", "april", "may", "june", "july", "august", "september",
    "october", "november", "december", "jan", "feb", "mar", "apr", "jun", "jul", "aug", "sep",
    "sept", "oct", "nov", "dec", "januar", "jänner", "februar", "märz", "mai", "juni", "juli",
    "oktober", "dezember",
];

struct Patterns {
    bare: Regex,
    iso: Regex,
    dotted: Regex,
    month_first: Regex,
    day_first: Regex,
}

fn patterns() -> &'static Patterns {
    static P: OnceLock<Patterns> = OnceLock::new();
    P.get_or_init(|| Patterns {
        bare: Regex::new(r"^[+]?(\d{1,4})$").unwrap(),
        iso: Regex::new(r"^[+]?(\d{1,4})-(\d{1,2})-(\d{1,2})(?:[T ].*)?$").unwrap(),
        dotted: Regex::new(r"^(\d{1,2})\.\s?(\d{1,2})\.\s?(\d{1,4})$").unwrap(),
        month_first: Regex::new(r"^(\p{L}+)\.?\s+(\d{1,2}),?\s+(\d{1,4})$").unwrap(),
        day_first: Regex::new(r"^(\d{1,2})\.?\s+(\p{L}+)\.?\s+(\d{1,4})$").unwrap(),
    })
}

/// Extracts the year from `YYYY`, `YYYY-MM-DD` (time suffix allowed),
/// `DD.MM.YYYY`, `Month D, YYYY` or `D Month YYYY`.
pub fn parse_year(raw: &str) -> ParsedYear {
    let text = raw.trim();
    if text.is_empty() {
        return ParsedYear::default();
    }
    let p = patterns();
    let lower = text.to_lowercase();
    let digits = if let Some(c) = p.bare.captures(text) {
        Some(c[1].to_string())
    } else if let Some(c) = p.iso.captures(text) {
        Some(c[1].to_string())
    } else if let Some(c) = p.dotted.captures(text) {
        Some(c[3].to_string())
    } else if let Some(c) = p
        .month_first
        .captures(&lower)
        .filter(|c| MONTHS.contains(&&c[1]))
    {
        Some(c[3].to_string())
    } else {
        p.day_first
            .captures(&lower)
            .filter(|c| MONTHS.contains(&&c[2]))
            .map(|c| c[3].to_string())
    };
    let Some(year) = digits.and_then(|d| d.parse::<i32>().ok()) else {
        return ParsedYear {
            year: None,
            warning: Some(YearWarning::Unrecognized(text.to_string())),
        };
    };
    if (YEAR_WINDOW.0..=YEAR_WINDOW.1).contains(&year) {
        ParsedYear {
            year: Some(year),
            warning: None,
        }
    } else {
        ParsedYear {
            year: None,
            warning: Some(YearWarning::OutOfRange(year)),
        }
    }
}
