//! Street-name folding used to compare source names with OSM way names.

use crate::domain::CityId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Language {
    English,
    German,
    French,
    /// Rules shared by all three, with English readings for ambiguous
    /// abbreviations.
    Neutral,
}

impl Language {
    pub fn of(city: CityId) -> Self {
        match city {
            CityId::Paris => Language::French,
            CityId::Vienna => Language::German,
            CityId::London | CityId::NewYork => Language::English,
        }
    }
}

/// Abbreviations valid anywhere in a name.
fn expand_anywhere(token: &str, lang: Language) -> Option<&'static str> {
    use Language::*;
    let hit = match (token, lang) {
        ("ave" | "ave." | "av" | "av.", _) => "avenue",
        ("str" | "str.", _) => "straße",
        ("blvd" | "blvd.", English | Neutral) => "boulevard",
        ("bd" | "bd." | "boul" | "boul.", French | Neutral) => "boulevard",
        ("rd" | "rd.", English | Neutral) => "road",
        ("sq" | "sq.", _) => "square",
        ("ln" | "ln.", English | Neutral) => "lane",
        ("pkwy" | "pkwy.", English | Neutral) => "parkway",
        ("hwy" | "hwy.", English | Neutral) => "highway",
        ("ct" | "ct.", English | Neutral) => "court",
        ("ter" | "ter." | "terr.", English | Neutral) => "terrace",
        ("cres" | "cres.", English | Neutral) => "crescent",
        ("gdns" | "gdns.", English | Neutral) => "gardens",
        ("pl" | "pl.", English | Neutral | French) => "place",
        ("pl" | "pl.", German) => "platz",
        ("jr" | "jr.", English | Neutral) => "junior",
        ("ste" | "ste.", French | Neutral) => "sainte",
        ("fg" | "fbg" | "fg.", French | Neutral) => "faubourg",
        ("imp" | "imp.", French | Neutral) => "impasse",
        ("g." | "g", German) => "gasse",
        _ => return None,
    };
    Some(hit)
}

/// Abbreviations whose reading depends on position: leading `St` is a
/// saint, trailing `St` a street.
fn expand_positional(token: &str, first: bool, last: bool, lang: Language) -> Option<&'static str> {
    use Language::*;
    let hit = match (token, lang) {
        ("st" | "st.", French) if !last => "saint",
        ("st" | "st.", _) if first && !last => "saint",
        ("st" | "st.", _) => "street",
        ("dr" | "dr.", _) if first && !last => "doctor",
        ("dr" | "dr.", English | Neutral) => "drive",
        ("r" | "r.", French) if first => "rue",
        ("n" | "n.", English) if first && !last => "north",
        ("s" | "s.", English) if first && !last => "south",
        ("e" | "e.", English) if first && !last => "east",
        ("w" | "w.", English) if first && !last => "west",
        _ => return None,
    };
    Some(hit)
}

fn is_vowel_initial(word: &str) -> bool {
    word.chars()
        .next()
        .is_some_and(|c| "aeiouyàâäéèêëîïôöùûü".contains(c))
}

/// Folds a street name with the neutral rule set.
///
/// Lowercases, trims, expands abbreviations (`St`→`street`, `Ave`/`Av.`→
/// `avenue`, `Str.`→`straße`), rewrites `-strasse` as `-straße` and
/// normalizes French elision (`d' Alésia`, `de Alésia` → `d'alésia`).
pub fn normalize_street_name(name: &str) -> String {
    normalize_street_name_in(name, Language::Neutral)
}

pub fn normalize_street_name_in(name: &str, lang: Language) -> String {
    let lowered = name
        .to_lowercase()
        .replace(['’', '‘', '`', '´'], "'")
        .replace(['-', '–', '—', ','], " ");
    let raw: Vec<&str> = lowered.split_whitespace().collect();

    // Join elided articles with the following word.
    let mut tokens: Vec<String> = Vec::with_capacity(raw.len());
    let mut i = 0;
    while i < raw.len() {
        let t = raw[i];
        let next = raw.get(i + 1);
        if matches!(t, "d'" | "l'" | "qu'") && next.is_some() {
            tokens.push(format!("{t}{}", next.unwrap()));
            i += 2;
        } else if t == "de" && next.is_some_and(|n| is_vowel_initial(n)) {
            tokens.push(format!("d'{}", next.unwrap()));
            i += 2;
        } else {
            tokens.push(t.to_string());
            i += 1;
        }
    }

    let n = tokens.len();
    tokens
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let t = t.trim_end_matches('.');
            if let Some(e) = expand_positional(t, i == 0, i + 1 == n, lang)
                .or_else(|| expand_anywhere(t, lang))
            {
                return e.to_string();
            }
            if let Some(stem) = t.strip_suffix("strasse") {
                format!("{stem}straße")
            } else if let Some(stem) = t.strip_suffix("str").filter(|s| s.len() > 2) {
                format!("{stem}straße")
            } else {
                t.to_string()
            }
        })
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Key used for normalized matching: the folded name with `ß` spelled
/// `ss`, so `Strasse` and `Straße` agree.
pub fn match_key(name: &str, lang: Language) -> String {
    normalize_street_name_in(name, lang).replace('ß', "ss")
}
