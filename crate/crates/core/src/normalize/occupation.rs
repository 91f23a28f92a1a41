//! Occupation string → [`OccupationGroup`] via a shipped keyword table.

use std::sync::OnceLock;

use crate::domain::OccupationGroup;

/// Versioned keyword table, one `keyword,group` pair per row.
pub const KEYWORD_TABLE: &str = include_str!("../../data/occupation_keywords.csv");

pub struct KeywordTable {
    /// Folded keywords, longest first.
    entries: Vec<(String, OccupationGroup)>,
}

#[derive(Debug, thiserror::Error)]
pub enum KeywordTableError {
    #[error("keyword table: {0}")]
    Csv(#[from] csv::Error),
    #[error("keyword table line {line}: {message}")]
    Row { line: u64, message: String },
}

impl KeywordTable {
    pub fn parse(text: &str) -> Result<Self, KeywordTableError> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let mut entries: Vec<(String, OccupationGroup)> = Vec::new();
        for row in reader.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line());
            let bad = |message: String| KeywordTableError::Row { line, message };
            let keyword = fold(row.get(0).unwrap_or_default());
            if keyword.is_empty() {
                return Err(bad("empty keyword".into()));
            }
            let group: OccupationGroup = row
                .get(1)
                .unwrap_or_default()
                .parse()
                .map_err(|e| bad(format!("{e}")))?;
            if let Some((_, existing)) = entries.iter().find(|(k, _)| *k == keyword) {
                return Err(bad(format!(
                    "`{keyword}` listed twice ({existing} and {group})"
                )));
            }
            entries.push((keyword, group));
        }
        entries.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, OccupationGroup)> {
        self.entries.iter().map(|(k, g)| (k.as_str(), *g))
    }

    /// Longest keyword found on word boundaries wins; equal lengths go to
    /// the earliest occurrence in the input.
    pub fn lookup(&self, raw: &str) -> OccupationGroup {
        let folded = fold(raw);
        if folded.is_empty() {
            return OccupationGroup::Other;
        }
        let haystack = format!(" {folded} ");
        let mut best: Option<(usize, usize, OccupationGroup)> = None;
        for (keyword, group) in &self.entries {
            if let Some((len, _, _)) = best {
                if keyword.len() < len {
                    break;
                }
            }
            if let Some(pos) = haystack.find(&format!(" {keyword} ")) {
                match best {
                    Some((_, best_pos, _)) if best_pos <= pos => {}
                    _ => best = Some((keyword.len(), pos, *group)),
                }
            }
        }
        best.map_or(OccupationGroup::Other, |(_, _, g)| g)
    }
}

/// Lowercases and turns every non-alphanumeric run (apostrophes aside)
/// into a single space.
fn fold(s: &str) -> String {
    let lowered = s.to_lowercase().replace('’', "'");
    lowered
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|t| !t.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn default_table() -> &'static KeywordTable {
    static TABLE: OnceLock<KeywordTable> = OnceLock::new();
    TABLE.get_or_init(|| KeywordTable::parse(KEYWORD_TABLE).expect("shipped keyword table is valid"))
}

/// Total mapping of a source occupation string onto the taxonomy.
pub fn map_occupation(raw: &str) -> OccupationGroup {
    default_table().lookup(raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_lints_clean() {
        let table = KeywordTable::parse(KEYWORD_TABLE).unwrap();
        assert!(table.len() >= 300);
        for g in OccupationGroup::ALL {
            assert!(table.entries().any(|(_, eg)| eg == *g), "{g} has no keyword");
        }
    }

    #[test]
    fn duplicate_keyword_rejected() {
        let err = KeywordTable::parse("keyword,group\nwriter,writers\nWriter,royals\n");
        assert!(matches!(err, Err(KeywordTableError::Row { .. })));
        let err = KeywordTable::parse("keyword,group\nwriter,poets\n");
        assert!(matches!(err, Err(KeywordTableError::Row { .. })));
    }

    #[test]
    fn reference_examples() {
        assert_eq!(map_occupation("writer"), OccupationGroup::Writers);
        assert_eq!(map_occupation(""), OccupationGroup::Other);
        assert_eq!(map_occupation("composer"), OccupationGroup::CreativePerformingArtists);
    }

    #[test]
    fn longest_match_wins() {
        assert_eq!(map_occupation("police officer"), OccupationGroup::RespondersVictims911);
        assert_eq!(map_occupation("officer"), OccupationGroup::MilitaryPersonnel);
        assert_eq!(map_occupation("Social Worker"), OccupationGroup::SocialWorkers);
        assert_eq!(map_occupation("political activist"), OccupationGroup::Politicians);
    }

    #[test]
    fn word_boundaries_only() {
        // "art" is not a keyword and "poet" must not match inside "poetry".
        assert_eq!(map_occupation("poetry"), OccupationGroup::Other);
        assert_eq!(map_occupation("  WRITER. "), OccupationGroup::Writers);
    }

    #[test]
    fn equal_length_goes_to_earliest() {
        // "painter" and "surgeon" are both seven letters.
        assert_eq!(map_occupation("painter, surgeon"), OccupationGroup::CreativePerformingArtists);
        assert_eq!(map_occupation("surgeon and painter"), OccupationGroup::HealthAssociateProfessionals);
    }

    #[test]
    fn group_names_are_fixed_points() {
        for g in OccupationGroup::ALL {
            assert_eq!(map_occupation(g.as_str()), *g, "slug {}", g.as_str());
            assert_eq!(map_occupation(g.label()), *g, "label {}", g.label());
        }
    }
}
