//! Query-string decoding into store filters.

use std::collections::BTreeSet;

use honorifics_core::domain::{CityId, ThemeLayer};
use honorifics_core::store::QueryFilter;

use crate::ApiError;

const KNOWN: [&str; 5] = ["theme", "from", "to", "tags", "seed"];

/// Decoded `theme`, `from`, `to`, `tags` and `seed` parameters. Other
/// parameters are ignored; a repeated parameter is an error.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StreetParams {
    pub theme: Option<ThemeLayer>,
    pub from: Option<i32>,
    pub to: Option<i32>,
    /// Comma-separated; blank items are dropped and an all-blank value
    /// counts as absent.
    pub tags: Option<BTreeSet<String>>,
    pub seed: Option<u64>,
}

fn int<T: std::str::FromStr>(field: &'static str, v: &str) -> Result<T, ApiError> {
    v.trim().parse().map_err(|_| ApiError::bad(field, format!("`{v}` is not an integer in range")))
}

impl StreetParams {
    pub fn parse(query: Option<&str>) -> Result<Self, ApiError> {
        let mut p = StreetParams::default();
        let mut seen = BTreeSet::new();
        for (k, v) in url::form_urlencoded::parse(query.unwrap_or("").as_bytes()) {
            let Some(field) = KNOWN.iter().find(|f| **f == k) else { continue };
            if !seen.insert(*field) {
                return Err(ApiError::bad(field, format!("`{field}` given more than once")));
            }
            match *field {
                "theme" => {
                    p.theme = Some(v.parse().map_err(|_| ApiError::bad("theme", format!("unknown theme `{v}`")))?)
                }
                "from" => p.from = Some(int("from", &v)?),
                "to" => p.to = Some(int("to", &v)?),
                "seed" => p.seed = Some(int("seed", &v)?),
                _ => {
                    let tags: BTreeSet<String> =
                        v.split(',').map(str::trim).filter(|t| !t.is_empty()).map(String::from).collect();
                    p.tags = (!tags.is_empty()).then_some(tags);
                }
            }
        }
        Ok(p)
    }

    /// Theme defaults to occupation. A lone `from` or `to` leaves the other
    /// end open.
    pub fn filter(&self, city: CityId) -> Result<QueryFilter, ApiError> {
        let year_range = match (self.from, self.to) {
            (None, None) => None,
            (from, to) => Some((from.unwrap_or(i32::MIN), to.unwrap_or(i32::MAX))),
        };
        let f = QueryFilter {
            city,
            theme: self.theme.unwrap_or(ThemeLayer::Occupation),
            year_range,
            tags: self.tags.clone(),
        };
        Ok(f.validated()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decodes_parameters() {
        let p = StreetParams::parse(Some("theme=period&from=1853&to=1870&tags=writers,%20royals,&x=1")).unwrap();
        assert_eq!(p.theme, Some(ThemeLayer::Period));
        assert_eq!((p.from, p.to), (Some(1853), Some(1870)));
        assert_eq!(p.tags.unwrap(), BTreeSet::from(["royals".into(), "writers".into()]));
        assert_eq!(StreetParams::parse(Some("tags=,")).unwrap().tags, None);
    }

    #[test]
    fn reports_the_offending_field() {
        let field = |q: &str| match StreetParams::parse(Some(q)).and_then(|p| p.filter(CityId::Paris)) {
            Err(ApiError::BadParam { field, .. }) => field,
            other => panic!("{other:?}"),
        };
        assert_eq!(field("from=1900&to=1800"), "from");
        assert_eq!(field("theme=color"), "theme");
        assert_eq!(field("from=abc"), "from");
        assert_eq!(field("seed=-1"), "seed");
        assert_eq!(field("theme=gender&tags=divers"), "tags");
        assert_eq!(field("from=1&from=2"), "from");
    }
}
