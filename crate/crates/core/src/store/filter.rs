use std::collections::BTreeSet;

use thiserror::Error;

use crate::domain::{CityId, InvalidTag, StreetRecord, ThemeLayer};

/// City, theme, optional inclusive year range and optional tag set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryFilter {
    pub city: CityId,
    pub theme: ThemeLayer,
    pub year_range: Option<(i32, i32)>,
    pub tags: Option<BTreeSet<String>>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FilterError {
    #[error("year range {from}..{to} is inverted")]
    InvertedYearRange { from: i32, to: i32 },
    #[error(transparent)]
    InvalidTag(#[from] InvalidTag),
}

impl FilterError {
    /// Name of the offending filter field.
    pub fn field(&self) -> &'static str {
        match self {
            FilterError::InvertedYearRange { .. } => "year_range",
            FilterError::InvalidTag(_) => "tags",
        }
    }
}

impl QueryFilter {
    pub fn new(city: CityId, theme: ThemeLayer) -> Self {
        QueryFilter { city, theme, year_range: None, tags: None }
    }

    pub fn years(mut self, from: i32, to: i32) -> Self {
        self.year_range = Some((from, to));
        self
    }

    pub fn tags<I, S>(mut self, tags: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.tags = Some(tags.into_iter().map(Into::into).collect());
        self
    }

    /// Checks the invariants and rewrites tags into canonical theme values.
    pub fn validated(&self) -> Result<QueryFilter, FilterError> {
        if let Some((from, to)) = self.year_range {
            if from > to {
                return Err(FilterError::InvertedYearRange { from, to });
            }
        }
        let tags = match &self.tags {
            Some(t) => Some(t.iter().map(|x| self.theme.parse_tag(x)).collect::<Result<BTreeSet<_>, _>>()?),
            None => None,
        };
        Ok(QueryFilter { tags, ..self.clone() })
    }

    /// The filter predicate on a single record. Tags are compared as given,
    /// so call on a validated filter.
    pub fn admits(&self, r: &StreetRecord) -> bool {
        r.city == self.city
            && self.year_range.is_none_or(|(from, to)| r.denomination_year.is_some_and(|y| from <= y && y <= to))
            && self.tags.as_ref().is_none_or(|t| t.contains(&r.theme_value(self.theme)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let f = QueryFilter::new(CityId::Paris, ThemeLayer::Country).tags(["fr", "unknown"]);
        assert_eq!(f.validated().unwrap().tags.unwrap(), BTreeSet::from(["FR".into(), "unknown".into()]));
        let bad = QueryFilter::new(CityId::Paris, ThemeLayer::Occupation).tags(["poets"]);
        assert_eq!(bad.validated().unwrap_err().field(), "tags");
        let inv = QueryFilter::new(CityId::Paris, ThemeLayer::Period).years(1900, 1800);
        assert_eq!(inv.validated().unwrap_err(), FilterError::InvertedYearRange { from: 1900, to: 1800 });
    }
}
