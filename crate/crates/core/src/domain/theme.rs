use thiserror::Error;

use super::{slug_enum, Country, Gender, OccupationGroup, StreetRecord, MIN_YEAR};
use crate::normalize::is_iso_country_code;

/// The attribute driving color and filtering on the map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ThemeLayer {
    Occupation,
    Gender,
    Country,
    Period,
}

slug_enum!(ThemeLayer, "theme", {
    Occupation => "occupation",
    Gender => "gender",
    Country => "country",
    Period => "period",
});

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("`{tag}` is not a {theme} value")]
pub struct InvalidTag {
    pub theme: ThemeLayer,
    pub tag: String,
}

/// Latest year accepted as a period tag.
const MAX_PERIOD_TAG: i32 = 2100;

impl ThemeLayer {
    /// Parses a user supplied tag into the canonical theme value.
    ///
    /// Period values are denomination years; every theme accepts `unknown`
    /// except occupation, where unmappable occupations live in `other`.
    pub fn parse_tag(&self, tag: &str) -> Result<String, InvalidTag> {
        let err = || InvalidTag {
            theme: *self,
            tag: tag.to_string(),
        };
        let tag = tag.trim();
        match self {
            ThemeLayer::Occupation => tag
                .parse::<OccupationGroup>()
                .map(|g| g.as_str().to_string())
                .map_err(|_| err()),
            ThemeLayer::Gender => tag
                .parse::<Gender>()
                .map(|g| g.as_str().to_string())
                .map_err(|_| err()),
            ThemeLayer::Country => match tag.parse::<Country>() {
                Ok(Country::Unknown) => Ok("unknown".into()),
                Ok(c) if is_iso_country_code(c.as_str()) => Ok(c.as_str().to_string()),
                _ => Err(err()),
            },
            ThemeLayer::Period => {
                if tag == "unknown" {
                    return Ok(tag.into());
                }
                match tag.parse::<i32>() {
                    Ok(y) if (MIN_YEAR..=MAX_PERIOD_TAG).contains(&y) => Ok(y.to_string()),
                    _ => Err(err()),
                }
            }
        }
    }
}

impl StreetRecord {
    /// Canonical theme value of this record, in the same form
    /// [`ThemeLayer::parse_tag`] produces.
    pub fn theme_value(&self, theme: ThemeLayer) -> String {
        match theme {
            ThemeLayer::Occupation => self.occupation_group.as_str().to_string(),
            ThemeLayer::Gender => self.gender.as_str().to_string(),
            ThemeLayer::Country => self.country.as_str().to_string(),
            ThemeLayer::Period => self
                .denomination_year
                .map_or_else(|| "unknown".to_string(), |y| y.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::record::tests::sample;

    #[test]
    fn tags_per_theme() {
        assert_eq!(ThemeLayer::Occupation.parse_tag("writers").unwrap(), "writers");
        assert!(ThemeLayer::Occupation.parse_tag("female").is_err());
        assert_eq!(ThemeLayer::Gender.parse_tag("female").unwrap(), "female");
        assert_eq!(ThemeLayer::Country.parse_tag("fr").unwrap(), "FR");
        assert_eq!(ThemeLayer::Country.parse_tag("unknown").unwrap(), "unknown");
        assert!(ThemeLayer::Country.parse_tag("XX").is_err());
        assert_eq!(ThemeLayer::Period.parse_tag("1853").unwrap(), "1853");
        assert!(ThemeLayer::Period.parse_tag("53").is_err());
        assert!(ThemeLayer::Period.parse_tag("eighteen").is_err());
    }

    #[test]
    fn record_values_are_valid_tags() {
        let r = sample();
        for theme in ThemeLayer::ALL {
            let v = r.theme_value(*theme);
            assert_eq!(theme.parse_tag(&v).unwrap(), v);
        }
        let mut r = sample();
        r.denomination_year = None;
        assert_eq!(r.theme_value(ThemeLayer::Period), "unknown");
    }
}
