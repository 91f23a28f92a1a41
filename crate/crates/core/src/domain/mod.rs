//! Canonical value types shared by every stage of the pipeline.
//!
//! A [`StreetRecord`] is one honorific street: where it is, when it was
//! (re)named and who it commemorates. Everything that can be unknown about
//! the honoree carries an explicit `unknown` value instead of being absent,
//! so filters can expose unknowns as a selectable tag.

mod city;
mod csvio;
mod occupation;
mod record;
mod theme;

pub use city::{BoundingBox, CityConfig, CityId, LonLat, SourceDescriptor, PUBLISHED_TOTAL};
pub use csvio::{read_records_csv, write_records_csv, CANONICAL_HEADER};
pub use occupation::OccupationGroup;
pub use record::{
    current_year, validate_dataset, validate_record, Country, Gender, Source, StreetRecord,
    Violation, MIN_YEAR,
};
pub use theme::{InvalidTag, ThemeLayer};
#[cfg(test)]
pub(crate) use record::tests::sample;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown {kind} `{value}`")]
pub struct ParseEnumError {
    pub kind: &'static str,
    pub value: String,
}

impl ParseEnumError {
    pub(crate) fn new(kind: &'static str, value: &str) -> Self {
        Self {
            kind,
            value: value.to_string(),
        }
    }
}

/// Implements `Display`, `FromStr` and string serde for a fieldless enum
/// whose canonical form is a fixed slug.
macro_rules! slug_enum {
    ($ty:ident, $kind:literal, { $($variant:ident => $slug:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self {
                    $($ty::$variant => $slug),+
                }
            }
        }

        impl std::fmt::Display for $ty {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl std::str::FromStr for $ty {
            type Err = $crate::domain::ParseEnumError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim() {
                    $($slug => Ok($ty::$variant),)+
                    other => Err($crate::domain::ParseEnumError::new($kind, other)),
                }
            }
        }

        impl serde::Serialize for $ty {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }

        impl<'de> serde::Deserialize<'de> for $ty {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}
pub(crate) use slug_enum;
