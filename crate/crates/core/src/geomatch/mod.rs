//! Joins records to OSM way geometry and picks the on-line point that
//! stands for each street in point rendering.

pub mod extract;
pub mod features;
pub mod geometry;
pub mod matcher;
pub mod names;

pub use extract::{ExtractError, NamedWay, OsmExtract};
pub use features::{read_features_geojson, write_features_geojson, FeatureError};
pub use geometry::{representative_point, Geometry, GeometryError};
pub use matcher::{match_all, match_street, MatchMethod, OsmIndex, StreetFeature, DEFAULT_MERGE_RADIUS_M};
pub use names::{normalize_street_name, normalize_street_name_in, Language};
