//! Honorific street names: ingestion from open sources, normalization into
//! a nine-field schema with an occupation taxonomy, matching against OSM
//! way geometry, and an indexed snapshot store answering themed queries.

pub mod domain;
pub mod ingest;
pub mod normalize;
pub mod geomatch;
pub mod store;
