//! Orchestration of the honorific-streets pipeline behind the
//! `honorifics` binary.

pub mod pipeline;
pub mod stages;

pub use pipeline::{run_pipeline, CityReport, PipelineConfig, Stage, Summary};
