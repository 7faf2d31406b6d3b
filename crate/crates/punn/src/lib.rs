//! Data preparation, file formats, experiment orchestration and the `punn`
//! command-line tool, on top of the `punn-core` evolutionary engine.
//!
//! The usual path is raw CSV plus schema, through [`dataset::preprocess`]
//! (imputation, indicator encoding, `[1, 2]` normalization), then
//! [`split::stratified_holdout`], then [`experiment::train_model`] or
//! [`experiment::run_experiment`].

pub mod dataset;
pub mod encode;
pub mod error;
pub mod experiment;
pub mod model;
pub mod presets;
pub mod schema;
pub mod split;
pub mod table;
pub mod trace;

use std::path::Path;

pub use dataset::{preprocess, ProcessedDataset};
pub use error::{Error, Result};
pub use model::Model;
pub use presets::{ConfigId, Method, Preset, RunConfig};

/// Training fraction of every holdout split.
pub const TRAIN_RATIO: f64 = 0.75;

/// Loads `<dir>/data.csv` with `<dir>/schema.txt` and preprocesses it.
pub fn load_dataset_dir(dir: impl AsRef<Path>) -> Result<ProcessedDataset> {
    let dir = dir.as_ref();
    let schema = schema::Schema::load(dir.join("schema.txt"))?;
    let raw = table::load_table(dir.join("data.csv"), &schema)?;
    preprocess(raw)
}
