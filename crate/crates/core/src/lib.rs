//! Product-unit neural networks (PUNN) for classification, trained by an
//! evolutionary programming algorithm.
//!
//! The crate is `no_std` and only needs `alloc`. It holds the pure parts of
//! the system:
//!
//! * [`network`]: the product-unit model, its forward pass and random
//!   construction.
//! * [`softmax`] and [`metrics`]: class probabilities, cross-entropy error,
//!   fitness and correct classification rate.
//! * [`engine`]: the evolutionary loop (elitist replacement, annealed
//!   parametric mutation with 1/5 success rule, five structural mutations,
//!   double stop criterion).
//! * [`two_stage`]: the two-population seeding procedure and the closed-form
//!   evaluation budget.
//!
//! Reading files, preprocessing tables and running experiments live in the
//! companion `punn` crate.
#![no_std]
#![deny(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod dataset;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod network;
pub mod rng;
pub mod softmax;
pub mod two_stage;

pub use dataset::Dataset;
pub use engine::{
    EaParams, EvalCounter, Individual, MutationState, Population, StructuralOperator,
};
pub use error::{Error, Result};
pub use network::{HiddenNode, OutputNode, PunnNetwork, WeightInterval};
pub use softmax::ClassDistribution;
pub use two_stage::{expected_evaluations, EvaluationBudget, TseaParams};
