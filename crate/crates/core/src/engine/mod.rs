//! The evolutionary programming loop.
//!
//! A generation keeps copies of the best tenth unchanged, applies annealed
//! parametric mutation to the top of the remaining working set and
//! structural mutation to the rest, re-evaluates the working set and sorts
//! the union. There is no crossover.

mod generation;
mod parametric;
mod population;
mod structural;

pub use generation::{
    evolve, evolve_generation, run_ea, EaOutcome, GenerationSizes, GenerationStats, RunOutcome,
};
pub use parametric::{adapt_variances, parametric_mutation, MutationState};
pub use population::{initialize_population, Individual, Population};
pub use structural::{structural_mutation, OperatorSet, StructuralOperator};

use crate::error::{Error, Result};
use crate::network::WeightInterval;

/// Number of fitness evaluations performed so far in a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct EvalCounter(u64);

impl EvalCounter {
    pub fn new() -> Self {
        EvalCounter(0)
    }

    pub fn count(&self) -> u64 {
        self.0
    }

    pub(crate) fn record(&mut self) {
        self.0 += 1;
    }
}

/// Knobs of a single evolutionary run.
#[derive(Debug, Clone, PartialEq)]
pub struct EaParams {
    /// Population size `N`.
    pub pop_size: usize,
    /// Maximum number of generations.
    pub generations: usize,
    /// Maximum number of hidden nodes.
    pub max_hidden: usize,
    /// Initial variance scale of the exponent noise.
    pub alpha_exponents: f64,
    /// Initial variance scale of the coefficient and bias noise.
    pub alpha_coefficients: f64,
    /// Stagnation window of the early stop.
    pub gen_without_improving: usize,
    pub early_stopping: bool,
    pub weight_interval: WeightInterval,
    /// Inclusive range of nodes added or deleted by one node operator.
    pub node_op_range: (usize, usize),
    /// Inclusive range of links added or deleted by one link operator.
    pub link_op_range: (usize, usize),
    /// Probability of each input link when a hidden node is created.
    pub link_density: f64,
    /// Minimum gain over the running maximum that counts as an improvement.
    pub improvement_epsilon: f64,
    /// Random networks generated per population slot at initialization.
    pub init_multiplier: usize,
    /// Structural operators allowed to fire.
    pub operators: OperatorSet,
}

impl Default for EaParams {
    fn default() -> Self {
        EaParams {
            pop_size: 1000,
            generations: 100,
            max_hidden: 3,
            alpha_exponents: 0.5,
            alpha_coefficients: 1.0,
            gen_without_improving: 20,
            early_stopping: true,
            weight_interval: WeightInterval::DEFAULT,
            node_op_range: (1, 2),
            link_op_range: (1, 2),
            link_density: 0.5,
            improvement_epsilon: 1e-9,
            init_multiplier: 10,
            operators: OperatorSet::ALL,
        }
    }
}

impl EaParams {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size == 0 {
            return Err(Error::Argument("population size must be positive"));
        }
        if self.max_hidden == 0 {
            return Err(Error::Argument("max_hidden must be positive"));
        }
        if !(self.alpha_exponents > 0.0 && self.alpha_coefficients > 0.0) {
            return Err(Error::Argument("mutation variance scales must be positive"));
        }
        if self.early_stopping && self.gen_without_improving == 0 {
            return Err(Error::Argument("stagnation window must be positive"));
        }
        let ranges_ok = |(lo, hi): (usize, usize)| lo >= 1 && lo <= hi;
        if !ranges_ok(self.node_op_range) || !ranges_ok(self.link_op_range) {
            return Err(Error::Argument("operator count ranges must satisfy 1 <= lo <= hi"));
        }
        if !(self.link_density > 0.0 && self.link_density <= 1.0) {
            return Err(Error::Argument("link density must lie in (0, 1]"));
        }
        if self.improvement_epsilon.is_nan() || self.improvement_epsilon < 0.0 {
            return Err(Error::Argument("improvement epsilon must be non-negative"));
        }
        if self.init_multiplier == 0 {
            return Err(Error::Argument("init multiplier must be positive"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = EaParams::default();
        assert!(p.validate().is_ok());
        assert_eq!(p.pop_size, 1000);
        assert_eq!(p.alpha_exponents, 0.5);
        assert_eq!(p.gen_without_improving, 20);
        assert_eq!(p.node_op_range, (1, 2));
    }

    #[test]
    fn invalid_params() {
        let bad = [
            EaParams { pop_size: 0, ..Default::default() },
            EaParams { max_hidden: 0, ..Default::default() },
            EaParams { alpha_coefficients: 0.0, ..Default::default() },
            EaParams { node_op_range: (2, 1), ..Default::default() },
            EaParams { link_density: 0.0, ..Default::default() },
        ];
        for p in bad {
            assert!(p.validate().is_err(), "{p:?}");
        }
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use crate::dataset::Dataset;
    use alloc::vec::Vec;

    /// Sixteen 2-d points in `[1, 2]^2`, labelled by which side of the
    /// diagonal they fall on.
    pub fn toy_data() -> Dataset {
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                let x = 1.0 + i as f64 / 3.0;
                let y = 1.0 + j as f64 / 3.0 + 0.05;
                rows.push(alloc::vec![x, y]);
                labels.push(usize::from(x * x > y));
            }
        }
        Dataset::from_rows(2, &rows, labels).unwrap()
    }
}
