//! Temperature-scaled Gaussian weight mutation with simulated-annealing
//! acceptance and 1/5 success rule variance control.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{EaParams, EvalCounter, Individual};
use crate::dataset::Dataset;
use crate::error::Result;

const ALPHA_MIN: f64 = 1e-4;
const ALPHA_MAX: f64 = 5.0;
const SHRINK: f64 = 0.9;

/// Current noise variance scales and the success tally of the generation in
/// progress.
#[derive(Debug, Clone, PartialEq)]
pub struct MutationState {
    alpha_exponents: f64,
    alpha_coefficients: f64,
    successes: u64,
    attempts: u64,
}

impl MutationState {
    pub fn new(alpha_exponents: f64, alpha_coefficients: f64) -> Self {
        MutationState {
            alpha_exponents,
            alpha_coefficients,
            successes: 0,
            attempts: 0,
        }
    }

    pub fn from_params(params: &EaParams) -> Self {
        Self::new(params.alpha_exponents, params.alpha_coefficients)
    }

    pub fn alpha_exponents(&self) -> f64 {
        self.alpha_exponents
    }

    pub fn alpha_coefficients(&self) -> f64 {
        self.alpha_coefficients
    }

    pub fn successes(&self) -> u64 {
        self.successes
    }

    pub fn attempts(&self) -> u64 {
        self.attempts
    }

    pub fn record(&mut self, success: bool) {
        self.attempts += 1;
        if success {
            self.successes += 1;
        }
    }

    /// Applies the 1/5 success rule to the tally and resets it.
    pub fn adapt(&mut self) {
        if self.attempts == 0 {
            return;
        }
        // Compare successes / attempts with 1/5 exactly.
        let factor = match (5 * self.successes).cmp(&self.attempts) {
            core::cmp::Ordering::Greater => 1.0 / SHRINK,
            core::cmp::Ordering::Less => SHRINK,
            core::cmp::Ordering::Equal => 1.0,
        };
        self.alpha_exponents = scale(self.alpha_exponents, factor);
        self.alpha_coefficients = scale(self.alpha_coefficients, factor);
        self.successes = 0;
        self.attempts = 0;
    }
}

// Zero is a fixed point: a disabled mutation stays disabled.
fn scale(alpha: f64, factor: f64) -> f64 {
    if alpha == 0.0 {
        0.0
    } else {
        (alpha * factor).clamp(ALPHA_MIN, ALPHA_MAX)
    }
}

/// Functional form of [`MutationState::adapt`].
pub fn adapt_variances(mut state: MutationState) -> MutationState {
    state.adapt();
    state
}

/// Perturbs every exponent with `N(0, alpha_1 T)` and every coefficient and
/// bias with `N(0, alpha_2 T)` (variances), clamps to the weight interval and
/// evaluates the candidate. A candidate at least as fit as the parent is
/// accepted and counted as a success; a worse one is accepted with
/// probability `exp(dA / T)`. On rejection the parent is returned. The
/// candidate evaluation is always counted.
pub fn parametric_mutation<R: Rng + ?Sized>(
    parent: &Individual,
    state: &mut MutationState,
    rng: &mut R,
    params: &EaParams,
    train: &Dataset,
    counter: &mut EvalCounter,
) -> Result<Individual> {
    let temperature = parent.temperature();
    let mut net = parent.net().clone();
    if temperature > 0.0 {
        let sd_exponents = libm::sqrt(state.alpha_exponents * temperature);
        let sd_coefficients = libm::sqrt(state.alpha_coefficients * temperature);
        let interval = params.weight_interval;
        net.for_each_weight_mut(|is_exponent, w| {
            let sd = if is_exponent { sd_exponents } else { sd_coefficients };
            if sd > 0.0 {
                let noise: f64 = rng.sample(StandardNormal);
                *w = interval.clamp(*w + sd * noise);
            }
        });
    }
    let candidate = Individual::evaluate(net, train, counter)?;
    let delta = candidate.fitness() - parent.fitness();
    if delta >= 0.0 {
        state.record(true);
        return Ok(candidate);
    }
    state.record(false);
    if rng.random::<f64>() < libm::exp(delta / temperature) {
        Ok(candidate)
    } else {
        Ok(parent.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::tests_support::toy_data;
    use crate::network::{random_network, HiddenNode, OutputNode, PunnNetwork, WeightInterval};
    use crate::rng::seeded;

    fn parent(seed: u64) -> Individual {
        let train = toy_data();
        let net = random_network(&mut seeded(seed), 2, 3, 2, &WeightInterval::DEFAULT, 1.0).unwrap();
        Individual::evaluate(net, &train, &mut EvalCounter::new()).unwrap()
    }

    #[test]
    fn zero_variance_is_identity() {
        let train = toy_data();
        let params = EaParams::default();
        let p = parent(1);
        let mut state = MutationState::new(0.0, 0.0);
        let mut counter = EvalCounter::new();
        let child =
            parametric_mutation(&p, &mut state, &mut seeded(2), &params, &train, &mut counter)
                .unwrap();
        assert_eq!(child, p);
        assert_eq!(counter.count(), 1);
        assert_eq!(state.successes(), 1);
    }

    #[test]
    fn zero_temperature_is_identity() {
        // A single pattern fitted so well that the error underflows to 0,
        // giving A = 1 and T = 0.
        let train = crate::dataset::Dataset::from_rows(2, &[alloc::vec![1.5]], alloc::vec![0]).unwrap();
        let net = PunnNetwork::new(
            1,
            2,
            alloc::vec![HiddenNode::unlinked(1)],
            alloc::vec![OutputNode::new(5.0, alloc::vec![Some(5.0)])],
        )
        .unwrap();
        let params = EaParams {
            weight_interval: WeightInterval::new(-50.0, 50.0).unwrap(),
            ..Default::default()
        };
        let mut net = net;
        net.outputs_mut()[0].set_bias(45.0);
        let p = Individual::evaluate(net, &train, &mut EvalCounter::new()).unwrap();
        assert_eq!(p.fitness(), 1.0);
        assert_eq!(p.temperature(), 0.0);
        let mut state = MutationState::new(0.5, 1.0);
        let child = parametric_mutation(
            &p,
            &mut state,
            &mut seeded(9),
            &params,
            &train,
            &mut EvalCounter::new(),
        )
        .unwrap();
        assert_eq!(child, p);
    }

    #[test]
    fn mutated_weights_stay_in_interval() {
        let train = toy_data();
        let params = EaParams::default();
        let mut state = MutationState::new(5.0, 5.0);
        let mut rng = seeded(4);
        let mut counter = EvalCounter::new();
        let mut current = parent(3);
        for _ in 0..200 {
            current =
                parametric_mutation(&current, &mut state, &mut rng, &params, &train, &mut counter)
                    .unwrap();
            assert!(current.net().respects_interval(&params.weight_interval));
        }
        assert_eq!(counter.count(), 200);
        assert_eq!(state.attempts(), 200);
    }

    #[test]
    fn clamping_to_interval() {
        let iv = WeightInterval::DEFAULT;
        assert_eq!(iv.clamp(4.0 + 2.3), 5.0);
    }

    #[test]
    fn one_fifth_rule_arms() {
        let mut s = MutationState::new(0.5, 1.0);
        for _ in 0..10 {
            s.record(false);
        }
        s.adapt();
        assert!((s.alpha_exponents() - 0.45).abs() < 1e-15);
        assert!((s.alpha_coefficients() - 0.9).abs() < 1e-15);
        assert_eq!(s.attempts(), 0);

        let mut s = MutationState::new(0.5, 1.0);
        for _ in 0..10 {
            s.record(true);
        }
        let s = adapt_variances(s);
        assert!((s.alpha_exponents() - 0.5 / 0.9).abs() < 1e-15);
        assert!((s.alpha_coefficients() - 1.0 / 0.9).abs() < 1e-15);

        let mut s = MutationState::new(0.5, 1.0);
        for i in 0..10 {
            s.record(i < 2);
        }
        s.adapt();
        assert_eq!(s.alpha_exponents(), 0.5);
        assert_eq!(s.alpha_coefficients(), 1.0);
    }

    #[test]
    fn adaptation_is_clamped_and_noop_without_attempts() {
        let mut s = MutationState::new(4.9, 4.9);
        s.record(true);
        s.adapt();
        assert_eq!(s.alpha_exponents(), 5.0);
        let mut s = MutationState::new(1.05e-4, 1.0);
        s.record(false);
        s.adapt();
        assert_eq!(s.alpha_exponents(), 1e-4);
        let before = MutationState::new(0.3, 0.7);
        assert_eq!(adapt_variances(before.clone()), before);
    }
}
