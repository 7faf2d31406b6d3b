//! Softmax over the `L - 1` trainable outputs plus the implicit reference
//! output 0.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Class membership probabilities; one entry per class, summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassDistribution {
    probabilities: Vec<f64>,
}

impl ClassDistribution {
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn class_count(&self) -> usize {
        self.probabilities.len()
    }

    /// Index of the largest probability; ties go to the lowest index.
    pub fn argmax(&self) -> usize {
        argmax(&self.probabilities)
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.probabilities
    }
}

/// Softmax of `outputs` with a trailing 0 appended for the reference class.
pub fn class_probabilities(outputs: &[f64]) -> Result<ClassDistribution> {
    let mut logits = Vec::with_capacity(outputs.len() + 1);
    logits.extend_from_slice(outputs);
    logits.push(0.0);
    softmax(&logits)
}

/// Softmax of a full logit vector, shifted by its maximum.
pub fn softmax(logits: &[f64]) -> Result<ClassDistribution> {
    if logits.is_empty() {
        return Err(Error::Argument("softmax of an empty vector"));
    }
    if logits.iter().any(|f| !f.is_finite()) {
        return Err(Error::NonFinite("network output"));
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probabilities: Vec<f64> = logits.iter().map(|&f| libm::exp(f - max)).collect();
    let total: f64 = probabilities.iter().sum();
    for p in &mut probabilities {
        *p /= total;
    }
    Ok(ClassDistribution { probabilities })
}

/// `ln(sum_j exp f_j)` over the outputs and the reference 0, shifted by the
/// maximum so that large activations do not overflow.
#[inline]
pub fn log_sum_exp_with_reference(outputs: &[f64]) -> f64 {
    let max = outputs.iter().copied().fold(0.0f64, f64::max);
    let mut total = libm::exp(-max);
    for &f in outputs {
        total += libm::exp(f - max);
    }
    max + libm::log(total)
}

/// Predicted class from raw outputs: argmax over `[f_0, .., f_{L-2}, 0]`.
/// Softmax is strictly monotone, so this equals the argmax of the
/// probabilities.
#[inline]
pub fn argmax_with_reference(outputs: &[f64]) -> usize {
    let mut best = outputs.len();
    let mut best_value = 0.0;
    for (index, &f) in outputs.iter().enumerate().rev() {
        if f >= best_value {
            best = index;
            best_value = f;
        }
    }
    best
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (index, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = index;
        }
    }
    best
}
