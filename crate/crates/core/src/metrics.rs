//! Error, fitness and accuracy of a network on a dataset.

use alloc::vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::network::PunnNetwork;
use crate::softmax::{argmax_with_reference, log_sum_exp_with_reference};

fn check(net: &PunnNetwork, data: &Dataset) -> Result<()> {
    if data.is_empty() {
        return Err(Error::Argument("dataset is empty"));
    }
    if data.input_count() != net.input_count() {
        return Err(Error::Dimension {
            expected: net.input_count(),
            actual: data.input_count(),
        });
    }
    if data.class_count() != net.class_count() {
        return Err(Error::Argument("network and dataset class counts differ"));
    }
    Ok(())
}

/// Mean cross-entropy of the softmax outputs against the one-hot targets,
/// computed as `mean_i(-f_{y_i}(x_i) + ln sum_j exp f_j(x_i))` with the
/// reference output fixed at 0.
pub fn cross_entropy_error(net: &PunnNetwork, data: &Dataset) -> Result<f64> {
    check(net, data)?;
    let mut hidden = vec![0.0; net.hidden_count()];
    let mut out = vec![0.0; net.class_count() - 1];
    let mut total = 0.0;
    for (logs, label) in data.log_rows() {
        net.outputs_from_logs(logs, &mut hidden, &mut out);
        let target = out.get(label).copied().unwrap_or(0.0);
        total += log_sum_exp_with_reference(&out) - target;
    }
    let error = total / data.len() as f64;
    if error.is_finite() {
        Ok(error)
    } else {
        Err(Error::NonFinite("cross-entropy error"))
    }
}

/// `1 / (1 + l)`.
#[inline]
pub fn fitness_from_error(error: f64) -> f64 {
    1.0 / (1.0 + error)
}

/// Fitness `A(g) = 1 / (1 + l(g))`, in `(0, 1]`.
pub fn fitness(net: &PunnNetwork, data: &Dataset) -> Result<f64> {
    cross_entropy_error(net, data).map(fitness_from_error)
}

/// Percentage of patterns whose predicted class equals the label.
pub fn correct_classification_rate(net: &PunnNetwork, data: &Dataset) -> Result<f64> {
    check(net, data)?;
    let mut hidden = vec![0.0; net.hidden_count()];
    let mut out = vec![0.0; net.class_count() - 1];
    let mut correct = 0usize;
    for (logs, label) in data.log_rows() {
        net.outputs_from_logs(logs, &mut hidden, &mut out);
        if argmax_with_reference(&out) == label {
            correct += 1;
        }
    }
    Ok(100.0 * correct as f64 / data.len() as f64)
}
