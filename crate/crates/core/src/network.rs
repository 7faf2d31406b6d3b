//! The product-unit network model.
//!
//! A network maps `k` strictly positive inputs to `L - 1` real outputs. Hidden
//! node `j` computes `prod_i x_i^{w_ji}` over the inputs it is linked to, and
//! output `l` is `beta_0^l + sum_j beta_j^l * h_j` over the hidden nodes it is
//! linked to. The last class is the reference class: its output is fixed at 0
//! and is not stored.
//!
//! Links are stored densely as `Option<f64>`, so an absent link is `None` and
//! structural mutations can flip presence without reindexing.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};

/// Closed interval every exponent, coefficient and bias must lie in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightInterval {
    lo: f64,
    hi: f64,
}

impl WeightInterval {
    pub const DEFAULT: WeightInterval = WeightInterval { lo: -5.0, hi: 5.0 };

    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::NonFinite("weight interval bound"));
        }
        if lo >= hi {
            return Err(Error::Argument("weight interval must have lo < hi"));
        }
        Ok(WeightInterval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, value: f64) -> bool {
        value >= self.lo && value <= self.hi
    }

    pub fn clamp(&self, value: f64) -> f64 {
        value.clamp(self.lo, self.hi)
    }

    /// Draws a weight uniformly from the interval.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.random_range(self.lo..=self.hi)
    }
}

impl Default for WeightInterval {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// A product unit: one optional exponent per network input.
#[derive(Debug, Clone, PartialEq)]
pub struct HiddenNode {
    exponents: Vec<Option<f64>>,
}

impl HiddenNode {
    pub fn new(exponents: Vec<Option<f64>>) -> Self {
        HiddenNode { exponents }
    }

    /// A node with no input links; it evaluates to the empty product, 1.
    pub fn unlinked(input_count: usize) -> Self {
        HiddenNode {
            exponents: vec![None; input_count],
        }
    }

    pub fn exponents(&self) -> &[Option<f64>] {
        &self.exponents
    }

    pub fn exponents_mut(&mut self) -> &mut [Option<f64>] {
        &mut self.exponents
    }

    pub fn link_count(&self) -> usize {
        self.exponents.iter().filter(|w| w.is_some()).count()
    }

    /// `prod_i x_i^{w_i}` evaluated as `exp(sum_i w_i ln x_i)`.
    #[inline]
    pub fn activation_from_logs(&self, log_pattern: &[f64]) -> f64 {
        let mut sum = 0.0;
        for (w, lx) in self.exponents.iter().zip(log_pattern) {
            if let Some(w) = w {
                sum += w * lx;
            }
        }
        libm::exp(sum)
    }
}

/// One trainable output: a bias plus one optional coefficient per hidden node.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputNode {
    bias: f64,
    coefficients: Vec<Option<f64>>,
}

impl OutputNode {
    pub fn new(bias: f64, coefficients: Vec<Option<f64>>) -> Self {
        OutputNode { bias, coefficients }
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn set_bias(&mut self, bias: f64) {
        self.bias = bias;
    }

    pub fn coefficients(&self) -> &[Option<f64>] {
        &self.coefficients
    }

    pub fn coefficients_mut(&mut self) -> &mut [Option<f64>] {
        &mut self.coefficients
    }

    pub fn link_count(&self) -> usize {
        self.coefficients.iter().filter(|c| c.is_some()).count()
    }

    #[inline]
    fn evaluate(&self, hidden: &[f64]) -> f64 {
        let mut f = self.bias;
        for (c, h) in self.coefficients.iter().zip(hidden) {
            if let Some(c) = c {
                f += c * h;
            }
        }
        f
    }
}

/// A `k : m : (L - 1)` product-unit network.
#[derive(Debug, Clone, PartialEq)]
pub struct PunnNetwork {
    input_count: usize,
    class_count: usize,
    hidden: Vec<HiddenNode>,
    outputs: Vec<OutputNode>,
}

impl PunnNetwork {
    /// Assembles a network, checking every dimension and that all weights
    /// are finite.
    pub fn new(
        input_count: usize,
        class_count: usize,
        hidden: Vec<HiddenNode>,
        outputs: Vec<OutputNode>,
    ) -> Result<Self> {
        if input_count == 0 {
            return Err(Error::Argument("a network needs at least one input"));
        }
        if class_count < 2 {
            return Err(Error::Argument("a classifier needs at least two classes"));
        }
        if hidden.is_empty() {
            return Err(Error::Argument("a network needs at least one hidden node"));
        }
        if outputs.len() != class_count - 1 {
            return Err(Error::Argument("output count must equal class count - 1"));
        }
        for node in &hidden {
            if node.exponents.len() != input_count {
                return Err(Error::Argument("hidden node link table does not match input count"));
            }
            if node.exponents.iter().flatten().any(|w| !w.is_finite()) {
                return Err(Error::NonFinite("exponent"));
            }
        }
        for out in &outputs {
            if out.coefficients.len() != hidden.len() {
                return Err(Error::Argument("output link table does not match hidden count"));
            }
            if !out.bias.is_finite() || out.coefficients.iter().flatten().any(|c| !c.is_finite())
            {
                return Err(Error::NonFinite("coefficient"));
            }
        }
        Ok(PunnNetwork {
            input_count,
            class_count,
            hidden,
            outputs,
        })
    }

    pub fn input_count(&self) -> usize {
        self.input_count
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn hidden_count(&self) -> usize {
        self.hidden.len()
    }

    pub fn hidden(&self) -> &[HiddenNode] {
        &self.hidden
    }

    pub fn outputs(&self) -> &[OutputNode] {
        &self.outputs
    }

    pub fn hidden_mut(&mut self) -> &mut [HiddenNode] {
        &mut self.hidden
    }

    pub fn outputs_mut(&mut self) -> &mut [OutputNode] {
        &mut self.outputs
    }

    /// Appends a hidden node with the given per-output coefficients.
    ///
    /// Panics if the dimensions do not match the network.
    pub fn push_hidden(&mut self, node: HiddenNode, coefficients: &[Option<f64>]) {
        assert_eq!(node.exponents.len(), self.input_count);
        assert_eq!(coefficients.len(), self.outputs.len());
        self.hidden.push(node);
        for (out, c) in self.outputs.iter_mut().zip(coefficients) {
            out.coefficients.push(*c);
        }
    }

    /// Removes hidden node `index` together with its output links. Returns the
    /// removed node and its per-output coefficients.
    ///
    /// Panics on an out-of-range index or when removing the last node.
    pub fn remove_hidden(&mut self, index: usize) -> (HiddenNode, Vec<Option<f64>>) {
        assert!(self.hidden.len() > 1, "cannot remove the last hidden node");
        let node = self.hidden.remove(index);
        let coefficients = self
            .outputs
            .iter_mut()
            .map(|out| out.coefficients.remove(index))
            .collect();
        (node, coefficients)
    }

    /// Existing input-to-hidden links plus hidden-to-output links plus one
    /// bias per output.
    pub fn count_connections(&self) -> usize {
        let inputs: usize = self.hidden.iter().map(HiddenNode::link_count).sum();
        let outputs: usize = self.outputs.iter().map(OutputNode::link_count).sum();
        inputs + outputs + self.outputs.len()
    }

    /// True when every exponent, coefficient and bias lies in `interval`.
    pub fn respects_interval(&self, interval: &WeightInterval) -> bool {
        self.hidden
            .iter()
            .flat_map(|n| n.exponents.iter().flatten())
            .chain(self.outputs.iter().flat_map(|o| o.coefficients.iter().flatten()))
            .chain(self.outputs.iter().map(|o| &o.bias))
            .all(|w| interval.contains(*w))
    }

    /// Output activations `f_0 .. f_{L-2}` for one pattern. The reference
    /// class output (identically 0) is not included.
    pub fn evaluate_outputs(&self, pattern: &[f64]) -> Result<Vec<f64>> {
        let logs = log_pattern(pattern, self.input_count)?;
        let mut hidden = vec![0.0; self.hidden.len()];
        let mut out = vec![0.0; self.outputs.len()];
        self.outputs_from_logs(&logs, &mut hidden, &mut out);
        Ok(out)
    }

    /// Most probable class for one pattern, ties going to the lowest index.
    pub fn predict_class(&self, pattern: &[f64]) -> Result<usize> {
        let out = self.evaluate_outputs(pattern)?;
        Ok(crate::softmax::argmax_with_reference(&out))
    }

    /// Forward pass on a pattern already mapped through `ln`. `hidden` and
    /// `out` are scratch buffers of length `hidden_count()` and
    /// `class_count() - 1`.
    #[inline]
    pub fn outputs_from_logs(&self, log_pattern: &[f64], hidden: &mut [f64], out: &mut [f64]) {
        debug_assert_eq!(log_pattern.len(), self.input_count);
        for (h, node) in hidden.iter_mut().zip(&self.hidden) {
            *h = node.activation_from_logs(log_pattern);
        }
        for (f, node) in out.iter_mut().zip(&self.outputs) {
            *f = node.evaluate(hidden);
        }
    }

    /// Calls `f` on every trainable weight, passing `true` for input-to-hidden
    /// exponents and `false` for output coefficients and biases.
    pub fn for_each_weight_mut(&mut self, mut f: impl FnMut(bool, &mut f64)) {
        for node in &mut self.hidden {
            for w in node.exponents.iter_mut().flatten() {
                f(true, w);
            }
        }
        for out in &mut self.outputs {
            f(false, &mut out.bias);
            for c in out.coefficients.iter_mut().flatten() {
                f(false, c);
            }
        }
    }
}

/// Checks a raw pattern and maps it through `ln`.
pub fn log_pattern(pattern: &[f64], input_count: usize) -> Result<Vec<f64>> {
    if pattern.len() != input_count {
        return Err(Error::Dimension {
            expected: input_count,
            actual: pattern.len(),
        });
    }
    pattern
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value > 0.0 && value.is_finite() {
                Ok(libm::log(value))
            } else {
                Err(Error::Domain { index, value })
            }
        })
        .collect()
}

/// Builds one hidden node: each input link is present with probability
/// `link_density`, redrawn until at least one link exists.
pub fn random_hidden_node<R: Rng + ?Sized>(
    rng: &mut R,
    input_count: usize,
    interval: &WeightInterval,
    link_density: f64,
) -> HiddenNode {
    loop {
        let exponents: Vec<Option<f64>> = (0..input_count)
            .map(|_| rng.random_bool(link_density).then(|| interval.sample(rng)))
            .collect();
        if exponents.iter().any(Option::is_some) {
            return HiddenNode::new(exponents);
        }
    }
}

/// Random network with a hidden layer of `1..=max_hidden` nodes (uniform),
/// fully connected to the outputs, with every weight uniform on `interval`.
pub fn random_network<R: Rng + ?Sized>(
    rng: &mut R,
    input_count: usize,
    max_hidden: usize,
    class_count: usize,
    interval: &WeightInterval,
    link_density: f64,
) -> Result<PunnNetwork> {
    if max_hidden == 0 {
        return Err(Error::Argument("max_hidden must be at least 1"));
    }
    if input_count == 0 || class_count < 2 {
        return Err(Error::Argument("network needs k >= 1 inputs and L >= 2 classes"));
    }
    if !(link_density > 0.0 && link_density <= 1.0) {
        return Err(Error::Argument("link density must lie in (0, 1]"));
    }
    let hidden_count = rng.random_range(1..=max_hidden);
    let hidden: Vec<HiddenNode> = (0..hidden_count)
        .map(|_| random_hidden_node(rng, input_count, interval, link_density))
        .collect();
    let outputs = (0..class_count - 1)
        .map(|_| {
            let bias = interval.sample(rng);
            let coefficients = (0..hidden_count).map(|_| Some(interval.sample(rng))).collect();
            OutputNode::new(bias, coefficients)
        })
        .collect();
    PunnNetwork::new(input_count, class_count, hidden, outputs)
}
