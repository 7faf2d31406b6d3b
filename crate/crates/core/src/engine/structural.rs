//! The five topology operators.

use alloc::vec::Vec;

use rand::Rng;

use super::EaParams;
use crate::network::{random_hidden_node, HiddenNode, PunnNetwork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StructuralOperator {
    AddNodes,
    DeleteNodes,
    AddLinks,
    DeleteLinks,
    FuseNodes,
}

impl StructuralOperator {
    /// Application order.
    pub const ALL: [StructuralOperator; 5] = [
        StructuralOperator::AddNodes,
        StructuralOperator::DeleteNodes,
        StructuralOperator::AddLinks,
        StructuralOperator::DeleteLinks,
        StructuralOperator::FuseNodes,
    ];

    fn bit(self) -> u8 {
        1 << self as u8
    }
}

/// A set of structural operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OperatorSet(u8);

impl OperatorSet {
    pub const ALL: OperatorSet = OperatorSet(0b1_1111);
    pub const NONE: OperatorSet = OperatorSet(0);

    pub fn only(op: StructuralOperator) -> Self {
        OperatorSet(op.bit())
    }

    pub fn contains(&self, op: StructuralOperator) -> bool {
        self.0 & op.bit() != 0
    }

    pub fn insert(&mut self, op: StructuralOperator) {
        self.0 |= op.bit();
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = StructuralOperator> {
        StructuralOperator::ALL
            .into_iter()
            .filter(move |op| self.contains(*op))
    }
}

/// Tries each enabled operator in order, firing each with probability
/// `temperature`. If none fired, one enabled operator is picked uniformly and
/// applied. Returns the operators that were applied (some may have been
/// no-ops because a bound was reached).
pub fn structural_mutation<R: Rng + ?Sized>(
    net: &mut PunnNetwork,
    temperature: f64,
    rng: &mut R,
    params: &EaParams,
) -> OperatorSet {
    let enabled = params.operators;
    let mut fired = OperatorSet::NONE;
    let p = temperature.clamp(0.0, 1.0);
    for op in enabled.iter() {
        if rng.random_bool(p) {
            apply(op, net, rng, params);
            fired.insert(op);
        }
    }
    if fired.is_empty() && !enabled.is_empty() {
        let pick = rng.random_range(0..enabled.len());
        let op = enabled.iter().nth(pick).expect("index below set size");
        apply(op, net, rng, params);
        fired.insert(op);
    }
    fired
}

fn apply<R: Rng + ?Sized>(
    op: StructuralOperator,
    net: &mut PunnNetwork,
    rng: &mut R,
    params: &EaParams,
) {
    match op {
        StructuralOperator::AddNodes => add_nodes(net, rng, params),
        StructuralOperator::DeleteNodes => delete_nodes(net, rng, params),
        StructuralOperator::AddLinks => add_links(net, rng, params),
        StructuralOperator::DeleteLinks => delete_links(net, rng, params),
        StructuralOperator::FuseNodes => fuse_nodes(net, rng, params),
    }
}

fn draw_count<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (usize, usize)) -> usize {
    rng.random_range(lo..=hi)
}

fn add_nodes<R: Rng + ?Sized>(net: &mut PunnNetwork, rng: &mut R, params: &EaParams) {
    let n = draw_count(rng, params.node_op_range);
    let interval = params.weight_interval;
    for _ in 0..n {
        if net.hidden_count() >= params.max_hidden {
            break;
        }
        let node = random_hidden_node(rng, net.input_count(), &interval, params.link_density);
        let coefficients: Vec<Option<f64>> = (0..net.outputs().len())
            .map(|_| Some(interval.sample(rng)))
            .collect();
        net.push_hidden(node, &coefficients);
    }
}

fn delete_nodes<R: Rng + ?Sized>(net: &mut PunnNetwork, rng: &mut R, params: &EaParams) {
    let n = draw_count(rng, params.node_op_range);
    for _ in 0..n {
        if net.hidden_count() <= 1 {
            break;
        }
        let victim = rng.random_range(0..net.hidden_count());
        net.remove_hidden(victim);
    }
}

#[derive(Debug, Clone, Copy)]
enum Link {
    Input { node: usize, input: usize },
    Output { output: usize, node: usize },
}

fn links(net: &PunnNetwork, present: bool) -> Vec<Link> {
    let mut found = Vec::new();
    for (node, h) in net.hidden().iter().enumerate() {
        for (input, w) in h.exponents().iter().enumerate() {
            if w.is_some() == present {
                found.push(Link::Input { node, input });
            }
        }
    }
    for (output, o) in net.outputs().iter().enumerate() {
        for (node, c) in o.coefficients().iter().enumerate() {
            if c.is_some() == present {
                found.push(Link::Output { output, node });
            }
        }
    }
    found
}

fn slot(net: &mut PunnNetwork, link: Link) -> &mut Option<f64> {
    match link {
        Link::Input { node, input } => &mut net.hidden_mut()[node].exponents_mut()[input],
        Link::Output { output, node } => &mut net.outputs_mut()[output].coefficients_mut()[node],
    }
}

fn add_links<R: Rng + ?Sized>(net: &mut PunnNetwork, rng: &mut R, params: &EaParams) {
    let n = draw_count(rng, params.link_op_range);
    let mut absent = links(net, false);
    for _ in 0..n {
        if absent.is_empty() {
            break;
        }
        let link = absent.swap_remove(rng.random_range(0..absent.len()));
        *slot(net, link) = Some(params.weight_interval.sample(rng));
    }
}

fn delete_links<R: Rng + ?Sized>(net: &mut PunnNetwork, rng: &mut R, params: &EaParams) {
    let n = draw_count(rng, params.link_op_range);
    let mut present = links(net, true);
    for _ in 0..n {
        if present.is_empty() {
            break;
        }
        let link = present.swap_remove(rng.random_range(0..present.len()));
        *slot(net, link) = None;
    }
}

/// Replaces two distinct nodes by one. Shared input links take the mean
/// exponent, links held by one parent survive with probability 1/2, and
/// output coefficients are summed (clamped to the weight interval).
fn fuse_nodes<R: Rng + ?Sized>(net: &mut PunnNetwork, rng: &mut R, params: &EaParams) {
    let m = net.hidden_count();
    if m < 2 {
        return;
    }
    let a = rng.random_range(0..m);
    let mut b = rng.random_range(0..m - 1);
    if b >= a {
        b += 1;
    }
    let exponents = net.hidden()[a]
        .exponents()
        .iter()
        .zip(net.hidden()[b].exponents())
        .map(|(wa, wb)| match (*wa, *wb) {
            (Some(x), Some(y)) => Some(0.5 * (x + y)),
            (Some(x), None) | (None, Some(x)) => rng.random_bool(0.5).then_some(x),
            (None, None) => None,
        })
        .collect();
    let interval = params.weight_interval;
    let coefficients: Vec<Option<f64>> = net
        .outputs()
        .iter()
        .map(|o| match (o.coefficients()[a], o.coefficients()[b]) {
            (Some(x), Some(y)) => Some(interval.clamp(x + y)),
            (Some(x), None) | (None, Some(x)) => Some(x),
            (None, None) => None,
        })
        .collect();
    net.push_hidden(HiddenNode::new(exponents), &coefficients);
    let (first, second) = if a > b { (a, b) } else { (b, a) };
    net.remove_hidden(first);
    net.remove_hidden(second);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{random_network, OutputNode, WeightInterval};
    use crate::rng::seeded;
    use alloc::vec;

    fn params_with(op: StructuralOperator, max_hidden: usize) -> EaParams {
        EaParams {
            max_hidden,
            operators: OperatorSet::only(op),
            ..Default::default()
        }
    }

    fn two_node_net(wa: [Option<f64>; 2], wb: [Option<f64>; 2]) -> PunnNetwork {
        PunnNetwork::new(
            2,
            2,
            vec![HiddenNode::new(wa.to_vec()), HiddenNode::new(wb.to_vec())],
            vec![OutputNode::new(0.5, vec![Some(1.0), Some(2.0)])],
        )
        .unwrap()
    }

    #[test]
    fn delete_keeps_last_node() {
        let mut net = random_network(&mut seeded(1), 3, 1, 2, &WeightInterval::DEFAULT, 1.0).unwrap();
        let before = net.clone();
        let params = params_with(StructuralOperator::DeleteNodes, 4);
        for seed in 0..20 {
            let fired = structural_mutation(&mut net, 0.9, &mut seeded(seed), &params);
            assert!(fired.contains(StructuralOperator::DeleteNodes));
        }
        assert_eq!(net, before);
    }

    #[test]
    fn add_respects_max_hidden() {
        let mut net = random_network(&mut seeded(2), 3, 1, 3, &WeightInterval::DEFAULT, 1.0).unwrap();
        let params = params_with(StructuralOperator::AddNodes, 1);
        let before = net.clone();
        structural_mutation(&mut net, 0.5, &mut seeded(3), &params);
        assert_eq!(net, before);

        let params = params_with(StructuralOperator::AddNodes, 3);
        for seed in 0..20 {
            structural_mutation(&mut net, 0.5, &mut seeded(seed), &params);
            assert!(net.hidden_count() <= 3);
        }
        assert_eq!(net.hidden_count(), 3);
        // New nodes are wired to every output.
        assert!(net.outputs().iter().all(|o| o.link_count() == 3));
    }

    #[test]
    fn fusion_averages_shared_exponents_and_sums_coefficients() {
        let mut net = two_node_net([Some(2.0), None], [Some(4.0), None]);
        let params = params_with(StructuralOperator::FuseNodes, 4);
        structural_mutation(&mut net, 0.0, &mut seeded(0), &params);
        assert_eq!(net.hidden_count(), 1);
        assert_eq!(net.hidden()[0].exponents(), &[Some(3.0), None]);
        assert_eq!(net.outputs()[0].coefficients(), &[Some(3.0)]);
        assert_eq!(net.outputs()[0].bias(), 0.5);
    }

    #[test]
    fn fusion_keeps_unshared_links_about_half_the_time() {
        let params = params_with(StructuralOperator::FuseNodes, 4);
        let mut kept = 0;
        let trials = 2000;
        let mut rng = seeded(17);
        for _ in 0..trials {
            let mut net = two_node_net([Some(1.0), None], [None, None]);
            structural_mutation(&mut net, 0.0, &mut rng, &params);
            if net.hidden()[0].exponents()[0] == Some(1.0) {
                kept += 1;
            }
        }
        let freq = kept as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 4.0 * (0.25f64 / trials as f64).sqrt());
    }

    #[test]
    fn fusion_is_noop_for_single_node() {
        let mut net = random_network(&mut seeded(4), 2, 1, 2, &WeightInterval::DEFAULT, 1.0).unwrap();
        let before = net.clone();
        structural_mutation(&mut net, 0.3, &mut seeded(5), &params_with(StructuralOperator::FuseNodes, 3));
        assert_eq!(net, before);
    }

    #[test]
    fn link_operators_change_link_counts() {
        let mut net = random_network(&mut seeded(6), 4, 1, 2, &WeightInterval::DEFAULT, 0.5).unwrap();
        let base = net.count_connections();
        structural_mutation(&mut net, 0.0, &mut seeded(7), &params_with(StructuralOperator::AddLinks, 3));
        let grown = net.count_connections();
        assert!(grown > base && grown <= base + 2);
        structural_mutation(&mut net, 0.0, &mut seeded(8), &params_with(StructuralOperator::DeleteLinks, 3));
        assert!(net.count_connections() < grown);
    }

    #[test]
    fn add_links_noop_when_fully_connected() {
        let mut net = random_network(&mut seeded(9), 3, 1, 2, &WeightInterval::DEFAULT, 1.0).unwrap();
        let before = net.clone();
        structural_mutation(&mut net, 0.0, &mut seeded(1), &params_with(StructuralOperator::AddLinks, 3));
        assert_eq!(net, before);
    }

    #[test]
    fn delete_links_noop_when_nothing_to_delete() {
        let mut net = PunnNetwork::new(
            2,
            2,
            vec![HiddenNode::unlinked(2)],
            vec![OutputNode::new(1.0, vec![None])],
        )
        .unwrap();
        let before = net.clone();
        structural_mutation(&mut net, 0.0, &mut seeded(1), &params_with(StructuralOperator::DeleteLinks, 3));
        assert_eq!(net, before);
    }

    #[test]
    fn fallback_applies_exactly_one_operator_at_zero_temperature() {
        let params = EaParams::default();
        for seed in 0..50 {
            let mut net = random_network(&mut seeded(seed), 3, 3, 2, &WeightInterval::DEFAULT, 0.5).unwrap();
            let fired = structural_mutation(&mut net, 0.0, &mut seeded(seed + 100), &params);
            assert_eq!(fired.len(), 1);
        }
    }

    #[test]
    fn no_enabled_operators_is_identity() {
        let params = EaParams {
            operators: OperatorSet::NONE,
            ..Default::default()
        };
        let mut net = random_network(&mut seeded(3), 3, 3, 2, &WeightInterval::DEFAULT, 0.5).unwrap();
        let before = net.clone();
        assert!(structural_mutation(&mut net, 0.7, &mut seeded(0), &params).is_empty());
        assert_eq!(net, before);
    }
}
