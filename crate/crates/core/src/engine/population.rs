use alloc::vec::Vec;
use core::cmp::Ordering;

use rand::Rng;

use super::{EaParams, EvalCounter};
use crate::dataset::Dataset;
use crate::error::Result;
use crate::metrics;
use crate::network::{random_network, PunnNetwork};

/// A network together with its fitness on the training set.
///
/// Individuals are immutable: every mutation builds a new network that is
/// evaluated into a new `Individual`, so the cached values never go stale.
#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    net: PunnNetwork,
    fitness: f64,
    connections: usize,
}

impl Individual {
    /// Computes the fitness of `net` on `train`, counting one evaluation.
    pub fn evaluate(net: PunnNetwork, train: &Dataset, counter: &mut EvalCounter) -> Result<Self> {
        let fitness = metrics::fitness(&net, train)?;
        counter.record();
        let connections = net.count_connections();
        Ok(Individual {
            net,
            fitness,
            connections,
        })
    }

    /// An individual whose cached fitness is taken on trust. Meant for
    /// tests and for restoring snapshots; prefer [`Individual::evaluate`].
    pub fn with_cached_fitness(net: PunnNetwork, fitness: f64) -> Self {
        let connections = net.count_connections();
        Individual {
            net,
            fitness,
            connections,
        }
    }

    pub fn net(&self) -> &PunnNetwork {
        &self.net
    }

    pub fn into_net(self) -> PunnNetwork {
        self.net
    }

    pub fn fitness(&self) -> f64 {
        self.fitness
    }

    pub fn connections(&self) -> usize {
        self.connections
    }

    /// `T = 1 - A`, in `[0, 1)`.
    pub fn temperature(&self) -> f64 {
        1.0 - self.fitness
    }

    /// Ranking order: higher fitness first, then fewer connections.
    pub fn rank_cmp(&self, other: &Individual) -> Ordering {
        other
            .fitness
            .total_cmp(&self.fitness)
            .then(self.connections.cmp(&other.connections))
    }
}

/// Individuals sorted best first.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    individuals: Vec<Individual>,
}

impl Population {
    /// Sorts `individuals` (stable) into ranking order.
    pub fn from_individuals(mut individuals: Vec<Individual>) -> Self {
        individuals.sort_by(Individual::rank_cmp);
        Population { individuals }
    }

    pub fn len(&self) -> usize {
        self.individuals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.individuals.is_empty()
    }

    pub fn individuals(&self) -> &[Individual] {
        &self.individuals
    }

    pub fn into_individuals(self) -> Vec<Individual> {
        self.individuals
    }

    /// The best individual. Panics on an empty population.
    pub fn best(&self) -> &Individual {
        &self.individuals[0]
    }

    pub fn mean_fitness(&self) -> f64 {
        let total: f64 = self.individuals.iter().map(Individual::fitness).sum();
        total / self.individuals.len() as f64
    }

    /// Keeps the best `n` individuals.
    pub fn truncate(&mut self, n: usize) {
        self.individuals.truncate(n);
    }
}

/// Generates `init_multiplier * pop_size` random networks, evaluates all of
/// them and keeps the best `pop_size`.
pub fn initialize_population<R: Rng + ?Sized>(
    rng: &mut R,
    params: &EaParams,
    train: &Dataset,
    counter: &mut EvalCounter,
) -> Result<Population> {
    params.validate()?;
    let candidates = params.init_multiplier * params.pop_size;
    let mut individuals = Vec::with_capacity(candidates);
    for _ in 0..candidates {
        let net = random_network(
            rng,
            train.input_count(),
            params.max_hidden,
            train.class_count(),
            &params.weight_interval,
            params.link_density,
        )?;
        individuals.push(Individual::evaluate(net, train, counter)?);
    }
    let mut population = Population::from_individuals(individuals);
    population.truncate(params.pop_size);
    Ok(population)
}
