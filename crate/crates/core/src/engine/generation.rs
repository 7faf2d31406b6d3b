use alloc::vec::Vec;

use rand::Rng;

use super::{
    initialize_population, parametric_mutation, structural_mutation, EaParams, EvalCounter,
    Individual, MutationState, Population,
};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::metrics;
use crate::rng::{substream, Stream};

/// How a population of size `N` is divided in one generation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenerationSizes {
    /// Unmutated copies of the best individuals.
    pub elite: usize,
    /// Individuals mutated and re-evaluated, `floor(0.9 N)`.
    pub working: usize,
    /// Head of the working set that receives parametric mutation.
    pub parametric: usize,
    /// Rest of the working set, which receives structural mutation.
    pub structural: usize,
}

impl GenerationSizes {
    pub fn for_population(pop_size: usize) -> Self {
        let working = 9 * pop_size / 10;
        let elite = pop_size - working;
        let parametric = (working / 10).max(1).min(working);
        GenerationSizes {
            elite,
            working,
            parametric,
            structural: working - parametric,
        }
    }
}

/// Per-generation summary passed to the observer of [`run_ea`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    /// 1-based index of the generation just completed.
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    /// Training CCR (%) of the best individual.
    pub best_ccr: f64,
    pub evaluations: u64,
}

/// Result of [`run_ea`].
#[derive(Debug, Clone, PartialEq)]
pub struct EaOutcome {
    pub best: Individual,
    pub generations: usize,
    pub stopped_early: bool,
    pub population: Population,
}

/// Result of a complete run from initialization.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub best: Individual,
    pub generations: usize,
    pub evaluations: u64,
}

/// One generation: elite copies of the best tenth are set aside, the
/// parametric head and structural tail of the working set are mutated and
/// evaluated, and the union is sorted. The variance scales are adapted at the
/// end of the generation.
///
/// All random draws happen in population order, so a seed fixes the result.
pub fn evolve_generation<R: Rng + ?Sized>(
    population: &mut Population,
    state: &mut MutationState,
    rng: &mut R,
    params: &EaParams,
    train: &Dataset,
    counter: &mut EvalCounter,
) -> Result<()> {
    let n = population.len();
    if n == 0 {
        return Err(Error::Argument("cannot evolve an empty population"));
    }
    let sizes = GenerationSizes::for_population(n);
    let current = population.individuals();
    let mut next = Vec::with_capacity(n);
    for parent in &current[..sizes.parametric] {
        next.push(parametric_mutation(parent, state, rng, params, train, counter)?);
    }
    for parent in &current[sizes.parametric..sizes.working] {
        let mut net = parent.net().clone();
        structural_mutation(&mut net, parent.temperature(), rng, params);
        next.push(Individual::evaluate(net, train, counter)?);
    }
    next.extend_from_slice(&current[..sizes.elite]);
    state.adapt();
    *population = Population::from_individuals(next);
    Ok(())
}

/// Runs generations until `params.generations` is reached or, with early
/// stopping on, until neither the best nor the mean fitness has risen above
/// its running maximum (by more than `improvement_epsilon`) for
/// `gen_without_improving` consecutive generations.
pub fn run_ea<R: Rng + ?Sized>(
    mut population: Population,
    state: &mut MutationState,
    rng: &mut R,
    params: &EaParams,
    train: &Dataset,
    counter: &mut EvalCounter,
    mut observer: impl FnMut(&GenerationStats),
) -> Result<EaOutcome> {
    if population.is_empty() {
        return Err(Error::Argument("cannot evolve an empty population"));
    }
    let mut best_seen = population.best().fitness();
    let mut mean_seen = population.mean_fitness();
    let mut stale = 0usize;
    let mut generation = 0usize;
    let mut stopped_early = false;
    while generation < params.generations {
        evolve_generation(&mut population, state, rng, params, train, counter)?;
        generation += 1;

        let best = population.best().fitness();
        let mean = population.mean_fitness();
        observer(&GenerationStats {
            generation,
            best_fitness: best,
            mean_fitness: mean,
            best_ccr: metrics::correct_classification_rate(population.best().net(), train)?,
            evaluations: counter.count(),
        });

        let mut improved = false;
        if best > best_seen + params.improvement_epsilon {
            improved = true;
        }
        if mean > mean_seen + params.improvement_epsilon {
            improved = true;
        }
        best_seen = best_seen.max(best);
        mean_seen = mean_seen.max(mean);
        stale = if improved { 0 } else { stale + 1 };
        if params.early_stopping && stale >= params.gen_without_improving {
            stopped_early = generation < params.generations;
            break;
        }
    }
    Ok(EaOutcome {
        best: population.best().clone(),
        generations: generation,
        stopped_early,
        population,
    })
}

/// A single-population run: initialization followed by the main loop, all
/// driven by the main substream of `seed`.
pub fn evolve(
    params: &EaParams,
    seed: u64,
    train: &Dataset,
    observer: impl FnMut(&GenerationStats),
) -> Result<RunOutcome> {
    let mut rng = substream(seed, Stream::Main);
    let mut counter = EvalCounter::new();
    let population = initialize_population(&mut rng, params, train, &mut counter)?;
    let mut state = MutationState::from_params(params);
    let outcome = run_ea(
        population,
        &mut state,
        &mut rng,
        params,
        train,
        &mut counter,
        observer,
    )?;
    Ok(RunOutcome {
        best: outcome.best,
        generations: outcome.generations,
        evaluations: counter.count(),
    })
}
