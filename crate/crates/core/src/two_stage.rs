//! Two-stage evolution: two populations with `neu` and `neu + 1` maximum
//! hidden nodes are each evolved for a tenth of the generation budget, their
//! best halves are merged, and the merged population runs the main loop with
//! `neu + 1` as the node limit.

use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::engine::{
    evolve_generation, initialize_population, run_ea, EaParams, EvalCounter, GenerationSizes,
    GenerationStats, Individual, MutationState, Population,
};
use crate::error::{Error, Result};
use crate::rng::{substream, Stream};

/// Parameters of a two-stage run. `base.max_hidden` is `neu`;
/// `base.generations` is the full budget `gen` of the second stage.
#[derive(Debug, Clone, PartialEq)]
pub struct TseaParams {
    pub base: EaParams,
}

impl TseaParams {
    pub fn new(base: EaParams) -> Self {
        TseaParams { base }
    }

    pub fn neu(&self) -> usize {
        self.base.max_hidden
    }

    /// `floor(0.1 * gen)`.
    pub fn stage1_generations(&self) -> usize {
        self.base.generations / 10
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !self.base.pop_size.is_multiple_of(2) {
            return Err(Error::Argument("two-stage merge needs an even population size"));
        }
        Ok(())
    }

    /// Parameters of a seeding population with the given node limit. Seeding
    /// always runs its full fixed number of generations.
    pub fn seeding_params(&self, max_hidden: usize) -> EaParams {
        EaParams {
            max_hidden,
            generations: self.stage1_generations(),
            early_stopping: false,
            ..self.base.clone()
        }
    }

    /// Parameters of the main loop over the merged population.
    pub fn merged_params(&self) -> EaParams {
        EaParams {
            max_hidden: self.neu() + 1,
            ..self.base.clone()
        }
    }
}

/// Which seeding population an individual came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// Limited to `neu` hidden nodes.
    Small,
    /// Limited to `neu + 1` hidden nodes.
    Large,
}

/// The merged population with the origin of every member, aligned with
/// `population.individuals()`.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedPopulation {
    pub population: Population,
    pub origins: Vec<Origin>,
}

/// Best `half` of each population, sorted together. Ties keep the small
/// population's members first.
pub fn merge_populations(small: Population, large: Population, half: usize) -> MergedPopulation {
    let mut tagged: Vec<(Individual, Origin)> = small
        .into_individuals()
        .into_iter()
        .take(half)
        .map(|ind| (ind, Origin::Small))
        .chain(
            large
                .into_individuals()
                .into_iter()
                .take(half)
                .map(|ind| (ind, Origin::Large)),
        )
        .collect();
    tagged.sort_by(|a, b| a.0.rank_cmp(&b.0));
    let (individuals, origins): (Vec<_>, Vec<_>) = tagged.into_iter().unzip();
    MergedPopulation {
        // Already sorted; the stable re-sort is a no-op.
        population: Population::from_individuals(individuals),
        origins,
    }
}

/// Best fitness of each seeding population after the first stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedingSummary {
    pub small_best: f64,
    pub large_best: f64,
    pub generations: usize,
}

/// First stage: initializes and evolves both seeding populations on their own
/// substreams, then merges their best halves.
pub fn seed_population(
    params: &TseaParams,
    master_seed: u64,
    train: &Dataset,
    counter: &mut EvalCounter,
) -> Result<(MergedPopulation, SeedingSummary)> {
    params.validate()?;
    let neu = params.neu();
    let small = evolve_seed(params, neu, Stream::SeedPopulationSmall, master_seed, train, counter)?;
    let large = evolve_seed(params, neu + 1, Stream::SeedPopulationLarge, master_seed, train, counter)?;
    let summary = SeedingSummary {
        small_best: small.best().fitness(),
        large_best: large.best().fitness(),
        generations: params.stage1_generations(),
    };
    let merged = merge_populations(small, large, params.base.pop_size / 2);
    Ok((merged, summary))
}

fn evolve_seed(
    params: &TseaParams,
    max_hidden: usize,
    stream: Stream,
    master_seed: u64,
    train: &Dataset,
    counter: &mut EvalCounter,
) -> Result<Population> {
    let seed_params = params.seeding_params(max_hidden);
    let mut rng = substream(master_seed, stream);
    let mut population = initialize_population(&mut rng, &seed_params, train, counter)?;
    let mut state = MutationState::from_params(&seed_params);
    for _ in 0..seed_params.generations {
        evolve_generation(&mut population, &mut state, &mut rng, &seed_params, train, counter)?;
    }
    Ok(population)
}

/// Result of [`run_tsea`].
#[derive(Debug, Clone, PartialEq)]
pub struct TseaOutcome {
    pub best: Individual,
    pub evaluations: u64,
    pub seeding: SeedingSummary,
    /// Generations run by the main loop on the merged population.
    pub generations: usize,
    pub stopped_early: bool,
}

/// Full two-stage run. `observer` sees every generation of the second stage.
pub fn run_tsea(
    params: &TseaParams,
    master_seed: u64,
    train: &Dataset,
    observer: impl FnMut(&GenerationStats),
) -> Result<TseaOutcome> {
    let mut counter = EvalCounter::new();
    let (merged, seeding) = seed_population(params, master_seed, train, &mut counter)?;
    let main_params = params.merged_params();
    let mut rng = substream(master_seed, Stream::Merged);
    let mut state = MutationState::from_params(&main_params);
    let outcome = run_ea(
        merged.population,
        &mut state,
        &mut rng,
        &main_params,
        train,
        &mut counter,
        observer,
    )?;
    Ok(TseaOutcome {
        best: outcome.best,
        evaluations: counter.count(),
        seeding,
        generations: outcome.generations,
        stopped_early: outcome.stopped_early,
    })
}

/// Fitness evaluations of complete runs without early stopping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvaluationBudget {
    /// One single-population run: `10 N + 0.9 N gen`.
    pub edd_single: u64,
    /// The two single-population runs a two-stage run replaces.
    pub edd_pair: u64,
    /// One two-stage run: `2 (10 N + 0.9 N 0.1 gen) + 0.9 N gen`.
    pub tsea: u64,
    /// `round(100 (1 - tsea / edd_pair))`.
    pub reduction_percent: u32,
}

/// Closed-form evaluation counts. `0.9 N` and `0.1 gen` are taken as the
/// integer sizes the engine actually uses (`floor(9N/10)`, `floor(gen/10)`),
/// which are exact whenever `N` and `gen` are multiples of ten.
pub fn expected_evaluations(pop_size: u64, generations: u64) -> EvaluationBudget {
    let init = 10 * pop_size;
    let per_generation = GenerationSizes::for_population(pop_size as usize).working as u64;
    let edd_single = init + per_generation * generations;
    let edd_pair = 2 * edd_single;
    let tsea = 2 * (init + per_generation * (generations / 10)) + per_generation * generations;
    let ratio = if edd_pair == 0 {
        0.0
    } else {
        100.0 * (1.0 - tsea as f64 / edd_pair as f64)
    };
    EvaluationBudget {
        edd_single,
        edd_pair,
        tsea,
        reduction_percent: libm::round(ratio) as u32,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::tests_support::toy_data;
    use crate::network::{random_network, WeightInterval};
    use crate::rng::seeded;
    use alloc::vec;

    #[test]
    fn budget_rows() {
        let cases = [
            (100, 128_000, 200_000, 36),
            (120, 149_600, 236_000, 37),
            (150, 182_000, 290_000, 37),
            (300, 344_000, 560_000, 39),
            (500, 560_000, 920_000, 39),
        ];
        for (gen, tsea, pair, pct) in cases {
            let b = expected_evaluations(1000, gen);
            assert_eq!((b.tsea, b.edd_pair, b.reduction_percent), (tsea, pair, pct), "gen {gen}");
            assert_eq!(b.edd_single * 2, b.edd_pair);
        }
        assert_eq!(expected_evaluations(1000, 150).edd_single, 145_000);
    }

    fn with_fitness(values: &[f64]) -> Population {
        let net = random_network(&mut seeded(1), 2, 2, 2, &WeightInterval::DEFAULT, 0.5).unwrap();
        let inds = values
            .iter()
            .map(|&v| Individual::with_cached_fitness(net.clone(), v))
            .collect();
        Population::from_individuals(inds)
    }

    #[test]
    fn merge_interleaves_by_fitness() {
        let small = with_fitness(&[0.9, 0.8, 0.7, 0.6]);
        let large = with_fitness(&[0.85, 0.75, 0.65, 0.55]);
        let merged = merge_populations(small, large, 2);
        let got: Vec<f64> = merged.population.individuals().iter().map(Individual::fitness).collect();
        assert_eq!(got, vec![0.9, 0.85, 0.8, 0.75]);
        assert_eq!(
            merged.origins,
            vec![Origin::Small, Origin::Large, Origin::Small, Origin::Large]
        );
    }

    #[test]
    fn odd_population_rejected() {
        let params = TseaParams::new(EaParams {
            pop_size: 5,
            ..Default::default()
        });
        assert!(params.validate().is_err());
    }

    #[test]
    fn stage_lengths() {
        let p = TseaParams::new(EaParams {
            generations: 150,
            ..Default::default()
        });
        assert_eq!(p.stage1_generations(), 15);
        assert_eq!(p.merged_params().max_hidden, p.neu() + 1);
        assert!(!p.seeding_params(3).early_stopping);
    }

    #[test]
    fn full_run_matches_closed_form() {
        let train = toy_data();
        let params = TseaParams::new(EaParams {
            pop_size: 20,
            generations: 30,
            max_hidden: 2,
            early_stopping: false,
            ..Default::default()
        });
        let out = run_tsea(&params, 3, &train, |_| {}).unwrap();
        assert_eq!(out.evaluations, expected_evaluations(20, 30).tsea);
        assert_eq!(out.generations, 30);
        assert!(out.best.net().hidden_count() <= 3);
    }
}
