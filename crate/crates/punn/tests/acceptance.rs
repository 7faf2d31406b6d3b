//! End-to-end acceptance checks. Prints one PASS/FAIL line per check and a
//! summary line per criterion; exits non-zero if any check fails.
//!
//! Run alone with `cargo test -p punn --test acceptance`.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use punn::experiment::{run_experiment, summarize, train_model};
use punn::presets::{find_preset, lookup_preset, ConfigId, RunConfig, PRESETS};
use punn::split::{stratified_holdout, stratified_indices, train_counts};
use punn::{load_dataset_dir, ProcessedDataset, TRAIN_RATIO};
use punn_core::engine::{
    evolve, initialize_population, run_ea, structural_mutation, EaParams, EvalCounter,
    MutationState,
};
use punn_core::metrics::cross_entropy_error;
use punn_core::network::random_network;
use punn_core::rng::seeded;
use punn_core::softmax::{class_probabilities, softmax};
use punn_core::two_stage::{run_tsea, seed_population, Origin};
use punn_core::{expected_evaluations, Dataset, PunnNetwork, TseaParams, WeightInterval};
use rand::Rng;

/// Holdout seed shared by every run on real data.
const SPLIT_SEED: u64 = 1;
const MASTER_SEED: u64 = 0;

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

fn load_split(name: &str) -> (ProcessedDataset, ProcessedDataset) {
    let full = load_dataset_dir(data_dir().join(name)).expect("dataset loads");
    stratified_holdout(&full, TRAIN_RATIO, SPLIT_SEED).expect("dataset splits")
}

type Suite = (&'static str, fn() -> Criterion);

struct Criterion {
    id: &'static str,
    title: &'static str,
    checks: Vec<(bool, String)>,
}

impl Criterion {
    fn new(id: &'static str, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, pass: bool, detail: impl Into<String>) {
        let detail = detail.into();
        println!("  {} {}: {}", if pass { "PASS" } else { "FAIL" }, self.id, detail);
        self.checks.push((pass, detail));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(p, _)| *p)
    }
}

// ---------------------------------------------------------------------------
// 1. Evaluation accounting

fn evaluation_accounting() -> Criterion {
    let mut c = Criterion::new("C1", "evaluation accounting");
    let rows: [(u64, u64, u64, u32); 5] = [
        (100, 128_000, 200_000, 36),
        (120, 149_600, 236_000, 37),
        (150, 182_000, 290_000, 37),
        (300, 344_000, 560_000, 39),
        (500, 560_000, 920_000, 39),
    ];
    for (gen, tsea, pair, pct) in rows {
        let out = Command::new(env!("CARGO_BIN_EXE_punn"))
            .args(["evals", "--pop", "1000", "--gen", &gen.to_string()])
            .output()
            .expect("evals runs");
        let stdout = String::from_utf8_lossy(&out.stdout);
        let fields: Vec<u64> = stdout
            .lines()
            .nth(1)
            .unwrap_or_default()
            .split('\t')
            .filter_map(|f| f.parse().ok())
            .collect();
        let got = (fields.get(2).copied(), fields.get(1).copied(), fields.get(3).copied());
        c.check(
            out.status.success() && got == (Some(tsea), Some(pair), Some(pct as u64)),
            format!("evals --gen {gen}: tsea/edd_pair/reduction = {got:?}, want ({tsea}, {pair}, {pct}%)"),
        );
    }

    let (train, _) = load_split("pima");
    let small = train.subset(&(0..40).collect::<Vec<_>>()).to_dataset().unwrap();
    let params = TseaParams::new(EaParams {
        pop_size: 1000,
        generations: 20,
        max_hidden: 3,
        early_stopping: false,
        ..Default::default()
    });
    let out = run_tsea(&params, 5, &small, |_| {}).unwrap();
    let want = expected_evaluations(1000, 20).tsea;
    c.check(
        out.evaluations == want,
        format!("instrumented two-stage run, N=1000 gen=20: counter {} vs closed form {want}", out.evaluations),
    );
    let single = evolve(&params.base, 5, &small, |_| {}).unwrap();
    let want = expected_evaluations(1000, 20).edd_single;
    c.check(
        single.evaluations == want,
        format!("instrumented single run, N=1000 gen=20: counter {} vs closed form {want}", single.evaluations),
    );
    c
}

// ---------------------------------------------------------------------------
// 2. Accuracy

fn accuracy_cell(c: &mut Criterion, name: &str, config: ConfigId, target: f64, tolerance: f64) {
    let start = Instant::now();
    let (train, test) = load_split(name);
    let rc = RunConfig::from_preset(config, lookup_preset(name).unwrap());
    let records = run_experiment(
        &rc,
        30,
        MASTER_SEED,
        &train.to_dataset().unwrap(),
        &test.to_dataset().unwrap(),
        std::thread::available_parallelism().map_or(1, |n| n.get()),
    )
    .unwrap();
    let s = summarize(&records).unwrap();
    let mean = s.ccr_test.mean;
    c.check(
        records.len() == 30 && (mean - target).abs() <= tolerance,
        format!(
            "{name} config {config}, 30 runs: test CCR {mean:.2} +- {:.2} (target {target:.2} +- {tolerance:.1}), connections {:.2}, {:.0}s",
            s.ccr_test.sd,
            s.connections.mean,
            start.elapsed().as_secs_f64()
        ),
    );
}

fn accuracy() -> Criterion {
    let mut c = Criterion::new("C2", "accuracy over 30 seeded runs");
    accuracy_cell(&mut c, "pima", ConfigId::OneStar, 78.63, 3.0);
    accuracy_cell(&mut c, "cancer", ConfigId::TwoStar, 98.98, 1.5);
    accuracy_cell(&mut c, "balance", ConfigId::OneStar, 96.20, 3.0);
    c
}

// ---------------------------------------------------------------------------
// 3. Pipeline fidelity

/// Encoded input counts that differ from the published table, with the
/// reason. Both come from how the public copies of these datasets are
/// coded.
const INPUT_DEVIATIONS: [(&str, usize, &str); 2] = [
    (
        "australian",
        42,
        "eight nominal columns expand to 36 indicators, plus six continuous columns; 51 would need a different coding of the public file",
    ),
    (
        "heart",
        25,
        "four binary and three multi-valued nominal columns expand to 19 indicators, plus six continuous columns",
    ),
];

/// Class counts of presets whose data is not bundled; split totals are
/// checked from the counts alone.
const COUNT_ONLY: [(&str, &[usize]); 3] = [
    ("horse", &[232, 136]),
    ("hypothyroid", &[3481, 194, 95, 2]),
    ("waveform", &[1692, 1653, 1655]),
];

fn pipeline_fidelity() -> Criterion {
    let mut c = Criterion::new("C3", "pipeline fidelity");
    for p in PRESETS.iter().filter(|p| p.is_available()) {
        let (total, want_train, want_test) = p.patterns;
        let dir = data_dir().join(p.name);
        if !dir.exists() {
            let counts = COUNT_ONLY
                .iter()
                .find(|(n, _)| *n == p.name)
                .map(|(_, counts)| counts.to_vec())
                .expect("class counts for every preset without data");
            let train: usize = train_counts(&counts, TRAIN_RATIO).unwrap().iter().sum();
            let n: usize = counts.iter().sum();
            c.check(
                n == total && (train, n - train) == (want_train, want_test),
                format!("{} split from class counts: {train}/{} (want {want_train}/{want_test})", p.name, n - train),
            );
            continue;
        }
        let full = load_dataset_dir(&dir).unwrap();
        let (train, test) = stratified_holdout(&full, TRAIN_RATIO, SPLIT_SEED).unwrap();
        c.check(
            full.len() == total && (train.len(), test.len()) == (want_train, want_test),
            format!(
                "{} split: {}/{} of {} (want {want_train}/{want_test} of {total})",
                p.name,
                train.len(),
                test.len(),
                full.len()
            ),
        );
        let inputs = full.input_count();
        match INPUT_DEVIATIONS.iter().find(|(n, _, _)| *n == p.name) {
            Some((_, documented, reason)) => c.check(
                inputs == *documented,
                format!("{} inputs: {inputs} (published {}), documented deviation: {reason}", p.name, p.inputs),
            ),
            None => c.check(
                inputs == p.inputs,
                format!("{} inputs: {inputs} (want {})", p.name, p.inputs),
            ),
        }
    }
    c
}

// ---------------------------------------------------------------------------
// 4. Property suite

fn random_dataset(rng: &mut impl Rng, inputs: usize, classes: usize, len: usize) -> Dataset {
    let rows: Vec<Vec<f64>> = (0..len)
        .map(|_| (0..inputs).map(|_| rng.random_range(1.0..=2.0)).collect())
        .collect();
    let labels = (0..len).map(|_| rng.random_range(0..classes)).collect();
    Dataset::from_rows(classes, &rows, labels).unwrap()
}

fn brute_force_outputs(net: &PunnNetwork, x: &[f64]) -> Vec<f64> {
    net.outputs()
        .iter()
        .map(|out| {
            let mut f = out.bias();
            for (node, beta) in net.hidden().iter().zip(out.coefficients()) {
                if let Some(beta) = beta {
                    let mut product = 1.0;
                    for (xi, w) in x.iter().zip(node.exponents()) {
                        if let Some(w) = w {
                            product *= xi.powf(*w);
                        }
                    }
                    f += beta * product;
                }
            }
            f
        })
        .collect()
}

fn toy_problem() -> Dataset {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..6 {
        for j in 0..6 {
            let (x, y) = (1.0 + i as f64 / 5.0, 1.0 + j as f64 / 5.0);
            rows.push(vec![x, y]);
            labels.push(usize::from(x * x > y * 1.2));
        }
    }
    Dataset::from_rows(2, &rows, labels).unwrap()
}

fn property_suite() -> Criterion {
    let mut c = Criterion::new("C4", "property suite");
    let mut rng = seeded(4);
    let iv = WeightInterval::DEFAULT;

    let mut worst_sum: f64 = 0.0;
    let mut worst_shift: f64 = 0.0;
    for _ in 0..1000 {
        let len = rng.random_range(1..8);
        let outputs: Vec<f64> = (0..len).map(|_| rng.random_range(-60.0..60.0)).collect();
        let shift = rng.random_range(-100.0..100.0);
        let p = class_probabilities(&outputs).unwrap();
        worst_sum = worst_sum.max((p.probabilities().iter().sum::<f64>() - 1.0).abs());
        let shifted: Vec<f64> = outputs.iter().map(|f| f + shift).chain([shift]).collect();
        let q = softmax(&shifted).unwrap();
        for (a, b) in p.probabilities().iter().zip(q.probabilities()) {
            worst_shift = worst_shift.max((a - b).abs());
        }
    }
    c.check(worst_sum <= 1e-9, format!("softmax sums to 1, 1000 cases, worst {worst_sum:.1e}"));
    c.check(worst_shift <= 1e-12, format!("softmax shift invariance, 1000 cases, worst {worst_shift:.1e}"));

    let mut worst: f64 = 0.0;
    let mut compared = 0;
    while compared < 1000 {
        let inputs = rng.random_range(1..6);
        let classes = rng.random_range(2..5);
        let len = rng.random_range(1..25);
        let data = random_dataset(&mut rng, inputs, classes, len);
        let hidden = rng.random_range(1..5);
        let net = random_network(&mut rng, inputs, hidden, classes, &iv, 0.5).unwrap();
        let mut direct = 0.0;
        let mut finite = true;
        for i in 0..data.len() {
            let g = class_probabilities(&net.evaluate_outputs(data.pattern(i)).unwrap()).unwrap();
            let gy = g.probabilities()[data.label(i)];
            finite &= gy >= f64::MIN_POSITIVE;
            direct -= gy.ln();
        }
        if !finite {
            continue;
        }
        direct /= data.len() as f64;
        worst = worst.max((cross_entropy_error(&net, &data).unwrap() - direct).abs());
        compared += 1;
    }
    c.check(worst <= 1e-9, format!("direct vs log-sum-exp cross-entropy, 1000 cases, worst {worst:.1e}"));

    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let inputs = rng.random_range(1..=3);
        let (hidden, classes) = (rng.random_range(1..=3), rng.random_range(2..5));
        let net = random_network(&mut rng, inputs, hidden, classes, &iv, 0.5).unwrap();
        let x: Vec<f64> = (0..inputs).map(|_| rng.random_range(1.0..=2.0)).collect();
        let got = net.evaluate_outputs(&x).unwrap();
        for (a, b) in got.iter().zip(brute_force_outputs(&net, &x)) {
            worst = worst.max((a - b).abs());
        }
    }
    c.check(worst <= 1e-12, format!("forward pass vs term-by-term product, 1000 cases, worst {worst:.1e}"));

    let train = toy_problem();
    let params = EaParams {
        pop_size: 20,
        generations: 50,
        early_stopping: false,
        ..Default::default()
    };
    let mut monotone = true;
    for seed in 0..100 {
        let mut r = seeded(seed);
        let mut counter = EvalCounter::new();
        let pop = initialize_population(&mut r, &params, &train, &mut counter).unwrap();
        let mut best = pop.best().fitness();
        let mut state = MutationState::from_params(&params);
        run_ea(pop, &mut state, &mut r, &params, &train, &mut counter, |s| {
            monotone &= s.best_fitness >= best;
            best = s.best_fitness;
        })
        .unwrap();
    }
    c.check(monotone, "best fitness non-decreasing, 50 generations x 100 seeds");

    let mut ok = true;
    let mut mutations = 0;
    while mutations < 10_000 {
        let max_hidden = rng.random_range(1..6);
        let params = EaParams {
            max_hidden,
            ..Default::default()
        };
        let (inputs, classes) = (rng.random_range(1..8), rng.random_range(2..5));
        let mut net = random_network(&mut rng, inputs, max_hidden, classes, &iv, 0.5).unwrap();
        for _ in 0..100 {
            structural_mutation(&mut net, rng.random(), &mut rng, &params);
            ok &= (1..=max_hidden).contains(&net.hidden_count()) && net.respects_interval(&iv);
            mutations += 1;
        }
    }
    c.check(ok, "structural mutation keeps node bounds and weight interval, 10000 mutations");

    let (train, test) = load_split("pima");
    let (train, test) = (train.to_dataset().unwrap(), test.to_dataset().unwrap());
    let mut rc = RunConfig::from_preset(ConfigId::OneStar, find_preset("pima").unwrap());
    rc.pop_size = 100;
    rc.generations = 30;
    let (ra, ma) = train_model(&rc, 42, &train, &test, |_| {}).unwrap();
    let (rb, mb) = train_model(&rc, 42, &train, &test, |_| {}).unwrap();
    c.check(
        ma.to_text() == mb.to_text() && ra.evaluations == rb.evaluations && ra.same_outcome(&rb),
        format!("same seed, same model text and counter ({} evaluations)", ra.evaluations),
    );

    let mut partition = true;
    let mut worst_dev: f64 = 0.0;
    for _ in 0..100 {
        let classes = rng.random_range(2..6);
        let n = rng.random_range(classes * 2..400);
        let mut labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        for (c, l) in labels.iter_mut().take(2 * classes).enumerate() {
            *l = c % classes;
        }
        let (tr, te) = stratified_indices(&labels, classes, TRAIN_RATIO, rng.random()).unwrap();
        let mut all: Vec<usize> = tr.iter().chain(&te).copied().collect();
        all.sort_unstable();
        partition &= all == (0..n).collect::<Vec<_>>();
        for class in 0..classes {
            let n_c = labels.iter().filter(|&&l| l == class).count();
            let t_c = tr.iter().filter(|&&i| labels[i] == class).count();
            worst_dev = worst_dev.max((t_c as f64 - TRAIN_RATIO * n_c as f64).abs());
        }
    }
    c.check(
        partition && worst_dev <= 1.0,
        format!("stratified split is a partition, 100 datasets, worst per-class deviation {worst_dev:.2}"),
    );
    c
}

// ---------------------------------------------------------------------------
// 5. Two-stage merge

fn merge_structure() -> Criterion {
    let mut c = Criterion::new("C5", "two-stage merge structure");
    let (train, _) = load_split("pima");
    let train = train.to_dataset().unwrap();
    let preset = find_preset("pima").unwrap();
    let params = RunConfig::from_preset(ConfigId::OneStar, preset).tsea_params();
    let neu = params.neu();
    let n = params.base.pop_size;
    let mut counter = EvalCounter::new();
    let (merged, _) = seed_population(&params, MASTER_SEED, &train, &mut counter).unwrap();
    let pop = &merged.population;
    let small = merged.origins.iter().filter(|&&o| o == Origin::Small).count();
    let large = merged.origins.iter().filter(|&&o| o == Origin::Large).count();
    c.check(
        pop.len() == n && small == n / 2 && large == n / 2,
        format!("size {} with {small} from the neu={neu} population and {large} from neu+1", pop.len()),
    );
    let sorted = pop.individuals().windows(2).all(|w| w[0].fitness() >= w[1].fitness());
    c.check(sorted, "merged population sorted by fitness");
    let max_nodes = pop.individuals().iter().map(|i| i.net().hidden_count()).max().unwrap();
    let small_ok = pop
        .individuals()
        .iter()
        .zip(&merged.origins)
        .all(|(i, o)| *o == Origin::Large || i.net().hidden_count() <= neu);
    c.check(
        max_nodes <= neu + 1 && small_ok,
        format!("hidden nodes at most neu+1 = {} (largest {max_nodes})", neu + 1),
    );
    c
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    if args.iter().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let filter = args.iter().skip(1).find(|a| !a.starts_with('-')).cloned();
    let suites: [Suite; 5] = [
        ("C1", evaluation_accounting),
        ("C2", accuracy),
        ("C3", pipeline_fidelity),
        ("C4", property_suite),
        ("C5", merge_structure),
    ];
    let mut results = Vec::new();
    for (id, run) in suites {
        if filter.as_deref().is_some_and(|f| !id.eq_ignore_ascii_case(f)) {
            continue;
        }
        println!("{id}");
        results.push(run());
    }
    println!();
    for c in &results {
        let failed = c.checks.iter().filter(|(p, _)| !p).count();
        println!(
            "{} {} {} ({} checks, {failed} failed)",
            if c.passed() { "PASS" } else { "FAIL" },
            c.id,
            c.title,
            c.checks.len()
        );
    }
    if results.iter().all(Criterion::passed) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
