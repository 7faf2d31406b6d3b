//! Seeded repeated runs, summary statistics and CSV reports.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use punn_core::engine::{evolve, GenerationStats};
use punn_core::metrics::correct_classification_rate;
use punn_core::two_stage::run_tsea;
use punn_core::Dataset;

use crate::error::{Error, Result};
use crate::model::Model;
use crate::presets::{Method, RunConfig};

/// Outcome of one run, measured on the best individual of the final
/// population.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run: usize,
    pub seed: u64,
    /// Training CCR, percent.
    pub ccr_train: f64,
    /// Test CCR, percent.
    pub ccr_test: f64,
    pub connections: usize,
    pub evaluations: u64,
    /// Generations of the main loop.
    pub generations: usize,
    pub wall_seconds: f64,
}

impl RunRecord {
    /// Equality ignoring wall time.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        RunRecord {
            wall_seconds: 0.0,
            ..self.clone()
        } == RunRecord {
            wall_seconds: 0.0,
            ..other.clone()
        }
    }
}

/// Trains one model. `observer` sees every generation of the main loop.
pub fn train_model(
    config: &RunConfig,
    seed: u64,
    train: &Dataset,
    test: &Dataset,
    observer: impl FnMut(&GenerationStats),
) -> Result<(RunRecord, Model)> {
    let start = Instant::now();
    let (best, evaluations, generations) = match config.method() {
        Method::Edd => {
            let out = evolve(&config.ea_params(), seed, train, observer)?;
            (out.best, out.evaluations, out.generations)
        }
        Method::Tsea => {
            let out = run_tsea(&config.tsea_params(), seed, train, observer)?;
            (out.best, out.evaluations, out.generations)
        }
    };
    let net = best.into_net();
    let record = RunRecord {
        run: 0,
        seed,
        ccr_train: correct_classification_rate(&net, train)?,
        ccr_test: correct_classification_rate(&net, test)?,
        connections: net.count_connections(),
        evaluations,
        generations,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    Ok((record, Model::new(net, config.final_max_hidden())))
}

/// `runs` independent runs with seeds `master_seed + i`, spread over up to
/// `workers` threads. Records come back in run order.
pub fn run_experiment(
    config: &RunConfig,
    runs: usize,
    master_seed: u64,
    train: &Dataset,
    test: &Dataset,
    workers: usize,
) -> Result<Vec<RunRecord>> {
    run_experiment_with(config, runs, master_seed, train, test, workers, |_| {})
}

/// [`run_experiment`] calling `on_done` as each run finishes.
pub fn run_experiment_with(
    config: &RunConfig,
    runs: usize,
    master_seed: u64,
    train: &Dataset,
    test: &Dataset,
    workers: usize,
    on_done: impl Fn(&RunRecord) + Sync,
) -> Result<Vec<RunRecord>> {
    if runs == 0 {
        return Err(Error::Argument("at least one run is required".into()));
    }
    let workers = workers.clamp(1, runs);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<RunRecord>>>> = Mutex::new((0..runs).map(|_| None).collect());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= runs {
                    break;
                }
                let seed = master_seed.wrapping_add(i as u64);
                let result = train_model(config, seed, train, test, |_| {}).map(|(mut r, _)| {
                    r.run = i;
                    r
                });
                if let Ok(r) = &result {
                    on_done(r);
                }
                let failed = result.is_err();
                slots.lock().unwrap()[i] = Some(result);
                if failed {
                    next.store(runs, Ordering::Relaxed);
                }
            });
        }
    });
    let slots = slots.into_inner().unwrap();
    let mut records = Vec::with_capacity(runs);
    for slot in slots {
        match slot {
            Some(r) => records.push(r?),
            None => return Err(Error::Data("a run was cancelled after an earlier failure".into())),
        }
    }
    Ok(records)
}

/// Mean and sample standard deviation (`n - 1` denominator; 0 for one
/// value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

impl MeanSd {
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Argument("no values to summarize".into()));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() == 1 {
            0.0
        } else {
            let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
            (ss / (n - 1.0)).sqrt()
        };
        Ok(MeanSd { mean, sd })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub runs: usize,
    pub ccr_train: MeanSd,
    pub ccr_test: MeanSd,
    pub connections: MeanSd,
}

pub fn summarize(records: &[RunRecord]) -> Result<Summary> {
    let column = |f: fn(&RunRecord) -> f64| -> Result<MeanSd> {
        MeanSd::of(&records.iter().map(f).collect::<Vec<_>>())
    };
    Ok(Summary {
        runs: records.len(),
        ccr_train: column(|r| r.ccr_train)?,
        ccr_test: column(|r| r.ccr_test)?,
        connections: column(|r| r.connections as f64)?,
    })
}

const HEADER: [&str; 8] = [
    "run",
    "seed",
    "ccr_train",
    "ccr_test",
    "connections",
    "evaluations",
    "generations",
    "wall_seconds",
];

fn two_decimals(x: f64) -> String {
    format!("{x:.2}")
}

/// Rounds to the report's two decimals, as the value reads back.
fn quantize(x: f64) -> f64 {
    two_decimals(x).parse().expect("formatted float parses")
}

/// Writes one row per record followed by `mean` and `sd` rows. CCR and
/// connection columns carry two decimals, and the summary rows are computed
/// from the values exactly as printed, so recomputing them from the rows of
/// the file gives the same numbers. Returns that summary.
pub fn write_report(records: &[RunRecord], out: impl Write) -> Result<Summary> {
    if records.is_empty() {
        return Err(Error::Argument("cannot report an empty record list".into()));
    }
    let printed: Vec<RunRecord> = records
        .iter()
        .map(|r| RunRecord {
            ccr_train: quantize(r.ccr_train),
            ccr_test: quantize(r.ccr_test),
            ..r.clone()
        })
        .collect();
    let summary = summarize(&printed)?;

    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in &printed {
        w.write_record([
            r.run.to_string(),
            r.seed.to_string(),
            two_decimals(r.ccr_train),
            two_decimals(r.ccr_test),
            two_decimals(r.connections as f64),
            r.evaluations.to_string(),
            r.generations.to_string(),
            format!("{:.3}", r.wall_seconds),
        ])?;
    }
    for (label, pick) in [("mean", |m: MeanSd| m.mean), ("sd", |m: MeanSd| m.sd)] as [(&str, fn(MeanSd) -> f64); 2] {
        w.write_record([
            label.to_string(),
            String::new(),
            two_decimals(pick(summary.ccr_train)),
            two_decimals(pick(summary.ccr_test)),
            two_decimals(pick(summary.connections)),
            String::new(),
            String::new(),
            String::new(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<report>", e))?;
    Ok(summary)
}

pub fn save_report(records: &[RunRecord], path: impl AsRef<Path>) -> Result<Summary> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_report(records, file)
}

/// A report read back: per-run rows and the two summary rows, with the
/// summary columns `(ccr_train, ccr_test, connections)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub records: Vec<RunRecord>,
    pub mean: [f64; 3],
    pub sd: [f64; 3],
}

pub fn read_report(input: impl Read) -> Result<Report> {
    let mut rd = csv::Reader::from_reader(BufReader::new(input));
    let header = rd.headers()?.clone();
    if header.iter().ne(HEADER) {
        return Err(Error::parse(1, "unexpected report header"));
    }
    let mut records = Vec::new();
    let mut mean = None;
    let mut sd = None;
    for (n, row) in rd.records().enumerate() {
        let line = n + 2;
        let row = row?;
        let num = |i: usize| -> Result<f64> {
            row[i]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad number {:?}", &row[i])))
        };
        let int = |i: usize| -> Result<u64> {
            row[i]
                .parse()
                .map_err(|_| Error::parse(line, format!("bad integer {:?}", &row[i])))
        };
        match &row[0] {
            "mean" => mean = Some([num(2)?, num(3)?, num(4)?]),
            "sd" => sd = Some([num(2)?, num(3)?, num(4)?]),
            _ => records.push(RunRecord {
                run: int(0)? as usize,
                seed: int(1)?,
                ccr_train: num(2)?,
                ccr_test: num(3)?,
                connections: num(4)? as usize,
                evaluations: int(5)?,
                generations: int(6)? as usize,
                wall_seconds: num(7)?,
            }),
        }
    }
    match (mean, sd) {
        (Some(mean), Some(sd)) => Ok(Report { records, mean, sd }),
        _ => Err(Error::parse(0, "report lacks summary rows")),
    }
}
