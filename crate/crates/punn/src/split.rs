//! Stratified holdout.

use punn_core::rng::seeded;
use rand::seq::SliceRandom;

use crate::dataset::ProcessedDataset;
use crate::error::{Error, Result};

/// Training-set size per class. Each class gets `ratio * n_c` rounded half
/// to even, kept within `[1, n_c - 1]`. When `ratio * n` is a whole number
/// the per-class counts are then nudged, largest rounding loss first, until
/// they sum to it.
pub fn train_counts(class_counts: &[usize], ratio: f64) -> Result<Vec<usize>> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Argument(format!("split ratio {ratio} not in (0, 1)")));
    }
    if let Some(c) = class_counts.iter().position(|&n| n == 1) {
        return Err(Error::Stratification(format!("class {c} has a single pattern")));
    }
    let exact: Vec<f64> = class_counts.iter().map(|&n| ratio * n as f64).collect();
    let mut counts: Vec<usize> = class_counts
        .iter()
        .zip(&exact)
        .map(|(&n, &e)| {
            if n == 0 {
                0
            } else {
                (e.round_ties_even() as usize).clamp(1, n - 1)
            }
        })
        .collect();

    let total: usize = class_counts.iter().sum();
    let target = ratio * total as f64;
    if target.fract() == 0.0 {
        let target = target as usize;
        let current: usize = counts.iter().sum();
        let mut order: Vec<usize> = (0..counts.len()).collect();
        if current < target {
            order.retain(|&c| (counts[c] as f64) < exact[c] && counts[c] + 1 < class_counts[c]);
            order.sort_by(|&a, &b| {
                let la = exact[a] - counts[a] as f64;
                let lb = exact[b] - counts[b] as f64;
                lb.total_cmp(&la).then(a.cmp(&b))
            });
            for &c in order.iter().take(target - current) {
                counts[c] += 1;
            }
        } else if current > target {
            order.retain(|&c| (counts[c] as f64) > exact[c] && counts[c] > 1);
            order.sort_by(|&a, &b| {
                let ga = counts[a] as f64 - exact[a];
                let gb = counts[b] as f64 - exact[b];
                gb.total_cmp(&ga).then(a.cmp(&b))
            });
            for &c in order.iter().take(current - target) {
                counts[c] -= 1;
            }
        }
    }
    Ok(counts)
}

/// Splits row indices by class into `(train, test)`. Rows of each class are
/// shuffled with a generator seeded by `seed`; both index lists come back in
/// ascending order.
pub fn stratified_indices(
    labels: &[usize],
    class_count: usize,
    ratio: f64,
    seed: u64,
) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut by_class = vec![Vec::new(); class_count];
    for (i, &l) in labels.iter().enumerate() {
        let bucket = by_class
            .get_mut(l)
            .ok_or_else(|| Error::Data(format!("label {l} out of range")))?;
        bucket.push(i);
    }
    let sizes: Vec<usize> = by_class.iter().map(Vec::len).collect();
    let counts = train_counts(&sizes, ratio)?;
    let mut rng = seeded(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (mut rows, take) in by_class.into_iter().zip(counts) {
        rows.shuffle(&mut rng);
        train.extend_from_slice(&rows[..take]);
        test.extend_from_slice(&rows[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

pub fn stratified_holdout(
    data: &ProcessedDataset,
    ratio: f64,
    seed: u64,
) -> Result<(ProcessedDataset, ProcessedDataset)> {
    let (train, test) = stratified_indices(data.labels(), data.class_count(), ratio, seed)?;
    Ok((data.subset(&train), data.subset(&test)))
}
