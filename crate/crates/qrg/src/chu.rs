//! Random instances of Chu's inequality, and a sharpness search over
//! indicator inputs.

use qrg_core::measure::{chu_check, ChuOutcome};
use qrg_core::{GroupFunction, Partition};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::seed::trial_rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChuRow {
    pub trial: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
}

/// One random instance: `fs = [f_0..f_n]` and `n` partitions of `0..size`.
#[derive(Debug, Clone)]
pub struct ChuInstance {
    pub fs: Vec<GroupFunction>,
    pub partitions: Vec<Partition>,
}

impl ChuInstance {
    pub fn evaluate(&self) -> qrg_core::Result<ChuOutcome> {
        chu_check(&self.fs, &self.partitions)
    }
}

fn random_partition(size: usize, rng: &mut impl Rng) -> Partition {
    let cells = rng.random_range(1..=size);
    let assignment: Vec<usize> = (0..size).map(|_| rng.random_range(0..cells)).collect();
    Partition::from_assignment(&assignment)
}

/// Values uniform in `[0, 2]`.
pub fn random_instance(n: usize, size: usize, rng: &mut impl Rng) -> ChuInstance {
    let fs = (0..=n).map(|_| GroupFunction::new((0..size).map(|_| rng.random_range(0.0..=2.0)).collect())).collect();
    let partitions = (0..n).map(|_| random_partition(size, rng)).collect();
    ChuInstance { fs, partitions }
}

/// `trials` instances on a base set of `size` points; trial `t` uses the
/// stream `(seed, "chu", t)`.
pub fn chu_trials(seed: u64, trials: usize, n: usize, size: usize) -> anyhow::Result<Vec<ChuRow>> {
    anyhow::ensure!(n >= 1 && size >= 1, "need n >= 1 and size >= 1");
    (0..trials)
        .map(|t| {
            let mut rng = trial_rng(seed, "chu", t as u64);
            let out = random_instance(n, size, &mut rng).evaluate()?;
            Ok(ChuRow { trial: t, lhs: out.lhs, rhs: out.rhs, margin: out.margin() })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub evaluated: usize,
    /// Smallest `lhs / rhs` seen over instances with `rhs > 0`.
    pub min_ratio: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// Members of each indicator `f_i` at the minimiser.
    pub sets: Vec<Vec<usize>>,
    /// Cell id per point, per partition, at the minimiser.
    pub partitions: Vec<Vec<usize>>,
}

/// `(ratio, lhs, rhs, indicators, cell assignments)` of the current best instance.
type Candidate = (f64, f64, f64, Vec<Vec<bool>>, Vec<Vec<usize>>);

fn ratio(fs: &[Vec<bool>], cells: &[Vec<usize>]) -> Option<(f64, f64, f64)> {
    let fs: Vec<GroupFunction> =
        fs.iter().map(|f| GroupFunction::new(f.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())).collect();
    let ps: Vec<Partition> = cells.iter().map(|c| Partition::from_assignment(c)).collect();
    let out = chu_check(&fs, &ps).ok()?;
    (out.rhs > 0.0).then(|| (out.lhs / out.rhs, out.lhs, out.rhs))
}

/// Random indicator instances followed by single-bit / single-point greedy
/// descent on `lhs / rhs`. Reports the smallest ratio observed; asserts nothing.
pub fn sharpness_search(seed: u64, n: usize, size: usize, random_iters: usize, descent_iters: usize) -> SharpnessResult {
    let mut rng = trial_rng(seed, "chu-sharpness", 0);
    let mut evaluated = 0;
    let mut best: Option<Candidate> = None;
    for _ in 0..random_iters {
        let fs: Vec<Vec<bool>> = (0..=n).map(|_| (0..size).map(|_| rng.random_bool(0.5)).collect()).collect();
        let cells: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let k = rng.random_range(1..=size);
                (0..size).map(|_| rng.random_range(0..k)).collect()
            })
            .collect();
        evaluated += 1;
        if let Some((r, l, h)) = ratio(&fs, &cells) {
            if best.as_ref().is_none_or(|b| r < b.0) {
                best = Some((r, l, h, fs, cells));
            }
        }
    }
    if let Some((mut r, mut l, mut h, mut fs, mut cells)) = best.take() {
        for _ in 0..descent_iters {
            let (mut fs2, mut cells2) = (fs.clone(), cells.clone());
            if rng.random_bool(0.5) {
                let i = rng.random_range(0..fs2.len());
                let x = rng.random_range(0..size);
                fs2[i][x] = !fs2[i][x];
            } else {
                let i = rng.random_range(0..cells2.len());
                let x = rng.random_range(0..size);
                cells2[i][x] = rng.random_range(0..size);
            }
            evaluated += 1;
            if let Some((r2, l2, h2)) = ratio(&fs2, &cells2) {
                if r2 < r {
                    (r, l, h, fs, cells) = (r2, l2, h2, fs2, cells2);
                }
            }
        }
        best = Some((r, l, h, fs, cells));
    }
    match best {
        Some((min_ratio, lhs, rhs, fs, cells)) => SharpnessResult {
            evaluated,
            min_ratio,
            lhs,
            rhs,
            sets: fs.iter().map(|f| (0..size).filter(|&x| f[x]).collect()).collect(),
            partitions: cells,
        },
        None => SharpnessResult {
            evaluated,
            min_ratio: f64::INFINITY,
            lhs: 0.0,
            rhs: 0.0,
            sets: Vec::new(),
            partitions: Vec::new(),
        },
    }
}
