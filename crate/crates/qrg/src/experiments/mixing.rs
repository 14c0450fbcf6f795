//! Mixing discrepancy across the PSL(2,q) family.

use std::time::Instant;

use anyhow::bail;
use qrg_core::field::prime_power;
use qrg_core::group::MAX_MATRIX_FIELD;
use qrg_core::patterns::{austin_bound, mixing_discrepancy};
use qrg_core::repr::quasirandomness_degree;
use qrg_core::{GroupFunction, GroupSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Env;
use crate::report::{Check, ExperimentOutput, ExperimentReport, ProfileFile, REPORT_VERSION};
use crate::seed::trial_rng;

/// Values taken by the random test functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ValueKind {
    /// `+1` with probability `density`, else `-1`.
    #[default]
    Sign,
    /// `1` with probability `density`, else `0`.
    Indicator,
}

impl ValueKind {
    pub fn name(self) -> &'static str {
        match self {
            ValueKind::Sign => "sign",
            ValueKind::Indicator => "indicator",
        }
    }

    pub fn parse(s: &str) -> anyhow::Result<Self> {
        match s {
            "sign" => Ok(ValueKind::Sign),
            "indicator" => Ok(ValueKind::Indicator),
            _ => bail!("unknown value kind {s:?} (expected sign or indicator)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MixingParams {
    pub id: String,
    pub qs: Vec<u64>,
    pub trials: usize,
    pub seed: u64,
    pub density: f64,
    pub values: ValueKind,
}

impl MixingParams {
    pub fn new(id: &str, qs: Vec<u64>, trials: usize, seed: u64) -> Self {
        MixingParams { id: id.into(), qs, trials, seed, density: 0.5, values: ValueKind::Sign }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingRow {
    pub q: u64,
    pub order: usize,
    pub degree: u32,
    pub austin_bound: f64,
    pub mean_delta: f64,
    pub min_delta: f64,
    pub max_delta: f64,
    pub bound_holds: bool,
    /// The comparator is at least 2, the largest possible discrepancy for
    /// functions bounded by 1, so the bound holds for trivial reasons.
    pub vacuous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingSummary {
    pub rows: Vec<MixingRow>,
    pub decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixingTrialRow {
    pub q: u64,
    pub trial: usize,
    pub delta: f64,
    pub correction: f64,
}

#[derive(Serialize)]
struct PerGRow {
    q: u64,
    trial: usize,
    g_index: usize,
    per_g: f64,
}

fn random_function(n: usize, density: f64, values: ValueKind, rng: &mut impl Rng) -> GroupFunction {
    let off = match values {
        ValueKind::Sign => -1.0,
        ValueKind::Indicator => 0.0,
    };
    GroupFunction::new((0..n).map(|_| if rng.random::<f64>() < density { 1.0 } else { off }).collect())
}

pub fn mixing_decay(env: &Env, p: &MixingParams) -> anyhow::Result<ExperimentOutput> {
    let start = Instant::now();
    if p.qs.is_empty() || p.trials == 0 {
        bail!("need at least one q and one trial");
    }
    if !(0.0..=1.0).contains(&p.density) {
        bail!("density {} outside [0, 1]", p.density);
    }
    for &q in &p.qs {
        if prime_power(q).is_none() || q as usize > MAX_MATRIX_FIELD {
            bail!("invalid q = {q}: need a prime power <= {MAX_MATRIX_FIELD}");
        }
    }
    let mut rows = Vec::new();
    let mut trial_rows = Vec::new();
    let mut per_g_rows = Vec::new();
    for &q in &p.qs {
        let g = env.group(&GroupSpec::Psl2(q as usize))?;
        let n = g.order();
        let degree = quasirandomness_degree(&g)?;
        let stream = format!("{}/q{q}", p.id);
        let results = (0..p.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(p.seed, &stream, t as u64);
                let f1 = random_function(n, p.density, p.values, &mut rng);
                let f2 = random_function(n, p.density, p.values, &mut rng);
                let f3 = random_function(n, p.density, p.values, &mut rng);
                mixing_discrepancy(&g, &f1, &f2, &f3, Some(degree))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let bound = austin_bound(degree);
        let deltas: Vec<f64> = results.iter().map(|m| m.delta).collect();
        rows.push(MixingRow {
            q,
            order: n,
            degree,
            austin_bound: bound,
            mean_delta: deltas.iter().sum::<f64>() / deltas.len() as f64,
            min_delta: deltas.iter().copied().fold(f64::INFINITY, f64::min),
            max_delta: deltas.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            bound_holds: deltas.iter().all(|&d| d <= bound),
            vacuous: bound >= 2.0,
        });
        for (t, m) in results.into_iter().enumerate() {
            trial_rows.push(MixingTrialRow { q, trial: t, delta: m.delta, correction: m.correction });
            per_g_rows.extend(m.per_g.into_iter().enumerate().map(|(g_index, v)| PerGRow { q, trial: t, g_index, per_g: v }));
        }
    }
    let decreasing = rows.windows(2).all(|w| w[1].mean_delta < w[0].mean_delta);
    let all_hold = rows.iter().all(|r| r.bound_holds);
    let all_vacuous = rows.iter().all(|r| r.vacuous);
    let summary = MixingSummary { rows, decreasing };

    let mut bound_check = Check::new("austin_bound", all_hold);
    if all_vacuous {
        bound_check = bound_check.with_note("vacuous: 4 D^(-1/8) >= 2 exceeds any possible discrepancy at these degrees");
    }
    let checks = vec![
        Check::new("decay", decreasing).with_note("mean delta strictly decreases along the q list"),
        bound_check,
    ];
    let trials_name = format!("{}.trials.csv", p.id);
    let profile_name = format!("{}.profile.csv", p.id);
    let group = p.qs.iter().map(|q| format!("psl2:{q}")).collect::<Vec<_>>().join(",");
    let report = ExperimentReport {
        report_version: REPORT_VERSION,
        id: p.id.clone(),
        kind: "mixing_decay".into(),
        group,
        degree: None,
        params: json!({
            "qs": p.qs,
            "trials": p.trials,
            "seed": p.seed,
            "density": p.density,
            "values": p.values.name(),
        }),
        summary: serde_json::to_value(&summary)?,
        checks,
        notes: vec!["trial delta is the mean of the per-g column; row statistics aggregate trial deltas".into()],
        profiles: vec![trials_name.clone(), profile_name.clone()],
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(ExperimentOutput {
        report,
        profiles: vec![
            ProfileFile::from_rows(trials_name, &trial_rows)?,
            ProfileFile::from_rows(profile_name, &per_g_rows)?,
        ],
    })
}
