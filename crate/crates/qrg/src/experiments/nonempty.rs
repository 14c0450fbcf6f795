//! Fraction of `g` with at least one triangle, across an ascending family.

use std::time::Instant;

use anyhow::bail;
use qrg_core::patterns::{triangle_profile, TriangleShape};
use qrg_core::GroupSpec;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{shape_name, Env};
use crate::generate::{generate_set, Base, GeneratorSpec};
use crate::report::{Check, ExperimentOutput, ExperimentReport, ProfileFile, REPORT_VERSION};
use crate::seed::derive_u64;

#[derive(Debug, Clone)]
pub struct NonemptyParams {
    pub id: String,
    pub qs: Vec<u64>,
    pub alpha: f64,
    pub trials: usize,
    pub seed: u64,
    pub shape: TriangleShape,
    /// When set, every trial must reach at least this fraction.
    pub min_fraction: Option<f64>,
}

impl NonemptyParams {
    pub fn new(id: &str, qs: Vec<u64>, alpha: f64, trials: usize, seed: u64) -> Self {
        NonemptyParams { id: id.into(), qs, alpha, trials, seed, shape: TriangleShape::Correlation, min_fraction: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonemptyRow {
    pub q: u64,
    pub order: usize,
    pub fractions: Vec<f64>,
    pub mean_fraction: f64,
    pub min_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonemptySummary {
    pub rows: Vec<NonemptyRow>,
    /// Mean fractions never decrease along the family.
    pub nondecreasing: bool,
}

#[derive(Serialize)]
struct ProfileRow {
    q: u64,
    trial: usize,
    g_index: usize,
    count: usize,
}

pub fn nonempty_returns(env: &Env, p: &NonemptyParams) -> anyhow::Result<ExperimentOutput> {
    let start = Instant::now();
    if !(0.0..=1.0).contains(&p.alpha) {
        bail!("alpha {} outside [0, 1]", p.alpha);
    }
    if p.qs.is_empty() || p.trials == 0 {
        bail!("need at least one q and one trial");
    }
    if p.qs.windows(2).any(|w| w[1] <= w[0]) {
        bail!("the q list must be strictly ascending");
    }
    let mut rows = Vec::new();
    let mut profile_rows = Vec::new();
    for &q in &p.qs {
        let g = env.group(&GroupSpec::Psl2(q as usize))?;
        let n = g.order();
        let stream = format!("{}/q{q}", p.id);
        let profiles = (0..p.trials)
            .into_par_iter()
            .map(|t| -> anyhow::Result<Vec<usize>> {
                let spec = GeneratorSpec::RandomDensity(p.alpha);
                let a = generate_set(&spec, &g, Base::Square, derive_u64(p.seed, &stream, t as u64))?;
                Ok(triangle_profile(&g, &a, p.shape)?)
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let fractions: Vec<f64> =
            profiles.iter().map(|c| c.iter().filter(|&&v| v > 0).count() as f64 / n as f64).collect();
        rows.push(NonemptyRow {
            q,
            order: n,
            mean_fraction: fractions.iter().sum::<f64>() / fractions.len() as f64,
            min_fraction: fractions.iter().copied().fold(f64::INFINITY, f64::min),
            fractions,
        });
        for (t, counts) in profiles.into_iter().enumerate() {
            profile_rows.extend(counts.into_iter().enumerate().map(|(g_index, count)| ProfileRow { q, trial: t, g_index, count }));
        }
    }
    let nondecreasing = rows.windows(2).all(|w| w[1].mean_fraction >= w[0].mean_fraction);
    let mut checks = Vec::new();
    if let Some(min) = p.min_fraction {
        let worst = rows.iter().map(|r| r.min_fraction).fold(f64::INFINITY, f64::min);
        checks.push(Check::new("min_fraction", worst >= min).with_note(format!("{worst} >= {min}")));
    }
    let summary = NonemptySummary { rows, nondecreasing };
    let profile_name = format!("{}.profile.csv", p.id);
    let report = ExperimentReport {
        report_version: REPORT_VERSION,
        id: p.id.clone(),
        kind: "nonempty_returns".into(),
        group: p.qs.iter().map(|q| format!("psl2:{q}")).collect::<Vec<_>>().join(","),
        degree: None,
        params: json!({
            "qs": p.qs,
            "alpha": p.alpha,
            "trials": p.trials,
            "seed": p.seed,
            "shape": shape_name(p.shape),
        }),
        summary: serde_json::to_value(&summary)?,
        checks,
        notes: vec![
            "family-trend measurement: the PSL(2,q) list is not a nested sequence of subgroups, so this does not test the nested-sequence hypothesis".into(),
        ],
        profiles: vec![profile_name.clone()],
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(ExperimentOutput { report, profiles: vec![ProfileFile::from_rows(profile_name, &profile_rows)?] })
}
