//! Triangle return sets in `G x G` and their right-syndeticity.

use std::time::Instant;

use anyhow::{bail, Context};
use qrg_core::patterns::{return_set_from_profile, triangle_profile, triangle_threshold, TriangleShape};
use qrg_core::syndetic::covering_number;
use qrg_core::{CoverMode, GroupSpec};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{shape_name, Env};
use crate::generate::{density_tolerance, generate_set, Base, GeneratorSpec};
use crate::report::{Check, ExperimentOutput, ExperimentReport, ProfileFile, Summary, REPORT_VERSION};
use crate::seed::derive_u64;

/// Which density the threshold `alpha^4 - eps` is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ThresholdBasis {
    /// The requested `alpha`.
    #[default]
    Requested,
    /// Each trial's realised density `|A| / |G|^2`.
    Realized,
}

#[derive(Debug, Clone)]
pub struct TriangleLawParams {
    pub id: String,
    pub group: GroupSpec,
    pub alpha: f64,
    pub eps: f64,
    pub trials: usize,
    pub seed: u64,
    pub shape: TriangleShape,
    /// Overrides the default `random:alpha` set generator.
    pub set: Option<GeneratorSpec>,
    pub basis: ThresholdBasis,
    pub cover_mode: CoverMode,
    /// Required fraction of trials whose return set is all of `G`.
    pub min_full_return: f64,
    /// Required mean good-g fraction.
    pub min_good_fraction: f64,
}

impl TriangleLawParams {
    pub fn new(id: &str, group: GroupSpec, alpha: f64, eps: f64, trials: usize, seed: u64) -> Self {
        TriangleLawParams {
            id: id.into(),
            group,
            alpha,
            eps,
            trials,
            seed,
            shape: TriangleShape::Correlation,
            set: None,
            basis: ThresholdBasis::Requested,
            cover_mode: CoverMode::Auto,
            min_full_return: 0.95,
            min_good_fraction: 0.999,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleTrial {
    pub trial: usize,
    pub set_size: usize,
    pub realized_density: f64,
    pub threshold: f64,
    /// Per-g densities `count / |G|^2`.
    pub density: Summary,
    pub return_set_size: usize,
    /// Covering number of the return set; absent when it is empty.
    pub covering_k: Option<usize>,
    pub covering_method: Option<String>,
    pub good_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleLawSummary {
    pub order: usize,
    pub trials: Vec<TriangleTrial>,
    pub full_return_trials: usize,
    pub full_return_fraction: f64,
    pub good_fraction_mean: f64,
    pub max_covering_k: Option<usize>,
}

#[derive(Serialize)]
struct ProfileRow {
    trial: usize,
    g_index: usize,
    count: usize,
    density: f64,
}

pub fn triangle_law(env: &Env, p: &TriangleLawParams) -> anyhow::Result<ExperimentOutput> {
    let start = Instant::now();
    if !(p.alpha > 0.0 && p.alpha < 1.0) {
        bail!("alpha must lie in (0, 1), got {}", p.alpha);
    }
    if !(p.eps > 0.0 && p.eps < 1.0) {
        bail!("eps must lie in (0, 1), got {}", p.eps);
    }
    if p.trials == 0 {
        bail!("trials must be at least 1");
    }
    let g = env.group(&p.group)?;
    let n = g.order();
    let n2 = (n * n) as f64;
    let generator = p.set.clone().unwrap_or(GeneratorSpec::RandomDensity(p.alpha));

    let results: Vec<(TriangleTrial, Vec<usize>)> = (0..p.trials)
        .into_par_iter()
        .map(|t| -> anyhow::Result<_> {
            let a = generate_set(&generator, &g, Base::Square, derive_u64(p.seed, &p.id, t as u64))?;
            let profile = triangle_profile(&g, &a, p.shape)?;
            let realized = a.density();
            let basis = match p.basis {
                ThresholdBasis::Requested => p.alpha,
                ThresholdBasis::Realized => realized,
            };
            let threshold = triangle_threshold(basis, p.eps);
            let returns = return_set_from_profile(n, &profile, threshold);
            let cover = if returns.is_empty() {
                None
            } else {
                Some(covering_number(&g, &returns, p.cover_mode).context("covering the return set")?)
            };
            let densities: Vec<f64> = profile.iter().map(|&c| c as f64 / n2).collect();
            let trial = TriangleTrial {
                trial: t,
                set_size: a.len(),
                realized_density: realized,
                threshold,
                density: Summary::of(&densities),
                return_set_size: returns.len(),
                covering_k: cover.as_ref().map(|c| c.k),
                covering_method: cover.as_ref().map(|c| c.method.name().to_string()),
                good_fraction: returns.len() as f64 / n as f64,
            };
            Ok((trial, profile))
        })
        .collect::<anyhow::Result<_>>()?;

    let mut rows = Vec::with_capacity(p.trials * n);
    for (trial, profile) in &results {
        for (g_index, &count) in profile.iter().enumerate() {
            rows.push(ProfileRow { trial: trial.trial, g_index, count, density: count as f64 / n2 });
        }
    }
    let trials: Vec<TriangleTrial> = results.into_iter().map(|(t, _)| t).collect();
    let full_return_trials = trials.iter().filter(|t| t.return_set_size == n).count();
    let full_return_fraction = full_return_trials as f64 / p.trials as f64;
    let good_fraction_mean = trials.iter().map(|t| t.good_fraction).sum::<f64>() / p.trials as f64;
    let summary = TriangleLawSummary {
        order: n,
        max_covering_k: trials.iter().filter_map(|t| t.covering_k).max(),
        trials,
        full_return_trials,
        full_return_fraction,
        good_fraction_mean,
    };

    let mut notes = Vec::new();
    let requested_threshold = triangle_threshold(p.alpha, p.eps);
    if requested_threshold < 0.0 {
        notes.push(format!(
            "threshold alpha^4 - eps = {requested_threshold} is negative, so every g is in the return set by definition"
        ));
    }
    if matches!(generator, GeneratorSpec::RandomDensity(_)) {
        notes.push(format!(
            "realised densities are expected within {} of alpha (recorded, not enforced)",
            density_tolerance(p.alpha, n * n)
        ));
    }
    let checks = vec![
        Check::new("full_return_fraction", summary.full_return_fraction >= p.min_full_return)
            .with_note(format!("{} >= {}", summary.full_return_fraction, p.min_full_return)),
        Check::new("good_fraction_mean", summary.good_fraction_mean >= p.min_good_fraction)
            .with_note(format!("{} >= {}", summary.good_fraction_mean, p.min_good_fraction)),
    ];
    let profile_name = format!("{}.profile.csv", p.id);
    let report = ExperimentReport {
        report_version: REPORT_VERSION,
        id: p.id.clone(),
        kind: "triangle_law".into(),
        group: p.group.to_string(),
        degree: None,
        params: json!({
            "alpha": p.alpha,
            "eps": p.eps,
            "trials": p.trials,
            "seed": p.seed,
            "shape": shape_name(p.shape),
            "set": generator.to_string(),
            "threshold_basis": match p.basis { ThresholdBasis::Requested => "requested", ThresholdBasis::Realized => "realized" },
        }),
        summary: serde_json::to_value(&summary)?,
        checks,
        notes,
        profiles: vec![profile_name.clone()],
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(ExperimentOutput { report, profiles: vec![ProfileFile::from_rows(profile_name, &rows)?] })
}
