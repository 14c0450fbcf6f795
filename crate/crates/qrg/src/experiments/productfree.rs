//! Search for large product-free subsets.

use std::time::Instant;

use anyhow::bail;
use qrg_core::{GroupSpec, GroupTable};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::Env;
use crate::report::{Check, ExperimentOutput, ExperimentReport, ProfileFile, REPORT_VERSION};
use crate::seed::trial_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// One greedy pass in element-index order.
    #[default]
    Greedy,
    /// `budget` greedy passes over seeded random orders; the best is kept.
    RandomRestart,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Greedy => "greedy",
            Strategy::RandomRestart => "random-restart",
        }
    }

    pub fn parse(s: &str) -> anyhow::Result<Self> {
        match s {
            "greedy" => Ok(Strategy::Greedy),
            "random-restart" => Ok(Strategy::RandomRestart),
            _ => bail!("unknown strategy {s:?} (expected greedy or random-restart)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ProductFreeParams {
    pub id: String,
    pub group: GroupSpec,
    pub strategy: Strategy,
    pub budget: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductFreeSummary {
    pub order: usize,
    pub best_size: usize,
    pub best_density: f64,
    pub best_set: Vec<usize>,
    /// `2 |G|^{8/9} / |G|`.
    pub threshold: f64,
    pub threshold_vacuous: bool,
    pub verified: bool,
}

#[derive(Serialize)]
struct RestartRow {
    restart: usize,
    size: usize,
    density: f64,
}

pub fn gowers_threshold(order: usize) -> f64 {
    2.0 * (order as f64).powf(8.0 / 9.0) / order as f64
}

/// No `g, x` in the set with `g x` in the set, by checking every pair.
pub fn is_product_free(g: &GroupTable, members: &[usize]) -> bool {
    let mut inside = vec![false; g.order()];
    members.iter().for_each(|&x| inside[x] = true);
    members.iter().all(|&a| members.iter().all(|&b| !inside[g.mul(a, b)]))
}

fn greedy_pass(g: &GroupTable, order: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; g.order()];
    let mut set: Vec<usize> = Vec::new();
    for &y in order {
        // y joins unless one of y*y, y*a, a*y lands in S + {y} or y is already a product a*b.
        let hit = |z: usize| inside[z] || z == y;
        if hit(g.mul(y, y)) {
            continue;
        }
        let clash = set.iter().any(|&a| hit(g.mul(y, a)) || hit(g.mul(a, y)) || inside[g.mul(g.inv(a), y)]);
        if !clash {
            inside[y] = true;
            set.push(y);
        }
    }
    set.sort_unstable();
    set
}

pub fn productfree(env: &Env, p: &ProductFreeParams) -> anyhow::Result<ExperimentOutput> {
    let start = Instant::now();
    if p.budget == 0 {
        bail!("budget must be at least 1");
    }
    let g = env.group(&p.group)?;
    let n = g.order();
    let passes: Vec<Vec<usize>> = match p.strategy {
        Strategy::Greedy => vec![greedy_pass(&g, &(0..n).collect::<Vec<_>>())],
        Strategy::RandomRestart => (0..p.budget)
            .map(|r| {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut trial_rng(p.seed, &p.id, r as u64));
                greedy_pass(&g, &order)
            })
            .collect(),
    };
    let rows: Vec<RestartRow> = passes
        .iter()
        .enumerate()
        .map(|(restart, s)| RestartRow { restart, size: s.len(), density: s.len() as f64 / n as f64 })
        .collect();
    // first pass among the largest
    let best = passes.iter().fold(&passes[0], |b, s| if s.len() > b.len() { s } else { b }).clone();
    let verified = passes.iter().all(|s| is_product_free(&g, s));
    let threshold = gowers_threshold(n);
    let summary = ProductFreeSummary {
        order: n,
        best_size: best.len(),
        best_density: best.len() as f64 / n as f64,
        best_set: best,
        threshold,
        threshold_vacuous: threshold >= 1.0,
        verified,
    };
    let mut notes = Vec::new();
    if summary.threshold_vacuous {
        notes.push(format!("threshold density {threshold} exceeds 1, so the comparison is vacuous at this order"));
    }
    let rows_name = format!("{}.restarts.csv", p.id);
    let report = ExperimentReport {
        report_version: REPORT_VERSION,
        id: p.id.clone(),
        kind: "productfree".into(),
        group: p.group.to_string(),
        degree: None,
        params: json!({ "strategy": p.strategy.name(), "budget": p.budget, "seed": p.seed }),
        summary: serde_json::to_value(&summary)?,
        checks: vec![Check::new("product_free", verified).with_note("exhaustive pair check of every returned set")],
        notes,
        profiles: vec![rows_name.clone()],
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    Ok(ExperimentOutput { report, profiles: vec![ProfileFile::from_rows(rows_name, &rows)?] })
}
