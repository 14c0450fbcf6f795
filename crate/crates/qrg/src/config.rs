//! TOML experiment configs.
//!
//! ```toml
//! [[experiment]]
//! id = "triangles-psl27"
//! kind = "triangle_law"      # triangle_law | mixing_decay | productfree | nonempty_returns
//! group = "psl2:7"
//! alpha = 0.5
//! eps = 0.05
//! trials = 20
//! seed = 1
//! ```
//!
//! Optional keys per kind:
//!
//! * `triangle_law`: `shape` (`correlation` | `literal`), `set` (generator
//!   spec replacing `random:alpha`), `threshold` (`requested` | `realized`),
//!   `mode` (`auto` | `exact` | `greedy`), `min_full_return`,
//!   `min_good_fraction`;
//! * `mixing_decay`: `qs` (required), `density`, `values` (`sign` | `indicator`);
//! * `productfree`: `strategy` (`greedy` | `random-restart`), `budget`;
//! * `nonempty_returns`: `qs` (required), `shape`, `min_fraction`.
//!
//! Errors name the file and line of the offending entry.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use qrg_core::{CoverMode, GroupSpec};
use serde::Deserialize;
use toml::Spanned;

use crate::experiments::{
    mixing_decay, nonempty_returns, parse_shape, productfree, triangle_law, Env, MixingParams, NonemptyParams,
    ProductFreeParams, Strategy, ThresholdBasis, TriangleLawParams, ValueKind,
};
use crate::generate::GeneratorSpec;
use crate::report::{ExperimentOutput, ExperimentReport};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    #[serde(default)]
    experiment: Vec<Spanned<Entry>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    id: String,
    kind: String,
    group: Option<String>,
    alpha: Option<f64>,
    eps: Option<f64>,
    trials: Option<usize>,
    seed: Option<u64>,
    qs: Option<Vec<u64>>,
    shape: Option<String>,
    set: Option<String>,
    threshold: Option<String>,
    mode: Option<String>,
    density: Option<f64>,
    values: Option<String>,
    strategy: Option<String>,
    budget: Option<usize>,
    min_full_return: Option<f64>,
    min_good_fraction: Option<f64>,
    min_fraction: Option<f64>,
}

#[derive(Debug, Clone)]
pub enum Experiment {
    TriangleLaw(TriangleLawParams),
    MixingDecay(MixingParams),
    ProductFree(ProductFreeParams),
    NonemptyReturns(NonemptyParams),
}

impl Experiment {
    pub fn id(&self) -> &str {
        match self {
            Experiment::TriangleLaw(p) => &p.id,
            Experiment::MixingDecay(p) => &p.id,
            Experiment::ProductFree(p) => &p.id,
            Experiment::NonemptyReturns(p) => &p.id,
        }
    }

    pub fn run(&self, env: &Env) -> anyhow::Result<ExperimentOutput> {
        match self {
            Experiment::TriangleLaw(p) => triangle_law(env, p),
            Experiment::MixingDecay(p) => mixing_decay(env, p),
            Experiment::ProductFree(p) => productfree(env, p),
            Experiment::NonemptyReturns(p) => nonempty_returns(env, p),
        }
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|&b| b == b'\n').count() + 1
}

fn require<T>(v: Option<T>, key: &str) -> anyhow::Result<T> {
    v.ok_or_else(|| anyhow!("missing key `{key}`"))
}

fn resolve_files(spec: GeneratorSpec, dir: &Path) -> GeneratorSpec {
    match spec {
        GeneratorSpec::ExplicitFile(p) if p.is_relative() => GeneratorSpec::ExplicitFile(dir.join(p)),
        GeneratorSpec::ProductOfSets(l, r) => {
            GeneratorSpec::ProductOfSets(Box::new(resolve_files(*l, dir)), Box::new(resolve_files(*r, dir)))
        }
        other => other,
    }
}

fn build(e: Entry, dir: &Path) -> anyhow::Result<Experiment> {
    let group = || -> anyhow::Result<GroupSpec> { Ok(require(e.group.as_deref(), "group")?.parse()?) };
    let seed = e.seed.unwrap_or(0);
    Ok(match e.kind.as_str() {
        "triangle_law" => {
            let mut p = TriangleLawParams::new(
                &e.id,
                group()?,
                require(e.alpha, "alpha")?,
                require(e.eps, "eps")?,
                require(e.trials, "trials")?,
                seed,
            );
            if let Some(s) = &e.shape {
                p.shape = parse_shape(s)?;
            }
            if let Some(s) = &e.set {
                p.set = Some(resolve_files(s.parse()?, dir));
            }
            if let Some(t) = &e.threshold {
                p.basis = match t.as_str() {
                    "requested" => ThresholdBasis::Requested,
                    "realized" => ThresholdBasis::Realized,
                    _ => bail!("unknown threshold basis {t:?} (expected requested or realized)"),
                };
            }
            if let Some(m) = &e.mode {
                p.cover_mode = parse_mode(m)?;
            }
            if let Some(v) = e.min_full_return {
                p.min_full_return = v;
            }
            if let Some(v) = e.min_good_fraction {
                p.min_good_fraction = v;
            }
            Experiment::TriangleLaw(p)
        }
        "mixing_decay" => {
            let mut p = MixingParams::new(&e.id, require(e.qs, "qs")?, require(e.trials, "trials")?, seed);
            if let Some(d) = e.density {
                p.density = d;
            }
            if let Some(v) = &e.values {
                p.values = ValueKind::parse(v)?;
            }
            Experiment::MixingDecay(p)
        }
        "productfree" => Experiment::ProductFree(ProductFreeParams {
            id: e.id.clone(),
            group: group()?,
            strategy: e.strategy.as_deref().map(Strategy::parse).transpose()?.unwrap_or_default(),
            budget: e.budget.unwrap_or(1),
            seed,
        }),
        "nonempty_returns" => {
            let mut p = NonemptyParams::new(
                &e.id,
                require(e.qs, "qs")?,
                require(e.alpha, "alpha")?,
                require(e.trials, "trials")?,
                seed,
            );
            if let Some(s) = &e.shape {
                p.shape = parse_shape(s)?;
            }
            p.min_fraction = e.min_fraction;
            Experiment::NonemptyReturns(p)
        }
        other => bail!("unknown experiment kind {other:?}"),
    })
}

pub fn parse_mode(s: &str) -> anyhow::Result<CoverMode> {
    match s {
        "auto" => Ok(CoverMode::Auto),
        "exact" => Ok(CoverMode::Exact),
        "greedy" => Ok(CoverMode::Greedy),
        _ => bail!("unknown cover mode {s:?} (expected auto, exact or greedy)"),
    }
}

/// Parses a config's text. `origin` names the file in error messages and
/// anchors relative `file:` set paths.
pub fn parse_config(text: &str, origin: &Path) -> anyhow::Result<Vec<Experiment>> {
    let name = origin.display();
    let file: ConfigFile = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(1);
        anyhow!("{name}:{line}: {}", e.message())
    })?;
    let dir = origin.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut ids = BTreeSet::new();
    let mut out = Vec::new();
    for spanned in file.experiment {
        let line = line_of(text, spanned.span().start);
        let entry = spanned.into_inner();
        if !ids.insert(entry.id.clone()) {
            bail!("{name}:{line}: duplicate id {:?}", entry.id);
        }
        if entry.id.is_empty() || entry.id.contains(['/', '\\']) {
            bail!("{name}:{line}: id {:?} must be non-empty and contain no path separators", entry.id);
        }
        out.push(build(entry, &dir).map_err(|e| anyhow!("{name}:{line}: {e:#}"))?);
    }
    Ok(out)
}

pub fn load_config(path: &Path) -> anyhow::Result<Vec<Experiment>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text, path)
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub reports: Vec<ExperimentReport>,
    pub written: Vec<PathBuf>,
}

impl RunOutcome {
    /// All assertable checks of all experiments passed.
    pub fn passed(&self) -> bool {
        self.reports.iter().all(ExperimentReport::passed)
    }
}

/// Runs every experiment of the config at `path` in order on a pool of
/// `workers` threads, writing `<id>.json` and the profile CSVs to `out`.
pub fn run_config(path: &Path, out: &Path, workers: usize, env: &Env) -> anyhow::Result<RunOutcome> {
    let experiments = load_config(path)?;
    run_experiments(&experiments, out, workers, env)
}

pub fn run_experiments(experiments: &[Experiment], out: &Path, workers: usize, env: &Env) -> anyhow::Result<RunOutcome> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers.max(1)).build()?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let mut reports = Vec::new();
    let mut written = Vec::new();
    for exp in experiments {
        let output = pool.install(|| exp.run(env)).with_context(|| format!("experiment {:?}", exp.id()))?;
        for profile in &output.profiles {
            let p = out.join(&profile.name);
            fs::write(&p, &profile.contents)?;
            written.push(p);
        }
        let p = out.join(format!("{}.json", exp.id()));
        fs::write(&p, serde_json::to_string_pretty(&output.report)? + "\n")?;
        written.push(p);
        reports.push(output.report);
    }
    Ok(RunOutcome { reports, written })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_numbers_count_newlines() {
        assert_eq!(line_of("a\nb\nc", 0), 1);
        assert_eq!(line_of("a\nb\nc", 2), 2);
        assert_eq!(line_of("a\nb\nc", 4), 3);
    }

    #[test]
    fn duplicate_ids_are_rejected_with_line() {
        let text = "[[experiment]]\nid = \"a\"\nkind = \"productfree\"\ngroup = \"cyclic:2\"\n\n[[experiment]]\nid = \"a\"\nkind = \"productfree\"\ngroup = \"cyclic:3\"\n";
        let err = parse_config(text, Path::new("c.toml")).unwrap_err().to_string();
        assert!(err.contains("duplicate id"), "{err}");
        assert!(err.starts_with("c.toml:6:"), "{err}");
    }
}
