use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use qrg_core::measure::GroupFunction;
use qrg_core::patterns::{corner_profile, mixing_discrepancy, triangle_profile};
use qrg_core::repr::character_table;
use qrg_core::syndetic::covering_number;
use qrg_core::{GroupSpec, GroupTable, IndicatorSet};
use serde::Serialize;
use serde_json::json;

use qrg::cache::CacheDir;
use qrg::chu::{chu_trials, sharpness_search};
use qrg::config::{parse_mode, run_config};
use qrg::experiments::{parse_shape, Env};
use qrg::generate::{generate_set, Base, GeneratorSpec};

#[derive(Parser)]
#[command(name = "qrg", version, about = "Quasirandom group experiments")]
struct Cli {
    /// Directory for Cayley-table caches.
    #[arg(long, global = true, default_value = ".qrg-cache")]
    cache_dir: PathBuf,
    /// Build groups in memory without touching the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or describe a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Character degrees and the quasirandomness degree D, as JSON.
    Quasirandomness {
        #[arg(long)]
        group: GroupSpec,
    },
    /// Per-element corner or triangle counts, as CSV.
    #[command(subcommand)]
    Count(CountCmd),
    /// Mixing discrepancy of three sets (as indicator or sign functions).
    Discrepancy {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        #[arg(long)]
        f3: String,
        /// Use `+1` on the set and `-1` off it instead of indicators.
        #[arg(long)]
        signed: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-element CSV (g_index, g_label, per_g).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Smallest number of right shifts of a set covering the group, as JSON.
    Syndetic {
        #[arg(long)]
        group: GroupSpec,
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "auto")]
        mode: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random instances of Chu's inequality, as CSV (trial, lhs, rhs, margin).
    Chu {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Number of partitions.
        #[arg(long, default_value_t = 2)]
        n: usize,
        /// Size of the base set.
        #[arg(long, default_value_t = 24)]
        size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search indicator inputs for small lhs/rhs ratios in Chu's inequality.
    ChuSearch {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long, default_value_t = 2000)]
        random_iters: usize,
        #[arg(long, default_value_t = 2000)]
        descent_iters: usize,
    },
    /// Run configured experiments.
    #[command(subcommand)]
    Experiment(ExperimentCmd),
}

#[derive(Subcommand)]
enum GroupCmd {
    /// Build the Cayley table and store it in the cache.
    Build {
        #[arg(long)]
        group: GroupSpec,
    },
    /// Order, class sizes and family, as JSON.
    Info {
        #[arg(long)]
        group: GroupSpec,
    },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Triangles in a subset of G x G.
    Triangles {
        #[arg(long)]
        group: GroupSpec,
        /// Generator spec or a file of `x y` pairs.
        #[arg(long)]
        set: String,
        #[arg(long, default_value = "correlation")]
        shape: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Corners in a subset of G.
    Corners {
        #[arg(long)]
        group: GroupSpec,
        /// Generator spec or a file of element indices.
        #[arg(long)]
        set: String,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ExperimentCmd {
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
}

/// A generator spec, or else a path to an explicit member file.
fn set_spec(s: &str) -> anyhow::Result<GeneratorSpec> {
    match s.parse::<GeneratorSpec>() {
        Ok(spec) => Ok(spec),
        Err(e) if Path::new(s).exists() => {
            let _ = e;
            Ok(GeneratorSpec::ExplicitFile(PathBuf::from(s)))
        }
        Err(e) => Err(e.context(format!("{s:?} is neither a generator spec nor an existing file"))),
    }
}

fn load_set(s: &str, g: &GroupTable, base: Base, seed: u64) -> anyhow::Result<IndicatorSet> {
    generate_set(&set_spec(s)?, g, base, seed)
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => Ok(std::io::stdout().write_all(bytes)?),
    }
}

fn csv_bytes<R: Serialize>(rows: &[R]) -> anyhow::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(w.into_inner()?)
}

#[derive(Serialize)]
struct CountRow<'a> {
    g_index: usize,
    g_label: &'a str,
    count: usize,
    density: f64,
}

#[derive(Serialize)]
struct PerGRow<'a> {
    g_index: usize,
    g_label: &'a str,
    per_g: f64,
}

fn print_json(v: &serde_json::Value) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string(v)?);
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    let env = if cli.no_cache { Env::default() } else { Env::with_cache(CacheDir::new(&cli.cache_dir)) };
    match cli.command {
        Command::Group(GroupCmd::Build { group }) => {
            if cli.no_cache {
                bail!("group build writes to the cache; drop --no-cache");
            }
            let cache = CacheDir::new(&cli.cache_dir);
            let g = cache.load(&group)?;
            println!("{}", cache.path_for(&group).display());
            eprintln!("{group}: order {}, {} classes", g.order(), g.class_count());
        }
        Command::Group(GroupCmd::Info { group }) => {
            let g = env.group(&group)?;
            let sizes: Vec<usize> = g.classes().iter().map(Vec::len).collect();
            print_json(&json!({
                "spec": group.to_string(),
                "family": g.family().name(),
                "order": g.order(),
                "classes": g.class_count(),
                "class_sizes": sizes,
                "abelian": g.is_abelian(),
            }))?;
        }
        Command::Quasirandomness { group } => {
            let g = env.group(&group)?;
            let t = character_table(&g)?;
            let d = t.quasirandomness_degree()?;
            print_json(&json!({
                "order": g.order(),
                "classes": t.class_count(),
                "degrees": t.degrees(),
                "D": d,
            }))?;
        }
        Command::Count(CountCmd::Triangles { group, set, shape, seed, out }) => {
            let g = env.group(&group)?;
            let a = load_set(&set, &g, Base::Square, seed)?;
            let profile = triangle_profile(&g, &a, parse_shape(&shape)?)?;
            let n2 = (g.order() * g.order()) as f64;
            let rows: Vec<CountRow> = profile
                .iter()
                .enumerate()
                .map(|(i, &c)| CountRow { g_index: i, g_label: g.label(i), count: c, density: c as f64 / n2 })
                .collect();
            emit(out.as_deref(), &csv_bytes(&rows)?)?;
        }
        Command::Count(CountCmd::Corners { group, set, eps, seed, out }) => {
            let g = env.group(&group)?;
            let a = load_set(&set, &g, Base::Group, seed)?;
            let prof = corner_profile(&g, &a, eps)?;
            let n = g.order() as f64;
            let rows: Vec<CountRow> = prof
                .counts
                .iter()
                .enumerate()
                .map(|(i, &c)| CountRow { g_index: i, g_label: g.label(i), count: c, density: c as f64 / n })
                .collect();
            emit(out.as_deref(), &csv_bytes(&rows)?)?;
            eprintln!(
                "{} of {} elements within the density band; {} elements of A have a corner",
                prof.within_band,
                g.order(),
                prof.positive_in_set.len()
            );
        }
        Command::Discrepancy { group, f1, f2, f3, signed, seed, out } => {
            let g = env.group(&group)?;
            let n = g.order();
            let off = if signed { -1.0 } else { 0.0 };
            let mut fs = Vec::new();
            for (i, s) in [f1, f2, f3].iter().enumerate() {
                let set = load_set(s, &g, Base::Group, qrg::seed::derive_u64(seed, "discrepancy", i as u64))?;
                fs.push(GroupFunction::new((0..n).map(|x| if set.contains(x) { 1.0 } else { off }).collect()));
            }
            let d = character_table(&g)?.quasirandomness_degree().ok();
            let m = mixing_discrepancy(&g, &fs[0], &fs[1], &fs[2], d)?;
            if let Some(p) = out.as_deref() {
                let rows: Vec<PerGRow> =
                    m.per_g.iter().enumerate().map(|(i, &v)| PerGRow { g_index: i, g_label: g.label(i), per_g: v }).collect();
                emit(Some(p), &csv_bytes(&rows)?)?;
            }
            print_json(&json!({
                "order": n,
                "D": d,
                "delta": m.delta,
                "correction": m.correction,
                "austin_bound": m.austin_bound,
            }))?;
        }
        Command::Syndetic { group, set, mode, seed } => {
            let g = env.group(&group)?;
            let r = load_set(&set, &g, Base::Group, seed)?;
            let res = covering_number(&g, &r, parse_mode(&mode)?)?;
            let witness: Vec<&str> = res.witness.iter().map(|&f| g.label(f)).collect();
            print_json(&json!({
                "K": res.k,
                "method": res.method.name(),
                "lower_bound": res.lower_bound,
                "witness": witness,
            }))?;
        }
        Command::Chu { seed, trials, n, size, out } => {
            let rows = chu_trials(seed, trials, n, size)?;
            emit(out.as_deref(), &csv_bytes(&rows)?)?;
            let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
            if rows.iter().any(|r| r.margin < -qrg_core::measure::CHU_SLACK) {
                eprintln!("violation: smallest margin {worst}");
                return Ok(ExitCode::from(1));
            }
        }
        Command::ChuSearch { seed, n, size, random_iters, descent_iters } => {
            let res = sharpness_search(seed, n, size, random_iters, descent_iters);
            println!("{}", serde_json::to_string_pretty(&res)?);
        }
        Command::Experiment(ExperimentCmd::Run { config, out, workers }) => {
            let outcome = run_config(&config, &out, workers, &env)?;
            for r in &outcome.reports {
                for c in &r.checks {
                    eprintln!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, r.id, c.name);
                }
            }
            if !outcome.passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
