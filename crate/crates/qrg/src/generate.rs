//! Seeded generators for subsets of `G` and `G x G`.
//!
//! Generator specs are compact strings:
//!
//! * `random:ALPHA` — each element independently with probability `ALPHA`;
//! * `classes:I,J,...` — union of conjugacy classes by index (subsets of `G`);
//! * `coset:G1,G2/I,J,...` — union of right cosets `H g` of the subgroup
//!   generated by elements `G1, G2, ...`; cosets are numbered by their
//!   smallest element;
//! * `product:LEFT*RIGHT` — `S x T` for two subset-of-`G` specs;
//! * `file:PATH` — explicit members, one `x` (or `x y` for pairs) per line;
//!   blank lines and `#` comments are skipped.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use qrg_core::{GroupTable, IndicatorSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::seed::derive_u64;

/// Whether a set lives in `G` or in `G x G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Base {
    Group,
    Square,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    RandomDensity(f64),
    ClassUnion(Vec<usize>),
    CosetUnion { generators: Vec<usize>, cosets: Vec<usize> },
    ProductOfSets(Box<GeneratorSpec>, Box<GeneratorSpec>),
    ExplicitFile(PathBuf),
}

fn index_list(s: &str) -> anyhow::Result<Vec<usize>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| t.trim().parse::<usize>().with_context(|| format!("bad index {t:?}")))
        .collect()
}

fn join(v: &[usize]) -> String {
    v.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

impl FromStr for GeneratorSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| anyhow!("bad generator spec {s:?}"))?;
        Ok(match kind {
            "random" => {
                let alpha: f64 = rest.parse().with_context(|| format!("bad density in {s:?}"))?;
                if !(0.0..=1.0).contains(&alpha) {
                    bail!("density {alpha} outside [0, 1]");
                }
                GeneratorSpec::RandomDensity(alpha)
            }
            "classes" => GeneratorSpec::ClassUnion(index_list(rest)?),
            "coset" => {
                let (gens, ids) = rest.split_once('/').ok_or_else(|| anyhow!("coset spec needs GENS/IDS"))?;
                GeneratorSpec::CosetUnion { generators: index_list(gens)?, cosets: index_list(ids)? }
            }
            "product" => {
                let (l, r) = rest.split_once('*').ok_or_else(|| anyhow!("product spec needs LEFT*RIGHT"))?;
                GeneratorSpec::ProductOfSets(Box::new(l.parse()?), Box::new(r.parse()?))
            }
            "file" => GeneratorSpec::ExplicitFile(PathBuf::from(rest)),
            _ => bail!("unknown generator kind {kind:?}"),
        })
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::RandomDensity(a) => write!(f, "random:{a}"),
            GeneratorSpec::ClassUnion(ids) => write!(f, "classes:{}", join(ids)),
            GeneratorSpec::CosetUnion { generators, cosets } => {
                write!(f, "coset:{}/{}", join(generators), join(cosets))
            }
            GeneratorSpec::ProductOfSets(l, r) => write!(f, "product:{l}*{r}"),
            GeneratorSpec::ExplicitFile(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Right cosets `H g` of `H = <generators>`, each sorted, ordered by smallest element.
pub fn right_cosets(g: &GroupTable, generators: &[usize]) -> anyhow::Result<Vec<Vec<usize>>> {
    if let Some(&bad) = generators.iter().find(|&&x| x >= g.order()) {
        bail!("generator {bad} out of range");
    }
    let h = g.subgroup_closure(generators);
    let mut seen = vec![false; g.order()];
    let mut out = Vec::new();
    for rep in 0..g.order() {
        if seen[rep] {
            continue;
        }
        let mut coset: Vec<usize> = h.iter().map(|&x| g.mul(x, rep)).collect();
        coset.sort_unstable();
        coset.iter().for_each(|&x| seen[x] = true);
        out.push(coset);
    }
    Ok(out)
}

fn read_members(path: &std::path::Path, g: &GroupTable, base: Base) -> anyhow::Result<IndicatorSet> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let n = g.order();
    let mut set = match base {
        Base::Group => IndicatorSet::empty(n),
        Base::Square => IndicatorSet::empty_product(n),
    };
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .with_context(|| format!("{}:{}: expected integers", path.display(), lineno + 1))?;
        let index = match (base, fields.as_slice()) {
            (Base::Group, [x]) if *x < n => *x,
            (Base::Square, [x, y]) if *x < n && *y < n => x * n + y,
            _ => bail!("{}:{}: bad member {line:?}", path.display(), lineno + 1),
        };
        set.insert(index);
    }
    Ok(set)
}

/// Materialises `spec` over `g` (or `g x g`). Deterministic in `(spec, seed)`.
pub fn generate_set(spec: &GeneratorSpec, g: &GroupTable, base: Base, seed: u64) -> anyhow::Result<IndicatorSet> {
    let n = g.order();
    match spec {
        GeneratorSpec::RandomDensity(alpha) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut set = match base {
                Base::Group => IndicatorSet::empty(n),
                Base::Square => IndicatorSet::empty_product(n),
            };
            for i in 0..set.base_size() {
                if rng.random::<f64>() < *alpha {
                    set.insert(i);
                }
            }
            Ok(set)
        }
        GeneratorSpec::ClassUnion(ids) => {
            if base == Base::Square {
                bail!("class unions are subsets of G; use product: for G x G");
            }
            let mut set = IndicatorSet::empty(n);
            for &i in ids {
                let cell = g.classes().get(i).ok_or_else(|| anyhow!("unknown class id {i}"))?;
                cell.iter().for_each(|&x| set.insert(x as usize));
            }
            Ok(set)
        }
        GeneratorSpec::CosetUnion { generators, cosets } => {
            if base == Base::Square {
                bail!("coset unions are subsets of G; use product: for G x G");
            }
            let all = right_cosets(g, generators)?;
            let mut set = IndicatorSet::empty(n);
            for &i in cosets {
                let c = all.get(i).ok_or_else(|| anyhow!("unknown coset id {i}"))?;
                c.iter().for_each(|&x| set.insert(x));
            }
            Ok(set)
        }
        GeneratorSpec::ProductOfSets(l, r) => {
            if base == Base::Group {
                bail!("product of sets lives in G x G");
            }
            let s = generate_set(l, g, Base::Group, derive_u64(seed, "left", 0))?;
            let t = generate_set(r, g, Base::Group, derive_u64(seed, "right", 0))?;
            Ok(IndicatorSet::product_of(&s, &t)?)
        }
        GeneratorSpec::ExplicitFile(path) => read_members(path, g, base),
    }
}

/// `3 sqrt(alpha (1 - alpha) / N)`: the recorded (not enforced) spread of a
/// random-density set's realised density.
pub fn density_tolerance(alpha: f64, base_size: usize) -> f64 {
    3.0 * (alpha * (1.0 - alpha) / base_size as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn specs_round_trip_through_strings() {
        for s in ["random:0.5", "classes:0,2", "coset:1,2/0", "product:random:0.25*classes:1", "file:a.txt"] {
            let spec: GeneratorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("random:1.5".parse::<GeneratorSpec>().is_err());
        assert!("blob:1".parse::<GeneratorSpec>().is_err());
    }
}
