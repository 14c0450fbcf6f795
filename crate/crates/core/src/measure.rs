//! Real functions on a finite set under the normalised counting measure.
//!
//! All integrals are `(1/n) sum_x f(x)` summed in index order, so results are
//! bitwise reproducible.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::GroupTable;

#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    values: Vec<f64>,
}

impl GroupFunction {
    pub fn new(values: Vec<f64>) -> Self {
        GroupFunction { values }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        GroupFunction { values: vec![c; n] }
    }

    pub fn indicator(n: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut values = vec![0.0; n];
        for x in members {
            values[x] = 1.0;
        }
        GroupFunction { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    #[inline]
    pub fn at(&self, x: usize) -> f64 {
        self.values[x]
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// `int f h dm`.
    pub fn inner(&self, other: &GroupFunction) -> f64 {
        self.values.iter().zip(&other.values).map(|(a, b)| a * b).sum::<f64>() / self.values.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> GroupFunction {
        GroupFunction { values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(&self, other: &GroupFunction, f: impl Fn(f64, f64) -> f64) -> GroupFunction {
        GroupFunction {
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        }
    }

    fn require_len(&self, n: usize) -> Result<()> {
        if self.values.len() != n {
            return Err(Error::SizeMismatch { expected: n, got: self.values.len() });
        }
        Ok(())
    }

    fn require_nonnegative(&self) -> Result<()> {
        if self.values.iter().any(|&v| v.is_nan() || v < 0.0) {
            return Err(Error::NegativeValue);
        }
        Ok(())
    }
}

/// A partition of `0..n` into nonempty cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    cell_of: Vec<u32>,
    cells: Vec<Vec<u32>>,
}

impl Partition {
    /// From a cell id per element. Ids need not be contiguous; cells are
    /// renumbered in order of first appearance.
    pub fn from_assignment(assignment: &[usize]) -> Self {
        let mut remap = alloc::collections::BTreeMap::new();
        let mut cells: Vec<Vec<u32>> = Vec::new();
        let mut cell_of = Vec::with_capacity(assignment.len());
        for (x, &a) in assignment.iter().enumerate() {
            let id = *remap.entry(a).or_insert_with(|| {
                cells.push(Vec::new());
                cells.len() - 1
            });
            cells[id].push(x as u32);
            cell_of.push(id as u32);
        }
        Partition { cell_of, cells }
    }

    pub fn from_cells(n: usize, cells: Vec<Vec<u32>>) -> Result<Self> {
        let mut cell_of = vec![u32::MAX; n];
        for (i, cell) in cells.iter().enumerate() {
            if cell.is_empty() {
                return Err(Error::InvalidParameter("empty cell".into()));
            }
            for &x in cell {
                let slot = cell_of
                    .get_mut(x as usize)
                    .ok_or_else(|| Error::InvalidParameter("cell member out of range".into()))?;
                if *slot != u32::MAX {
                    return Err(Error::InvalidParameter("cells overlap".into()));
                }
                *slot = i as u32;
            }
        }
        if cell_of.contains(&u32::MAX) {
            return Err(Error::InvalidParameter("cells do not cover the base set".into()));
        }
        Ok(Partition { cell_of, cells })
    }

    pub fn trivial(n: usize) -> Self {
        Partition { cell_of: vec![0; n], cells: vec![(0..n as u32).collect()] }
    }

    pub fn discrete(n: usize) -> Self {
        Partition { cell_of: (0..n as u32).collect(), cells: (0..n as u32).map(|x| vec![x]).collect() }
    }

    /// Conjugacy classes of `g`: the atoms of the conjugation-invariant sets.
    pub fn conjugacy(g: &GroupTable) -> Self {
        Partition::from_cells(g.order(), g.classes().to_vec()).expect("classes partition the group")
    }

    pub fn base_size(&self) -> usize {
        self.cell_of.len()
    }

    pub fn cells(&self) -> &[Vec<u32>] {
        &self.cells
    }

    pub fn cell_of(&self, x: usize) -> usize {
        self.cell_of[x] as usize
    }
}

/// Cell-wise average of `f`.
pub fn cond_expectation(f: &GroupFunction, p: &Partition) -> Result<GroupFunction> {
    f.require_len(p.base_size())?;
    let mut out = vec![0.0; f.len()];
    for cell in &p.cells {
        let avg = cell.iter().map(|&x| f.at(x as usize)).sum::<f64>() / cell.len() as f64;
        for &x in cell {
            out[x as usize] = avg;
        }
    }
    Ok(GroupFunction::new(out))
}

/// Orthogonal projection onto class functions.
pub fn class_projection(f: &GroupFunction, g: &GroupTable) -> Result<GroupFunction> {
    cond_expectation(f, &Partition::conjugacy(g))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChuOutcome {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

impl ChuOutcome {
    pub fn margin(&self) -> f64 {
        self.lhs - self.rhs
    }
}

pub const CHU_SLACK: f64 = 1e-9;

/// Both sides of Chu's inequality
/// `int f_0 prod_i E(f_i | P_i) >= (int prod_i f_i^{1/(n+1)})^{n+1}`
/// for `fs = [f_0, ..., f_n]` and `partitions = [P_1, ..., P_n]`.
pub fn chu_check(fs: &[GroupFunction], partitions: &[Partition]) -> Result<ChuOutcome> {
    let n = partitions.len();
    if n == 0 || fs.len() != n + 1 {
        return Err(Error::InvalidParameter("need f_0..f_n with n >= 1 partitions".into()));
    }
    let size = fs[0].len();
    for f in fs {
        f.require_len(size)?;
        f.require_nonnegative()?;
    }
    let expectations = fs[1..]
        .iter()
        .zip(partitions)
        .map(|(f, p)| cond_expectation(f, p))
        .collect::<Result<Vec<_>>>()?;

    let exponent = 1.0 / (n + 1) as f64;
    let mut lhs = 0.0;
    let mut root_sum = 0.0;
    for x in 0..size {
        // A zero factor is exactly zero; E(f_i|P_i)(x) = 0 only when f_i
        // vanishes on the whole cell, so no 0 * inf forms arise.
        let mut term = fs[0].at(x);
        for e in &expectations {
            term *= e.at(x);
        }
        lhs += term;
        let mut root = 1.0;
        for f in fs {
            root *= libm::pow(f.at(x), exponent);
        }
        root_sum += root;
    }
    let lhs = lhs / size as f64;
    let rhs = libm::pow(root_sum / size as f64, (n + 1) as f64);
    Ok(ChuOutcome { lhs, rhs, holds: lhs >= rhs - CHU_SLACK })
}

/// `(int f0^{1/4} f1^{1/4} f2^{1/4} dm)^4`.
pub fn quadruple_holder_bound(f0: &GroupFunction, f1: &GroupFunction, f2: &GroupFunction) -> Result<f64> {
    let n = f0.len();
    for f in [f0, f1, f2] {
        f.require_len(n)?;
        f.require_nonnegative()?;
    }
    let s: f64 = (0..n)
        .map(|x| libm::pow(f0.at(x), 0.25) * libm::pow(f1.at(x), 0.25) * libm::pow(f2.at(x), 0.25))
        .sum();
    Ok(libm::pow(s / n as f64, 4.0))
}
