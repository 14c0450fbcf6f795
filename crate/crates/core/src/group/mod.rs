//! Finite groups as dense Cayley tables.
//!
//! Every table keeps the identity at index 0 and lists its elements in the
//! order the constructor enumerated them; indicator sets, profiles and the
//! on-disk cache all refer to that order.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

mod build;
mod product;
mod spec;

pub use build::{MAX_CYCLIC, MAX_MATRIX_FIELD, build_cyclic, build_psl2, build_sl2, build_symmetric, symmetric_permutations};
pub use product::{build_product, Product, ProductView, DENSE_PRODUCT_LIMIT};
pub use spec::GroupSpec;

/// Orders up to this are checked for associativity exhaustively.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;

const SAMPLED_ASSOC_TRIPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Family {
    Cyclic = 0,
    Symmetric = 1,
    Sl2 = 2,
    Psl2 = 3,
    Product = 4,
    Custom = 5,
}

impl Family {
    pub fn tag(self) -> u8 {
        self as u8
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => Family::Cyclic,
            1 => Family::Symmetric,
            2 => Family::Sl2,
            3 => Family::Psl2,
            4 => Family::Product,
            5 => Family::Custom,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Cyclic => "cyclic",
            Family::Symmetric => "symmetric",
            Family::Sl2 => "sl2",
            Family::Psl2 => "psl2",
            Family::Product => "product",
            Family::Custom => "custom",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
    labels: Vec<String>,
    classes: Vec<Vec<u32>>,
    class_of: Vec<u32>,
    family: Family,
}

impl GroupTable {
    /// Wraps a row-major multiplication table, checking the Latin-square,
    /// identity and associativity laws and computing inverses and classes.
    pub fn from_table(family: Family, n: usize, mul: Vec<u32>, labels: Vec<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTable("empty group".into()));
        }
        let mut g = Self::from_table_unchecked(family, n, mul, labels)?;
        g.validate()?;
        g.classes = g.compute_classes();
        g.class_of = class_index(n, &g.classes);
        Ok(g)
    }

    /// Builds a table from trusted constructor output; only sizes and the
    /// inverse table are derived here, associativity is not rechecked.
    pub(crate) fn from_table_unchecked(
        family: Family,
        n: usize,
        mul: Vec<u32>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if mul.len() != n * n {
            return Err(Error::SizeMismatch { expected: n * n, got: mul.len() });
        }
        if labels.len() != n {
            return Err(Error::SizeMismatch { expected: n, got: labels.len() });
        }
        let mut inv = vec![u32::MAX; n];
        for x in 0..n {
            let row = &mul[x * n..(x + 1) * n];
            match row.iter().position(|&v| v == 0) {
                Some(y) => inv[x] = y as u32,
                None => return Err(Error::InvalidTable(alloc::format!("element {x} has no inverse"))),
            }
        }
        Ok(GroupTable {
            n,
            mul,
            inv,
            labels,
            classes: Vec::new(),
            class_of: Vec::new(),
            family,
        })
    }

    /// Assembles a table from already-computed parts (cache reads, products).
    /// Runs the full structural validation, including the class partition.
    pub fn from_parts(
        family: Family,
        n: usize,
        mul: Vec<u32>,
        inv: Vec<u32>,
        classes: Vec<Vec<u32>>,
        labels: Vec<String>,
    ) -> Result<Self> {
        if mul.len() != n * n || inv.len() != n || labels.len() != n {
            return Err(Error::InvalidTable("component sizes disagree with order".into()));
        }
        let class_of = class_index(n, &classes);
        let g = GroupTable { n, mul, inv, labels, classes, class_of, family };
        g.validate()?;
        g.validate_classes()?;
        Ok(g)
    }

    pub(crate) fn finish_classes(&mut self) {
        self.classes = self.compute_classes();
        self.class_of = class_index(self.n, &self.classes);
    }

    pub(crate) fn set_classes(&mut self, classes: Vec<Vec<u32>>) {
        self.class_of = class_index(self.n, &classes);
        self.classes = classes;
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// Row `a` of the table: `b -> a * b`.
    #[inline]
    pub fn row(&self, a: usize) -> &[u32] {
        &self.mul[a * self.n..(a + 1) * self.n]
    }

    pub fn table(&self) -> &[u32] {
        &self.mul
    }

    pub fn inverses(&self) -> &[u32] {
        &self.inv
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Conjugacy classes: identity's class first, then by (size, least member).
    pub fn classes(&self) -> &[Vec<u32>] {
        &self.classes
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a] as usize
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (a..self.n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn subgroup_closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut members = BTreeSet::new();
        members.insert(0usize);
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        members.into_iter().collect()
    }

    /// Conjugacy classes by orbit expansion under every conjugation.
    pub fn compute_classes(&self) -> Vec<Vec<u32>> {
        let n = self.n;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if seen[x] {
                continue;
            }
            let mut cell = Vec::new();
            for g in 0..n {
                let y = self.conjugate(g, x);
                if !seen[y] {
                    seen[y] = true;
                    cell.push(y as u32);
                }
            }
            cell.sort_unstable();
            classes.push(cell);
        }
        sort_classes(&mut classes);
        classes
    }

    /// Latin square, identity at 0, inverses, associativity.
    ///
    /// Associativity is exhaustive up to [`EXHAUSTIVE_ASSOC_LIMIT`] and
    /// checked on 10^5 seeded random triples above it.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        let bad = |msg: String| Err(Error::InvalidTable(msg));
        let mut seen = vec![0u32; n];
        for x in 0..n {
            let stamp = x as u32 + 1;
            for y in 0..n {
                let v = self.mul(x, y);
                if v >= n || seen[v] == stamp {
                    return bad(alloc::format!("row {x} is not a permutation"));
                }
                seen[v] = stamp;
            }
        }
        seen.iter_mut().for_each(|s| *s = 0);
        for y in 0..n {
            let stamp = y as u32 + 1;
            for x in 0..n {
                let v = self.mul(x, y);
                if seen[v] == stamp {
                    return bad(alloc::format!("column {y} is not a permutation"));
                }
                seen[v] = stamp;
            }
        }
        for x in 0..n {
            if self.mul(0, x) != x || self.mul(x, 0) != x {
                return bad(alloc::format!("index 0 is not an identity at {x}"));
            }
            let i = self.inv(x);
            if i >= n || self.mul(x, i) != 0 || self.mul(i, x) != 0 {
                return bad(alloc::format!("bad inverse for {x}"));
            }
        }
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = self.mul(a, b);
                    for c in 0..n {
                        if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                            return bad(alloc::format!("not associative at ({a},{b},{c})"));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_a55c);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (a, b, c) = (rng.random_range(0..n), rng.random_range(0..n), rng.random_range(0..n));
                if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                    return bad(alloc::format!("not associative at ({a},{b},{c})"));
                }
            }
        }
        Ok(())
    }

    /// Checks the stored classes: a partition in canonical order, with each
    /// cell closed under conjugation and reached from its least member.
    pub fn validate_classes(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidTable(msg.into()));
        let n = self.n;
        let mut seen = vec![false; n];
        for cell in &self.classes {
            if cell.is_empty() {
                return bad("empty conjugacy class");
            }
            for &x in cell {
                if x as usize >= n || core::mem::replace(&mut seen[x as usize], true) {
                    return bad("conjugacy classes do not partition the group");
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("conjugacy classes do not cover the group");
        }
        if self.classes[0] != [0] {
            return bad("identity class must come first");
        }
        let mut sorted = self.classes.clone();
        sort_classes(&mut sorted);
        if sorted != self.classes {
            return bad("conjugacy classes out of canonical order");
        }
        for cell in &self.classes {
            let x = cell[0] as usize;
            let mut orbit: Vec<u32> = (0..n).map(|g| self.conjugate(g, x) as u32).collect();
            orbit.sort_unstable();
            orbit.dedup();
            if &orbit != cell {
                return bad("stored class is not a conjugation orbit");
            }
        }
        Ok(())
    }
}

pub(crate) fn sort_classes(classes: &mut [Vec<u32>]) {
    for c in classes.iter_mut() {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| (c.len(), c[0]));
}

fn class_index(n: usize, classes: &[Vec<u32>]) -> Vec<u32> {
    let mut class_of = vec![u32::MAX; n];
    for (i, cell) in classes.iter().enumerate() {
        for &x in cell {
            if (x as usize) < n {
                class_of[x as usize] = i as u32;
            }
        }
    }
    class_of
}
