//! Character tables from the class algebra.
//!
//! The class sums `C_1, ..., C_r` span the centre of the group algebra, and
//! multiplication by `C_i` in that basis is the integer matrix `M_i`. Each
//! irreducible character gives a common eigenvector of every `M_i`: its
//! central character `w(j) = |C_j| chi(C_j) / d`. We separate the common
//! eigenvectors with one random combination of the `M_i`, read the degree off
//! `sum_j |w(j)|^2 / |C_j| = |G| / d^2`, and then check the whole table with
//! exact and floating-point identities.
//!
//! The combination is chosen to be Hermitian after the similarity
//! `diag(|C_j|^{-1/2})`, which makes the eigenproblem a real symmetric one of
//! twice the size and lets us use Jacobi rotations.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::eigen::symmetric_eigen;
use crate::error::{Error, Result};
use crate::group::GroupTable;

pub const MAX_CLASSES: usize = 64;
pub const MAX_RETRIES: usize = 8;
pub const DEFAULT_SEED: u64 = 0x00c0_ffee;

/// Tolerance on row orthogonality, absolute on the `|G| [i = k]` scale.
pub const ORTHOGONALITY_TOL: f64 = 1e-6;

/// Structure constants of the class algebra for one class `C_i`:
/// `at(j, k) = #{(x, y) in C_i x C_j : x y = z}` for any fixed `z` in `C_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl ClassMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn at(&self, j: usize, k: usize) -> i64 {
        self.entries[j * self.dim + k]
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn matmul(&self, other: &ClassMatrix) -> ClassMatrix {
        let r = self.dim;
        let mut entries = vec![0i64; r * r];
        for j in 0..r {
            for l in 0..r {
                let a = self.at(j, l);
                if a == 0 {
                    continue;
                }
                for k in 0..r {
                    entries[j * r + k] += a * other.at(l, k);
                }
            }
        }
        ClassMatrix { dim: r, entries }
    }
}

pub fn class_matrices(g: &GroupTable) -> Result<Vec<ClassMatrix>> {
    let r = g.class_count();
    if r > MAX_CLASSES {
        return Err(Error::TooManyClasses(r));
    }
    let column = |z: usize| -> Vec<i64> {
        // counts[i * r + j] for pairs x in C_i, y in C_j with x y = z
        let mut counts = vec![0i64; r * r];
        for x in 0..g.order() {
            let y = g.mul(g.inv(x), z);
            counts[g.class_of(x) * r + g.class_of(y)] += 1;
        }
        counts
    };
    let mut mats: Vec<ClassMatrix> = (0..r)
        .map(|_| ClassMatrix { dim: r, entries: vec![0; r * r] })
        .collect();
    for (k, cell) in g.classes().iter().enumerate() {
        let counts = column(cell[0] as usize);
        if cell.len() > 1 && column(*cell.last().unwrap() as usize) != counts {
            return Err(Error::InvalidTable(alloc::format!(
                "structure constants depend on the representative of class {k}"
            )));
        }
        for i in 0..r {
            for j in 0..r {
                mats[i].entries[j * r + k] = counts[i * r + j];
            }
        }
    }
    Ok(mats)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharacterTable {
    order: usize,
    class_sizes: Vec<usize>,
    degrees: Vec<u32>,
    /// `characters[i][j] = chi_i(C_j)`.
    characters: Vec<Vec<Complex64>>,
    /// `central[i][j] = |C_j| chi_i(C_j) / d_i`.
    central: Vec<Vec<Complex64>>,
}

impl CharacterTable {
    pub fn group_order(&self) -> usize {
        self.order
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// Irreducible degrees, ascending; the trivial character comes first.
    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn characters(&self) -> &[Vec<Complex64>] {
        &self.characters
    }

    pub fn central_characters(&self) -> &[Vec<Complex64>] {
        &self.central
    }

    pub fn class_count(&self) -> usize {
        self.class_sizes.len()
    }

    /// Largest `D` such that every nontrivial irreducible has degree at least
    /// `D`: the minimal nontrivial degree.
    pub fn quasirandomness_degree(&self) -> Result<u32> {
        self.degrees.get(1).copied().ok_or(Error::TrivialGroup)
    }

    /// Largest deviation of `sum_j |C_j| chi_i(C_j) conj(chi_k(C_j))` from
    /// `|G| [i = k]`.
    pub fn orthogonality_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.characters.iter().enumerate() {
            for (k, b) in self.characters.iter().enumerate() {
                let s: Complex64 = a
                    .iter()
                    .zip(b)
                    .zip(&self.class_sizes)
                    .map(|((x, y), &c)| x * y.conj() * c as f64)
                    .sum();
                let target = if i == k { self.order as f64 } else { 0.0 };
                worst = worst.max((s - target).norm());
            }
        }
        worst
    }

    fn verify(&self) -> core::result::Result<(), &'static str> {
        if self.degrees.len() != self.class_sizes.len() {
            return Err("irreducible count differs from class count");
        }
        let sum_sq: u64 = self.degrees.iter().map(|&d| d as u64 * d as u64).sum();
        if sum_sq != self.order as u64 {
            return Err("squared degrees do not sum to the group order");
        }
        if self.degrees[0] != 1 || self.characters[0].iter().any(|c| (c - 1.0).norm() > 1e-9) {
            return Err("first character is not trivial");
        }
        if self.orthogonality_error() > ORTHOGONALITY_TOL {
            return Err("rows are not orthogonal");
        }
        Ok(())
    }
}

enum Attempt {
    NotSeparated,
    Failed(&'static str),
}

pub fn character_table(g: &GroupTable) -> Result<CharacterTable> {
    character_table_seeded(g, DEFAULT_SEED)
}

pub fn character_table_seeded(g: &GroupTable, seed: u64) -> Result<CharacterTable> {
    let mats = class_matrices(g)?;
    let sizes: Vec<usize> = g.classes().iter().map(Vec::len).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Attempt::NotSeparated;
    for _ in 0..=MAX_RETRIES {
        let coeffs: Vec<Complex64> = sizes
            .iter()
            .map(|&s| {
                let re: f64 = rng.random_range(-1.0..1.0);
                let im: f64 = rng.random_range(-1.0..1.0);
                Complex64::new(re, im) / s as f64
            })
            .collect();
        match attempt(g.order(), &mats, &sizes, &coeffs) {
            Ok(table) => return Ok(table),
            Err(e) => last = e,
        }
    }
    Err(match last {
        Attempt::NotSeparated => Error::NotSeparated(MAX_RETRIES + 1),
        Attempt::Failed(why) => Error::ReconstructionFailed(why.into()),
    })
}

fn attempt(
    order: usize,
    mats: &[ClassMatrix],
    sizes: &[usize],
    coeffs: &[Complex64],
) -> core::result::Result<CharacterTable, Attempt> {
    let r = sizes.len();
    let sqrt_size: Vec<f64> = sizes.iter().map(|&s| libm::sqrt(s as f64)).collect();

    // H = sum_i c_i N_i + conj(c_i) N_i^T with N_i = D M_i D^-1, D = diag(|C_j|^-1/2).
    let mut re = vec![0.0; r * r];
    let mut im = vec![0.0; r * r];
    for (m, c) in mats.iter().zip(coeffs) {
        for j in 0..r {
            for k in 0..r {
                let njk = m.at(j, k) as f64 * sqrt_size[k] / sqrt_size[j];
                let nkj = m.at(k, j) as f64 * sqrt_size[j] / sqrt_size[k];
                re[j * r + k] += c.re * (njk + nkj);
                im[j * r + k] += c.im * (njk - nkj);
            }
        }
    }
    // Real form [[A, -B], [B, A]] of the Hermitian A + iB.
    let dim = 2 * r;
    let mut real = vec![0.0; dim * dim];
    for j in 0..r {
        for k in 0..r {
            let (a, b) = (re[j * r + k], im[j * r + k]);
            real[j * dim + k] = a;
            real[(j + r) * dim + (k + r)] = a;
            real[j * dim + (k + r)] = -b;
            real[(j + r) * dim + k] = b;
        }
    }
    let eig = symmetric_eigen(dim, &real);
    let scale = eig.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    for m in 0..r {
        if (eig.values[2 * m + 1] - eig.values[2 * m]).abs() > 1e-8 * scale {
            return Err(Attempt::NotSeparated);
        }
        if m > 0 && eig.values[2 * m] - eig.values[2 * m - 1] < 1e-6 * scale {
            return Err(Attempt::NotSeparated);
        }
    }

    let mut rows = Vec::with_capacity(r);
    for m in 0..r {
        let v = &eig.vectors[2 * m];
        let mut w: Vec<Complex64> = (0..r)
            .map(|j| Complex64::new(v[j], v[j + r]) * sqrt_size[j])
            .collect();
        let w0 = w[0];
        if w0.norm() < 1e-12 {
            return Err(Attempt::Failed("eigenvector vanishes on the identity class"));
        }
        w.iter_mut().for_each(|x| *x /= w0);

        // Every M_i must act on w by the scalar w(i).
        for (i, mat) in mats.iter().enumerate() {
            for j in 0..r {
                let mw: Complex64 = (0..r).map(|k| w[k] * mat.at(j, k) as f64).sum();
                let tol = 1e-7 * (1.0 + sizes[i] as f64) * (1.0 + w[j].norm());
                if (mw - w[i] * w[j]).norm() > tol {
                    return Err(Attempt::NotSeparated);
                }
            }
        }

        let norm: f64 = w.iter().zip(sizes).map(|(x, &s)| x.norm_sqr() / s as f64).sum();
        let d_real = libm::sqrt(order as f64 / norm);
        let d = libm::round(d_real);
        if d < 1.0 || (d_real - d).abs() > 1e-4 {
            return Err(Attempt::Failed("degree is not close to an integer"));
        }
        let chi: Vec<Complex64> = w.iter().zip(sizes).map(|(x, &s)| x * d / s as f64).collect();
        rows.push((d as u32, chi, w));
    }

    let key = |row: &(u32, Vec<Complex64>, Vec<Complex64>)| {
        let trivial = row.1.iter().all(|c| (c - 1.0).norm() < 1e-6);
        let quantised: Vec<(i64, i64)> = row
            .1
            .iter()
            .map(|c| (libm::round(c.re * 1e6) as i64, libm::round(c.im * 1e6) as i64))
            .collect();
        (!trivial, row.0, quantised)
    };
    rows.sort_by_cached_key(key);

    let table = CharacterTable {
        order,
        class_sizes: sizes.to_vec(),
        degrees: rows.iter().map(|r| r.0).collect(),
        characters: rows.iter().map(|r| r.1.clone()).collect(),
        central: rows.into_iter().map(|r| r.2).collect(),
    };
    table.verify().map_err(Attempt::Failed)?;
    Ok(table)
}

/// Minimal nontrivial irreducible degree of `g`.
pub fn quasirandomness_degree(g: &GroupTable) -> Result<u32> {
    if g.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    character_table(g)?.quasirandomness_degree()
}
