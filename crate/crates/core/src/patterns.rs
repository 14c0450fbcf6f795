//! Counting corners in `G`, triangles in `G x G`, and the mixing discrepancy.
//!
//! Triangle counts are computed row by row: for a fixed `g`, the condition on
//! `(gx, y)` is a whole row of `A`, and the condition on `(gx, gy)` is that row
//! permuted by left multiplication. The permuted row is gathered into a
//! scratch buffer, then the three rows are combined with AND and popcount.
//! Nothing is cached across different `g`.

use alloc::vec;
use alloc::vec::Vec;

use crate::bits::IndicatorSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;
use crate::measure::{class_projection, GroupFunction};

/// Which triple of shifts defines a triangle at `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum TriangleShape {
    /// `(x, y), (gx, y), (gx, gy)`.
    #[default]
    Correlation,
    /// `(x, y), (x, gy), (gx, gy)`: the set `A ∩ (1,g)^-1 A ∩ (g,g)^-1 A`.
    Literal,
}

fn check_group_set(g: &GroupTable, a: &IndicatorSet) -> Result<()> {
    if a.is_product() {
        return Err(Error::InvalidParameter("expected a subset of G, got G x G".into()));
    }
    if a.group_order() != g.order() {
        return Err(Error::SizeMismatch { expected: g.order(), got: a.group_order() });
    }
    Ok(())
}

fn check_product_set(g: &GroupTable, a: &IndicatorSet) -> Result<()> {
    if !a.is_product() {
        return Err(Error::NotProduct);
    }
    if a.group_order() != g.order() {
        return Err(Error::SizeMismatch { expected: g.order(), got: a.group_order() });
    }
    Ok(())
}

fn check_element(grp: &GroupTable, g: usize) -> Result<()> {
    if g >= grp.order() {
        return Err(Error::InvalidParameter(alloc::format!("element {g} out of range")));
    }
    Ok(())
}

/// `{ s g : s in a }` or `{ g s : s in a }` as packed words.
fn translate(grp: &GroupTable, a: &IndicatorSet, g: usize, left: bool, out: &mut [u64]) {
    out.iter_mut().for_each(|w| *w = 0);
    for s in a.iter() {
        let t = if left { grp.mul(g, s) } else { grp.mul(s, g) };
        out[t / 64] |= 1 << (t % 64);
    }
}

fn corner_count_with(grp: &GroupTable, a: &IndicatorSet, g: usize, ga: &mut [u64], ag: &mut [u64]) -> usize {
    translate(grp, a, g, true, ga);
    translate(grp, a, g, false, ag);
    a.words()
        .iter()
        .zip(ga.iter())
        .zip(ag.iter())
        .map(|((x, y), z)| (x & y & z).count_ones() as usize)
        .sum()
}

/// `|A ∩ gA ∩ Ag|`.
pub fn corner_count(grp: &GroupTable, a: &IndicatorSet, g: usize) -> Result<usize> {
    check_group_set(grp, a)?;
    check_element(grp, g)?;
    let w = a.words().len();
    Ok(corner_count_with(grp, a, g, &mut vec![0; w], &mut vec![0; w]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CornerProfile {
    /// `counts[g] = |A ∩ gA ∩ Ag|`.
    pub counts: Vec<usize>,
    /// Number of `g` with `alpha^3 - eps <= counts[g] / |G| <= alpha^2 + eps`.
    pub within_band: usize,
    /// Elements `g` of `A` with at least one corner.
    pub positive_in_set: Vec<usize>,
}

pub fn corner_profile(grp: &GroupTable, a: &IndicatorSet, eps: f64) -> Result<CornerProfile> {
    check_group_set(grp, a)?;
    let n = grp.order();
    let w = a.words().len();
    let (mut ga, mut ag) = (vec![0; w], vec![0; w]);
    let counts: Vec<usize> = (0..n).map(|g| corner_count_with(grp, a, g, &mut ga, &mut ag)).collect();
    let alpha = a.density();
    let (lo, hi) = (alpha * alpha * alpha - eps, alpha * alpha + eps);
    let within_band = counts
        .iter()
        .filter(|&&c| {
            let d = c as f64 / n as f64;
            lo <= d && d <= hi
        })
        .count();
    let positive_in_set = (0..n).filter(|&g| a.contains(g) && counts[g] > 0).collect();
    Ok(CornerProfile { counts, within_band, positive_in_set })
}

/// Bit `y` of `out` is `A[row][perm[y]]`.
#[inline]
fn gather_row(a: &IndicatorSet, row: usize, perm: &[u32], out: &mut [u64]) {
    let src = a.row(row);
    for (wi, word) in out.iter_mut().enumerate() {
        let mut acc = 0u64;
        let base = wi * 64;
        let end = (base + 64).min(perm.len());
        for (bit, &p) in perm[base..end].iter().enumerate() {
            let p = p as usize;
            acc |= ((src[p / 64] >> (p % 64)) & 1) << bit;
        }
        *word = acc;
    }
}

fn triangle_count_with(
    grp: &GroupTable,
    a: &IndicatorSet,
    g: usize,
    shape: TriangleShape,
    buf1: &mut [u64],
    buf2: &mut [u64],
) -> usize {
    let left = grp.row(g);
    let mut total = 0usize;
    for x in 0..grp.order() {
        let gx = left[x] as usize;
        let base = a.row(x);
        match shape {
            TriangleShape::Correlation => {
                gather_row(a, gx, left, buf1);
                for ((p, q), r) in base.iter().zip(a.row(gx)).zip(buf1.iter()) {
                    total += (p & q & r).count_ones() as usize;
                }
            }
            TriangleShape::Literal => {
                gather_row(a, x, left, buf1);
                gather_row(a, gx, left, buf2);
                for ((p, q), r) in base.iter().zip(buf1.iter()).zip(buf2.iter()) {
                    total += (p & q & r).count_ones() as usize;
                }
            }
        }
    }
    total
}

/// Number of `(x, y)` completing a triangle of the given shape at `g`.
pub fn triangle_count(grp: &GroupTable, a: &IndicatorSet, g: usize, shape: TriangleShape) -> Result<usize> {
    check_product_set(grp, a)?;
    check_element(grp, g)?;
    let w = a.row_words();
    Ok(triangle_count_with(grp, a, g, shape, &mut vec![0; w], &mut vec![0; w]))
}

/// `triangle_count` for every `g`, indexed by `g`.
pub fn triangle_profile(grp: &GroupTable, a: &IndicatorSet, shape: TriangleShape) -> Result<Vec<usize>> {
    check_product_set(grp, a)?;
    let w = a.row_words();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        Ok((0..grp.order())
            .into_par_iter()
            .map_init(
                || (vec![0u64; w], vec![0u64; w]),
                |(b1, b2), g| triangle_count_with(grp, a, g, shape, b1, b2),
            )
            .collect())
    }
    #[cfg(not(feature = "parallel"))]
    {
        let (mut b1, mut b2) = (vec![0u64; w], vec![0u64; w]);
        Ok((0..grp.order())
            .map(|g| triangle_count_with(grp, a, g, shape, &mut b1, &mut b2))
            .collect())
    }
}

/// `alpha^4 - eps`.
pub fn triangle_threshold(alpha: f64, eps: f64) -> f64 {
    alpha * alpha * alpha * alpha - eps
}

/// `{ g : profile[g] / |G|^2 > threshold }` for any real threshold.
pub fn return_set_from_profile(order: usize, profile: &[usize], threshold: f64) -> IndicatorSet {
    let n2 = (order * order) as f64;
    let mut out = IndicatorSet::empty(order);
    for (g, &c) in profile.iter().enumerate() {
        if c as f64 / n2 > threshold {
            out.insert(g);
        }
    }
    out
}

/// `{ g : triangle_count(A, g) / |G|^2 > threshold }`; comparison is strict.
pub fn return_set(grp: &GroupTable, a: &IndicatorSet, threshold: f64, shape: TriangleShape) -> Result<IndicatorSet> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::ThresholdOutOfRange(threshold));
    }
    let profile = triangle_profile(grp, a, shape)?;
    Ok(return_set_from_profile(grp.order(), &profile, threshold))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mixing {
    /// Mean of `per_g`.
    pub delta: f64,
    /// `|int f1(x) f2(xg) f3(gx) dm(x) - int f1 * int f2 E(f3|I_G)|` per `g`.
    pub per_g: Vec<f64>,
    /// `int f1 * int f2 E(f3|I_G)`.
    pub correction: f64,
    /// `4 D^{-1/8}` when a degree was supplied.
    pub austin_bound: Option<f64>,
}

/// Tolerance on `|f| <= 1`.
const SUP_SLACK: f64 = 1e-12;

pub fn austin_bound(degree: u32) -> f64 {
    4.0 * libm::pow(degree as f64, -0.125)
}

pub fn mixing_discrepancy(
    grp: &GroupTable,
    f1: &GroupFunction,
    f2: &GroupFunction,
    f3: &GroupFunction,
    degree: Option<u32>,
) -> Result<Mixing> {
    let n = grp.order();
    for f in [f1, f2, f3] {
        if f.len() != n {
            return Err(Error::SizeMismatch { expected: n, got: f.len() });
        }
        let s = f.sup_norm();
        if s.is_nan() || s > 1.0 + SUP_SLACK {
            return Err(Error::SupNorm(s));
        }
    }
    let projected = class_projection(f3, grp)?;
    let correction = f1.integral() * f2.inner(&projected);
    let per_g: Vec<f64> = (0..n)
        .map(|g| {
            let left = grp.row(g);
            let s: f64 = (0..n)
                .map(|x| f1.at(x) * f2.at(grp.mul(x, g)) * f3.at(left[x] as usize))
                .sum();
            (s / n as f64 - correction).abs()
        })
        .collect();
    let delta = per_g.iter().sum::<f64>() / n as f64;
    Ok(Mixing { delta, per_g, correction, austin_bound: degree.map(austin_bound) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimePowerField;
    use crate::group::{build_cyclic, build_psl2, build_symmetric};

    #[test]
    fn corner_identity_and_full() {
        let g = build_symmetric(3).unwrap();
        let a = IndicatorSet::from_members(6, [0, 2, 5]).unwrap();
        assert_eq!(corner_count(&g, &a, 0).unwrap(), 3);
        let full = IndicatorSet::full(6);
        assert!((0..6).all(|h| corner_count(&g, &full, h).unwrap() == 6));
        let prof = corner_profile(&g, &IndicatorSet::empty(6), 0.1).unwrap();
        assert_eq!(prof.counts, vec![0; 6]);
    }

    #[test]
    fn two_point_triangle() {
        let c2 = build_cyclic(2).unwrap();
        let a = IndicatorSet::from_pairs(2, [(0, 0), (1, 1)]).unwrap();
        assert_eq!(triangle_count(&c2, &a, 1, TriangleShape::Correlation).unwrap(), 0);
        assert_eq!(triangle_count(&c2, &a, 0, TriangleShape::Correlation).unwrap(), 2);
    }

    #[test]
    fn triangle_requires_product_set() {
        let c2 = build_cyclic(2).unwrap();
        let a = IndicatorSet::full(2);
        assert_eq!(triangle_count(&c2, &a, 0, TriangleShape::Correlation), Err(Error::NotProduct));
        let b = IndicatorSet::full_product(3);
        assert!(triangle_count(&c2, &b, 0, TriangleShape::Correlation).is_err());
    }

    #[test]
    fn full_square_profile() {
        let g = build_symmetric(3).unwrap();
        let a = IndicatorSet::full_product(6);
        for shape in [TriangleShape::Correlation, TriangleShape::Literal] {
            assert_eq!(triangle_profile(&g, &a, shape).unwrap(), vec![36; 6]);
        }
        let e = IndicatorSet::empty_product(6);
        assert_eq!(triangle_profile(&g, &e, TriangleShape::Correlation).unwrap(), vec![0; 6]);
    }

    #[test]
    fn return_set_threshold_rules() {
        let g = build_cyclic(5).unwrap();
        let full = IndicatorSet::full_product(5);
        assert!(matches!(
            return_set(&g, &full, -0.1, TriangleShape::Correlation),
            Err(Error::ThresholdOutOfRange(_))
        ));
        assert_eq!(return_set(&g, &full, 0.0, TriangleShape::Correlation).unwrap().len(), 5);
        // strict comparison: density 1 is not > 1
        assert_eq!(return_set(&g, &full, 1.0, TriangleShape::Correlation).unwrap().len(), 0);
        let empty = IndicatorSet::empty_product(5);
        assert!(return_set(&g, &empty, 0.0, TriangleShape::Correlation).unwrap().is_empty());
    }

    #[test]
    fn mixing_trivial_cases() {
        let g = build_psl2(&PrimePowerField::new(5, 1).unwrap()).unwrap();
        let one = GroupFunction::constant(60, 1.0);
        let m = mixing_discrepancy(&g, &one, &one, &one, Some(3)).unwrap();
        assert!(m.delta.abs() < 1e-15);
        assert!((m.austin_bound.unwrap() - 4.0 * 3f64.powf(-0.125)).abs() < 1e-15);
        let zero = GroupFunction::constant(60, 0.0);
        assert_eq!(mixing_discrepancy(&g, &zero, &one, &one, None).unwrap().delta, 0.0);
        let big = GroupFunction::constant(60, 1.5);
        assert!(matches!(mixing_discrepancy(&g, &big, &one, &one, None), Err(Error::SupNorm(_))));
    }
}
