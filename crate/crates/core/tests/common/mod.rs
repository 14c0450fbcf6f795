#![allow(dead_code)]

use qrg_core::field::PrimePowerField;
use qrg_core::group::{build_cyclic, build_psl2, build_sl2, build_symmetric, GroupTable};
use qrg_core::IndicatorSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(q: u64) -> PrimePowerField {
    let (p, k) = qrg_core::field::prime_power(q).unwrap();
    PrimePowerField::new(p, k).unwrap()
}

pub fn psl2(q: u64) -> GroupTable {
    build_psl2(&field(q)).unwrap()
}

pub fn sl2(q: u64) -> GroupTable {
    build_sl2(&field(q)).unwrap()
}

/// Every group of order <= 24 the suite constructs.
pub fn small_groups() -> Vec<(String, GroupTable)> {
    let mut out: Vec<(String, GroupTable)> = (1..=24)
        .map(|n| (format!("cyclic:{n}"), build_cyclic(n).unwrap()))
        .collect();
    out.push(("sym:2".into(), build_symmetric(2).unwrap()));
    out.push(("sym:3".into(), build_symmetric(3).unwrap()));
    out.push(("sym:4".into(), build_symmetric(4).unwrap()));
    out.push(("sl2:2".into(), sl2(2)));
    out.push(("sl2:3".into(), sl2(3)));
    out.push(("psl2:2".into(), psl2(2)));
    out.push(("psl2:3".into(), psl2(3)));
    out
}

pub fn random_set(n: usize, alpha: f64, rng: &mut impl Rng) -> IndicatorSet {
    IndicatorSet::from_members(n, (0..n).filter(|_| rng.random_bool(alpha))).unwrap()
}

pub fn random_pairs(n: usize, alpha: f64, rng: &mut impl Rng) -> IndicatorSet {
    let mut s = IndicatorSet::empty_product(n);
    for i in 0..n * n {
        if rng.random_bool(alpha) {
            s.insert(i);
        }
    }
    s
}

/// |{x : x in A, g^-1 x in A, x g^-1 in A}| by direct membership tests.
pub fn naive_corners(g: &GroupTable, a: &IndicatorSet, h: usize) -> usize {
    let hi = g.inv(h);
    (0..g.order())
        .filter(|&x| a.contains(x) && a.contains(g.mul(hi, x)) && a.contains(g.mul(x, hi)))
        .count()
}

/// |{(x,y) : (x,y), (hx,y), (hx,hy) in A}| by a triple loop over x, y and
/// the group element z = hx found by search.
pub fn naive_triangles(g: &GroupTable, a: &IndicatorSet, h: usize) -> usize {
    let n = g.order();
    let member = |x: usize, y: usize| a.contains(x * n + y);
    let mut count = 0;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if g.mul(h, x) != z {
                    continue;
                }
                if member(x, y) && member(z, y) && member(z, g.mul(h, y)) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// The literal shifts (x,y), (x,hy), (hx,hy).
pub fn naive_literal_triangles(g: &GroupTable, a: &IndicatorSet, h: usize) -> usize {
    let n = g.order();
    let member = |x: usize, y: usize| a.contains(x * n + y);
    (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| member(x, y) && member(x, g.mul(h, y)) && member(g.mul(h, x), g.mul(h, y)))
        .count()
}
