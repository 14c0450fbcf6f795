use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{Family, GroupTable};
use crate::error::{Error, Result};
use crate::field::PrimePowerField;

pub const MAX_CYCLIC: usize = 10_000;
pub const MAX_MATRIX_FIELD: usize = 16;

pub fn build_cyclic(n: usize) -> Result<GroupTable> {
    if n == 0 || n > MAX_CYCLIC {
        return Err(Error::InvalidParameter(format!("cyclic order {n} outside 1..={MAX_CYCLIC}")));
    }
    let mut mul = Vec::with_capacity(n * n);
    for a in 0..n {
        mul.extend((0..n).map(|b| ((a + b) % n) as u32));
    }
    let labels = (0..n).map(|a| format!("{a}")).collect();
    let mut g = GroupTable::from_table_unchecked(Family::Cyclic, n, mul, labels)?;
    g.set_classes((0..n as u32).map(|a| vec![a]).collect());
    Ok(g)
}

/// All permutations of `0..m` in lexicographic order; the identity is first.
pub fn symmetric_permutations(m: usize) -> Vec<Vec<u8>> {
    let mut cur: Vec<u8> = (0..m as u8).collect();
    let mut out = vec![cur.clone()];
    loop {
        // next permutation
        let Some(i) = (1..m).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..m).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// Position of `perm` in lexicographic order (Lehmer code).
fn perm_rank(perm: &[u8]) -> usize {
    let m = perm.len();
    let mut rank = 0;
    for i in 0..m {
        let smaller_later = perm[i + 1..].iter().filter(|&&v| v < perm[i]).count();
        rank = rank * (m - i) + smaller_later;
    }
    rank
}

/// S_m with composition `(s t)(i) = s(t(i))`.
pub fn build_symmetric(m: usize) -> Result<GroupTable> {
    if !(2..=7).contains(&m) {
        return Err(Error::InvalidParameter(format!("symmetric degree {m} outside 2..=7")));
    }
    let perms = symmetric_permutations(m);
    let n = perms.len();
    let mut mul = Vec::with_capacity(n * n);
    let mut buf = vec![0u8; m];
    for s in &perms {
        for t in &perms {
            for i in 0..m {
                buf[i] = s[t[i] as usize];
            }
            mul.push(perm_rank(&buf) as u32);
        }
    }
    let labels = perms
        .iter()
        .map(|p| {
            let parts: Vec<String> = p.iter().map(|v| format!("{v}")).collect();
            format!("[{}]", parts.join(","))
        })
        .collect();
    let mut g = GroupTable::from_table_unchecked(Family::Symmetric, n, mul, labels)?;
    g.finish_classes();
    Ok(g)
}

type Mat = [u32; 4];

fn mat_mul(f: &PrimePowerField, x: &Mat, y: &Mat) -> Mat {
    [
        f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
        f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
        f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
        f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
    ]
}

fn mat_key(q: usize, m: &Mat) -> usize {
    ((m[0] as usize * q + m[1] as usize) * q + m[2] as usize) * q + m[3] as usize
}

fn mat_label(f: &PrimePowerField, m: &Mat) -> String {
    format!(
        "[[{},{}],[{},{}]]",
        f.label(m[0]),
        f.label(m[1]),
        f.label(m[2]),
        f.label(m[3])
    )
}

/// Determinant-one matrices, identity first, the rest in entry order.
fn special_linear(f: &PrimePowerField) -> Result<Vec<Mat>> {
    let q = f.order();
    if q > MAX_MATRIX_FIELD {
        return Err(Error::InvalidParameter(format!(
            "matrix groups need q <= {MAX_MATRIX_FIELD}, got {q}"
        )));
    }
    let identity: Mat = [1, 0, 0, 1];
    let mut out = vec![identity];
    let q = q as u32;
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = [a, b, c, d];
                    if m != identity && f.sub(f.mul(a, d), f.mul(b, c)) == 1 {
                        out.push(m);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn matrix_group(f: &PrimePowerField, family: Family, elems: Vec<Mat>, index: Vec<u32>) -> Result<GroupTable> {
    let q = f.order();
    let n = elems.len();
    let mut mul = Vec::with_capacity(n * n);
    for x in &elems {
        for y in &elems {
            mul.push(index[mat_key(q, &mat_mul(f, x, y))]);
        }
    }
    let labels = elems.iter().map(|m| mat_label(f, m)).collect();
    let mut g = GroupTable::from_table_unchecked(family, n, mul, labels)?;
    g.finish_classes();
    Ok(g)
}

pub fn build_sl2(f: &PrimePowerField) -> Result<GroupTable> {
    let elems = special_linear(f)?;
    let q = f.order();
    let mut index = vec![u32::MAX; q * q * q * q];
    for (i, m) in elems.iter().enumerate() {
        index[mat_key(q, m)] = i as u32;
    }
    matrix_group(f, Family::Sl2, elems, index)
}

/// SL(2,q) modulo `{I, -I}`; each coset is represented by whichever of
/// `M`, `-M` has the lexicographically smaller entry tuple.
pub fn build_psl2(f: &PrimePowerField) -> Result<GroupTable> {
    let q = f.order();
    let neg = |m: &Mat| -> Mat { [f.neg(m[0]), f.neg(m[1]), f.neg(m[2]), f.neg(m[3])] };
    let mut index = vec![u32::MAX; q * q * q * q];
    let mut reps = Vec::new();
    for m in special_linear(f)? {
        let nm = neg(&m);
        let rep = if nm < m { nm } else { m };
        if index[mat_key(q, &rep)] != u32::MAX {
            continue;
        }
        let i = reps.len() as u32;
        index[mat_key(q, &m)] = i;
        index[mat_key(q, &nm)] = i;
        reps.push(rep);
    }
    matrix_group(f, Family::Psl2, reps, index)
}
