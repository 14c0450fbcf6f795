//! Prime-power fields GF(p^k).
//!
//! An element is stored as the index `c_0 + c_1 p + ... + c_{k-1} p^{k-1}` of
//! its coefficient vector in `GF(p)[x] / (m(x))`, so `0` is zero and `1` is
//! one. Multiplication goes through discrete exp/log tables built from a
//! primitive element; fields with `q <= DENSE_LIMIT` additionally carry full
//! `q x q` addition and multiplication tables.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};

/// Largest field order accepted.
pub const MAX_ORDER: u64 = 1 << 16;

/// Fields up to this order get dense `q x q` operation tables.
pub const DENSE_LIMIT: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerField {
    p: u32,
    k: u32,
    q: usize,
    /// Low-to-high coefficients of the monic modulus, length `k + 1`.
    modulus: Vec<u32>,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    inv_table: Vec<u32>,
    neg_table: Vec<u32>,
    /// `exp[i] = g^i` for a primitive `g`, `i < q - 1`.
    exp: Vec<u32>,
    /// Discrete log; `log[0]` is unused.
    log: Vec<u32>,
    generator: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Writes `q` as `p^k` when `q` is a prime power.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

// Polynomials over GF(p) as low-to-high coefficient vectors with no trailing zeros.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

/// Remainder of `a` modulo the monic polynomial `m`.
fn poly_rem_monic(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dm;
        if lead != 0 {
            for (i, &c) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

fn decode(mut idx: usize, p: u32, k: u32) -> Vec<u32> {
    let mut coeffs = Vec::with_capacity(k as usize);
    for _ in 0..k {
        coeffs.push((idx % p as usize) as u32);
        idx /= p as usize;
    }
    trim(coeffs)
}

fn encode(coeffs: &[u32], p: u32) -> usize {
    coeffs
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

/// Monic polynomial of degree `deg` whose lower coefficients encode `idx`.
fn monic(idx: usize, p: u32, deg: u32) -> Vec<u32> {
    let mut coeffs = decode(idx, p, deg);
    coeffs.resize(deg as usize, 0);
    coeffs.push(1);
    coeffs
}

fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = (m.len() - 1) as u32;
    for d in 1..=deg / 2 {
        let count = (p as usize).pow(d);
        for idx in 0..count {
            if poly_rem_monic(m, &monic(idx, p, d), p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl PrimePowerField {
    /// Builds GF(p^k) modulo the smallest monic irreducible of degree `k`,
    /// where polynomials are ordered by their element index encoding (which
    /// is lexicographic from the `x^{k-1}` coefficient down).
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(k)
            .filter(|&q| q <= MAX_ORDER)
            .ok_or(Error::FieldTooLarge { p, k })?;
        let p = p as u32;
        let q = q as usize;

        let modulus = if k == 1 {
            vec![0, 1]
        } else {
            (0..q)
                .map(|idx| monic(idx, p, k))
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial of every degree exists")
        };

        let slow_mul = |a: usize, b: usize| -> usize {
            let prod = poly_mul(&decode(a, p, k), &decode(b, p, k), p);
            encode(&poly_rem_monic(&prod, &modulus, p), p)
        };
        let slow_pow = |a: usize, mut e: u64| -> usize {
            let (mut base, mut acc) = (a, 1usize);
            while e > 0 {
                if e & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                e >>= 1;
            }
            acc
        };

        let group_order = (q - 1) as u64;
        let factors = prime_factors(group_order);
        let generator = (1..q)
            .find(|&g| factors.iter().all(|&r| slow_pow(g, group_order / r) != 1))
            .ok_or_else(|| Error::InvalidParameter("multiplicative group is not cyclic".into()))?;

        let mut exp = Vec::with_capacity(q - 1);
        let mut log = vec![u32::MAX; q];
        let mut x = 1usize;
        for i in 0..q - 1 {
            if log[x] != u32::MAX {
                return Err(Error::InvalidParameter("generator order below q - 1".into()));
            }
            exp.push(x as u32);
            log[x] = i as u32;
            x = slow_mul(x, generator);
        }
        log[0] = 0;

        let neg_table = (0..q)
            .map(|a| {
                let c: Vec<u32> = decode(a, p, k).iter().map(|&c| (p - c) % p).collect();
                encode(&c, p) as u32
            })
            .collect();

        let mut field = PrimePowerField {
            p,
            k,
            q,
            modulus,
            add_table: None,
            mul_table: None,
            inv_table: vec![0; q],
            neg_table,
            exp,
            log,
            generator: generator as u32,
        };
        for a in 1..q {
            let l = field.log[a] as usize;
            field.inv_table[a] = field.exp[(q - 1 - l) % (q - 1)];
        }
        if q <= DENSE_LIMIT {
            let mut add = Vec::with_capacity(q * q);
            let mut mul = Vec::with_capacity(q * q);
            for a in 0..q {
                for b in 0..q {
                    add.push(field.add_slow(a as u32, b as u32));
                    mul.push(field.mul_log(a as u32, b as u32));
                }
            }
            field.add_table = Some(add);
            field.mul_table = Some(mul);
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> usize {
        self.q
    }

    /// Low-to-high coefficients of the modulus polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A generator of the multiplicative group.
    pub fn generator(&self) -> u32 {
        self.generator
    }

    pub fn has_dense_tables(&self) -> bool {
        self.mul_table.is_some()
    }

    fn add_slow(&self, a: u32, b: u32) -> u32 {
        let (p, mut a, mut b) = (self.p, a, b);
        let (mut out, mut place) = (0u32, 1u32);
        for _ in 0..self.k {
            out += ((a % p + b % p) % p) * place;
            a /= p;
            b /= p;
            place = place.wrapping_mul(p);
        }
        out
    }

    fn mul_log(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        self.exp[(self.log[a as usize] as usize + self.log[b as usize] as usize) % n]
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        match &self.add_table {
            Some(t) => t[a as usize * self.q + b as usize],
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match &self.mul_table {
            Some(t) => t[a as usize * self.q + b as usize],
            None => self.mul_log(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg_table[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv_table[a as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % n)) % n;
        self.exp[l as usize]
    }

    /// Coefficients of `a`, low to high, padded to length `k`.
    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        let mut c = decode(a as usize, self.p, self.k);
        c.resize(self.k as usize, 0);
        c
    }

    /// `"3"` for prime fields, polynomial notation in `x` otherwise.
    pub fn label(&self, a: u32) -> String {
        if self.k == 1 {
            return a.to_string();
        }
        let coeffs = self.coefficients(a);
        let mut s = String::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('+');
            }
            match (i, c) {
                (0, c) => write!(s, "{c}").unwrap(),
                (1, 1) => s.push('x'),
                (1, c) => write!(s, "{c}x").unwrap(),
                (i, 1) => write!(s, "x^{i}").unwrap(),
                (i, c) => write!(s, "{c}x^{i}").unwrap(),
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        s
    }
}
