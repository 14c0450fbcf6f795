//! Covering a group by right shifts `R f` of a set `R`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::bits::IndicatorSet;
use crate::error::{Error, Result};
use crate::group::GroupTable;

/// Groups up to this order are solved exactly in [`CoverMode::Auto`].
pub const EXACT_LIMIT: usize = 360;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverMode {
    Exact,
    Greedy,
    Auto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CoverMethod {
    Exact,
    Greedy,
}

impl CoverMethod {
    pub fn name(self) -> &'static str {
        match self {
            CoverMethod::Exact => "exact",
            CoverMethod::Greedy => "greedy",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverResult {
    pub exact: bool,
    pub k: usize,
    /// Shifts `f`, ascending, with `union of R f = G`.
    pub witness: Vec<usize>,
    /// `ceil(|G| / |R|)`.
    pub lower_bound: usize,
    pub method: CoverMethod,
}

/// A candidate shift and the set it covers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub shift: usize,
    pub words: Vec<u64>,
}

/// One candidate per distinct `R f`, keeping the smallest `f`, in `f` order.
pub fn shift_candidates(g: &GroupTable, r: &IndicatorSet) -> Vec<Candidate> {
    let n = g.order();
    let words = n.div_ceil(64);
    let members = r.to_vec();
    let mut seen = BTreeMap::new();
    let mut out = Vec::new();
    for f in 0..n {
        let mut w = vec![0u64; words];
        for &x in &members {
            let y = g.mul(x, f);
            w[y / 64] |= 1 << (y % 64);
        }
        if seen.insert(w.clone(), f).is_none() {
            out.push(Candidate { shift: f, words: w });
        }
    }
    out
}

fn new_coverage(cand: &[u64], covered: &[u64]) -> usize {
    cand.iter().zip(covered).map(|(c, v)| (c & !v).count_ones() as usize).sum()
}

fn union_covers(n: usize, cands: &[&[u64]]) -> bool {
    let words = n.div_ceil(64);
    let mut acc = vec![0u64; words];
    for c in cands {
        acc.iter_mut().zip(c.iter()).for_each(|(a, b)| *a |= b);
    }
    (0..n).all(|x| acc[x / 64] >> (x % 64) & 1 == 1)
}

/// Max-new-coverage greedy over `cands`; ties go to the earliest candidate.
/// Returns positions into `cands`, in selection order.
pub fn greedy_cover(n: usize, cands: &[Candidate]) -> Vec<usize> {
    let words = n.div_ceil(64);
    let mut covered = vec![0u64; words];
    let mut remaining = n;
    let mut picks = Vec::new();
    while remaining > 0 {
        let mut best = (0usize, usize::MAX);
        for (i, c) in cands.iter().enumerate() {
            let gain = new_coverage(&c.words, &covered);
            if gain > best.0 {
                best = (gain, i);
            }
        }
        if best.0 == 0 {
            break;
        }
        covered.iter_mut().zip(&cands[best.1].words).for_each(|(a, b)| *a |= b);
        remaining -= best.0;
        picks.push(best.1);
    }
    picks
}

struct Search<'a> {
    n: usize,
    cands: &'a [Candidate],
    containing: Vec<Vec<usize>>,
    best: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, covered: &[u64], uncovered: usize, chosen: &mut Vec<usize>) {
        if uncovered == 0 {
            if chosen.len() < self.best.len() {
                self.best = chosen.clone();
            }
            return;
        }
        let max_gain = self
            .cands
            .iter()
            .map(|c| new_coverage(&c.words, covered))
            .max()
            .unwrap_or(0);
        if max_gain == 0 || chosen.len() + uncovered.div_ceil(max_gain) >= self.best.len() {
            return;
        }
        let first = (0..self.n).find(|&x| covered[x / 64] >> (x % 64) & 1 == 0).unwrap();
        let mut branches: Vec<(usize, usize)> = self.containing[first]
            .iter()
            .map(|&i| (new_coverage(&self.cands[i].words, covered), i))
            .collect();
        branches.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut next = covered.to_vec();
        for (gain, i) in branches {
            next.iter_mut()
                .zip(covered.iter().zip(&self.cands[i].words))
                .for_each(|(n, (c, w))| *n = c | w);
            chosen.push(i);
            self.run(&next, uncovered - gain, chosen);
            chosen.pop();
            if chosen.len() + uncovered.div_ceil(max_gain) >= self.best.len() {
                return;
            }
        }
    }
}

/// Minimum cover by branch and bound, seeded with `incumbent`.
fn exact_cover(n: usize, cands: &[Candidate], incumbent: Vec<usize>, lower_bound: usize) -> Vec<usize> {
    if incumbent.len() <= lower_bound {
        return incumbent;
    }
    let mut containing = vec![Vec::new(); n];
    for (i, c) in cands.iter().enumerate() {
        for (x, list) in containing.iter_mut().enumerate() {
            if c.words[x / 64] >> (x % 64) & 1 == 1 {
                list.push(i);
            }
        }
    }
    let mut search = Search { n, cands, containing, best: incumbent };
    search.run(&vec![0u64; n.div_ceil(64)], n, &mut Vec::new());
    search.best
}

/// Smallest number of right shifts of `r` covering `g`.
///
/// Exact mode is a depth-first branch and bound and is intended for
/// `|G| <= EXACT_LIMIT`; it runs for larger groups too but may be slow.
pub fn covering_number(g: &GroupTable, r: &IndicatorSet, mode: CoverMode) -> Result<CoverResult> {
    if r.is_product() || r.group_order() != g.order() {
        return Err(Error::InvalidParameter("set must be a subset of the group".into()));
    }
    if r.is_empty() {
        return Err(Error::EmptySet);
    }
    let n = g.order();
    let lower_bound = n.div_ceil(r.len());
    let cands = shift_candidates(g, r);
    let greedy = greedy_cover(n, &cands);
    let exact = match mode {
        CoverMode::Exact => true,
        CoverMode::Greedy => false,
        CoverMode::Auto => n <= EXACT_LIMIT,
    };
    let picks = if exact { exact_cover(n, &cands, greedy, lower_bound) } else { greedy };
    let mut witness: Vec<usize> = picks.iter().map(|&i| cands[i].shift).collect();
    witness.sort_unstable();
    let sets: Vec<&[u64]> = picks.iter().map(|&i| cands[i].words.as_slice()).collect();
    assert!(union_covers(n, &sets), "cover witness does not cover the group");
    Ok(CoverResult {
        exact,
        k: witness.len(),
        witness,
        lower_bound,
        method: if exact { CoverMethod::Exact } else { CoverMethod::Greedy },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_cyclic, build_symmetric};

    #[test]
    fn whole_group_and_identity() {
        let g = build_symmetric(3).unwrap();
        let all = IndicatorSet::full(6);
        assert_eq!(covering_number(&g, &all, CoverMode::Exact).unwrap().k, 1);
        let e = IndicatorSet::from_members(6, [0]).unwrap();
        let res = covering_number(&g, &e, CoverMode::Exact).unwrap();
        assert_eq!(res.k, 6);
        assert_eq!(res.witness, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn empty_set_is_rejected() {
        let g = build_cyclic(4).unwrap();
        let err = covering_number(&g, &IndicatorSet::empty(4), CoverMode::Auto).unwrap_err();
        assert_eq!(err.to_string(), "empty set is not syndetic");
    }

    #[test]
    fn subgroup_index() {
        let g = build_cyclic(6).unwrap();
        let h = IndicatorSet::from_members(6, [0, 3]).unwrap();
        let res = covering_number(&g, &h, CoverMode::Exact).unwrap();
        assert_eq!(res.k, 3);
        assert_eq!(res.lower_bound, 3);
        // a subgroup has exactly [G:H] distinct shifts
        assert_eq!(shift_candidates(&g, &h).len(), 3);
    }

    #[test]
    fn exact_beats_or_ties_greedy() {
        // {0,1,3} in C_9: greedy and exact can differ in general; exact never worse.
        let g = build_cyclic(9).unwrap();
        let r = IndicatorSet::from_members(9, [0, 1, 3]).unwrap();
        let ex = covering_number(&g, &r, CoverMode::Exact).unwrap();
        let gr = covering_number(&g, &r, CoverMode::Greedy).unwrap();
        assert!(ex.lower_bound <= ex.k && ex.k <= gr.k);
        assert_eq!(ex.method, CoverMethod::Exact);
        assert_eq!(gr.method, CoverMethod::Greedy);
    }
}
