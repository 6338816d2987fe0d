//! The partial semigroup `FIN_k`, tetris operations, block sequences and the
//! partial subsemigroups generated by a block sequence.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A function `{1..n} → {0..}` stored densely. Coordinates are 1-based in
/// the API.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinVec {
    n: usize,
    values: Vec<u8>,
}

impl FinVec {
    pub fn new(values: Vec<u8>) -> FinVec {
        FinVec { n: values.len(), values }
    }

    pub fn zero(n: usize) -> FinVec {
        FinVec::new(vec![0; n])
    }

    /// `value · 1_set`.
    pub fn indicator(n: usize, set: &[usize], value: u8) -> Result<FinVec> {
        let mut p = FinVec::zero(n);
        for &l in set {
            if l == 0 || l > n {
                return Err(Error::InvalidInput(format!("coordinate {l} outside 1..={n}")));
            }
            p.values[l - 1] = value;
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    pub fn get(&self, l: usize) -> u8 {
        self.values[l - 1]
    }

    pub fn supp(&self) -> Vec<usize> {
        (1..=self.n).filter(|&l| self.get(l) != 0).collect()
    }

    /// `supp_j(p) = {l : p(l) = j}`.
    pub fn supp_j(&self, j: u8) -> Vec<usize> {
        (1..=self.n).filter(|&l| self.get(l) == j).collect()
    }

    pub fn min_supp(&self) -> Option<usize> {
        self.values.iter().position(|&v| v != 0).map(|i| i + 1)
    }

    pub fn min_supp_j(&self, j: u8) -> Option<usize> {
        self.values.iter().position(|&v| v == j).map(|i| i + 1)
    }

    pub fn max_value(&self) -> u8 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    /// Membership in `FIN_k(n)`: values at most `k`, and `k` attained.
    pub fn in_fin(&self, k: u8) -> bool {
        k >= 1 && self.max_value() == k
    }

    pub fn disjoint(&self, other: &FinVec) -> bool {
        self.values.iter().zip(&other.values).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// `p + q`, defined for disjoint supports.
    pub fn add(&self, other: &FinVec) -> Result<FinVec> {
        if self.n != other.n {
            return Err(Error::InvalidInput(format!("lengths {} and {} differ", self.n, other.n)));
        }
        if let Some(i) = (0..self.n).find(|&i| self.values[i] != 0 && other.values[i] != 0) {
            return Err(Error::OverlappingSupport(i + 1));
        }
        Ok(FinVec::new(
            self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect(),
        ))
    }
}

/// `T_i`: values below `i` kept, the others lowered by one. `T_0` is the
/// identity and `T_1` Gowers' tetris.
pub fn tetris(i: u8, p: &FinVec) -> FinVec {
    if i == 0 {
        return p.clone();
    }
    FinVec::new(p.values.iter().map(|&v| if v >= i { v - 1 } else { v }).collect())
}

/// `T_ī = T_{i(1)} ∘ … ∘ T_{i(k)}`: the last entry is applied first.
pub fn tetris_composite(index: &[u8], p: &FinVec) -> FinVec {
    index.iter().rev().fold(p.clone(), |acc, &i| tetris(i, &acc))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TetrisKind {
    /// `P_k = ∏_{j=1}^k {0..j}`.
    P { k: usize },
    /// `P_{k+1}^l = ∏_{j=k+1}^l {1..j}`; the single all-zero sequence when
    /// `l = k`.
    Upper { k: usize, l: usize },
}

/// All index vectors of the given kind, lexicographically.
pub fn tetris_indices(kind: TetrisKind) -> Vec<Vec<u8>> {
    let ranges: Vec<(u8, u8)> = match kind {
        TetrisKind::P { k } => (1..=k).map(|j| (0, j as u8)).collect(),
        TetrisKind::Upper { k, l } if l <= k => return vec![vec![0; 0]],
        TetrisKind::Upper { k, l } => (k + 1..=l).map(|j| (1, j as u8)).collect(),
    };
    let mut out = vec![Vec::new()];
    for (lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (lo..=hi).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// A tuple `(p_1, …, p_d)` of vectors meant to lie in `FIN_k^{(d)}(n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockSeq {
    pub k: u8,
    pub d: usize,
    pub entries: Vec<FinVec>,
}

impl BlockSeq {
    pub fn new(k: u8, entries: Vec<FinVec>) -> BlockSeq {
        BlockSeq {
            k,
            d: entries.len(),
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.entries.first().map_or(0, FinVec::n)
    }

    /// `FIN_k^{(d)}(n)`: each entry in `FIN_k(n)`, pairwise disjoint
    /// supports, minima of supports increasing.
    pub fn is_block(&self) -> bool {
        let n = self.n();
        self.entries.len() == self.d
            && self.entries.iter().all(|p| p.n() == n && p.in_fin(self.k))
            && self.entries.iter().enumerate().all(|(i, p)| {
                self.entries[i + 1..].iter().all(|q| p.disjoint(q) && p.min_supp() < q.min_supp())
            })
    }

    /// Adds `min supp_k(p_i) < min supp(p_{i+1})`.
    pub fn is_block_star(&self) -> bool {
        self.is_block()
            && self
                .entries
                .windows(2)
                .all(|w| w[0].min_supp_j(self.k) < w[1].min_supp())
    }
}

/// Every member of `FIN_k^{*(d)}(n)`, in a deterministic order.
pub fn all_block_star(k: u8, d: usize, n: usize) -> Vec<BlockSeq> {
    // assign each coordinate to (entry, value) or leave it zero
    let mut out = Vec::new();
    let mut assign: Vec<(usize, u8)> = vec![(0, 0); n];
    fn rec(l: usize, n: usize, k: u8, d: usize, assign: &mut [(usize, u8)], out: &mut Vec<BlockSeq>) {
        if l == n {
            let mut entries = vec![FinVec::zero(n); d];
            for (i, &(e, v)) in assign.iter().enumerate() {
                if v > 0 {
                    entries[e].values[i] = v;
                }
            }
            let seq = BlockSeq::new(k, entries);
            if seq.is_block_star() {
                out.push(seq);
            }
            return;
        }
        assign[l] = (0, 0);
        rec(l + 1, n, k, d, assign, out);
        for e in 0..d {
            for v in 1..=k {
                assign[l] = (e, v);
                rec(l + 1, n, k, d, assign, out);
            }
        }
    }
    rec(0, n, k, d, &mut assign, &mut out);
    out
}

/// The possible summands `T_t̄ ∘ T_ī (b)` of a single block, split by
/// whether `t̄` is all zeros.
fn summands(b: &FinVec, k: usize, l: usize) -> (BTreeSet<FinVec>, BTreeSet<FinVec>) {
    let upper = tetris_indices(TetrisKind::Upper { k, l });
    let lower = tetris_indices(TetrisKind::P { k });
    let mut all = BTreeSet::new();
    let mut untouched = BTreeSet::new();
    for i in &upper {
        let lowered = tetris_composite(i, b);
        untouched.insert(lowered.clone());
        for t in &lower {
            all.insert(tetris_composite(t, &lowered));
        }
    }
    (all, untouched)
}

/// The partial subsemigroup `⟨⋃_ī T_ī(B)⟩_{P_k}` as a sorted list.
///
/// Each block contributes one summand; a summand that tetris has reduced to
/// zero acts as the identity. At least one block enters with an all-zero
/// `t̄`, and only sums in `FIN_k` are kept.
pub fn semigroup_elements(b: &BlockSeq, k: u8, cap: usize) -> Result<Vec<FinVec>> {
    if k == 0 || k > b.k {
        return Err(Error::Precondition(format!("need 1 ≤ k ≤ l, got k={k}, l={}", b.k)));
    }
    if !b.is_block_star() {
        return Err(Error::Precondition("generator is not a star block sequence".into()));
    }
    let (k, l) = (k as usize, b.k as usize);
    let parts: Vec<_> = b.entries.iter().map(|p| summands(p, k, l)).collect();
    // states: (partial sum, whether some untouched summand was used)
    let mut states: BTreeSet<(FinVec, bool)> = BTreeSet::from([(FinVec::zero(b.n()), false)]);
    for (all, untouched) in &parts {
        let mut next = BTreeSet::new();
        for (sum, used) in &states {
            for s in all {
                next.insert((sum.add(s)?, *used));
            }
            for s in untouched {
                next.insert((sum.add(s)?, true));
            }
        }
        if next.len() > cap {
            return Err(Error::CapExceeded {
                what: "semigroup enumeration".into(),
                size: next.len(),
                cap,
            });
        }
        states = next;
    }
    let elements: BTreeSet<FinVec> = states
        .into_iter()
        .filter(|(sum, used)| *used && sum.in_fin(k as u8))
        .map(|(sum, _)| sum)
        .collect();
    Ok(elements.into_iter().collect())
}

/// `⟨⋃_ī T_ī(B)⟩^{*(d)}_{P_k}`: star `d`-tuples of semigroup elements.
pub fn generated_semigroup(b: &BlockSeq, k: u8, d: usize, cap: usize) -> Result<Vec<BlockSeq>> {
    let elements = semigroup_elements(b, k, cap)?;
    let mut out = Vec::new();
    let mut chosen: Vec<FinVec> = Vec::with_capacity(d);
    fn rec(
        elements: &[FinVec],
        k: u8,
        d: usize,
        cap: usize,
        chosen: &mut Vec<FinVec>,
        out: &mut Vec<BlockSeq>,
    ) -> Result<()> {
        if chosen.len() == d {
            if out.len() >= cap {
                return Err(Error::CapExceeded {
                    what: "star tuples of the semigroup".into(),
                    size: out.len() + 1,
                    cap,
                });
            }
            out.push(BlockSeq::new(k, chosen.clone()));
            return Ok(());
        }
        for e in elements {
            if let Some(last) = chosen.last() {
                if !(last.min_supp_j(k) < e.min_supp() && chosen.iter().all(|c| c.disjoint(e))) {
                    continue;
                }
            }
            chosen.push(e.clone());
            rec(elements, k, d, cap, chosen, out)?;
            chosen.pop();
        }
        Ok(())
    }
    rec(&elements, k, d, cap, &mut chosen, &mut out)?;
    out.sort();
    debug_assert!(out.iter().all(BlockSeq::is_block_star));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(values: &[u8]) -> FinVec {
        FinVec::new(values.to_vec())
    }

    #[test]
    fn primitives() {
        let p = v(&[0, 2, 0, 1]);
        assert_eq!(p.supp(), vec![2, 4]);
        assert_eq!(p.supp_j(2), vec![2]);
        assert_eq!(v(&[1, 0]).add(&v(&[0, 1])).unwrap(), v(&[1, 1]));
        assert_eq!(v(&[1, 0]).add(&v(&[2, 0])), Err(Error::OverlappingSupport(1)));
    }

    #[test]
    fn tetris_examples() {
        assert_eq!(tetris(1, &v(&[0, 2, 1])), v(&[0, 1, 0]));
        assert_eq!(tetris(2, &v(&[1, 2])), v(&[1, 1]));
        assert_eq!(tetris(0, &v(&[3, 1])), v(&[3, 1]));
        // (1, 2): apply T_2 first, then T_1
        assert_eq!(tetris_composite(&[1, 2], &v(&[2, 1])), v(&[0, 0]));
        assert_eq!(tetris_composite(&[0, 2], &v(&[2, 1])), v(&[1, 1]));
    }

    #[test]
    fn index_sets() {
        assert_eq!(tetris_indices(TetrisKind::P { k: 2 }).len(), 6);
        assert_eq!(tetris_indices(TetrisKind::Upper { k: 1, l: 3 }).len(), 6);
        assert_eq!(tetris_indices(TetrisKind::Upper { k: 2, l: 2 }), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn star_examples() {
        let single = BlockSeq::new(2, vec![v(&[1, 2, 0])]);
        assert!(single.is_block_star());
        let pair = BlockSeq::new(1, vec![v(&[1, 0]), v(&[0, 1])]);
        assert!(pair.is_block_star());
        let mut p1 = vec![0; 6];
        p1[0] = 1;
        p1[4] = 2;
        let mut p2 = vec![0; 6];
        p2[2] = 2;
        let bad = BlockSeq::new(2, vec![v(&p1), v(&p2)]);
        assert!(bad.is_block());
        assert!(!bad.is_block_star());
    }

    #[test]
    fn finite_unions_semigroup() {
        let b = BlockSeq::new(1, vec![v(&[1, 0]), v(&[0, 1])]);
        let got: Vec<Vec<u8>> = generated_semigroup(&b, 1, 1, 1000)
            .unwrap()
            .into_iter()
            .map(|s| s.entries[0].values().to_vec())
            .collect();
        assert_eq!(got, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn single_generator_is_fixed() {
        let b = BlockSeq::new(2, vec![v(&[1, 2, 0])]);
        let got = generated_semigroup(&b, 2, 1, 1000).unwrap();
        assert_eq!(got, vec![b]);
    }

    #[test]
    fn block_star_counts() {
        // FIN_1(2): nonempty subsets of {1,2}
        assert_eq!(all_block_star(1, 1, 2).len(), 3);
        // FIN_1^{*(2)}(3): pairs of disjoint nonempty sets with min A < min B
        let pairs = all_block_star(1, 2, 3);
        assert!(pairs.iter().all(BlockSeq::is_block_star));
        assert_eq!(pairs.len(), 6);
    }
}
