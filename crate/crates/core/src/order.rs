//! Finite posets and lattices stored as explicit tables.
//!
//! Elements are `0..n`. Every table is total and row-major, so a lookup is a
//! single index computation.

use std::fmt;

use thiserror::Error;

use crate::report::LawReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetAxiom {
    Reflexivity,
    Antisymmetry,
    Transitivity,
}

impl fmt::Display for PosetAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PosetAxiom::Reflexivity => "reflexivity",
            PosetAxiom::Antisymmetry => "antisymmetry",
            PosetAxiom::Transitivity => "transitivity",
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PosetError {
    #[error("a poset needs at least one element")]
    Empty,
    #[error("relation is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("index {index} out of range for {n} elements")]
    OutOfRange { index: usize, n: usize },
    #[error("{axiom} fails at {witness:?}")]
    Violation {
        axiom: PosetAxiom,
        witness: Vec<usize>,
    },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("no least or greatest element")]
    NotBounded,
    #[error("pair ({0}, {1}) has no greatest lower bound")]
    NoMeet(usize, usize),
    #[error("pair ({0}, {1}) has no least upper bound")]
    NoJoin(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    n: usize,
    leq: Vec<bool>,
    labels: Vec<String>,
}

/// Checks the three poset axioms on a full relation. Nothing is normalised.
pub fn validate_poset(relation: &[Vec<bool>]) -> Result<FinitePoset, PosetError> {
    let n = relation.len();
    if n == 0 {
        return Err(PosetError::Empty);
    }
    for (row, r) in relation.iter().enumerate() {
        if r.len() != n {
            return Err(PosetError::NotSquare { row, len: r.len(), n });
        }
    }
    let leq: Vec<bool> = relation.iter().flatten().copied().collect();
    FinitePoset::from_flat(n, leq)
}

impl FinitePoset {
    pub fn from_flat(n: usize, leq: Vec<bool>) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        assert_eq!(leq.len(), n * n);
        let at = |i: usize, j: usize| leq[i * n + j];
        for i in 0..n {
            if !at(i, i) {
                return Err(PosetError::Violation {
                    axiom: PosetAxiom::Reflexivity,
                    witness: vec![i],
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && at(i, j) && at(j, i) {
                    return Err(PosetError::Violation {
                        axiom: PosetAxiom::Antisymmetry,
                        witness: vec![i, j],
                    });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !at(i, j) {
                    continue;
                }
                for k in 0..n {
                    if at(j, k) && !at(i, k) {
                        return Err(PosetError::Violation {
                            axiom: PosetAxiom::Transitivity,
                            witness: vec![i, j, k],
                        });
                    }
                }
            }
        }
        Ok(FinitePoset {
            n,
            leq,
            labels: (0..n).map(|i| i.to_string()).collect(),
        })
    }

    /// Reflexive-transitive closure of a list of `(lower, upper)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        if n == 0 {
            return Err(PosetError::Empty);
        }
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(a, b) in pairs {
            for idx in [a, b] {
                if idx >= n {
                    return Err(PosetError::OutOfRange { index: idx, n });
                }
            }
            leq[a * n + b] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        Self::from_flat(n, leq)
    }

    pub fn chain(n: usize) -> Self {
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_pairs(n, &pairs).expect("chain is a poset")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_pairs(n, &[]).expect("antichain is a poset")
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.n + j]
    }

    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn relation(&self) -> Vec<Vec<bool>> {
        self.leq.chunks(self.n).map(<[bool]>::to_vec).collect()
    }

    /// Greatest element among `candidates` that is above every candidate.
    pub fn maximum(&self, candidates: impl IntoIterator<Item = usize> + Clone) -> Option<usize> {
        candidates
            .clone()
            .into_iter()
            .find(|&m| candidates.clone().into_iter().all(|c| self.leq(c, m)))
    }

    pub fn minimum(&self, candidates: impl IntoIterator<Item = usize> + Clone) -> Option<usize> {
        candidates
            .clone()
            .into_iter()
            .find(|&m| candidates.clone().into_iter().all(|c| self.leq(m, c)))
    }

    /// Longest chain length from a minimal element up to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| (0..self.n).filter(|&j| self.leq(j, i)).count());
        let mut h = vec![0; self.n];
        for &i in &order {
            h[i] = (0..self.n)
                .filter(|&j| self.lt(j, i))
                .map(|j| h[j] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    /// Elements in an order compatible with `<` (a linear extension).
    pub fn linear_extension(&self) -> Vec<usize> {
        let h = self.heights();
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&i| (h[i], i));
        order
    }
}

/// `(i, j)` is listed iff `i < j` with nothing strictly between. Sorted.
pub fn hasse_covers(p: &FinitePoset) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut covers = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if p.lt(i, j) && !(0..n).any(|k| p.lt(i, k) && p.lt(k, j)) {
                covers.push((i, j));
            }
        }
    }
    covers
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

pub fn compute_lattice(p: FinitePoset) -> Result<FiniteLattice, LatticeError> {
    let n = p.len();
    let bottom = p.minimum(0..n).ok_or(LatticeError::NotBounded)?;
    let top = p.maximum(0..n).ok_or(LatticeError::NotBounded)?;
    let mut meet = vec![0; n * n];
    let mut join = vec![0; n * n];
    for i in 0..n {
        for j in 0..n {
            let lower = (0..n).filter(|&k| p.leq(k, i) && p.leq(k, j));
            meet[i * n + j] = p.maximum(lower).ok_or(LatticeError::NoMeet(i, j))?;
            let upper = (0..n).filter(|&k| p.leq(i, k) && p.leq(j, k));
            join[i * n + j] = p.minimum(upper).ok_or(LatticeError::NoJoin(i, j))?;
        }
    }
    Ok(FiniteLattice {
        poset: p,
        meet,
        join,
        bottom,
        top,
    })
}

impl FiniteLattice {
    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.poset.leq(i, j)
    }

    #[inline]
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.len() + j]
    }

    #[inline]
    pub fn join(&self, i: usize, j: usize) -> usize {
        self.join[i * self.len() + j]
    }

    pub fn join_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    pub fn meet_all(&self, items: impl IntoIterator<Item = usize>) -> usize {
        items.into_iter().fold(self.top, |a, b| self.meet(a, b))
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn label(&self, i: usize) -> &str {
        self.poset.label(i)
    }

    pub fn relabel(mut self, labels: Vec<String>) -> Self {
        self.poset = self.poset.with_labels(labels);
        self
    }

    /// Elements below `a`, in increasing index order.
    pub fn downset(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.leq(u, a)).collect()
    }

    pub fn upset(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&u| self.leq(a, u)).collect()
    }
}

/// A total map on element indices. Bijectivity and order behaviour are
/// checked properties, not container invariants.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnaryOrderMap(Vec<usize>);

impl UnaryOrderMap {
    pub fn new(map: Vec<usize>) -> Result<Self, PosetError> {
        let n = map.len();
        if let Some(&index) = map.iter().find(|&&k| k >= n) {
            return Err(PosetError::OutOfRange { index, n });
        }
        Ok(UnaryOrderMap(map))
    }

    pub fn identity(n: usize) -> Self {
        UnaryOrderMap((0..n).collect())
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// x ≤ y iff f(y) ≤ f(x), and f∘f = id.
pub fn check_inversion(p: &FinitePoset, f: &UnaryOrderMap) -> LawReport {
    const LAW: &str = "order.inversion";
    let n = p.len();
    if f.len() != n {
        return LawReport::skipped(LAW, format!("map has {} entries, poset {n}", f.len()));
    }
    if let Some(x) = (0..n).find(|&x| f.apply(f.apply(x)) != x) {
        return LawReport::fail_at(LAW, vec![x]).with_note("not involutive");
    }
    for x in 0..n {
        for y in 0..n {
            if p.leq(x, y) != p.leq(f.apply(y), f.apply(x)) {
                return LawReport::fail_at(LAW, vec![x, y]).with_note("not order-reversing");
            }
        }
    }
    LawReport::pass(LAW)
}

/// x ∧ (y ∨ z) = (x ∧ y) ∨ (x ∧ z) on every triple.
pub fn is_distributive(l: &FiniteLattice) -> LawReport {
    let n = l.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if l.meet(x, l.join(y, z)) != l.join(l.meet(x, y), l.meet(x, z)) {
                    return LawReport::fail_at("order.distributive", vec![x, y, z]);
                }
            }
        }
    }
    LawReport::pass("order.distributive")
}

/// Every element has a complement. On PASS the table holds, for each `x`,
/// its complement of smallest index.
pub fn is_complemented(l: &FiniteLattice) -> (LawReport, Option<Vec<usize>>) {
    let n = l.len();
    let mut table = Vec::with_capacity(n);
    for x in 0..n {
        match (0..n).find(|&c| l.join(x, c) == l.top() && l.meet(x, c) == l.bottom()) {
            Some(c) => table.push(c),
            None => return (LawReport::fail_at("order.complemented", vec![x]), None),
        }
    }
    (LawReport::pass("order.complemented"), Some(table))
}

pub fn is_boolean(l: &FiniteLattice) -> LawReport {
    let (comp, _) = is_complemented(l);
    if comp.failed() {
        return LawReport::fail("order.boolean", comp.witness).with_note("not complemented");
    }
    let dist = is_distributive(l);
    if dist.failed() {
        return LawReport::fail("order.boolean", dist.witness).with_note("not distributive");
    }
    LawReport::pass("order.boolean")
}

/// All inversions (involutive order-reversing bijections) of `p`, in
/// lexicographic order of their tables.
pub fn inversions(p: &FinitePoset) -> Vec<UnaryOrderMap> {
    let n = p.len();
    let below: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| p.leq(j, i)).count()).collect();
    let above: Vec<usize> = (0..n).map(|i| (0..n).filter(|&j| p.leq(i, j)).count()).collect();
    let mut map = vec![usize::MAX; n];
    let mut out = Vec::new();
    inversion_step(p, &below, &above, &mut map, 0, &mut out);
    out
}

fn inversion_step(
    p: &FinitePoset,
    below: &[usize],
    above: &[usize],
    map: &mut Vec<usize>,
    x: usize,
    out: &mut Vec<UnaryOrderMap>,
) {
    let n = p.len();
    if x == n {
        out.push(UnaryOrderMap(map.clone()));
        return;
    }
    if map[x] != usize::MAX {
        inversion_step(p, below, above, map, x + 1, out);
        return;
    }
    for y in x..n {
        // y must still be free (or be x itself); a dual automorphism swaps
        // the sizes of down- and up-sets.
        if (y != x && map[y] != usize::MAX) || below[x] != above[y] || above[x] != below[y] {
            continue;
        }
        map[x] = y;
        map[y] = x;
        let consistent = (0..n).filter(|&z| map[z] != usize::MAX).all(|z| {
            p.leq(x, z) == p.leq(map[z], y) && p.leq(z, x) == p.leq(y, map[z])
        });
        if consistent {
            inversion_step(p, below, above, map, x + 1, out);
        }
        map[x] = usize::MAX;
        map[y] = usize::MAX;
    }
}
