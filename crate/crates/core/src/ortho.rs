//! Ortholattices, orthomodularity, principal downsets, compatibility and blocks.

use thiserror::Error;

use crate::order::{check_inversion, compute_lattice, is_boolean, FiniteLattice, FinitePoset, UnaryOrderMap};
use crate::report::{LawReport, Witness};

#[derive(Debug, Error, PartialEq)]
pub enum OrthoError {
    #[error("not an ortholattice: {0} fails at {1}")]
    NotOrtholattice(String, Witness),
    #[error("not orthomodular: {0} fails at {1}")]
    NotOrthomodular(String, Witness),
}

/// A bounded lattice with a verified orthocomplementation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoLattice {
    lattice: FiniteLattice,
    ortho: UnaryOrderMap,
}

impl OrthoLattice {
    pub fn new(lattice: FiniteLattice, ortho: UnaryOrderMap) -> Result<Self, OrthoError> {
        let r = check_ortholattice(&lattice, &ortho);
        if !r.passed() {
            return Err(OrthoError::NotOrtholattice(r.note, r.witness));
        }
        Ok(OrthoLattice { lattice, ortho })
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn ortho_map(&self) -> &UnaryOrderMap {
        &self.ortho
    }

    #[inline]
    pub fn ortho(&self, x: usize) -> usize {
        self.ortho.apply(x)
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// x ⊥ y iff x ≤ y^⊥.
    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        self.lattice.leq(x, self.ortho(y))
    }
}

/// Inversion, `x ∧ x^⊥ = 0`, `x ∨ y = (x^⊥ ∧ y^⊥)^⊥` and `x ∨ x^⊥ = 1`.
pub fn check_ortholattice(l: &FiniteLattice, f: &UnaryOrderMap) -> LawReport {
    const LAW: &str = "ortho.ortholattice";
    let n = l.len();
    let inv = check_inversion(l.poset(), f);
    if !inv.passed() {
        return LawReport {
            law: LAW.into(),
            ..inv
        }
        .with_note("inversion");
    }
    if let Some(x) = (0..n).find(|&x| l.meet(x, f.apply(x)) != l.bottom()) {
        return LawReport::fail_at(LAW, vec![x]).with_note("x meet x-perp is not bottom");
    }
    for x in 0..n {
        for y in 0..n {
            if l.join(x, y) != f.apply(l.meet(f.apply(x), f.apply(y))) {
                return LawReport::fail_at(LAW, vec![x, y]).with_note("join is not De Morgan dual of meet");
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| l.join(x, f.apply(x)) != l.top()) {
        return LawReport::fail_at(LAW, vec![x]).with_note("x join x-perp is not top");
    }
    LawReport::pass(LAW)
}

pub const OM_JOIN_FORM: &str = "ortho.orthomodular.join-form";
pub const OM_MEET_FORM: &str = "ortho.orthomodular.meet-form";
pub const OM_ZERO_FORM: &str = "ortho.orthomodular.zero-form";

/// The three orthomodularity conditions, each scanned over all pairs `x ≤ y`:
///
/// 1. `y = x ∨ (x^⊥ ∧ y)`
/// 2. `x = y ∧ (y^⊥ ∨ x)`
/// 3. `x^⊥ ∧ y = 0` implies `x = y`
pub fn check_orthomodular(o: &OrthoLattice) -> [LawReport; 3] {
    let l = o.lattice();
    let n = l.len();
    let pairs = || (0..n).flat_map(move |x| (0..n).map(move |y| (x, y))).filter(|&(x, y)| l.leq(x, y));
    let first = |bad: &dyn Fn(usize, usize) -> bool| pairs().find(|&(x, y)| bad(x, y)).map(|(x, y)| vec![x, y]);
    [
        LawReport::from_scan(
            OM_JOIN_FORM,
            first(&|x, y| y != l.join(x, l.meet(o.ortho(x), y))),
        ),
        LawReport::from_scan(
            OM_MEET_FORM,
            first(&|x, y| x != l.meet(y, l.join(o.ortho(y), x))),
        ),
        LawReport::from_scan(
            OM_ZERO_FORM,
            first(&|x, y| l.meet(o.ortho(x), y) == l.bottom() && x != y),
        ),
    ]
}

pub fn is_orthomodular(o: &OrthoLattice) -> bool {
    check_orthomodular(o).iter().all(LawReport::passed)
}

fn require_orthomodular(o: &OrthoLattice) -> Result<(), OrthoError> {
    match check_orthomodular(o).into_iter().find(|r| !r.passed()) {
        Some(r) => Err(OrthoError::NotOrthomodular(r.law, r.witness)),
        None => Ok(()),
    }
}

/// The principal downset `↓a` as an orthomodular lattice of its own.
#[derive(Clone, Debug)]
pub struct Downset {
    pub oml: OrthoLattice,
    /// `embedding[i]` is the ambient index of local element `i`.
    pub embedding: Vec<usize>,
}

/// `↓a` with the ambient order, meets and joins and the relative
/// orthocomplement `u ↦ a ∧ u^⊥`.
pub fn downset_oml(o: &OrthoLattice, a: usize) -> Result<Downset, OrthoError> {
    require_orthomodular(o)?;
    let l = o.lattice();
    let embedding = l.downset(a);
    let k = embedding.len();
    let mut local = vec![usize::MAX; l.len()];
    for (i, &u) in embedding.iter().enumerate() {
        local[u] = i;
    }
    let mut leq = Vec::with_capacity(k * k);
    for &u in &embedding {
        for &v in &embedding {
            leq.push(l.leq(u, v));
        }
    }
    let labels = embedding.iter().map(|&u| l.label(u).to_string()).collect();
    let poset = FinitePoset::from_flat(k, leq)
        .expect("restriction of a partial order")
        .with_labels(labels);
    let sub = compute_lattice(poset).expect("principal downset of a lattice is a lattice");
    let perp: Vec<usize> = embedding.iter().map(|&u| local[l.meet(a, o.ortho(u))]).collect();
    let perp = UnaryOrderMap::new(perp).expect("in range");
    let oml = OrthoLattice::new(sub, perp)?;
    Ok(Downset { oml, embedding })
}

/// `x = (x ∧ y) ∨ (x ∧ y^⊥)`.
pub fn compatible(o: &OrthoLattice, x: usize, y: usize) -> bool {
    let l = o.lattice();
    x == l.join(l.meet(x, y), l.meet(x, o.ortho(y)))
}

/// Compatibility is symmetric on this structure (checked, not assumed).
pub fn check_compatibility_symmetric(o: &OrthoLattice) -> LawReport {
    let n = o.len();
    for x in 0..n {
        for y in 0..n {
            if compatible(o, x, y) != compatible(o, y, x) {
                return LawReport::fail_at("ortho.compatibility-symmetric", vec![x, y]);
            }
        }
    }
    LawReport::pass("ortho.compatibility-symmetric")
}

/// Closes a subset under `∧`, `∨` and `^⊥`, returning it sorted.
pub fn closure(o: &OrthoLattice, seed: &[usize]) -> Vec<usize> {
    let l = o.lattice();
    let mut inside = vec![false; o.len()];
    let mut items: Vec<usize> = Vec::new();
    let push = |x: usize, inside: &mut Vec<bool>, items: &mut Vec<usize>| {
        if !inside[x] {
            inside[x] = true;
            items.push(x);
        }
    };
    for &x in seed.iter().chain([l.bottom(), l.top()].iter()) {
        push(x, &mut inside, &mut items);
    }
    let mut done = 0;
    while done < items.len() {
        let x = items[done];
        done += 1;
        push(o.ortho(x), &mut inside, &mut items);
        for i in 0..done {
            let y = items[i];
            push(l.meet(x, y), &mut inside, &mut items);
            push(l.join(x, y), &mut inside, &mut items);
        }
    }
    items.sort_unstable();
    items
}

/// The induced sublattice on a subset closed under `∧` and `∨`.
pub fn sublattice(l: &FiniteLattice, carrier: &[usize]) -> FiniteLattice {
    let k = carrier.len();
    let mut leq = Vec::with_capacity(k * k);
    for &u in carrier {
        for &v in carrier {
            leq.push(l.leq(u, v));
        }
    }
    let labels = carrier.iter().map(|&u| l.label(u).to_string()).collect();
    let p = FinitePoset::from_flat(k, leq).expect("restriction").with_labels(labels);
    compute_lattice(p).expect("closed subset of a lattice")
}

/// Maximal Boolean sublattices, each as a sorted index list; the list is
/// sorted lexicographically.
///
/// In an orthomodular lattice a set of pairwise compatible elements generates
/// a Boolean subalgebra, so blocks come from closing the maximal cliques of
/// the compatibility graph.
pub fn blocks(o: &OrthoLattice) -> Result<Vec<Vec<usize>>, OrthoError> {
    require_orthomodular(o)?;
    let n = o.len();
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|x| (0..n).map(|y| x != y && compatible(o, x, y)).collect())
        .collect();
    let mut cliques = Vec::new();
    bron_kerbosch(&adj, Vec::new(), (0..n).collect(), Vec::new(), &mut cliques);

    let mut found: Vec<Vec<usize>> = Vec::new();
    for clique in cliques {
        let carrier = closure(o, &clique);
        if !found.contains(&carrier) {
            found.push(carrier);
        }
    }
    found.retain(|b| is_boolean(&sublattice(o.lattice(), b)).passed());
    let maximal: Vec<Vec<usize>> = found
        .iter()
        .filter(|b| !found.iter().any(|c| c.len() > b.len() && b.iter().all(|x| c.contains(x))))
        .cloned()
        .collect();
    let mut maximal = maximal;
    maximal.sort();
    Ok(maximal)
}

fn bron_kerbosch(
    adj: &[Vec<bool>],
    r: Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() && x.is_empty() {
        out.push(r);
        return;
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count())
        .expect("p or x non-empty");
    let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
    for v in candidates {
        let mut r2 = r.clone();
        r2.push(v);
        let p2 = p.iter().copied().filter(|&w| adj[v][w]).collect();
        let x2 = x.iter().copied().filter(|&w| adj[v][w]).collect();
        bron_kerbosch(adj, r2, p2, x2, out);
        p.retain(|&w| w != v);
        x.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn boolean_cube_is_ortholattice() {
        let b = zoo::boolean(3);
        let comp = UnaryOrderMap::new((0..8).map(|x| 7 ^ x).collect()).unwrap();
        assert!(check_ortholattice(&b, &comp).passed());
    }

    #[test]
    fn benzene_is_ortholattice_but_not_orthomodular() {
        let o6 = zoo::o6();
        let reports = check_orthomodular(&o6);
        for r in &reports {
            assert!(r.failed(), "{}", r.law);
        }
        // a ≤ b with a ∨ (a^⊥ ∧ b) = a
        assert_eq!(reports[0].witness.elements(), Some(&[1, 2][..]));
        let l = o6.lattice();
        assert_eq!(l.meet(o6.ortho(1), 2), l.bottom());
    }

    #[test]
    fn m3_has_no_orthocomplement() {
        let m3 = zoo::m3();
        let fixes_atoms = UnaryOrderMap::new(vec![4, 1, 2, 3, 0]).unwrap();
        let r = check_ortholattice(&m3, &fixes_atoms);
        assert!(r.failed());
        assert_eq!(r.witness.elements(), Some(&[1][..]));
        for f in crate::order::inversions(m3.poset()) {
            assert!(check_ortholattice(&m3, &f).failed());
        }
    }

    #[test]
    fn orthomodular_examples() {
        assert!(check_orthomodular(&zoo::boolean_ortho(3)).iter().all(LawReport::passed));
        assert!(check_orthomodular(&zoo::mo(2)).iter().all(LawReport::passed));
    }

    #[test]
    fn downset_extremes() {
        let mo2 = zoo::mo(2);
        let top = downset_oml(&mo2, mo2.lattice().top()).unwrap();
        assert_eq!(top.oml, mo2);
        let bottom = downset_oml(&mo2, mo2.lattice().bottom()).unwrap();
        assert_eq!(bottom.oml.len(), 1);
    }

    #[test]
    fn downset_of_atom_is_two_chain() {
        let mo2 = zoo::mo(2);
        let d = downset_oml(&mo2, 1).unwrap();
        assert_eq!(d.embedding, vec![0, 1]);
        assert_eq!(d.oml.ortho_map().as_slice(), &[1, 0]);
    }

    #[test]
    fn downset_rejects_non_orthomodular() {
        assert!(matches!(downset_oml(&zoo::o6(), 2), Err(OrthoError::NotOrthomodular(..))));
    }

    #[test]
    fn compatibility_examples() {
        let mo2 = zoo::mo(2);
        let top = mo2.lattice().top();
        for x in 0..mo2.len() {
            assert!(compatible(&mo2, x, top));
        }
        // a = 1, b = 3 in the MO2 numbering
        assert!(!compatible(&mo2, 1, 3));
        let b3 = zoo::boolean_ortho(3);
        for x in 0..8 {
            for y in 0..8 {
                assert!(compatible(&b3, x, y));
            }
        }
        assert!(check_compatibility_symmetric(&mo2).passed());
    }

    #[test]
    fn block_examples() {
        assert_eq!(blocks(&zoo::boolean_ortho(3)).unwrap(), vec![(0..8).collect::<Vec<_>>()]);
        assert_eq!(blocks(&zoo::mo(2)).unwrap(), vec![vec![0, 1, 2, 5], vec![0, 3, 4, 5]]);
        let b = blocks(&zoo::mo(3)).unwrap();
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|blk| blk.len() == 4));
        assert!(blocks(&zoo::o6()).is_err());
    }
}
