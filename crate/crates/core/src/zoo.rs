//! Named small structures: Boolean algebras, chains, M₃, N₅, the benzene
//! ring O₆, the horizontal sums MOₖ and a few residuated chains.

use crate::order::{compute_lattice, FiniteLattice, FinitePoset, UnaryOrderMap};
use crate::ortho::OrthoLattice;
use crate::residuation::{MulTable, ResiduatedStructure};

pub use crate::residuation::{godel_chain, lukasiewicz_chain};

fn lattice(n: usize, covers: &[(usize, usize)], labels: &[&str]) -> FiniteLattice {
    let p = FinitePoset::from_pairs(n, covers)
        .expect("catalogue entry is a poset")
        .with_labels(labels.iter().map(|s| s.to_string()).collect());
    compute_lattice(p).expect("catalogue entry is a lattice")
}

fn ortho(l: FiniteLattice, map: Vec<usize>) -> OrthoLattice {
    OrthoLattice::new(l, UnaryOrderMap::new(map).expect("in range")).expect("catalogue entry is an ortholattice")
}

fn subset_label(mask: usize, k: usize) -> String {
    if mask == 0 {
        return "0".into();
    }
    if mask + 1 == 1 << k {
        return "1".into();
    }
    (0..k)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (b'a' + i as u8) as char)
        .collect()
}

/// The power set of `k` atoms. Element `i` is the subset with bitmask `i`.
pub fn boolean(k: usize) -> FiniteLattice {
    assert!(k <= 6, "2^{k} elements is beyond desk scale");
    let n = 1usize << k;
    let mut leq = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            leq.push(i & !j == 0);
        }
    }
    let p = FinitePoset::from_flat(n, leq)
        .expect("subset order")
        .with_labels((0..n).map(|i| subset_label(i, k)).collect());
    compute_lattice(p).expect("power set is a lattice")
}

/// `boolean(k)` with set complement as orthocomplement.
pub fn boolean_ortho(k: usize) -> OrthoLattice {
    let n = 1usize << k;
    ortho(boolean(k), (0..n).map(|i| (n - 1) ^ i).collect())
}

pub fn chain(m: usize) -> FiniteLattice {
    compute_lattice(FinitePoset::chain(m)).expect("chain is a lattice")
}

/// Bottom, `k` pairwise incomparable atoms, top.
pub fn diamond(k: usize) -> FiniteLattice {
    let top = k + 1;
    let mut covers = Vec::new();
    for a in 1..=k {
        covers.push((0, a));
        covers.push((a, top));
    }
    if k == 0 {
        covers.push((0, 1));
    }
    let mut labels = vec!["0".to_string()];
    labels.extend((0..k).map(|i| ((b'a' + i as u8) as char).to_string()));
    labels.push("1".into());
    let p = FinitePoset::from_pairs(k + 2, &covers).expect("poset").with_labels(labels);
    compute_lattice(p).expect("lattice")
}

pub fn m3() -> FiniteLattice {
    diamond(3)
}

/// The pentagon `0 < a < b < 1`, `0 < c < 1`.
pub fn n5() -> FiniteLattice {
    lattice(
        5,
        &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)],
        &["0", "a", "b", "c", "1"],
    )
}

/// The benzene ring `0 < a < b < 1`, `0 < b' < a' < 1`.
pub fn o6() -> OrthoLattice {
    let l = lattice(
        6,
        &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)],
        &["0", "a", "b", "b'", "a'", "1"],
    );
    ortho(l, vec![5, 4, 3, 2, 1, 0])
}

/// Horizontal sum of `k` four-element Boolean algebras. Atoms come in pairs
/// `(2i+1, 2i+2)` that are each other's orthocomplement.
pub fn mo(k: usize) -> OrthoLattice {
    assert!(k >= 1);
    let top = 2 * k + 1;
    let mut covers = Vec::new();
    let mut labels = vec!["0".to_string()];
    let mut map = vec![top];
    for i in 0..k {
        let name = ((b'a' + i as u8) as char).to_string();
        for (j, lab) in [name.clone(), format!("{name}'")].into_iter().enumerate() {
            let idx = 2 * i + 1 + j;
            covers.push((0, idx));
            covers.push((idx, top));
            labels.push(lab);
        }
        map.push(2 * i + 2);
        map.push(2 * i + 1);
    }
    labels.push("1".into());
    map.push(0);
    let p = FinitePoset::from_pairs(top + 1, &covers).expect("poset").with_labels(labels);
    ortho(compute_lattice(p).expect("lattice"), map)
}

/// The three-element Sugihara monoid on `-1 < 0 < 1`: the larger absolute
/// value wins, ties go to the minimum. Unit `0`, not integral.
pub fn sugihara3() -> ResiduatedStructure {
    let mul = MulTable::from_rows(&[vec![0, 0, 0], vec![0, 1, 2], vec![0, 2, 2]]).expect("3x3");
    let p = FinitePoset::chain(3).with_labels(vec!["-1".into(), "0".into(), "1".into()]);
    ResiduatedStructure::new(p, mul).expect("Sugihara monoid is residuated")
}
