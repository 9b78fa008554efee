//! Residuated structures on finite posets.
//!
//! A multiplication table is residuated when `x⊙y ≤ z ⟺ x ≤ y→z ⟺ y ≤ z←x`
//! holds for every triple. Residua are computed as maxima of candidate sets
//! and the full biconditional is then re-checked, because pointwise maxima
//! existing does not imply adjointness.

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::order::{compute_lattice, is_boolean, is_complemented, FiniteLattice, FinitePoset};
use crate::report::LawReport;

/// `cells[x * n + y] = x ⊙ y`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MulTable {
    n: usize,
    cells: Vec<usize>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("table has {got} cells, expected {n}x{n}")]
    Shape { n: usize, got: usize },
    #[error("entry {value} out of range for {n} elements")]
    OutOfRange { value: usize, n: usize },
}

impl MulTable {
    pub fn new(n: usize, cells: Vec<usize>) -> Result<Self, TableError> {
        if cells.len() != n * n {
            return Err(TableError::Shape { n, got: cells.len() });
        }
        if let Some(&value) = cells.iter().find(|&&v| v >= n) {
            return Err(TableError::OutOfRange { value, n });
        }
        Ok(MulTable { n, cells })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self, TableError> {
        let n = rows.len();
        if let Some(r) = rows.iter().find(|r| r.len() != n) {
            return Err(TableError::Shape { n, got: r.len() * n });
        }
        Self::new(n, rows.concat())
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> usize) -> Self {
        let cells = (0..n).flat_map(|x| (0..n).map(move |y| (x, y))).map(|(x, y)| f(x, y)).collect();
        Self::new(n, cells).expect("generated table in range")
    }

    pub fn meet_of(l: &FiniteLattice) -> Self {
        Self::from_fn(l.len(), |x, y| l.meet(x, y))
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> usize {
        self.cells[x * self.n + y]
    }

    pub fn set(&mut self, x: usize, y: usize, v: usize) {
        assert!(v < self.n);
        self.cells[x * self.n + y] = v;
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn cells(&self) -> &[usize] {
        &self.cells
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.cells.chunks(self.n.max(1)).map(<[usize]>::to_vec).collect()
    }
}

/// (x⊙y)⊙z = x⊙(y⊙z) on every triple.
pub fn check_associative(m: &MulTable) -> LawReport {
    let n = m.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if m.get(m.get(x, y), z) != m.get(x, m.get(y, z)) {
                    return LawReport::fail_at("residuation.associative", vec![x, y, z]);
                }
            }
        }
    }
    LawReport::pass("residuation.associative")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Right,
    Left,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResiduationError {
    #[error("multiplication has {mul} elements, order has {order}")]
    SizeMismatch { mul: usize, order: usize },
    #[error("multiplication is not associative at {0:?}")]
    NotAssociative(Vec<usize>),
    #[error("{side:?} residuum of ({a}, {b}) has no maximal candidate")]
    NoResiduum { side: Side, a: usize, b: usize },
    #[error("adjointness fails at (x, y, z) = {0:?}")]
    AdjointnessFailure(Vec<usize>),
}

/// Residua tables, `rres[y * n + z] = y → z` and `lres[z * n + x] = z ← x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residua {
    n: usize,
    rres: Vec<usize>,
    lres: Vec<usize>,
}

impl Residua {
    /// y → z
    #[inline]
    pub fn right(&self, y: usize, z: usize) -> usize {
        self.rres[y * self.n + z]
    }

    /// z ← x
    #[inline]
    pub fn left(&self, z: usize, x: usize) -> usize {
        self.lres[z * self.n + x]
    }

    pub fn right_rows(&self) -> Vec<Vec<usize>> {
        self.rres.chunks(self.n).map(<[usize]>::to_vec).collect()
    }

    pub fn left_rows(&self) -> Vec<Vec<usize>> {
        self.lres.chunks(self.n).map(<[usize]>::to_vec).collect()
    }
}

/// Associativity, then residua as maxima of `{t : t⊙y ≤ z}` and
/// `{t : x⊙t ≤ z}`, then the full adjointness biconditional.
pub fn derive_residua(p: &FinitePoset, m: &MulTable) -> Result<Residua, ResiduationError> {
    if p.len() != m.len() {
        return Err(ResiduationError::SizeMismatch {
            mul: m.len(),
            order: p.len(),
        });
    }
    let assoc = check_associative(m);
    if let Some(w) = assoc.witness.elements() {
        return Err(ResiduationError::NotAssociative(w.to_vec()));
    }
    residua_by_adjointness(p, m)
}

/// The residua of a (not necessarily associative) multiplication. This is
/// the adjointness half of [`derive_residua`] on its own.
pub fn residua_by_adjointness(p: &FinitePoset, m: &MulTable) -> Result<Residua, ResiduationError> {
    let n = p.len();
    let mut rres = vec![0; n * n];
    let mut lres = vec![0; n * n];
    for a in 0..n {
        for b in 0..n {
            // a → b
            let cands = (0..n).filter(|&t| p.leq(m.get(t, a), b));
            rres[a * n + b] = p.maximum(cands).ok_or(ResiduationError::NoResiduum {
                side: Side::Right,
                a,
                b,
            })?;
        }
    }
    for a in 0..n {
        for b in 0..n {
            // a ← b
            let cands = (0..n).filter(|&t| p.leq(m.get(b, t), a));
            lres[a * n + b] = p.maximum(cands).ok_or(ResiduationError::NoResiduum {
                side: Side::Left,
                a,
                b,
            })?;
        }
    }
    let r = Residua { n, rres, lres };
    if let Some(w) = adjointness_failure(p, m, &r) {
        return Err(ResiduationError::AdjointnessFailure(w));
    }
    Ok(r)
}

fn adjointness_failure(p: &FinitePoset, m: &MulTable, r: &Residua) -> Option<Vec<usize>> {
    let n = p.len();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let a = p.leq(m.get(x, y), z);
                let b = p.leq(x, r.right(y, z));
                let c = p.leq(y, r.left(z, x));
                if a != b || b != c {
                    return Some(vec![x, y, z]);
                }
            }
        }
    }
    None
}

/// `derive_residua` as a report: the witness is the failing triple, or the
/// pair whose residuum does not exist.
pub fn check_residuated(p: &FinitePoset, m: &MulTable) -> LawReport {
    const LAW: &str = "residuation.residuated";
    match derive_residua(p, m) {
        Ok(_) => LawReport::pass(LAW),
        Err(ResiduationError::SizeMismatch { .. }) => LawReport::skipped(LAW, "table size differs from the order"),
        Err(ResiduationError::NotAssociative(w)) => LawReport::fail_at(LAW, w).with_note("not associative"),
        Err(ResiduationError::NoResiduum { side, a, b }) => {
            LawReport::fail_at(LAW, vec![a, b]).with_note(format!("{side:?} residuum missing").to_lowercase())
        }
        Err(ResiduationError::AdjointnessFailure(w)) => LawReport::fail_at(LAW, w).with_note("adjointness fails"),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub commutative: bool,
    pub idempotent: bool,
    pub unit: Option<usize>,
    pub integral: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResiduatedStructure {
    poset: FinitePoset,
    lattice: Option<FiniteLattice>,
    mul: MulTable,
    residua: Residua,
    flags: Flags,
}

impl ResiduatedStructure {
    /// Derives residua and classifies. The lattice tables are attached when
    /// the order happens to be a lattice.
    pub fn new(poset: FinitePoset, mul: MulTable) -> Result<Self, ResiduationError> {
        let residua = derive_residua(&poset, &mul)?;
        let lattice = compute_lattice(poset.clone()).ok();
        let mut s = ResiduatedStructure {
            poset,
            lattice,
            mul,
            residua,
            flags: Flags::default(),
        };
        s.flags = classify(&s);
        Ok(s)
    }

    pub fn from_lattice(l: &FiniteLattice, mul: MulTable) -> Result<Self, ResiduationError> {
        Self::new(l.poset().clone(), mul)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn lattice(&self) -> Option<&FiniteLattice> {
        self.lattice.as_ref()
    }

    pub fn mul_table(&self) -> &MulTable {
        &self.mul
    }

    pub fn residua(&self) -> &Residua {
        &self.residua
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.poset.leq(x, y)
    }

    #[inline]
    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.mul.get(x, y)
    }

    /// y → z
    #[inline]
    pub fn rres(&self, y: usize, z: usize) -> usize {
        self.residua.right(y, z)
    }

    /// z ← x
    #[inline]
    pub fn lres(&self, z: usize, x: usize) -> usize {
        self.residua.left(z, x)
    }
}

/// Exhaustive scan for commutativity, idempotency, a two-sided unit and
/// integrality (unit equal to the top element).
pub fn classify(s: &ResiduatedStructure) -> Flags {
    let n = s.len();
    let commutative = (0..n).all(|x| (0..n).all(|y| s.mul(x, y) == s.mul(y, x)));
    let idempotent = (0..n).all(|x| s.mul(x, x) == x);
    let unit = (0..n).find(|&e| (0..n).all(|x| s.mul(e, x) == x && s.mul(x, e) == x));
    let top = s.poset().maximum(0..n);
    Flags {
        commutative,
        idempotent,
        unit,
        integral: unit.is_some() && unit == top,
    }
}

/// In the integral case `x ⊙ y ≤ x ∧ y` for all pairs.
pub fn check_integral_consequences(l: &FiniteLattice, m: &MulTable) -> LawReport {
    const LAW: &str = "residuation.integral-below-meet";
    let n = l.len();
    let t = l.top();
    if !(0..n).all(|x| m.get(t, x) == x && m.get(x, t) == x) {
        return LawReport::skipped(LAW, "top is not a unit");
    }
    for x in 0..n {
        for y in 0..n {
            if !l.leq(m.get(x, y), l.meet(x, y)) {
                return LawReport::fail_at(LAW, vec![x, y]);
            }
        }
    }
    LawReport::pass(LAW)
}

#[derive(Debug, Error, PartialEq)]
#[error("lattice is not Boolean: {0}")]
pub struct NotBoolean(pub String);

/// `⊙ = ∧` with `x → y = x' ∨ y` where `x'` is the complement.
pub fn boolean_residuation(b: &FiniteLattice) -> Result<ResiduatedStructure, NotBoolean> {
    let r = is_boolean(b);
    if !r.passed() {
        return Err(NotBoolean(format!("{} at {}", r.note, r.witness)));
    }
    let (_, comp) = is_complemented(b);
    let comp = comp.expect("complemented");
    let n = b.len();
    let mul = MulTable::meet_of(b);
    let mut rres = vec![0; n * n];
    let mut lres = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            rres[x * n + y] = b.join(comp[x], y);
            // z ← x with z = x-row index, same formula by commutativity
            lres[x * n + y] = b.join(comp[y], x);
        }
    }
    let residua = Residua { n, rres, lres };
    debug_assert!(adjointness_failure(b.poset(), &mul, &residua).is_none());
    let mut s = ResiduatedStructure {
        poset: b.poset().clone(),
        lattice: Some(b.clone()),
        mul,
        residua,
        flags: Flags::default(),
    };
    s.flags = classify(&s);
    Ok(s)
}

/// `a ⊙ b = max{0, a + b − 1}` over any ordered ring-like scalar.
pub fn lukasiewicz_product<T>(a: T, b: T) -> T
where
    T: Zero + One + PartialOrd + Copy + std::ops::Sub<Output = T>,
{
    let s = a + b - T::one();
    if s > T::zero() {
        s
    } else {
        T::zero()
    }
}

/// Values `k/(m−1)` of the `m`-element equally spaced chain.
pub fn chain_values(m: usize) -> Vec<Ratio<i64>> {
    assert!(m >= 2, "a chain needs at least two values");
    let d = (m - 1) as i64;
    (0..m as i64).map(|k| Ratio::new(k, d)).collect()
}

fn chain_labels(values: &[Ratio<i64>]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

/// The Łukasiewicz chain `Ł_m` on `{0, 1/(m−1), …, 1}`, computed exactly.
pub fn lukasiewicz_chain(m: usize) -> ResiduatedStructure {
    let values = chain_values(m);
    let mul = MulTable::from_fn(m, |x, y| {
        let p = lukasiewicz_product(values[x], values[y]);
        values.iter().position(|&v| v == p).expect("chain is closed under the product")
    });
    let poset = FinitePoset::chain(m).with_labels(chain_labels(&values));
    ResiduatedStructure::new(poset, mul).expect("Łukasiewicz chain is residuated")
}

/// The Gödel chain: same carrier as `Ł_m`, `⊙ = min`.
pub fn godel_chain(m: usize) -> ResiduatedStructure {
    let values = chain_values(m);
    let mul = MulTable::from_fn(m, |x, y| x.min(y));
    let poset = FinitePoset::chain(m).with_labels(chain_labels(&values));
    ResiduatedStructure::new(poset, mul).expect("Gödel chain is residuated")
}
