//! The lattice of subspaces of `R^n` as a commutative Girard quantale.
//!
//! A subspace is stored as an orthonormal basis (`n × r`). Order is
//! inclusion, the orthocomplement is the orthogonal complement, and the
//! product of two subspaces is the span of componentwise (Hadamard)
//! products of their vectors. The unit is the line through `(1, …, 1)` and
//! the dualizing element is its orthogonal complement, the zero-sum
//! hyperplane.
//!
//! Ranks are decided from singular values relative to the largest one and
//! equality is measured as the Frobenius distance between orthogonal
//! projectors, both under the tolerances of a [`QuantaleContext`].

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::report::{LawReport, Witness};
use crate::scalar::Scalar;

pub const DEFAULT_MAX_DIM: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum SubspaceError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("columns are not orthonormal (deviation {0:e})")]
    NotOrthonormal(f64),
}

/// Numerical policy for one ambient dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantaleContext<T: Scalar> {
    n: usize,
    tol_rank: T,
    tol_eq: T,
    seed: u64,
}

impl<T: Scalar> QuantaleContext<T> {
    /// Default tolerances for `T`: `τ_rank = 10⁻⁹`, `τ_eq = 10⁻⁸·√n` in
    /// double precision.
    pub fn new(n: usize) -> Result<Self, SubspaceError> {
        Self::with_tolerances(n, T::DEFAULT_TOL_RANK, T::DEFAULT_TOL_EQ * (n as f64).sqrt())
    }

    pub fn with_tolerances(n: usize, tol_rank: f64, tol_eq: f64) -> Result<Self, SubspaceError> {
        if n == 0 || n > DEFAULT_MAX_DIM {
            return Err(SubspaceError::InvalidContext(format!(
                "dimension {n} outside 1..={DEFAULT_MAX_DIM}"
            )));
        }
        for (name, t) in [("rank", tol_rank), ("equality", tol_eq)] {
            if !(t > 0.0 && t < 1.0) {
                return Err(SubspaceError::InvalidContext(format!("{name} tolerance {t} not in (0, 1)")));
            }
        }
        Ok(QuantaleContext {
            n,
            tol_rank: T::of(tol_rank),
            tol_eq: T::of(tol_eq),
            seed: 0,
        })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn tol_rank(&self) -> T {
        self.tol_rank
    }

    pub fn tol_eq(&self) -> T {
        self.tol_eq
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

/// A subspace of `R^n` given by an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<T: Scalar> {
    basis: DMatrix<T>,
}

impl<T: Scalar> Subspace<T> {
    pub fn zero(n: usize) -> Self {
        Subspace {
            basis: DMatrix::zeros(n, 0),
        }
    }

    pub fn full(n: usize) -> Self {
        Subspace {
            basis: DMatrix::identity(n, n),
        }
    }

    /// Wraps a basis whose columns are orthonormal to within `tol`.
    pub fn from_orthonormal(basis: DMatrix<T>, tol: T) -> Result<Self, SubspaceError> {
        let r = basis.ncols();
        let gram = basis.transpose() * &basis;
        let dev = (gram - DMatrix::<T>::identity(r, r)).amax();
        if dev > tol {
            return Err(SubspaceError::NotOrthonormal(dev.as_f64()));
        }
        Ok(Subspace { basis })
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<T> {
        &self.basis
    }

    pub fn projector(&self) -> DMatrix<T> {
        &self.basis * self.basis.transpose()
    }

    /// Basis columns as `f64` vectors, for reports and replay.
    pub fn columns_f64(&self) -> Vec<Vec<f64>> {
        self.basis
            .column_iter()
            .map(|c| c.iter().map(|x| x.as_f64()).collect())
            .collect()
    }
}

impl<T: Scalar> QuantaleContext<T> {
    fn check(&self, s: &Subspace<T>) -> Result<(), SubspaceError> {
        if s.ambient() != self.n {
            return Err(SubspaceError::DimensionMismatch {
                expected: self.n,
                got: s.ambient(),
            });
        }
        Ok(())
    }

    /// Orthonormal basis of the column span of `a`, keeping left singular
    /// vectors whose singular value is at least `τ_rank · σ_max`.
    fn span_matrix(&self, a: DMatrix<T>) -> Subspace<T> {
        self.span_matrix_scaled(a, T::zero())
    }

    /// As [`Self::span_matrix`], with the cutoff taken relative to
    /// `max(σ_max, scale)`.
    fn span_matrix_scaled(&self, a: DMatrix<T>, scale: T) -> Subspace<T> {
        if a.ncols() == 0 {
            return Subspace::zero(self.n);
        }
        let (u, sv) = T::left_singular(&a, false);
        let smax = sv.first().copied().unwrap_or_else(T::zero);
        if smax <= T::zero() {
            return Subspace::zero(self.n);
        }
        let cutoff = self.tol_rank * if smax > scale { smax } else { scale };
        let r = sv.iter().take_while(|&&x| x >= cutoff).count();
        Subspace {
            basis: u.columns(0, r).into_owned(),
        }
    }

    /// Span of a list of vectors, each of length `n`.
    pub fn span(&self, vectors: &[Vec<T>]) -> Result<Subspace<T>, SubspaceError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != self.n) {
            return Err(SubspaceError::DimensionMismatch {
                expected: self.n,
                got: v.len(),
            });
        }
        let a = DMatrix::from_fn(self.n, vectors.len(), |i, j| vectors[j][i]);
        Ok(self.span_matrix(a))
    }

    pub fn span_f64(&self, vectors: &[Vec<f64>]) -> Result<Subspace<T>, SubspaceError> {
        let v: Vec<Vec<T>> = vectors.iter().map(|v| v.iter().map(|&x| T::of(x)).collect()).collect();
        self.span(&v)
    }

    /// Frobenius norm of the part of `s`'s basis outside `t`.
    pub fn inclusion_residual(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<T, SubspaceError> {
        self.check(s)?;
        self.check(t)?;
        let b = s.basis();
        let resid = b - t.basis() * (t.basis().transpose() * b);
        Ok(resid.norm())
    }

    pub fn leq(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<bool, SubspaceError> {
        Ok(self.inclusion_residual(s, t)? <= self.tol_eq)
    }

    /// `‖P_S − P_T‖_F`.
    pub fn distance(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<T, SubspaceError> {
        self.check(s)?;
        self.check(t)?;
        Ok((s.projector() - t.projector()).norm())
    }

    pub fn equal(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<bool, SubspaceError> {
        Ok(self.distance(s, t)? <= self.tol_eq)
    }

    /// Orthogonal complement. The result always has dimension `n − dim s`.
    pub fn ortho(&self, s: &Subspace<T>) -> Result<Subspace<T>, SubspaceError> {
        self.check(s)?;
        let r = s.dim();
        if r == 0 {
            return Ok(Subspace::full(self.n));
        }
        if r >= self.n {
            return Ok(Subspace::zero(self.n));
        }
        // trailing columns of a full U span the null space of basisᵀ
        let (u, _) = T::left_singular(s.basis(), true);
        Ok(Subspace {
            basis: u.columns(r, self.n - r).into_owned(),
        })
    }

    pub fn join(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<Subspace<T>, SubspaceError> {
        self.check(s)?;
        self.check(t)?;
        let mut a = DMatrix::zeros(self.n, s.dim() + t.dim());
        a.columns_mut(0, s.dim()).copy_from(s.basis());
        a.columns_mut(s.dim(), t.dim()).copy_from(t.basis());
        Ok(self.span_matrix(a))
    }

    /// `(S^⊥ ∨ T^⊥)^⊥`
    pub fn meet(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<Subspace<T>, SubspaceError> {
        let j = self.join(&self.ortho(s)?, &self.ortho(t)?)?;
        self.ortho(&j)
    }

    /// Span of `sᵢ ∘ tⱼ` over all pairs of basis columns.
    pub fn mul(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<Subspace<T>, SubspaceError> {
        self.check(s)?;
        self.check(t)?;
        let (rs, rt) = (s.dim(), t.dim());
        let mut a = DMatrix::zeros(self.n, rs * rt);
        for i in 0..rs {
            for j in 0..rt {
                let col = s.basis().column(i).component_mul(&t.basis().column(j));
                a.set_column(i * rt + j, &col);
            }
        }
        // products of unit columns have norm at most 1, so a product whose
        // every singular value is below τ_rank is roundoff, not a direction
        Ok(self.span_matrix_scaled(a, T::one()))
    }

    /// The line through `(1, …, 1)`.
    pub fn unit(&self) -> Subspace<T> {
        let c = T::one() / T::of(self.n as f64).sqrt();
        Subspace {
            basis: DMatrix::from_element(self.n, 1, c),
        }
    }

    /// The hyperplane `Σ aᵢ = 0`.
    pub fn dualizing(&self) -> Subspace<T> {
        self.ortho(&self.unit()).expect("same dimension")
    }

    /// `S → T = (S ⊙ T^⊥)^⊥`; left and right residua coincide.
    pub fn residuum(&self, s: &Subspace<T>, t: &Subspace<T>) -> Result<Subspace<T>, SubspaceError> {
        let p = self.mul(s, &self.ortho(t)?)?;
        self.ortho(&p)
    }

    fn gaussian(&self, rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<T> {
        DMatrix::from_fn(rows, cols, |_, _| T::of(rng.sample::<f64, _>(StandardNormal)))
    }

    /// Gaussian `n × r` matrix, orthonormalised, with `r` uniform on `0..=n`.
    pub fn random_subspace(&self, rng: &mut impl Rng) -> Subspace<T> {
        let r = rng.random_range(0..=self.n);
        self.random_subspace_of_dim(rng, r)
    }

    pub fn random_subspace_of_dim(&self, rng: &mut impl Rng, r: usize) -> Subspace<T> {
        let g = self.gaussian(rng, self.n, r);
        self.span_matrix(g)
    }

    /// A random subspace of `parent`, dimension uniform on `0..=dim parent`.
    pub fn random_subspace_of(&self, rng: &mut impl Rng, parent: &Subspace<T>) -> Subspace<T> {
        let p = parent.dim();
        let k = rng.random_range(0..=p);
        let c = self.gaussian(rng, p, k);
        self.span_matrix(parent.basis() * c)
    }

    /// The same subspace with its basis multiplied by a random orthogonal
    /// matrix.
    pub fn rebase(&self, rng: &mut impl Rng, s: &Subspace<T>) -> Subspace<T> {
        let r = s.dim();
        if r == 0 {
            return s.clone();
        }
        let q = self.gaussian(rng, r, r).qr().q();
        Subspace {
            basis: s.basis() * q,
        }
    }
}

/// Per-trial RNG stream, a function of `(seed, trial)` only.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

pub const RN_LAWS: [&str; 9] = [
    "rn.commutative",
    "rn.associative",
    "rn.unit",
    "rn.join-distributive",
    "rn.cyclic-pivot",
    "rn.adjointness",
    "rn.double-negation",
    "rn.ortho-is-linear-negation",
    "rn.orthomodular",
];

/// Offending subspaces per law for one trial, `None` where the law held.
pub type TrialOutcome<T> = Vec<Option<Vec<Subspace<T>>>>;

/// Runs every law once on the subspaces drawn for `(seed, trial)`.
pub fn run_trial<T: Scalar>(
    ctx: &QuantaleContext<T>,
    seed: u64,
    trial: usize,
) -> Result<TrialOutcome<T>, SubspaceError> {
    let mut rng = trial_rng(seed, trial);
    let s = ctx.random_subspace(&mut rng);
    let t = ctx.random_subspace(&mut rng);
    let u = ctx.random_subspace(&mut rng);
    let e = ctx.unit();
    let d = ctx.dualizing();
    let mut out: TrialOutcome<T> = vec![None; RN_LAWS.len()];
    let mut flag = |k: usize, ok: bool, items: Vec<&Subspace<T>>| {
        if !ok && out[k].is_none() {
            out[k] = Some(items.into_iter().cloned().collect());
        }
    };

    let st = ctx.mul(&s, &t)?;
    flag(0, ctx.equal(&st, &ctx.mul(&t, &s)?)?, vec![&s, &t]);

    let left = ctx.mul(&st, &u)?;
    let right = ctx.mul(&s, &ctx.mul(&t, &u)?)?;
    flag(1, ctx.equal(&left, &right)?, vec![&s, &t, &u]);

    let ok = ctx.equal(&ctx.mul(&e, &s)?, &s)? && ctx.equal(&ctx.mul(&s, &e)?, &s)?;
    flag(2, ok, vec![&s]);

    let tu = ctx.join(&t, &u)?;
    let lhs = ctx.mul(&s, &tu)?;
    let rhs = ctx.join(&st, &ctx.mul(&s, &u)?)?;
    let lhs_r = ctx.mul(&tu, &s)?;
    let rhs_r = ctx.join(&ctx.mul(&t, &s)?, &ctx.mul(&u, &s)?)?;
    flag(3, ctx.equal(&lhs, &rhs)? && ctx.equal(&lhs_r, &rhs_r)?, vec![&s, &t, &u]);

    // S⊙T ≤ U^⊥ ⟺ U⊙T ≤ S^⊥, unconstrained and with U drawn inside (S⊙T)^⊥
    let perp_s = ctx.ortho(&s)?;
    let a = ctx.leq(&st, &ctx.ortho(&u)?)?;
    let b = ctx.leq(&ctx.mul(&u, &t)?, &perp_s)?;
    flag(4, a == b, vec![&s, &t, &u]);
    let inside = ctx.random_subspace_of(&mut rng, &ctx.ortho(&st)?);
    let a = ctx.leq(&st, &ctx.ortho(&inside)?)?;
    let b = ctx.leq(&ctx.mul(&inside, &t)?, &perp_s)?;
    flag(4, a && b, vec![&s, &t, &inside]);

    // X⊙S ≤ T ⟺ X ≤ S → T, unconstrained and constructed from both sides
    let res = ctx.residuum(&s, &t)?;
    let a = ctx.leq(&ctx.mul(&u, &s)?, &t)?;
    let b = ctx.leq(&u, &res)?;
    flag(5, a == b, vec![&u, &s, &t]);
    let below = ctx.random_subspace_of(&mut rng, &res);
    flag(5, ctx.leq(&ctx.mul(&below, &s)?, &t)?, vec![&below, &s, &t]);
    let extra = ctx.random_subspace(&mut rng);
    let target = ctx.join(&ctx.mul(&u, &s)?, &extra)?;
    flag(5, ctx.leq(&u, &ctx.residuum(&s, &target)?)?, vec![&u, &s, &target]);

    let twice = ctx.residuum(&ctx.residuum(&s, &d)?, &d)?;
    flag(6, ctx.equal(&twice, &s)?, vec![&s]);

    flag(7, ctx.equal(&perp_s, &ctx.residuum(&s, &d)?)?, vec![&s]);

    let x = ctx.random_subspace_of(&mut rng, &t);
    let rebuilt = ctx.join(&x, &ctx.meet(&ctx.ortho(&x)?, &t)?)?;
    flag(8, ctx.equal(&t, &rebuilt)?, vec![&x, &t]);

    Ok(out)
}

/// Seeded random verification of every law of the subspace quantale. One
/// report per entry of [`RN_LAWS`]; a failure names the first failing trial.
pub fn verify_theorem_rn<T: Scalar>(
    ctx: &QuantaleContext<T>,
    trials: usize,
    seed: u64,
) -> Result<Vec<LawReport>, SubspaceError> {
    let outcomes: Vec<TrialOutcome<T>> = (0..trials)
        .into_par_iter()
        .map(|i| run_trial(ctx, seed, i))
        .collect::<Result<_, _>>()?;
    let reports = RN_LAWS
        .iter()
        .enumerate()
        .map(|(k, law)| {
            let first = outcomes
                .iter()
                .enumerate()
                .find_map(|(i, o)| o[k].as_ref().map(|b| (i, b)));
            match first {
                None => LawReport::pass(*law).with_note(format!("{trials} trials, n = {}", ctx.dim())),
                Some((trial, bases)) => LawReport::fail(
                    *law,
                    Witness::Sample {
                        seed,
                        trial,
                        bases: bases.iter().map(Subspace::columns_f64).collect(),
                    },
                ),
            }
        })
        .collect();
    Ok(reports)
}

/// Re-basing `S` and `T` by random orthogonal matrices leaves `S ⊙ T`
/// unchanged.
pub fn check_basis_independence<T: Scalar>(
    ctx: &QuantaleContext<T>,
    trials: usize,
    seed: u64,
) -> Result<LawReport, SubspaceError> {
    const LAW: &str = "rn.basis-independent-product";
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let s = ctx.random_subspace(&mut rng);
        let t = ctx.random_subspace(&mut rng);
        let s2 = ctx.rebase(&mut rng, &s);
        let t2 = ctx.rebase(&mut rng, &t);
        if !ctx.equal(&ctx.mul(&s, &t)?, &ctx.mul(&s2, &t2)?)? {
            return Ok(LawReport::fail(
                LAW,
                Witness::Sample {
                    seed,
                    trial,
                    bases: vec![s.columns_f64(), t.columns_f64(), s2.columns_f64(), t2.columns_f64()],
                },
            ));
        }
    }
    Ok(LawReport::pass(LAW).with_note(format!("{trials} trials")))
}

/// Sampled form of `d = ⋁ₓ x ⊙ x^⊥`: every sampled product lies in `d` and
/// their join is `d`.
pub fn check_dualizing_is_join<T: Scalar>(
    ctx: &QuantaleContext<T>,
    samples: usize,
    seed: u64,
) -> Result<LawReport, SubspaceError> {
    const LAW: &str = "rn.dualizing-is-join";
    let d = ctx.dualizing();
    let mut acc = Subspace::zero(ctx.dim());
    for trial in 0..samples {
        let mut rng = trial_rng(seed, trial);
        let x = ctx.random_subspace(&mut rng);
        let p = ctx.mul(&x, &ctx.ortho(&x)?)?;
        if !ctx.leq(&p, &d)? {
            return Ok(LawReport::fail(
                LAW,
                Witness::Sample {
                    seed,
                    trial,
                    bases: vec![x.columns_f64()],
                },
            ));
        }
        acc = ctx.join(&acc, &p)?;
    }
    if !ctx.equal(&acc, &d)? {
        return Ok(LawReport::fail(
            LAW,
            Witness::Sample {
                seed,
                trial: samples,
                bases: vec![acc.columns_f64()],
            },
        )
        .with_note("join of samples differs from d"));
    }
    Ok(LawReport::pass(LAW).with_note(format!("{samples} samples")))
}
