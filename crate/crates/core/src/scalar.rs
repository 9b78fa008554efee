//! Floating point types the subspace engine runs on.

use nalgebra::{DMatrix, RealField};
use num_traits::{FromPrimitive, ToPrimitive};

/// A real scalar usable by the subspace engine, with the numerical policy
/// defaults that suit its precision.
pub trait Scalar: RealField + Copy + FromPrimitive + ToPrimitive + Send + Sync + 'static {
    /// Singular values below `DEFAULT_TOL_RANK · σ_max` are treated as zero.
    const DEFAULT_TOL_RANK: f64;
    /// Projector-distance threshold per `√n`.
    const DEFAULT_TOL_EQ: f64;

    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite")
    }

    /// Left singular vectors of `a` with singular values in nonincreasing
    /// order. `full` asks for all `n` columns of `U`, otherwise
    /// `min(n, k)`.
    fn left_singular(a: &DMatrix<Self>, full: bool) -> (DMatrix<Self>, Vec<Self>);
}

// nalgebra's SVD occasionally returns a U whose leading columns miss part of
// the range on rank-deficient input, so the decomposition goes through faer.
macro_rules! faer_svd {
    ($t:ty) => {
        fn left_singular(a: &DMatrix<$t>, full: bool) -> (DMatrix<$t>, Vec<$t>) {
            let (n, k) = a.shape();
            let m = faer::Mat::<$t>::from_fn(n, k, |i, j| a[(i, j)]);
            let svd = if full { m.svd() } else { m.thin_svd() }.expect("svd converges");
            let u = svd.U();
            let sv = svd.S().column_vector().iter().copied().collect();
            (DMatrix::from_fn(u.nrows(), u.ncols(), |i, j| u[(i, j)]), sv)
        }
    };
}

impl Scalar for f64 {
    const DEFAULT_TOL_RANK: f64 = 1e-9;
    const DEFAULT_TOL_EQ: f64 = 1e-8;
    faer_svd!(f64);
}

impl Scalar for f32 {
    const DEFAULT_TOL_RANK: f64 = 1e-4;
    const DEFAULT_TOL_EQ: f64 = 1e-3;
    faer_svd!(f32);
}
