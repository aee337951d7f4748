//! Log-det barriers `f(y) = -ln det(Lambda(y))` for cones of the form
//! `{y | Lambda(y) PSD}` with an injective linear matrix map `Lambda`.
//! When the map is rational, gradients and Hessians are rational at every
//! rational point:
//!
//! ```text
//!   g_i(y)   = -tr(Lambda(y)^{-1} Lambda_i)
//!   H_ij(y)  =  tr(Lambda(y)^{-1} Lambda_i Lambda(y)^{-1} Lambda_j)
//! ```

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::cone::{BarrierEval, BarrierOracle, ConeError, ExactEval};
use crate::exact::{
    rat, rat_int, rational_psd_check, rational_solve, ExactError, PsdStatus, RatMatrix, Rational,
};

pub struct LogDetBarrier {
    order: usize,
    maps: Vec<RatMatrix>,
    maps_f: Vec<DMatrix<f64>>,
    reference: DVector<f64>,
}

impl LogDetBarrier {
    fn lambda_f(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(self.order, self.order);
        for (yi, m) in y.iter().zip(&self.maps_f) {
            out += m * *yi;
        }
        out
    }

    fn lambda_exact(&self, y: &[Rational]) -> RatMatrix {
        let mut out = RatMatrix::zeros(self.order, self.order);
        for (yi, m) in y.iter().zip(&self.maps) {
            for i in 0..self.order {
                for j in 0..self.order {
                    let upd = &out[(i, j)] + yi * &m[(i, j)];
                    out[(i, j)] = upd;
                }
            }
        }
        out
    }
}

impl BarrierOracle for LogDetBarrier {
    fn dim(&self) -> usize {
        self.maps.len()
    }

    fn nu(&self) -> f64 {
        self.order as f64
    }

    fn margin(&self, y: &DVector<f64>) -> f64 {
        self.lambda_f(y).symmetric_eigen().eigenvalues.min()
    }

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        if y.len() != self.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        let lambda = self.lambda_f(y);
        let chol =
            nalgebra::Cholesky::new(lambda.clone()).ok_or_else(|| ConeError::NotInterior {
                context: "log-det barrier".into(),
                margin: self.margin(y),
            })?;
        let value = -2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
        // T_i = Lambda^{-1} Lambda_i
        let t: Vec<DMatrix<f64>> = self.maps_f.iter().map(|m| chol.solve(m)).collect();
        let gradient = DVector::from_fn(self.dim(), |i, _| -t[i].trace());
        let dim = self.dim();
        let mut hessian = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..=i {
                // tr(T_i T_j)
                let mut tr = 0.0;
                for a in 0..self.order {
                    for b in 0..self.order {
                        tr += t[i][(a, b)] * t[j][(b, a)];
                    }
                }
                hessian[(i, j)] = tr;
                hessian[(j, i)] = tr;
            }
        }
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        self.reference.clone()
    }

    fn hyperbolic(&self) -> bool {
        true
    }

    fn exact_eval(&self, y: &[Rational]) -> Result<ExactEval, ExactError> {
        if y.len() != self.dim() {
            return Err(ExactError::DimensionMismatch(format!(
                "expected {}, got {}",
                self.dim(),
                y.len()
            )));
        }
        let lambda = self.lambda_exact(y);
        if rational_psd_check(&lambda)? != PsdStatus::PositiveDefinite {
            return Err(ExactError::Unavailable(
                "exact evaluation at a non-interior point".into(),
            ));
        }
        // Columns of Lambda^{-1}.
        let m = self.order;
        let mut inv = RatMatrix::zeros(m, m);
        for col in 0..m {
            let mut e = vec![Rational::zero(); m];
            e[col] = Rational::one();
            let x = rational_solve(&lambda, &e)?;
            for row in 0..m {
                inv[(row, col)] = x[row].clone();
            }
        }
        let t: Vec<RatMatrix> = self.maps.iter().map(|mat| inv.mul(mat)).collect();
        let gradient = t
            .iter()
            .map(|ti| -(0..m).map(|a| ti[(a, a)].clone()).sum::<Rational>())
            .collect();
        let dim = self.dim();
        let mut hessian = RatMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..=i {
                let mut tr = Rational::zero();
                for a in 0..m {
                    for b in 0..m {
                        tr += &t[i][(a, b)] * &t[j][(b, a)];
                    }
                }
                hessian[(i, j)] = tr.clone();
                hessian[(j, i)] = tr;
            }
        }
        Ok(ExactEval { gradient, hessian })
    }

    fn exact_member(&self, y: &[Rational]) -> Result<bool, ExactError> {
        Ok(rational_psd_check(&self.lambda_exact(y))? != PsdStatus::NotPsd)
    }

    fn exact_interior(&self, y: &[Rational]) -> Result<bool, ExactError> {
        Ok(rational_psd_check(&self.lambda_exact(y))? == PsdStatus::PositiveDefinite)
    }

    fn exact_nu(&self) -> Option<Rational> {
        Some(rat_int(self.order as i64))
    }
}

/// Builds a log-det oracle from the images of the unit vectors under the
/// (injective, symmetric-valued) map `Lambda`. When no reference point is
/// given, one is sought by least-squares targeting `Lambda(y) = I`.
pub fn logdet_oracle(
    order: usize,
    maps: Vec<RatMatrix>,
    reference: Option<DVector<f64>>,
) -> Result<Arc<dyn BarrierOracle>, ConeError> {
    if maps.is_empty() {
        return Err(ConeError::InvalidSpec("log-det map with no inputs".into()));
    }
    for m in &maps {
        if m.nrows() != order || m.ncols() != order || !m.is_symmetric() {
            return Err(ConeError::InvalidSpec(
                "log-det maps must be symmetric of the stated order".into(),
            ));
        }
    }
    // Injectivity: vectorized maps must have full column rank.
    let dim = maps.len();
    let vecd = RatMatrix::from_fn(order * order, dim, |r, c| {
        maps[c][(r / order, r % order)].clone()
    });
    if vecd.rank() != dim {
        return Err(ConeError::InvalidSpec(
            "log-det map is not injective".into(),
        ));
    }
    let maps_f: Vec<DMatrix<f64>> = maps.iter().map(RatMatrix::to_f64).collect();
    let reference = match reference {
        Some(r) => r,
        None => {
            // Least-squares solve of Lambda(y) = I via the Gram system.
            let gram = DMatrix::from_fn(dim, dim, |i, j| {
                (&maps_f[i] * &maps_f[j].transpose()).trace()
            });
            let rhs = DVector::from_fn(dim, |i, _| maps_f[i].trace());

            gram.lu()
                .solve(&rhs)
                .ok_or_else(|| ConeError::InvalidSpec("could not seed log-det barrier".into()))?
        }
    };
    let oracle = LogDetBarrier {
        order,
        maps,
        maps_f,
        reference,
    };
    oracle.check_interior(&oracle.reference_point(), "log-det reference point")?;
    Ok(Arc::new(oracle))
}

/// Index of the packed slot for entry (i, j), j <= i.
pub fn psd_pack_index(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

/// Packs the lower triangle of a symmetric matrix row by row, entries as-is.
pub fn pack_symmetric(mat: &DMatrix<f64>) -> DVector<f64> {
    let m = mat.nrows();
    let mut out = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in 0..=i {
            out.push(mat[(i, j)]);
        }
    }
    DVector::from_vec(out)
}

/// Expands plain packed coordinates into a full symmetric matrix.
pub fn unpack_plain_symmetric(m: usize, x: &DVector<f64>) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(m, m);
    let mut k = 0;
    for i in 0..m {
        for j in 0..=i {
            out[(i, j)] = x[k];
            out[(j, i)] = x[k];
            k += 1;
        }
    }
    out
}

/// The PSD cone of order `m` in plain packed coordinates. The barrier
/// domain is `{y | mat(y) PSD}` where `mat` places diagonal slots as-is
/// and *halves* packed off-diagonal slots on both sides, so that the dual
/// pairing `x . y` equals the Frobenius pairing of the plainly-symmetrized
/// `x` against `mat(y)`.
pub fn psd_cone_oracle(m: usize) -> Arc<dyn BarrierOracle> {
    let mut maps = Vec::with_capacity(m * (m + 1) / 2);
    for i in 0..m {
        for j in 0..=i {
            let mut mat = RatMatrix::zeros(m, m);
            if i == j {
                mat[(i, i)] = rat_int(1);
            } else {
                mat[(i, j)] = rat(1, 2);
                mat[(j, i)] = rat(1, 2);
            }
            maps.push(mat);
        }
    }
    let mut reference = DVector::zeros(m * (m + 1) / 2);
    for i in 0..m {
        reference[psd_pack_index(i, i)] = 1.0;
    }
    logdet_oracle(m, maps, Some(reference)).expect("psd cone oracle is always valid")
}
