//! The pullback barrier `f_A(y) = f(A^T y)` for `{y | A^T y in base}`,
//! with
//!
//! ```text
//!   g_A(y) = A g(A^T y),    H_A(y) = A H(A^T y) A^T,
//! ```
//!
//! the inherited barrier of the dual of a linear image cone. The barrier
//! parameter is unchanged. `A` must have full row rank (checked exactly).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::cone::{BarrierEval, BarrierOracle, ConeError, ExactEval};
use crate::exact::{ExactError, RatMatrix, Rational};

struct PullbackBarrier {
    base: Arc<dyn BarrierOracle>,
    a_rat: RatMatrix,
    a_f: DMatrix<f64>,
    reference: DVector<f64>,
}

impl PullbackBarrier {
    fn lift(&self, y: &DVector<f64>) -> DVector<f64> {
        self.a_f.transpose() * y
    }
}

impl BarrierOracle for PullbackBarrier {
    fn dim(&self) -> usize {
        self.a_f.nrows()
    }

    fn nu(&self) -> f64 {
        self.base.nu()
    }

    fn margin(&self, y: &DVector<f64>) -> f64 {
        self.base.margin(&self.lift(y))
    }

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        if y.len() != self.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        let u = self.lift(y);
        let base = self.base.eval(&u)?;
        let gradient = &self.a_f * &base.gradient;
        let hessian = &self.a_f * &base.hessian * self.a_f.transpose();
        Ok(BarrierEval {
            value: base.value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        self.reference.clone()
    }

    fn hyperbolic(&self) -> bool {
        self.base.hyperbolic()
    }

    fn exact_eval(&self, y: &[Rational]) -> Result<ExactEval, ExactError> {
        let at = self.a_rat.transpose();
        let u = at.mul_vec(y);
        let base = self.base.exact_eval(&u)?;
        let gradient = self.a_rat.mul_vec(&base.gradient);
        let hessian = self.a_rat.mul(&base.hessian).mul(&at);
        Ok(ExactEval { gradient, hessian })
    }

    fn exact_member(&self, y: &[Rational]) -> Result<bool, ExactError> {
        self.base.exact_member(&self.a_rat.transpose().mul_vec(y))
    }

    fn exact_interior(&self, y: &[Rational]) -> Result<bool, ExactError> {
        self.base.exact_interior(&self.a_rat.transpose().mul_vec(y))
    }

    fn exact_nu(&self) -> Option<Rational> {
        self.base.exact_nu()
    }
}

/// Finds a point `y` with `A^T y` strictly interior in the base cone, or
/// `None` when the search fails (which certifies nothing; the set may
/// still be empty or just hard to reach).
///
/// Strategy: try the least-squares preimage of the base reference point;
/// if that misses, run a phase-1 Newton on `f(A^T y + t x_ref) + M t`
/// starting from the always-feasible `(y, t) = (0, 1)` and extract the
/// interior crossing point when `t` reaches zero.
pub fn find_pullback_interior(
    base: &dyn BarrierOracle,
    a_f: &DMatrix<f64>,
    x_ref: &DVector<f64>,
) -> Option<DVector<f64>> {
    let m = a_f.nrows();
    let aat = a_f * a_f.transpose();
    if let Some(chol) = nalgebra::Cholesky::new(aat) {
        let y_ls = chol.solve(&(a_f * x_ref));
        if base.is_interior(&(a_f.transpose() * &y_ls)) {
            return Some(y_ls);
        }
    }

    let lift = |y: &DVector<f64>, t: f64| a_f.transpose() * y + x_ref * t;
    let mut weight = 1.0;
    for _round in 0..8 {
        let mut y = DVector::zeros(m);
        let mut t = 1.0f64;
        for _iter in 0..200 {
            let u = lift(&y, t);
            let eval = base.eval(&u).ok()?;
            // Gradient/Hessian in (y, t) through the linear map [A^T | x_ref].
            let gy = a_f * &eval.gradient;
            let gt = x_ref.dot(&eval.gradient) + weight;
            let mut grad = DVector::zeros(m + 1);
            grad.rows_mut(0, m).copy_from(&gy);
            grad[m] = gt;

            let hb = &eval.hessian;
            let h_yy = a_f * hb * a_f.transpose();
            let h_yt = a_f * (hb * x_ref);
            let h_tt = x_ref.dot(&(hb * x_ref));
            let mut hess = DMatrix::zeros(m + 1, m + 1);
            hess.view_mut((0, 0), (m, m)).copy_from(&h_yy);
            hess.view_mut((0, m), (m, 1)).copy_from(&h_yt);
            hess.view_mut((m, 0), (1, m)).copy_from(&h_yt.transpose());
            hess[(m, m)] = h_tt;
            for i in 0..=m {
                hess[(i, i)] += 1e-12;
            }

            let step = hess.clone().lu().solve(&(-&grad))?;
            let decrement = step.dot(&(&hess * &step)).max(0.0).sqrt();
            let mut scale = if decrement > 0.25 {
                1.0 / (1.0 + decrement)
            } else {
                1.0
            };
            let dy = step.rows(0, m).clone_owned();
            let dt = step[m];
            // Backtrack to stay interior.
            let mut accepted = false;
            for _ in 0..60 {
                let y_new = &y + &dy * scale;
                let t_new = t + dt * scale;
                if t_new <= 0.0 {
                    // Crossing segment: extract the t = 0 point, which is
                    // interior by convexity of the lifted domain.
                    let s = t / (t - t_new);
                    let y_cross = &y + &dy * (scale * s);
                    let u_cross = a_f.transpose() * &y_cross;
                    if base.is_interior(&u_cross) {
                        return Some(y_cross);
                    }
                }
                if base.is_interior(&lift(&y_new, t_new)) {
                    y = y_new;
                    t = t_new;
                    accepted = true;
                    break;
                }
                scale *= 0.5;
            }
            if !accepted || decrement < 1e-9 {
                break;
            }
            if t <= 0.0 {
                break;
            }
        }
        weight *= 10.0;
    }
    None
}

/// Builds the pullback oracle. `reference` seeds samplers and solvers;
/// when absent, an interior point is sought at construction, and failure
/// to find one is an error (the spec requires a nonempty dual interior).
pub fn pullback_oracle(
    base: Arc<dyn BarrierOracle>,
    a: RatMatrix,
    reference: Option<DVector<f64>>,
) -> Result<Arc<dyn BarrierOracle>, ConeError> {
    if a.ncols() != base.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: base.dim(),
            got: a.ncols(),
        });
    }
    if a.nrows() > a.ncols() || a.rank() != a.nrows() {
        return Err(ConeError::RankDeficient);
    }
    let a_f = a.to_f64();
    let reference = match reference {
        Some(r) => r,
        None => find_pullback_interior(&*base, &a_f, &base.reference_point()).ok_or_else(|| {
            ConeError::InvalidSpec(
                "could not find a strictly interior point of the pullback domain".into(),
            )
        })?,
    };
    let oracle = PullbackBarrier {
        base,
        a_rat: a,
        a_f,
        reference,
    };
    oracle.check_interior(&oracle.reference_point(), "pullback reference point")?;
    Ok(Arc::new(oracle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::{orthant_oracle, psd_cone_oracle};
    use crate::cone::lhscb_selfcheck;
    use crate::exact::{rat_int, RatMatrix};

    #[test]
    fn identity_pullback_is_identical() {
        let base = orthant_oracle(3);
        let a = RatMatrix::identity(3);
        let p = pullback_oracle(base.clone(), a, None).unwrap();
        let y = DVector::from_vec(vec![0.5, 1.0, 2.0]);
        let eb = base.eval(&y).unwrap();
        let ep = p.eval(&y).unwrap();
        assert_eq!(eb.value, ep.value);
        assert_eq!(eb.gradient, ep.gradient);
        assert_eq!(eb.hessian, ep.hessian);
        assert_eq!(p.nu(), 3.0);
    }

    #[test]
    fn scaling_pullback_matches_homogeneity() {
        // A = 2I: g_A(y) = 2 g(2y) = g(y) by degree -1 homogeneity.
        let base = orthant_oracle(2);
        let mut a = RatMatrix::zeros(2, 2);
        a[(0, 0)] = rat_int(2);
        a[(1, 1)] = rat_int(2);
        let p = pullback_oracle(base.clone(), a, None).unwrap();
        let y = DVector::from_vec(vec![1.0, 3.0]);
        let gp = p.eval(&y).unwrap().gradient;
        let gb = base.eval(&y).unwrap().gradient;
        assert!((gp - gb).amax() < 1e-12);
    }

    #[test]
    fn rank_deficient_rejected() {
        let base = orthant_oracle(2);
        let a = RatMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        assert!(matches!(
            pullback_oracle(base, a, None),
            Err(ConeError::RankDeficient)
        ));
    }

    #[test]
    fn selfcheck_on_wide_orthant_pullback() {
        let base = orthant_oracle(4);
        let a = RatMatrix::from_i64_rows(&[&[1, 2, 3, 4], &[0, -6, 0, 1]]);
        let p = pullback_oracle(base, a, None).unwrap();
        let report = lhscb_selfcheck(&*p, 40, 3).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn selfcheck_on_sos_style_psd_pullback() {
        // Univariate degree-2 moment map: A maps packed 2x2 symmetric
        // matrices to coefficients of (1, x, x^2).
        let base = psd_cone_oracle(2);
        let a = RatMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]);
        let p = pullback_oracle(base, a, None).unwrap();
        let report = lhscb_selfcheck(&*p, 40, 17).unwrap();
        assert!(report.passed(), "{report}");
        // Moment matrix of y = (1, 0, 1) is the identity.
        let e = p.eval(&DVector::from_vec(vec![1.0, 0.0, 1.0])).unwrap();
        assert!(e.value.abs() < 1e-12);
    }

    #[test]
    fn exact_pullback_matches_float() {
        let base = orthant_oracle(3);
        let a = RatMatrix::from_i64_rows(&[&[1, 1, 0], &[0, 1, 1]]);
        let p = pullback_oracle(base, a, None).unwrap();
        let y = vec![rat_int(1), rat_int(1)];
        let exact = p.exact_eval(&y).unwrap();
        let ef = p.eval(&DVector::from_vec(vec![1.0, 1.0])).unwrap();
        for i in 0..2 {
            assert!((crate::exact::rat_to_f64(&exact.gradient[i]) - ef.gradient[i]).abs() < 1e-12);
            for j in 0..2 {
                assert!(
                    (crate::exact::rat_to_f64(&exact.hessian[(i, j)]) - ef.hessian[(i, j)]).abs()
                        < 1e-12
                );
            }
        }
    }
}
