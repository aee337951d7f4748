//! The barrier-oracle contract shared by every cone: evaluation of a
//! logarithmically homogeneous self-concordant barrier (LHSCB), local norms
//! induced by its Hessian, Dikin balls, and a self-test harness for the
//! identities every LHSCB must satisfy:
//!
//! ```text
//!   H(y) y = -g(y),     y' H(y) y = nu,
//!   g(t y) = g(y) / t,  H(t y) = H(y) / t^2.
//! ```

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exact::{ExactError, RatMatrix, RatVec, Rational};

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("point is not strictly interior ({context}, margin {margin:e})")]
    NotInterior { context: String, margin: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix does not have full row rank")]
    RankDeficient,
    #[error("invalid cone specification: {0}")]
    InvalidSpec(String),
    #[error("Hessian factorization failed (not positive definite numerically)")]
    FactorizationFailed,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Value, gradient and Hessian of a barrier at an interior point.
#[derive(Clone, Debug)]
pub struct BarrierEval {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: DMatrix<f64>,
}

/// Exact-rational gradient and Hessian, for barriers that are rational
/// functions of the point (log-det and orthant families).
#[derive(Clone, Debug)]
pub struct ExactEval {
    pub gradient: RatVec,
    pub hessian: RatMatrix,
}

/// A nu-LHSCB for the interior of a convex cone. The oracle also owns the
/// membership test of its domain cone: `margin(y) > 0` iff `y` is strictly
/// interior, `margin(y) >= 0` iff `y` lies in the closed cone. Margin units
/// are cone-specific (constraint slacks, minimal eigenvalues, ...).
pub trait BarrierOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn nu(&self) -> f64;

    fn margin(&self, y: &DVector<f64>) -> f64;

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError>;

    /// A strictly interior point used to seed samplers and Newton solves.
    fn reference_point(&self) -> DVector<f64>;

    /// True when the barrier is the logarithm of a hyperbolic polynomial
    /// (orthant and log-det families, their products and pullbacks).
    /// H-certificates are only accepted on such cones.
    fn hyperbolic(&self) -> bool {
        false
    }

    /// Exact gradient/Hessian at a rational point, when available.
    fn exact_eval(&self, _y: &[Rational]) -> Result<ExactEval, ExactError> {
        Err(ExactError::Unavailable(
            "barrier is not a rational function".into(),
        ))
    }

    /// Exact closed-cone membership at a rational point, when available.
    fn exact_member(&self, _y: &[Rational]) -> Result<bool, ExactError> {
        Err(ExactError::Unavailable("no exact membership test".into()))
    }

    /// Exact strict-interior test at a rational point, when available.
    fn exact_interior(&self, _y: &[Rational]) -> Result<bool, ExactError> {
        Err(ExactError::Unavailable("no exact interior test".into()))
    }

    /// The barrier parameter as an exact rational (an integer for every
    /// exact-capable cone in this crate).
    fn exact_nu(&self) -> Option<Rational> {
        None
    }

    fn is_interior(&self, y: &DVector<f64>) -> bool {
        let m = self.margin(y);
        m.is_finite() && m > 0.0
    }

    fn check_interior(&self, y: &DVector<f64>, context: &str) -> Result<(), ConeError> {
        if y.len() != self.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim(),
                got: y.len(),
            });
        }
        let margin = self.margin(y);
        if margin.is_finite() && margin > 0.0 {
            Ok(())
        } else {
            Err(ConeError::NotInterior {
                context: context.to_string(),
                margin,
            })
        }
    }
}

/// An interior point paired with the slack reported by the cone's test.
#[derive(Clone, Debug)]
pub struct InteriorPoint {
    pub coords: DVector<f64>,
    pub margin: f64,
}

impl InteriorPoint {
    pub fn new(oracle: &dyn BarrierOracle, coords: DVector<f64>) -> Result<Self, ConeError> {
        oracle.check_interior(&coords, "InteriorPoint::new")?;
        let margin = oracle.margin(&coords);
        Ok(Self { coords, margin })
    }
}

/// Barrier Hessian at a fixed center together with its Cholesky factor;
/// evaluates the primal local norm ||v||_y = sqrt(v' H v) and the dual
/// local norm ||v||*_y = sqrt(v' H^{-1} v).
pub struct LocalNormContext {
    pub center: DVector<f64>,
    pub hessian: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
}

impl LocalNormContext {
    pub fn new(oracle: &dyn BarrierOracle, center: &DVector<f64>) -> Result<Self, ConeError> {
        oracle.check_interior(center, "LocalNormContext::new")?;
        let eval = oracle.eval(center)?;
        Self::from_hessian(center.clone(), eval.hessian)
    }

    pub fn from_hessian(center: DVector<f64>, hessian: DMatrix<f64>) -> Result<Self, ConeError> {
        let chol = Cholesky::new(hessian.clone()).ok_or(ConeError::FactorizationFailed)?;
        Ok(Self {
            center,
            hessian,
            chol,
        })
    }

    fn check_dim(&self, v: &DVector<f64>) -> Result<(), ConeError> {
        if v.len() != self.center.len() {
            return Err(ConeError::DimensionMismatch {
                expected: self.center.len(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// sqrt(v' H(center) v)
    pub fn local_norm(&self, v: &DVector<f64>) -> Result<f64, ConeError> {
        self.check_dim(v)?;
        Ok((v.dot(&(&self.hessian * v))).max(0.0).sqrt())
    }

    /// sqrt(v' H(center)^{-1} v), via the stored factorization.
    pub fn dual_local_norm(&self, v: &DVector<f64>) -> Result<f64, ConeError> {
        self.check_dim(v)?;
        let hinv_v = self.chol.solve(v);
        Ok(v.dot(&hinv_v).max(0.0).sqrt())
    }

    /// H(center)^{-1} v
    pub fn solve(&self, v: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(v)
    }

    /// Whether `point` lies in the open Dikin ball of the given radius
    /// around the center (dual ball when `dual` is set).
    pub fn dikin_contains(
        &self,
        point: &DVector<f64>,
        radius: f64,
        dual: bool,
    ) -> Result<bool, ConeError> {
        self.check_dim(point)?;
        let diff = point - &self.center;
        let norm = if dual {
            self.dual_local_norm(&diff)?
        } else {
            self.local_norm(&diff)?
        };
        Ok(norm < radius)
    }

    /// Relative Frobenius error of reassembling H from its factor.
    pub fn factorization_error(&self) -> f64 {
        let l = self.chol.l();
        let reassembled = &l * l.transpose();
        (&reassembled - &self.hessian).norm() / self.hessian.norm().max(1.0)
    }
}

/// Maximum relative violations of the LHSCB identities over sampled
/// interior points. Tolerances follow the standard double-precision
/// finite-difference tradeoff at step 1e-6.
#[derive(Clone, Debug)]
pub struct SelfcheckReport {
    pub samples: usize,
    pub grad_fd_err: f64,
    pub hess_fd_err: f64,
    pub identity_err: f64,
    pub nu_err: f64,
    pub homogeneity_err: f64,
}

pub const GRAD_FD_TOL: f64 = 1e-4;
pub const HESS_FD_TOL: f64 = 1e-3;
pub const IDENTITY_TOL: f64 = 1e-8;
pub const NU_TOL: f64 = 1e-8;
pub const HOMOGENEITY_TOL: f64 = 1e-8;

impl SelfcheckReport {
    pub fn passed(&self) -> bool {
        self.grad_fd_err <= GRAD_FD_TOL
            && self.hess_fd_err <= HESS_FD_TOL
            && self.identity_err <= IDENTITY_TOL
            && self.nu_err <= NU_TOL
            && self.homogeneity_err <= HOMOGENEITY_TOL
    }
}

impl std::fmt::Display for SelfcheckReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "samples={} grad_fd={:.2e} hess_fd={:.2e} Hy+g={:.2e} y'Hy-nu={:.2e} homog={:.2e} => {}",
            self.samples,
            self.grad_fd_err,
            self.hess_fd_err,
            self.identity_err,
            self.nu_err,
            self.homogeneity_err,
            if self.passed() { "ok" } else { "VIOLATED" }
        )
    }
}

/// Draws interior points as Dikin-ball perturbations of the oracle's
/// reference point (radius < 1 stays strictly interior for any
/// self-concordant barrier), with a random positive rescaling on top.
/// The radius cap keeps samples away from the boundary, where fixed-step
/// finite differences would lose accuracy.
pub fn sample_interior(
    oracle: &dyn BarrierOracle,
    count: usize,
    seed: u64,
) -> Result<Vec<DVector<f64>>, ConeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = oracle.reference_point();
    let ctx = LocalNormContext::new(oracle, &base)?;
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let dir = DVector::from_fn(oracle.dim(), |_, _| rng.gen_range(-1.0..1.0));
        let norm = ctx.local_norm(&dir)?;
        let mut point = if norm > 0.0 {
            let radius: f64 = rng.gen_range(0.05..0.8);
            &base + dir * (radius / norm)
        } else {
            base.clone()
        };
        point *= rng.gen_range(0.5..2.0);
        oracle.check_interior(&point, "sample_interior")?;
        out.push(point);
    }
    Ok(out)
}

/// Runs every LHSCB identity at `samples` random interior points and
/// reports the worst relative violation of each.
pub fn lhscb_selfcheck(
    oracle: &dyn BarrierOracle,
    samples: usize,
    seed: u64,
) -> Result<SelfcheckReport, ConeError> {
    let mut report = SelfcheckReport {
        samples,
        grad_fd_err: 0.0,
        hess_fd_err: 0.0,
        identity_err: 0.0,
        nu_err: 0.0,
        homogeneity_err: 0.0,
    };
    let h = 1e-6;
    let points = sample_interior(oracle, samples, seed)?;
    for y in &points {
        let eval = oracle.eval(y)?;
        let gnorm = eval.gradient.amax().max(1.0);

        // Central-difference gradient from barrier values.
        let mut grad_err = 0.0f64;
        for i in 0..y.len() {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[i] += h;
            ym[i] -= h;
            let fp = oracle.eval(&yp)?.value;
            let fm = oracle.eval(&ym)?.value;
            let fd = (fp - fm) / (2.0 * h);
            grad_err = grad_err.max((fd - eval.gradient[i]).abs());
        }
        report.grad_fd_err = report.grad_fd_err.max(grad_err / gnorm);

        // Central-difference Hessian from gradients.
        let hnorm = eval.hessian.amax().max(1.0);
        let mut hess_err = 0.0f64;
        for j in 0..y.len() {
            let mut yp = y.clone();
            let mut ym = y.clone();
            yp[j] += h;
            ym[j] -= h;
            let gp = oracle.eval(&yp)?.gradient;
            let gm = oracle.eval(&ym)?.gradient;
            for i in 0..y.len() {
                let fd = (gp[i] - gm[i]) / (2.0 * h);
                hess_err = hess_err.max((fd - eval.hessian[(i, j)]).abs());
            }
        }
        report.hess_fd_err = report.hess_fd_err.max(hess_err / hnorm);

        // H(y) y = -g(y)
        let residual = (&eval.hessian * y + &eval.gradient).amax() / gnorm;
        report.identity_err = report.identity_err.max(residual);

        // y' H y = nu
        let quad = y.dot(&(&eval.hessian * y));
        report.nu_err = report.nu_err.max((quad - oracle.nu()).abs() / oracle.nu());

        // Degree -1 / -2 homogeneity of g and H.
        for t in [0.5, 2.0] {
            let scaled = oracle.eval(&(y * t))?;
            let ge = (&scaled.gradient - &eval.gradient / t).amax() / gnorm;
            let he = (&scaled.hessian - &eval.hessian / (t * t)).amax() / hnorm;
            report.homogeneity_err = report.homogeneity_err.max(ge.max(he));
        }
    }
    Ok(report)
}

/// Checks Renegar's radius-1 containment: points on a sphere of local-norm
/// radius < 1 around an interior center remain strictly interior. Returns
/// the number of sphere points that passed the interior test.
pub fn dikin_safety_count(
    oracle: &dyn BarrierOracle,
    center: &DVector<f64>,
    radius: f64,
    count: usize,
    seed: u64,
) -> Result<usize, ConeError> {
    let ctx = LocalNormContext::new(oracle, center)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pass = 0;
    for _ in 0..count {
        let dir = DVector::from_fn(oracle.dim(), |_, _| rng.gen_range(-1.0..1.0));
        let norm = ctx.local_norm(&dir)?;
        if norm == 0.0 {
            continue;
        }
        let point = center + dir * (radius / norm);
        if oracle.is_interior(&point) {
            pass += 1;
        }
    }
    Ok(pass)
}
