//! Construction and verification of dual membership certificates.
//!
//! For a cone `K` whose dual `K*` carries a nu-LHSCB with gradient `g` and
//! Hessian `H`, a point `y` in the interior of `K*` is
//!
//! - a *B-certificate* of `b` if `B(y)^{-1} b` lies in `K*`, where
//!   `B(y) = H(y) + g(y) g(y)^T`, and
//! - an *H-certificate* of `b` if `H(y)^{-1} b` lies in `K*`.
//!
//! A B-certificate proves `b in K` for every such cone. H-certificates
//! prove membership only when `K*` is a hyperbolicity cone with the
//! logarithmic barrier (orthant/log-det families); the exponential and
//! power cones are explicit counterexamples, so H-certificates are gated
//! behind the oracle's `hyperbolic()` flag.
//!
//! A rejected check is always *inconclusive*: certificates prove
//! membership, never non-membership.

use nalgebra::{DMatrix, DVector};
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cone::{BarrierOracle, ConeError, LocalNormContext};
use crate::exact::{dot, rational_solve, ExactError, RatVec, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertKind {
    B,
    H,
}

impl std::fmt::Display for CertKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CertKind::B => write!(f, "B"),
            CertKind::H => write!(f, "H"),
        }
    }
}

/// Result of an exact rational replay of a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactOutcome {
    Proven,
    Refuted,
    Skipped,
}

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("H-certificates are not valid for this cone (no hyperbolic barrier)")]
    HNotValidForCone,
    #[error("inconclusive: witness left the dual cone (margin {witness_margin:e}); this does not disprove membership")]
    Inconclusive { witness_margin: f64 },
    #[error("Newton did not reach the target residual in {iters} iterations (residual {residual:e}); inconclusive")]
    MaxIters { iters: usize, residual: f64 },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A verified dual certificate: `y` in the dual interior together with the
/// witness `B(y)^{-1} b` (or `H(y)^{-1} b`), which lies in the dual cone.
#[derive(Clone, Debug)]
pub struct DualCertificate {
    pub kind: CertKind,
    pub y: DVector<f64>,
    pub b: DVector<f64>,
    pub witness: DVector<f64>,
    pub y_margin: f64,
    pub witness_margin: f64,
    pub exact: Option<ExactOutcome>,
}

/// `B(y) = H(y) + g(y) g(y)^T`; positive definite at every dual-interior `y`.
pub fn build_b_matrix(
    oracle: &dyn BarrierOracle,
    y: &DVector<f64>,
) -> Result<DMatrix<f64>, CertifyError> {
    oracle.check_interior(y, "build_b_matrix")?;
    let eval = oracle.eval(y)?;
    Ok(&eval.hessian + &eval.gradient * eval.gradient.transpose())
}

/// `B(y)^{-1} b` by the Sherman-Morrison identity
/// `B(y)^{-1} = H(y)^{-1} - y y^T / (1 + nu)`, costing one Hessian solve.
pub fn apply_b_inverse(
    oracle: &dyn BarrierOracle,
    y: &DVector<f64>,
    b: &DVector<f64>,
) -> Result<DVector<f64>, CertifyError> {
    oracle.check_interior(y, "apply_b_inverse")?;
    let ctx = LocalNormContext::new(oracle, y)?;
    Ok(apply_b_inverse_ctx(&ctx, oracle.nu(), b))
}

pub(crate) fn apply_b_inverse_ctx(
    ctx: &LocalNormContext,
    nu: f64,
    b: &DVector<f64>,
) -> DVector<f64> {
    let hinv_b = ctx.solve(b);
    let scale = ctx.center.dot(b) / (1.0 + nu);
    hinv_b - &ctx.center * scale
}

/// Computes the witness for the requested kind and accepts iff it lies in
/// the closed dual cone (the oracle's own membership test). Acceptance
/// proves `b in K`; rejection is inconclusive.
pub fn check_certificate(
    oracle: &dyn BarrierOracle,
    y: &DVector<f64>,
    b: &DVector<f64>,
    kind: CertKind,
) -> Result<DualCertificate, CertifyError> {
    oracle.check_interior(y, "check_certificate")?;
    if kind == CertKind::H && !oracle.hyperbolic() {
        return Err(CertifyError::HNotValidForCone);
    }
    if b.len() != oracle.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: oracle.dim(),
            got: b.len(),
        }
        .into());
    }
    let ctx = LocalNormContext::new(oracle, y)?;
    let witness = match kind {
        CertKind::H => ctx.solve(b),
        CertKind::B => apply_b_inverse_ctx(&ctx, oracle.nu(), b),
    };
    let witness_margin = oracle.margin(&witness);
    if witness_margin >= 0.0 {
        Ok(DualCertificate {
            kind,
            y: y.clone(),
            b: b.clone(),
            witness,
            y_margin: oracle.margin(y),
            witness_margin,
            exact: None,
        })
    } else {
        Err(CertifyError::Inconclusive { witness_margin })
    }
}

/// Search report for the gradient certificate `y_b` with `-g(y_b) = b`.
#[derive(Clone, Debug)]
pub struct CertificateSearchReport {
    pub y_b: DVector<f64>,
    pub newton_iters: usize,
    pub final_residual: f64,
    pub certificate: DualCertificate,
}

/// Damped Newton minimization of `f(y) + b^T y`, whose unique minimizer is
/// the gradient certificate of `b` (it exists iff `b` is interior to `K`).
/// Steps are damped by `1/(1 + lambda)` above Newton decrement 1/4 and
/// full below, with interior backtracking. Non-convergence is reported as
/// inconclusive, never as a disproof.
pub fn gradient_certificate(
    oracle: &dyn BarrierOracle,
    b: &DVector<f64>,
    tol: f64,
    max_iters: usize,
) -> Result<CertificateSearchReport, CertifyError> {
    if b.len() != oracle.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: oracle.dim(),
            got: b.len(),
        }
        .into());
    }
    let mut y = oracle.reference_point();
    let mut residual = f64::INFINITY;
    let mut iters = 0;
    for iter in 0..max_iters {
        iters = iter;
        let ctx = LocalNormContext::new(oracle, &y)?;
        let eval = oracle.eval(&y)?;
        let grad = &eval.gradient + b;
        let step = -ctx.solve(&grad);
        residual = grad.dot(&-&step).max(0.0).sqrt();
        if residual <= tol {
            break;
        }
        let decrement = residual;
        let mut t = if decrement > 0.25 {
            1.0 / (1.0 + decrement)
        } else {
            1.0
        };
        let mut moved = false;
        for _ in 0..60 {
            let candidate = &y + &step * t;
            if oracle.is_interior(&candidate) {
                y = candidate;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if !moved {
            return Err(CertifyError::MaxIters {
                iters: iter,
                residual,
            });
        }
    }
    if residual > tol {
        return Err(CertifyError::MaxIters {
            iters: max_iters,
            residual,
        });
    }
    let certificate = check_certificate(oracle, &y, b, CertKind::B)?;
    Ok(CertificateSearchReport {
        y_b: y,
        newton_iters: iters,
        final_residual: residual,
        certificate,
    })
}

/// Sufficient H-certificate condition (not necessary): `y` certifies `b`
/// whenever `||-g(y) - b||*_y < 1`, i.e. `b` lies in the unit dual Dikin
/// ball around `-g(y)`.
pub fn dikin_sufficient_h(
    oracle: &dyn BarrierOracle,
    y: &DVector<f64>,
    b: &DVector<f64>,
) -> Result<bool, CertifyError> {
    oracle.check_interior(y, "dikin_sufficient_h")?;
    let ctx = LocalNormContext::new(oracle, y)?;
    let eval = oracle.eval(y)?;
    let diff = b + &eval.gradient;
    Ok(ctx.dual_local_norm(&diff)? < 1.0)
}

/// Sufficient B-certificate condition: `b` lies in the dual Dikin ball of
/// radius `r = 1/(2(nu+1))` around `-g(delta y)` for some `delta > 0`.
/// By homogeneity the squared distance is the explicit parabola
///
/// ```text
///   q(delta) = delta^2 ||b||*_y^2 - 2 delta b^T y + nu,
/// ```
///
/// so the delta-search minimizes it in closed form; without the search,
/// `delta = 1` is tested.
pub fn dikin_sufficient_b(
    oracle: &dyn BarrierOracle,
    y: &DVector<f64>,
    b: &DVector<f64>,
    delta_search: bool,
) -> Result<bool, CertifyError> {
    oracle.check_interior(y, "dikin_sufficient_b")?;
    let ctx = LocalNormContext::new(oracle, y)?;
    let nu = oracle.nu();
    let r2 = 1.0 / (2.0 * (nu + 1.0)).powi(2);
    let bnorm2 = ctx.dual_local_norm(b)?.powi(2);
    let bty = b.dot(y);
    let q = |delta: f64| delta * delta * bnorm2 - 2.0 * delta * bty + nu;
    if !delta_search {
        return Ok(q(1.0) < r2);
    }
    if bnorm2 == 0.0 {
        // b = 0: q -> nu as delta -> 0, never inside.
        return Ok(false);
    }
    let delta_star = bty / bnorm2;
    Ok(delta_star > 0.0 && q(delta_star) < r2)
}

/// Recomputes the witness in exact rational arithmetic (rational Hessian
/// solve; Sherman-Morrison for kind B) and replays the exact dual-cone
/// membership test.
pub fn exact_verify(
    oracle: &dyn BarrierOracle,
    y: &[Rational],
    b: &[Rational],
    kind: CertKind,
) -> Result<ExactOutcome, CertifyError> {
    if kind == CertKind::H && !oracle.hyperbolic() {
        return Err(CertifyError::HNotValidForCone);
    }
    if !oracle.exact_interior(y)? {
        return Ok(ExactOutcome::Refuted);
    }
    let witness = exact_witness(oracle, y, b, kind)?;
    Ok(if oracle.exact_member(&witness)? {
        ExactOutcome::Proven
    } else {
        ExactOutcome::Refuted
    })
}

pub fn exact_witness(
    oracle: &dyn BarrierOracle,
    y: &[Rational],
    b: &[Rational],
    kind: CertKind,
) -> Result<RatVec, ExactError> {
    let eval = oracle.exact_eval(y)?;
    let hinv_b = rational_solve(&eval.hessian, b)?;
    Ok(match kind {
        CertKind::H => hinv_b,
        CertKind::B => {
            let nu = oracle
                .exact_nu()
                .ok_or_else(|| ExactError::Unavailable("no exact barrier parameter".into()))?;
            let scale = dot(y, b) / (nu + Rational::one());
            hinv_b
                .iter()
                .zip(y)
                .map(|(h, yi)| h - &scale * yi)
                .collect()
        }
    })
}
