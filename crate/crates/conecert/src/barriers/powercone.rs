//! The (r+1)-LHSCB for the generalized power cone
//! `P_lam = {(v, z) in R_+^r x R | |z| <= v^lam}`:
//!
//! ```text
//!   f(v, z) = -ln(v^{2 lam} - z^2) - sum_i (1 - lam_i) ln v_i
//! ```
//!
//! with `v^lam = prod v_i^{lam_i}`. Coordinates are laid out `(v_1..v_r, z)`.
//! The dual power cone `P*_lam = {(v,z) | |z| <= prod (v_i/lam_i)^{lam_i}}`
//! admits an exact rational membership test by clearing the exponents'
//! common denominator, which the SONC front-end relies on.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::cone::{BarrierEval, BarrierOracle, ConeError};
use crate::exact::{rat_to_f64, ExactError, Rational};

struct PowerConeBarrier {
    lambda: Vec<f64>,
}

impl PowerConeBarrier {
    fn r(&self) -> usize {
        self.lambda.len()
    }
}

fn power_product(lambda: &[f64], v: &[f64]) -> f64 {
    // prod v_i^{lam_i} via logs; callers guarantee v > 0.
    (lambda.iter().zip(v).map(|(l, vi)| l * vi.ln()).sum::<f64>()).exp()
}

impl BarrierOracle for PowerConeBarrier {
    fn dim(&self) -> usize {
        self.r() + 1
    }

    fn nu(&self) -> f64 {
        (self.r() + 1) as f64
    }

    fn margin(&self, y: &DVector<f64>) -> f64 {
        let r = self.r();
        let v = &y.as_slice()[..r];
        let z = y[r];
        let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if vmin < 0.0 {
            return vmin;
        }
        let p = if vmin == 0.0 {
            0.0
        } else {
            power_product(&self.lambda, v)
        };
        vmin.min(p - z.abs())
    }

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        self.check_interior(y, "power cone barrier")?;
        let r = self.r();
        let v = &y.as_slice()[..r];
        let z = y[r];
        let p2 = power_product(&self.lambda, v).powi(2);
        let phi = p2 - z * z;
        let value = -phi.ln()
            - self
                .lambda
                .iter()
                .zip(v)
                .map(|(l, vi)| (1.0 - l) * vi.ln())
                .sum::<f64>();

        // dphi/dv_i = 2 lam_i p2 / v_i, dphi/dz = -2z
        let mut dphi = vec![0.0; r + 1];
        for i in 0..r {
            dphi[i] = 2.0 * self.lambda[i] * p2 / v[i];
        }
        dphi[r] = -2.0 * z;

        let mut gradient = DVector::zeros(r + 1);
        for i in 0..r {
            gradient[i] = -dphi[i] / phi - (1.0 - self.lambda[i]) / v[i];
        }
        gradient[r] = 2.0 * z / phi;

        // H = dphi dphi^T / phi^2 - hess(phi)/phi + diag((1-lam_i)/v_i^2, 0)
        let mut hessian = DMatrix::zeros(r + 1, r + 1);
        for i in 0..=r {
            for j in 0..=r {
                hessian[(i, j)] = dphi[i] * dphi[j] / (phi * phi);
            }
        }
        for i in 0..r {
            for j in 0..r {
                let d2 = if i == j {
                    2.0 * self.lambda[i] * (2.0 * self.lambda[i] - 1.0) * p2 / (v[i] * v[i])
                } else {
                    4.0 * self.lambda[i] * self.lambda[j] * p2 / (v[i] * v[j])
                };
                hessian[(i, j)] -= d2 / phi;
            }
            hessian[(i, i)] += (1.0 - self.lambda[i]) / (v[i] * v[i]);
        }
        hessian[(r, r)] -= -2.0 / phi;
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        let mut p = DVector::repeat(self.r() + 1, 1.0);
        p[self.r()] = 0.0;
        p
    }
}

/// Validates the signature and builds the barrier.
pub fn powercone_oracle(lambda: Vec<Rational>) -> Result<Arc<dyn BarrierOracle>, ConeError> {
    if lambda.is_empty() {
        return Err(ConeError::InvalidSpec("power cone needs weights".into()));
    }
    let one = Rational::one();
    let sum: Rational = lambda.iter().cloned().sum();
    if sum != one {
        return Err(ConeError::InvalidSpec(
            "power cone weights must sum to one".into(),
        ));
    }
    if lambda.iter().any(|l| !l.is_positive() || *l >= one) {
        return Err(ConeError::InvalidSpec(
            "power cone weights must lie strictly in (0, 1)".into(),
        ));
    }
    Ok(Arc::new(PowerConeBarrier {
        lambda: lambda.iter().map(rat_to_f64).collect(),
    }))
}

/// Membership margin of `(v, z)` in the dual power cone
/// `P*_lam = {(v,z) | v >= 0, |z| <= prod (v_i/lam_i)^{lam_i}}`.
pub fn power_dual_margin(lambda: &[f64], y: &DVector<f64>) -> f64 {
    let r = lambda.len();
    let v = &y.as_slice()[..r];
    let z = y[r];
    let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    if vmin < 0.0 {
        return vmin;
    }
    let p = if vmin == 0.0 {
        0.0
    } else {
        (lambda
            .iter()
            .zip(v)
            .map(|(l, vi)| l * (vi / l).ln())
            .sum::<f64>())
        .exp()
    };
    vmin.min(p - z.abs())
}

/// Exact membership of rational `(v, z)` in `P*_lam` for a rational
/// signature: with `lam_i = p_i/q` over a common denominator `q`,
///
/// ```text
///   |z| <= prod (v_i/lam_i)^{lam_i}
///     <=>  |z|^q prod lam_i^{p_i} <= prod v_i^{p_i}
/// ```
///
/// which is a comparison of two rationals.
pub fn power_dual_member_exact(lambda: &[Rational], y: &[Rational]) -> Result<bool, ExactError> {
    let r = lambda.len();
    if y.len() != r + 1 {
        return Err(ExactError::DimensionMismatch(format!(
            "expected {}, got {}",
            r + 1,
            y.len()
        )));
    }
    let v = &y[..r];
    let z = &y[r];
    if v.iter().any(Signed::is_negative) {
        return Ok(false);
    }
    if v.iter().any(Zero::is_zero) {
        return Ok(z.is_zero());
    }
    let q = lambda
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, l| acc.lcm(l.denom()));
    let exps: Vec<u32> = lambda
        .iter()
        .map(|l| {
            let p = l.numer() * (&q / l.denom());
            p.to_u32().ok_or(ExactError::Unavailable(
                "power cone exponent too large for exact test".into(),
            ))
        })
        .collect::<Result<_, _>>()?;
    let q_u = q
        .to_u32()
        .ok_or(ExactError::Unavailable("denominator too large".into()))?;
    let mut lhs = z.abs().pow(q_u as i32);
    let mut rhs = Rational::one();
    for (i, e) in exps.iter().enumerate() {
        lhs *= lambda[i].pow(*e as i32);
        rhs *= v[i].pow(*e as i32);
    }
    Ok(lhs <= rhs)
}
