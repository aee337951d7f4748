//! The 3-LHSCB for the exponential cone
//! `E = cl{(x1,x2,x3) | x1 >= x2 exp(x3/x2), x2 > 0}`:
//!
//! ```text
//!   f(x) = -ln x1 - ln x2 - ln(x2 ln(x1/x2) - x3)
//! ```
//!
//! The barrier is transcendental, so there is no exact rational path; this
//! is also the classical cone on which H-certificates fail.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::cone::{BarrierEval, BarrierOracle, ConeError};

struct ExpConeBarrier;

fn psi(x: &DVector<f64>) -> f64 {
    x[1] * (x[0] / x[1]).ln() - x[2]
}

impl BarrierOracle for ExpConeBarrier {
    fn dim(&self) -> usize {
        3
    }

    fn nu(&self) -> f64 {
        3.0
    }

    fn margin(&self, x: &DVector<f64>) -> f64 {
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        if x2 < 0.0 {
            return x2;
        }
        if x2 == 0.0 {
            // Closure ray: x1 >= 0, x3 <= 0.
            return x1.min(-x3).min(0.0);
        }
        if x1 <= 0.0 {
            return if x1 < 0.0 { x1 } else { f64::NEG_INFINITY };
        }
        x1.min(x2).min(psi(x))
    }

    fn eval(&self, x: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        self.check_interior(x, "exp cone barrier")?;
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let l = (x1 / x2).ln();
        let p = x2 * l - x3;
        let value = -x1.ln() - x2.ln() - p.ln();

        // grad psi = (x2/x1, l - 1, -1)
        let g1 = -1.0 / x1 - (x2 / x1) / p;
        let g2 = -1.0 / x2 - (l - 1.0) / p;
        let g3 = 1.0 / p;
        let gradient = DVector::from_vec(vec![g1, g2, g3]);

        // H = (grad psi)(grad psi)^T / p^2 - (hess psi)/p + diag(1/x1^2, 1/x2^2, 0)
        let dp = [x2 / x1, l - 1.0, -1.0];
        let mut hessian = DMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                hessian[(i, j)] = dp[i] * dp[j] / (p * p);
            }
        }
        // hess psi: [[-x2/x1^2, 1/x1, 0], [1/x1, -1/x2, 0], [0, 0, 0]]
        hessian[(0, 0)] += (x2 / (x1 * x1)) / p + 1.0 / (x1 * x1);
        hessian[(0, 1)] += -(1.0 / x1) / p;
        hessian[(1, 0)] += -(1.0 / x1) / p;
        hessian[(1, 1)] += (1.0 / x2) / p + 1.0 / (x2 * x2);
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        DVector::from_vec(vec![std::f64::consts::E, 1.0, 0.0])
    }
}

pub fn expcone_oracle() -> Arc<dyn BarrierOracle> {
    Arc::new(ExpConeBarrier)
}
