//! The standard logarithmic barrier `-sum ln y_i` for the nonnegative
//! orthant; the one cone where everything has a one-line closed form.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed};

use crate::cone::{BarrierEval, BarrierOracle, ConeError, ExactEval};
use crate::exact::{rat_int, ExactError, RatMatrix, Rational};

struct OrthantBarrier {
    n: usize,
}

impl BarrierOracle for OrthantBarrier {
    fn dim(&self) -> usize {
        self.n
    }

    fn nu(&self) -> f64 {
        self.n as f64
    }

    fn margin(&self, y: &DVector<f64>) -> f64 {
        y.min()
    }

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        self.check_interior(y, "orthant barrier")?;
        let value = -y.iter().map(|v| v.ln()).sum::<f64>();
        let gradient = DVector::from_fn(self.n, |i, _| -1.0 / y[i]);
        let hessian = DMatrix::from_fn(self.n, self.n, |i, j| {
            if i == j {
                1.0 / (y[i] * y[i])
            } else {
                0.0
            }
        });
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        DVector::repeat(self.n, 1.0)
    }

    fn hyperbolic(&self) -> bool {
        true
    }

    fn exact_eval(&self, y: &[Rational]) -> Result<ExactEval, ExactError> {
        if y.len() != self.n {
            return Err(ExactError::DimensionMismatch(format!(
                "expected {}, got {}",
                self.n,
                y.len()
            )));
        }
        if !y.iter().all(Signed::is_positive) {
            return Err(ExactError::Unavailable(
                "exact evaluation at a non-interior point".into(),
            ));
        }
        let gradient = y.iter().map(|v| -(Rational::one() / v)).collect();
        let mut hessian = RatMatrix::zeros(self.n, self.n);
        for (i, v) in y.iter().enumerate() {
            hessian[(i, i)] = Rational::one() / (v * v);
        }
        Ok(ExactEval { gradient, hessian })
    }

    fn exact_member(&self, y: &[Rational]) -> Result<bool, ExactError> {
        Ok(y.iter().all(|v| !v.is_negative()))
    }

    fn exact_interior(&self, y: &[Rational]) -> Result<bool, ExactError> {
        Ok(y.iter().all(Signed::is_positive))
    }

    fn exact_nu(&self) -> Option<Rational> {
        Some(rat_int(self.n as i64))
    }
}

pub fn orthant_oracle(n: usize) -> Arc<dyn BarrierOracle> {
    assert!(n >= 1, "orthant dimension must be positive");
    Arc::new(OrthantBarrier { n })
}
