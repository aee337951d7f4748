//! Cartesian products of barriers: `f = sum f_i`, block-diagonal Hessian,
//! `nu = sum nu_i`.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::Zero;

use crate::cone::{BarrierEval, BarrierOracle, ConeError, ExactEval};
use crate::exact::{ExactError, RatMatrix, Rational};

struct ProductBarrier {
    parts: Vec<Arc<dyn BarrierOracle>>,
    offsets: Vec<usize>,
    dim: usize,
}

impl ProductBarrier {
    fn slice(&self, y: &DVector<f64>, i: usize) -> DVector<f64> {
        let off = self.offsets[i];
        let d = self.parts[i].dim();
        DVector::from_iterator(d, y.iter().skip(off).take(d).cloned())
    }
}

impl BarrierOracle for ProductBarrier {
    fn dim(&self) -> usize {
        self.dim
    }

    fn nu(&self) -> f64 {
        self.parts.iter().map(|p| p.nu()).sum()
    }

    fn margin(&self, y: &DVector<f64>) -> f64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, p)| p.margin(&self.slice(y, i)))
            .fold(f64::INFINITY, f64::min)
    }

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        if y.len() != self.dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim,
                got: y.len(),
            });
        }
        let mut value = 0.0;
        let mut gradient = DVector::zeros(self.dim);
        let mut hessian = DMatrix::zeros(self.dim, self.dim);
        for (i, part) in self.parts.iter().enumerate() {
            let off = self.offsets[i];
            let d = part.dim();
            let block = self.slice(y, i);
            part.check_interior(&block, &format!("product block {i}"))?;
            let e = part.eval(&block)?;
            value += e.value;
            gradient.rows_mut(off, d).copy_from(&e.gradient);
            hessian.view_mut((off, off), (d, d)).copy_from(&e.hessian);
        }
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for (i, part) in self.parts.iter().enumerate() {
            out.rows_mut(self.offsets[i], part.dim())
                .copy_from(&part.reference_point());
        }
        out
    }

    fn hyperbolic(&self) -> bool {
        self.parts.iter().all(|p| p.hyperbolic())
    }

    fn exact_eval(&self, y: &[Rational]) -> Result<ExactEval, ExactError> {
        let mut gradient = Vec::with_capacity(self.dim);
        let mut hessian = RatMatrix::zeros(self.dim, self.dim);
        for (i, part) in self.parts.iter().enumerate() {
            let off = self.offsets[i];
            let d = part.dim();
            let e = part.exact_eval(&y[off..off + d])?;
            gradient.extend(e.gradient);
            for r in 0..d {
                for c in 0..d {
                    hessian[(off + r, off + c)] = e.hessian[(r, c)].clone();
                }
            }
        }
        Ok(ExactEval { gradient, hessian })
    }

    fn exact_member(&self, y: &[Rational]) -> Result<bool, ExactError> {
        for (i, part) in self.parts.iter().enumerate() {
            let off = self.offsets[i];
            if !part.exact_member(&y[off..off + part.dim()])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn exact_interior(&self, y: &[Rational]) -> Result<bool, ExactError> {
        for (i, part) in self.parts.iter().enumerate() {
            let off = self.offsets[i];
            if !part.exact_interior(&y[off..off + part.dim()])? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn exact_nu(&self) -> Option<Rational> {
        self.parts
            .iter()
            .map(|p| p.exact_nu())
            .try_fold(Rational::zero(), |acc, nu| nu.map(|n| acc + n))
    }
}

pub fn product_oracle(
    parts: Vec<Arc<dyn BarrierOracle>>,
) -> Result<Arc<dyn BarrierOracle>, ConeError> {
    if parts.is_empty() {
        return Err(ConeError::InvalidSpec("empty product cone".into()));
    }
    let mut offsets = Vec::with_capacity(parts.len());
    let mut dim = 0;
    for p in &parts {
        offsets.push(dim);
        dim += p.dim();
    }
    Ok(Arc::new(ProductBarrier {
        parts,
        offsets,
        dim,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::{expcone_oracle, orthant_oracle};

    #[test]
    fn product_of_orthants_is_orthant() {
        let p = product_oracle(vec![orthant_oracle(1), orthant_oracle(1)]).unwrap();
        let o2 = orthant_oracle(2);
        let y = DVector::from_vec(vec![0.7, 2.5]);
        let ep = p.eval(&y).unwrap();
        let eo = o2.eval(&y).unwrap();
        assert_eq!(ep.value, eo.value);
        assert_eq!(ep.gradient, eo.gradient);
        assert_eq!(ep.hessian, eo.hessian);
        assert_eq!(p.nu(), 2.0);
        assert!(p.hyperbolic());
    }

    #[test]
    fn nu_adds_and_hyperbolic_flag_drops() {
        let p = product_oracle(vec![orthant_oracle(2), expcone_oracle()]).unwrap();
        assert_eq!(p.nu(), 5.0);
        assert!(!p.hyperbolic());
    }

    #[test]
    fn block_hessian_matches_parts() {
        let parts = vec![orthant_oracle(2), expcone_oracle()];
        let p = product_oracle(parts.clone()).unwrap();
        let y = DVector::from_vec(vec![1.0, 2.0, 6.0, 2.0, -3.0]);
        let e = p.eval(&y).unwrap();
        let e0 = parts[0].eval(&DVector::from_vec(vec![1.0, 2.0])).unwrap();
        let e1 = parts[1]
            .eval(&DVector::from_vec(vec![6.0, 2.0, -3.0]))
            .unwrap();
        assert_eq!(e.hessian.view((0, 0), (2, 2)).clone_owned(), e0.hessian);
        assert_eq!(e.hessian.view((2, 2), (3, 3)).clone_owned(), e1.hessian);
        assert_eq!(e.hessian[(0, 3)], 0.0);
    }

    #[test]
    fn not_interior_reports_block() {
        let p = product_oracle(vec![orthant_oracle(1), orthant_oracle(1)]).unwrap();
        let err = p.eval(&DVector::from_vec(vec![1.0, -1.0])).unwrap_err();
        assert!(err.to_string().contains("block 1"), "{err}");
    }
}
