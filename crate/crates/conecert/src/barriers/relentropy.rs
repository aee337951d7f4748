//! The (3N)-LHSCB for the dual of the vector relative entropy cone,
//!
//! ```text
//!   R_N* = cl{(u,v,w) in R_{++} x R_{++}^N x R^N | w_i >= u (ln(u/v_i) - 1)},
//!   f(u,v,w) = -sum_i ln(w_i - u ln(u/v_i) + u) - N ln u - sum_i ln v_i.
//! ```
//!
//! Coordinates are laid out `(u, v_1..v_N, w_1..w_N)`. The primal cone
//! `R_N = cl{(u,v,w) | u >= sum v_i ln(v_i/w_i), v, w > 0}` is the home of
//! the AM/GM conditions used by the odd-AG front-end.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::cone::{BarrierEval, BarrierOracle, ConeError};

struct RelEntropyDualBarrier {
    n: usize,
}

impl BarrierOracle for RelEntropyDualBarrier {
    fn dim(&self) -> usize {
        2 * self.n + 1
    }

    fn nu(&self) -> f64 {
        3.0 * self.n as f64
    }

    fn margin(&self, y: &DVector<f64>) -> f64 {
        let n = self.n;
        let u = y[0];
        let v = &y.as_slice()[1..=n];
        let w = &y.as_slice()[n + 1..];
        if u < 0.0 {
            return u;
        }
        let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
        if u == 0.0 {
            let wmin = w.iter().cloned().fold(f64::INFINITY, f64::min);
            return vmin.min(wmin).min(0.0);
        }
        if vmin <= 0.0 {
            return if vmin < 0.0 { vmin } else { f64::NEG_INFINITY };
        }
        let smin = (0..n)
            .map(|i| w[i] - u * (u / v[i]).ln() + u)
            .fold(f64::INFINITY, f64::min);
        u.min(vmin).min(smin)
    }

    fn eval(&self, y: &DVector<f64>) -> Result<BarrierEval, ConeError> {
        self.check_interior(y, "relative entropy dual barrier")?;
        let n = self.n;
        let u = y[0];
        let v = &y.as_slice()[1..=n];
        let w = &y.as_slice()[n + 1..];
        let s: Vec<f64> = (0..n).map(|i| w[i] - u * (u / v[i]).ln() + u).collect();
        let value = -s.iter().map(|si| si.ln()).sum::<f64>()
            - (n as f64) * u.ln()
            - v.iter().map(|vi| vi.ln()).sum::<f64>();

        let dim = self.dim();
        let mut gradient = DVector::zeros(dim);
        let mut hessian = DMatrix::zeros(dim, dim);
        // Per-term slack s_i = w_i - u ln(u/v_i) + u with
        //   ds/du = -ln(u/v_i), ds/dv_i = u/v_i, ds/dw_i = 1,
        //   d2s/du2 = -1/u, d2s/dudv_i = 1/v_i, d2s/dv_i2 = -u/v_i^2.
        for i in 0..n {
            let li = (u / v[i]).ln();
            let si = s[i];
            let iv = 1 + i;
            let iw = 1 + n + i;
            gradient[0] += li / si;
            gradient[iv] = -(u / v[i]) / si - 1.0 / v[i];
            gradient[iw] = -1.0 / si;

            let du = -li;
            let dv = u / v[i];
            let dw = 1.0;
            let s2 = si * si;
            hessian[(0, 0)] += du * du / s2 + (1.0 / u) / si;
            hessian[(0, iv)] += du * dv / s2 - (1.0 / v[i]) / si;
            hessian[(iv, 0)] = hessian[(0, iv)];
            hessian[(0, iw)] += du * dw / s2;
            hessian[(iw, 0)] = hessian[(0, iw)];
            hessian[(iv, iv)] = dv * dv / s2 + (u / (v[i] * v[i])) / si + 1.0 / (v[i] * v[i]);
            hessian[(iv, iw)] = dv * dw / s2;
            hessian[(iw, iv)] = hessian[(iv, iw)];
            hessian[(iw, iw)] = dw * dw / s2;
        }
        gradient[0] -= n as f64 / u;
        hessian[(0, 0)] += n as f64 / (u * u);
        Ok(BarrierEval {
            value,
            gradient,
            hessian,
        })
    }

    fn reference_point(&self) -> DVector<f64> {
        DVector::repeat(self.dim(), 1.0)
    }
}

pub fn relentropy_dual_oracle(n: usize) -> Arc<dyn BarrierOracle> {
    assert!(n >= 1, "relative entropy cone needs at least one term");
    Arc::new(RelEntropyDualBarrier { n })
}

/// Membership margin of `(u, v, w)` in the primal relative entropy cone
/// `R_N = cl{(u,v,w) | u >= sum_i v_i ln(v_i/w_i), v, w > 0}` (with the
/// convention `0 ln(0/w) = 0`).
pub fn relentropy_primal_margin(n: usize, x: &DVector<f64>) -> f64 {
    let u = x[0];
    let v = &x.as_slice()[1..=n];
    let w = &x.as_slice()[n + 1..];
    let vmin = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let wmin = w.iter().cloned().fold(f64::INFINITY, f64::min);
    if vmin < 0.0 || wmin < 0.0 {
        return vmin.min(wmin);
    }
    let mut entropy = 0.0;
    for i in 0..n {
        if v[i] == 0.0 {
            continue;
        }
        if w[i] == 0.0 {
            return f64::NEG_INFINITY;
        }
        entropy += v[i] * (v[i] / w[i]).ln();
    }
    (u - entropy).min(vmin).min(wmin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::lhscb_selfcheck;

    #[test]
    fn slack_examples() {
        let oracle = relentropy_dual_oracle(1);
        // (1, 1, 1): slack = 1 - 0 + 1 = 2.
        let p = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        assert!((oracle.margin(&p) - 1.0).abs() < 1e-12); // min(u, v, s) = 1
        assert!(oracle.is_interior(&p));
        // (1, 1, -1): slack = -1 - 0 + 1 = 0, boundary.
        let b = DVector::from_vec(vec![1.0, 1.0, -1.0]);
        assert_eq!(oracle.margin(&b), 0.0);
        assert!(!oracle.is_interior(&b));
    }

    #[test]
    fn two_term_point_from_slacks() {
        let oracle = relentropy_dual_oracle(2);
        // (u, v, w) = (1, (1, e), (0, 0)): slacks (1, 2).
        let p = DVector::from_vec(vec![1.0, 1.0, std::f64::consts::E, 0.0, 0.0]);
        let e = oracle.eval(&p).unwrap();
        assert!(e.value.is_finite());
        let s2 = 0.0 - 1.0 * (1.0 / std::f64::consts::E).ln() + 1.0;
        assert!((s2 - 2.0).abs() < 1e-12);
        assert_eq!(oracle.nu(), 6.0);
    }

    #[test]
    fn selfcheck() {
        for n in [1usize, 2] {
            let oracle = relentropy_dual_oracle(n);
            let report = lhscb_selfcheck(&*oracle, 40, 5).unwrap();
            assert!(report.passed(), "n={n}: {report}");
        }
    }

    #[test]
    fn primal_margin() {
        // (u, v, w) = (0, 1, 1): entropy = 0, margin 0 (boundary of R_1).
        let x = DVector::from_vec(vec![0.0, 1.0, 1.0]);
        assert_eq!(relentropy_primal_margin(1, &x), 0.0);
        // u = 1 gives slack 1.
        let x2 = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        assert_eq!(relentropy_primal_margin(1, &x2), 1.0);
        // v ln(v/w) = 2 ln 2 > 1 at v=2, w=1, u=1: outside.
        let x3 = DVector::from_vec(vec![1.0, 2.0, 1.0]);
        assert!(relentropy_primal_margin(1, &x3) < 0.0);
    }
}
