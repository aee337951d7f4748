//! Odd-AG functions: `p = sum_a c_a |x|^a + d x^beta` with nonnegative
//! `c` and a single odd term. Nonnegativity is equivalent to the
//! existence of balanced weights `nu >= 0` with
//!
//! ```text
//!   sum_a nu_a a = (sum_a nu_a) beta,   (d, nu, e c) in R_N,   (-d, nu, e c) in R_N,
//! ```
//!
//! where `R_N` is the vector relative entropy cone and `e = exp(1)`.
//! Because the entropy condition is symmetric in the sign of `d`, both
//! memberships reduce to `sum nu_a ln(nu_a/(e c_a)) <= -|d|`, and the best
//! attainable left side over balanced `nu` is `-min_mu sum_a c_a
//! e^{<mu, a - beta>}` with minimizer `nu_a = c_a e^{<mu, a - beta>}`
//! (the AM/GM dual). The front-end finds `mu` by Newton, projects the
//! weights exactly onto the balance subspace, and certifies the two
//! entropy memberships with B-certificates on the plain cone `R_N`
//! through the ordinary membership solver.

use nalgebra::{DMatrix, DVector};
use num_traits::{Signed, Zero};

use super::{PolyError, PolySpec};
use crate::barriers::ConeSpec;
use crate::certify::CertKind;
use crate::exact::{
    dot, nullspace, rat_to_f64, rational_solve, snap_vec, vec_to_f64, RatMatrix, RatVec, Rational,
};
use crate::ipa::{solve_membership, MembershipProblem, SolveReport, SolveStatus, SolverConfig};

/// The data of an odd-AG nonnegativity question.
pub struct OddAgProblem {
    pub nvars: usize,
    /// Even-support exponents (the set `A`), paired with `c`.
    pub exponents: Vec<Vec<u32>>,
    pub c: RatVec,
    /// The odd exponent; `None` when `p` has no odd term (then `d = 0`
    /// and nonnegativity is trivial).
    pub beta: Option<Vec<u32>>,
    pub d: Rational,
    /// Exact basis of the balance subspace `{nu | sum nu_a (a - beta) = 0}`
    /// as columns.
    balance_basis: Vec<RatVec>,
}

/// Certified odd-AG membership: exact balanced weights plus B-certificates
/// of the two relative-entropy memberships.
pub struct OddAgCertificate {
    pub nu: RatVec,
    pub slack_plus: f64,
    pub slack_minus: f64,
    pub report_plus: Option<SolveReport>,
    pub report_minus: Option<SolveReport>,
    pub status: SolveStatus,
}

pub fn build_odd_ag(p: &PolySpec) -> Result<OddAgProblem, PolyError> {
    let n = p.nvars();
    let mut exponents = Vec::new();
    let mut c = Vec::new();
    let mut odd: Vec<(Vec<u32>, Rational)> = Vec::new();
    for (exp, coeff) in p.terms() {
        if super::circuits::is_even(exp) {
            if coeff.is_negative() {
                return Err(PolyError::UnsupportedShape(format!(
                    "even coefficient at {exp:?} is negative; not an odd-AG function"
                )));
            }
            exponents.push(exp.clone());
            c.push(coeff.clone());
        } else {
            odd.push((exp.clone(), coeff.clone()));
        }
    }
    if odd.len() > 1 {
        return Err(PolyError::UnsupportedShape(format!(
            "{} odd terms; odd-AG functions have at most one (decompose upstream)",
            odd.len()
        )));
    }
    if exponents.is_empty() {
        return Err(PolyError::UnsupportedShape(
            "no even terms to dominate the odd one".into(),
        ));
    }
    let (beta, d) = match odd.pop() {
        Some((b, d)) => (Some(b), d),
        None => (None, Rational::zero()),
    };
    let balance_basis = match &beta {
        Some(beta) => {
            let rows = RatMatrix::from_fn(n, exponents.len(), |j, k| {
                Rational::from_integer((exponents[k][j] as i64 - beta[j] as i64).into())
            });
            nullspace(&rows)
        }
        None => Vec::new(),
    };
    Ok(OddAgProblem {
        nvars: n,
        exponents,
        c,
        beta,
        d,
        balance_basis,
    })
}

impl OddAgProblem {
    /// `min_mu sum_a c'_a e^{<mu, a - beta>}` by damped Newton, with the
    /// constant coefficient shifted by `-alpha`. Returns the minimum and
    /// the minimizer. The largest `|d|` certifiable by a single AM/GM
    /// application equals this minimum.
    pub fn amgm_capacity(&self, alpha: f64) -> Option<(f64, DVector<f64>)> {
        let beta = self.beta.as_ref()?;
        let n = self.nvars;
        let diffs: Vec<DVector<f64>> = self
            .exponents
            .iter()
            .map(|a| {
                DVector::from_iterator(
                    n,
                    a.iter().zip(beta).map(|(&ai, &bi)| ai as f64 - bi as f64),
                )
            })
            .collect();
        let coeffs: Vec<f64> = self
            .c
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let mut v = rat_to_f64(c);
                if self.exponents[k].iter().all(|&e| e == 0) {
                    v -= alpha;
                }
                v
            })
            .collect();
        if coeffs.iter().any(|&v| v < 0.0) {
            return None;
        }
        let mut mu = DVector::zeros(n);
        for _ in 0..200 {
            let weights: Vec<f64> = diffs
                .iter()
                .zip(&coeffs)
                .map(|(diff, &ck)| ck * diff.dot(&mu).exp())
                .collect();
            let g: f64 = weights.iter().sum();
            let mut grad = DVector::zeros(n);
            let mut hess = DMatrix::zeros(n, n);
            for (diff, &wk) in diffs.iter().zip(&weights) {
                grad += diff * wk;
                hess += diff * diff.transpose() * wk;
            }
            for i in 0..n {
                hess[(i, i)] += 1e-12 * g.max(1.0);
            }
            if grad.amax() <= 1e-13 * g.max(1.0) {
                return Some((g, mu));
            }
            let step = hess.lu().solve(&(-&grad))?;
            let mut t = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let cand = &mu + &step * t;
                let g_new: f64 = diffs
                    .iter()
                    .zip(&coeffs)
                    .map(|(diff, &ck)| ck * diff.dot(&cand).exp())
                    .sum();
                if g_new <= g {
                    mu = cand;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if !accepted {
                let g: f64 = diffs
                    .iter()
                    .zip(&coeffs)
                    .map(|(diff, &ck)| ck * diff.dot(&mu).exp())
                    .sum();
                return Some((g, mu));
            }
        }
        let g: f64 = diffs
            .iter()
            .zip(&coeffs)
            .map(|(diff, &ck)| ck * diff.dot(&mu).exp())
            .sum();
        Some((g, mu))
    }

    /// Projects a weight vector exactly onto the balance subspace.
    fn project_balanced(&self, nu: &RatVec) -> Option<RatVec> {
        if self.balance_basis.is_empty() {
            return None;
        }
        let k = self.balance_basis.len();
        let n = nu.len();
        let v = RatMatrix::from_fn(n, k, |i, j| self.balance_basis[j][i].clone());
        let vt = v.transpose();
        let gram = vt.mul(&v);
        let rhs = vt.mul_vec(nu);
        let coeffs = rational_solve(&gram, &rhs).ok()?;
        Some(v.mul_vec(&coeffs))
    }

    /// Certifies `p >= 0` (for the stored `d`): finds balanced weights,
    /// then B-certifies `(d, nu, ec)` and `(-d, nu, ec)` in the relative
    /// entropy cone through the membership solver. A `|d|` at or beyond
    /// the AM/GM capacity comes back `Inconclusive`.
    pub fn certify(&self, config: &SolverConfig) -> Result<OddAgCertificate, PolyError> {
        if self.beta.is_none() || self.d.is_zero() {
            // Sum of nonnegative terms; nothing to dominate.
            return Ok(OddAgCertificate {
                nu: vec![Rational::zero(); self.exponents.len()],
                slack_plus: f64::INFINITY,
                slack_minus: f64::INFINITY,
                report_plus: None,
                report_minus: None,
                status: SolveStatus::CertifiedMember,
            });
        }
        let d_abs = rat_to_f64(&self.d).abs();
        let Some((capacity, mu)) = self.amgm_capacity(0.0) else {
            return Err(PolyError::UnsupportedShape(
                "AM/GM capacity solve failed".into(),
            ));
        };
        let inconclusive = |nu: RatVec| OddAgCertificate {
            nu,
            slack_plus: f64::NEG_INFINITY,
            slack_minus: f64::NEG_INFINITY,
            report_plus: None,
            report_minus: None,
            status: SolveStatus::Inconclusive,
        };
        if d_abs >= capacity {
            return Ok(inconclusive(Vec::new()));
        }
        // nu_a = c_a e^{<mu, a - beta>}, snapped and re-balanced exactly.
        let beta = self.beta.as_ref().unwrap();
        let nu_float = DVector::from_iterator(
            self.exponents.len(),
            self.exponents.iter().zip(&self.c).map(|(a, c)| {
                let diff = DVector::from_iterator(
                    self.nvars,
                    a.iter().zip(beta).map(|(&ai, &bi)| ai as f64 - bi as f64),
                );
                rat_to_f64(c) * diff.dot(&mu).exp()
            }),
        );
        let snapped = snap_vec(&nu_float, config.snap_denominator_cap);
        let Some(nu) = self.project_balanced(&snapped) else {
            return Ok(inconclusive(snapped));
        };
        if nu.iter().any(|v| !v.is_positive()) {
            return Ok(inconclusive(nu));
        }

        // Entropy slacks of (±d, nu, e c).
        let e = std::f64::consts::E;
        let nu_f = vec_to_f64(&nu);
        let entropy: f64 = (0..nu.len())
            .map(|i| nu_f[i] * (nu_f[i] / (e * rat_to_f64(&self.c[i]))).ln())
            .sum();
        let slack_plus = rat_to_f64(&self.d) - entropy;
        let slack_minus = -rat_to_f64(&self.d) - entropy;
        if slack_plus <= 0.0 || slack_minus <= 0.0 {
            return Ok(inconclusive(nu));
        }

        // B-certificates for the two entropy memberships on the plain
        // cone R_N. The framework needs a barrier for the dual of R_N
        // under the *standard* pairing; the (3N)-LHSCB formula is stated
        // in coordinates with the v and w blocks exchanged (pairing
        // <(u,v,w),(u',v',w')> = u u' + v.w' + w.v'), so the barrier is
        // pulled back through that swap permutation.
        let n_terms = nu.len();
        let oracle = swapped_entropy_dual_oracle(n_terms)?;
        let run = |sign: f64| -> Result<SolveReport, PolyError> {
            let mut b = DVector::zeros(2 * n_terms + 1);
            b[0] = sign * rat_to_f64(&self.d);
            for i in 0..n_terms {
                b[1 + i] = nu_f[i];
                b[1 + n_terms + i] = e * rat_to_f64(&self.c[i]);
            }
            let problem = MembershipProblem::new(oracle.clone(), b, None)?;
            let mut cfg = config.clone();
            cfg.mode = CertKind::B;
            cfg.early_stop = true;
            Ok(solve_membership(&problem, &cfg)?)
        };
        let report_plus = run(1.0)?;
        let report_minus = run(-1.0)?;
        let status = if report_plus.status == SolveStatus::CertifiedMember
            && report_minus.status == SolveStatus::CertifiedMember
        {
            SolveStatus::CertifiedMember
        } else {
            SolveStatus::Inconclusive
        };
        Ok(OddAgCertificate {
            nu,
            slack_plus,
            slack_minus,
            report_plus: Some(report_plus),
            report_minus: Some(report_minus),
            status,
        })
    }

    /// `sup { alpha | p - alpha is odd-AG nonnegative }` by bisection on
    /// the AM/GM capacity (monotone in the constant coefficient), then a
    /// full certification at a hair below the boundary. Requires the
    /// constant monomial in the support.
    pub fn lower_bound(&self, config: &SolverConfig) -> Result<(f64, OddAgCertificate), PolyError> {
        let zero = vec![0u32; self.nvars];
        let c0_idx = self
            .exponents
            .iter()
            .position(|e| *e == zero)
            .ok_or_else(|| PolyError::Config("constant monomial not in the AG support".into()))?;
        let c0 = rat_to_f64(&self.c[c0_idx]);
        if self.beta.is_none() || self.d.is_zero() {
            // p - alpha stays a sum of nonnegative terms iff alpha <= c0.
            let shifted = self.shifted(&snap_to_rational_guard(c0, config));
            let cert = shifted.certify(config)?;
            return Ok((c0, cert));
        }
        let d_abs = rat_to_f64(&self.d).abs();
        let capacity_at = |alpha: f64| self.amgm_capacity(alpha).map(|(g, _)| g);
        // h(alpha) = capacity - |d| is decreasing in alpha; bracket then bisect.
        let mut hi = c0;
        let h_hi = capacity_at(hi).map_or(-1.0, |g| g - d_abs);
        if h_hi > 0.0 {
            let alpha = hi;
            let shifted = self.shifted(&snap_to_rational_guard(alpha, config));
            let cert = shifted.certify(config)?;
            return Ok((alpha, cert));
        }
        let mut lo = hi - 1.0;
        let mut width = 1.0;
        while capacity_at(lo).map_or(-1.0, |g| g - d_abs) < 0.0 {
            width *= 2.0;
            lo -= width;
            if lo < -1e12 {
                return Err(PolyError::Config(
                    "odd-AG lower bound bracket failed".into(),
                ));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if capacity_at(mid).map_or(-1.0, |g| g - d_abs) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-12 * hi.abs().max(1.0) {
                break;
            }
        }
        // Certify strictly inside the boundary, backing off as little as
        // the margin search allows.
        for backoff_exp in [-7, -6, -5, -4] {
            let alpha = lo - 10f64.powi(backoff_exp) * lo.abs().max(1.0);
            let shifted = self.shifted(&snap_to_rational_guard(alpha, config));
            let cert = shifted.certify(config)?;
            if cert.status == SolveStatus::CertifiedMember {
                return Ok((alpha, cert));
            }
        }
        let alpha = lo - 1e-3 * lo.abs().max(1.0);
        let shifted = self.shifted(&snap_to_rational_guard(alpha, config));
        let cert = shifted.certify(config)?;
        Ok((alpha, cert))
    }

    fn shifted(&self, alpha: &Rational) -> OddAgProblem {
        let zero = vec![0u32; self.nvars];
        let mut c = self.c.clone();
        for (e, coeff) in self.exponents.iter().zip(c.iter_mut()) {
            if *e == zero {
                *coeff -= alpha;
            }
        }
        OddAgProblem {
            nvars: self.nvars,
            exponents: self.exponents.clone(),
            c,
            beta: self.beta.clone(),
            d: self.d.clone(),
            balance_basis: self.balance_basis.clone(),
        }
    }

    /// The polynomial this problem certifies (exactly).
    pub fn to_poly(&self) -> PolySpec {
        let mut p = PolySpec::new(self.nvars);
        for (e, c) in self.exponents.iter().zip(&self.c) {
            p.add_term(e.clone(), c.clone());
        }
        if let Some(beta) = &self.beta {
            p.add_term(beta.clone(), self.d.clone());
        }
        p
    }

    /// Exact balance residual of a weight vector, for verification.
    pub fn balance_residual(&self, nu: &RatVec) -> RatVec {
        let Some(beta) = &self.beta else {
            return Vec::new();
        };
        (0..self.nvars)
            .map(|j| {
                let coeffs: RatVec = self
                    .exponents
                    .iter()
                    .map(|a| Rational::from_integer((a[j] as i64 - beta[j] as i64).into()))
                    .collect();
                dot(&coeffs, nu)
            })
            .collect()
    }
}

fn snap_to_rational_guard(x: f64, config: &SolverConfig) -> Rational {
    crate::exact::snap_to_rational(x, config.snap_denominator_cap)
}

/// Barrier for the standard-pairing dual of `R_N`, obtained from the
/// relative-entropy-dual barrier by pulling back through the permutation
/// that exchanges the `v` and `w` blocks.
fn swapped_entropy_dual_oracle(
    n: usize,
) -> Result<std::sync::Arc<dyn crate::cone::BarrierOracle>, PolyError> {
    let dim = 2 * n + 1;
    let mut perm = RatMatrix::zeros(dim, dim);
    perm[(0, 0)] = Rational::from_integer(1.into());
    for i in 0..n {
        perm[(1 + i, 1 + n + i)] = Rational::from_integer(1.into());
        perm[(1 + n + i, 1 + i)] = Rational::from_integer(1.into());
    }
    let base = ConeSpec::RelEntropyDual { n }.oracle()?;
    let reference = DVector::repeat(dim, 1.0);
    Ok(crate::barriers::pullback_oracle(
        base,
        perm,
        Some(reference),
    )?)
}
