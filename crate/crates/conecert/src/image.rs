//! Linear images of cones, `K_A = {Ax | x in K}`, their duals
//! `K_A* = {y | A^T y in K*}` with the inherited pullback barrier, and the
//! reconstruction formulas that convert dual certificates into primal
//! witnesses:
//!
//! ```text
//!   x       = B(A^T y) A^T (A B(A^T y) A^T)^{-1} b          (membership)
//!   x_gamma = B(ups) A_c^T (A_c B(ups) A_c^T)^{-1} (gamma, -b)   (optimization)
//! ```
//!
//! with `A_c = [c^T; -A]` stacked and `ups = A_c^T (1, y)`. In rational
//! mode the reconstructed witness satisfies `A x = b` with exact equality
//! and its base-cone membership is checked exactly.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::barriers::{pullback_oracle, ConeSpec, RatScalar};
use crate::certify::{self, CertKind, CertifyError};
use crate::cone::{BarrierOracle, ConeError, LocalNormContext};
use crate::exact::{rational_solve, snap_vec, vec_to_f64, ExactError, RatMatrix, RatVec, Rational};

#[derive(Debug, Error)]
pub enum ImageError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error("not a valid {kind}-certificate on the image cone: {reason}")]
    NotCertificate { kind: CertKind, reason: String },
    #[error("(1, y) is not strictly interior in the stacked dual cone (margin {margin:e})")]
    NotDualFeasible { margin: f64 },
    #[error("stacked objective row is linearly dependent on the constraint rows")]
    RankDeficient,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// `K_A = {Ax | x in K}` where `K` is the dual of the `base` cone spec
/// (the spec names the barrier domain `K*`). Holds the pullback oracle
/// for `K_A*`; its construction verifies full row rank and a nonempty
/// dual interior.
pub struct ImageCone {
    pub base: ConeSpec,
    pub a: RatMatrix,
    pub a_f: DMatrix<f64>,
    base_oracle: Arc<dyn BarrierOracle>,
    dual_oracle: Arc<dyn BarrierOracle>,
}

/// Serialized form: `{base, a}` with rational entries.
#[derive(Serialize, Deserialize)]
pub struct ImageConeFile {
    pub base: ConeSpec,
    pub a: Vec<Vec<RatScalar>>,
}

impl ImageConeFile {
    pub fn from_cone(ic: &ImageCone) -> Self {
        Self {
            base: ic.base.clone(),
            a: (0..ic.a.nrows())
                .map(|i| ic.a.row(i).iter().cloned().map(RatScalar).collect())
                .collect(),
        }
    }

    pub fn build(&self, dual_hint: Option<DVector<f64>>) -> Result<ImageCone, ImageError> {
        let rows = self
            .a
            .iter()
            .map(|row| row.iter().map(|r| r.0.clone()).collect())
            .collect();
        ImageCone::new(self.base.clone(), RatMatrix::from_rows(rows), dual_hint)
    }
}

/// A primal witness `x` with `Ax = b`; `x_exact` is set in rational mode,
/// where the equality holds exactly and membership is checked exactly.
#[derive(Clone, Debug)]
pub struct PrimalWitness {
    pub x: DVector<f64>,
    pub x_exact: Option<RatVec>,
    pub residual: f64,
    pub base_margin: f64,
    pub exact_member: Option<bool>,
}

impl ImageCone {
    pub fn new(
        base: ConeSpec,
        a: RatMatrix,
        dual_hint: Option<DVector<f64>>,
    ) -> Result<Self, ImageError> {
        let base_oracle = base.oracle()?;
        let dual_oracle = pullback_oracle(base_oracle.clone(), a.clone(), dual_hint)?;
        let a_f = a.to_f64();
        Ok(Self {
            base,
            a,
            a_f,
            base_oracle,
            dual_oracle,
        })
    }

    /// The pullback barrier oracle for `K_A*`.
    pub fn dual_oracle(&self) -> Arc<dyn BarrierOracle> {
        self.dual_oracle.clone()
    }

    pub fn base_oracle(&self) -> Arc<dyn BarrierOracle> {
        self.base_oracle.clone()
    }

    pub fn image_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn base_dim(&self) -> usize {
        self.a.ncols()
    }

    /// Floating-point reconstruction. The pair `(y, b)` must pass the
    /// certificate check on the image cone; the reconstruction theorem
    /// then guarantees `x` lies in the base cone.
    pub fn reconstruct_primal(
        &self,
        y: &DVector<f64>,
        b: &DVector<f64>,
        kind: CertKind,
    ) -> Result<PrimalWitness, ImageError> {
        match certify::check_certificate(&*self.dual_oracle, y, b, kind) {
            Ok(_) => {}
            Err(CertifyError::HNotValidForCone) => {
                return Err(ImageError::NotCertificate {
                    kind,
                    reason: "H-certificates are invalid on this cone".into(),
                })
            }
            Err(e) => {
                return Err(ImageError::NotCertificate {
                    kind,
                    reason: e.to_string(),
                })
            }
        }
        let x = self.reconstruct_unchecked(y, b, kind)?;
        let residual = (&self.a_f * &x - b).amax();
        let base_margin = self.base.dual_margin(&x).unwrap_or(f64::NAN);
        Ok(PrimalWitness {
            x,
            x_exact: None,
            residual,
            base_margin,
            exact_member: None,
        })
    }

    /// The bare formula `x = M(A^T y) A^T (A M A^T)^{-1} b` with `M = B`
    /// or `H`, without the certificate gate.
    pub fn reconstruct_unchecked(
        &self,
        y: &DVector<f64>,
        b: &DVector<f64>,
        kind: CertKind,
    ) -> Result<DVector<f64>, ImageError> {
        let u = self.a_f.transpose() * y;
        let m = self.kind_matrix_f(&u, kind)?;
        let w = &m * self.a_f.transpose();
        let s = &self.a_f * &w;
        let sol = s.lu().solve(b).ok_or(ConeError::FactorizationFailed)?;
        Ok(&w * sol)
    }

    fn kind_matrix_f(&self, u: &DVector<f64>, kind: CertKind) -> Result<DMatrix<f64>, ImageError> {
        let eval = self.base_oracle.eval(u)?;
        Ok(match kind {
            CertKind::H => eval.hessian,
            CertKind::B => &eval.hessian + &eval.gradient * eval.gradient.transpose(),
        })
    }

    /// Exact reconstruction from rational `(y, b)`.
    ///
    /// When the base barrier is rational (orthant/log-det families) the
    /// certificate is replayed exactly and the formula is evaluated in
    /// rational arithmetic, so `Ax = b` holds exactly. For base cones with
    /// transcendental barriers but exact membership tests (power cones),
    /// the float reconstruction is snapped to rationals and repaired back
    /// onto `{Ax = b}` by the least-norm rational correction
    /// `x += A^T (A A^T)^{-1} (b - A x)`; exact membership of the repaired
    /// witness is what certifies it.
    pub fn reconstruct_primal_exact(
        &self,
        y: &[Rational],
        b: &[Rational],
        kind: CertKind,
    ) -> Result<PrimalWitness, ImageError> {
        let exact_barrier = self.dual_oracle.exact_eval(y).is_ok();
        let x_exact = if exact_barrier {
            match certify::exact_verify(&*self.dual_oracle, y, b, kind) {
                Ok(certify::ExactOutcome::Proven) => {}
                Ok(other) => {
                    return Err(ImageError::NotCertificate {
                        kind,
                        reason: format!("exact replay returned {other:?}"),
                    })
                }
                Err(CertifyError::Exact(e)) => return Err(ImageError::Exact(e)),
                Err(e) => {
                    return Err(ImageError::NotCertificate {
                        kind,
                        reason: e.to_string(),
                    })
                }
            }
            self.reconstruct_exact_formula(y, b, kind)?
        } else {
            // Snap-and-repair route for transcendental base barriers.
            let yf = vec_to_f64(y);
            let bf = vec_to_f64(b);
            let witness = self.reconstruct_primal(&yf, &bf, kind)?;
            let snapped = snap_vec(&witness.x, 1_000_000_000_000);
            self.repair_onto_equality(snapped, b)?
        };
        // Ax = b must now hold exactly.
        let ax = self.a.mul_vec(&x_exact);
        if ax != b.to_vec() {
            return Err(ImageError::Exact(ExactError::Unavailable(
                "exact equality Ax = b failed after reconstruction".into(),
            )));
        }
        let member = self.base.dual_member_exact(&x_exact)?;
        let x = vec_to_f64(&x_exact);
        let base_margin = self.base.dual_margin(&x).unwrap_or(f64::NAN);
        Ok(PrimalWitness {
            x,
            x_exact: Some(x_exact),
            residual: 0.0,
            base_margin,
            exact_member: Some(member),
        })
    }

    fn reconstruct_exact_formula(
        &self,
        y: &[Rational],
        b: &[Rational],
        kind: CertKind,
    ) -> Result<RatVec, ImageError> {
        let at = self.a.transpose();
        let u = at.mul_vec(y);
        let eval = self.base_oracle.exact_eval(&u)?;
        let n = self.base_dim();
        let mut m = eval.hessian;
        if kind == CertKind::B {
            for i in 0..n {
                for j in 0..n {
                    let upd = &m[(i, j)] + &eval.gradient[i] * &eval.gradient[j];
                    m[(i, j)] = upd;
                }
            }
        }
        let w = m.mul(&at);
        let s = self.a.mul(&w);
        let sol = rational_solve(&s, b)?;
        Ok(w.mul_vec(&sol))
    }

    fn repair_onto_equality(&self, mut x: RatVec, b: &[Rational]) -> Result<RatVec, ImageError> {
        let ax = self.a.mul_vec(&x);
        let defect: RatVec = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        if defect.iter().all(Zero::is_zero) {
            return Ok(x);
        }
        let aat = self.a.mul(&self.a.transpose());
        let s = rational_solve(&aat, &defect)?;
        let corr = self.a.transpose().mul_vec(&s);
        for (xi, ci) in x.iter_mut().zip(corr) {
            *xi += ci;
        }
        Ok(x)
    }

    /// Defect of the weighted-least-squares identity: the reconstruction
    /// is the minimizer of `||-g(A^T y) - x||_{B(A^T y)^{-1}}` over
    /// `{Ax = b}`, whose optimal value equals `||-g_A(y) - b||_{B_A(y)^{-1}}`.
    /// Returns the absolute difference of the two norms.
    pub fn lsq_consistency_check(
        &self,
        y: &DVector<f64>,
        b: &DVector<f64>,
    ) -> Result<f64, ImageError> {
        let u = self.a_f.transpose() * y;
        let eval = self.base_oracle.eval(&u)?;
        let big_b = &eval.hessian + &eval.gradient * eval.gradient.transpose();
        let w = &big_b * self.a_f.transpose();
        let s = &self.a_f * &w;
        let lu = s.clone().lu();
        let sol = lu.solve(b).ok_or(ConeError::FactorizationFailed)?;
        let x_star = &w * &sol;

        // ||-g(u) - x*||_{B(u)^{-1}}
        let r1 = -&eval.gradient - &x_star;
        let s1 = DMatrix::from(big_b.clone())
            .lu()
            .solve(&r1)
            .ok_or(ConeError::FactorizationFailed)?;
        let lhs = r1.dot(&s1).max(0.0).sqrt();

        // ||-g_A(y) - b||_{B_A(y)^{-1}} with g_A = A g(u), B_A = A B(u) A^T.
        let r2 = -(&self.a_f * &eval.gradient) - b;
        let s2 = lu.solve(&r2).ok_or(ConeError::FactorizationFailed)?;
        let rhs = r2.dot(&s2).max(0.0).sqrt();
        Ok((lhs - rhs).abs())
    }
}

/// The affine family `x_gamma = offset + gamma * direction` produced by
/// the optimization-form reconstruction; `A x_gamma = b` and
/// `c^T x_gamma = gamma` hold for every `gamma` (exactly, in rational
/// mode).
#[derive(Clone, Debug)]
pub struct GammaFamily {
    pub offset: RatVec,
    pub direction: RatVec,
}

impl GammaFamily {
    pub fn at(&self, gamma: &Rational) -> RatVec {
        self.offset
            .iter()
            .zip(&self.direction)
            .map(|(u, v)| u + gamma * v)
            .collect()
    }

    pub fn at_f64(&self, gamma: f64) -> DVector<f64> {
        vec_to_f64(&self.offset) + vec_to_f64(&self.direction) * gamma
    }

    /// Smallest `gamma` with `x_gamma >= 0` componentwise, by the
    /// per-coordinate ratio test; `None` when infeasible for every
    /// `gamma`. Only meaningful for orthant base cones.
    pub fn min_feasible_gamma(&self) -> Option<Rational> {
        let mut lo: Option<Rational> = None;
        let mut hi: Option<Rational> = None;
        for (u, v) in self.offset.iter().zip(&self.direction) {
            if v.is_zero() {
                if u.is_negative() {
                    return None;
                }
                continue;
            }
            let bound = -(u / v);
            if v.is_positive() {
                lo = Some(match lo {
                    Some(cur) => cur.max(bound),
                    None => bound,
                });
            } else {
                hi = Some(match hi {
                    Some(cur) => cur.min(bound),
                    None => bound,
                });
            }
        }
        match (lo, hi) {
            (Some(lo), Some(hi)) if lo > hi => None,
            (Some(lo), _) => Some(lo),
            (None, hi) => hi, // unbounded below; any value works, return the cap
        }
    }
}

/// The standard-form problem `inf c^T x : Ax = b, x in K` reformulated
/// over the stacked cone `K_{c,A} = {(c^T x, -Ax) | x in K}` with dual
/// slice `(1, y)`, stacked matrix `A_c = [c^T; -A]` and target
/// `b_gamma = (gamma, -b)`.
pub struct StackedCone {
    pub image: ImageCone,
    pub c: RatVec,
    pub a: RatMatrix,
    pub b: RatVec,
}

impl StackedCone {
    pub fn new(
        base: ConeSpec,
        c: RatVec,
        a: RatMatrix,
        b: RatVec,
        dual_hint: Option<DVector<f64>>,
    ) -> Result<Self, ImageError> {
        if c.len() != a.ncols() || b.len() != a.nrows() {
            return Err(ImageError::Cone(ConeError::DimensionMismatch {
                expected: a.ncols(),
                got: c.len(),
            }));
        }
        let mut rows: Vec<RatVec> = vec![c.clone()];
        for i in 0..a.nrows() {
            rows.push(a.row(i).iter().map(|v| -v).collect());
        }
        let stacked = RatMatrix::from_rows(rows);
        if stacked.rank() != stacked.nrows() {
            return Err(ImageError::RankDeficient);
        }
        let image = ImageCone::new(base, stacked, dual_hint)?;
        Ok(Self { image, c, a, b })
    }

    /// Lifts `y` to the stacked dual coordinates `(1, y)`.
    pub fn lift_dual(&self, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(y.len() + 1);
        out[0] = 1.0;
        out.rows_mut(1, y.len()).copy_from(y);
        out
    }

    fn check_dual_feasible(&self, y_lift: &DVector<f64>) -> Result<(), ImageError> {
        let margin = self.image.dual_oracle.margin(y_lift);
        if margin.is_finite() && margin > 0.0 {
            Ok(())
        } else {
            Err(ImageError::NotDualFeasible { margin })
        }
    }

    /// Exact-rational affine family `x_gamma` from a rational dual point.
    pub fn reconstruct_optimal_exact(
        &self,
        y: &[Rational],
        kind: CertKind,
    ) -> Result<GammaFamily, ImageError> {
        let y_lift_f = self.lift_dual(&vec_to_f64(y));
        self.check_dual_feasible(&y_lift_f)?;
        let mut y_lift: RatVec = vec![Rational::one()];
        y_lift.extend_from_slice(y);
        let at = self.image.a.transpose();
        let ups = at.mul_vec(&y_lift);
        let eval = self.image.base_oracle.exact_eval(&ups)?;
        let n = self.image.base_dim();
        let mut m = eval.hessian;
        if kind == CertKind::B {
            for i in 0..n {
                for j in 0..n {
                    let upd = &m[(i, j)] + &eval.gradient[i] * &eval.gradient[j];
                    m[(i, j)] = upd;
                }
            }
        }
        let w = m.mul(&at);
        let s = self.image.a.mul(&w);
        // b_gamma = (gamma, -b) = gamma e_0 + (0, -b); two solves share s.
        let mrows = self.image.image_dim();
        let mut e0 = vec![Rational::zero(); mrows];
        e0[0] = Rational::one();
        let mut rhs0 = vec![Rational::zero(); mrows];
        for (i, bi) in self.b.iter().enumerate() {
            rhs0[1 + i] = -bi;
        }
        let sol_dir = rational_solve(&s, &e0)?;
        let sol_off = rational_solve(&s, &rhs0)?;
        Ok(GammaFamily {
            offset: w.mul_vec(&sol_off),
            direction: w.mul_vec(&sol_dir),
        })
    }

    /// Floating-point affine family.
    pub fn reconstruct_optimal(
        &self,
        y: &DVector<f64>,
        kind: CertKind,
    ) -> Result<(DVector<f64>, DVector<f64>), ImageError> {
        let y_lift = self.lift_dual(y);
        self.check_dual_feasible(&y_lift)?;
        let ups = self.image.a_f.transpose() * &y_lift;
        let m = self.image.kind_matrix_f(&ups, kind)?;
        let w = &m * self.image.a_f.transpose();
        let s = &self.image.a_f * &w;
        let lu = s.lu();
        let mrows = self.image.image_dim();
        let mut e0 = DVector::zeros(mrows);
        e0[0] = 1.0;
        let mut rhs0 = DVector::zeros(mrows);
        for (i, bi) in self.b.iter().enumerate() {
            rhs0[1 + i] = -crate::exact::rat_to_f64(bi);
        }
        let sol_dir = lu.solve(&e0).ok_or(ConeError::FactorizationFailed)?;
        let sol_off = lu.solve(&rhs0).ok_or(ConeError::FactorizationFailed)?;
        Ok((&w * sol_off, &w * sol_dir))
    }

    /// The open interval of `gamma` for which `(gamma, -b)` lies in the
    /// dual Dikin ball of radius `r` around `-g_{A_c}(1, y)`; every such
    /// `gamma` is a certified attainable objective value. Empty when the
    /// discriminant is negative (`y` too far from the central path).
    pub fn gamma_interval(
        &self,
        y: &DVector<f64>,
        r: f64,
    ) -> Result<Option<(f64, f64)>, ImageError> {
        self.gamma_interval_scaled(y, r, 1.0)
    }

    /// Scale-aware variant: certified sets are cones in the target, so
    /// `(gamma, -b)` is certified iff `s (gamma, -b)` is; near the path at
    /// parameter `tau` the ball test only achieves anything with
    /// `s ~ 1/tau`, since `-g(1, y_tau) = (b^T y + tau nu, -b)/tau`.
    pub fn gamma_interval_scaled(
        &self,
        y: &DVector<f64>,
        r: f64,
        scale: f64,
    ) -> Result<Option<(f64, f64)>, ImageError> {
        let y_lift = self.lift_dual(y);
        self.check_dual_feasible(&y_lift)?;
        let oracle = self.image.dual_oracle();
        let eval = oracle.eval(&y_lift)?;
        let ctx = LocalNormContext::from_hessian(y_lift.clone(), eval.hessian.clone())?;
        // d(gamma~) = gamma~ e0 + q with gamma~ = scale * gamma and
        // q = (g_0, g_rest - scale * b).
        let mut q = eval.gradient.clone();
        for (i, bi) in self.b.iter().enumerate() {
            q[1 + i] -= scale * crate::exact::rat_to_f64(bi);
        }
        let mut e0 = DVector::zeros(y_lift.len());
        e0[0] = 1.0;
        let s_e0 = ctx.solve(&e0);
        let s_q = ctx.solve(&q);
        let a = e0.dot(&s_e0);
        let beta = e0.dot(&s_q);
        let c = q.dot(&s_q);
        let disc = beta * beta - a * (c - r * r);
        if disc <= 0.0 || a <= 0.0 {
            return Ok(None);
        }
        let root = disc.sqrt();
        Ok(Some((
            (-beta - root) / (a * scale),
            (-beta + root) / (a * scale),
        )))
    }

    /// Finds a strictly dual-feasible slice point `(1, z)` (i.e. `z` with
    /// `c - A^T z` interior in the base cone). Tries the pullback
    /// reference and a least-squares preimage first, then a phase-1
    /// Newton on `f(c - A^T z + t x_ref) + M t` from the always-feasible
    /// large-`t` start, extracting the crossing point at `t = 0`.
    pub fn find_slice_point(&self) -> Option<DVector<f64>> {
        let m = self.a.nrows();
        let base = self.image.base_oracle();
        let a_f = self.a.to_f64();
        let c_f = vec_to_f64(&self.c);

        let reference = self.image.dual_oracle.reference_point();
        if reference[0] > 1e-9 {
            let z = reference.rows(1, m).clone_owned() / reference[0];
            if base.is_interior(&(&c_f - a_f.transpose() * &z)) {
                return Some(z);
            }
        }
        let x_ref = base.reference_point();
        if let Some(chol) = nalgebra::Cholesky::new(&a_f * a_f.transpose()) {
            let z = chol.solve(&(&a_f * (&c_f - &x_ref)));
            if base.is_interior(&(&c_f - a_f.transpose() * &z)) {
                return Some(z);
            }
        }

        // Phase 1 over (z, t) with u = c - A^T z + t x_ref.
        let lift = |z: &DVector<f64>, t: f64| &c_f - a_f.transpose() * z + &x_ref * t;
        let mut t0 = 1.0;
        while !base.is_interior(&lift(&DVector::zeros(m), t0)) {
            t0 *= 2.0;
            if t0 > 1e12 {
                return None;
            }
        }
        let mut weight = 1.0;
        for _round in 0..8 {
            let mut z = DVector::zeros(m);
            let mut t = t0;
            for _iter in 0..200 {
                let u = lift(&z, t);
                let eval = base.eval(&u).ok()?;
                // Map (z, t) -> u has Jacobian [-A^T | x_ref].
                let gz = -(&a_f * &eval.gradient);
                let gt = x_ref.dot(&eval.gradient) + weight;
                let mut grad = DVector::zeros(m + 1);
                grad.rows_mut(0, m).copy_from(&gz);
                grad[m] = gt;
                let hb = &eval.hessian;
                let h_zz = &a_f * hb * a_f.transpose();
                let h_zt = -(&a_f * (hb * &x_ref));
                let h_tt = x_ref.dot(&(hb * &x_ref));
                let mut hess = DMatrix::zeros(m + 1, m + 1);
                hess.view_mut((0, 0), (m, m)).copy_from(&h_zz);
                hess.view_mut((0, m), (m, 1)).copy_from(&h_zt);
                hess.view_mut((m, 0), (1, m)).copy_from(&h_zt.transpose());
                hess[(m, m)] = h_tt;
                for i in 0..=m {
                    hess[(i, i)] += 1e-12;
                }
                let step = hess.lu().solve(&(-&grad))?;
                let dz = step.rows(0, m).clone_owned();
                let dt = step[m];
                let mut scale = 1.0;
                let mut moved = false;
                for _ in 0..60 {
                    let z_new = &z + &dz * scale;
                    let t_new = t + dt * scale;
                    if t_new <= 0.0 {
                        let s = t / (t - t_new);
                        let z_cross = &z + &dz * (scale * s);
                        if base.is_interior(&(&c_f - a_f.transpose() * &z_cross)) {
                            return Some(z_cross);
                        }
                    }
                    if base.is_interior(&lift(&z_new, t_new)) {
                        z = z_new;
                        t = t_new;
                        moved = true;
                        break;
                    }
                    scale *= 0.5;
                }
                if !moved {
                    break;
                }
            }
            weight *= 10.0;
        }
        None
    }

    /// Residual of the on-path gradient identity
    /// `-tau g(1, y_tau) = (b^T y_tau + tau nu, -b)` in the sup norm.
    pub fn on_path_identity_residual(&self, y: &DVector<f64>, tau: f64) -> Result<f64, ImageError> {
        let y_lift = self.lift_dual(y);
        self.check_dual_feasible(&y_lift)?;
        let oracle = self.image.dual_oracle();
        let eval = oracle.eval(&y_lift)?;
        let bf = vec_to_f64(&self.b);
        let nu = oracle.nu();
        let mut expected = DVector::zeros(y_lift.len());
        expected[0] = bf.dot(y) + tau * nu;
        for i in 0..bf.len() {
            expected[1 + i] = -bf[i];
        }
        Ok((-&eval.gradient * tau - expected).amax())
    }
}
