//! Short-step feasible path-following solver for the membership problem
//!
//! ```text
//!   max { alpha | alpha w + z = b, z in K }      (primal)
//!   min { b^T y | w^T y = 1, y in K* }           (dual)
//! ```
//!
//! and the standard-form problem `inf { c^T x | Ax = b, x in K }` in its
//! stacked reformulation. The solver follows the dual central path
//! `argmin { q^T y / tau + f(y) | w^T y = 1 }` with a projected damped
//! Newton method, shrinking `tau` by `1 - theta/sqrt(nu)` per step and
//! staying in the neighborhood
//!
//! ```text
//!   || z/tau + g(y) ||*_y <= eta,   z = b - alpha w,  alpha = b^T y - tau nu.
//! ```
//!
//! Inside that neighborhood every iterate's `y` is itself a dual
//! certificate of `z` (an H-certificate for eta < 1 on hyperbolic cones, a
//! B-certificate for eta < 1/(2(nu+1)) on any cone), so the solver emits a
//! rigorously certified bound `alpha` at every step. Absence of a
//! certificate is always reported as inconclusive, never as non-membership.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certify::{self, CertKind, CertifyError, DualCertificate};
use crate::cone::{BarrierOracle, ConeError, LocalNormContext};
use crate::exact::{snap_vec, vec_to_f64, RatVec, Rational};
use crate::image::{GammaFamily, ImageError, PrimalWitness, StackedCone};

#[derive(Debug, Error)]
pub enum IpaError {
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error("centering failed to reach the neighborhood after {iters} Newton steps (centrality {centrality:e})")]
    CenteringFailed { iters: usize, centrality: f64 },
    #[error("step lost interiority at machine precision")]
    StepFailed,
    #[error("w^T y0 = {0:e} is not positive; cannot normalize the start")]
    BadStart(f64),
    #[error("H mode requested on a cone without the hyperbolic flag")]
    HNotValid,
}

/// Solver configuration. `eta`/`theta` default to the classical short-step
/// pair (1/4, 1/8); in B mode the neighborhood is tightened to
/// `0.9/(2(1+nu))` so that in-neighborhood iterates are B-certified.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolverConfig {
    pub eta: f64,
    pub theta: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub mode: CertKind,
    pub snap_denominator_cap: u64,
    #[serde(default)]
    pub early_stop: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eta: 0.25,
            theta: 0.125,
            tol: 1e-8,
            max_iters: 400,
            mode: CertKind::B,
            snap_denominator_cap: 1_000_000_000_000,
            early_stop: false,
        }
    }
}

impl SolverConfig {
    pub fn with_mode(mode: CertKind) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    fn effective_eta(&self, nu: f64) -> f64 {
        match self.mode {
            CertKind::H => self.eta,
            CertKind::B => self.eta.min(0.9 / (2.0 * (1.0 + nu))),
        }
    }
}

/// The membership question `b in K`, posed through a barrier oracle for
/// `K*` (a plain cone's oracle or an image cone's pullback oracle).
pub struct MembershipProblem {
    pub oracle: Arc<dyn BarrierOracle>,
    pub b: DVector<f64>,
    pub w: DVector<f64>,
    /// Set when the direction `w` passed a gradient-certificate round
    /// trip (which certifies `w` strictly interior to `K`). Boundary
    /// directions such as the constant-one polynomial are permitted; the
    /// flag records that their interiority was not established.
    pub w_certified_interior: bool,
}

impl MembershipProblem {
    pub fn new(
        oracle: Arc<dyn BarrierOracle>,
        b: DVector<f64>,
        w: Option<DVector<f64>>,
    ) -> Result<Self, IpaError> {
        if b.len() != oracle.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: oracle.dim(),
                got: b.len(),
            }
            .into());
        }
        let w = match w {
            Some(w) => {
                if w.len() != oracle.dim() {
                    return Err(ConeError::DimensionMismatch {
                        expected: oracle.dim(),
                        got: w.len(),
                    }
                    .into());
                }
                w
            }
            None => -oracle.eval(&oracle.reference_point())?.gradient,
        };
        let w_certified_interior = certify::gradient_certificate(&*oracle, &w, 1e-8, 150).is_ok();
        Ok(Self {
            oracle,
            b,
            w,
            w_certified_interior,
        })
    }
}

/// One in-neighborhood iterate of the path follower.
#[derive(Clone, Debug)]
pub struct PathIterate {
    pub y: DVector<f64>,
    pub tau: f64,
    pub alpha: f64,
    pub centrality: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iter: usize,
    pub tau: f64,
    pub alpha: f64,
    pub centrality: f64,
    pub certified: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    CertifiedMember,
    CertifiedBoundOnly,
    Inconclusive,
}

/// Outcome of a membership solve. `best_alpha` is the largest *certified*
/// bound (`-inf` when no iterate certified); `CertifiedMember` requires a
/// verified certificate together with `best_alpha >= 0`, or a direct
/// certificate of `b` itself.
#[derive(Debug)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub best_alpha: f64,
    pub certificate: Option<DualCertificate>,
    pub iterations: usize,
    pub trace: Vec<TraceEntry>,
}

/// Projected-Newton path follower on `{w^T y = 1}`.
struct PathFollower {
    oracle: Arc<dyn BarrierOracle>,
    /// Objective direction: the engine minimizes `q^T y / tau + f(y)`.
    q: DVector<f64>,
    w: DVector<f64>,
    /// Orthonormal basis of the hyperplane through the Householder
    /// reflector sending `w` to a multiple of `e_1`.
    nullspace: DMatrix<f64>,
}

fn householder_nullspace(w: &DVector<f64>) -> DMatrix<f64> {
    let d = w.len();
    let mut v = w.clone();
    let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
    v[0] += sign * w.norm();
    let vtv = v.dot(&v);
    let h = DMatrix::identity(d, d) - (&v * v.transpose()) * (2.0 / vtv);
    h.columns(1, d - 1).into_owned()
}

impl PathFollower {
    fn new(oracle: Arc<dyn BarrierOracle>, q: DVector<f64>, w: DVector<f64>) -> Self {
        let nullspace = householder_nullspace(&w);
        Self {
            oracle,
            q,
            w,
            nullspace,
        }
    }

    /// alpha = q^T y - tau nu; on the path this is the best bound
    /// certified by the current iterate.
    fn alpha(&self, y: &DVector<f64>, tau: f64) -> f64 {
        self.q.dot(y) - tau * self.oracle.nu()
    }

    fn slack(&self, y: &DVector<f64>, tau: f64) -> DVector<f64> {
        &self.q - &self.w * self.alpha(y, tau)
    }

    /// `|| z/tau + g(y) ||*_y` with `z = q - alpha w`.
    fn centrality(&self, y: &DVector<f64>, tau: f64) -> Result<f64, IpaError> {
        let ctx = LocalNormContext::new(&*self.oracle, y)?;
        let g = self.oracle.eval(y)?.gradient;
        let v = self.slack(y, tau) / tau + g;
        Ok(ctx.dual_local_norm(&v)?)
    }

    /// Damped projected Newton on `q^T y / tau + f(y)` restricted to
    /// `{w^T y = 1}`, until the neighborhood radius `target` is reached.
    fn center(
        &self,
        y: &mut DVector<f64>,
        tau: f64,
        target: f64,
        max_newton: usize,
    ) -> Result<f64, IpaError> {
        let z = &self.nullspace;
        let mut centrality = self.centrality(y, tau)?;
        for _ in 0..max_newton {
            if centrality <= target {
                return Ok(centrality);
            }
            let eval = self.oracle.eval(y)?;
            let grad = &self.q / tau + &eval.gradient;
            let gz = z.transpose() * &grad;
            let hz = z.transpose() * &eval.hessian * z;
            let du = match nalgebra::Cholesky::new(hz.clone()) {
                Some(ch) => ch.solve(&(-&gz)),
                None => hz
                    .lu()
                    .solve(&(-&gz))
                    .ok_or(ConeError::FactorizationFailed)?,
            };
            let decrement = {
                let hz_du = z.transpose() * (&eval.hessian * (z * &du));
                du.dot(&hz_du).max(0.0).sqrt()
            };
            let dy = z * &du;
            let mut t = if decrement > 0.25 {
                1.0 / (1.0 + decrement)
            } else {
                1.0
            };
            let mut moved = false;
            for _ in 0..60 {
                let candidate = &*y + &dy * t;
                if self.oracle.is_interior(&candidate) {
                    *y = candidate;
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if !moved {
                return Err(IpaError::StepFailed);
            }
            centrality = self.centrality(y, tau)?;
            if decrement < 1e-13 {
                break;
            }
        }
        Ok(centrality)
    }

    /// Scales `y0` onto the slice, picks `tau0` minimizing the initial
    /// centrality in closed form, and centers to `eta/2`.
    fn initialize(
        &self,
        y0: &DVector<f64>,
        eta: f64,
        max_newton: usize,
    ) -> Result<PathIterate, IpaError> {
        let wty = self.w.dot(y0);
        if wty <= 0.0 {
            return Err(IpaError::BadStart(wty));
        }
        let mut y = y0 / wty;
        self.oracle.check_interior(&y, "ipa initialize")?;

        // centrality(tau)^2 = || u/tau + v ||*^2 with u = q - (q^T y) w and
        // v = nu w + g; quadratic in 1/tau, minimized in closed form.
        let ctx = LocalNormContext::new(&*self.oracle, &y)?;
        let g = self.oracle.eval(&y)?.gradient;
        let u = &self.q - &self.w * self.q.dot(&y);
        let v = &self.w * self.oracle.nu() + &g;
        let hu = ctx.solve(&u);
        let uu = u.dot(&hu);
        let uv = v.dot(&hu);
        let s_star = if uu > 1e-300 {
            (-uv / uu).max(0.0)
        } else {
            0.0
        };
        let mut tau = if s_star > 1e-300 { 1.0 / s_star } else { 1.0 };
        if !tau.is_finite() || tau <= 0.0 {
            tau = 1.0;
        }

        let centrality = self.center(&mut y, tau, eta / 2.0, max_newton)?;
        if centrality > eta / 2.0 {
            return Err(IpaError::CenteringFailed {
                iters: max_newton,
                centrality,
            });
        }
        Ok(PathIterate {
            alpha: self.alpha(&y, tau),
            centrality,
            y,
            tau,
        })
    }

    /// One short step: shrink `tau` geometrically and re-center. The
    /// centering target is `eta/2`, half the neighborhood radius, which
    /// keeps the per-iterate bound `alpha` from wiggling at the loose end
    /// of the neighborhood.
    fn step(&self, it: &PathIterate, eta: f64, theta: f64) -> Result<PathIterate, IpaError> {
        let tau = it.tau * (1.0 - theta / self.oracle.nu().sqrt());
        let mut y = it.y.clone();
        let centrality = self.center(&mut y, tau, eta / 2.0, 100)?;
        if centrality > eta {
            return Err(IpaError::CenteringFailed {
                iters: 100,
                centrality,
            });
        }
        Ok(PathIterate {
            alpha: self.alpha(&y, tau),
            centrality,
            y,
            tau,
        })
    }

    /// Certificate check for the iterate's slack `z = q - alpha w`: the
    /// cheap Dikin sufficient condition (the centrality itself) first,
    /// falling back to the full witness computation only when it fails.
    /// When the Dikin bound holds, the certificate is valid by the
    /// neighborhood theorems regardless of floating-point wobble in the
    /// witness margin, which is still computed and reported as measured.
    fn certify_iterate(&self, it: &PathIterate, kind: CertKind) -> Option<DualCertificate> {
        let z = self.slack(&it.y, it.tau);
        let dikin_ok = match kind {
            CertKind::H => it.centrality < 1.0 && self.oracle.hyperbolic(),
            CertKind::B => it.centrality < 1.0 / (2.0 * (1.0 + self.oracle.nu())),
        };
        if dikin_ok {
            let ctx = LocalNormContext::new(&*self.oracle, &it.y).ok()?;
            let witness = match kind {
                CertKind::H => ctx.solve(&z),
                CertKind::B => certify::apply_b_inverse_ctx(&ctx, self.oracle.nu(), &z),
            };
            return Some(DualCertificate {
                kind,
                y: it.y.clone(),
                y_margin: self.oracle.margin(&it.y),
                witness_margin: self.oracle.margin(&witness),
                witness,
                b: z,
                exact: None,
            });
        }
        certify::check_certificate(&*self.oracle, &it.y, &z, kind).ok()
    }
}

/// Exposed for tests and examples: initializes on the central path.
pub fn initialize(
    problem: &MembershipProblem,
    y0: Option<&DVector<f64>>,
    config: &SolverConfig,
) -> Result<PathIterate, IpaError> {
    let follower = PathFollower::new(problem.oracle.clone(), problem.b.clone(), problem.w.clone());
    let eta = config.effective_eta(problem.oracle.nu());
    let start = y0
        .cloned()
        .unwrap_or_else(|| problem.oracle.reference_point());
    follower.initialize(&start, eta, 200)
}

/// One short step (exposed for tests; `theta = 0` is pure centering).
pub fn step(
    problem: &MembershipProblem,
    it: &PathIterate,
    eta: f64,
    theta: f64,
) -> Result<PathIterate, IpaError> {
    let follower = PathFollower::new(problem.oracle.clone(), problem.b.clone(), problem.w.clone());
    follower.step(it, eta, theta)
}

/// Runs the path follower until the certified bound stabilizes
/// (`|d alpha| < tol max(1,|alpha|)` over 10 consecutive steps), `tau`
/// bottoms out, or `max_iters` is reached. With `early_stop`, a verified
/// direct certificate of `b` itself ends the run immediately.
pub fn solve_membership(
    problem: &MembershipProblem,
    config: &SolverConfig,
) -> Result<SolveReport, IpaError> {
    if config.mode == CertKind::H && !problem.oracle.hyperbolic() {
        return Err(IpaError::HNotValid);
    }
    let follower = PathFollower::new(problem.oracle.clone(), problem.b.clone(), problem.w.clone());
    let nu = problem.oracle.nu();
    let eta = config.effective_eta(nu);
    let theta = config.theta;

    let mut trace = Vec::new();
    let mut best_alpha = f64::NEG_INFINITY;
    let mut best_cert: Option<DualCertificate> = None;
    let mut direct_member = false;
    let mut stable_count = 0usize;
    let mut prev_alpha: Option<f64> = None;
    let mut iterations = 0;

    let mut it = match follower.initialize(&problem.oracle.reference_point(), eta, 200) {
        Ok(it) => it,
        Err(IpaError::CenteringFailed { .. })
        | Err(IpaError::StepFailed)
        | Err(IpaError::Cone(ConeError::FactorizationFailed))
        | Err(IpaError::Cone(ConeError::NotInterior { .. })) => {
            return Ok(SolveReport {
                status: SolveStatus::Inconclusive,
                best_alpha,
                certificate: None,
                iterations: 0,
                trace,
            })
        }
        Err(e) => return Err(e),
    };

    for iter in 0..config.max_iters {
        iterations = iter + 1;
        let cert = follower.certify_iterate(&it, config.mode);
        let certified = cert.is_some();
        if certified && it.alpha > best_alpha {
            best_alpha = it.alpha;
            best_cert = cert;
        }
        trace.push(TraceEntry {
            iter,
            tau: it.tau,
            alpha: it.alpha,
            centrality: it.centrality,
            certified,
        });

        if config.early_stop && certified && it.alpha >= 0.0 {
            if let Ok(direct) =
                certify::check_certificate(&*problem.oracle, &it.y, &problem.b, config.mode)
            {
                best_cert = Some(direct);
                best_alpha = best_alpha.max(it.alpha);
                direct_member = true;
                break;
            }
        }

        if let Some(prev) = prev_alpha {
            if (it.alpha - prev).abs() < config.tol * it.alpha.abs().max(1.0) {
                stable_count += 1;
            } else {
                stable_count = 0;
            }
        }
        prev_alpha = Some(it.alpha);
        if stable_count >= 10 || it.tau < 1e-13 {
            break;
        }

        match follower.step(&it, eta, theta) {
            Ok(next) => it = next,
            Err(IpaError::CenteringFailed { .. })
            | Err(IpaError::StepFailed)
            | Err(IpaError::Cone(ConeError::FactorizationFailed))
            | Err(IpaError::Cone(ConeError::NotInterior { .. })) => break,
            Err(e) => return Err(e),
        }
    }

    let status = if direct_member || (best_cert.is_some() && best_alpha >= 0.0) {
        SolveStatus::CertifiedMember
    } else if best_cert.is_some() {
        SolveStatus::CertifiedBoundOnly
    } else {
        SolveStatus::Inconclusive
    };
    Ok(SolveReport {
        status,
        best_alpha,
        certificate: best_cert,
        iterations,
        trace,
    })
}

/// Report for a standard-form solve: certified objective value `gamma`,
/// the duality gap against the dual objective, the reconstructed primal
/// witness, and (when the dual snaps to rationals that still certify) an
/// exact rational witness.
#[derive(Debug)]
pub struct StandardFormReport {
    pub status: SolveStatus,
    pub gamma: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub y: DVector<f64>,
    pub witness: Option<PrimalWitness>,
    pub exact: Option<ExactOptimalWitness>,
    pub trace: Vec<TraceEntry>,
    pub iterations: usize,
}

#[derive(Debug)]
pub struct ExactOptimalWitness {
    pub gamma: Rational,
    pub x: RatVec,
    pub family: GammaFamily,
}

/// Path-follows the dual of the stacked problem (`q = (0, -b)`, `w = e0`)
/// and, per iterate, certifies an objective value `gamma` via the exact
/// per-coordinate ratio test (orthant bases) or the scaled Dikin-ball
/// interval. Terminates when `gamma - b^T y <= tol`.
pub fn solve_standard_form(
    stacked: &StackedCone,
    config: &SolverConfig,
) -> Result<StandardFormReport, IpaError> {
    let oracle = stacked.image.dual_oracle();
    if config.mode == CertKind::H && !oracle.hyperbolic() {
        return Err(IpaError::HNotValid);
    }
    let nu = oracle.nu();
    let eta = config.effective_eta(nu);
    let m = stacked.b.len();
    let bf = vec_to_f64(&stacked.b);

    let mut q = DVector::zeros(m + 1);
    for i in 0..m {
        q[1 + i] = -bf[i];
    }
    let mut w = DVector::zeros(m + 1);
    w[0] = 1.0;
    let follower = PathFollower::new(oracle.clone(), q, w);

    let orthant_base = matches!(
        stacked.image.base,
        crate::barriers::ConeSpec::Orthant { .. }
    );
    let radius = match config.mode {
        CertKind::H => 1.0,
        CertKind::B => 1.0 / (2.0 * (1.0 + nu)),
    };

    let mut trace = Vec::new();
    let mut best_gamma = f64::INFINITY;
    let mut last_certified: Option<(DVector<f64>, f64)> = None;
    let mut best_dual = f64::NEG_INFINITY;
    let mut best_dual_y: Option<DVector<f64>> = None;
    let mut iterations = 0;
    let mut exact: Option<ExactOptimalWitness> = None;

    // Start on the slice y0 = 1; the oracle reference may sit at y0 <= 0,
    // in which case a dedicated phase-1 finds a slice point.
    let reference = oracle.reference_point();
    let start = if reference[0] > 1e-9 {
        reference
    } else {
        let z = stacked
            .find_slice_point()
            .ok_or(IpaError::BadStart(reference[0]))?;
        let mut lifted = DVector::zeros(m + 1);
        lifted[0] = 1.0;
        lifted.rows_mut(1, m).copy_from(&z);
        lifted
    };
    let mut it = follower.initialize(&start, eta, 200)?;
    for iter in 0..config.max_iters {
        iterations = iter + 1;
        let y_tail = it.y.rows(1, m).clone_owned() / it.y[0];
        // Certified objective at this iterate. The float ratio test loses
        // reliability as tau -> 0 (the base Hessian conditions like
        // 1/tau^2), so its output is sanity-checked before being trusted.
        let mut gamma_here = f64::INFINITY;
        if orthant_base {
            if let Ok((off, dir)) = stacked.reconstruct_optimal(&y_tail, config.mode) {
                let c_dot_dir: f64 = stacked
                    .c
                    .iter()
                    .zip(dir.iter())
                    .map(|(c, d)| crate::exact::rat_to_f64(c) * d)
                    .sum();
                if (c_dot_dir - 1.0).abs() < 1e-6 {
                    gamma_here = min_feasible_gamma_f64(&off, &dir).unwrap_or(f64::INFINITY);
                }
            }
        }
        if !gamma_here.is_finite() {
            if let Ok(Some((lo, _))) = stacked.gamma_interval_scaled(&y_tail, radius, 1.0 / it.tau)
            {
                gamma_here = lo;
            }
        }
        let certified = gamma_here.is_finite();
        if certified {
            best_gamma = best_gamma.min(gamma_here);
            last_certified = Some((y_tail.clone(), gamma_here));
        }
        let dual_obj = bf.dot(&y_tail);
        if dual_obj > best_dual {
            best_dual = dual_obj;
            best_dual_y = Some(y_tail.clone());
        }
        trace.push(TraceEntry {
            iter,
            tau: it.tau,
            alpha: -it.alpha, // gamma bookkeeping value b^T y + tau nu
            centrality: it.centrality,
            certified,
        });

        // The certified gamma and the dual objective are independently
        // valid bounds, so the gap may pair values from different
        // iterates. Once the float gap closes, refine through the exact
        // rational path, which has no conditioning limit; keep stepping
        // until the exact gap closes too.
        if certified && best_gamma - best_dual <= config.tol {
            match exact_witness_from_dual(stacked, &y_tail, config) {
                Some(ew) => {
                    let gamma_exact = crate::exact::rat_to_f64(&ew.gamma);
                    best_gamma = gamma_exact;
                    exact = Some(ew);
                    if gamma_exact - best_dual <= config.tol {
                        break;
                    }
                }
                None => break,
            }
        }
        if it.tau < 1e-13 {
            break;
        }
        match follower.step(&it, eta, config.theta) {
            Ok(next) => it = next,
            Err(IpaError::CenteringFailed { .. })
            | Err(IpaError::StepFailed)
            | Err(IpaError::Cone(ConeError::FactorizationFailed))
            | Err(IpaError::Cone(ConeError::NotInterior { .. })) => break,
            Err(e) => return Err(e),
        }
    }

    // Prefer the exact route for the reported objective and witness.
    if exact.is_none() {
        if let Some((y, _)) = &last_certified {
            exact = exact_witness_from_dual(stacked, y, config);
        }
    }
    let (y, witness_gamma) = match (&exact, &last_certified) {
        (Some(ew), Some((y, _))) => (y.clone(), crate::exact::rat_to_f64(&ew.gamma)),
        (None, Some((y, g))) => (y.clone(), *g),
        _ => (
            best_dual_y.unwrap_or_else(|| it.y.rows(1, m).clone_owned() / it.y[0]),
            f64::INFINITY,
        ),
    };
    if let Some(ew) = &exact {
        best_gamma = crate::exact::rat_to_f64(&ew.gamma);
    }
    let dual_objective = best_dual;
    let gap = best_gamma - dual_objective;
    let status = if best_gamma.is_finite() {
        SolveStatus::CertifiedMember
    } else {
        SolveStatus::Inconclusive
    };

    let witness =
        match &exact {
            Some(ew) => {
                let x = vec_to_f64(&ew.x);
                let base_margin = stacked.image.base.dual_margin(&x).unwrap_or(f64::NAN);
                Some(PrimalWitness {
                    residual: 0.0,
                    base_margin,
                    x,
                    x_exact: Some(ew.x.clone()),
                    exact_member: Some(true),
                })
            }
            None if witness_gamma.is_finite() => stacked
                .reconstruct_optimal(&y, config.mode)
                .ok()
                .map(|(off, dir)| {
                    let x = &off + &dir * witness_gamma;
                    let base_margin = stacked.image.base.dual_margin(&x).unwrap_or(f64::NAN);
                    let ax = stacked.a.to_f64() * &x;
                    PrimalWitness {
                        residual: (&ax - &bf).amax(),
                        base_margin,
                        x,
                        x_exact: None,
                        exact_member: None,
                    }
                }),
            None => None,
        };

    Ok(StandardFormReport {
        status,
        gamma: best_gamma,
        dual_objective,
        gap,
        y,
        witness,
        exact,
        trace,
        iterations,
    })
}

fn min_feasible_gamma_f64(off: &DVector<f64>, dir: &DVector<f64>) -> Option<f64> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (u, v) in off.iter().zip(dir.iter()) {
        if *v == 0.0 {
            if *u < 0.0 {
                return None;
            }
            continue;
        }
        let bound = -u / v;
        if *v > 0.0 {
            lo = lo.max(bound);
        } else {
            hi = hi.min(bound);
        }
    }
    if lo > hi {
        None
    } else if lo.is_finite() {
        Some(lo)
    } else {
        Some(hi)
    }
}

fn exact_witness_from_dual(
    stacked: &StackedCone,
    y: &DVector<f64>,
    config: &SolverConfig,
) -> Option<ExactOptimalWitness> {
    let y_rat = snap_vec(y, config.snap_denominator_cap);
    let family = stacked
        .reconstruct_optimal_exact(&y_rat, config.mode)
        .ok()?;
    // The componentwise ratio test is exact for orthant bases and a
    // candidate generator otherwise; exact base membership is always the
    // gate, and failed candidates back off to slightly larger gammas.
    let mut candidates = Vec::new();
    if let Some(g) = family.min_feasible_gamma() {
        use num_traits::Signed;
        let scale = g.abs().max(crate::exact::rat_int(1));
        candidates.push(g.clone());
        for k in [12u32, 9, 6] {
            let bump =
                crate::exact::Rational::new(1.into(), num_bigint::BigInt::from(10u64.pow(k)));
            candidates.push(&g + bump * &scale);
        }
    }
    for gamma in candidates {
        let x = family.at(&gamma);
        if stacked.image.base.dual_member_exact(&x).ok()? {
            return Some(ExactOptimalWitness { gamma, x, family });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::barriers::ConeSpec;
    use crate::exact::{rat, rat_int, RatMatrix};

    fn orthant_problem(n: usize, b: Vec<f64>, w: Option<Vec<f64>>) -> MembershipProblem {
        let oracle = ConeSpec::Orthant { n }.oracle().unwrap();
        MembershipProblem::new(oracle, DVector::from_vec(b), w.map(DVector::from_vec)).unwrap()
    }

    #[test]
    fn symmetric_instance_starts_centered() {
        // b = w = 1/n: y0 = ones is exactly central at the optimal tau0.
        let n = 3;
        let p = orthant_problem(n, vec![1.0 / 3.0; 3], Some(vec![1.0 / 3.0; 3]));
        let config = SolverConfig::default();
        let it = initialize(&p, None, &config).unwrap();
        assert!(it.centrality < 1e-10, "centrality {}", it.centrality);
        // alpha = b^T y - tau nu and w^T y = 1 hold.
        assert!((p.w.dot(&it.y) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn theta_zero_is_pure_centering() {
        let p = orthant_problem(2, vec![2.0, 3.0], Some(vec![1.0, 1.0]));
        let config = SolverConfig::default();
        let it = initialize(&p, None, &config).unwrap();
        let next = step(&p, &it, 0.25, 0.0).unwrap();
        assert_eq!(next.tau, it.tau);
        assert!(next.centrality <= it.centrality + 1e-12);
    }

    #[test]
    fn tau_decays_geometrically() {
        let p = orthant_problem(2, vec![2.0, 3.0], Some(vec![1.0, 1.0]));
        let config = SolverConfig::default();
        let mut it = initialize(&p, None, &config).unwrap();
        let nu = p.oracle.nu();
        for _ in 0..5 {
            let next = step(&p, &it, 0.25, 0.125).unwrap();
            let expected = it.tau * (1.0 - 0.125 / nu.sqrt());
            assert!((next.tau - expected).abs() <= 1e-15 * expected.max(1.0));
            it = next;
        }
    }

    #[test]
    fn membership_bound_matches_ratio_closed_form() {
        // alpha* = min_i b_i / w_i on the orthant.
        for (b, w, expect) in [
            (vec![2.0, 2.0], vec![1.0, 1.0], 2.0),
            (vec![2.0, 3.0], vec![1.0, 1.0], 2.0),
            (vec![1.0, 4.0, 2.0], vec![1.0, 2.0, 0.5], 1.0),
        ] {
            let p = orthant_problem(b.len(), b.clone(), Some(w));
            let report = solve_membership(&p, &SolverConfig::default()).unwrap();
            assert_eq!(report.status, SolveStatus::CertifiedMember);
            assert!(
                (report.best_alpha - expect).abs() < 1e-3,
                "b={b:?}: alpha {} vs {expect}",
                report.best_alpha
            );
        }
    }

    #[test]
    fn certified_alphas_are_monotone_in_neighborhood() {
        let p = orthant_problem(3, vec![1.0, 4.0, 2.0], Some(vec![1.0, 2.0, 0.5]));
        let report = solve_membership(&p, &SolverConfig::default()).unwrap();
        let certified: Vec<f64> = report
            .trace
            .iter()
            .filter(|t| t.certified)
            .map(|t| t.alpha)
            .collect();
        assert!(certified.len() > 5);
        for pair in certified.windows(2) {
            assert!(
                pair[1] >= pair[0] - 1e-6 * pair[0].abs().max(1.0),
                "certified alpha regressed: {pair:?}"
            );
        }
    }

    #[test]
    fn neighborhood_invariant_and_certificates_hold_on_trace() {
        let p = orthant_problem(2, vec![2.0, 3.0], Some(vec![1.0, 1.0]));
        let config = SolverConfig::with_mode(CertKind::B);
        let eta = config.effective_eta(p.oracle.nu());
        let report = solve_membership(&p, &config).unwrap();
        assert!(!report.trace.is_empty());
        for t in &report.trace {
            assert!(t.centrality <= eta + 1e-12, "iterate {t:?}");
            assert!(t.certified, "B-mode in-neighborhood iterate must certify");
        }
    }

    #[test]
    fn negative_instance_reports_bound_only() {
        // b has a negative coordinate: alpha* = -3 < 0.
        let p = orthant_problem(2, vec![-3.0, 5.0], Some(vec![1.0, 1.0]));
        let report = solve_membership(&p, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedBoundOnly);
        assert!(
            (report.best_alpha + 3.0).abs() < 1e-3,
            "{}",
            report.best_alpha
        );
    }

    #[test]
    fn standard_form_reproduces_lp_example() {
        let stacked = StackedCone::new(
            ConeSpec::Orthant { n: 4 },
            vec![rat_int(1); 4],
            RatMatrix::from_i64_rows(&[&[1, 2, 3, 4], &[0, -6, 0, 1]]),
            vec![rat_int(19), rat_int(-5)],
            None,
        )
        .unwrap();
        let config = SolverConfig {
            tol: 1e-6,
            max_iters: 2000,
            ..SolverConfig::default()
        };
        let report = solve_standard_form(&stacked, &config).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedMember);
        assert!(report.gap <= 1e-6, "gap {}", report.gap);
        let x = &report.witness.as_ref().unwrap().x;
        let expected = DVector::from_vec(vec![0.0, 1.5, 0.0, 4.0]);
        assert!((x - &expected).amax() < 1e-4, "x = {:?}", x.as_slice());
        // Exact rational witness from the snapped dual.
        let exact = report.exact.as_ref().expect("exact witness");
        assert_eq!(stacked.a.mul_vec(&exact.x), vec![rat_int(19), rat_int(-5)]);
        let cx: Rational = exact.x.iter().cloned().sum();
        assert_eq!(cx, exact.gamma);
        assert!(crate::exact::rat_to_f64(&exact.gamma) < 5.5 + 1e-4);
    }

    #[test]
    fn symmetric_standard_form() {
        // The fully symmetric instance c = 1, A = 1^T has c in the row
        // space of A, which the stacked construction must reject; the
        // objective is constant (= 1) on the feasible set anyway.
        let n = 3;
        let degenerate = StackedCone::new(
            ConeSpec::Orthant { n },
            vec![rat_int(1); n],
            RatMatrix::from_rows(vec![vec![rat_int(1); n]]),
            vec![rat_int(1)],
            None,
        );
        assert!(matches!(degenerate, Err(ImageError::RankDeficient)));

        // A non-degenerate variant: min x1+x2+x3 s.t. x1+x2+2x3 = 1 has
        // gamma* = 1/2 at x = (0, 0, 1/2).
        let stacked = StackedCone::new(
            ConeSpec::Orthant { n },
            vec![rat_int(1); n],
            RatMatrix::from_i64_rows(&[&[1, 1, 2]]),
            vec![rat_int(1)],
            None,
        )
        .unwrap();
        let report = solve_standard_form(&stacked, &SolverConfig::default()).unwrap();
        assert!((report.gamma - 0.5).abs() < 1e-5, "gamma {}", report.gamma);
        let x = &report.witness.as_ref().unwrap().x;
        assert!(x[0].abs() < 1e-4 && x[1].abs() < 1e-4 && (x[2] - 0.5).abs() < 1e-4);
    }

    #[test]
    fn sos_lower_bound_as_standard_form() {
        // sup{alpha : p - alpha SOS} recast as inf of the constant
        // coefficient row subject to the remaining coefficient rows of
        // the Gram map matching p; exercises the gamma machinery on a
        // PSD (non-orthant) base.
        use crate::poly::{build_sos, grid_minimum, PolySpec};
        let p = PolySpec::parse("x^4 - 3x^2 + 2").unwrap();
        let prog = build_sos(&p, 2).unwrap();
        let full_a = &prog.image.a;
        let c: Vec<Rational> = full_a.row(0).to_vec();
        let rows: Vec<Vec<Rational>> = (1..full_a.nrows())
            .map(|i| full_a.row(i).to_vec())
            .collect();
        let a = RatMatrix::from_rows(rows);
        let b: Vec<Rational> = (1..prog.support.len()).map(|i| prog.b[i].clone()).collect();
        let sc = StackedCone::new(ConeSpec::PsdLogDet { m: 3 }, c, a, b, None).unwrap();
        let config = SolverConfig {
            tol: 1e-7,
            max_iters: 1500,
            ..SolverConfig::default()
        };
        let report = solve_standard_form(&sc, &config).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedMember);
        let bound = 2.0 - report.gamma; // p0 - gamma
        let grid = grid_minimum(&p, 100_000);
        assert!((bound - grid).abs() < 1e-3, "bound {bound} vs grid {grid}");
    }

    #[test]
    fn lp_example_membership_form_initializes() {
        // b = (19, -5) in the image cone of the worked LP example; the
        // initializer centers well inside the default neighborhood.
        use crate::image::ImageCone;
        let ic = ImageCone::new(
            ConeSpec::Orthant { n: 4 },
            RatMatrix::from_i64_rows(&[&[1, 2, 3, 4], &[0, -6, 0, 1]]),
            None,
        )
        .unwrap();
        let problem =
            MembershipProblem::new(ic.dual_oracle(), DVector::from_vec(vec![19.0, -5.0]), None)
                .unwrap();
        let config = SolverConfig::default();
        let it = initialize(&problem, None, &config).unwrap();
        assert!(it.centrality <= config.eta / 2.0);
        let report = solve_membership(&problem, &config).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedMember);
    }

    #[test]
    fn exterior_direction_fails_at_start() {
        // w outside the cone makes w'y0 <= 0: the start cannot be
        // normalized onto the slice.
        let p = orthant_problem(2, vec![1.0, 1.0], Some(vec![-1.0, -1.0]));
        assert!(matches!(
            initialize(&p, None, &SolverConfig::default()),
            Err(IpaError::BadStart(_))
        ));
    }

    #[test]
    fn boundary_direction_is_flagged_not_fatal() {
        let p = orthant_problem(2, vec![1.0, 1.0], Some(vec![1.0, 0.0]));
        assert!(!p.w_certified_interior);
        // Solve still runs: alpha* = 1 (the first coordinate ratio).
        let report = solve_membership(&p, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedMember);
        assert!((report.best_alpha - 1.0).abs() < 1e-3);
    }

    #[test]
    fn on_path_gradient_identity_after_centering() {
        let stacked = StackedCone::new(
            ConeSpec::Orthant { n: 4 },
            vec![rat_int(1); 4],
            RatMatrix::from_i64_rows(&[&[1, 2, 3, 4], &[0, -6, 0, 1]]),
            vec![rat_int(19), rat_int(-5)],
            None,
        )
        .unwrap();
        let oracle = stacked.image.dual_oracle();
        let m = 2;
        let mut q = DVector::zeros(m + 1);
        q[1] = -19.0;
        q[2] = 5.0;
        let mut w = DVector::zeros(m + 1);
        w[0] = 1.0;
        let follower = PathFollower::new(oracle.clone(), q, w);
        // Normalize onto the slice w'y = y0 = 1 before centering.
        let mut y = oracle.reference_point();
        assert!(y[0] > 0.0);
        y /= y[0];
        let tau = 0.1;
        let c = follower.center(&mut y, tau, 1e-10, 400).unwrap();
        assert!(c <= 1e-8, "centrality {c}");
        let y_tail = y.rows(1, m).clone_owned() / y[0];
        let res = stacked.on_path_identity_residual(&y_tail, tau).unwrap();
        assert!(res <= 1e-6, "identity residual {res}");
        // Rescaled tau with recentering: identity still holds.
        let tau2 = 0.2;
        let mut y2 = y.clone();
        follower.center(&mut y2, tau2, 1e-10, 400).unwrap();
        let y2_tail = y2.rows(1, m).clone_owned() / y2[0];
        assert!(stacked.on_path_identity_residual(&y2_tail, tau2).unwrap() <= 1e-6);
        // Orthant LP toy with analytic central path: min y1+2y2 on the
        // simplex slice w = (1,1): y_tau solves the weighted conditions.
        // Orthant LP toy with tight centering: the identity residual
        // tracks the centering tolerance.
        let toy = StackedCone::new(
            ConeSpec::Orthant { n: 2 },
            vec![rat_int(1), rat_int(2)],
            RatMatrix::from_i64_rows(&[&[1, 1]]),
            vec![rat_int(1)],
            None,
        )
        .unwrap();
        let toy_oracle = toy.image.dual_oracle();
        let mut q = DVector::zeros(2);
        q[1] = -1.0;
        let mut w = DVector::zeros(2);
        w[0] = 1.0;
        let toy_follower = PathFollower::new(toy_oracle.clone(), q, w);
        let z = toy.find_slice_point().unwrap();
        let mut y = DVector::zeros(2);
        y[0] = 1.0;
        y[1] = z[0];
        let c = toy_follower.center(&mut y, 0.25, 1e-12, 500).unwrap();
        assert!(c <= 1e-10, "toy centrality {c}");
        let y_tail = y.rows(1, 1).clone_owned() / y[0];
        let res = toy.on_path_identity_residual(&y_tail, 0.25).unwrap();
        assert!(res <= 1e-8, "toy identity residual {res}");
        let _ = rat(1, 2);
    }
}
