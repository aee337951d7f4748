//! Certified nonnegativity lower bounds and explicit decompositions.
//!
//! `certify_nonneg` runs the membership solver on `sup { alpha | p -
//! alpha in C }` with the constant-one polynomial as the direction `w`,
//! so every iterate yields a rigorously certified lower bound. On
//! request, the dual certificate is snapped to rationals and converted
//! into an explicit decomposition (Gram matrix, circuit parts, ray
//! weights, 2x2 blocks, or AM/GM weights) of the certified polynomial
//! `p - alpha`, which reassembles to it exactly.

use super::frontends::{
    build_dsos, build_sdsos, build_sonc, build_sos, DsosRay, PolyProgram, ProgramKind,
};
use super::{build_odd_ag, Circuit, OddAgCertificate, PolyError, PolySpec};
use crate::barriers::plain_symmetrize_exact;
use crate::certify::{CertKind, DualCertificate};
use crate::exact::{snap_to_rational, snap_vec, RatMatrix, RatVec, Rational};
use crate::ipa::{solve_membership, MembershipProblem, SolveReport, SolveStatus, SolverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Sos,
    Sonc,
    Dsos,
    Sdsos,
    Ag,
}

impl std::str::FromStr for Method {
    type Err = PolyError;
    fn from_str(s: &str) -> Result<Self, PolyError> {
        match s.to_ascii_lowercase().as_str() {
            "sos" => Ok(Method::Sos),
            "sonc" => Ok(Method::Sonc),
            "dsos" => Ok(Method::Dsos),
            "sdsos" => Ok(Method::Sdsos),
            "ag" => Ok(Method::Ag),
            other => Err(PolyError::Config(format!("unknown method {other:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Sos => "sos",
            Method::Sonc => "sonc",
            Method::Dsos => "dsos",
            Method::Sdsos => "sdsos",
            Method::Ag => "ag",
        };
        write!(f, "{s}")
    }
}

/// An explicit certified decomposition; `reassemble` recovers the
/// certified polynomial exactly.
pub enum Decomposition {
    SosGram {
        half_basis: Vec<Vec<u32>>,
        gram: RatMatrix,
    },
    SoncParts {
        circuits: Vec<(Circuit, RatVec, Rational)>,
        squares: Vec<(Vec<u32>, Rational)>,
    },
    DsosCombination {
        half_basis: Vec<Vec<u32>>,
        weights: Vec<(DsosRay, Rational)>,
    },
    SdsosParts {
        half_basis: Vec<Vec<u32>>,
        blocks: Vec<((usize, usize), [Rational; 3])>,
    },
    AgParts {
        exponents: Vec<Vec<u32>>,
        c: RatVec,
        nu: RatVec,
        beta: Option<Vec<u32>>,
        d: Rational,
    },
}

impl Decomposition {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Decomposition::SosGram { .. } => "SOS-Gram",
            Decomposition::SoncParts { .. } => "SONC-parts",
            Decomposition::DsosCombination { .. } => "DSOS-combination",
            Decomposition::SdsosParts { .. } => "SDSOS-parts",
            Decomposition::AgParts { .. } => "AG-parts",
        }
    }
}

/// Expands a decomposition back into coefficients, in exact arithmetic.
pub fn decomposition_reassemble(dec: &Decomposition) -> Result<PolySpec, PolyError> {
    match dec {
        Decomposition::SosGram { half_basis, gram } => {
            let m = half_basis.len();
            if gram.nrows() != m || gram.ncols() != m || !gram.is_symmetric() {
                return Err(PolyError::MalformedPart("Gram matrix shape".into()));
            }
            let n = half_basis.first().map_or(0, Vec::len);
            let mut p = PolySpec::new(n.max(1));
            for i in 0..m {
                for j in 0..m {
                    let exp: Vec<u32> = half_basis[i]
                        .iter()
                        .zip(&half_basis[j])
                        .map(|(a, b)| a + b)
                        .collect();
                    p.add_term(exp, gram[(i, j)].clone());
                }
            }
            Ok(p)
        }
        Decomposition::SoncParts { circuits, squares } => {
            let n = circuits
                .first()
                .map(|(c, _, _)| c.inner.len())
                .or_else(|| squares.first().map(|(e, _)| e.len()))
                .unwrap_or(1);
            let mut p = PolySpec::new(n);
            for (circuit, v, z) in circuits {
                if v.len() != circuit.outer.len() {
                    return Err(PolyError::MalformedPart("circuit part length".into()));
                }
                for (alpha, coeff) in circuit.outer.iter().zip(v) {
                    p.add_term(alpha.clone(), coeff.clone());
                }
                p.add_term(circuit.inner.clone(), z.clone());
            }
            for (exp, s) in squares {
                p.add_term(exp.clone(), s.clone());
            }
            Ok(p)
        }
        Decomposition::DsosCombination {
            half_basis,
            weights,
        } => {
            let n = half_basis.first().map_or(0, Vec::len);
            let mut p = PolySpec::new(n.max(1));
            for (ray, weight) in weights {
                let sq_i: Vec<u32> = half_basis[ray.i].iter().map(|k| 2 * k).collect();
                p.add_term(sq_i, weight.clone());
                if ray.i != ray.j {
                    let sq_j: Vec<u32> = half_basis[ray.j].iter().map(|k| 2 * k).collect();
                    p.add_term(sq_j, weight.clone());
                    let cross: Vec<u32> = half_basis[ray.i]
                        .iter()
                        .zip(&half_basis[ray.j])
                        .map(|(a, b)| a + b)
                        .collect();
                    p.add_term(
                        cross,
                        weight * Rational::from_integer((2 * ray.sign as i64).into()),
                    );
                }
            }
            Ok(p)
        }
        Decomposition::SdsosParts { half_basis, blocks } => {
            let n = half_basis.first().map_or(0, Vec::len);
            let mut p = PolySpec::new(n.max(1));
            for ((i, j), [a, c, b]) in blocks {
                let sq_i: Vec<u32> = half_basis[*i].iter().map(|k| 2 * k).collect();
                let sq_j: Vec<u32> = half_basis[*j].iter().map(|k| 2 * k).collect();
                let cross: Vec<u32> = half_basis[*i]
                    .iter()
                    .zip(&half_basis[*j])
                    .map(|(a, b)| a + b)
                    .collect();
                p.add_term(sq_i, a.clone());
                p.add_term(cross, c * Rational::from_integer(2.into()));
                p.add_term(sq_j, b.clone());
            }
            Ok(p)
        }
        Decomposition::AgParts {
            exponents,
            c,
            beta,
            d,
            ..
        } => {
            let n = exponents.first().map_or(1, Vec::len);
            let mut p = PolySpec::new(n);
            for (e, coeff) in exponents.iter().zip(c) {
                p.add_term(e.clone(), coeff.clone());
            }
            if let Some(beta) = beta {
                p.add_term(beta.clone(), d.clone());
            }
            Ok(p)
        }
    }
}

/// Result of a certified nonnegativity run.
pub struct NonnegReport {
    pub method: Method,
    pub status: SolveStatus,
    /// The best certified value of `sup { alpha | p - alpha in C }`
    /// (`-inf` when nothing certified).
    pub bound: f64,
    /// Exact shift used for the decomposition, when one was produced.
    pub bound_exact: Option<Rational>,
    pub certificate: Option<DualCertificate>,
    pub decomposition: Option<Decomposition>,
    /// The exactly-certified polynomial `p - bound_exact` backing the
    /// decomposition.
    pub certified_poly: Option<PolySpec>,
    pub solve: Option<SolveReport>,
    pub ag: Option<OddAgCertificate>,
}

pub fn build_program(
    p: &PolySpec,
    method: Method,
    half_degree: Option<u32>,
) -> Result<PolyProgram, PolyError> {
    let d = half_degree.unwrap_or_else(|| p.degree().div_ceil(2));
    match method {
        Method::Sos => build_sos(p, d),
        Method::Dsos => build_dsos(p, d),
        Method::Sdsos => build_sdsos(p, d),
        Method::Sonc => build_sonc(p, true),
        Method::Ag => Err(PolyError::Config(
            "the AG front-end does not build an image program".into(),
        )),
    }
}

/// Certifies a lower bound for `p` with the chosen cone, optionally
/// producing the explicit decomposition of the certified `p - alpha`.
pub fn certify_nonneg(
    p: &PolySpec,
    method: Method,
    want_decomposition: bool,
    config: &SolverConfig,
) -> Result<NonnegReport, PolyError> {
    if method == Method::Ag {
        let problem = build_odd_ag(p)?;
        let (bound, cert) = problem.lower_bound(config)?;
        let status = cert.status;
        let bound = if status == SolveStatus::CertifiedMember {
            bound
        } else {
            f64::NEG_INFINITY
        };
        let (decomposition, certified_poly, bound_exact) =
            if want_decomposition && status == SolveStatus::CertifiedMember {
                let alpha = snap_to_rational(bound, config.snap_denominator_cap);
                let shifted = p.sub_constant(&alpha);
                let shifted_prob = build_odd_ag(&shifted)?;
                (
                    Some(Decomposition::AgParts {
                        exponents: shifted_prob.exponents.clone(),
                        c: shifted_prob.c.clone(),
                        nu: cert.nu.clone(),
                        beta: shifted_prob.beta.clone(),
                        d: shifted_prob.d.clone(),
                    }),
                    Some(shifted),
                    Some(alpha),
                )
            } else {
                (None, None, None)
            };
        return Ok(NonnegReport {
            method,
            status,
            bound,
            bound_exact,
            certificate: None,
            decomposition,
            certified_poly,
            solve: None,
            ag: Some(cert),
        });
    }

    let program = build_program(p, method, None)?;
    let mode = match method {
        Method::Sonc => CertKind::B,
        _ => CertKind::H,
    };
    let w = program.const_direction()?;
    let membership = MembershipProblem::new(program.image.dual_oracle(), program.b_f64(), Some(w))?;
    let mut cfg = config.clone();
    cfg.mode = mode;
    let report = solve_membership(&membership, &cfg)?;
    let bound = report.best_alpha;
    let status = report.status;
    let certificate = report.certificate.clone();

    let mut out = NonnegReport {
        method,
        status,
        bound,
        bound_exact: None,
        certificate,
        decomposition: None,
        certified_poly: None,
        solve: Some(report),
        ag: None,
    };
    if !want_decomposition || out.certificate.is_none() {
        return Ok(out);
    }

    // Snap the certificate and the shift to rationals, backing off from
    // the certified boundary until the exact (or snap-repaired)
    // reconstruction goes through.
    let cert = out.certificate.as_ref().unwrap();
    let y_rat = snap_vec(&cert.y, config.snap_denominator_cap);
    let zero_idx = program
        .support_index(&vec![0u32; p.nvars()])
        .expect("const_direction checked the constant row");
    let mut backoff = bound.abs().max(1.0) * 1e-9;
    for _ in 0..8 {
        let alpha = snap_to_rational(bound - backoff, config.snap_denominator_cap);
        let mut z = program.b.clone();
        z[zero_idx] = &z[zero_idx] - &alpha;
        match program.image.reconstruct_primal_exact(&y_rat, &z, mode) {
            Ok(witness) if witness.exact_member == Some(true) => {
                let x = witness.x_exact.expect("exact mode returns rational x");
                let dec = extract_decomposition(&program, &x)?;
                out.certified_poly = Some(p.sub_constant(&alpha));
                out.bound_exact = Some(alpha);
                out.decomposition = Some(dec);
                break;
            }
            _ => backoff *= 10.0,
        }
    }
    Ok(out)
}

fn extract_decomposition(program: &PolyProgram, x: &RatVec) -> Result<Decomposition, PolyError> {
    Ok(match &program.kind {
        ProgramKind::Sos { half_basis } => Decomposition::SosGram {
            half_basis: half_basis.clone(),
            gram: plain_symmetrize_exact(half_basis.len(), x),
        },
        ProgramKind::Dsos { half_basis, rays } => Decomposition::DsosCombination {
            half_basis: half_basis.clone(),
            weights: rays
                .iter()
                .zip(x)
                .filter(|(_, w)| !num_traits::Zero::is_zero(*w))
                .map(|(r, w)| (*r, w.clone()))
                .collect(),
        },
        ProgramKind::Sdsos { half_basis, pairs } => Decomposition::SdsosParts {
            half_basis: half_basis.clone(),
            blocks: pairs
                .iter()
                .enumerate()
                .map(|(k, &(i, j))| {
                    (
                        (i, j),
                        [x[3 * k].clone(), x[3 * k + 1].clone(), x[3 * k + 2].clone()],
                    )
                })
                .collect(),
        },
        ProgramKind::Sonc { circuits, squares } => {
            let mut parts = Vec::new();
            let mut off = 0;
            for c in circuits {
                let v: RatVec = x[off..off + c.outer.len()].to_vec();
                let z = x[off + c.outer.len()].clone();
                off += c.outer.len() + 1;
                parts.push((c.clone(), v, z));
            }
            let sq = squares
                .iter()
                .zip(&x[off..])
                .map(|(e, s)| (e.clone(), s.clone()))
                .collect();
            Decomposition::SoncParts {
                circuits: parts,
                squares: sq,
            }
        }
    })
}

/// Brute-force grid minimum over `[-3, 3]^n`; the independent oracle for
/// lower-bound quality checks (only sensible for n <= 2 here).
pub fn grid_minimum(p: &PolySpec, points_per_axis: usize) -> f64 {
    let n = p.nvars();
    assert!(n <= 2, "grid oracle is for desk-scale dimensions");
    let lin: Vec<f64> = (0..points_per_axis)
        .map(|i| -3.0 + 6.0 * i as f64 / (points_per_axis - 1) as f64)
        .collect();
    let mut best = f64::INFINITY;
    if n == 1 {
        for &x in &lin {
            best = best.min(p.eval_f64(&[x]));
        }
    } else {
        for &x in &lin {
            for &y in &lin {
                best = best.min(p.eval_f64(&[x, y]));
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn sos_bound_for_shifted_quartic() {
        // min(x^4 - 3x^2 + 2) = -1/4 and the polynomial-minus-min is SOS.
        let p = PolySpec::parse("x^4 - 3x^2 + 2").unwrap();
        let config = SolverConfig {
            tol: 1e-9,
            ..SolverConfig::default()
        };
        let report = certify_nonneg(&p, Method::Sos, true, &config).unwrap();
        // min p = -1/4 < 0: p itself is not nonnegative, so the status is
        // a certified bound, not membership.
        assert_eq!(report.status, SolveStatus::CertifiedBoundOnly);
        let grid = grid_minimum(&p, 100_000);
        assert!(
            (report.bound - grid).abs() < 1e-3,
            "bound {} vs grid {grid}",
            report.bound
        );
        // Decomposition reassembles exactly to p - alpha.
        let dec = report.decomposition.as_ref().unwrap();
        let back = decomposition_reassemble(dec).unwrap();
        assert_eq!(back, report.certified_poly.clone().unwrap());
    }

    #[test]
    fn univariate_sos_bound_is_one() {
        // x^2 + 1 - alpha is SOS iff alpha <= 1.
        let p = PolySpec::parse("x^2 + 1").unwrap();
        let report = certify_nonneg(&p, Method::Sos, false, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedMember);
        assert!((report.bound - 1.0).abs() < 1e-6, "bound {}", report.bound);
    }

    #[test]
    fn odd_polynomial_is_not_certified() {
        let p = PolySpec::parse("x").unwrap();
        let report = certify_nonneg(&p, Method::Sos, false, &SolverConfig::default()).unwrap();
        assert_ne!(report.status, SolveStatus::CertifiedMember);
    }

    #[test]
    fn motzkin_sonc_vs_sos_hierarchy_separation() {
        let p = super::super::motzkin();
        let config = SolverConfig {
            tol: 1e-9,
            max_iters: 600,
            ..SolverConfig::default()
        };
        let sonc = certify_nonneg(&p, Method::Sonc, true, &config).unwrap();
        // The Motzkin polynomial sits exactly on the SONC boundary
        // (AM-GM equality at the -3 coefficient), so the certified bound
        // approaches 0 from below without ever reaching it.
        assert_eq!(sonc.status, SolveStatus::CertifiedBoundOnly);
        assert!(sonc.bound >= -1e-6, "SONC bound {}", sonc.bound);
        assert!(
            sonc.bound <= 1e-9,
            "SONC bound {} above the true minimum",
            sonc.bound
        );

        // Motzkin - alpha is never SOS (Newton-polytope obstruction), so
        // the SOS run certifies nothing; its bound is -inf, strictly
        // below the SONC bound.
        let sos = certify_nonneg(&p, Method::Sos, false, &config).unwrap();
        assert_ne!(sos.status, SolveStatus::CertifiedMember);
        assert!(sos.bound < sonc.bound);

        // SONC decomposition reassembles exactly.
        let dec = sonc.decomposition.as_ref().unwrap();
        let back = decomposition_reassemble(dec).unwrap();
        assert_eq!(back, sonc.certified_poly.clone().unwrap());
    }

    #[test]
    fn dsos_and_sdsos_pipelines() {
        // 2x^2 + 2x + 3/2 has diagonally-dominant slack 1/2, so every
        // method certifies it with a positive bound and a decomposition.
        let p = PolySpec::parse("2x^2 + 2x + 3/2").unwrap();
        for method in [Method::Dsos, Method::Sdsos, Method::Sos] {
            let report = certify_nonneg(&p, method, true, &SolverConfig::default()).unwrap();
            assert_eq!(report.status, SolveStatus::CertifiedMember, "{method}");
            assert!(report.bound > 0.25, "{method}: bound {}", report.bound);
            let dec = report.decomposition.as_ref().unwrap();
            let back = decomposition_reassemble(dec).unwrap();
            assert_eq!(back, report.certified_poly.clone().unwrap(), "{method}");
        }
        // 2x^2 + 2x + 1 = (x+1)^2 + x^2 sits exactly on the DSOS
        // boundary (dd slack 0): the certified bound approaches 0 from
        // below and membership itself stays unestablished.
        let q = PolySpec::parse("2x^2 + 2x + 1").unwrap();
        let report = certify_nonneg(&q, Method::Dsos, false, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedBoundOnly);
        assert!(
            report.bound < 0.0 && report.bound > -1e-3,
            "bound {}",
            report.bound
        );
    }

    #[test]
    fn ag_pipeline_reports_and_reassembles() {
        let mut p = PolySpec::parse("x^2 + 2").unwrap();
        p.add_term(vec![1], rat_int(-2));
        let report = certify_nonneg(&p, Method::Ag, true, &SolverConfig::default()).unwrap();
        assert_eq!(report.status, SolveStatus::CertifiedMember);
        assert!((report.bound - 1.0).abs() < 1e-4, "bound {}", report.bound);
        let back = decomposition_reassemble(report.decomposition.as_ref().unwrap()).unwrap();
        assert_eq!(back, report.certified_poly.clone().unwrap());
    }

    #[test]
    fn reassemble_edge_cases() {
        // Empty decomposition is the zero polynomial.
        let empty = Decomposition::SoncParts {
            circuits: vec![],
            squares: vec![],
        };
        assert!(decomposition_reassemble(&empty).unwrap().is_zero());
        // Gram I2 on the univariate degree-1 basis gives 1 + x^2.
        let dec = Decomposition::SosGram {
            half_basis: vec![vec![0], vec![1]],
            gram: RatMatrix::identity(2),
        };
        assert_eq!(
            decomposition_reassemble(&dec).unwrap(),
            PolySpec::parse("x^2+1").unwrap()
        );
        // Malformed Gram is rejected.
        let bad = Decomposition::SosGram {
            half_basis: vec![vec![0], vec![1]],
            gram: RatMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]),
        };
        assert!(matches!(
            decomposition_reassemble(&bad),
            Err(PolyError::MalformedPart(_))
        ));
        let _ = rat(1, 2);
    }

    #[test]
    fn certified_polys_are_nonnegative_on_samples() {
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let p = PolySpec::parse("x^4 - 3x^2 + 2").unwrap();
        let report = certify_nonneg(&p, Method::Sos, true, &SolverConfig::default()).unwrap();
        let certified = report.certified_poly.unwrap();
        for _ in 0..10_000 {
            let x = rng.gen_range(-3.0..3.0);
            assert!(certified.eval_f64(&[x]) >= -1e-9);
        }
    }
}
