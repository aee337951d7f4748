//! Pipeline-level checks of the polynomial front-ends: the certification
//! hierarchy DSOS => SDSOS => SOS on random instances, and sampling
//! soundness of every certified polynomial.

use conecert::exact::{rat_int, RatMatrix, RatVec};
use conecert::ipa::{SolveStatus, SolverConfig};
use conecert::poly::{build_dsos, certify_nonneg, Method, PolySpec};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random polynomial with a diagonally dominant Gram matrix: certified by
/// every method in the hierarchy, with slack.
fn random_dd_polynomial(rng: &mut ChaCha8Rng, d: u32) -> PolySpec {
    let template = PolySpec::parse(if d == 1 { "x^2+1" } else { "x^4+1" }).unwrap();
    let skeleton = build_dsos(&template, d).unwrap();
    let cols = skeleton.image.base_dim();
    // Strictly positive ray weights keep the instance off the boundary.
    let weights: RatVec = (0..cols).map(|_| rat_int(rng.gen_range(1i64..6))).collect();
    let b = skeleton.image.a.mul_vec(&weights);
    let mut p = PolySpec::new(1);
    for (idx, exp) in skeleton.support.iter().enumerate() {
        p.add_term(exp.clone(), b[idx].clone());
    }
    p
}

#[test]
fn dsos_implies_sdsos_implies_sos_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(1812);
    let config = SolverConfig::default();
    let mut dd_certified = 0;
    for k in 0..20 {
        let p = random_dd_polynomial(&mut rng, 1 + (k % 2) as u32);
        let dsos = certify_nonneg(&p, Method::Dsos, false, &config).unwrap();
        if dsos.status != SolveStatus::CertifiedMember {
            continue; // only certified instances feed the implication
        }
        dd_certified += 1;
        let sdsos = certify_nonneg(&p, Method::Sdsos, false, &config).unwrap();
        assert_eq!(
            sdsos.status,
            SolveStatus::CertifiedMember,
            "DSOS-certified {} failed SDSOS",
            p.to_text()
        );
        let sos = certify_nonneg(&p, Method::Sos, false, &config).unwrap();
        assert_eq!(
            sos.status,
            SolveStatus::CertifiedMember,
            "SDSOS-certified {} failed SOS",
            p.to_text()
        );
        // Bounds respect the inclusions too.
        assert!(dsos.bound <= sdsos.bound + 1e-6);
        assert!(sdsos.bound <= sos.bound + 1e-6);
    }
    assert!(
        dd_certified >= 15,
        "only {dd_certified}/20 instances certified"
    );
}

#[test]
fn certified_polynomials_are_nonnegative_on_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let config = SolverConfig::default();
    let cases = vec![
        (PolySpec::parse("x^4 - 3x^2 + 2").unwrap(), Method::Sos),
        (PolySpec::parse("2x^2 + 2x + 3/2").unwrap(), Method::Dsos),
        (PolySpec::parse("2x^2 + 2x + 3/2").unwrap(), Method::Sdsos),
        (conecert::poly::motzkin(), Method::Sonc),
    ];
    for (p, method) in cases {
        let report = certify_nonneg(&p, method, true, &config).unwrap();
        let certified = report
            .certified_poly
            .unwrap_or_else(|| panic!("{method}: no certified polynomial"));
        let n = certified.nvars();
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let v = certified.eval_f64(&x);
            assert!(
                v >= -1e-9,
                "{method}: certified polynomial negative at {x:?}: {v}"
            );
        }
    }
}

#[test]
fn sonc_certificate_of_perturbed_motzkin_is_member() {
    // Pushing the tight -3 coefficient inward by 1e-3 moves the Motzkin
    // polynomial strictly inside the SONC cone; the solver certifies
    // membership (bound >= 0) rather than just a bound.
    let mut p = conecert::poly::motzkin();
    p.add_term(vec![2, 2], conecert::exact::rat(1, 1000));
    let config = SolverConfig {
        tol: 1e-10,
        max_iters: 800,
        ..SolverConfig::default()
    };
    let report = certify_nonneg(&p, Method::Sonc, false, &config).unwrap();
    assert_eq!(report.status, SolveStatus::CertifiedMember);
    assert!(report.bound >= 0.0, "bound {}", report.bound);

    // A matching exact statement at the boundary itself: the unperturbed
    // circuit data (1,1,1,-3) passes the exact dual power cone test.
    let lam = vec![
        conecert::exact::rat(1, 3),
        conecert::exact::rat(1, 3),
        conecert::exact::rat(1, 3),
    ];
    assert!(conecert::barriers::power_dual_member_exact(
        &lam,
        &[rat_int(1), rat_int(1), rat_int(1), rat_int(-3)]
    )
    .unwrap());
}

#[test]
fn lsq_consistency_on_sonc_instance() {
    // The weighted-least-squares identity behind the reconstruction
    // formula holds on power-cone (SONC) pullbacks to 1e-7 relative.
    let prog = conecert::poly::build_sonc(&conecert::poly::motzkin(), false).unwrap();
    let oracle = prog.image.dual_oracle();
    let y = oracle.reference_point();
    let b = conecert::exact::vec_to_f64(&prog.b);
    let defect = prog.image.lsq_consistency_check(&y, &b).unwrap();
    assert!(defect <= 1e-7, "defect {defect}");
    // And with b on the gradient ray, both sides vanish.
    let g = oracle.eval(&y).unwrap().gradient;
    let defect0 = prog.image.lsq_consistency_check(&y, &(-g)).unwrap();
    assert!(defect0 <= 1e-9, "defect {defect0}");
}

#[test]
fn rank_and_structure_of_builders() {
    // Full row rank of every front-end A-matrix on a nontrivial instance.
    let p = PolySpec::parse("x1^2*x2^2 + x1^2 + x2^2 + 1").unwrap();
    let programs = vec![
        conecert::poly::build_sos(&p, 2).unwrap(),
        conecert::poly::build_dsos(&p, 2).unwrap(),
        conecert::poly::build_sdsos(&p, 2).unwrap(),
        conecert::poly::build_sonc(&p, false).unwrap(),
    ];
    for prog in &programs {
        assert_eq!(prog.image.a.rank(), prog.image.a.nrows());
        assert_eq!(prog.b.len(), prog.support.len());
    }
    let _ = RatMatrix::identity(1);
}
