//! Build and verify dual membership certificates by hand: the gradient
//! certificate, the B/H witness checks, the Dikin sufficient conditions,
//! and an exact rational replay.
//!
//! ```bash
//! cargo run --example certify_membership
//! ```

use conecert::barriers::{orthant_oracle, psd_cone_oracle};
use conecert::certify::{
    apply_b_inverse, check_certificate, dikin_sufficient_b, dikin_sufficient_h, exact_verify,
    gradient_certificate, CertKind,
};
use conecert::exact::{format_rational, snap_vec};
use nalgebra::DVector;

fn main() {
    // --- Orthant: everything in closed form ---------------------------
    let oracle = orthant_oracle(3);
    let b = DVector::from_vec(vec![2.0, 1.0, 4.0]);
    println!("certify b = {:?} in the nonnegative orthant", b.as_slice());

    // The gradient certificate y_b solves -g(y) = b; here y_b = 1/b.
    let report = gradient_certificate(&*oracle, &b, 1e-12, 100).unwrap();
    println!(
        "  gradient certificate y_b = {:?} ({} Newton steps, residual {:.1e})",
        report.y_b.as_slice(),
        report.newton_iters,
        report.final_residual
    );

    // Any y near y_b certifies b too; the certificate cone is full-dimensional.
    let y = DVector::from_vec(vec![0.52, 0.97, 0.26]);
    let cert_b = check_certificate(&*oracle, &y, &b, CertKind::B).unwrap();
    let cert_h = check_certificate(&*oracle, &y, &b, CertKind::H).unwrap();
    println!(
        "  perturbed y accepted: B witness margin {:.4}, H witness margin {:.4}",
        cert_b.witness_margin, cert_h.witness_margin
    );

    // Sherman-Morrison: B(y)^{-1} b via one Hessian solve.
    let binv_b = apply_b_inverse(&*oracle, &report.y_b, &b).unwrap();
    println!("  B(y_b)^-1 b = {:?} = y_b / (nu + 1)", binv_b.as_slice());

    // Dikin sufficient conditions (sufficient, not necessary).
    let y1 = DVector::from_vec(vec![1.0]);
    let o1 = orthant_oracle(1);
    let b3 = DVector::from_vec(vec![3.0]);
    println!(
        "  orthant n=1, y=1, b=3: dikin_H = {} yet the certificate holds ({:?})",
        dikin_sufficient_h(&*o1, &y1, &b3).unwrap(),
        check_certificate(&*o1, &y1, &b3, CertKind::H).is_ok()
    );
    let b2 = DVector::from_vec(vec![2.0]);
    println!(
        "  y=1, b=2: dikin_B at delta=1: {}, with delta search: {}",
        dikin_sufficient_b(&*o1, &y1, &b2, false).unwrap(),
        dikin_sufficient_b(&*o1, &y1, &b2, true).unwrap()
    );

    // Exact rational replay of the orthant certificate.
    let y_rat = snap_vec(&report.y_b, 1_000_000_000_000);
    let b_rat = snap_vec(&b, 1_000);
    let outcome = exact_verify(&*oracle, &y_rat, &b_rat, CertKind::B).unwrap();
    println!("  exact replay: {outcome:?}\n");

    // --- PSD cone (plain packed coordinates) --------------------------
    let psd = psd_cone_oracle(2);
    // b packs the matrix [[2, 1], [1, 3]] (lower triangle row by row).
    let b = DVector::from_vec(vec![2.0, 1.0, 3.0]);
    println!("certify [[2,1],[1,3]] PSD via the log-det barrier");
    let report = gradient_certificate(&*psd, &b, 1e-12, 200).unwrap();
    let y_rat = snap_vec(&report.y_b, 1_000_000_000_000);
    println!(
        "  y_b ~ ({})",
        y_rat
            .iter()
            .map(format_rational)
            .collect::<Vec<_>>()
            .join(", ")
    );
    let b_rat = snap_vec(&b, 10);
    for kind in [CertKind::B, CertKind::H] {
        let outcome = exact_verify(&*psd, &y_rat, &b_rat, kind).unwrap();
        println!("  exact {kind}-replay: {outcome:?} (rational LDL^T pivots)");
    }
    // A tampered target is refuted, not "disproven": rejection is always
    // inconclusive, but exact replay of a wrong witness fails loudly.
    let bad = snap_vec(&DVector::from_vec(vec![1.0, 2.0, 1.0]), 10);
    println!(
        "  tampered target [[1,2],[2,1]]: exact replay = {:?}",
        exact_verify(&*psd, &y_rat, &bad, CertKind::B).unwrap()
    );
}
