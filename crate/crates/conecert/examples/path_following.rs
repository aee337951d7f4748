//! Anatomy of the short-step membership solve: the neighborhood
//! invariant, the geometric tau schedule, and a certificate at every
//! iterate.
//!
//! ```bash
//! cargo run --example path_following
//! ```

use conecert::barriers::ConeSpec;
use conecert::certify::CertKind;
use conecert::ipa::{initialize, solve_membership, step, MembershipProblem, SolverConfig};
use nalgebra::DVector;

fn main() {
    // Is b = (1, 4, 2) in the cone spanned by w = (1, 2, 1/2) plus the
    // orthant? The optimal alpha is min_i b_i / w_i = 1.
    let oracle = ConeSpec::Orthant { n: 3 }.oracle().unwrap();
    let b = DVector::from_vec(vec![1.0, 4.0, 2.0]);
    let w = DVector::from_vec(vec![1.0, 2.0, 0.5]);
    let problem = MembershipProblem::new(oracle, b, Some(w)).unwrap();
    println!(
        "direction w certified interior: {}",
        problem.w_certified_interior
    );

    let config = SolverConfig::with_mode(CertKind::B);
    let eta = 0.9 / (2.0 * (1.0 + 3.0)); // B-mode neighborhood for nu = 3

    // Manual stepping first.
    let mut it = initialize(&problem, None, &config).unwrap();
    println!("\nmanual short steps (tau shrinks by 1 - theta/sqrt(nu)):");
    println!(
        "  init: tau = {:.4}, alpha = {:+.4}, centrality = {:.2e}",
        it.tau, it.alpha, it.centrality
    );
    for k in 0..6 {
        it = step(&problem, &it, eta, 0.125).unwrap();
        println!(
            "  {k:>4}: tau = {:.4}, alpha = {:+.4}, centrality = {:.2e}",
            it.tau, it.alpha, it.centrality
        );
    }

    // Full solve with the certified trace.
    let report = solve_membership(&problem, &config).unwrap();
    println!(
        "\nsolve: status {:?}, certified alpha = {:.6} (closed form: 1)",
        report.status, report.best_alpha
    );
    let certified = report.trace.iter().filter(|t| t.certified).count();
    println!(
        "trace: {} iterates, {certified} carry a verified B-certificate of b - alpha w",
        report.trace.len()
    );
    let max_centrality = report
        .trace
        .iter()
        .map(|t| t.centrality)
        .fold(0.0f64, f64::max);
    println!("neighborhood invariant: max centrality {max_centrality:.3e} <= eta = {eta:.3e}");
    for t in report.trace.iter().take(4) {
        println!("  {t:?}");
    }
    println!("  ...");

    // Inconclusive runs never claim non-membership.
    let oracle = ConeSpec::Orthant { n: 2 }.oracle().unwrap();
    let problem = MembershipProblem::new(
        oracle,
        DVector::from_vec(vec![-3.0, 5.0]),
        Some(DVector::from_vec(vec![1.0, 1.0])),
    )
    .unwrap();
    let report = solve_membership(&problem, &config).unwrap();
    println!(
        "\nb = (-3, 5): status {:?} with certified bound {:.4} — a bound, not a disproof",
        report.status, report.best_alpha
    );
}
