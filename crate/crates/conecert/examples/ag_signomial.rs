//! Odd-AG functions: nonnegativity of `sum c_a |x|^a + d x^beta` by a
//! single AM/GM application, certified through the relative entropy cone.
//! The balanced weights come from the AM/GM dual Newton solve; the two
//! entropy memberships (± the odd coefficient) are then B-certified on
//! the plain cone R_N by the membership solver.
//!
//! ```bash
//! cargo run --release --example ag_signomial
//! ```

use conecert::exact::{format_rational, rat, rat_int};
use conecert::ipa::SolverConfig;
use conecert::poly::{build_odd_ag, certify_nonneg, Method, PolySpec};

fn main() {
    let config = SolverConfig::default();

    // 1 + x^2 + d x is nonnegative iff |d| <= 2 (discriminant).
    println!("family p_d(x) = x^2 + d x + 1, nonnegative iff |d| <= 2:\n");
    for d in [rat_int(-1), rat(-199, 100), rat_int(-2), rat(-21, 10)] {
        let mut p = PolySpec::parse("x^2 + 1").unwrap();
        p.add_term(vec![1], d.clone());
        let problem = build_odd_ag(&p).unwrap();
        let (capacity, _) = problem.amgm_capacity(0.0).unwrap();
        let cert = problem.certify(&config).unwrap();
        println!(
            "  d = {:>8}: AM/GM capacity {:.6}, status {:?}",
            format_rational(&d),
            capacity,
            cert.status
        );
        if !cert.nu.is_empty() && cert.slack_plus.is_finite() && cert.slack_plus > 0.0 {
            println!(
                "             nu = ({}), entropy slacks {:+.3e} / {:+.3e}",
                cert.nu
                    .iter()
                    .map(format_rational)
                    .collect::<Vec<_>>()
                    .join(", "),
                cert.slack_plus,
                cert.slack_minus
            );
            println!(
                "             balance residual exactly zero: {}",
                problem
                    .balance_residual(&cert.nu)
                    .iter()
                    .all(num_traits::Zero::is_zero)
            );
        }
    }
    println!("\nthe d = -2 boundary (AM-GM equality, p = (x-1)^2) and anything beyond");
    println!("come back Inconclusive: the interior-point scheme certifies strictly");
    println!("interior instances only, and rejection never disproves membership.\n");

    // A bivariate signomial-style example: 1 + x1^4 + x2^4 + d x1 x2^2.
    let mut p = PolySpec::parse("x1^4 + x2^4 + 1").unwrap();
    p.add_term(vec![1, 2], rat(-5, 2));
    println!("bivariate {}:", p.to_text());
    let problem = build_odd_ag(&p).unwrap();
    let (capacity, mu) = problem.amgm_capacity(0.0).unwrap();
    println!("  capacity {capacity:.6} at mu = {:?}", mu.as_slice());
    let cert = problem.certify(&config).unwrap();
    println!("  status {:?}", cert.status);

    // Certified lower bound: sup alpha with p - alpha still odd-AG.
    let mut p = PolySpec::parse("x^2 + 2").unwrap();
    p.add_term(vec![1], rat_int(-2));
    println!("\nlower bound for {} (= (x-1)^2 + 1):", p.to_text());
    let report = certify_nonneg(&p, Method::Ag, true, &config).unwrap();
    println!(
        "  certified bound {:.6} (true distance from nonnegativity: 1), status {:?}",
        report.bound, report.status
    );
}
