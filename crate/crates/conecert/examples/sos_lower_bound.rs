//! Certified SOS lower bound of a univariate quartic, with the explicit
//! rational Gram decomposition of `p - bound`.
//!
//! ```bash
//! cargo run --release --example sos_lower_bound
//! ```

use conecert::exact::{format_rational, rat_to_f64};
use conecert::ipa::SolverConfig;
use conecert::poly::{
    certify_nonneg, decomposition_reassemble, grid_minimum, Decomposition, Method, PolySpec,
};

fn main() {
    let p = PolySpec::parse("x^4 - 3x^2 + 2").unwrap();
    println!("p(x) = {}", p.to_text());
    println!(
        "grid minimum over [-3,3] (1e5 points): {:.6}",
        grid_minimum(&p, 100_000)
    );

    let config = SolverConfig {
        tol: 1e-9,
        ..SolverConfig::default()
    };
    let report = certify_nonneg(&p, Method::Sos, true, &config).unwrap();
    println!(
        "certified SOS lower bound: {:.9} (status {:?})",
        report.bound, report.status
    );
    println!(
        "every solver iterate already certified a bound; the trace has {} entries",
        report.solve.as_ref().map_or(0, |s| s.trace.len())
    );

    let alpha = report.bound_exact.as_ref().unwrap();
    println!(
        "\nexact certified shift alpha = {} ~ {:.9}",
        format_rational(alpha),
        rat_to_f64(alpha)
    );
    let Some(Decomposition::SosGram { half_basis, gram }) = &report.decomposition else {
        panic!("expected a Gram decomposition");
    };
    println!("Gram matrix of p - alpha over basis {half_basis:?}:");
    for i in 0..gram.nrows() {
        let row: Vec<String> = (0..gram.ncols())
            .map(|j| format_rational(&gram[(i, j)]))
            .collect();
        println!("  [{}]", row.join(", "));
    }
    let back = decomposition_reassemble(report.decomposition.as_ref().unwrap()).unwrap();
    println!(
        "reassembled polynomial: {}  (equals p - alpha exactly: {})",
        back.to_text(),
        back == report.certified_poly.clone().unwrap()
    );

    // The same machinery answers the plain membership question.
    let q = PolySpec::parse("x^2 + 1").unwrap();
    let r = certify_nonneg(&q, Method::Sos, false, &SolverConfig::default()).unwrap();
    println!(
        "\nx^2 + 1: status {:?}, certified bound {:.6} (it is SOS with unit slack)",
        r.status, r.bound
    );
    let odd = PolySpec::parse("x").unwrap();
    let r = certify_nonneg(&odd, Method::Sos, false, &SolverConfig::default()).unwrap();
    println!(
        "x: status {:?} (no certificate can exist; rejection is inconclusive, never a disproof)",
        r.status
    );
}
