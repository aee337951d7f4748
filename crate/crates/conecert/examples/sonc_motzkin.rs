//! The Motzkin polynomial: nonnegative (AM-GM) but not a sum of squares.
//! SONC certifies it through a single power-cone circuit while the SOS
//! relaxation certifies nothing — the classic hierarchy separation.
//!
//! ```bash
//! cargo run --release --example sonc_motzkin
//! ```

use conecert::exact::format_rational;
use conecert::ipa::SolverConfig;
use conecert::poly::{
    certify_nonneg, decomposition_reassemble, enumerate_circuits, motzkin, Decomposition, Method,
};

fn main() {
    let p = motzkin();
    println!("Motzkin polynomial: {}", p.to_text());

    // Circuit structure of the support.
    let support: Vec<Vec<u32>> = p.terms().keys().cloned().collect();
    let (circuits, squares) = enumerate_circuits(&support).unwrap();
    println!("\nmonomial squares: {squares:?}");
    for c in &circuits {
        println!(
            "circuit: inner {:?} = sum lambda_i outer_i with outer {:?}, lambda = ({})",
            c.inner,
            c.outer,
            c.lambda
                .iter()
                .map(format_rational)
                .collect::<Vec<_>>()
                .join(", ")
        );
    }
    println!("the -3 coefficient is AM-GM tight: |z| = 3 = prod (v_i/lambda_i)^lambda_i exactly.");

    let config = SolverConfig {
        tol: 1e-9,
        max_iters: 600,
        ..SolverConfig::default()
    };
    let sonc = certify_nonneg(&p, Method::Sonc, true, &config).unwrap();
    println!(
        "\nSONC: status {:?}, certified bound {:.3e} (boundary instance: the bound approaches 0 from below)",
        sonc.status, sonc.bound
    );
    if let Some(Decomposition::SoncParts { circuits, squares }) = &sonc.decomposition {
        for (c, v, z) in circuits {
            println!(
                "  circuit part: v = ({}), z = {}",
                v.iter().map(format_rational).collect::<Vec<_>>().join(", "),
                format_rational(z)
            );
            let _ = c;
        }
        for (exp, s) in squares {
            println!("  square part at {exp:?}: {}", format_rational(s));
        }
        let back = decomposition_reassemble(sonc.decomposition.as_ref().unwrap()).unwrap();
        println!(
            "  reassembles exactly to the certified polynomial: {}",
            back == sonc.certified_poly.clone().unwrap()
        );
    }

    // SOS cannot certify the Motzkin polynomial shifted by any constant:
    // the x^2 y^2 coefficient of any Gram over the halved Newton polytope
    // is a diagonal entry, but it would have to be -3.
    let sos = certify_nonneg(&p, Method::Sos, false, &config).unwrap();
    println!(
        "\nSOS: status {:?}, certified bound {}",
        sos.status,
        if sos.bound.is_finite() {
            format!("{:.3e}", sos.bound)
        } else {
            "-inf (no certificate exists)".into()
        }
    );
    println!(
        "hierarchy separation observed: SONC bound {:.3e} > SOS bound {}",
        sonc.bound,
        if sos.bound.is_finite() {
            format!("{:.3e}", sos.bound)
        } else {
            "-inf".into()
        }
    );
}
