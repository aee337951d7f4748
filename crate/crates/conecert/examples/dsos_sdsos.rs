//! LP- and SOCP-representable inner approximations of SOS: DSOS (Gram
//! matrix diagonally dominant, an orthant over its M^2 extreme rays) and
//! SDSOS (factor width two, a product of 2x2 PSD blocks). The certified
//! bounds respect the inclusion DSOS <= SDSOS <= SOS.
//!
//! ```bash
//! cargo run --release --example dsos_sdsos
//! ```

use conecert::exact::format_rational;
use conecert::ipa::SolverConfig;
use conecert::poly::{certify_nonneg, decomposition_reassemble, Decomposition, Method, PolySpec};

fn main() {
    let p = PolySpec::parse("2x^2 + 2x + 3/2").unwrap();
    println!("p(x) = {}\n", p.to_text());
    let config = SolverConfig::default();

    let mut bounds = Vec::new();
    for method in [Method::Dsos, Method::Sdsos, Method::Sos] {
        let report = certify_nonneg(&p, method, true, &config).unwrap();
        println!(
            "{method:6} status {:?}  certified bound {:+.6}",
            report.status, report.bound
        );
        match report.decomposition.as_ref().unwrap() {
            Decomposition::DsosCombination { weights, .. } => {
                for (ray, w) in weights {
                    let desc = if ray.i == ray.j {
                        format!("m{}^2", ray.i)
                    } else {
                        format!(
                            "(m{} {} m{})^2",
                            ray.i,
                            if ray.sign > 0 { "+" } else { "-" },
                            ray.j
                        )
                    };
                    println!("         {} * {desc}", format_rational(w));
                }
            }
            Decomposition::SdsosParts { blocks, .. } => {
                for ((i, j), [a, c, b]) in blocks {
                    println!(
                        "         pair (m{i}, m{j}): [[{}, {}], [{}, {}]]",
                        format_rational(a),
                        format_rational(c),
                        format_rational(c),
                        format_rational(b)
                    );
                }
            }
            Decomposition::SosGram { gram, .. } => {
                for r in 0..gram.nrows() {
                    let row: Vec<String> = (0..gram.ncols())
                        .map(|c| format_rational(&gram[(r, c)]))
                        .collect();
                    println!("         [{}]", row.join(", "));
                }
            }
            _ => {}
        }
        let back = decomposition_reassemble(report.decomposition.as_ref().unwrap()).unwrap();
        assert_eq!(back, report.certified_poly.clone().unwrap());
        bounds.push(report.bound);
        println!("         decomposition reassembles exactly\n");
    }
    println!(
        "inclusion DSOS <= SDSOS <= SOS respected by the bounds: {:.6} <= {:.6} <= {:.6}: {}",
        bounds[0],
        bounds[1],
        bounds[2],
        bounds[0] <= bounds[1] + 1e-9 && bounds[1] <= bounds[2] + 1e-9
    );

    // A boundary case: 2x^2 + 2x + 1 = (x+1)^2 + x^2 is diagonally
    // dominant with zero slack, so DSOS certifies bounds approaching 0
    // but never membership itself.
    let q = PolySpec::parse("2x^2 + 2x + 1").unwrap();
    let report = certify_nonneg(&q, Method::Dsos, false, &config).unwrap();
    println!(
        "\nboundary instance {}: DSOS status {:?}, bound {:+.2e}",
        q.to_text(),
        report.status,
        report.bound
    );
}
