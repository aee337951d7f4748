//! Run the LHSCB identity suite on every barrier family.
//!
//! Each oracle must satisfy, at random interior points:
//!   - finite-difference gradient and Hessian agreement,
//!   - H(y) y = -g(y),
//!   - y' H(y) y = nu,
//!   - g(t y) = g(y)/t and H(t y) = H(y)/t^2,
//!
//! and radius-0.999 Dikin spheres must stay strictly interior.
//!
//! ```bash
//! cargo run --example barrier_selfcheck
//! ```

use conecert::barriers::ConeSpec;
use conecert::barriers::RatScalar;
use conecert::cone::{dikin_safety_count, lhscb_selfcheck};
use conecert::exact::{rat, rat_int};

fn main() {
    let families: Vec<(&str, ConeSpec)> = vec![
        ("orthant(4)", ConeSpec::Orthant { n: 4 }),
        ("psd-logdet(3)", ConeSpec::PsdLogDet { m: 3 }),
        ("exp-cone", ConeSpec::ExpCone),
        (
            "power-cone(2/3,1/3)",
            ConeSpec::power(vec![rat(2, 3), rat(1, 3)]),
        ),
        ("rel-entropy-dual(2)", ConeSpec::RelEntropyDual { n: 2 }),
        (
            "product(orthant x exp)",
            ConeSpec::Product {
                parts: vec![ConeSpec::Orthant { n: 2 }, ConeSpec::ExpCone],
            },
        ),
        (
            "pullback(orthant(4))",
            ConeSpec::Pullback {
                base: Box::new(ConeSpec::Orthant { n: 4 }),
                a: vec![
                    vec![
                        RatScalar(rat_int(1)),
                        RatScalar(rat_int(2)),
                        RatScalar(rat_int(3)),
                        RatScalar(rat_int(4)),
                    ],
                    vec![
                        RatScalar(rat_int(0)),
                        RatScalar(rat_int(-6)),
                        RatScalar(rat_int(0)),
                        RatScalar(rat_int(1)),
                    ],
                ],
            },
        ),
    ];

    println!("=== LHSCB identity suite (50 samples per family) ===\n");
    let mut all_ok = true;
    for (name, spec) in &families {
        let oracle = spec.oracle().expect("oracle construction");
        let report = lhscb_selfcheck(&*oracle, 50, 20240817).expect("selfcheck run");
        println!("{name:24} nu = {:5.1}  {report}", oracle.nu());
        all_ok &= report.passed();

        let center = oracle.reference_point();
        let pass = dikin_safety_count(&*oracle, &center, 0.999, 200, 7).expect("dikin");
        println!("{:24} Dikin sphere r=0.999: {pass}/200 points interior", "");
        all_ok &= pass == 200;
    }
    println!(
        "\n{}",
        if all_ok {
            "all families pass"
        } else {
            "VIOLATIONS FOUND"
        }
    );
}
