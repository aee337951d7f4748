//! Reproduce the two counterexamples showing that H-certificates fail
//! beyond hyperbolic cones: on the exponential and power cones there are
//! interior points y, z, w with w' H(y) z < 0, so H(y)z leaves the dual
//! cone even though y and z are comfortably interior.
//!
//! ```bash
//! cargo run --example hessian_counterexamples
//! ```

use conecert::barriers::{expcone_oracle, powercone_oracle};
use conecert::certify::{check_certificate, CertKind, CertifyError};
use conecert::exact::rat;
use nalgebra::DVector;

fn main() {
    println!("=== Exponential cone ===");
    let oracle = expcone_oracle();
    let y = DVector::from_vec(vec![6.0, 2.0, -3.0]);
    let z = DVector::from_vec(vec![2.0, 4.0, -3.0]);
    let w = DVector::from_vec(vec![416.0, 1.0, 6.0]);
    for (name, p) in [("y", &y), ("z", &z), ("w", &w)] {
        println!("  margin({name}) = {:.6}  (interior)", oracle.margin(p));
    }
    let h = oracle.eval(&y).unwrap().hessian;
    let whz = w.dot(&(&h * &z));
    let ln3 = 3.0f64.ln();
    let closed = (ln3 * (3211.0 + 904.0 * ln3) - 4637.0) / (9.0 * (3.0 + 9.0f64.ln()).powi(2));
    println!("  w' H(y) z           = {whz:.12}");
    println!("  closed form         = {closed:.12}");
    println!("  negative, so H(y)z is NOT in the dual cone: H-certificates fail here.");
    // The toolkit refuses H-certificates on this cone outright:
    match check_certificate(&*oracle, &y, &z, CertKind::H) {
        Err(CertifyError::HNotValidForCone) => {
            println!("  check_certificate(kind = H) -> HNotValidForCone (as it must)")
        }
        other => println!("  unexpected: {other:?}"),
    }
    // B-certificates remain sound: B(y)z is in the cone for any y, z.
    let b_matrix = conecert::certify::build_b_matrix(&*oracle, &y).unwrap();
    let bz = &b_matrix * &z;
    println!(
        "  margin(B(y) z)      = {:.6}  (B stays inside)\n",
        oracle.margin(&bz)
    );

    println!("=== Power cone, signature (2/3, 1/3) ===");
    let oracle = powercone_oracle(vec![rat(2, 3), rat(1, 3)]).unwrap();
    let y = DVector::from_vec(vec![10.0, 1.0, 1.0]);
    let z = DVector::from_vec(vec![1.0, 20.0, 2.0]);
    let w = DVector::from_vec(vec![355.0, 1.0, 50.0]);
    for (name, p) in [("y", &y), ("z", &z), ("w", &w)] {
        println!("  margin({name}) = {:.6}  (interior)", oracle.margin(p));
    }
    let h = oracle.eval(&y).unwrap().hessian;
    let whz = w.dot(&(&h * &z));
    let c10 = 10.0f64.cbrt();
    let closed = (12871.0 - 443620.0 * c10 + 195500.0 * 100.0f64.cbrt())
        / (60.0 * (1.0 - 10.0 * c10).powi(2));
    println!("  w' H(y) z           = {whz:.12}");
    println!("  closed form         = {closed:.12}");
    println!("  both < -1.399: the power cone is not hyperbolic either.");
}
