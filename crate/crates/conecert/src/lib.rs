//! Cone membership certificates from the dual cone.
//!
//! Vectors in the interior of a dual cone can certify *membership* in the
//! primal cone: a `y` in the interior of `K*` is a B-certificate of `b` if
//! `B(y)^{-1} b` lies in `K*` (with `B(y) = H(y) + g(y) g(y)^T` built from
//! a logarithmically homogeneous self-concordant barrier of `K*`), and an
//! H-certificate if `H(y)^{-1} b` does. B-certificates are sound for every
//! such cone; H-certificates for the log-det/hyperbolic families only.
//!
//! The crate provides:
//!
//! - barrier oracles for the orthant, log-det (PSD), exponential, power
//!   and relative-entropy-dual cones, their products and pullbacks
//!   ([`barriers`]);
//! - certificate construction, verification (floating and exact rational)
//!   and the Dikin-ellipsoid sufficient conditions ([`certify`]);
//! - linear images `K_A = {Ax | x in K}` with the closed-form primal
//!   reconstruction `x = B(A^T y) A^T (A B(A^T y) A^T)^{-1} b` ([`image`]);
//! - a short-step path-following interior-point solver for membership and
//!   standard-form problems that emits a certificate at every iterate
//!   ([`ipa`]);
//! - polynomial nonnegativity front-ends (SOS, SONC, DSOS, SDSOS, odd-AG)
//!   that translate nonnegativity into cone membership ([`poly`]);
//! - exact rational linear algebra to replay certificates rigorously
//!   ([`exact`]).
//!
//! The `examples/` directory walks through each capability; the `conecert`
//! binary exposes the same flows as subcommands.

pub mod barriers;
pub mod certify;
pub mod cli;
pub mod cone;
pub mod exact;
pub mod image;
pub mod ipa;
pub mod poly;

pub use barriers::ConeSpec;
pub use cone::{BarrierEval, BarrierOracle, ConeError, InteriorPoint, LocalNormContext};
pub use exact::{RatMatrix, RatVec, Rational};
