//! Concrete LHSCB oracles for every cone family used by the certification
//! toolkit, plus product cones and the pullback barrier `f_A(y) = f(A^T y)`.
//!
//! A [`ConeSpec`] names the cone the barrier lives on (the *dual* cone of
//! whatever is being certified). Its `oracle()` builds the barrier; the
//! `dual_*` methods test membership in the dual of the spec'd cone, i.e.
//! in the certified cone itself.

mod expcone;
mod logdet;
mod orthant;
mod powercone;
mod product;
mod pullback;
mod relentropy;

pub use expcone::expcone_oracle;
pub use logdet::{logdet_oracle, pack_symmetric, psd_cone_oracle, unpack_plain_symmetric};
pub use orthant::orthant_oracle;
pub use powercone::{power_dual_margin, power_dual_member_exact, powercone_oracle};
pub use product::product_oracle;
pub use pullback::{find_pullback_interior, pullback_oracle};
pub use relentropy::{relentropy_dual_oracle, relentropy_primal_margin};

use std::sync::Arc;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::cone::{BarrierOracle, ConeError};
use crate::exact::{
    format_rational, parse_rational, rational_psd_check, ExactError, PsdStatus, RatMatrix, Rational,
};

/// A rational scalar that serializes as the string `p/q` (`/q` omitted when
/// the denominator is one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatScalar(pub Rational);

impl Serialize for RatScalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RatScalar {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_rational(&s)
            .map(RatScalar)
            .map_err(serde::de::Error::custom)
    }
}

/// Declarative description of a barrier domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ConeSpec {
    /// Nonnegative orthant of dimension `n`; barrier `-sum ln y_i`.
    Orthant { n: usize },
    /// Symmetric PSD matrices of order `m` in plain packed coordinates
    /// (lower triangle, row by row); barrier `-ln det`.
    PsdLogDet { m: usize },
    /// Exponential cone `cl{x1 >= x2 exp(x3/x2), x2 > 0}`.
    ExpCone,
    /// Generalized power cone with the given signature.
    PowerCone { lambda: Vec<RatScalar> },
    /// Dual of the vector relative entropy cone with `n` entropy terms.
    RelEntropyDual { n: usize },
    /// Cartesian product.
    Product { parts: Vec<ConeSpec> },
    /// `{y | A^T y in base}` with the inherited barrier `f(A^T y)`.
    Pullback {
        base: Box<ConeSpec>,
        a: Vec<Vec<RatScalar>>,
    },
}

impl ConeSpec {
    pub fn power(lambda: Vec<Rational>) -> Self {
        ConeSpec::PowerCone {
            lambda: lambda.into_iter().map(RatScalar).collect(),
        }
    }

    pub fn pullback(base: ConeSpec, a: &RatMatrix) -> Self {
        let rows = (0..a.nrows())
            .map(|i| a.row(i).iter().cloned().map(RatScalar).collect())
            .collect();
        ConeSpec::Pullback {
            base: Box::new(base),
            a: rows,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ConeSpec::Orthant { n } => *n,
            ConeSpec::PsdLogDet { m } => m * (m + 1) / 2,
            ConeSpec::ExpCone => 3,
            ConeSpec::PowerCone { lambda } => lambda.len() + 1,
            ConeSpec::RelEntropyDual { n } => 2 * n + 1,
            ConeSpec::Product { parts } => parts.iter().map(ConeSpec::dim).sum(),
            ConeSpec::Pullback { a, .. } => a.len(),
        }
    }

    pub fn pullback_matrix(&self) -> Option<RatMatrix> {
        if let ConeSpec::Pullback { a, .. } = self {
            let rows = a
                .iter()
                .map(|row| row.iter().map(|r| r.0.clone()).collect())
                .collect();
            Some(RatMatrix::from_rows(rows))
        } else {
            None
        }
    }

    /// Builds the barrier oracle for this cone.
    pub fn oracle(&self) -> Result<Arc<dyn BarrierOracle>, ConeError> {
        match self {
            ConeSpec::Orthant { n } => {
                if *n == 0 {
                    return Err(ConeError::InvalidSpec("orthant needs n >= 1".into()));
                }
                Ok(orthant_oracle(*n))
            }
            ConeSpec::PsdLogDet { m } => {
                if *m == 0 {
                    return Err(ConeError::InvalidSpec("psd cone needs m >= 1".into()));
                }
                Ok(psd_cone_oracle(*m))
            }
            ConeSpec::ExpCone => Ok(expcone_oracle()),
            ConeSpec::PowerCone { lambda } => {
                powercone_oracle(lambda.iter().map(|r| r.0.clone()).collect())
            }
            ConeSpec::RelEntropyDual { n } => {
                if *n == 0 {
                    return Err(ConeError::InvalidSpec("rel-entropy needs n >= 1".into()));
                }
                Ok(relentropy_dual_oracle(*n))
            }
            ConeSpec::Product { parts } => {
                let oracles = parts
                    .iter()
                    .map(ConeSpec::oracle)
                    .collect::<Result<Vec<_>, _>>()?;
                product_oracle(oracles)
            }
            ConeSpec::Pullback { base, .. } => {
                let a = self.pullback_matrix().unwrap();
                pullback_oracle(base.oracle()?, a, None)
            }
        }
    }

    /// Float membership margin of `x` in the *dual* of this cone (the
    /// certified cone of the framework): `>= 0` iff member, `> 0` iff
    /// strictly interior. Unsupported for cones whose dual has no direct
    /// test (exp cone, pullbacks).
    pub fn dual_margin(&self, x: &DVector<f64>) -> Result<f64, ConeError> {
        if x.len() != self.dim() {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        match self {
            ConeSpec::Orthant { .. } => Ok(x.min()),
            ConeSpec::PsdLogDet { m } => {
                let mat = unpack_plain_symmetric(*m, x);
                let eig = mat.symmetric_eigen();
                Ok(eig.eigenvalues.min())
            }
            ConeSpec::PowerCone { lambda } => {
                let lam: Vec<f64> = lambda
                    .iter()
                    .map(|r| crate::exact::rat_to_f64(&r.0))
                    .collect();
                Ok(power_dual_margin(&lam, x))
            }
            ConeSpec::RelEntropyDual { n } => Ok(relentropy_primal_margin(*n, x)),
            ConeSpec::Product { parts } => {
                let mut margin = f64::INFINITY;
                let mut off = 0;
                for part in parts {
                    let d = part.dim();
                    let slice = DVector::from_iterator(d, x.iter().skip(off).take(d).cloned());
                    margin = margin.min(part.dual_margin(&slice)?);
                    off += d;
                }
                Ok(margin)
            }
            ConeSpec::ExpCone | ConeSpec::Pullback { .. } => Err(ConeError::InvalidSpec(
                "no direct dual membership test for this cone".into(),
            )),
        }
    }

    /// Exact membership of a rational `x` in the dual of this cone.
    pub fn dual_member_exact(&self, x: &[Rational]) -> Result<bool, ExactError> {
        if x.len() != self.dim() {
            return Err(ExactError::DimensionMismatch(format!(
                "expected {}, got {}",
                self.dim(),
                x.len()
            )));
        }
        match self {
            ConeSpec::Orthant { .. } => Ok(x.iter().all(|v| !v.is_negative())),
            ConeSpec::PsdLogDet { m } => {
                let mat = plain_symmetrize_exact(*m, x);
                Ok(rational_psd_check(&mat)? != PsdStatus::NotPsd)
            }
            ConeSpec::PowerCone { lambda } => {
                let lam: Vec<Rational> = lambda.iter().map(|r| r.0.clone()).collect();
                power_dual_member_exact(&lam, x)
            }
            ConeSpec::Product { parts } => {
                let mut off = 0;
                for part in parts {
                    let d = part.dim();
                    if !part.dual_member_exact(&x[off..off + d])? {
                        return Ok(false);
                    }
                    off += d;
                }
                Ok(true)
            }
            _ => Err(ExactError::Unavailable(
                "no exact dual membership test for this cone".into(),
            )),
        }
    }
}

use num_traits::Signed;

/// Expands plain packed coordinates (lower triangle, row by row) into the
/// full symmetric rational matrix with the packed values on both sides.
pub fn plain_symmetrize_exact(m: usize, x: &[Rational]) -> RatMatrix {
    let mut out = RatMatrix::zeros(m, m);
    let mut k = 0;
    for i in 0..m {
        for j in 0..=i {
            out[(i, j)] = x[k].clone();
            out[(j, i)] = x[k].clone();
            k += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_int};

    #[test]
    fn conespec_json_round_trip() {
        let spec = ConeSpec::Product {
            parts: vec![
                ConeSpec::Orthant { n: 2 },
                ConeSpec::power(vec![rat(2, 3), rat(1, 3)]),
                ConeSpec::PsdLogDet { m: 2 },
            ],
        };
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"2/3\""), "{json}");
        let back: ConeSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(spec, back);
        assert_eq!(spec.dim(), 2 + 3 + 3);
    }

    #[test]
    fn orthant_dual_margin_is_min_entry() {
        let spec = ConeSpec::Orthant { n: 3 };
        let x = DVector::from_vec(vec![2.0, 0.5, -1.0]);
        assert_eq!(spec.dual_margin(&x).unwrap(), -1.0);
    }

    #[test]
    fn psd_dual_membership_plain_packing() {
        let spec = ConeSpec::PsdLogDet { m: 2 };
        // b = (1, 0, 1) is the identity; member.
        assert!(spec
            .dual_member_exact(&[rat_int(1), rat_int(0), rat_int(1)])
            .unwrap());
        // sym((1, 2, 1)) = [[1,2],[2,1]] has eigenvalues 3 and -1.
        assert!(!spec
            .dual_member_exact(&[rat_int(1), rat_int(2), rat_int(1)])
            .unwrap());
        let x = DVector::from_vec(vec![1.0, 2.0, 1.0]);
        assert!((spec.dual_margin(&x).unwrap() - (-1.0)).abs() < 1e-10);
    }
}
