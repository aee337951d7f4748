//! Builders that express each nonnegativity cone as a linear image
//! `K_A = {Ax | x in K}` of a structured cone with a known dual barrier:
//!
//! - SOS: `K` = PSD Gram matrices, `A` = the monomial-product map, dual
//!   barrier `-ln det` of the moment matrix;
//! - DSOS: `K` = weights over the `M^2` extreme rays of diagonally
//!   dominant PSD matrices, dual barrier = pulled-back orthant log;
//! - SDSOS: `K` = products of 2x2 PSD blocks (factor width two);
//! - SONC: `K` = products of dual power cones (one per circuit) and
//!   nonnegative half-lines (one per monomial square).

use std::collections::BTreeMap;

use nalgebra::DVector;
use num_traits::Signed;

use super::circuits::{circuit_is_valid, enumerate_circuits, is_even, Circuit};
use super::{PolyError, PolySpec};
use crate::barriers::ConeSpec;
use crate::exact::{rat_int, RatMatrix, RatVec};
use crate::image::ImageCone;

/// All exponent vectors of total degree at most `d` in `n` variables,
/// graded-lexicographically ordered.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, var: usize, left: u32) {
        if var == current.len() {
            out.push(current.clone());
            return;
        }
        for k in 0..=left {
            current[var] = k;
            rec(out, current, var + 1, left - k);
        }
        current[var] = 0;
    }
    rec(&mut out, &mut current, 0, d);
    out.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));
    out
}

/// An extreme ray of the diagonally-dominant PSD cone: `e_i e_i^T` when
/// `i == j`, else `(e_i + sign e_j)(e_i + sign e_j)^T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DsosRay {
    pub i: usize,
    pub j: usize,
    pub sign: i8,
}

/// What a program certifies and how to unpack its base-cone vectors back
/// into polynomial data.
pub enum ProgramKind {
    Sos {
        half_basis: Vec<Vec<u32>>,
    },
    Dsos {
        half_basis: Vec<Vec<u32>>,
        rays: Vec<DsosRay>,
    },
    Sdsos {
        half_basis: Vec<Vec<u32>>,
        pairs: Vec<(usize, usize)>,
    },
    Sonc {
        circuits: Vec<Circuit>,
        squares: Vec<Vec<u32>>,
    },
}

/// A polynomial membership program: the image cone, the target coefficient
/// vector `b` over `support`, and the structural metadata for
/// decompositions.
pub struct PolyProgram {
    pub image: ImageCone,
    pub b: RatVec,
    pub support: Vec<Vec<u32>>,
    pub kind: ProgramKind,
    pub poly: PolySpec,
}

impl PolyProgram {
    pub fn b_f64(&self) -> DVector<f64> {
        crate::exact::vec_to_f64(&self.b)
    }

    pub fn support_index(&self, exp: &[u32]) -> Option<usize> {
        self.support.iter().position(|e| e == exp)
    }

    /// Coefficient direction of the constant-one polynomial, the `w` of
    /// the lower-bound membership problem.
    pub fn const_direction(&self) -> Result<DVector<f64>, PolyError> {
        let zero = vec![0u32; self.poly.nvars()];
        let idx = self
            .support_index(&zero)
            .ok_or_else(|| PolyError::Config("constant monomial not in the cone span".into()))?;
        let mut w = DVector::zeros(self.support.len());
        w[idx] = 1.0;
        Ok(w)
    }
}

/// Moments of the uniform measure on `[-1,1]^n`: `prod 1/(g_k+1)` for even
/// exponents, zero for odd ones. Moment vectors of full-support measures
/// are strictly interior dual points for every front-end here.
fn uniform_moments(exponents: &[Vec<u32>]) -> DVector<f64> {
    DVector::from_iterator(
        exponents.len(),
        exponents.iter().map(|e| {
            if is_even(e) {
                e.iter().map(|&k| 1.0 / (k as f64 + 1.0)).product()
            } else {
                0.0
            }
        }),
    )
}

fn coefficient_vector(p: &PolySpec, support: &[Vec<u32>]) -> RatVec {
    support.iter().map(|e| p.coeff(e)).collect()
}

fn check_degree(p: &PolySpec, d: u32) -> Result<(), PolyError> {
    if p.degree() > 2 * d {
        return Err(PolyError::DegreeMismatch {
            degree: p.degree(),
            half: d,
        });
    }
    Ok(())
}

/// SOS membership: `p = m_d^T X m_d` for PSD `X`. `A` maps packed Gram
/// entries to coefficients with multiplicity tallies (1 on the diagonal,
/// 2 off it); the pullback of the PSD barrier through `A^T` is exactly
/// `-ln det` of the moment matrix.
pub fn build_sos(p: &PolySpec, d: u32) -> Result<PolyProgram, PolyError> {
    check_degree(p, d)?;
    let n = p.nvars();
    let half = monomials_up_to(n, d);
    let full = monomials_up_to(n, 2 * d);
    let index: BTreeMap<&[u32], usize> = full
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let m = half.len();
    let mut a = RatMatrix::zeros(full.len(), m * (m + 1) / 2);
    let mut col = 0;
    for i in 0..m {
        for j in 0..=i {
            let sum: Vec<u32> = half[i].iter().zip(&half[j]).map(|(a, b)| a + b).collect();
            let row = index[sum.as_slice()];
            a[(row, col)] = if i == j { rat_int(1) } else { rat_int(2) };
            col += 1;
        }
    }
    let hint = uniform_moments(&full);
    let image = ImageCone::new(ConeSpec::PsdLogDet { m }, a, Some(hint))?;
    Ok(PolyProgram {
        image,
        b: coefficient_vector(p, &full),
        support: full,
        kind: ProgramKind::Sos { half_basis: half },
        poly: p.clone(),
    })
}

/// DSOS membership: Gram matrix constrained to the diagonally dominant
/// cone, expressed over its `M^2` extreme rays; the base cone is an
/// orthant of ray weights.
pub fn build_dsos(p: &PolySpec, d: u32) -> Result<PolyProgram, PolyError> {
    check_degree(p, d)?;
    let n = p.nvars();
    let half = monomials_up_to(n, d);
    let full = monomials_up_to(n, 2 * d);
    let index: BTreeMap<&[u32], usize> = full
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let m = half.len();
    let mut rays = Vec::with_capacity(m * m);
    for i in 0..m {
        rays.push(DsosRay { i, j: i, sign: 1 });
    }
    for i in 0..m {
        for j in i + 1..m {
            rays.push(DsosRay { i, j, sign: 1 });
            rays.push(DsosRay { i, j, sign: -1 });
        }
    }
    let mut a = RatMatrix::zeros(full.len(), rays.len());
    for (col, ray) in rays.iter().enumerate() {
        // (m_i + sign m_j)^2 = m_i^2 + 2 sign m_i m_j + m_j^2.
        let sq_i: Vec<u32> = half[ray.i].iter().map(|k| 2 * k).collect();
        a[(index[sq_i.as_slice()], col)] += rat_int(1);
        if ray.i != ray.j {
            let sq_j: Vec<u32> = half[ray.j].iter().map(|k| 2 * k).collect();
            a[(index[sq_j.as_slice()], col)] += rat_int(1);
            let cross: Vec<u32> = half[ray.i]
                .iter()
                .zip(&half[ray.j])
                .map(|(a, b)| a + b)
                .collect();
            a[(index[cross.as_slice()], col)] += rat_int(2 * ray.sign as i64);
        }
    }
    let hint = uniform_moments(&full);
    let image = ImageCone::new(ConeSpec::Orthant { n: rays.len() }, a, Some(hint))?;
    Ok(PolyProgram {
        image,
        b: coefficient_vector(p, &full),
        support: full,
        kind: ProgramKind::Dsos {
            half_basis: half,
            rays,
        },
        poly: p.clone(),
    })
}

/// SDSOS membership: the Gram matrix is a sum of PSD matrices supported
/// on single 2x2 principal submatrices (factor width two); the base cone
/// is a product of packed 2x2 PSD cones, one per monomial pair.
pub fn build_sdsos(p: &PolySpec, d: u32) -> Result<PolyProgram, PolyError> {
    check_degree(p, d)?;
    let n = p.nvars();
    let half = monomials_up_to(n, d);
    let full = monomials_up_to(n, 2 * d);
    let index: BTreeMap<&[u32], usize> = full
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let m = half.len();
    if m < 2 {
        return Err(PolyError::UnsupportedShape(
            "SDSOS needs at least two basis monomials".into(),
        ));
    }
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            pairs.push((i, j));
        }
    }
    // Per pair block [[a, c], [c, b]] in plain packing (a, c, b):
    // contributes a x^{2 alpha_i} + 2c x^{alpha_i + alpha_j} + b x^{2 alpha_j}.
    let mut a = RatMatrix::zeros(full.len(), 3 * pairs.len());
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let sq_i: Vec<u32> = half[i].iter().map(|e| 2 * e).collect();
        let sq_j: Vec<u32> = half[j].iter().map(|e| 2 * e).collect();
        let cross: Vec<u32> = half[i].iter().zip(&half[j]).map(|(a, b)| a + b).collect();
        a[(index[sq_i.as_slice()], 3 * k)] += rat_int(1);
        a[(index[cross.as_slice()], 3 * k + 1)] += rat_int(2);
        a[(index[sq_j.as_slice()], 3 * k + 2)] += rat_int(1);
    }
    let base = ConeSpec::Product {
        parts: vec![ConeSpec::PsdLogDet { m: 2 }; pairs.len()],
    };
    let hint = uniform_moments(&full);
    let image = ImageCone::new(base, a, Some(hint))?;
    Ok(PolyProgram {
        image,
        b: coefficient_vector(p, &full),
        support: full,
        kind: ProgramKind::Sdsos {
            half_basis: half,
            pairs,
        },
        poly: p.clone(),
    })
}

/// SONC membership over the support of `p` (optionally extended by the
/// constant monomial so that lower-bound shifts stay representable).
///
/// Every odd support point, and every even one carrying a negative
/// coefficient, must be the inner point of at least one circuit;
/// otherwise the formulation cannot certify and `UncoverableTerm` is
/// reported.
pub fn build_sonc(p: &PolySpec, include_constant: bool) -> Result<PolyProgram, PolyError> {
    let n = p.nvars();
    let mut support: Vec<Vec<u32>> = p.terms().keys().cloned().collect();
    let zero = vec![0u32; n];
    if include_constant && !support.contains(&zero) {
        support.push(zero.clone());
    }
    support.sort_by_key(|e| (e.iter().sum::<u32>(), e.clone()));

    let (circuits, squares) = enumerate_circuits(&support)?;
    debug_assert!(circuits.iter().all(circuit_is_valid));
    for (exp, coeff) in p.terms() {
        let needs_cover = !is_even(exp) || coeff.is_negative();
        if needs_cover && !circuits.iter().any(|c| &c.inner == exp) {
            return Err(PolyError::UncoverableTerm(exp.clone()));
        }
    }

    let index: BTreeMap<&[u32], usize> = support
        .iter()
        .enumerate()
        .map(|(i, e)| (e.as_slice(), i))
        .collect();
    let cols: usize = circuits.iter().map(|c| c.outer.len() + 1).sum::<usize>() + squares.len();
    let mut a = RatMatrix::zeros(support.len(), cols);
    let mut parts = Vec::with_capacity(circuits.len() + 1);
    let mut col = 0;
    for c in &circuits {
        for alpha in &c.outer {
            a[(index[alpha.as_slice()], col)] = rat_int(1);
            col += 1;
        }
        a[(index[c.inner.as_slice()], col)] = rat_int(1);
        col += 1;
        parts.push(ConeSpec::power(c.lambda.clone()));
    }
    for sq in &squares {
        a[(index[sq.as_slice()], col)] = rat_int(1);
        col += 1;
    }
    if !squares.is_empty() {
        parts.push(ConeSpec::Orthant { n: squares.len() });
    }
    if parts.is_empty() {
        return Err(PolyError::UncoverableTerm(
            support.first().cloned().unwrap_or(zero),
        ));
    }
    let base = if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        ConeSpec::Product { parts }
    };
    let hint = uniform_moments(&support);
    let image = ImageCone::new(base, a, Some(hint))?;
    Ok(PolyProgram {
        image,
        b: coefficient_vector(p, &support),
        support,
        kind: ProgramKind::Sonc { circuits, squares },
        poly: p.clone(),
    })
}
