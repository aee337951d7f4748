//! Exact rational linear algebra: arbitrary-precision rational scalars,
//! dense vectors and matrices, linear solves, LDL^T factorization and a
//! positive-semidefiniteness test with exact pivoting.
//!
//! Everything here is deterministic and allocation-heavy by design; the
//! intended scale is the "desk" scale of certificate verification (a few
//! hundred rows at most). Floating-point never enters any code path in
//! this module.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision rational scalar. `num_rational::BigRational` keeps
/// the invariants we need: gcd(|num|, den) = 1 and den > 0 after every
/// arithmetic operation.
pub type Rational = BigRational;

/// Dense rational vector.
pub type RatVec = Vec<Rational>;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("matrix is singular (exact zero pivot after full search)")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("exact arithmetic unavailable: {0}")]
    Unavailable(String),
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from_integer(BigInt::from(p))
}

/// Formats a rational as `p/q`, omitting `/q` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, a plain integer, or a decimal literal such as `-1.25`
/// or `3e-7` (decimals convert exactly, power-of-ten denominators).
pub fn parse_rational(s: &str) -> Result<Rational, ExactError> {
    let s = s.trim();
    if let Some(idx) = s.find(['e', 'E']) {
        let mantissa = parse_rational(&s[..idx])?;
        let exp: i32 = s[idx + 1..]
            .parse()
            .map_err(|_| ExactError::Parse(s.into()))?;
        let ten = BigInt::from(10u32);
        let scale = Rational::from_integer(ten.pow(exp.unsigned_abs()));
        return Ok(if exp >= 0 {
            mantissa * scale
        } else {
            mantissa / scale
        });
    }
    if let Some((p, q)) = s.split_once('/') {
        let num: BigInt = p.trim().parse().map_err(|_| ExactError::Parse(s.into()))?;
        let den: BigInt = q.trim().parse().map_err(|_| ExactError::Parse(s.into()))?;
        if den.is_zero() {
            return Err(ExactError::Parse(s.into()));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| ExactError::Parse(s.into()))?
        };
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ExactError::Parse(s.into()));
        }
        let frac_num: BigInt = frac.parse().map_err(|_| ExactError::Parse(s.into()))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let mut r = Rational::from_integer(int_part.clone());
        let frac_r = Rational::new(frac_num, scale);
        if neg {
            r -= frac_r;
        } else {
            r += frac_r;
        }
        return Ok(r);
    }
    let num: BigInt = s.parse().map_err(|_| ExactError::Parse(s.into()))?;
    Ok(Rational::from_integer(num))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator bounded by `max_den`,
/// via the continued-fraction expansion (with the closing semiconvergent).
pub fn snap_to_rational(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot snap a non-finite float");
    let max_den = BigInt::from(max_den.max(1));
    let neg = x < 0.0;
    let target = x.abs();
    let mut x = x.abs();

    // Convergents p/q of the continued fraction of x.
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    for _ in 0..64 {
        let a_f = x.floor();
        if a_f > 1e18 {
            break;
        }
        let a = BigInt::from(a_f as i128);
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > max_den {
            // Largest semiconvergent with denominator within the cap.
            let k = (&max_den - &q0) / &q1;
            if !k.is_zero() {
                let sp = &k * &p1 + &p0;
                let sq = &k * &q1 + &q0;
                let best = Rational::new(p1.clone(), q1.clone());
                let semi = Rational::new(sp, sq);
                let xr = Rational::from_float(target).unwrap();
                let pick = if (&semi - &xr).abs() < (&best - &xr).abs() {
                    semi
                } else {
                    best
                };
                return if neg { -pick } else { pick };
            }
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = x - a_f;
        if frac < 1e-18 {
            break;
        }
        x = 1.0 / frac;
    }
    let r = Rational::new(p1, q1.max(BigInt::one()));
    if neg {
        -r
    } else {
        r
    }
}

pub fn vec_to_f64(v: &[Rational]) -> nalgebra::DVector<f64> {
    nalgebra::DVector::from_iterator(v.len(), v.iter().map(rat_to_f64))
}

/// Snaps every coordinate by continued-fraction rounding with the given
/// denominator cap.
pub fn snap_vec(v: &nalgebra::DVector<f64>, max_den: u64) -> RatVec {
    v.iter().map(|&x| snap_to_rational(x, max_den)).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn zeros(n: usize) -> RatVec {
    vec![Rational::zero(); n]
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<RatVec>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat_int(v)).collect())
                .collect(),
        )
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..i {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul_vec(&self, v: &[Rational]) -> RatVec {
        assert_eq!(self.cols, v.len(), "mul_vec dimension mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "mul dimension mismatch");
        Self::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| &self[(i, k)] * &other[(k, j)]).sum()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    /// Rank by fraction-free Gaussian elimination on a working copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (nr, nc) = (m.rows, m.cols);
        let mut rank = 0;
        let mut row = 0;
        for col in 0..nc {
            if row >= nr {
                break;
            }
            let Some(piv) = (row..nr).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(row, piv);
            for r in row + 1..nr {
                if m[(r, col)].is_zero() {
                    continue;
                }
                let factor = &m[(r, col)] / &m[(row, col)];
                for c in col..nc {
                    let upd = &m[(r, c)] - &factor * &m[(row, c)];
                    m[(r, c)] = upd;
                }
            }
            row += 1;
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.rows, self.cols, |i, j| rat_to_f64(&self[(i, j)]))
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves a (possibly overdetermined) system `M x = rhs` exactly when it
/// is consistent and `M` has full column rank; returns `None` otherwise.
pub fn solve_consistent(m: &RatMatrix, rhs: &[Rational]) -> Option<RatVec> {
    let (nr, nc) = (m.nrows(), m.ncols());
    if rhs.len() != nr || nc > nr {
        return None;
    }
    let mut aug = RatMatrix::from_fn(nr, nc + 1, |i, j| {
        if j < nc {
            m[(i, j)].clone()
        } else {
            rhs[i].clone()
        }
    });
    let mut pivot_rows = Vec::with_capacity(nc);
    let mut row = 0;
    for col in 0..nc {
        let piv = (row..nr).find(|&r| !aug[(r, col)].is_zero())?;
        aug.swap_rows(row, piv);
        for r in 0..nr {
            if r == row || aug[(r, col)].is_zero() {
                continue;
            }
            let factor = &aug[(r, col)] / &aug[(row, col)];
            for c in col..=nc {
                let upd = &aug[(r, c)] - &factor * &aug[(row, c)];
                aug[(r, c)] = upd;
            }
        }
        pivot_rows.push(row);
        row += 1;
    }
    // Remaining rows must have vanished entirely for consistency.
    for r in row..nr {
        if !aug[(r, nc)].is_zero() {
            return None;
        }
    }
    Some(
        (0..nc)
            .map(|c| &aug[(pivot_rows[c], nc)] / &aug[(pivot_rows[c], c)])
            .collect(),
    )
}

/// Basis of the right nullspace `{x | Mx = 0}` by exact row reduction.
pub fn nullspace(m: &RatMatrix) -> Vec<RatVec> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..nc {
        if row >= nr {
            break;
        }
        let Some(piv) = (row..nr).find(|&r| !a[(r, col)].is_zero()) else {
            continue;
        };
        a.swap_rows(row, piv);
        for r in 0..nr {
            if r == row || a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] / &a[(row, col)];
            for c in col..nc {
                let upd = &a[(r, c)] - &factor * &a[(row, c)];
                a[(r, c)] = upd;
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in 0..nc {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); nc];
        v[free] = Rational::one();
        for &(r, c) in &pivots {
            v[c] = -&a[(r, free)] / &a[(r, c)];
        }
        basis.push(v);
    }
    basis
}

/// Solves `M x = rhs` exactly by Gaussian elimination with column pivot
/// search. Every arithmetic step is a normalized rational operation.
pub fn rational_solve(m: &RatMatrix, rhs: &[Rational]) -> Result<RatVec, ExactError> {
    if m.nrows() != m.ncols() {
        return Err(ExactError::DimensionMismatch(format!(
            "solve needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if rhs.len() != m.nrows() {
        return Err(ExactError::DimensionMismatch(format!(
            "rhs length {} != {}",
            rhs.len(),
            m.nrows()
        )));
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut b = rhs.to_vec();
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[(r, col)].is_zero())
            .ok_or(ExactError::Singular)?;
        a.swap_rows(col, piv);
        b.swap(col, piv);
        for r in 0..n {
            if r == col || a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] / &a[(col, col)];
            for c in col..n {
                let upd = &a[(r, c)] - &factor * &a[(col, c)];
                a[(r, c)] = upd;
            }
            let upd = &b[r] - &factor * &b[col];
            b[r] = upd;
        }
    }
    Ok((0..n).map(|i| &b[i] / &a[(i, i)]).collect())
}

/// Exact PSD classification of a symmetric rational matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdStatus {
    PositiveDefinite,
    PositiveSemidefinite,
    NotPsd,
}

/// Classifies a symmetric matrix by rational LDL^T elimination with
/// symmetric pivoting on the largest-magnitude remaining diagonal entry.
/// A zero diagonal with a nonzero off-diagonal entry in its row disproves
/// positive semidefiniteness immediately, so 2x2 pivots are never needed.
pub fn rational_psd_check(m: &RatMatrix) -> Result<PsdStatus, ExactError> {
    if !m.is_symmetric() {
        return Err(ExactError::NotSymmetric);
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut order: Vec<usize> = (0..n).collect();
    let mut definite = true;
    for k in 0..n {
        // First remaining index attaining the largest-magnitude diagonal.
        let mut piv = k;
        for i in k + 1..n {
            if a[(order[i], order[i])].abs() > a[(order[piv], order[piv])].abs() {
                piv = i;
            }
        }
        order.swap(k, piv);
        let p = order[k];
        let d = a[(p, p)].clone();
        if d.is_negative() {
            return Ok(PsdStatus::NotPsd);
        }
        if d.is_zero() {
            // All remaining diagonals are zero; any remaining off-diagonal
            // kills semidefiniteness.
            for i in k..n {
                for j in k..n {
                    if !a[(order[i], order[j])].is_zero() {
                        return Ok(PsdStatus::NotPsd);
                    }
                }
            }
            definite = false;
            break;
        }
        // The pivot row must stay intact until every remaining row has
        // been eliminated against it.
        #[allow(clippy::needless_range_loop)]
        for ri in k + 1..n {
            let r = order[ri];
            if a[(r, p)].is_zero() {
                continue;
            }
            let factor = &a[(r, p)] / &d;
            for ci in k + 1..n {
                let c = order[ci];
                let upd = &a[(r, c)] - &factor * &a[(p, c)];
                a[(r, c)] = upd;
            }
        }
    }
    Ok(if definite {
        PsdStatus::PositiveDefinite
    } else {
        PsdStatus::PositiveSemidefinite
    })
}

/// Result of the symmetric indefinite factorization `P^T M P = L D L^T`,
/// with `L` unit lower triangular and `D` block diagonal (1x1 blocks, plus
/// 2x2 blocks when every remaining diagonal entry vanishes — e.g. the
/// antidiagonal matrix `[[0,1],[1,0]]`, which has no diagonal-only LDL^T).
#[derive(Clone, Debug)]
pub struct LdltFactors {
    pub l: RatMatrix,
    pub d: RatMatrix,
    pub perm: Vec<usize>,
}

impl LdltFactors {
    /// `D` as a plain vector when no 2x2 block was required.
    pub fn d_diagonal(&self) -> Option<RatVec> {
        let n = self.d.nrows();
        for i in 0..n {
            for j in 0..n {
                if i != j && !self.d[(i, j)].is_zero() {
                    return None;
                }
            }
        }
        Some((0..n).map(|i| self.d[(i, i)].clone()).collect())
    }

    /// Recomputes `P^T M P` from the factors.
    pub fn reassemble(&self) -> RatMatrix {
        self.l.mul(&self.d).mul(&self.l.transpose())
    }

    /// `P^T M P` straight from the original matrix, for comparison.
    pub fn permuted(&self, m: &RatMatrix) -> RatMatrix {
        RatMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            m[(self.perm[i], self.perm[j])].clone()
        })
    }
}

/// Symmetric indefinite LDL^T with diagonal pivoting, falling back to 2x2
/// pivots only when the whole remaining diagonal is zero.
pub fn rational_ldlt(m: &RatMatrix) -> Result<LdltFactors, ExactError> {
    if !m.is_symmetric() {
        return Err(ExactError::NotSymmetric);
    }
    let n = m.nrows();
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut l = RatMatrix::identity(n);
    let mut d = RatMatrix::zeros(n, n);

    let swap = |a: &mut RatMatrix, l: &mut RatMatrix, perm: &mut Vec<usize>, x: usize, y: usize| {
        if x == y {
            return;
        }
        perm.swap(x, y);
        for j in 0..n {
            let (vx, vy) = (a[(x, j)].clone(), a[(y, j)].clone());
            a[(x, j)] = vy;
            a[(y, j)] = vx;
        }
        for i in 0..n {
            let (vx, vy) = (a[(i, x)].clone(), a[(i, y)].clone());
            a[(i, x)] = vy;
            a[(i, y)] = vx;
        }
        // Only the already-computed columns of L move with the rows.
        for j in 0..n {
            let (vx, vy) = (l[(x, j)].clone(), l[(y, j)].clone());
            l[(x, j)] = vy;
            l[(y, j)] = vx;
        }
    };

    let mut k = 0;
    while k < n {
        let mut piv = k;
        for i in k + 1..n {
            if a[(i, i)].abs() > a[(piv, piv)].abs() {
                piv = i;
            }
        }
        if !a[(piv, piv)].is_zero() {
            swap(&mut a, &mut l, &mut perm, k, piv);
            let dk = a[(k, k)].clone();
            d[(k, k)] = dk.clone();
            for r in k + 1..n {
                let factor = &a[(r, k)] / &dk;
                l[(r, k)] = factor.clone();
                for c in k..n {
                    let upd = &a[(r, c)] - &factor * &a[(k, c)];
                    a[(r, c)] = upd;
                }
                for c in 0..n {
                    let upd = &a[(c, r)] - &factor * &a[(c, k)];
                    // Keep symmetry of the working matrix.
                    if c >= k {
                        a[(c, r)] = upd;
                    }
                }
            }
            k += 1;
            continue;
        }
        // Whole remaining diagonal is zero: look for an off-diagonal pivot.
        let mut found = None;
        'search: for i in k..n {
            for j in i + 1..n {
                if !a[(i, j)].is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = found else {
            // Remaining block is identically zero.
            break;
        };
        swap(&mut a, &mut l, &mut perm, k, i);
        let j = if j == k { i } else { j };
        swap(&mut a, &mut l, &mut perm, k + 1, j);
        let off = a[(k, k + 1)].clone();
        d[(k, k + 1)] = off.clone();
        d[(k + 1, k)] = off.clone();
        // Pivot block E = [[0, off], [off, 0]], E^{-1} = [[0, 1/off], [1/off, 0]].
        let inv = Rational::one() / &off;
        for r in k + 2..n {
            let c0 = a[(r, k)].clone();
            let c1 = a[(r, k + 1)].clone();
            // (c0, c1) E^{-1} = (c1/off, c0/off)
            let f0 = &c1 * &inv;
            let f1 = &c0 * &inv;
            l[(r, k)] = f0.clone();
            l[(r, k + 1)] = f1.clone();
            for c in k..n {
                let upd = &a[(r, c)] - &f0 * &a[(k, c)] - &f1 * &a[(k + 1, c)];
                a[(r, c)] = upd;
            }
        }
        // Re-symmetrize the trailing block from the updated rows.
        for r in k + 2..n {
            for c in k + 2..n {
                if c > r {
                    let v = a[(r, c)].clone();
                    a[(c, r)] = v;
                }
            }
        }
        k += 2;
    }

    // L must be unit lower with zeros above the diagonal.
    for i in 0..n {
        l[(i, i)] = Rational::one();
        for j in i + 1..n {
            l[(i, j)] = Rational::zero();
        }
    }
    Ok(LdltFactors { l, d, perm })
}

/// Signs of the eigenvalues of a symmetric 2x2 or 1x1 rational matrix via
/// trace/determinant. Test-side oracle for small PSD questions.
pub fn small_symmetric_signs(m: &RatMatrix) -> Option<(bool, bool)> {
    match m.nrows() {
        1 => Some((!m[(0, 0)].is_negative(), m[(0, 0)].is_positive())),
        2 => {
            let det = &m[(0, 0)] * &m[(1, 1)] - &m[(0, 1)] * &m[(1, 0)];
            let tr = &m[(0, 0)] + &m[(1, 1)];
            let psd = !det.is_negative() && !tr.is_negative();
            let pd = det.is_positive() && tr.is_positive();
            Some((psd, pd))
        }
        _ => None,
    }
}

pub fn bigint_sign(r: &Rational) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
