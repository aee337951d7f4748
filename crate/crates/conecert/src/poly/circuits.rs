//! Exhaustive circuit enumeration over a polynomial support: for every
//! support point, all affinely independent subsets of the even support
//! points containing it in the relative interior of their convex hull,
//! with exact rational barycentric coordinates.
//!
//! Strictly positive barycentric coordinates on an affinely independent
//! outer set make the circuit automatically minimal: any representation
//! over a proper subset would contradict uniqueness of the coordinates.

use num_traits::{One, Signed};

use super::PolyError;
use crate::exact::{rat_int, solve_consistent, RatMatrix, RatVec, Rational};

/// A circuit: affinely independent even exponents `outer`, an `inner`
/// exponent in the relative interior of their convex hull, and its exact
/// barycentric coordinates (strictly positive, summing to one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    pub outer: Vec<Vec<u32>>,
    pub inner: Vec<u32>,
    pub lambda: Vec<Rational>,
}

pub(crate) fn is_even(exp: &[u32]) -> bool {
    exp.iter().all(|e| e % 2 == 0)
}

/// Enumerates all circuits over `support` plus the set of monomial-square
/// candidates (the even support points). The cap of 20 support points
/// keeps the exhaustive subset search at desk scale. `CONECERT_THREADS`
/// caps the worker threads used across inner points (default 1).
pub fn enumerate_circuits(
    support: &[Vec<u32>],
) -> Result<(Vec<Circuit>, Vec<Vec<u32>>), PolyError> {
    if support.len() > 20 {
        return Err(PolyError::SupportTooLarge(support.len()));
    }
    let even: Vec<Vec<u32>> = support.iter().filter(|e| is_even(e)).cloned().collect();
    let threads = std::env::var("CONECERT_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
        .min(support.len().max(1));

    let work = |inner: &Vec<u32>| -> Vec<Circuit> {
        let candidates: Vec<&Vec<u32>> = even.iter().filter(|e| *e != inner).collect();
        let mut found = Vec::new();
        let nvars = inner.len();
        let max_size = (nvars + 1).min(candidates.len());
        for size in 2..=max_size {
            subsets(candidates.len(), size, &mut |idx| {
                let outer: Vec<&Vec<u32>> = idx.iter().map(|&i| candidates[i]).collect();
                if let Some(lambda) = barycentric(&outer, inner) {
                    if lambda.iter().all(Signed::is_positive) {
                        found.push(Circuit {
                            outer: outer.iter().map(|e| (*e).clone()).collect(),
                            inner: inner.clone(),
                            lambda,
                        });
                    }
                }
            });
        }
        found
    };

    let mut circuits: Vec<Circuit> = Vec::new();
    if threads <= 1 {
        for inner in support {
            circuits.extend(work(inner));
        }
    } else {
        let chunks: Vec<&[Vec<u32>]> = support.chunks(support.len().div_ceil(threads)).collect();
        let results = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| scope.spawn(move || chunk.iter().flat_map(&work).collect::<Vec<_>>()))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("circuit worker panicked"))
                .collect::<Vec<_>>()
        });
        for r in results {
            circuits.extend(r);
        }
    }
    Ok((circuits, even))
}

/// Exact barycentric coordinates of `target` over `points` when they are
/// affinely independent and the coordinates exist; `None` otherwise.
fn barycentric(points: &[&Vec<u32>], target: &[u32]) -> Option<RatVec> {
    let n = target.len();
    let k = points.len();
    // Rows: one per variable plus the normalization row of ones.
    let m = RatMatrix::from_fn(n + 1, k, |i, j| {
        if i < n {
            rat_int(points[j][i] as i64)
        } else {
            Rational::one()
        }
    });
    if m.rank() != k {
        return None; // affinely dependent
    }
    let mut rhs: RatVec = target.iter().map(|&t| rat_int(t as i64)).collect();
    rhs.push(Rational::one());
    solve_consistent(&m, &rhs)
}

/// Visits all `size`-subsets of `0..n`.
fn subsets(n: usize, size: usize, visit: &mut impl FnMut(&[usize])) {
    if size > n {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        visit(&idx);
        // Advance the combination.
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + n - size {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Verifies `sum lambda_i outer_i = inner` exactly; used by tests and the
/// SONC builder's sanity pass.
pub(crate) fn circuit_is_valid(c: &Circuit) -> bool {
    if c.lambda.len() != c.outer.len() || c.lambda.iter().any(|l| !l.is_positive()) {
        return false;
    }
    let sum: Rational = c.lambda.iter().cloned().sum();
    if !sum.is_one() {
        return false;
    }
    let n = c.inner.len();
    (0..n).all(|j| {
        let lhs: Rational = c
            .outer
            .iter()
            .zip(&c.lambda)
            .map(|(a, l)| l * rat_int(a[j] as i64))
            .sum();
        lhs == rat_int(c.inner[j] as i64)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn univariate_midpoint_circuit() {
        let support = vec![vec![0], vec![2], vec![1]];
        let (circuits, squares) = enumerate_circuits(&support).unwrap();
        assert_eq!(squares, vec![vec![0], vec![2]]);
        assert_eq!(circuits.len(), 1);
        let c = &circuits[0];
        assert_eq!(c.inner, vec![1]);
        assert_eq!(c.outer, vec![vec![0], vec![2]]);
        assert_eq!(c.lambda, vec![rat(1, 2), rat(1, 2)]);
        assert!(circuit_is_valid(c));
    }

    #[test]
    fn motzkin_circuit() {
        let support = vec![vec![0, 0], vec![4, 2], vec![2, 4], vec![2, 2]];
        let (circuits, _) = enumerate_circuits(&support).unwrap();
        let covering: Vec<&Circuit> = circuits.iter().filter(|c| c.inner == vec![2, 2]).collect();
        assert_eq!(covering.len(), 1);
        let c = covering[0];
        let mut outer = c.outer.clone();
        outer.sort();
        assert_eq!(outer, vec![vec![0, 0], vec![2, 4], vec![4, 2]]);
        assert_eq!(c.lambda, vec![rat(1, 3), rat(1, 3), rat(1, 3)]);
        assert!(circuit_is_valid(c));
    }

    #[test]
    fn lone_odd_point_is_uncoverable() {
        let support = vec![vec![1, 0]];
        let (circuits, squares) = enumerate_circuits(&support).unwrap();
        assert!(circuits.is_empty());
        assert!(squares.is_empty());
    }

    #[test]
    fn boundary_points_are_not_interior() {
        // Midpoint of an edge is in the hull of three points but only
        // strictly inside the 1D face; the 2-point circuit is found, the
        // 3-point subset is rejected (zero coordinate).
        let support = vec![vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 0]];
        let (circuits, _) = enumerate_circuits(&support).unwrap();
        let for_mid: Vec<&Circuit> = circuits.iter().filter(|c| c.inner == vec![1, 0]).collect();
        assert_eq!(for_mid.len(), 1);
        assert_eq!(for_mid[0].outer.len(), 2);
    }

    #[test]
    fn support_cap_enforced() {
        let support: Vec<Vec<u32>> = (0..21).map(|k| vec![k]).collect();
        assert!(matches!(
            enumerate_circuits(&support),
            Err(PolyError::SupportTooLarge(21))
        ));
    }

    #[test]
    fn thread_env_gives_same_result() {
        let support = vec![vec![0, 0], vec![4, 2], vec![2, 4], vec![2, 2], vec![1, 1]];
        let (seq, _) = enumerate_circuits(&support).unwrap();
        std::env::set_var("CONECERT_THREADS", "3");
        let (par, _) = enumerate_circuits(&support).unwrap();
        std::env::remove_var("CONECERT_THREADS");
        let mut a: Vec<String> = seq.iter().map(|c| format!("{c:?}")).collect();
        let mut b: Vec<String> = par.iter().map(|c| format!("{c:?}")).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
