//! Shortest-vector enumeration, the Hermite invariant, and local-maximum
//! certification (relative perfection and eutaxy) on a type `V_F`.

mod certify;
pub mod constants;
mod simplex;

pub use certify::{certify_local_max, equalize_minima, Certificate, EUTAXY_MARGIN};
pub use constants::{registry_names, verify_constant, ConstantReport};

use crate::error::{Error, Result};
use crate::geometry::Gram;
use nalgebra::DMatrix;

pub const MIN_TOL: f64 = 1e-9;

/// Result of a shortest-vector enumeration.
#[derive(Clone, Debug)]
pub struct ShortVecResult {
    pub min: f64,
    /// minimal vectors, one per ± pair, lexicographically sorted
    pub vectors: Vec<Vec<i64>>,
    pub count_pairs: usize,
}

/// All nonzero integer vectors `u` (up to sign, first nonzero coordinate
/// positive) with `A[u] ≤ bound`, lexicographically sorted.
pub fn enumerate_up_to(a: &DMatrix<f64>, bound: f64) -> Result<Vec<Vec<i64>>> {
    let n = a.nrows();
    let chol = a.clone().cholesky().ok_or(Error::NumericalInstability {
        reason: "Cholesky failed (matrix not positive definite)".into(),
    })?;
    // A = R'R with R upper triangular
    let r = chol.l().transpose();
    for i in 0..n {
        if r[(i, i)] < 1e-12 {
            return Err(Error::NumericalInstability {
                reason: format!("Cholesky pivot {} below 1e-12", r[(i, i)]),
            });
        }
    }
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    enumerate_rec(&r, bound + 1e-12, n, 0.0, &mut x, &mut out);
    out.retain(|v| v.iter().any(|&c| c != 0));
    // canonical sign: first nonzero coordinate positive
    out.retain(|v| v.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0));
    out.sort();
    out.dedup();
    Ok(out)
}

fn enumerate_rec(
    r: &DMatrix<f64>,
    bound: f64,
    level: usize,
    partial: f64,
    x: &mut Vec<i64>,
    out: &mut Vec<Vec<i64>>,
) {
    if level == 0 {
        out.push(x.clone());
        return;
    }
    let i = level - 1;
    let mut shift = 0.0;
    for j in level..r.ncols() {
        shift += r[(i, j)] * x[j] as f64;
    }
    let rii = r[(i, i)];
    let center = -shift / rii;
    let radius = ((bound - partial).max(0.0)).sqrt() / rii;
    let lo = (center - radius).ceil() as i64;
    let hi = (center + radius).floor() as i64;
    for xi in lo..=hi {
        let term = (rii * (xi as f64 - center)).powi(2);
        if partial + term <= bound {
            x[i] = xi;
            enumerate_rec(r, bound, i, partial + term, x, out);
        }
    }
    x[i] = 0;
}

/// All `u ∈ ℤⁿ \ {0}` with `A[u] ≤ min + 1e−9`, up to sign.
pub fn shortest_vectors(a: &Gram) -> Result<ShortVecResult> {
    let mat = a.mat();
    let n = a.n();
    // initial radius: best of the diagonal and a few fixed probe vectors
    let mut bound = (0..n).map(|i| mat[(i, i)]).fold(f64::INFINITY, f64::min);
    for i in 0..n {
        for j in i + 1..n {
            let mut probe = vec![0i64; n];
            probe[i] = 1;
            probe[j] = -1;
            bound = bound.min(a.quad(&probe));
            probe[j] = 1;
            bound = bound.min(a.quad(&probe));
        }
    }
    let cands = enumerate_up_to(mat, bound)?;
    let min = cands
        .iter()
        .map(|u| a.quad(u))
        .fold(f64::INFINITY, f64::min);
    let vectors: Vec<Vec<i64>> = cands
        .into_iter()
        .filter(|u| a.quad(u) <= min + MIN_TOL)
        .collect();
    let count_pairs = vectors.len();
    Ok(ShortVecResult { min, vectors, count_pairs })
}

/// Hermite invariant `min(A) / det(A)^{1/n}`.
pub fn hermite(a: &Gram) -> Result<f64> {
    let sv = shortest_vectors(a)?;
    Ok(sv.min / a.det().powf(1.0 / a.n() as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_minimum() {
        for n in 1..=5 {
            let a = Gram::from_mat(DMatrix::identity(n, n));
            let sv = shortest_vectors(&a).unwrap();
            assert!((sv.min - 1.0).abs() < 1e-12);
            assert_eq!(sv.count_pairs, n);
        }
    }

    #[test]
    fn hexagonal_minimum() {
        // A_2 = (1/√3)·[[2,−1],[−1,2]]: min 2/√3, 3 pairs
        let s = 3f64.sqrt();
        let a = Gram::from_mat(DMatrix::from_row_slice(2, 2, &[2.0 / s, -1.0 / s, -1.0 / s, 2.0 / s]));
        let sv = shortest_vectors(&a).unwrap();
        assert!((sv.min - 2.0 / s).abs() < 1e-12);
        assert_eq!(sv.count_pairs, 3);
        assert!((hermite(&a).unwrap() - 2.0 / s).abs() < 1e-12);
    }

    #[test]
    fn scale_covariance() {
        let s = 3f64.sqrt();
        let base = DMatrix::from_row_slice(2, 2, &[2.0 / s, -1.0 / s, -1.0 / s, 2.0 / s]);
        let sv1 = shortest_vectors(&Gram::from_mat(base.clone())).unwrap();
        for c in [0.5, 2.0] {
            let sv = shortest_vectors(&Gram::from_mat(&base * c)).unwrap();
            assert!((sv.min - c * sv1.min).abs() < 1e-12);
            assert_eq!(sv.vectors, sv1.vectors);
        }
    }

    #[test]
    fn bruteforce_oracle_small() {
        // exhaustive search over ‖u‖_∞ ≤ 6 agrees with the enumeration
        let mats = [
            DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0]),
            DMatrix::from_row_slice(2, 2, &[5.0, 3.0, 3.0, 2.0]),
            DMatrix::from_row_slice(3, 3, &[4.0, 1.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 2.0]),
        ];
        for m in mats {
            let a = Gram::from_mat(m);
            let sv = shortest_vectors(&a).unwrap();
            let (bmin, bvecs) = brute_force(&a, 6);
            assert!((sv.min - bmin).abs() < 1e-9);
            assert_eq!(sv.vectors, bvecs);
        }
    }

    pub fn brute_force(a: &Gram, radius: i64) -> (f64, Vec<Vec<i64>>) {
        let n = a.n();
        let mut best = f64::INFINITY;
        let mut vecs: Vec<Vec<i64>> = Vec::new();
        let width = (2 * radius + 1) as u64;
        let total = width.pow(n as u32);
        for idx in 0..total {
            let mut v = idx;
            let mut u = vec![0i64; n];
            for c in u.iter_mut() {
                *c = (v % width) as i64 - radius;
                v /= width;
            }
            if u.iter().all(|&c| c == 0) {
                continue;
            }
            if u.iter().find(|&&c| c != 0).is_some_and(|&c| c < 0) {
                continue;
            }
            let q = a.quad(&u);
            if q < best - 1e-9 {
                best = q;
                vecs.clear();
                vecs.push(u);
            } else if q <= best + 1e-9 {
                vecs.push(u);
            }
        }
        vecs.sort();
        (best, vecs)
    }
}
