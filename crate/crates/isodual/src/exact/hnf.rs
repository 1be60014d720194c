//! Hermite/Smith normal forms and saturated integer kernels.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

/// Column-style Hermite reduction of an `m × n` integer matrix `a`:
/// returns `(h, u)` with `a · u = h`, `u` unimodular `n × n`, and `h` in
/// column echelon form (pivot columns left, zero columns right).
pub fn column_hnf(a: &[Vec<BigInt>]) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut h: Vec<Vec<BigInt>> = a.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivot_col = 0usize;
    for row in 0..m {
        if pivot_col >= n {
            break;
        }
        // gcd-reduce the row across columns pivot_col..n
        loop {
            let mut nonzero: Vec<usize> = (pivot_col..n).filter(|&j| !h[row][j].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let j = nonzero[0];
                swap_cols(&mut h, &mut u, pivot_col, j);
                break;
            }
            // pick the column with the smallest nonzero |entry| as the pivot
            nonzero.sort_by_key(|&j| h[row][j].abs());
            let p = nonzero[0];
            for &j in &nonzero[1..] {
                let q = div_round(&h[row][j], &h[row][p]);
                if !q.is_zero() {
                    col_axpy(&mut h, &mut u, j, p, &q);
                }
            }
        }
        if !h[row][pivot_col].is_zero() {
            if h[row][pivot_col].is_negative() {
                col_negate(&mut h, &mut u, pivot_col);
            }
            pivot_col += 1;
        }
    }
    (h, u)
}

fn swap_cols(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in h.iter_mut() {
        row.swap(a, b);
    }
    for row in u.iter_mut() {
        row.swap(a, b);
    }
}

/// column j ← column j − q · column p
fn col_axpy(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], j: usize, p: usize, q: &BigInt) {
    for row in h.iter_mut() {
        let v = &row[j] - q * &row[p];
        row[j] = v;
    }
    for row in u.iter_mut() {
        let v = &row[j] - q * &row[p];
        row[j] = v;
    }
}

fn col_negate(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], j: usize) {
    for row in h.iter_mut() {
        row[j] = -row[j].clone();
    }
    for row in u.iter_mut() {
        row[j] = -row[j].clone();
    }
}

/// Rounded quotient (nearest integer), keeps Euclidean steps small.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    if (&r * 2i32).abs() > b.abs() {
        if (r.is_negative()) ^ (b.is_negative()) {
            q - 1
        } else {
            q + 1
        }
    } else {
        q
    }
}

/// Basis of the saturated kernel `{v ∈ ℤⁿ : a·v = 0}`.
///
/// A kernel of an integer matrix is automatically saturated (torsion-free
/// quotient), so the zero columns of the Hermite transform give a basis.
pub fn integer_kernel(a: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let (h, u) = column_hnf(a);
    let mut basis = Vec::new();
    for j in 0..n {
        if (0..m).all(|i| h[i][j].is_zero()) {
            basis.push((0..n).map(|i| u[i][j].clone()).collect());
        }
    }
    basis
}

/// Smith normal form invariant factors of an integer matrix (nonzero ones).
pub fn smith_invariants(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut invariants = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < rows && left < cols {
        // locate a nonzero pivot
        let mut pivot = None;
        'search: for i in top..rows {
            for j in left..cols {
                if !m[i][j].is_zero() {
                    pivot = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(top, pi);
        for row in m.iter_mut() {
            row.swap(left, pj);
        }
        loop {
            // clear the pivot column with row operations
            let mut dirty = false;
            for i in top + 1..rows {
                if !m[i][left].is_zero() {
                    let q = div_round(&m[i][left], &m[top][left]);
                    for j in left..cols {
                        let v = &m[i][j] - &q * &m[top][j];
                        m[i][j] = v;
                    }
                    if !m[i][left].is_zero() {
                        m.swap(top, i);
                        dirty = true;
                    }
                }
            }
            // clear the pivot row with column operations
            for j in left + 1..cols {
                if !m[top][j].is_zero() {
                    let q = div_round(&m[top][j], &m[top][left]);
                    for row in m.iter_mut().skip(top) {
                        let v = &row[j] - &q * &row[left];
                        row[j] = v;
                    }
                    if !m[top][j].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(left, j);
                        }
                        dirty = true;
                    }
                }
            }
            if !dirty {
                break;
            }
        }
        // enforce divisibility of the remaining block by the pivot
        let d = m[top][left].abs();
        let mut fixed = false;
        for i in top + 1..rows {
            for j in left + 1..cols {
                if !(&m[i][j] % &d).is_zero() {
                    // add row i to the pivot row and restart this pivot
                    for j2 in left..cols {
                        let v = &m[top][j2] + &m[i][j2];
                        m[top][j2] = v;
                    }
                    fixed = true;
                    break;
                }
            }
            if fixed {
                break;
            }
        }
        if fixed {
            continue;
        }
        invariants.push(d);
        top += 1;
        left += 1;
    }
    invariants
}

/// True iff the given vectors span a saturated (direct-summand) submodule:
/// all Smith invariant factors of the stacked matrix are 1.
pub fn is_saturated(basis: &[Vec<BigInt>]) -> bool {
    if basis.is_empty() {
        return true;
    }
    smith_invariants(basis).iter().all(|d| d.is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect()
    }

    #[test]
    fn kernel_of_zero_is_full() {
        let k = integer_kernel(&big(&[&[0, 0], &[0, 0]]));
        assert_eq!(k.len(), 2);
        assert!(is_saturated(&k));
    }

    #[test]
    fn kernel_saturation_nontrivial() {
        // rows (2, 4): rational kernel spanned by (2, -1); saturated basis, not (4, -2)
        let k = integer_kernel(&big(&[&[2, 4]]));
        assert_eq!(k.len(), 1);
        let g = num::integer::gcd(k[0][0].clone(), k[0][1].clone());
        assert!(g.is_one());
        assert!(is_saturated(&k));
    }

    #[test]
    fn hnf_reconstructs() {
        let a = big(&[&[4, 6, 2], &[2, 8, 10]]);
        let (h, u) = column_hnf(&a);
        // a·u = h
        for i in 0..2 {
            for j in 0..3 {
                let mut s = BigInt::from(0);
                for k in 0..3 {
                    s += &a[i][k] * &u[k][j];
                }
                assert_eq!(s, h[i][j]);
            }
        }
    }

    #[test]
    fn smith_of_diag() {
        let inv = smith_invariants(&big(&[&[2, 0], &[0, 6]]));
        assert_eq!(inv, vec![BigInt::from(2), BigInt::from(6)]);
        let inv2 = smith_invariants(&big(&[&[2, 1], &[0, 2]]));
        assert_eq!(inv2, vec![BigInt::from(1), BigInt::from(4)]);
    }
}
