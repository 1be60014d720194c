//! Textbook two-phase dense simplex, sized for the tiny eutaxy feasibility
//! problems (≤ ~60 rows, ≤ ~25 columns).

/// Maximize `c·x` subject to `a_ub·x ≤ b_ub` (all `b_ub ≥ 0`),
/// `a_eq·x = b_eq` (all `b_eq ≥ 0`), `x ≥ 0`.
/// Returns `(x, objective)` or `None` when infeasible/unbounded.
pub fn solve_lp(
    c: &[f64],
    a_ub: &[Vec<f64>],
    b_ub: &[f64],
    a_eq: &[Vec<f64>],
    b_eq: &[f64],
) -> Option<(Vec<f64>, f64)> {
    let n = c.len();
    let m_ub = a_ub.len();
    let m_eq = a_eq.len();
    let m = m_ub + m_eq;
    // columns: x (n) | slacks (m_ub) | artificials (m) | rhs
    let n_slack = m_ub;
    let n_art = m;
    let width = n + n_slack + n_art + 1;
    let mut t = vec![vec![0.0; width]; m];
    let mut basis = vec![0usize; m];
    for (i, row) in a_ub.iter().enumerate() {
        debug_assert!(b_ub[i] >= 0.0);
        t[i][..n].copy_from_slice(row);
        t[i][n + i] = 1.0;
        t[i][n + n_slack + i] = 1.0;
        t[i][width - 1] = b_ub[i];
        basis[i] = n + n_slack + i;
    }
    for (k, row) in a_eq.iter().enumerate() {
        let i = m_ub + k;
        debug_assert!(b_eq[k] >= 0.0);
        t[i][..n].copy_from_slice(row);
        t[i][n + n_slack + i] = 1.0;
        t[i][width - 1] = b_eq[k];
        basis[i] = n + n_slack + i;
    }

    // phase 1: minimize the sum of artificials
    let mut obj1 = vec![0.0; width];
    for i in 0..m {
        for j in 0..width {
            obj1[j] -= t[i][j];
        }
    }
    for j in n + n_slack..n + n_slack + n_art {
        obj1[j] = 0.0;
    }
    run_simplex(&mut t, &mut obj1, &mut basis, n + n_slack + n_art)?;
    if obj1[width - 1] < -1e-7 {
        return None; // infeasible
    }
    // drive any remaining artificial out of the basis where possible
    for i in 0..m {
        if basis[i] >= n + n_slack {
            if let Some(j) = (0..n + n_slack).find(|&j| t[i][j].abs() > 1e-9) {
                pivot(&mut t, &mut obj1, &mut basis, i, j);
            }
        }
    }

    // phase 2: maximize c (artificial columns frozen at zero)
    let mut obj2 = vec![0.0; width];
    obj2[..n].copy_from_slice(c);
    for j in 0..width {
        obj2[j] = -obj2[j]; // tableau carries the negated objective row
    }
    // make the objective row consistent with the current basis
    for i in 0..m {
        let bj = basis[i];
        let coeff = obj2[bj];
        if coeff.abs() > 0.0 {
            for j in 0..width {
                obj2[j] -= coeff * t[i][j];
            }
        }
    }
    run_simplex(&mut t, &mut obj2, &mut basis, n + n_slack)?;
    let mut x = vec![0.0; n];
    for i in 0..m {
        if basis[i] < n {
            x[basis[i]] = t[i][width - 1];
        }
    }
    let obj = obj2[width - 1];
    Some((x, obj))
}

fn run_simplex(
    t: &mut [Vec<f64>],
    obj: &mut [f64],
    basis: &mut [usize],
    n_cols: usize,
) -> Option<()> {
    let width = obj.len();
    for _ in 0..10_000 {
        // Bland's rule: first improving column
        let Some(col) = (0..n_cols).find(|&j| obj[j] < -1e-9) else {
            return Some(());
        };
        let mut best: Option<(usize, f64)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[col] > 1e-9 {
                let ratio = row[width - 1] / row[col];
                let better = match best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < br - 1e-12 || (ratio < br + 1e-12 && basis[i] < basis[bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
        }
        let (row, _) = best?; // None: unbounded
        pivot(t, obj, basis, row, col);
    }
    None
}

fn pivot(t: &mut [Vec<f64>], obj: &mut [f64], basis: &mut [usize], row: usize, col: usize) {
    let width = obj.len();
    let p = t[row][col];
    for j in 0..width {
        t[row][j] /= p;
    }
    for i in 0..t.len() {
        if i != row && t[i][col].abs() > 0.0 {
            let f = t[i][col];
            for j in 0..width {
                t[i][j] -= f * t[row][j];
            }
        }
    }
    let f = obj[col];
    if f.abs() > 0.0 {
        for j in 0..width {
            obj[j] -= f * t[row][j];
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_lp() {
        // max x + y s.t. x + 2y ≤ 4, 3x + y ≤ 6
        let (x, obj) = solve_lp(
            &[1.0, 1.0],
            &[vec![1.0, 2.0], vec![3.0, 1.0]],
            &[4.0, 6.0],
            &[],
            &[],
        )
        .unwrap();
        assert!((obj - 2.8).abs() < 1e-9, "obj {obj}");
        assert!((x[0] - 1.6).abs() < 1e-9 && (x[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn with_equality() {
        // max t s.t. λ1 + λ2 = 1, t ≤ λ1, t ≤ λ2 → t = 1/2
        let (_, obj) = solve_lp(
            &[0.0, 0.0, 1.0],
            &[vec![-1.0, 0.0, 1.0], vec![0.0, -1.0, 1.0]],
            &[0.0, 0.0],
            &[vec![1.0, 1.0, 0.0]],
            &[1.0],
        )
        .unwrap();
        assert!((obj - 0.5).abs() < 1e-9, "obj {obj}");
    }

    #[test]
    fn infeasible() {
        // λ = 1 and λ ≤ 0.5 impossible
        let r = solve_lp(&[1.0], &[vec![1.0]], &[0.5], &[vec![1.0]], &[1.0]);
        assert!(r.is_none());
    }
}
