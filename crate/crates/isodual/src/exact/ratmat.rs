use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Exact rational matrix (possibly rectangular), used for intermediate
/// kernels, inverses and signature computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMat {
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigRational) -> Self {
        let entries = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        RatMat { rows, cols, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| BigRational::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> RatMat {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, rhs: &RatMat) -> RatMat {
        assert_eq!(self.cols, rhs.rows);
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).map(|k| self.at(i, k) * rhs.at(k, j)).sum()
        })
    }

    /// Clear denominators column-wise: returns an integer matrix with the
    /// same kernel (each row scaled by the lcm of its denominators).
    pub fn scale_to_int_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let lcm = (0..self.cols).fold(BigInt::one(), |acc, j| {
                    num::integer::lcm(acc, self.at(i, j).denom().clone())
                });
                (0..self.cols)
                    .map(|j| {
                        let e = self.at(i, j);
                        e.numer() * (&lcm / e.denom())
                    })
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            let pivot = (rank..m.rows).find(|&i| !m.at(i, col).is_zero());
            let Some(p) = pivot else { continue };
            for j in 0..m.cols {
                let (a, b) = (m.at(rank, j).clone(), m.at(p, j).clone());
                m.set(rank, j, b);
                m.set(p, j, a);
            }
            let inv = m.at(rank, col).recip();
            for j in 0..m.cols {
                let v = m.at(rank, j) * &inv;
                m.set(rank, j, v);
            }
            for i in 0..m.rows {
                if i != rank && !m.at(i, col).is_zero() {
                    let f = m.at(i, col).clone();
                    for j in 0..m.cols {
                        let v = m.at(i, j) - &f * m.at(rank, j);
                        m.set(i, j, v);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Signature `(p, q)` of a nondegenerate symmetric rational matrix, by exact
/// Lagrange diagonalization.
pub fn symmetric_signature(s: &RatMat) -> (usize, usize) {
    assert_eq!(s.rows, s.cols);
    let n = s.rows;
    let mut m = s.clone();
    let (mut p, mut q) = (0usize, 0usize);
    let mut live: Vec<usize> = (0..n).collect();
    while !live.is_empty() {
        // prefer a nonzero diagonal pivot
        if let Some(pos) = live.iter().position(|&i| !m.at(i, i).is_zero()) {
            let i = live[pos];
            if m.at(i, i).is_positive() {
                p += 1;
            } else {
                q += 1;
            }
            let d = m.at(i, i).clone();
            let others: Vec<usize> = live.iter().copied().filter(|&k| k != i).collect();
            for &r in &others {
                let f = m.at(r, i) / &d;
                for &c in &others {
                    let v = m.at(r, c) - &f * m.at(i, c);
                    m.set(r, c, v);
                }
            }
            live.remove(pos);
        } else {
            // all live diagonal entries vanish; hyperbolic pair trick
            let mut found = None;
            'outer: for (a, &i) in live.iter().enumerate() {
                for &j in live.iter().skip(a + 1) {
                    if !m.at(i, j).is_zero() {
                        found = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((i, j)) = found else {
                // zero block: degenerate form, no further contribution
                break;
            };
            // basis change e_i ← e_i + e_j makes the (i,i) entry 2·m[i][j]
            let idx: Vec<usize> = (0..n).collect();
            for &c in &idx {
                let v = m.at(i, c) + m.at(j, c);
                m.set(i, c, v);
            }
            for &r in &idx {
                let v = m.at(r, i) + m.at(r, j);
                m.set(r, i, v);
            }
        }
    }
    (p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::FromPrimitive;

    fn rat(v: i64) -> BigRational {
        BigRational::from_i64(v).unwrap()
    }

    #[test]
    fn signature_diag() {
        let m = RatMat::from_fn(3, 3, |i, j| {
            if i == j {
                rat([2, -5, 7][i])
            } else {
                rat(0)
            }
        });
        assert_eq!(symmetric_signature(&m), (2, 1));
    }

    #[test]
    fn signature_hyperbolic() {
        // U_2 = [[0,1],[1,0]] has signature (1,1)
        let m = RatMat::from_fn(2, 2, |i, j| if i != j { rat(1) } else { rat(0) });
        assert_eq!(symmetric_signature(&m), (1, 1));
    }

    #[test]
    fn rank_rectangular() {
        let m = RatMat::from_fn(2, 3, |i, j| rat((i + j) as i64));
        assert_eq!(m.rank(), 2);
        let z = RatMat::zero(3, 2);
        assert_eq!(z.rank(), 0);
    }
}
