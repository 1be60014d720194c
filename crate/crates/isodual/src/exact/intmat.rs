use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::poly::IntPoly;
use crate::exact::ratmat::RatMat;

/// Exact square integer matrix, the carrier of types `F` and torsion elements `R`.
///
/// Entries are arbitrary-precision integers stored row-major.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "IntMatRepr", into = "IntMatRepr")]
pub struct IntMat {
    n: usize,
    entries: Vec<BigInt>,
}

/// Wire format: `{"n": …, "rows": [[…], …]}` with decimal integer entries.
#[derive(Serialize, Deserialize)]
struct IntMatRepr {
    n: usize,
    rows: Vec<Vec<i64>>,
}

impl TryFrom<IntMatRepr> for IntMat {
    type Error = String;
    fn try_from(r: IntMatRepr) -> std::result::Result<Self, String> {
        if r.rows.len() != r.n || r.rows.iter().any(|row| row.len() != r.n) {
            return Err(format!("expected {0}x{0} rows", r.n));
        }
        Ok(IntMat::from_fn(r.n, |i, j| BigInt::from(r.rows[i][j])))
    }
}

impl From<IntMat> for IntMatRepr {
    fn from(m: IntMat) -> Self {
        IntMatRepr {
            n: m.n,
            rows: (0..m.n)
                .map(|i| {
                    (0..m.n)
                        .map(|j| i64::try_from(m.at(i, j)).expect("entry exceeds i64 wire range"))
                        .collect()
                })
                .collect(),
        }
    }
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.n, self.n)?;
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.at(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let row: Vec<String> = (0..self.n).map(|j| self.at(i, j).to_string()).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

impl IntMat {
    pub fn new(n: usize, entries: Vec<BigInt>) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::BadDimension(n));
        }
        assert_eq!(entries.len(), n * n, "entry count must be n*n");
        Ok(IntMat { n, entries })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> BigInt) -> Self {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        IntMat { n, entries }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must be square");
        Self::from_fn(n, |i, j| BigInt::from(rows[i][j]))
    }

    /// Parse a bracketed row list such as `[[1,-1],[0,1]]`.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("matrix literal: {e}")))?;
        let n = rows.len();
        if n == 0 || n > 8 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("matrix literal must be square, 1 <= n <= 8".into()));
        }
        Ok(Self::from_fn(n, |i, j| BigInt::from(rows[i][j])))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_, _| BigInt::zero())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> IntMat {
        Self::from_fn(self.n, |i, j| self.at(j, i).clone())
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.at(i, j) == self.at(j, i)))
    }

    /// A symmetric integer matrix is even iff all diagonal entries are even.
    pub fn is_even(&self) -> bool {
        (0..self.n).all(|i| (self.at(i, i) % 2u8).is_zero())
    }

    /// Fraction-free Bareiss determinant.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !a[i * n + k].is_zero()) {
                    Some(p) => {
                        for j in 0..n {
                            a.swap(k * n + j, p * n + j);
                        }
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
                a[i * n + k] = BigInt::zero();
            }
            prev = a[k * n + k].clone();
        }
        sign * a[(n - 1) * n + (n - 1)].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    /// Exact inverse of a unimodular matrix (the inverse is again integral).
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        let det = self.det();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular { det: det.to_string() });
        }
        let adj = self.adjugate();
        // inverse = adjugate / det with det = ±1
        Ok(if det.is_one() { adj } else { -adj })
    }

    fn adjugate(&self) -> IntMat {
        let n = self.n;
        if n == 1 {
            return IntMat::identity(1);
        }
        IntMat::from_fn(n, |i, j| {
            // cofactor C_{j,i}
            let minor = IntMat::from_fn(n - 1, |r, c| {
                let rr = if r < j { r } else { r + 1 };
                let cc = if c < i { c } else { c + 1 };
                self.at(rr, cc).clone()
            });
            let d = minor.det();
            if (i + j) % 2 == 0 {
                d
            } else {
                -d
            }
        })
    }

    /// Transpose-inverse `F^∨ = (F')^{-1}` of a unimodular matrix.
    pub fn dual_inverse(&self) -> Result<IntMat> {
        self.transpose().inverse_unimodular()
    }

    /// `F·F^∨`, the torsion candidate attached to `F`.
    pub fn ffdual(&self) -> Result<IntMat> {
        Ok(self * &self.dual_inverse()?)
    }

    /// Exact characteristic polynomial `det(xI − M)` via Faddeev–LeVerrier.
    pub fn char_poly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMat::zero(n);
        for k in 1..=n {
            // M_k = A·M_{k-1} + c_{n-k+1}·I ;  c_{n-k} = -tr(A·M_k)/k
            let prev_c = coeffs[n - k + 1].clone();
            for i in 0..n {
                let v = m.at(i, i) + &prev_c;
                m.set(i, i, v);
            }
            m = self * &m;
            let tr: BigInt = (0..n).map(|i| m.at(i, i).clone()).sum();
            coeffs[n - k] = -tr / BigInt::from(k);
        }
        IntPoly::new(coeffs)
    }

    pub fn pow(&self, e: u64) -> IntMat {
        let mut acc = IntMat::identity(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &IntMat) -> IntMat {
        let (m, n) = (self.n, other.n);
        IntMat::from_fn(m + n, |i, j| {
            if i < m && j < m {
                self.at(i, j).clone()
            } else if i >= m && j >= m {
                other.at(i - m, j - m).clone()
            } else {
                BigInt::zero()
            }
        })
    }

    /// Kronecker product `(a_{ij}·B)`.
    pub fn tensor(&self, other: &IntMat) -> IntMat {
        let (m, n) = (self.n, other.n);
        IntMat::from_fn(m * n, |i, j| self.at(i / n, j / n) * other.at(i % n, j % n))
    }

    /// Congruence action `T·M·T'`.
    pub fn conjugate_by(&self, t: &IntMat) -> IntMat {
        t * &(self * &t.transpose())
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat::from_fn(self.n, self.n, |i, j| self.at(i, j).clone().into())
    }

    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| {
            // entries in this crate stay tiny; the conversion is exact
            i64::try_from(self.at(i, j)).map(|v| v as f64).unwrap_or_else(|_| {
                self.at(i, j).to_string().parse::<f64>().unwrap()
            })
        })
    }

    pub fn apply(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.at(i, j) * &v[j]).sum())
            .collect()
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        IntMat::from_fn(self.n, |i, j| {
            (0..self.n).map(|k| self.at(i, k) * rhs.at(k, j)).sum()
        })
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.n, rhs.n);
        IntMat::from_fn(self.n, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.n, rhs.n);
        IntMat::from_fn(self.n, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Neg for IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat::from_fn(self.n, |i, j| -self.at(i, j))
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        IntMat::from_fn(self.n, |i, j| -self.at(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j2() -> IntMat {
        IntMat::from_i64_rows(&[&[0, 1], &[-1, 0]])
    }

    #[test]
    fn dual_inverse_identity() {
        let id = IntMat::identity(3);
        assert_eq!(id.dual_inverse().unwrap(), id);
    }

    #[test]
    fn dual_inverse_j2_is_j2() {
        // (J_2')^{-1} = (−J_2)^{-1} = J_2
        assert_eq!(j2().dual_inverse().unwrap(), j2());
    }

    #[test]
    fn dual_inverse_f2() {
        let f2 = IntMat::from_i64_rows(&[&[1, -1], &[0, 1]]);
        let expected = IntMat::from_i64_rows(&[&[1, 0], &[1, 1]]);
        assert_eq!(f2.dual_inverse().unwrap(), expected);
    }

    #[test]
    fn dual_inverse_is_involution() {
        let f = IntMat::from_i64_rows(&[&[1, 2, 0], &[0, 1, -1], &[0, 0, 1]]);
        let dd = f.dual_inverse().unwrap().dual_inverse().unwrap();
        assert_eq!(dd, f);
    }

    #[test]
    fn dual_inverse_rejects_non_unimodular() {
        let m = IntMat::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(m.dual_inverse(), Err(Error::NotUnimodular { .. })));
    }

    #[test]
    fn char_poly_examples() {
        // I_2 → (x−1)²
        let p = IntMat::identity(2).char_poly();
        assert_eq!(p, IntPoly::from_i64(&[1, -2, 1]));
        // J_2 → x²+1
        assert_eq!(j2().char_poly(), IntPoly::from_i64(&[1, 0, 1]));
    }

    #[test]
    fn det_bareiss_matches_cofactor() {
        let m = IntMat::from_i64_rows(&[&[2, 1, 3], &[0, -1, 4], &[5, 2, 1]]);
        // cofactor by hand: 2(−1·1−4·2) − 1(0·1−4·5) + 3(0·2+1·5) = 2(−9) −(−20) + 15 = 17
        assert_eq!(m.det(), BigInt::from(17));
    }

    #[test]
    fn serde_roundtrip() {
        let m = IntMat::from_i64_rows(&[&[1, -1], &[0, 1]]);
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("\"rows\""));
        let back: IntMat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
    }
}
