use std::fmt;

use num::bigint::BigInt;
use num::{One, Zero};

use crate::exact::intmat::IntMat;

/// Integer polynomial, coefficients ascending by degree.
///
/// The zero polynomial is the empty coefficient list; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match d {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{d}"),
            };
            let body = if d == 0 {
                c.to_string()
            } else if c.is_one() {
                var
            } else if (-c).is_one() {
                format!("-{var}")
            } else {
                format!("{c}{var}")
            };
            terms.push(body);
        }
        let mut out = String::new();
        for (i, t) in terms.iter().enumerate() {
            if i == 0 {
                out.push_str(t);
            } else if let Some(stripped) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(stripped);
            } else {
                out.push_str(" + ");
                out.push_str(t);
            }
        }
        write!(f, "{out}")
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^k − 1`
    pub fn x_pow_minus_one(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[0] = -BigInt::one();
        c[k] = BigInt::one();
        Self::new(c)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..len).map(|d| self.coeff(d) + other.coeff(d)).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Exact division; returns `None` when the remainder is nonzero or the
    /// quotient would leave the integers.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.degree() < divisor.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dl = divisor.coeffs.len();
        let lead = divisor.coeffs.last().unwrap();
        let mut q = vec![BigInt::zero(); rem.len() - dl + 1];
        for qi in (0..q.len()).rev() {
            let top = rem[qi + dl - 1].clone();
            if top.is_zero() {
                continue;
            }
            if !(&top % lead).is_zero() {
                return None;
            }
            let c = top / lead;
            for (k, d) in divisor.coeffs.iter().enumerate() {
                rem[qi + k] -= &c * d;
            }
            q[qi] = c;
        }
        if rem.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// True iff `self` divides `other` exactly over ℤ.
    pub fn divides(&self, other: &IntPoly) -> bool {
        other.div_exact(self).is_some()
    }

    /// Evaluate at a square integer matrix.
    pub fn eval_mat(&self, m: &IntMat) -> IntMat {
        let n = m.n();
        let mut acc = IntMat::zero(n);
        for c in self.coeffs.iter().rev() {
            acc = &(m * &acc) + &IntMat::from_fn(n, |i, j| if i == j { c.clone() } else { BigInt::zero() });
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| {
            acc * x + i64::try_from(c).map(|v| v as f64).unwrap_or(f64::NAN)
        })
    }
}

/// Euler totient, used to bound the conductors that can occur at rank `n`.
pub fn euler_phi(k: u64) -> u64 {
    let mut phi = k;
    let mut m = k;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            phi -= phi / p;
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        phi -= phi / m;
    }
    phi
}

/// Conductors `k` with `φ(k) ≤ n`, ascending.
pub fn conductors_up_to(n: usize) -> Vec<u64> {
    // φ(k) ≥ sqrt(k/2), so k ≤ 2n² + 1 is a safe scan bound for n ≤ 8
    (1..=(2 * (n as u64) * (n as u64) + 1))
        .filter(|&k| euler_phi(k) <= n as u64)
        .collect()
}

/// `k`-th cyclotomic polynomial by recursive division of `x^k − 1`.
pub fn cyclotomic(k: u64) -> IntPoly {
    assert!(k >= 1, "cyclotomic index must be positive");
    let mut quo = IntPoly::x_pow_minus_one(k as usize);
    for d in 1..k {
        if k % d == 0 {
            quo = quo.div_exact(&cyclotomic(d)).expect("Φ_d | x^k − 1");
        }
    }
    quo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), IntPoly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(2), IntPoly::from_i64(&[1, 1]));
        assert_eq!(cyclotomic(4), IntPoly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), IntPoly::from_i64(&[1, -1, 1]));
        // Φ_8 = x⁴+1, obtained by dividing x⁸−1 by Φ_1Φ_2Φ_4
        assert_eq!(cyclotomic(8), IntPoly::from_i64(&[1, 0, 0, 0, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn cyclotomic_product_identity() {
        // Π_{d|k} Φ_d = x^k − 1 for every conductor relevant at rank ≤ 8
        for k in conductors_up_to(8) {
            let mut prod = IntPoly::one();
            for d in 1..=k {
                if k % d == 0 {
                    prod = prod.mul(&cyclotomic(d));
                }
            }
            assert_eq!(prod, IntPoly::x_pow_minus_one(k as usize), "k = {k}");
            assert!(cyclotomic(k).divides(&IntPoly::x_pow_minus_one(k as usize)));
        }
    }

    #[test]
    fn phi_table() {
        let known = [(1, 1), (2, 1), (3, 2), (8, 4), (15, 8), (16, 8), (30, 8)];
        for (k, v) in known {
            assert_eq!(euler_phi(k), v);
        }
        assert_eq!(
            conductors_up_to(2),
            vec![1, 2, 3, 4, 6]
        );
    }

    #[test]
    fn division_exact_and_failing() {
        let p = IntPoly::from_i64(&[-1, 0, 1]); // x²−1
        assert_eq!(p.div_exact(&IntPoly::from_i64(&[1, 1])).unwrap(), IntPoly::from_i64(&[-1, 1]));
        assert!(p.div_exact(&IntPoly::from_i64(&[1, 0, 0, 1])).is_none());
        assert!(p.div_exact(&IntPoly::from_i64(&[2, 1])).is_none());
    }
}
