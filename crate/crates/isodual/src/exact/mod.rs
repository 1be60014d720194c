//! Exact integer and rational matrix arithmetic: transpose-inverse,
//! characteristic polynomials, cyclotomic factor detection, integer kernels
//! via normal forms, and the linear systems `F = R·F'`.

mod hnf;
mod intmat;
mod poly;
mod ratmat;
mod sylvester;

pub use hnf::{column_hnf, integer_kernel as kernel_of_rows, is_saturated, smith_invariants};
pub use intmat::IntMat;
pub use poly::{conductors_up_to, cyclotomic, euler_phi, IntPoly};
pub use ratmat::{symmetric_signature, RatMat};
pub use sylvester::{sylvester_basis, unimodular_solutions, MultiPoly, SylvesterSolutions};

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Transpose-inverse `F^∨ = (F')^{-1}` of a unimodular matrix.
pub fn dual_inverse(f: &IntMat) -> Result<IntMat> {
    f.dual_inverse()
}

/// Exact characteristic polynomial `det(xI − M)`.
pub fn char_poly(m: &IntMat) -> IntPoly {
    m.char_poly()
}

/// Multiplicities of the cyclotomic factors of `p`, as `(k, m_k)` pairs,
/// together with the non-cyclotomic remainder.
pub fn cyclotomic_factorization(p: &IntPoly, n: usize) -> (Vec<(u64, usize)>, IntPoly) {
    let mut rem = p.clone();
    let mut factors = Vec::new();
    for k in conductors_up_to(n) {
        let phi = cyclotomic(k);
        let mut mult = 0usize;
        while let Some(q) = rem.div_exact(&phi) {
            rem = q;
            mult += 1;
        }
        if mult > 0 {
            factors.push((k, mult));
        }
    }
    (factors, rem)
}

/// Order of a unimodular integer matrix, or `None` when infinite.
///
/// The matrix has finite order iff its minimal polynomial is a squarefree
/// product of cyclotomic polynomials `Φ_k` with `φ(k) ≤ n`; the order is the
/// lcm of the occurring conductors.  Cross-checked by exact powering.
pub fn finite_order(r: &IntMat) -> Result<Option<u64>> {
    let det = r.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let chi = r.char_poly();
    let (factors, rest) = cyclotomic_factorization(&chi, r.n());
    if !rest.degree().is_zero() || rest.is_zero() {
        return Ok(None);
    }
    // candidate minimal polynomial: squarefree product of detected factors
    let mut min = IntPoly::one();
    for (k, _) in &factors {
        min = min.mul(&cyclotomic(*k));
    }
    let annihilates = min.eval_mat(r) == IntMat::zero(r.n());
    if !annihilates {
        return Ok(None);
    }
    let order = factors.iter().fold(1u64, |acc, (k, _)| num::integer::lcm(acc, *k));
    debug_assert!(r.pow(order).is_identity(), "order cross-check failed");
    Ok(Some(order))
}

/// Saturated kernel basis `{v ∈ ℤⁿ : M·v = 0}` of an integer matrix.
pub fn integer_kernel(m: &IntMat) -> Vec<Vec<BigInt>> {
    let rows: Vec<Vec<BigInt>> = (0..m.n())
        .map(|i| (0..m.n()).map(|j| m.at(i, j).clone()).collect())
        .collect();
    hnf::integer_kernel(&rows)
}

/// Saturated kernel basis of a rational matrix (same kernel as its
/// row-scaled integer form).
pub fn integer_kernel_rat(m: &RatMat) -> Vec<Vec<BigInt>> {
    hnf::integer_kernel(&m.scale_to_int_rows())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x3() -> IntMat {
        IntMat::from_i64_rows(&[&[1, 0, 1], &[0, 0, 1], &[0, -1, 0]])
    }

    /// X_5 of the rank-5 torsion table: [[1, E_{1,4}], [0, X_4]].
    fn x5() -> IntMat {
        IntMat::from_i64_rows(&[
            &[1, 0, 0, 0, 1],
            &[0, 0, 0, 0, -1],
            &[0, 1, 0, 0, 0],
            &[0, 0, 1, 0, 0],
            &[0, 0, 0, 1, 0],
        ])
    }

    #[test]
    fn order_identity() {
        assert_eq!(finite_order(&IntMat::identity(3)).unwrap(), Some(1));
    }

    #[test]
    fn order_x5_is_8() {
        assert_eq!(finite_order(&x5()).unwrap(), Some(8));
    }

    #[test]
    fn order_x3_is_4() {
        assert_eq!(finite_order(&x3()).unwrap(), Some(4));
    }

    #[test]
    fn infinite_order_unipotent_like() {
        // char poly (x+1)² but the matrix is not −I: minimal polynomial not squarefree
        let m = IntMat::from_i64_rows(&[&[-3, 2], &[-2, 1]]);
        assert_eq!(m.char_poly(), IntPoly::from_i64(&[1, 2, 1]));
        assert_eq!(finite_order(&m).unwrap(), None);
    }

    #[test]
    fn order_minimality() {
        // W_2 has order 6: check d and all proper divisors
        let w2 = IntMat::from_i64_rows(&[&[0, -1], &[1, 1]]);
        assert_eq!(finite_order(&w2).unwrap(), Some(6));
        assert!(w2.pow(6).is_identity());
        for e in 1..6 {
            assert!(!w2.pow(e).is_identity(), "W_2^{e} = I");
        }
    }

    #[test]
    fn kernel_examples() {
        // M = X_3^∨ − I has a rank-1 kernel
        let m = &x3().dual_inverse().unwrap() - &IntMat::identity(3);
        let k = integer_kernel(&m);
        assert_eq!(k.len(), 1);
        assert!(is_saturated(&k));

        // M = Φ_4(X_3^∨) has a rank-2 kernel (X_3 has χ = (x−1)(x²+1))
        let phi4 = cyclotomic(4);
        let m2 = phi4.eval_mat(&x3().dual_inverse().unwrap());
        let k2 = integer_kernel(&m2);
        assert_eq!(k2.len(), 2);
        assert!(is_saturated(&k2));
    }

    #[test]
    fn cyclotomic_factorization_of_w2_char() {
        let w2 = IntMat::from_i64_rows(&[&[0, -1], &[1, 1]]);
        let chi = w2.char_poly();
        assert_eq!(chi, cyclotomic(6));
        let (f, rest) = cyclotomic_factorization(&chi, 2);
        assert_eq!(f, vec![(6, 1)]);
        assert_eq!(rest, IntPoly::one());
    }
}
