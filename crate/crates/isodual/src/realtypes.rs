//! Real classification of types: the spectral split of `χ(R)` into the
//! quadratics `Ψ_{k,l}`, signatures, the dimension formula, and construction
//! of a real splitting matrix `P` with `F = P·(⊕ canonical blocks)·P'`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    cyclotomic_factorization, integer_kernel, symmetric_signature, IntMat, RatMat,
};
use crate::types::AlgType;

pub const SPLIT_TOL: f64 = 1e-9;

/// The real-type invariant `((p,q); g; {(k,l) ↦ (p_{k,l}, q_{k,l})})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RealSignature {
    pub p: usize,
    pub q: usize,
    pub g: usize,
    pub herm: BTreeMap<(u64, u64), (usize, usize)>,
}

impl RealSignature {
    pub fn rank(&self) -> usize {
        self.p
            + self.q
            + 2 * self.g
            + 2 * self.herm.values().map(|(a, b)| a + b).sum::<usize>()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "q": self.q,
            "g": self.g,
            "herm": self.herm.iter().map(|((k, l), (p, q))| {
                serde_json::json!({"k": k, "l": l, "p": p, "q": q})
            }).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for RealSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(({},{});{};{{", self.p, self.q, self.g)?;
        let mut first = true;
        for ((k, l), (p, q)) in &self.herm {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "({k},{l})→({p},{q})")?;
            first = false;
        }
        write!(f, "}})")
    }
}

/// `dim V_F = pq + g(g+1) + 2·Σ p_{k,l}·q_{k,l}`.
pub fn dimension(s: &RealSignature) -> usize {
    s.p * s.q
        + s.g * (s.g + 1)
        + 2 * s.herm.values().map(|(p, q)| p * q).sum::<usize>()
}

/// Index pairs allowed in the real split: `gcd(k,l) = 1`, `1 ≤ l < max(3,k)/2`.
pub fn valid_index(k: u64, l: u64) -> bool {
    l >= 1 && 2 * l < k.max(3) && num::integer::gcd(k, l) == 1
}

/// Hermitian index pairs for a given conductor `k ≥ 3`.
pub fn herm_indices(k: u64) -> Vec<u64> {
    (1..k).filter(|&l| valid_index(k, l)).collect()
}

/// `Ψ_{k,l}`: `x−1`, `x+1`, or `x² − 2cos(2lπ/k)x + 1`; ascending coefficients.
pub fn psi_poly(k: u64, l: u64) -> Result<Vec<f64>> {
    if !valid_index(k, l) {
        return Err(Error::InvalidIndex { k, l });
    }
    Ok(match (k, l) {
        (1, 1) => vec![-1.0, 1.0],
        (2, 1) => vec![1.0, 1.0],
        _ => vec![1.0, -2.0 * (2.0 * l as f64 * PI / k as f64).cos(), 1.0],
    })
}

/// The 2×2 rotation block `P_{2;k,l}` with angle `πl/k`.
pub fn rotation_block(k: u64, l: u64) -> DMatrix<f64> {
    let phi = PI * l as f64 / k as f64;
    DMatrix::from_row_slice(2, 2, &[phi.cos(), -phi.sin(), phi.sin(), phi.cos()])
}

/// Real signature of a type.
///
/// Multiplicities come from the exact cyclotomic factorization of `χ(R)`;
/// `(p,q)` is the exact signature of `F` restricted to `ker(R^∨ − I)`;
/// the hermitian pairs are signatures of `e^{−iπl/k}·v̄'Fv` on the
/// complexified eigenblocks.
pub fn signature(a: &AlgType) -> RealSignature {
    let chi = a.r().char_poly();
    let (factors, rest) = cyclotomic_factorization(&chi, a.n());
    debug_assert_eq!(rest.degree(), 0, "R has finite order");
    let mult: BTreeMap<u64, usize> = factors.into_iter().collect();

    let rdual = a.r().dual_inverse().expect("R unimodular");

    // symmetric part: exact restriction to the fixed module of R^∨
    let (p, q) = if mult.get(&1).copied().unwrap_or(0) > 0 {
        let fix = &rdual - &IntMat::identity(a.n());
        let basis = integer_kernel(&fix);
        let r = basis.len();
        let s = RatMat::from_fn(r, r, |i, j| {
            BigRational::from(bilinear(a.f(), &basis[i], &basis[j]))
        });
        symmetric_signature(&s)
    } else {
        (0, 0)
    };

    let g = mult.get(&2).copied().unwrap_or(0) / 2;
    debug_assert!(mult.get(&2).copied().unwrap_or(0) % 2 == 0);

    let f_f64 = a.f().to_f64();
    let rdual_f64 = rdual.to_f64();
    let mut herm = BTreeMap::new();
    for (&k, &m) in &mult {
        if k < 3 || m == 0 {
            continue;
        }
        for l in herm_indices(k) {
            let (pk, qk) = hermitian_block_signature(&f_f64, &rdual_f64, k, l, m);
            herm.insert((k, l), (pk, qk));
        }
    }

    let sig = RealSignature { p, q, g, herm };
    debug_assert_eq!(sig.rank(), a.n(), "signature ranks must sum to n");
    sig
}

fn bilinear(f: &IntMat, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let fy = f.apply(y);
    x.iter().zip(&fy).map(|(a, b)| a * b).sum()
}

type CMat = DMatrix<Complex<f64>>;

/// Orthonormal basis of `ker(R^∨ − ζI)` over ℂ, via SVD.
fn complex_eigenbasis(rdual: &DMatrix<f64>, zeta: Complex<f64>, m: usize) -> Vec<nalgebra::DVector<Complex<f64>>> {
    let n = rdual.nrows();
    let a = CMat::from_fn(n, n, |i, j| {
        Complex::new(rdual[(i, j)], 0.0) - if i == j { zeta } else { Complex::new(0.0, 0.0) }
    });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&i, &j| svd.singular_values[i].total_cmp(&svd.singular_values[j]));
    let mut basis = Vec::new();
    for &i in idx.iter().take(m) {
        debug_assert!(svd.singular_values[i] < 1e-7, "eigenblock dimension mismatch");
        basis.push(v_t.row(i).adjoint());
    }
    basis
}

/// Signature of the hermitian form `e^{−iπl/k}·v̄'Fv` on `ker(R^∨ − ζ_{k,l})`.
fn hermitian_block_signature(
    f: &DMatrix<f64>,
    rdual: &DMatrix<f64>,
    k: u64,
    l: u64,
    m: usize,
) -> (usize, usize) {
    let theta = 2.0 * PI * l as f64 / k as f64;
    let zeta = Complex::new(theta.cos(), theta.sin());
    let basis = complex_eigenbasis(rdual, zeta, m);
    let lambda = Complex::from_polar(1.0, -PI * l as f64 / k as f64);
    let fc = CMat::from_fn(f.nrows(), f.ncols(), |i, j| Complex::new(f[(i, j)], 0.0));
    let h = CMat::from_fn(m, m, |i, j| lambda * (basis[i].adjoint() * &fc * &basis[j])[(0, 0)]);
    debug_assert!((&h - h.adjoint()).camax() < 1e-7, "form must be hermitian");
    let eig = h.symmetric_eigenvalues();
    let p = eig.iter().filter(|&&e| e > 1e-7).count();
    let q = eig.iter().filter(|&&e| e < -1e-7).count();
    debug_assert_eq!(p + q, m, "hermitian block must be nondegenerate");
    (p, q)
}

/// Block descriptors of the canonical form `F₀ = ⊕ blocks`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BlockPlan {
    /// `I_{p,q}` (orthogonal component)
    Sym { p: usize, q: usize },
    /// `J_{2g}` (symplectic component)
    Alt { g: usize },
    /// `p` copies of `P_{2;k,l}` followed by `q` copies of `−P_{2;k,l}`
    Herm { k: u64, l: u64, p: usize, q: usize },
}

impl BlockPlan {
    pub fn size(&self) -> usize {
        match self {
            BlockPlan::Sym { p, q } => p + q,
            BlockPlan::Alt { g } => 2 * g,
            BlockPlan::Herm { p, q, .. } => 2 * (p + q),
        }
    }

    /// The canonical block matrix.
    pub fn canonical(&self) -> DMatrix<f64> {
        match *self {
            BlockPlan::Sym { p, q } => DMatrix::from_fn(p + q, p + q, |i, j| {
                if i != j {
                    0.0
                } else if i < p {
                    1.0
                } else {
                    -1.0
                }
            }),
            BlockPlan::Alt { g } => DMatrix::from_fn(2 * g, 2 * g, |i, j| {
                if j == i + g {
                    1.0
                } else if i == j + g {
                    -1.0
                } else {
                    0.0
                }
            }),
            BlockPlan::Herm { k, l, p, q } => {
                let rot = rotation_block(k, l);
                let m = p + q;
                DMatrix::from_fn(2 * m, 2 * m, |i, j| {
                    let (bi, bj) = (i / 2, j / 2);
                    if bi != bj {
                        0.0
                    } else {
                        let sign = if bi < p { 1.0 } else { -1.0 };
                        sign * rot[(i % 2, j % 2)]
                    }
                })
            }
        }
    }
}

/// A real splitting `F = P·(⊕ blocks)·P'` with `|det P| = 1`.
#[derive(Clone, Debug)]
pub struct RealSplit {
    pub p: DMatrix<f64>,
    pub blocks: Vec<BlockPlan>,
    pub residual: f64,
}

impl RealSplit {
    /// `F₀ = ⊕ canonical blocks`.
    pub fn canonical_form(&self) -> DMatrix<f64> {
        let n: usize = self.blocks.iter().map(BlockPlan::size).sum();
        let mut f0 = DMatrix::zeros(n, n);
        let mut off = 0;
        for b in &self.blocks {
            let c = b.canonical();
            f0.view_mut((off, off), (c.nrows(), c.ncols())).copy_from(&c);
            off += c.nrows();
        }
        f0
    }
}

/// Construct a real splitting matrix for the type.
///
/// Blocks are ordered symmetric, alternating, then hermitian by ascending
/// `(k,l)`, positive copies first within each hermitian block.
pub fn real_split(a: &AlgType) -> Result<RealSplit> {
    let sig = signature(a);
    let n = a.n();
    let mut blocks = Vec::new();
    if sig.p + sig.q > 0 {
        blocks.push(BlockPlan::Sym { p: sig.p, q: sig.q });
    }
    if sig.g > 0 {
        blocks.push(BlockPlan::Alt { g: sig.g });
    }
    for (&(k, l), &(p, q)) in &sig.herm {
        blocks.push(BlockPlan::Herm { k, l, p, q });
    }

    let f_f64 = a.f().to_f64();
    let rdual = a.r().dual_inverse().expect("R unimodular");

    // fast path: F already is the canonical block sum
    let trivial = {
        let plan = RealSplit { p: DMatrix::identity(n, n), blocks: blocks.clone(), residual: 0.0 };
        let f0 = plan.canonical_form();
        (&f_f64 - &f0).amax() < SPLIT_TOL
    };
    if trivial {
        return Ok(RealSplit { p: DMatrix::identity(n, n), blocks, residual: 0.0 });
    }

    let mut columns: Vec<nalgebra::DVector<f64>> = Vec::new();
    for b in &blocks {
        match *b {
            BlockPlan::Sym { p, q } => columns.extend(sym_columns(a, p, q)),
            BlockPlan::Alt { g } => columns.extend(alt_columns(a, g)),
            BlockPlan::Herm { k, l, p, q } => {
                columns.extend(herm_columns(&f_f64, &rdual.to_f64(), k, l, p, q))
            }
        }
    }
    debug_assert_eq!(columns.len(), n);
    // the columns C satisfy C'·F·C = F₀, so P = C^{−T} gives F = P·F₀·P'
    let col_mat = DMatrix::from_columns(&columns);
    let p_mat = col_mat
        .transpose()
        .try_inverse()
        .ok_or(Error::SplitFailed { residual: f64::INFINITY, tol: SPLIT_TOL })?;
    let split = RealSplit { p: p_mat, blocks, residual: 0.0 };
    let f0 = split.canonical_form();
    let residual = (&split.p * &f0 * split.p.transpose() - &f_f64).amax();
    if residual > SPLIT_TOL {
        return Err(Error::SplitFailed { residual, tol: SPLIT_TOL });
    }
    debug_assert!((split.p.determinant().abs() - 1.0).abs() < 1e-6);
    Ok(RealSplit { residual, ..split })
}

/// Columns diagonalizing `F` on the fixed module to `I_{p,q}`.
fn sym_columns(a: &AlgType, p: usize, q: usize) -> Vec<nalgebra::DVector<f64>> {
    let rdual = a.r().dual_inverse().expect("R unimodular");
    let fix = &rdual - &IntMat::identity(a.n());
    let basis = integer_kernel(&fix);
    let r = basis.len();
    debug_assert_eq!(r, p + q);
    let s = DMatrix::from_fn(r, r, |i, j| {
        bigint_to_f64(&bilinear(a.f(), &basis[i], &basis[j]))
    });
    let eig = nalgebra::SymmetricEigen::new(s);
    let mut idx: Vec<usize> = (0..r).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut out = Vec::new();
    for &i in &idx {
        let lam = eig.eigenvalues[i];
        let scale = 1.0 / lam.abs().sqrt();
        let mut col = nalgebra::DVector::zeros(a.n());
        for (bi, bvec) in basis.iter().enumerate() {
            let c = eig.eigenvectors[(bi, i)] * scale;
            for (row, entry) in bvec.iter().enumerate() {
                col[row] += c * bigint_to_f64(entry);
            }
        }
        out.push(col);
    }
    out
}

/// Columns giving a symplectic basis (`u_1..u_g, v_1..v_g`) of the
/// alternating component, computed exactly over ℚ.
fn alt_columns(a: &AlgType, g: usize) -> Vec<nalgebra::DVector<f64>> {
    let rdual = a.r().dual_inverse().expect("R unimodular");
    let fix = &rdual + &IntMat::identity(a.n());
    let basis = integer_kernel(&fix);
    debug_assert_eq!(basis.len(), 2 * g);
    // work in the coordinates of `basis`
    let dim = 2 * g;
    let form = RatMat::from_fn(dim, dim, |i, j| {
        BigRational::from(bilinear(a.f(), &basis[i], &basis[j]))
    });
    let pairing = |x: &Vec<BigRational>, y: &Vec<BigRational>| -> BigRational {
        let mut acc = BigRational::zero();
        for i in 0..dim {
            for j in 0..dim {
                acc += &x[i] * form.at(i, j) * &y[j];
            }
        }
        acc
    };
    let mut pool: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut us = Vec::new();
    let mut vs = Vec::new();
    while let Some(u) = pool.pop() {
        let vpos = pool.iter().position(|w| !pairing(&u, w).is_zero());
        let Some(vpos) = vpos else {
            debug_assert!(false, "nondegenerate alternating form must pair u");
            continue;
        };
        let mut v = pool.remove(vpos);
        let c = pairing(&u, &v);
        for entry in v.iter_mut() {
            *entry /= &c;
        }
        for w in pool.iter_mut() {
            let cu = pairing(&u, w);
            let cv = pairing(&v, w);
            for i in 0..dim {
                let adj = &w[i] - &cu * &v[i] + &cv * &u[i];
                w[i] = adj;
            }
        }
        us.push(u);
        vs.push(v);
    }
    let mut out = Vec::new();
    for w in us.iter().chain(vs.iter()) {
        let mut col = nalgebra::DVector::zeros(a.n());
        for (bi, coeff) in w.iter().enumerate() {
            let c = rat_to_f64(coeff);
            for (row, entry) in basis[bi].iter().enumerate() {
                col[row] += c * bigint_to_f64(entry);
            }
        }
        out.push(col);
    }
    out
}

/// Real column pairs realizing `±P_{2;k,l}` blocks from an `h`-orthonormal
/// complex eigenbasis.
fn herm_columns(
    f: &DMatrix<f64>,
    rdual: &DMatrix<f64>,
    k: u64,
    l: u64,
    p: usize,
    q: usize,
) -> Vec<nalgebra::DVector<f64>> {
    let m = p + q;
    let theta = 2.0 * PI * l as f64 / k as f64;
    let zeta = Complex::new(theta.cos(), theta.sin());
    let basis = complex_eigenbasis(rdual, zeta, m);
    let lambda = Complex::from_polar(1.0, -PI * l as f64 / k as f64);
    let fc = CMat::from_fn(f.nrows(), f.ncols(), |i, j| Complex::new(f[(i, j)], 0.0));
    let h = CMat::from_fn(m, m, |i, j| lambda * (basis[i].adjoint() * &fc * &basis[j])[(0, 0)]);
    let eig = h.clone().symmetric_eigen();
    // order h-eigenvectors: positive eigenvalues first
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let mut out = Vec::new();
    for &i in &idx {
        let lam = eig.eigenvalues[i];
        let scale = 1.0 / lam.abs().sqrt();
        let mut v = nalgebra::DVector::from_element(f.nrows(), Complex::new(0.0, 0.0));
        for (bi, bvec) in basis.iter().enumerate() {
            let c = eig.eigenvectors[(bi, i)] * Complex::new(scale, 0.0);
            v += bvec * c;
        }
        let sqrt2 = 2f64.sqrt();
        let x = nalgebra::DVector::from_fn(f.nrows(), |r, _| sqrt2 * v[r].re);
        let y = nalgebra::DVector::from_fn(f.nrows(), |r, _| -sqrt2 * v[r].im);
        out.push(x);
        out.push(y);
    }
    out
}

fn bigint_to_f64(v: &BigInt) -> f64 {
    i64::try_from(v).map(|x| x as f64).unwrap_or(f64::NAN)
}

fn rat_to_f64(v: &BigRational) -> f64 {
    bigint_to_f64(v.numer()) / bigint_to_f64(v.denom())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::make_type;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64_rows(rows)
    }

    fn ipq(p: usize, q: usize) -> IntMat {
        IntMat::from_fn(p + q, |i, j| {
            if i != j {
                0.into()
            } else if i < p {
                1.into()
            } else {
                BigInt::from(-1)
            }
        })
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi_poly(1, 1).unwrap(), vec![-1.0, 1.0]);
        assert_eq!(psi_poly(2, 1).unwrap(), vec![1.0, 1.0]);
        let p41 = psi_poly(4, 1).unwrap();
        assert!((p41[1] - 0.0).abs() < 1e-15 && p41[0] == 1.0);
        // Ψ_{8,3} = x² + √2·x + 1
        let p83 = psi_poly(8, 3).unwrap();
        assert!((p83[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!(psi_poly(4, 2).is_err());
        assert!(psi_poly(3, 2).is_err());
    }

    #[test]
    fn signature_ipq() {
        let t = make_type(&ipq(2, 1), None).unwrap();
        let s = signature(&t);
        assert_eq!((s.p, s.q, s.g), (2, 1, 0));
        assert!(s.herm.is_empty());
        assert_eq!(dimension(&s), 2);
    }

    #[test]
    fn signature_g3() {
        // G_3 → ((1,0); 0; {(4,1) ↦ (0,1)})
        let g3 = m(&[&[0, -1, 0], &[0, -1, -1], &[1, 1, -1]]);
        let t = make_type(&g3, None).unwrap();
        let s = signature(&t);
        assert_eq!((s.p, s.q, s.g), (1, 0, 0));
        assert_eq!(s.herm.get(&(4, 1)), Some(&(0, 1)));
        assert_eq!(dimension(&s), 0);
    }

    #[test]
    fn signature_f4() {
        // F_4 → ((1,1); 1; ∅), dim = 1·1 + 1·2 = 3
        let f4 = m(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 1, 0, 0], &[1, 0, 0, 0]]);
        let t = make_type(&f4, None).unwrap();
        let s = signature(&t);
        assert_eq!((s.p, s.q, s.g), (1, 1, 1));
        assert!(s.herm.is_empty());
        assert_eq!(dimension(&s), 3);
    }

    #[test]
    fn signature_j4_dimension() {
        let j2 = m(&[&[0, 1], &[-1, 0]]);
        let j4 = j2.tensor(&IntMat::identity(2));
        let t = make_type(&j4, None).unwrap();
        let s = signature(&t);
        assert_eq!((s.p, s.q, s.g), (0, 0, 2));
        assert_eq!(dimension(&s), 6);
    }

    #[test]
    fn split_identity_blocks() {
        let t = make_type(&ipq(1, 2), None).unwrap();
        let split = real_split(&t).unwrap();
        assert_eq!(split.p, DMatrix::identity(3, 3));
        assert_eq!(split.blocks, vec![BlockPlan::Sym { p: 1, q: 2 }]);
    }

    #[test]
    fn split_g3_reconstructs() {
        let g3 = m(&[&[0, -1, 0], &[0, -1, -1], &[1, 1, -1]]);
        let t = make_type(&g3, None).unwrap();
        let split = real_split(&t).unwrap();
        assert!(split.residual < SPLIT_TOL);
        assert_eq!(
            split.blocks,
            vec![
                BlockPlan::Sym { p: 1, q: 0 },
                BlockPlan::Herm { k: 4, l: 1, p: 0, q: 1 }
            ]
        );
    }

    #[test]
    fn split_f2_order6() {
        let f2 = m(&[&[1, -1], &[0, 1]]);
        let t = make_type(&f2, None).unwrap();
        let s = signature(&t);
        assert_eq!(s.herm.get(&(6, 1)), Some(&(1, 0)));
        let split = real_split(&t).unwrap();
        assert!(split.residual < SPLIT_TOL);
    }

    #[test]
    fn split_mixed_sum() {
        // I_1 ⊕ J_2 ⊕ F_2: symmetric + alternating + hermitian blocks
        let f = ipq(1, 0)
            .direct_sum(&m(&[&[0, 1], &[-1, 0]]))
            .direct_sum(&m(&[&[1, -1], &[0, 1]]));
        let t = make_type(&f, None).unwrap();
        let split = real_split(&t).unwrap();
        assert!(split.residual < SPLIT_TOL);
        assert_eq!(split.blocks.len(), 3);
    }
}
