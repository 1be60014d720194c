//! Tangent spaces `T_A V_F = ker(Φ_{AF^∨} + Id)` and length gradients,
//! computed through the reduced polynomial `f` with min-poly
//! `(x+1)·f(x)` of the finite-order operator `Φ_{AF^∨}` on `Sym_n`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{membership_residual, Gram, GeoType, TOL};
use crate::IntMat;

/// A tangent frame at a point of `V_F`.
#[derive(Clone, Debug)]
pub struct TangentFrame {
    pub at: Gram,
    /// ⟨·,·⟩_A-orthonormal basis of `T_A V_F`
    pub basis: Vec<DMatrix<f64>>,
    /// the reduced polynomial `f` (ascending coefficients)
    pub f: Vec<f64>,
}

/// Basis of `Sym_n`: `E_ii` then `E_ij + E_ji` (i < j).
fn sym_basis(n: usize) -> Vec<DMatrix<f64>> {
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        let mut e = DMatrix::zeros(n, n);
        e[(i, i)] = 1.0;
        out.push(e);
    }
    for i in 0..n {
        for j in i + 1..n {
            let mut e = DMatrix::zeros(n, n);
            e[(i, j)] = 1.0;
            e[(j, i)] = 1.0;
            out.push(e);
        }
    }
    out
}

/// Coordinates of a symmetric matrix in the `sym_basis` ordering.
fn sym_coords(x: &DMatrix<f64>) -> Vec<f64> {
    let n = x.nrows();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        out.push(x[(i, i)]);
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(x[(i, j)]);
        }
    }
    out
}

fn from_sym_coords(n: usize, c: &[f64]) -> DMatrix<f64> {
    let mut x = DMatrix::zeros(n, n);
    for i in 0..n {
        x[(i, i)] = c[i];
    }
    let mut k = n;
    for i in 0..n {
        for j in i + 1..n {
            x[(i, j)] = c[k];
            x[(j, i)] = c[k];
            k += 1;
        }
    }
    x
}

/// Matrix of `Φ_P : X ↦ P·X·P'` on `Sym_n`.
fn phi_matrix(p: &DMatrix<f64>) -> DMatrix<f64> {
    let n = p.nrows();
    let basis = sym_basis(n);
    let dim = basis.len();
    let mut m = DMatrix::zeros(dim, dim);
    for (col, e) in basis.iter().enumerate() {
        let img = p * e * p.transpose();
        let coords = sym_coords(&img);
        for (row, v) in coords.iter().enumerate() {
            m[(row, col)] = *v;
        }
    }
    m
}

/// Reduced polynomial of `Φ_{AF^∨}`: the squarefree real minimal polynomial
/// with the `(x+1)` factor removed.  Eigenvalues are clustered at 1e−7.
fn reduced_poly(phi: &DMatrix<f64>) -> Vec<f64> {
    let eig = phi.complex_eigenvalues();
    let mut reps: Vec<nalgebra::Complex<f64>> = Vec::new();
    for e in eig.iter() {
        // keep one representative per conjugate pair, upper half plane
        let e = if e.im < 0.0 { e.conj() } else { *e };
        if !reps.iter().any(|r| (r - e).norm() < 1e-7) {
            reps.push(e);
        }
    }
    let mut f = vec![1.0];
    for r in reps {
        if r.im.abs() < 1e-7 {
            if (r.re + 1.0).abs() < 1e-7 {
                continue; // the (x+1) factor
            }
            f = poly_mul(&f, &[-r.re, 1.0]);
        } else {
            // conjugate pair on the unit circle: x² − 2·Re(r)·x + |r|²
            f = poly_mul(&f, &[r.norm_sqr(), -2.0 * r.re, 1.0]);
        }
    }
    f
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_eval_mat(p: &[f64], m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let mut acc = DMatrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = m * acc + DMatrix::identity(n, n) * *c;
    }
    acc
}

pub(crate) fn poly_eval_f64(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// ⟨X, Y⟩_A = Tr(A⁻¹·X·A⁻¹·Y), the tangent-space inner product at `A`.
pub(crate) fn inner_at(a_inv: &DMatrix<f64>, x: &DMatrix<f64>, y: &DMatrix<f64>) -> f64 {
    (a_inv * x * a_inv * y).trace()
}

/// Tangent frame at `A ∈ V_F`.
///
/// The basis is extracted from the columns of `f(Φ_{AF^∨})` and
/// orthonormalized in ⟨·,·⟩_A; its cardinality equals `dim V_F`.
pub fn tangent_frame(a: &Gram, f: &IntMat) -> Result<TangentFrame> {
    let residual = membership_residual(a, f).ok_or(Error::NotMember { residual: f64::INFINITY })?;
    if residual >= TOL {
        return Err(Error::NotMember { residual });
    }
    let n = a.n();
    let p = a.mat() * f.dual_inverse().expect("unimodular").to_f64();
    let phi = phi_matrix(&p);
    let fpoly = reduced_poly(&phi);
    let fphi = poly_eval_mat(&fpoly, &phi);
    let a_inv = a.mat().clone().try_inverse().ok_or(Error::NumericalInstability {
        reason: "singular Gram matrix".into(),
    })?;
    // Gram–Schmidt over the columns of f(Φ) in the ⟨·,·⟩_A metric
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    let scale = fphi.amax().max(1.0);
    for col in 0..fphi.ncols() {
        let coords: Vec<f64> = (0..fphi.nrows()).map(|r| fphi[(r, col)]).collect();
        let mut x = from_sym_coords(n, &coords);
        for b in &basis {
            let c = inner_at(&a_inv, b, &x);
            x -= b * c;
        }
        let norm = inner_at(&a_inv, &x, &x).sqrt();
        if norm > 1e-7 * scale {
            x /= norm;
            basis.push(x);
        }
    }
    // verify the defining relation A·F^∨·X + X·F^∨·A = 0
    let fd = f.dual_inverse().expect("unimodular").to_f64();
    for x in &basis {
        let res = (a.mat() * &fd * x + x * &fd * a.mat()).amax();
        debug_assert!(res < 1e-6, "tangent residual {res}");
    }
    Ok(TangentFrame { at: a.clone(), basis, f: fpoly })
}

/// Gradient of the length function `l_u(A) = A[u]` restricted to `V_F`:
/// `∇ = f(Φ_{AF^∨})(A·uu'·A) / f(−1)`.
pub fn length_gradient(a: &Gram, f: &IntMat, u: &[i64]) -> Result<DMatrix<f64>> {
    let residual = membership_residual(a, f).ok_or(Error::NotMember { residual: f64::INFINITY })?;
    if residual >= TOL {
        return Err(Error::NotMember { residual });
    }
    assert!(u.iter().any(|&c| c != 0), "u must be nonzero");
    let n = a.n();
    let p = a.mat() * f.dual_inverse().expect("unimodular").to_f64();
    let phi = phi_matrix(&p);
    let fpoly = reduced_poly(&phi);
    let f_minus1 = poly_eval_f64(&fpoly, -1.0);
    let uvec = DMatrix::from_fn(n, 1, |i, _| u[i] as f64);
    let auu_a = a.mat() * &uvec * uvec.transpose() * a.mat();
    let fphi = poly_eval_mat(&fpoly, &phi);
    let coords = sym_coords(&auu_a);
    let img = &fphi * DMatrix::from_column_slice(coords.len(), 1, &coords);
    let img_coords: Vec<f64> = (0..img.nrows()).map(|r| img[(r, 0)]).collect();
    Ok(from_sym_coords(n, &img_coords) / f_minus1)
}

/// True iff `T` fixes the basepoint and every tangent-frame element:
/// `T·A·T' = A` and `T·X·T' = X` within tolerance.
pub fn fixes_pointwise(t: &IntMat, gt: &GeoType) -> Result<bool> {
    if !t.is_unimodular() {
        return Err(Error::NotUnimodular { det: t.det().to_string() });
    }
    let tf = t.to_f64();
    let a = gt.basepoint.mat();
    if (&tf * a * tf.transpose() - a).amax() >= TOL {
        return Ok(false);
    }
    let frame = tangent_frame(&gt.basepoint, gt.alg.f())?;
    for x in &frame.basis {
        if (&tf * x * tf.transpose() - x).amax() >= TOL {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Inclusion criterion: `V_F ⊆ V_G` iff `F·G^∨` fixes `V_F` pointwise.
pub fn includes(gt: &GeoType, g: &IntMat) -> Result<bool> {
    if gt.alg.n() != g.n() {
        return Err(Error::RankMismatch { left: gt.alg.n(), right: g.n() });
    }
    let t = gt.alg.f() * &g.dual_inverse()?;
    fixes_pointwise(&t, gt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{siegel1, GeoType};
    use crate::types::make_type;
    use nalgebra::Complex;

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
                (-1).into()
            }
        })
    }

    #[test]
    fn tangent_dim_ipq() {
        // (I_n, I_{p,q}): dimension pq
        let a = Gram::from_mat(DMatrix::identity(3, 3));
        let frame = tangent_frame(&a, &ipq(2, 1)).unwrap();
        assert_eq!(frame.basis.len(), 2);
        // (I_2, J_2): 2-dimensional
        let a2 = Gram::from_mat(DMatrix::identity(2, 2));
        let frame2 = tangent_frame(&a2, &m(&[&[0, 1], &[-1, 0]])).unwrap();
        assert_eq!(frame2.basis.len(), 2);
    }

    #[test]
    fn tangent_dim_zero_at_definite() {
        let a = Gram::from_mat(DMatrix::identity(3, 3));
        let frame = tangent_frame(&a, &ipq(3, 0)).unwrap();
        assert_eq!(frame.basis.len(), 0);
    }

    #[test]
    fn gradient_zero_on_point_variety() {
        // V_{I_n} = {I_n}: all gradients vanish
        let a = Gram::from_mat(DMatrix::identity(2, 2));
        let g = length_gradient(&a, &IntMat::identity(2), &[1, 0]).unwrap();
        assert!(g.amax() < 1e-9);
    }

    #[test]
    fn gradient_lies_in_tangent_space() {
        let f = m(&[&[0, 1], &[-1, 0]]);
        let a = siegel1(Complex::new(0.3, 1.4)).unwrap();
        let frame = tangent_frame(&a, &f).unwrap();
        let g = length_gradient(&a, &f, &[1, -2]).unwrap();
        // residual of g after projecting onto the frame
        let a_inv = a.mat().clone().try_inverse().unwrap();
        let mut res = g.clone();
        for x in &frame.basis {
            let c = inner_at(&a_inv, x, &g);
            res -= x * c;
        }
        assert!(res.amax() < 1e-8, "gradient not tangent: {}", res.amax());
        assert!(g.amax() > 1e-3, "gradient unexpectedly zero");
    }

    #[test]
    fn fixes_pointwise_examples() {
        let f = m(&[&[0, 1], &[-1, 0]]);
        let gt = GeoType::new(make_type(&f, None).unwrap()).unwrap();
        // −I always fixes
        assert!(fixes_pointwise(&-IntMat::identity(2), &gt).unwrap());
        // FF^∨ always fixes
        assert!(fixes_pointwise(gt.alg.r(), &gt).unwrap());
        // diag(1,−1) moves the Siegel frame
        assert!(!fixes_pointwise(&ipq(1, 1), &gt).unwrap());
    }

    #[test]
    fn includes_self() {
        let f = m(&[&[0, 1], &[-1, 0]]);
        let gt = GeoType::new(make_type(&f, None).unwrap()).unwrap();
        assert!(includes(&gt, &f).unwrap());
        let err = includes(&gt, &IntMat::identity(3));
        assert!(err.is_err());
    }
}
