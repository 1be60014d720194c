//! The Gram-matrix varieties `V_F = {A ∈ P_n : A·F^∨·A = F}`: membership,
//! the explicit Siegel / Klein / Hermitian-ball / `V_{2,2}^{II}`
//! parametrizations, block parametrization through a real splitting, tangent
//! frames, length gradients, and the pointwise-stabilizer machinery behind
//! the inclusion criterion.

mod auto;
mod tangent;

pub use auto::{automorphism_count, automorphism_group, AutomorphismSearch};
pub use tangent::{fixes_pointwise, includes, length_gradient, tangent_frame, TangentFrame};

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::realtypes::{self, BlockPlan, RealSplit};
use crate::types::AlgType;
use crate::IntMat;

pub const TOL: f64 = 1e-9;

/// Real symmetric positive-definite Gram matrix of determinant 1, optionally
/// carrying exact small-radical expressions per entry.
#[derive(Clone, Debug)]
pub struct Gram {
    mat: DMatrix<f64>,
    exprs: Option<Vec<Expr>>,
}

impl Gram {
    pub fn from_mat(mat: DMatrix<f64>) -> Self {
        assert_eq!(mat.nrows(), mat.ncols());
        Gram { mat, exprs: None }
    }

    /// Build from radical-expression strings (row-major n×n).
    pub fn from_expr_rows(rows: &[Vec<String>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parse("expression matrix must be square".into()));
        }
        let mut exprs = Vec::with_capacity(n * n);
        for row in rows {
            for s in row {
                exprs.push(Expr::parse(s)?);
            }
        }
        let mat = DMatrix::from_fn(n, n, |i, j| exprs[i * n + j].eval());
        Ok(Gram { mat, exprs: Some(exprs) })
    }

    pub fn n(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &DMatrix<f64> {
        &self.mat
    }

    pub fn expr(&self, i: usize, j: usize) -> Option<&Expr> {
        self.exprs.as_ref().map(|e| &e[i * self.n() + j])
    }

    pub fn det(&self) -> f64 {
        self.mat.determinant()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.mat.clone().cholesky().is_some()
    }

    /// `A[u] = u'·A·u`.
    pub fn quad(&self, u: &[i64]) -> f64 {
        let n = self.n();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += u[i] as f64 * self.mat[(i, j)] * u[j] as f64;
            }
        }
        acc
    }

    /// Serialize with the dual entry representation `{"expr", "val"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n();
        let rows: Vec<Vec<serde_json::Value>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        serde_json::json!({
                            "expr": self.expr(i, j).map(|e| e.to_string()),
                            "val": self.mat[(i, j)],
                        })
                    })
                    .collect()
            })
            .collect();
        serde_json::json!({"n": n, "entries": rows})
    }
}

/// Membership test `A·F^∨·A = F` (max-entry residual) plus `det A = 1`.
pub fn membership(a: &Gram, f: &IntMat) -> bool {
    membership_residual(a, f).map(|r| r < TOL).unwrap_or(false)
}

/// The max-entry residual of `A·F^∨·A − F`, or `None` on shape mismatch /
/// non-unimodular `F` / non-unit determinant.
pub fn membership_residual(a: &Gram, f: &IntMat) -> Option<f64> {
    if a.n() != f.n() {
        return None;
    }
    let fdual = f.dual_inverse().ok()?.to_f64();
    if (a.det() - 1.0).abs() >= TOL {
        return None;
    }
    let lhs = a.mat() * fdual * a.mat();
    Some((lhs - f.to_f64()).amax())
}

/// Siegel embedding (the symplectic component model):
/// `σ_g(X + iY) = [[Y + XY⁻¹X, XY⁻¹], [Y⁻¹X, Y⁻¹]] ∈ V_{J_{2g}}`.
pub fn siegel_embed(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<Gram> {
    let g = x.nrows();
    if x.ncols() != g || y.nrows() != g || y.ncols() != g {
        return Err(Error::NotInSiegelSpace { reason: "X, Y must be square g×g".into() });
    }
    if (x - x.transpose()).amax() > TOL || (y - y.transpose()).amax() > TOL {
        return Err(Error::NotInSiegelSpace { reason: "X, Y must be symmetric".into() });
    }
    let chol = y.clone().cholesky().ok_or(Error::NotInSiegelSpace {
        reason: "Y must be positive definite".into(),
    })?;
    let y_inv = chol.inverse();
    let mut a = DMatrix::zeros(2 * g, 2 * g);
    a.view_mut((0, 0), (g, g)).copy_from(&(y + x * &y_inv * x));
    a.view_mut((0, g), (g, g)).copy_from(&(x * &y_inv));
    a.view_mut((g, 0), (g, g)).copy_from(&(&y_inv * x));
    a.view_mut((g, g), (g, g)).copy_from(&y_inv);
    Ok(Gram::from_mat(a))
}

/// `σ_1` on a complex coordinate.
pub fn siegel1(z: Complex<f64>) -> Result<Gram> {
    siegel_embed(
        &DMatrix::from_element(1, 1, z.re),
        &DMatrix::from_element(1, 1, z.im),
    )
}

/// Klein embedding (the orthogonal component model) on `{X : X'X − I < 0}`,
/// image `V_{p,q}`.
pub fn klein_embed(p: usize, q: usize, x: &DMatrix<f64>) -> Result<Gram> {
    if x.nrows() != p || x.ncols() != q {
        return Err(Error::OutsideBall { reason: format!("X must be {p}×{q}") });
    }
    let xtx = x.transpose() * x;
    let iq = DMatrix::identity(q, q);
    let ip = DMatrix::identity(p, p);
    if q > 0 {
        let max_eig = xtx.clone().symmetric_eigenvalues().amax();
        if max_eig >= 1.0 - 1e-12 {
            return Err(Error::OutsideBall { reason: "X'X − I not negative definite".into() });
        }
    }
    let xxt = x * x.transpose();
    let inv_p = (&ip - &xxt).try_inverse().ok_or(Error::OutsideBall {
        reason: "I − XX' singular".into(),
    })?;
    let inv_q = (&iq - &xtx).try_inverse().ok_or(Error::OutsideBall {
        reason: "I − X'X singular".into(),
    })?;
    let n = p + q;
    let mut a = DMatrix::zeros(n, n);
    a.view_mut((0, 0), (p, p)).copy_from(&((&ip + &xxt) * &inv_p));
    a.view_mut((0, p), (p, q)).copy_from(&(2.0 * x * &inv_q));
    a.view_mut((p, 0), (q, p)).copy_from(&(2.0 * &inv_q * x.transpose()));
    a.view_mut((p, p), (q, q)).copy_from(&((&iq + &xtx) * &inv_q));
    Ok(Gram::from_mat(a))
}

/// Realification `κ`: complex `m×m` to real `2m×2m` with 2×2 blocks
/// `[[Re, −Im], [Im, Re]]`.
pub fn kappa(z: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let m = z.nrows();
    DMatrix::from_fn(2 * m, 2 * m, |i, j| {
        let e = z[(i / 2, j / 2)];
        match (i % 2, j % 2) {
            (0, 0) | (1, 1) => e.re,
            (0, 1) => -e.im,
            (1, 0) => e.im,
            _ => unreachable!(),
        }
    })
}

/// Hermitian-ball embedding (the unitary component model): `κ` applied to
/// the hermitian block matrix on `{Z : Z*Z − I < 0}`, image `W_{p,q}`.
pub fn hermitian_embed(p: usize, q: usize, z: &DMatrix<Complex<f64>>) -> Result<Gram> {
    if z.nrows() != p || z.ncols() != q {
        return Err(Error::OutsideBall { reason: format!("Z must be {p}×{q}") });
    }
    let zs = z.adjoint();
    let zsz = &zs * z;
    let zzs = z * &zs;
    let iq = DMatrix::<Complex<f64>>::identity(q, q);
    let ip = DMatrix::<Complex<f64>>::identity(p, p);
    if q > 0 {
        let max_eig = zsz.clone().symmetric_eigenvalues().amax();
        if max_eig >= 1.0 - 1e-12 {
            return Err(Error::OutsideBall { reason: "Z*Z − I not negative definite".into() });
        }
    }
    let inv_p = (&ip - &zzs).try_inverse().ok_or(Error::OutsideBall {
        reason: "I − ZZ* singular".into(),
    })?;
    let inv_q = (&iq - &zsz).try_inverse().ok_or(Error::OutsideBall {
        reason: "I − Z*Z singular".into(),
    })?;
    let m = p + q;
    let mut h = DMatrix::<Complex<f64>>::zeros(m, m);
    h.view_mut((0, 0), (p, p)).copy_from(&((&ip + &zzs) * &inv_p));
    h.view_mut((0, p), (p, q)).copy_from(&(z * &inv_q * Complex::new(2.0, 0.0)));
    h.view_mut((p, 0), (q, p)).copy_from(&(&inv_q * &zs * Complex::new(2.0, 0.0)));
    h.view_mut((p, p), (q, q)).copy_from(&((&iq + &zsz) * &inv_q));
    Ok(Gram::from_mat(kappa(&h)))
}

/// The rank-4 even symmetric model `V_{2,2}^{II}` on two half-plane
/// coordinates.
pub fn v22ii_embed(z: Complex<f64>, w: Complex<f64>) -> Result<Gram> {
    if z.im <= 0.0 || w.im <= 0.0 {
        return Err(Error::NotInHalfPlane { reason: format!("Im z = {}, Im w = {}", z.im, w.im) });
    }
    let (zz, ww) = (z.norm_sqr(), w.norm_sqr());
    let (rz, rw) = (z.re, w.re);
    let pref = 1.0 / (z.im * w.im);
    let rows = [
        [zz, -zz * rw, -rz * rw, -rz],
        [-zz * rw, zz * ww, rz * ww, rz * rw],
        [-rz * rw, rz * ww, ww, rw],
        [-rz, rz * rw, rw, 1.0],
    ];
    let mut a = DMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            a[(i, j)] = pref * rows[i][j];
        }
    }
    Ok(Gram::from_mat(a))
}

/// Per-block coordinates for `param_point`.
#[derive(Clone, Debug)]
pub enum BlockCoord {
    /// canonical basepoint of the block
    Base,
    /// Klein coordinate `X` (p×q real), for `Sym` blocks with `p·q > 0`
    Sym(DMatrix<f64>),
    /// Siegel coordinate `X + iY`, for `Alt` blocks
    Alt { x: DMatrix<f64>, y: DMatrix<f64> },
    /// ball coordinate `Z` (p×q complex), for `Herm` blocks with `p·q > 0`
    Herm(DMatrix<Complex<f64>>),
}

/// A geometric type: the algebraic type, a real splitting, and a verified
/// basepoint of `V_F`.
#[derive(Clone, Debug)]
pub struct GeoType {
    pub alg: AlgType,
    pub split: RealSplit,
    pub basepoint: Gram,
}

impl GeoType {
    /// Build with the canonical basepoint `P·P'` of the splitting.
    pub fn new(alg: AlgType) -> Result<Self> {
        let split = realtypes::real_split(&alg)?;
        Self::with_split(alg, split)
    }

    pub fn with_split(alg: AlgType, split: RealSplit) -> Result<Self> {
        let basepoint = Gram::from_mat(&split.p * split.p.transpose());
        let gt = GeoType { alg, split, basepoint };
        let residual = membership_residual(&gt.basepoint, gt.alg.f())
            .ok_or(Error::NotMember { residual: f64::INFINITY })?;
        if residual >= TOL {
            return Err(Error::NotMember { residual });
        }
        Ok(gt)
    }

    /// Replace the basepoint by another verified member of `V_F`.
    pub fn with_basepoint(mut self, basepoint: Gram) -> Result<Self> {
        let residual = membership_residual(&basepoint, self.alg.f())
            .ok_or(Error::NotMember { residual: f64::INFINITY })?;
        if residual >= TOL {
            return Err(Error::NotMember { residual });
        }
        self.basepoint = basepoint;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        realtypes::dimension(&realtypes::signature(&self.alg))
    }
}

/// `P·(⊕ block embeddings)·P'`; always a member of `V_F`.
pub fn param_point(gt: &GeoType, coords: &[BlockCoord]) -> Result<Gram> {
    if coords.len() != gt.split.blocks.len() {
        return Err(Error::Parse(format!(
            "expected {} block coordinates, got {}",
            gt.split.blocks.len(),
            coords.len()
        )));
    }
    let n = gt.alg.n();
    let mut a0 = DMatrix::zeros(n, n);
    let mut off = 0;
    for (plan, coord) in gt.split.blocks.iter().zip(coords) {
        let block = block_point(plan, coord)?;
        let s = block.nrows();
        a0.view_mut((off, off), (s, s)).copy_from(&block);
        off += s;
    }
    let a = &gt.split.p * a0 * gt.split.p.transpose();
    let gram = Gram::from_mat(a);
    debug_assert!(membership(&gram, gt.alg.f()));
    Ok(gram)
}

fn block_point(plan: &BlockPlan, coord: &BlockCoord) -> Result<DMatrix<f64>> {
    match (plan, coord) {
        (p, BlockCoord::Base) => Ok(DMatrix::identity(p.size(), p.size())),
        (BlockPlan::Sym { p, q }, BlockCoord::Sym(x)) => Ok(klein_embed(*p, *q, x)?.mat().clone()),
        (BlockPlan::Alt { g }, BlockCoord::Alt { x, y }) => {
            if x.nrows() != *g {
                return Err(Error::NotInSiegelSpace { reason: format!("expected g = {g}") });
            }
            Ok(siegel_embed(x, y)?.mat().clone())
        }
        (BlockPlan::Herm { p, q, .. }, BlockCoord::Herm(z)) => {
            Ok(hermitian_embed(*p, *q, z)?.mat().clone())
        }
        _ => Err(Error::Parse("block coordinate kind mismatch".into())),
    }
}

/// The symmetry `s_A(B) = A·B⁻¹·A` of `P_n` (maps `V_F` into itself).
pub fn point_symmetry(a: &Gram, b: &Gram) -> Result<Gram> {
    let b_inv = b.mat().clone().try_inverse().ok_or(Error::NumericalInstability {
        reason: "singular Gram matrix".into(),
    })?;
    Ok(Gram::from_mat(a.mat() * b_inv * a.mat()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j(n: usize) -> IntMat {
        let j2 = IntMat::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        j2.tensor(&IntMat::identity(n / 2))
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
    fn siegel_at_i_is_identity() {
        let a = siegel1(Complex::new(0.0, 1.0)).unwrap();
        assert!((a.mat() - DMatrix::identity(2, 2)).amax() < 1e-15);
        assert!(membership(&a, &j(2)));
    }

    #[test]
    fn siegel1_closed_form() {
        // σ_1(x+iy) = [[(x²+y²)/y, x/y], [x/y, 1/y]]
        let (x, y) = (0.7, 1.3);
        let a = siegel1(Complex::new(x, y)).unwrap();
        assert!((a.mat()[(0, 0)] - (x * x + y * y) / y).abs() < 1e-12);
        assert!((a.mat()[(0, 1)] - x / y).abs() < 1e-12);
        assert!((a.mat()[(1, 1)] - 1.0 / y).abs() < 1e-12);
        assert!(membership(&a, &j(2)));
    }

    #[test]
    fn siegel_rejects_bad_y() {
        assert!(siegel1(Complex::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn klein_at_zero_is_identity() {
        let a = klein_embed(2, 1, &DMatrix::zeros(2, 1)).unwrap();
        assert!((a.mat() - DMatrix::identity(3, 3)).amax() < 1e-15);
        assert!(membership(&a, &ipq(2, 1)));
    }

    #[test]
    fn klein_membership_and_ball_check() {
        let x = DMatrix::from_row_slice(2, 2, &[0.3, -0.1, 0.2, 0.4]);
        let a = klein_embed(2, 2, &x).unwrap();
        assert!(membership(&a, &ipq(2, 2)));
        let too_big = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        assert!(klein_embed(2, 2, &too_big).is_err());
    }

    #[test]
    fn hermitian_at_zero_is_identity() {
        let a = hermitian_embed(1, 1, &DMatrix::from_element(1, 1, Complex::new(0.0, 0.0))).unwrap();
        assert!((a.mat() - DMatrix::identity(4, 4)).amax() < 1e-15);
    }

    #[test]
    fn hermitian_complex_block_identity() {
        // the complex block H of a W_{1,1} member satisfies H·I_{1,1}·H = I_{1,1}
        let z = DMatrix::from_element(1, 1, Complex::new(0.2, -0.3));
        let a = hermitian_embed(1, 1, &z).unwrap();
        let h = DMatrix::from_fn(2, 2, |i, jj| {
            Complex::new(a.mat()[(2 * i, 2 * jj)], a.mat()[(2 * i + 1, 2 * jj)])
        });
        let j = DMatrix::from_fn(2, 2, |i, jj| {
            if i != jj {
                Complex::new(0.0, 0.0)
            } else if i == 0 {
                Complex::new(1.0, 0.0)
            } else {
                Complex::new(-1.0, 0.0)
            }
        });
        let res = (&h * &j * &h - &j).camax();
        assert!(res < 1e-12, "residual {res}");
    }

    #[test]
    fn v22ii_at_i_i() {
        let i = Complex::new(0.0, 1.0);
        let a = v22ii_embed(i, i).unwrap();
        assert!((a.mat() - DMatrix::identity(4, 4)).amax() < 1e-15);
        let u4 = IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]).tensor(&IntMat::identity(2));
        assert!(membership(&a, &u4));
    }

    #[test]
    fn v22ii_membership_generic() {
        let u4 = IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]).tensor(&IntMat::identity(2));
        let a = v22ii_embed(Complex::new(0.3, 1.7), Complex::new(-0.4, 0.6)).unwrap();
        assert!(membership(&a, &u4));
        // bottom-right entry = 1/(Im z · Im w)
        assert!((a.mat()[(3, 3)] - 1.0 / (1.7 * 0.6)).abs() < 1e-12);
        assert!(v22ii_embed(Complex::new(0.0, -1.0), Complex::new(0.0, 1.0)).is_err());
    }

    #[test]
    fn identity_members() {
        let a = Gram::from_mat(DMatrix::identity(3, 3));
        assert!(membership(&a, &ipq(2, 1)));
        assert!(membership(&a, &ipq(3, 0)));
        // I_3 is the basepoint of V_{J_2 ⊕ I_1} as well
        assert!(membership(&a, &j(2).direct_sum(&IntMat::identity(1))));
        // a determinant-1 diagonal off the variety
        let off = Gram::from_mat(DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 0.5]));
        assert!(!membership(&off, &IntMat::identity(2)));
    }

    #[test]
    fn membership_sign_and_transpose_invariance() {
        // V_{F'} = V_{−F} = V_F on sampled points
        let x = DMatrix::from_row_slice(2, 1, &[0.3, -0.2]);
        let a = klein_embed(2, 1, &x).unwrap();
        let f = ipq(2, 1);
        assert!(membership(&a, &f));
        assert!(membership(&a, &f.transpose()));
        assert!(membership(&a, &-&f));
    }

    #[test]
    fn param_point_base_equals_basepoint() {
        let g3 = IntMat::from_i64_rows(&[&[0, -1, 0], &[0, -1, -1], &[1, 1, -1]]);
        let t = crate::types::make_type(&g3, None).unwrap();
        let gt = GeoType::new(t).unwrap();
        let coords: Vec<BlockCoord> = gt.split.blocks.iter().map(|_| BlockCoord::Base).collect();
        let a = param_point(&gt, &coords).unwrap();
        assert!((a.mat() - gt.basepoint.mat()).amax() < 1e-12);
    }

    #[test]
    fn symmetry_preserves_membership() {
        let f = j(2);
        let a = siegel1(Complex::new(0.4, 2.0)).unwrap();
        let b = siegel1(Complex::new(-0.3, 0.8)).unwrap();
        let s = point_symmetry(&a, &b).unwrap();
        assert!(membership(&s, &f));
    }
}
