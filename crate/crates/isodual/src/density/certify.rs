//! Relative perfection and eutaxy at a point of `V_F`, certifying strict
//! local maxima of the Hermite invariant.

use nalgebra::DMatrix;

use crate::density::{shortest_vectors, simplex::solve_lp};
use crate::error::{Error, Result};
use crate::geometry::{length_gradient, membership_residual, tangent_frame, Gram, GeoType, TOL};

/// Margin for the strict positivity of eutaxy coefficients.
pub const EUTAXY_MARGIN: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct Certificate {
    pub point: Gram,
    pub min: f64,
    pub pairs: usize,
    pub perfect_rel: bool,
    pub eutactic_rel: bool,
    pub dim: usize,
    pub gradient_rank: usize,
}

impl Certificate {
    /// Both properties together certify a strict local maximum of μ on `V_F`.
    pub fn certified(&self) -> bool {
        self.perfect_rel && self.eutactic_rel
    }
}

/// Compute the minimal-vector length gradients at `A` and test whether they
/// span the tangent space (perfection) and admit a strictly positive
/// vanishing combination (eutaxy; `V_F` points have det 1 identically and
/// tangent frames are trace-orthogonal to the determinant direction, so the
/// combination must vanish outright).
pub fn certify_local_max(gt: &GeoType, a: &Gram) -> Result<Certificate> {
    let residual =
        membership_residual(a, gt.alg.f()).ok_or(Error::NotMember { residual: f64::INFINITY })?;
    if residual >= TOL {
        return Err(Error::NotMember { residual });
    }
    let sv = shortest_vectors(a)?;
    let frame = tangent_frame(a, gt.alg.f())?;
    let dim = frame.basis.len();
    if dim == 0 {
        // empty tangent space: vacuously perfect and eutactic
        return Ok(Certificate {
            point: a.clone(),
            min: sv.min,
            pairs: sv.count_pairs,
            perfect_rel: true,
            eutactic_rel: true,
            dim: 0,
            gradient_rank: 0,
        });
    }
    let a_inv = a.mat().clone().try_inverse().ok_or(Error::NumericalInstability {
        reason: "singular Gram matrix".into(),
    })?;
    // gradient coordinates in the orthonormal tangent frame
    let s = sv.vectors.len();
    let mut coords = DMatrix::zeros(dim, s);
    for (col, u) in sv.vectors.iter().enumerate() {
        let g = length_gradient(a, gt.alg.f(), u)?;
        for (row, x) in frame.basis.iter().enumerate() {
            coords[(row, col)] = (&a_inv * x * &a_inv * &g).trace();
        }
    }
    let scale = coords.amax().max(1e-30);
    let svd = coords.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let gradient_rank = svd
        .singular_values
        .iter()
        .filter(|&&v| v > 1e-7 * smax.max(1e-30))
        .count();
    let perfect_rel = gradient_rank == dim;

    // eutaxy LP: max t s.t. |Σ λ_u c_u| ≤ η componentwise, Σλ = 1, λ_u ≥ t
    let eta = 1e-9 * scale;
    let nvars = s + 1; // λ_1..λ_s, t
    let mut a_ub: Vec<Vec<f64>> = Vec::new();
    let mut b_ub: Vec<f64> = Vec::new();
    for i in 0..dim {
        let mut row_pos = vec![0.0; nvars];
        let mut row_neg = vec![0.0; nvars];
        for u in 0..s {
            row_pos[u] = coords[(i, u)];
            row_neg[u] = -coords[(i, u)];
        }
        a_ub.push(row_pos);
        b_ub.push(eta);
        a_ub.push(row_neg);
        b_ub.push(eta);
    }
    for u in 0..s {
        let mut row = vec![0.0; nvars];
        row[u] = -1.0;
        row[s] = 1.0; // t − λ_u ≤ 0
        a_ub.push(row);
        b_ub.push(0.0);
    }
    let mut eq = vec![0.0; nvars];
    for slot in eq.iter_mut().take(s) {
        *slot = 1.0;
    }
    let mut c = vec![0.0; nvars];
    c[s] = 1.0;
    let eutactic_rel = match solve_lp(&c, &a_ub, &b_ub, &[eq], &[1.0]) {
        Some((_, t_opt)) => t_opt > EUTAXY_MARGIN,
        None => false,
    };

    Ok(Certificate {
        point: a.clone(),
        min: sv.min,
        pairs: sv.count_pairs,
        perfect_rel,
        eutactic_rel,
        dim,
        gradient_rank,
    })
}

/// Polish a parametrized point so the listed vector lengths all equal the
/// first one (Gauss–Newton on the differences, finite-difference Jacobian).
///
/// At a relatively perfect point the active length-equalities pin the
/// coordinates, so convergence is quadratic to machine precision.
pub fn equalize_minima(
    family: &dyn Fn(&[f64]) -> Result<Gram>,
    x0: &[f64],
    active: &[Vec<i64>],
) -> Result<Vec<f64>> {
    let mut x = x0.to_vec();
    let k = active.len();
    if k < 2 {
        return Ok(x);
    }
    let res = |x: &[f64]| -> Result<Vec<f64>> {
        let a = family(x)?;
        let l0 = a.quad(&active[0]);
        Ok(active[1..].iter().map(|u| a.quad(u) - l0).collect())
    };
    let h = 1e-6;
    for _ in 0..80 {
        let r0 = res(&x)?;
        let norm = r0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if norm < 1e-13 {
            return Ok(x);
        }
        let mut jac = DMatrix::zeros(k - 1, x.len());
        for j in 0..x.len() {
            let mut xp = x.clone();
            xp[j] += h;
            let rp = res(&xp)?;
            let mut xm = x.clone();
            xm[j] -= h;
            let rm = res(&xm)?;
            for i in 0..k - 1 {
                jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rhs = DMatrix::from_fn(k - 1, 1, |i, _| -r0[i]);
        let svd = jac.svd(true, true);
        let step = svd
            .solve(&rhs, 1e-10)
            .map_err(|e| Error::NumericalInstability { reason: e.to_string() })?;
        let mut damping = 1.0;
        loop {
            let xn: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a + damping * s).collect();
            match res(&xn) {
                Ok(rn) => {
                    let nn = rn.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                    if nn < norm || damping < 1e-4 {
                        x = xn;
                        break;
                    }
                }
                Err(_) => {}
            }
            damping *= 0.5;
            if damping < 1e-8 {
                return Err(Error::NumericalInstability {
                    reason: "equalization line search stalled".into(),
                });
            }
        }
    }
    let final_norm = res(&x)?.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if final_norm < 1e-11 {
        Ok(x)
    } else {
        Err(Error::NumericalInstability {
            reason: format!("equalization stopped at residual {final_norm:e}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::make_type;
    use crate::IntMat;

    #[test]
    fn identity_point_variety_vacuous() {
        // V_{I_n} = {I_n}: dimension 0, vacuously certified
        let t = make_type(&IntMat::identity(3), None).unwrap();
        let gt = GeoType::new(t).unwrap();
        let cert = certify_local_max(&gt, &gt.basepoint).unwrap();
        assert!(cert.certified());
        assert_eq!(cert.dim, 0);
    }

    #[test]
    fn ipq_identity_not_perfect() {
        // (I_{2,1}, I_3): 3 pairs cannot span the 2-dimensional tangent space
        let f = IntMat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let t = make_type(&f, None).unwrap();
        let gt = GeoType::new(t).unwrap();
        let cert = certify_local_max(&gt, &gt.basepoint).unwrap();
        assert_eq!(cert.dim, 2);
        assert!(!cert.perfect_rel, "rank = {}", cert.gradient_rank);
    }
}
