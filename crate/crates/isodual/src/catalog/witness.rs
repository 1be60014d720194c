//! Gram-form constructors that cannot be written as radical-expression
//! literals: the ψ-quartic point, the hermitian-ball witness, and frozen
//! parametrization coordinates for derived local maximizers.

use nalgebra::{Complex, DMatrix};

use crate::catalog::Catalog;
use crate::density::constants::psi_root;
use crate::error::{Error, Result};
use crate::geometry::{hermitian_embed, param_point, BlockCoord, Gram};
use crate::realtypes::BlockPlan;

/// Dispatch a named constructor.
pub fn construct_gram(name: &str) -> Result<Gram> {
    match name {
        "A_0" => Ok(a0_point()),
        "H_z0w0" => h_witness(),
        "K4G3_max" => k4g3_witness(),
        "D4_siegel" => d4_siegel(),
        "Lambda_4_even" => lambda4_even(),
        "F4_max" => f4_max(),
        "F6_max" => f6_max(),
        other => Err(Error::NotFound(format!("gram constructor {other:?}"))),
    }
}

/// `σ_2(X/2 + i·I_2/√2)` with `X = [[1,−1],[1,1]]`: a copy of the rescaled
/// D4 form inside the rank-4 symplectic variety.
fn d4_siegel() -> Result<Gram> {
    let x = DMatrix::from_row_slice(2, 2, &[0.5, 0.5, 0.5, -0.5]);
    let y = DMatrix::from_row_slice(2, 2, &[1.0 / 2f64.sqrt(), 0.0, 0.0, 1.0 / 2f64.sqrt()]);
    crate::geometry::siegel_embed(&x, &y)
}

/// `V_{2,2}^{II}` corner point `z = w = (1 + i√3)/2`, a copy of the rank-4
/// lorentzian maximizer in the even variety.
fn lambda4_even() -> Result<Gram> {
    let z = Complex::new(0.5, 3f64.sqrt() / 2.0);
    crate::geometry::v22ii_embed(z, z)
}

/// The D4-equivalent corner of the F_4 variety:
/// `σ_2(U_2(iu − z)/2 + I_2(iu + z)/2)` at `z = 1 + i/√2`, `u = 1/√2`.
fn f4_max() -> Result<Gram> {
    let s = 1.0 / 2f64.sqrt();
    let z = Complex::new(1.0, s);
    let iu = Complex::new(0.0, s);
    let a = (iu - z) / 2.0; // off-diagonal coefficient (U_2 part)
    let b = (iu + z) / 2.0; // diagonal coefficient
    let x = DMatrix::from_row_slice(2, 2, &[b.re, a.re, a.re, b.re]);
    let y = DMatrix::from_row_slice(2, 2, &[b.im, a.im, a.im, b.im]);
    crate::geometry::siegel_embed(&x, &y)
}

/// Maximizer of the F_6 variety: `θ_4(M_{z₀})·A_i·θ_4(M_{z₀})'` at
/// `z₀ = (1 + i√3)/2`, equivalent to the genus-3 period form.
fn f6_max() -> Result<Gram> {
    let z = Complex::new(0.5, 3f64.sqrt() / 2.0);
    let (t, s) = (z.im, z.re);
    let rt = t.sqrt();
    // M_z = (1/√Im z)·[[Im z, Re z],[0, 1]]
    let (ma, mb, mc, md) = (t / rt, s / rt, 0.0, 1.0 / rt);
    let mut theta = DMatrix::identity(6, 6);
    let block = [
        [1.0 + ma, 1.0 - ma, mb, -mb],
        [1.0 - ma, 1.0 + ma, -mb, mb],
        [mc, -mc, 1.0 + md, 1.0 - md],
        [-mc, mc, 1.0 - md, 1.0 + md],
    ];
    for i in 0..4 {
        for j in 0..4 {
            theta[(2 + i, 2 + j)] = block[i][j] / 2.0;
        }
    }
    let ai = DMatrix::from_row_slice(
        6,
        6,
        &[
            2.0, 1.0, 0.0, 0.0, 0.0, 0.0, //
            1.0, 2.0, 0.0, 0.0, 1.0, 1.0, //
            0.0, 0.0, 1.5, 0.5, 0.5, 0.5, //
            0.0, 0.0, 0.5, 1.5, 0.5, 0.5, //
            0.0, 1.0, 0.5, 0.5, 1.5, 0.5, //
            0.0, 1.0, 0.5, 0.5, 0.5, 1.5,
        ],
    );
    Ok(Gram::from_mat(&theta * ai * theta.transpose()))
}

/// The splitting matrix of the `K_4 ⊕ G_3` variety (72).
fn p4_split() -> DMatrix<f64> {
    let r2 = 2f64.sqrt();
    let r4 = 2f64.powf(0.25);
    let r54 = 2f64.powf(1.25);
    DMatrix::from_row_slice(
        7,
        7,
        &[
            0.0, 0.0, 0.0, r2, 0.0, -r2, 0.0, //
            0.0, 0.0, 0.0, 0.0, -r2, 0.0, r2, //
            0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 2.0, //
            0.0, 0.0, 0.0, 0.0, 2.0, 2.0, 0.0, //
            r2, -r4, r4, 0.0, 0.0, 0.0, 0.0, //
            0.0, 0.0, r54, 0.0, 0.0, 0.0, 0.0, //
            0.0, r54, 0.0, 0.0, 0.0, 0.0, 0.0,
        ],
    ) / 2.0
}

/// The 10-pair maximizer carried into the `K_4 ⊕ G_3` variety:
/// `P₄·(I_1 ⊕ κ(H_{z₀,w₀}))·P₄'`.
fn k4g3_witness() -> Result<Gram> {
    let h = h_witness()?;
    let p4 = p4_split();
    let mut block = DMatrix::identity(7, 7);
    block.view_mut((1, 1), (6, 6)).copy_from(h.mat());
    Ok(Gram::from_mat(&p4 * block * p4.transpose()))
}

/// The 16-pair local maximizer on the rank-7 type through `I_1 ⊕ G_6`:
/// ψ is the positive quartic root, ψ′ and ψ″ its linear companions.
fn a0_point() -> Gram {
    let psi = psi_root();
    let psi1 = (-198.0 + 404.0 * psi + 65.0 * psi * psi - 126.0 * psi.powi(3)) / 144.0;
    let psi2 = 2.0 * psi - 2.0 * psi1 - 1.0;
    let (a, b, c) = (psi, psi1, psi2);
    let rows = [
        vec![2.0 * a - 1.0, b, 0.0, 0.0, -b, 0.0, 0.0],
        vec![b, a, a / 2.0, -a / 2.0, (1.0 - a) / 2.0, c, c],
        vec![0.0, a / 2.0, a, 0.0, -c, 0.0, 2.0 * c],
        vec![0.0, -a / 2.0, 0.0, a, -c, -2.0 * c, 0.0],
        vec![-b, (1.0 - a) / 2.0, -c, -c, a, a / 2.0, -a / 2.0],
        vec![0.0, c, 0.0, -2.0 * c, a / 2.0, a, 0.0],
        vec![0.0, c, 2.0 * c, 0.0, -a / 2.0, 0.0, a],
    ];
    Gram::from_mat(DMatrix::from_fn(7, 7, |i, j| rows[i][j]))
}

/// The 10-pair local maximizer inside `W_{2,1}` (hermitian-ball coordinates
/// `(z₀, w₀)` polynomial in `φ = 1 + (√6−√2)/2`).
fn h_witness() -> Result<Gram> {
    let phi = 1.0 + (6f64.sqrt() - 2f64.sqrt()) / 2.0;
    let c = |re: f64, im: f64| Complex::new(re, im);
    let z0 = (c(-36.0, -113.0)
        + c(10.0, 26.0) * phi
        + c(31.0, 197.0) * (phi * phi / 2.0)
        + c(1.0, -75.0) * (phi.powi(3) / 2.0))
        / 97.0;
    let w0 = (c(16.0, 61.0)
        + c(-26.0, 10.0) * phi
        + c(47.0, -130.0) * (phi * phi)
        + c(-11.0, 49.0) * phi.powi(3))
        / 97.0;
    let z = DMatrix::from_column_slice(2, 1, &[z0, w0]);
    hermitian_embed(2, 1, &z)
}

/// Build a μ-witness from its JSON spec: `{"gram": name}`, a block sum
/// `{"sum": [name, …]}`, or frozen parametrization coordinates
/// `{"param": {"type": name, "coords": […]}}`.
pub fn build_witness(catalog: &Catalog, spec: &serde_json::Value) -> Result<Gram> {
    if let Some(name) = spec.get("gram").and_then(|v| v.as_str()) {
        return named_gram(catalog, name);
    }
    if let Some(parts) = spec.get("sum").and_then(|v| v.as_array()) {
        let mut total: Option<DMatrix<f64>> = None;
        for p in parts {
            let name = p
                .as_str()
                .ok_or_else(|| Error::Parse("sum entries must be gram names".into()))?;
            let g = named_gram(catalog, name)?;
            total = Some(match total {
                None => g.mat().clone(),
                Some(t) => direct_sum(&t, g.mat()),
            });
        }
        return Ok(Gram::from_mat(total.ok_or_else(|| Error::Parse("empty sum".into()))?));
    }
    if let Some(p) = spec.get("param") {
        let ty = p
            .get("type")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Parse("param witness needs a type name".into()))?;
        let coords: Vec<f64> = p
            .get("coords")
            .and_then(|v| v.as_array())
            .ok_or_else(|| Error::Parse("param witness needs coords".into()))?
            .iter()
            .map(|v| v.as_f64().unwrap_or(f64::NAN))
            .collect();
        let gt = catalog.geo_type(ty)?;
        let block_coords = unflatten_coords(&gt.split.blocks, &coords)?;
        return param_point(&gt, &block_coords);
    }
    Err(Error::Parse(format!("unrecognized witness spec {spec}")))
}

fn named_gram(catalog: &Catalog, name: &str) -> Result<Gram> {
    // identity grams resolve structurally
    if let Some(n) = name.strip_prefix("I_").and_then(|s| s.parse::<usize>().ok()) {
        return Ok(Gram::from_mat(DMatrix::identity(n, n)));
    }
    catalog.gram(name)
}

fn direct_sum(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = (a.nrows(), b.nrows());
    DMatrix::from_fn(m + n, m + n, |i, j| {
        if i < m && j < m {
            a[(i, j)]
        } else if i >= m && j >= m {
            b[(i - m, j - m)]
        } else {
            0.0
        }
    })
}

/// Frozen-coordinate layout per block: `Sym` p·q (row-major X);
/// `Alt` g² + g² (X then Y, row-major); `Herm` 2·p·q (re, im interleaved).
pub fn unflatten_coords(blocks: &[BlockPlan], coords: &[f64]) -> Result<Vec<BlockCoord>> {
    let mut out = Vec::new();
    let mut k = 0usize;
    let take = |k: &mut usize, len: usize| -> Result<Vec<f64>> {
        if *k + len > coords.len() {
            return Err(Error::Parse("too few witness coordinates".into()));
        }
        let slice = coords[*k..*k + len].to_vec();
        *k += len;
        Ok(slice)
    };
    for b in blocks {
        match *b {
            BlockPlan::Sym { p, q } => {
                if p == 0 || q == 0 {
                    out.push(BlockCoord::Base);
                } else {
                    let v = take(&mut k, p * q)?;
                    out.push(BlockCoord::Sym(DMatrix::from_row_slice(p, q, &v)));
                }
            }
            BlockPlan::Alt { g } => {
                let x = take(&mut k, g * g)?;
                let y = take(&mut k, g * g)?;
                out.push(BlockCoord::Alt {
                    x: DMatrix::from_row_slice(g, g, &x),
                    y: DMatrix::from_row_slice(g, g, &y),
                });
            }
            BlockPlan::Herm { p, q, .. } => {
                if p == 0 || q == 0 {
                    out.push(BlockCoord::Base);
                } else {
                    let v = take(&mut k, 2 * p * q)?;
                    let z = DMatrix::from_fn(p, q, |i, j| {
                        let base = 2 * (i * q + j);
                        Complex::new(v[base], v[base + 1])
                    });
                    out.push(BlockCoord::Herm(z));
                }
            }
        }
    }
    if k != coords.len() {
        return Err(Error::Parse("too many witness coordinates".into()));
    }
    Ok(out)
}
