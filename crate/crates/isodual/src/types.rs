//! Algebraic isodual types: the isoduality predicate, order and
//! principality, sum/tensor composition, equivalence action and the
//! canonical ℤ-decomposition along cyclotomic kernels.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    self, cyclotomic, finite_order, integer_kernel, is_saturated, IntMat, IntPoly,
};

/// An isodual type: a unimodular `F` with `R = F·F^∨` of finite order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgType {
    f: IntMat,
    r: IntMat,
    order: u64,
    name: Option<String>,
}

impl AlgType {
    pub fn f(&self) -> &IntMat {
        &self.f
    }

    /// Cached `R = F·F^∨`.
    pub fn r(&self) -> &IntMat {
        &self.r
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Principal iff the order is a power of 2.
    pub fn principal(&self) -> bool {
        self.order.is_power_of_two()
    }

    pub fn n(&self) -> usize {
        self.f.n()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "F": serde_json::to_value(&self.f).unwrap(),
            "order": self.order,
            "principal": self.principal(),
        })
    }
}

/// True iff `|det F| = 1` and `F·F^∨` has finite order.
pub fn is_isodual(f: &IntMat) -> bool {
    if !f.is_unimodular() {
        return false;
    }
    matches!(finite_order(&f.ffdual().unwrap()), Ok(Some(_)))
}

pub fn make_type(f: &IntMat, name: Option<&str>) -> Result<AlgType> {
    if !f.is_unimodular() {
        return Err(Error::NotIsodual {
            reason: format!("|det F| = {} ≠ 1", f.det().abs()),
        });
    }
    let r = f.ffdual()?;
    let order = finite_order(&r)?.ok_or_else(|| Error::NotIsodual {
        reason: "F·F^∨ has infinite order".into(),
    })?;
    Ok(AlgType {
        f: f.clone(),
        r,
        order,
        name: name.map(String::from),
    })
}

/// Block-diagonal sum of types; `order(a ⊕ b) = lcm(order a, order b)`.
pub fn direct_sum(a: &AlgType, b: &AlgType) -> AlgType {
    let f = a.f.direct_sum(&b.f);
    let t = make_type(&f, None).expect("direct sum of isodual types is isodual");
    debug_assert_eq!(t.order, num::integer::lcm(a.order, b.order));
    t
}

/// Kronecker product of types.
pub fn tensor(a: &AlgType, b: &AlgType) -> AlgType {
    let f = a.f.tensor(&b.f);
    make_type(&f, None).expect("tensor of isodual types is isodual")
}

/// Equivalence action `T·F·T'`; the attached `R` is conjugated accordingly.
pub fn equiv_act(t: &IntMat, a: &AlgType) -> Result<AlgType> {
    let det = t.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let f = a.f.conjugate_by(t);
    let ty = make_type(&f, None)?;
    debug_assert_eq!(
        ty.r,
        &(t * &a.r) * &t.inverse_unimodular().unwrap(),
        "R must conjugate alongside F"
    );
    Ok(ty)
}

/// The type of `G = F(F^∨F)^ℓ`; `G·G^∨ = R^{2ℓ+1}` exactly.
pub fn odd_power_type(a: &AlgType, ell: u64) -> AlgType {
    let fdual = a.f.dual_inverse().expect("type matrices are unimodular");
    let step = &fdual * &a.f;
    let g = &a.f * &step.pow(ell);
    let t = make_type(&g, None).expect("odd powers of isodual types are isodual");
    debug_assert_eq!(t.r, a.r.pow(2 * ell + 1));
    t
}

/// The (ℤ/2)²-orbit `{F, F', −F, −F'}`, deduplicated by exact equality.
pub fn transform_family(a: &AlgType) -> Vec<AlgType> {
    let f = &a.f;
    let candidates = [f.clone(), f.transpose(), -f.clone(), -f.transpose()];
    let mut out: Vec<AlgType> = Vec::new();
    for c in candidates {
        if out.iter().all(|t| t.f != c) {
            out.push(make_type(&c, None).expect("orbit of an isodual type"));
        }
    }
    out
}

/// One component of the canonical decomposition: the conductor `k`, a
/// saturated basis of `M_k = ker Φ_k(R^∨)`, and the restricted bilinear
/// matrix of `F` on that basis.
#[derive(Clone, Debug, Serialize)]
pub struct Component {
    pub k: u64,
    pub basis: Vec<Vec<BigInt>>,
    pub block: IntMat,
}

/// Canonical decomposition `ℤⁿ ⊇ ⊕_{k|d} M_k` with its index.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub components: Vec<Component>,
    pub index: BigInt,
}

impl Decomposition {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .components
            .iter()
            .map(|c| {
                serde_json::json!({
                    "k": c.k,
                    "basis": c.basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "block": serde_json::to_value(&c.block).unwrap(),
                })
            })
            .collect::<Vec<_>>())
    }
}

/// Canonical decomposition along `M_k = ker Φ_k(R^∨)` for `k | order`.
///
/// Components for distinct conductors are bilaterally `F`-orthogonal; the
/// index is `|det|` of the stacked bases.
pub fn canonical_decomposition(a: &AlgType) -> Decomposition {
    let rdual = a.r.dual_inverse().expect("R is unimodular");
    let n = a.n();
    let mut components = Vec::new();
    let mut stacked: Vec<Vec<BigInt>> = Vec::new();
    for k in 1..=a.order {
        if a.order % k != 0 {
            continue;
        }
        let phi_at = cyclotomic(k).eval_mat(&rdual);
        let basis = integer_kernel(&phi_at);
        if basis.is_empty() {
            continue;
        }
        debug_assert!(is_saturated(&basis));
        let r = basis.len();
        let block = IntMat::from_fn(r, |i, j| bilinear(&a.f, &basis[i], &basis[j]));
        stacked.extend(basis.iter().cloned());
        components.push(Component { k, basis, block });
    }
    debug_assert_eq!(stacked.len(), n, "component ranks must sum to n");
    let stack_mat = IntMat::from_fn(n, |i, j| stacked[j][i].clone());
    let index = stack_mat.det().abs();
    Decomposition { components, index }
}

fn bilinear(f: &IntMat, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let fy = f.apply(y);
    x.iter().zip(&fy).map(|(a, b)| a * b).sum()
}

/// Verified bilateral `F`-orthogonality between two components
/// (`x'Fy = y'Fx = 0` for basis vectors of distinct conductors).
pub fn bilaterally_orthogonal(f: &IntMat, a: &Component, b: &Component) -> bool {
    a.basis.iter().all(|x| {
        b.basis
            .iter()
            .all(|y| bilinear(f, x, y).is_zero() && bilinear(f, y, x).is_zero())
    })
}

/// Outcome of the invariant-level equality test.  A certified equivalence
/// needs an explicit witness `T`; matching invariants alone do not decide it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum InvariantComparison {
    /// Some computed invariant differs; the types are inequivalent.
    Distinguished { invariant: String },
    /// All computed invariants agree.
    EquivalentByInvariants,
    /// Invariants agree but at least one was unavailable (no symmetric
    /// component to take a parity from).
    Unknown,
}

/// Compare (order, χ(R), real signature, decomposition index, parity of the
/// symmetric component).
pub fn type_equal_invariants(a: &AlgType, b: &AlgType) -> InvariantComparison {
    if a.n() != b.n() {
        return InvariantComparison::Distinguished { invariant: "rank".into() };
    }
    if a.order != b.order {
        return InvariantComparison::Distinguished { invariant: "order".into() };
    }
    if a.r.char_poly() != b.r.char_poly() {
        return InvariantComparison::Distinguished { invariant: "char_poly(R)".into() };
    }
    let sig_a = crate::realtypes::signature(a);
    let sig_b = crate::realtypes::signature(b);
    if sig_a != sig_b {
        return InvariantComparison::Distinguished { invariant: "real_signature".into() };
    }
    let dec_a = canonical_decomposition(a);
    let dec_b = canonical_decomposition(b);
    if dec_a.index != dec_b.index {
        return InvariantComparison::Distinguished { invariant: "decomposition_index".into() };
    }
    let par_a = symmetric_component_parity(&dec_a);
    let par_b = symmetric_component_parity(&dec_b);
    match (par_a, par_b) {
        (Some(x), Some(y)) if x != y => InvariantComparison::Distinguished {
            invariant: "symmetric_component_parity".into(),
        },
        (Some(_), Some(_)) => InvariantComparison::EquivalentByInvariants,
        _ => InvariantComparison::Unknown,
    }
}

/// Parity of the `k = 1` component (even iff all diagonal entries even).
pub fn symmetric_component_parity(dec: &Decomposition) -> Option<bool> {
    dec.components
        .iter()
        .find(|c| c.k == 1)
        .map(|c| c.block.is_even())
}

/// Characteristic polynomial of the attached torsion element.
pub fn char_poly_of_r(a: &AlgType) -> IntPoly {
    exact::char_poly(&a.r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMat {
        IntMat::from_i64_rows(rows)
    }

    fn f2() -> IntMat {
        m(&[&[1, -1], &[0, 1]])
    }

    fn g3() -> IntMat {
        m(&[&[0, -1, 0], &[0, -1, -1], &[1, 1, -1]])
    }

    fn h3() -> IntMat {
        m(&[&[1, 1, 0], &[0, 1, 1], &[-1, -1, 1]])
    }

    fn j2() -> IntMat {
        m(&[&[0, 1], &[-1, 0]])
    }

    #[test]
    fn isoduality_examples() {
        assert!(is_isodual(&f2()));
        assert_eq!(make_type(&f2(), None).unwrap().order(), 6);
        // F_a with a = 1: FF^∨ has χ = Φ_6
        let fa = m(&[&[1, 1], &[0, 1]]);
        assert!(is_isodual(&fa));
        // a = 2: FF^∨ = [[−3,2],[−2,1]] is not semisimple
        let fa2 = m(&[&[1, 2], &[0, 1]]);
        assert_eq!(fa2.ffdual().unwrap(), m(&[&[-3, 2], &[-2, 1]]));
        assert!(!is_isodual(&fa2));
    }

    #[test]
    fn make_type_orders() {
        assert_eq!(make_type(&IntMat::identity(1), None).unwrap().order(), 1);
        let g = make_type(&g3(), None).unwrap();
        assert_eq!(g.order(), 4);
        assert!(g.principal());
    }

    #[test]
    fn sum_and_tensor() {
        let i1 = make_type(&IntMat::identity(1), None).unwrap();
        let j = make_type(&j2(), None).unwrap();
        let s = direct_sum(&i1, &j);
        assert_eq!(s.order(), 2);
        assert_eq!(s.n(), 3);
        // J_2 ⊗ I_2 = J_4
        let i2 = make_type(&IntMat::identity(2), None).unwrap();
        let j4 = tensor(&j, &i2);
        assert_eq!(
            *j4.f(),
            m(&[&[0, 0, 1, 0], &[0, 0, 0, 1], &[-1, 0, 0, 0], &[0, -1, 0, 0]])
        );
        // I_1 ⊗ F = F
        let f = make_type(&f2(), None).unwrap();
        assert_eq!(tensor(&i1, &f).f(), f.f());
    }

    #[test]
    fn equiv_act_identity_and_eq15() {
        let g = make_type(&g3(), None).unwrap();
        assert_eq!(equiv_act(&IntMat::identity(3), &g).unwrap().f(), g.f());

        // P·(−I_1 ⊕ G_3)·P' = I_1 ⊕ (−H_3) with P = [[1, β],[γ', I_3]],
        // β = (2,−1,1), γ = (1,0,0)
        let minus_i1 = make_type(&m(&[&[-1]]), None).unwrap();
        let left = direct_sum(&minus_i1, &g);
        let p = m(&[
            &[1, 2, -1, 1],
            &[1, 1, 0, 0],
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
        ]);
        let acted = equiv_act(&p, &left).unwrap();
        let i1 = make_type(&IntMat::identity(1), None).unwrap();
        let minus_h3 = make_type(&-h3(), None).unwrap();
        let right = direct_sum(&i1, &minus_h3);
        assert_eq!(acted.f(), right.f());
    }

    #[test]
    fn decomposition_block_diagonal_case() {
        let i1 = make_type(&IntMat::identity(1), None).unwrap();
        let j = make_type(&j2(), None).unwrap();
        let t = direct_sum(&i1, &j);
        let dec = canonical_decomposition(&t);
        assert_eq!(dec.components.len(), 2);
        assert_eq!(dec.components[0].k, 1);
        assert_eq!(dec.components[0].basis.len(), 1);
        assert_eq!(dec.components[1].k, 2);
        assert_eq!(dec.components[1].basis.len(), 2);
        assert!(dec.index.is_one());
        assert!(bilaterally_orthogonal(t.f(), &dec.components[0], &dec.components[1]));
    }

    #[test]
    fn decomposition_g3() {
        let g = make_type(&g3(), None).unwrap();
        let dec = canonical_decomposition(&g);
        let ks: Vec<u64> = dec.components.iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![1, 4]);
        assert_eq!(dec.components[0].basis.len(), 1);
        assert_eq!(dec.components[1].basis.len(), 2);
        assert_eq!(dec.index, BigInt::from(2));
        assert!(bilaterally_orthogonal(g.f(), &dec.components[0], &dec.components[1]));
    }

    #[test]
    fn transform_family_sizes() {
        let i2 = make_type(&IntMat::identity(2), None).unwrap();
        assert_eq!(transform_family(&i2).len(), 2);
        let j = make_type(&j2(), None).unwrap();
        assert_eq!(transform_family(&j).len(), 2);
        let g = make_type(&g3(), None).unwrap();
        assert_eq!(transform_family(&g).len(), 4);
    }

    #[test]
    fn odd_powers() {
        let g = make_type(&g3(), None).unwrap();
        assert_eq!(odd_power_type(&g, 0).f(), g.f());
        // order 4: GG^∨ = R³ = R^{-1}
        let t = odd_power_type(&g, 1);
        assert_eq!(t.order(), 4);
        assert_eq!(*t.r(), g.r().pow(3));

        // F_3 has order 3, so ℓ = 1 drops the order to 1
        let f3 = m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let tf3 = make_type(&f3, None).unwrap();
        assert_eq!(tf3.order(), 3);
        assert_eq!(odd_power_type(&tf3, 1).order(), 1);
    }
}
