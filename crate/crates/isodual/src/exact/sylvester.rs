//! Integer solutions of the linear equation `F = R·F'` and the determinant
//! of the generic solution.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::hnf;
use crate::exact::intmat::IntMat;

/// Sparse multivariate polynomial over ℤ, exponent vectors as keys.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0u32; nvars];
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigInt::one());
        MultiPoly { nvars, terms }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; nvars], c);
        }
        MultiPoly { nvars, terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (e, v) in &other.terms {
            let slot = terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *slot += v;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        for (ea, va) in &self.terms {
            for (eb, vb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = terms.entry(e).or_insert_with(BigInt::zero);
                *slot += va * vb;
                if slot.is_zero() {
                    terms.remove(&ea.iter().zip(eb).map(|(a, b)| a + b).collect::<Vec<_>>());
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        MultiPoly { nvars: self.nvars, terms }
    }

    pub fn eval(&self, coords: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &p) in e.iter().enumerate() {
                for _ in 0..p {
                    t *= &coords[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Content: gcd of all coefficients (zero polynomial → 0).
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| num::integer::gcd(acc, c.abs()))
    }

    pub fn to_string_vars(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms.iter().rev() {
            let mut body = String::new();
            for (i, &p) in e.iter().enumerate() {
                if p > 0 {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    body.push_str(&names[i]);
                    if p > 1 {
                        body.push_str(&format!("^{p}"));
                    }
                }
            }
            let s = if body.is_empty() {
                c.to_string()
            } else if c.is_one() {
                body
            } else if (-c).is_one() {
                format!("-{body}")
            } else {
                format!("{c}*{body}")
            };
            parts.push(s);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(st) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(st);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

/// Determinant of a matrix of multivariate polynomials by permutation
/// expansion (n ≤ 4 keeps this tiny).
fn det_poly(entries: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = entries.len();
    let nvars = entries[0][0].nvars;
    let mut total = MultiPoly::zero(nvars);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |perm, sign| {
        let mut prod = MultiPoly::constant(nvars, BigInt::from(sign));
        for (i, &j) in perm.iter().enumerate() {
            prod = prod.mul(&entries[i][j]);
        }
        total = total.add(&prod);
    });
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], i64)) {
    let n = perm.len();
    if k == n {
        let mut sign = 1i64;
        let mut seen = vec![false; n];
        for i in 0..n {
            if !seen[i] {
                let mut len = 0;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                    len += 1;
                }
                if len % 2 == 0 {
                    sign = -sign;
                }
            }
        }
        f(perm, sign);
        return;
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, f);
        perm.swap(k, i);
    }
}

/// The solution lattice of `F = R·F'` together with determinant data.
#[derive(Clone, Debug)]
pub struct SylvesterSolutions {
    /// ℤ-basis of the solution lattice inside n×n integer matrices.
    pub basis: Vec<IntMat>,
    /// det(Σ xᵢ·Bᵢ) expanded symbolically (only when n ≤ 4).
    pub generic_det: Option<MultiPoly>,
    /// Sampled determinants at sup-norm ≤ 2 coordinate vectors (n > 4, or
    /// alongside the symbolic form for convenience).
    pub sampled_dets: Vec<BigInt>,
}

impl SylvesterSolutions {
    /// gcd of all determinant values over the solution lattice (0 when the
    /// lattice is trivial); every solution has determinant divisible by it.
    pub fn det_divisor(&self) -> BigInt {
        if let Some(p) = &self.generic_det {
            p.content()
        } else {
            self.sampled_dets
                .iter()
                .fold(BigInt::zero(), |acc, d| num::integer::gcd(acc, d.abs()))
        }
    }
}

/// ℤ-basis of `{F integer : F = R·F'}` via the saturated kernel of the
/// vectorized map `F ↦ F − R·F'`.
pub fn sylvester_basis(r: &IntMat) -> Result<SylvesterSolutions> {
    let det = r.det();
    if !det.abs().is_one() {
        return Err(Error::NotUnimodular { det: det.to_string() });
    }
    let n = r.n();
    let nn = n * n;
    // row (a,b) of the constraint matrix, column (i,j) of vec(F):
    // (F − R·F')_{ab} = F_{ab} − Σ_j R_{aj} F_{bj}
    let mut rows = vec![vec![BigInt::zero(); nn]; nn];
    for a in 0..n {
        for b in 0..n {
            let row = &mut rows[a * n + b];
            row[a * n + b] += BigInt::one();
            for j in 0..n {
                row[b * n + j] -= r.at(a, j);
            }
        }
    }
    let kernel = hnf::integer_kernel(&rows);
    let basis: Vec<IntMat> = kernel
        .iter()
        .map(|v| IntMat::from_fn(n, |i, j| v[i * n + j].clone()))
        .collect();
    let m = basis.len();
    let generic_det = if n <= 4 && m > 0 {
        let entries: Vec<Vec<MultiPoly>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..m).fold(MultiPoly::zero(m), |acc, t| {
                            acc.add(&MultiPoly::var(m, t).scale(basis[t].at(i, j)))
                        })
                    })
                    .collect()
            })
            .collect();
        Some(det_poly(&entries))
    } else {
        None
    };
    let mut sampled_dets = Vec::new();
    if m > 0 {
        let budget = 2000usize;
        let width = 5u64; // coordinates in −2..=2
        let total = width.checked_pow(m as u32).unwrap_or(u64::MAX);
        if total as usize <= budget {
            let mut coords = vec![BigInt::zero(); m];
            for idx in 0..total {
                let mut v = idx;
                for c in coords.iter_mut() {
                    *c = BigInt::from((v % width) as i64 - 2);
                    v /= width;
                }
                if coords.iter().all(Zero::is_zero) {
                    continue;
                }
                let mut f = IntMat::zero(n);
                for (t, c) in coords.iter().enumerate() {
                    f = &f + &IntMat::from_fn(n, |i, j| basis[t].at(i, j) * c);
                }
                sampled_dets.push(f.det());
            }
        } else {
            // deterministic low-discrepancy-ish sweep of single and paired coords
            for t in 0..m {
                for c in [1i64, 2, -1] {
                    let f = IntMat::from_fn(n, |i, j| basis[t].at(i, j) * BigInt::from(c));
                    sampled_dets.push(f.det());
                }
            }
            for t in 0..m {
                for s in t + 1..m {
                    let f = &basis[t] + &basis[s];
                    sampled_dets.push(f.det());
                }
            }
        }
    }
    Ok(SylvesterSolutions { basis, generic_det, sampled_dets })
}

/// Unimodular points of the solution lattice with coordinates of sup-norm
/// ≤ `bound`, deduplicated up to the scan order (each sign pattern listed).
///
/// The bound is a documented heuristic: the catalog representatives all have
/// coordinates within ±2.  Errors out instead of scanning more than ~10⁸
/// candidates.
pub fn unimodular_solutions(r: &IntMat, bound: i64) -> Result<Vec<IntMat>> {
    let sols = sylvester_basis(r)?;
    let m = sols.basis.len();
    if m == 0 {
        return Ok(Vec::new());
    }
    let width = (2 * bound + 1) as u64;
    let total = width
        .checked_pow(m as u32)
        .filter(|&t| t <= 100_000_000)
        .ok_or_else(|| Error::SearchBudgetExceeded {
            reason: format!("(2·{bound}+1)^{m} coordinate vectors"),
        })?;
    let n = r.n();
    let mut out = Vec::new();
    let mut coords = vec![0i64; m];
    for idx in 0..total {
        let mut v = idx;
        for c in coords.iter_mut() {
            *c = (v % width) as i64 - bound;
            v /= width;
        }
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        let mut f = IntMat::zero(n);
        for (t, &c) in coords.iter().enumerate() {
            if c != 0 {
                f = &f + &IntMat::from_fn(n, |i, j| sols.basis[t].at(i, j) * BigInt::from(c));
            }
        }
        if f.det().abs().is_one() {
            out.push(f);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sylvester_j2() {
        // R = J_2: solutions {[[a,a],[−a,a]]}, generic det 2a²
        let j2 = IntMat::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        let sols = sylvester_basis(&j2).unwrap();
        assert_eq!(sols.basis.len(), 1);
        let b = &sols.basis[0];
        assert_eq!(b.at(0, 0), b.at(0, 1));
        assert_eq!(&(-b.at(0, 0)), b.at(1, 0));
        assert_eq!(b.at(0, 0), b.at(1, 1));
        let p = sols.generic_det.unwrap();
        // det = 2a² up to the sign of the basis vector
        assert_eq!(p.terms.len(), 1);
        assert_eq!(p.terms.get(&vec![2u32]).map(|c| c.abs()), Some(BigInt::from(2)));
        assert!(unimodular_solutions(&j2, 3).unwrap().is_empty());
    }

    #[test]
    fn sylvester_w2_gives_f2() {
        let w2 = IntMat::from_i64_rows(&[&[0, -1], &[1, 1]]);
        let sols = sylvester_basis(&w2).unwrap();
        assert_eq!(sols.basis.len(), 1);
        let uni = unimodular_solutions(&w2, 3).unwrap();
        // the only unimodular solutions are ±F_2 (coordinates ±1)
        let f2 = IntMat::from_i64_rows(&[&[1, -1], &[0, 1]]);
        assert_eq!(uni.len(), 2);
        assert!(uni.iter().all(|f| *f == f2 || *f == -f2.clone()));
    }

    #[test]
    fn sylvester_identity_symmetric() {
        // R = I_n: all symmetric matrices, dimension n(n+1)/2
        for n in 1..=4usize {
            let sols = sylvester_basis(&IntMat::identity(n)).unwrap();
            assert_eq!(sols.basis.len(), n * (n + 1) / 2);
            assert!(sols.basis.iter().all(IntMat::is_symmetric));
        }
    }

    #[test]
    fn solutions_satisfy_ffdual() {
        // every unimodular point of the solution lattice satisfies FF^∨ = R
        let w2 = IntMat::from_i64_rows(&[&[0, -1], &[1, 1]]);
        for f in unimodular_solutions(&w2, 2).unwrap() {
            assert_eq!(f.ffdual().unwrap(), w2);
        }
    }

    #[test]
    fn v2_determinant_obstruction() {
        // R = V_2: solutions [[a,−a],[2a,a]]-shaped, det = 3a²; none unimodular
        let v2 = IntMat::from_i64_rows(&[&[0, -1], &[1, -1]]);
        let sols = sylvester_basis(&v2).unwrap();
        assert_eq!(sols.basis.len(), 1);
        assert_eq!(sols.det_divisor(), BigInt::from(3));
        assert!(unimodular_solutions(&v2, 3).unwrap().is_empty());
    }
}
