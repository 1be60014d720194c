//! The pointwise stabilizer `Γ_F` by shortest-vector image backtracking on
//! the basepoint form.

use num::bigint::BigInt;

use crate::density::enumerate_up_to;
use crate::error::{Error, Result};
use crate::geometry::{tangent_frame, GeoType, TOL};
use crate::IntMat;

const PAIR_TOL: f64 = 1e-6;

/// Result of an automorphism search.
#[derive(Clone, Debug)]
pub struct AutomorphismSearch {
    /// all `T` with `T·A·T' = A` fixing the tangent frame, sorted
    pub elements: Vec<IntMat>,
    /// how many elements also satisfy `T'·F·T = F` as an exact integer
    /// identity (reported, not enforced)
    pub f_isometry_count: usize,
}

struct Search<'a> {
    a: &'a nalgebra::DMatrix<f64>,
    candidates: Vec<Vec<i64>>,
    /// candidate pair products candidates[i]'·A·candidates[j]
    target: Vec<Vec<f64>>,
    n: usize,
    budget: u64,
    nodes: u64,
}

impl<'a> Search<'a> {
    fn pairing(&self, u: &[i64], v: &[i64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                acc += u[i] as f64 * self.a[(i, j)] * v[j] as f64;
            }
        }
        acc
    }

    fn run(&mut self, mut visit: impl FnMut(&[usize])) -> Result<()> {
        let mut stack: Vec<usize> = Vec::with_capacity(self.n);
        self.recurse(&mut stack, &mut visit)
    }

    fn recurse(&mut self, chosen: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) -> Result<()> {
        if chosen.len() == self.n {
            visit(chosen);
            return Ok(());
        }
        let slot = chosen.len();
        for cand in 0..self.candidates.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::SearchBudgetExceeded {
                    reason: format!("automorphism backtracking exceeded {} nodes", self.budget),
                });
            }
            if (self.pairing(&self.candidates[cand], &self.candidates[cand]) - self.target[slot][slot])
                .abs()
                > PAIR_TOL
            {
                continue;
            }
            let ok = (0..slot).all(|prev| {
                (self.pairing(&self.candidates[chosen[prev]], &self.candidates[cand])
                    - self.target[prev][slot])
                    .abs()
                    < PAIR_TOL
            });
            if ok {
                chosen.push(cand);
                self.recurse(chosen, visit)?;
                chosen.pop();
            }
        }
        Ok(())
    }
}

fn build_search<'a>(gt: &'a GeoType, budget: u64) -> Result<Search<'a>> {
    let a = gt.basepoint.mat();
    let n = gt.alg.n();
    let max_diag = (0..n).map(|i| a[(i, i)]).fold(0.0f64, f64::max);
    let half = enumerate_up_to(a, max_diag + PAIR_TOL)?;
    let mut candidates = Vec::with_capacity(2 * half.len());
    for v in half {
        let neg: Vec<i64> = v.iter().map(|&c| -c).collect();
        candidates.push(v);
        candidates.push(neg);
    }
    let target: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| a[(i, j)]).collect())
        .collect();
    Ok(Search { a, candidates, target, n, budget, nodes: 0 })
}

fn assemble(gt: &GeoType, search: &Search, chosen: &[usize]) -> IntMat {
    // images w_i of the basis vectors become the rows of T (T = S' for the
    // column matrix S, so that T·A·T' = A)
    let n = gt.alg.n();
    IntMat::from_fn(n, |i, j| BigInt::from(search.candidates[chosen[i]][j]))
}

/// All integer `T` with `T·A·T' = A` for the basepoint, filtered by the
/// pointwise-fixing condition on the tangent frame; canonically sorted.
///
/// Each returned element is additionally re-verified against
/// `T'·F·T = F` exactly; the count of elements passing that check is
/// reported alongside.
pub fn automorphism_group(gt: &GeoType, budget: u64) -> Result<AutomorphismSearch> {
    let frame = tangent_frame(&gt.basepoint, gt.alg.f())?;
    let mut search = build_search(gt, budget)?;
    let mut hits: Vec<Vec<usize>> = Vec::new();
    search.run(|chosen| hits.push(chosen.to_vec()))?;
    let f = gt.alg.f();
    let a = gt.basepoint.mat();
    let mut elements = Vec::new();
    let mut f_isometry_count = 0usize;
    for chosen in hits {
        let t = assemble(gt, &search, &chosen);
        let tf = t.to_f64();
        if (&tf * a * tf.transpose() - a).amax() >= TOL {
            continue;
        }
        let fixes = frame
            .basis
            .iter()
            .all(|x| (&tf * x * tf.transpose() - x).amax() < TOL);
        if !fixes {
            continue;
        }
        if &(&t.transpose() * f) * &t == *f {
            f_isometry_count += 1;
        }
        elements.push(t);
    }
    elements.sort_by_key(|m| format!("{m}"));
    elements.dedup();
    Ok(AutomorphismSearch { elements, f_isometry_count })
}

/// Count `|Γ_F|` without materializing the group.
pub fn automorphism_count(gt: &GeoType, budget: u64) -> Result<u64> {
    let frame = tangent_frame(&gt.basepoint, gt.alg.f())?;
    let mut s = build_search(gt, budget)?;
    let a = gt.basepoint.mat().clone();
    let n = gt.alg.n();
    let mut count = 0u64;
    let candidates = s.candidates.clone();
    let basis = frame.basis.clone();
    s.run(|chosen| {
        let tf = nalgebra::DMatrix::from_fn(n, n, |i, j| candidates[chosen[i]][j] as f64);
        if (&tf * &a * tf.transpose() - &a).amax() >= TOL {
            return;
        }
        if basis
            .iter()
            .all(|x| (&tf * x * tf.transpose() - x).amax() < TOL)
        {
            count += 1;
        }
    })?;
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::make_type;

    #[test]
    fn gamma_of_identity_rank2() {
        // V_{I_2} = {I_2}: Γ = signed permutations, order 2²·2! = 8
        let t = make_type(&IntMat::identity(2), None).unwrap();
        let gt = GeoType::new(t).unwrap();
        let search = automorphism_group(&gt, 1_000_000).unwrap();
        assert_eq!(search.elements.len(), 8);
        assert_eq!(search.f_isometry_count, 8);
        assert_eq!(automorphism_count(&gt, 1_000_000).unwrap(), 8);
    }

    #[test]
    fn gamma_of_identity_rank3() {
        let t = make_type(&IntMat::identity(3), None).unwrap();
        let gt = GeoType::new(t).unwrap();
        assert_eq!(automorphism_count(&gt, 10_000_000).unwrap(), 48);
    }

    #[test]
    fn gamma_of_siegel_is_pm_identity() {
        // the symplectic type is fixed pointwise only by ±I
        let j2 = IntMat::from_i64_rows(&[&[0, 1], &[-1, 0]]);
        let t = make_type(&j2, None).unwrap();
        let gt = GeoType::new(t).unwrap();
        let search = automorphism_group(&gt, 1_000_000).unwrap();
        assert_eq!(search.elements.len(), 2);
    }

    #[test]
    fn budget_error() {
        let t = make_type(&IntMat::identity(4), None).unwrap();
        let gt = GeoType::new(t).unwrap();
        assert!(matches!(
            automorphism_group(&gt, 10),
            Err(Error::SearchBudgetExceeded { .. })
        ));
    }
}
