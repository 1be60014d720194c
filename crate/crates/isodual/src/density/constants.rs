//! Named density constants and their witness forms.
//!
//! Each registry entry carries a closed-form value and a catalog witness
//! whose recomputed minimum (and pair count, where the source fixes one)
//! must reproduce it.

use crate::catalog::Catalog;
use crate::density::shortest_vectors;
use crate::error::{Error, Result};
use crate::expr::Expr;

/// Line-oriented verification report for one constant.
#[derive(Clone, Debug)]
pub struct ConstantReport {
    pub name: String,
    pub closed_form: String,
    pub expected: f64,
    pub computed: f64,
    pub delta: f64,
    pub pairs_expected: Option<usize>,
    pub pairs_found: usize,
    pub pass: bool,
}

impl ConstantReport {
    pub fn line(&self) -> String {
        format!(
            "{:<14} {:<28} computed={:.12} |Δ|={:.3e} pairs={}/{} {}",
            self.name,
            self.closed_form,
            self.computed,
            self.delta,
            self.pairs_found,
            self.pairs_expected.map_or("-".into(), |p| p.to_string()),
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Registered constant names in report order.
pub fn registry_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.0).collect()
}

/// name, closed form, witness gram (catalog name), expected pair count
/// (where the source states one).
const REGISTRY: &[(&str, &str, &str, Option<usize>)] = &[
    ("alpha", "(1+sqrt(2))/2", "Lambda_3", Some(3)),
    ("beta", "2*sqrt(5+2*sqrt(5))/5", "Lambda_4p", None),
    ("sqrt2", "sqrt(2)", "D_4", Some(12)),
    ("4/3", "4/3", "Lambda_4", None),
    ("7/5", "7/5", "Lambda_5", None),
    ("one_over_gamma", "sqrt(1+1/sqrt(2))", "Lambda_5p", None),
    ("nu", "sqrt(4+2*sqrt(2))/2", "Nu_7", None),
    ("3/2", "3/2", "Lorentz_6", None),
    ("delta", "1+1/sqrt(3)", "W_6", None),
    ("epsilon", "2*sqrt((5+4*sqrt(3))/23)", "Eps_6", None),
    ("zeta", "(1+sqrt(13))/3", "Zeta_6", None),
    ("eta", "sqrt(1+2/sqrt(3))", "Eta_6", None),
    ("5/3", "5/3", "Lambda_7", None),
    ("omega", "(1+sqrt(2)+sqrt(4+2*sqrt(2)))/4", "Lambda_7p", Some(8)),
    ("psi", "", "A_0", Some(16)),
    ("phi", "1+(sqrt(6)-sqrt(2))/2", "H_z0w0", Some(10)),
    ("2/sqrt3", "2/sqrt(3)", "A_2", Some(3)),
];

/// Positive root of `63ψ⁴ − 64ψ³ − 116ψ² + 128ψ − 36 = 0` near 1.51,
/// computed by bisection to 1e−12 (never hard-coded as a decimal).
pub fn psi_root() -> f64 {
    let p = |x: f64| 63.0 * x.powi(4) - 64.0 * x.powi(3) - 116.0 * x * x + 128.0 * x - 36.0;
    let (mut lo, mut hi) = (1.2, 2.0);
    debug_assert!(p(lo) > 0.0 && p(hi) > 0.0 || p(lo) * p(hi) < 0.0);
    // bracket the root in [1.2, 2.0]; p(1.2) and p(2.0) straddle it
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if p(lo) * p(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Recompute a named constant from its witness and compare.
pub fn verify_constant(catalog: &Catalog, name: &str) -> Result<ConstantReport> {
    let entry = REGISTRY
        .iter()
        .find(|e| e.0 == name)
        .ok_or_else(|| Error::UnknownConstant(name.to_string()))?;
    let (name, form, witness, pairs_expected) = *entry;
    let expected = if name == "psi" {
        psi_root()
    } else {
        Expr::parse(form)?.eval()
    };
    let gram = catalog.gram(witness)?;
    let sv = shortest_vectors(&gram)?;
    let delta = (sv.min - expected).abs();
    let pairs_ok = pairs_expected.map_or(true, |p| p == sv.count_pairs);
    Ok(ConstantReport {
        name: name.to_string(),
        closed_form: if name == "psi" {
            "root(63x^4-64x^3-116x^2+128x-36)".into()
        } else {
            form.to_string()
        },
        expected,
        computed: sv.min,
        delta,
        pairs_expected,
        pairs_found: sv.count_pairs,
        pass: delta < 1e-9 && pairs_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_root_value() {
        let psi = psi_root();
        let p = 63.0 * psi.powi(4) - 64.0 * psi.powi(3) - 116.0 * psi * psi + 128.0 * psi - 36.0;
        assert!(p.abs() < 1e-9);
        assert!((psi - 1.5101).abs() < 1e-3);
    }
}
