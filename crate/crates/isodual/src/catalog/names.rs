//! Matrix-name grammar.
//!
//! Atoms: `I_n`, `I_{p,q}`, `U_{2m}`, `J_{2m}`, `R_p`, `V_k`, `W_k`, plus any
//! name supplied by the lookup hook (torsion primitives and indecomposable
//! type matrices).  A leading `-` negates an atom; `+` is the direct sum.

use num::bigint::BigInt;

use crate::error::{Error, Result};
use crate::IntMat;

/// Resolve a composite name, delegating unknown atoms to `lookup`.
pub fn resolve_with(name: &str, lookup: &dyn Fn(&str) -> Option<IntMat>) -> Result<IntMat> {
    let mut total: Option<IntMat> = None;
    for part in name.split('+') {
        let atom = part.trim();
        if atom.is_empty() {
            return Err(Error::Parse(format!("empty atom in {name:?}")));
        }
        let m = resolve_atom(atom, lookup)?;
        total = Some(match total {
            None => m,
            Some(t) => t.direct_sum(&m),
        });
    }
    total.ok_or_else(|| Error::Parse(format!("empty name {name:?}")))
}

/// Resolve a single name without catalog-supplied atoms.
pub fn resolve_matrix(name: &str) -> Result<IntMat> {
    resolve_with(name, &|_| None)
}

fn resolve_atom(atom: &str, lookup: &dyn Fn(&str) -> Option<IntMat>) -> Result<IntMat> {
    if let Some(rest) = atom.strip_prefix('-') {
        return Ok(-resolve_atom(rest.trim(), lookup)?);
    }
    if let Some(m) = builtin(atom)? {
        return Ok(m);
    }
    lookup(atom).ok_or_else(|| Error::NotFound(atom.to_string()))
}

fn builtin(atom: &str) -> Result<Option<IntMat>> {
    if let Some(args) = atom.strip_prefix("I_") {
        if let Some(body) = args.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            let (p, q) = parse_pair(body)?;
            return Ok(Some(ipq(p, q)));
        }
        if let Ok(n) = args.parse::<usize>() {
            return Ok(Some(IntMat::identity(n)));
        }
        return Ok(None);
    }
    if let Some(args) = atom.strip_prefix("J_") {
        if let Ok(n) = args.parse::<usize>() {
            if n % 2 != 0 || n == 0 {
                return Err(Error::Parse(format!("J_{n} needs even positive size")));
            }
            let j2 = IntMat::from_i64_rows(&[&[0, 1], &[-1, 0]]);
            return Ok(Some(j2.tensor(&IntMat::identity(n / 2))));
        }
        return Ok(None);
    }
    if let Some(args) = atom.strip_prefix("U_") {
        if let Ok(n) = args.parse::<usize>() {
            if n % 2 != 0 || n == 0 {
                return Err(Error::Parse(format!("U_{n} needs even positive size")));
            }
            let u2 = IntMat::from_i64_rows(&[&[0, 1], &[1, 0]]);
            return Ok(Some(u2.tensor(&IntMat::identity(n / 2))));
        }
        return Ok(None);
    }
    if let Some(args) = atom.strip_prefix("R_") {
        if let Ok(p) = args.parse::<usize>() {
            // regular representation of ℤ/p: cyclic shift, size p
            return Ok(Some(IntMat::from_fn(p, |i, j| {
                let hit = if i == 0 { j == p - 1 } else { j == i - 1 };
                BigInt::from(hit as i64)
            })));
        }
        return Ok(None);
    }
    if let Some(args) = atom.strip_prefix("V_") {
        if let Ok(k) = args.parse::<usize>() {
            // companion matrix of Φ_p, p = k+1 prime (constant column −1)
            return Ok(Some(companion(&vec![-1i64; k])));
        }
        return Ok(None);
    }
    if let Some(args) = atom.strip_prefix("W_") {
        if let Ok(k) = args.parse::<usize>() {
            // companion matrix of Φ_{2p}, p = k+1 (alternating −1, +1 column)
            let col: Vec<i64> = (0..k).map(|i| if i % 2 == 0 { -1 } else { 1 }).collect();
            return Ok(Some(companion(&col)));
        }
        return Ok(None);
    }
    Ok(None)
}

/// Companion-style matrix with subdiagonal 1 and last column `col`.
fn companion(col: &[i64]) -> IntMat {
    let k = col.len();
    IntMat::from_fn(k, |i, j| {
        if j == k - 1 {
            BigInt::from(col[i])
        } else if i == j + 1 {
            BigInt::from(1)
        } else {
            BigInt::from(0)
        }
    })
}

fn ipq(p: usize, q: usize) -> IntMat {
    IntMat::from_fn(p + q, |i, j| {
        if i != j {
            BigInt::from(0)
        } else if i < p {
            BigInt::from(1)
        } else {
            BigInt::from(-1)
        }
    })
}

fn parse_pair(body: &str) -> Result<(usize, usize)> {
    let mut it = body.split(',');
    let p = it
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad signature pair {body:?}")))?;
    let q = it
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad signature pair {body:?}")))?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("bad signature pair {body:?}")));
    }
    Ok((p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::finite_order;

    #[test]
    fn builtin_shapes() {
        assert_eq!(resolve_matrix("I_3").unwrap(), IntMat::identity(3));
        let i21 = resolve_matrix("I_{2,1}").unwrap();
        assert_eq!(i21, IntMat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]));
        let j4 = resolve_matrix("J_4").unwrap();
        assert_eq!(finite_order(&j4).unwrap(), Some(4));
        assert_eq!(resolve_matrix("-I_2").unwrap(), -IntMat::identity(2));
    }

    #[test]
    fn torsion_orders() {
        for (name, d) in [
            ("R_2", 2),
            ("R_3", 3),
            ("V_2", 3),
            ("W_2", 6),
            ("V_4", 5),
            ("W_4", 10),
        ] {
            let m = resolve_matrix(name).unwrap();
            assert_eq!(finite_order(&m).unwrap(), Some(d), "{name}");
        }
    }

    #[test]
    fn sums() {
        let m = resolve_matrix("I_1+J_2").unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(finite_order(&m).unwrap(), Some(4));
        let m2 = resolve_matrix("-I_1 + W_2").unwrap();
        assert_eq!(finite_order(&m2).unwrap(), Some(6));
    }

    #[test]
    fn w2_matches_f2_torsion() {
        // F_2·F_2^∨ must equal the named W_2 exactly
        let f2 = IntMat::from_i64_rows(&[&[1, -1], &[0, 1]]);
        assert_eq!(f2.ffdual().unwrap(), resolve_matrix("W_2").unwrap());
    }
}
