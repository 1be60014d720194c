//! The data bank: torsion representatives, indecomposable type matrices,
//! splitting matrices, explicit Gram forms, and the classification tables as
//! machine-checkable records.
//!
//! Data ships as JSON files under a versioned schema; the environment
//! variable `ISODUAL_DATA` relocates the directory.

mod names;
mod verify;
mod witness;

pub use names::resolve_matrix;
pub use verify::{census_distinct, verify_table, CensusReport, RowStatus, TableReport};
pub use witness::{build_witness, unflatten_coords};

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{GeoType, Gram};
use crate::types::{make_type, AlgType};
use crate::IntMat;

pub const SCHEMA: &str = "isodual-catalog/1";

#[derive(Debug, Deserialize)]
pub struct TorsionFile {
    pub schema: String,
    /// explicit primitive matrices by name
    pub primitives: BTreeMap<String, Vec<Vec<i64>>>,
    /// census cells: per (n, d), the representative names with claimed dets
    pub cells: Vec<CensusCell>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CensusCell {
    pub n: usize,
    pub d: u64,
    /// explicit representative names (empty when generated)
    #[serde(default)]
    pub reps: Vec<CensusRep>,
    /// "d2" or "d4": generate the standard composite family instead
    #[serde(default)]
    pub generate: Option<String>,
    pub count: usize,
}

#[derive(Debug, Clone, Deserialize)]
pub struct CensusRep {
    pub name: String,
    pub det: i64,
}

#[derive(Debug, Deserialize)]
pub struct AlgTypesFile {
    pub schema: String,
    /// indecomposable representatives: name → {matrix, r (claimed FF^∨ name),
    /// order, provenance}
    pub types: Vec<AlgTypeEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct AlgTypeEntry {
    pub name: String,
    pub matrix: Vec<Vec<i64>>,
    pub r: String,
    pub order: u64,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
pub struct GramsFile {
    pub schema: String,
    pub grams: Vec<GramEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GramEntry {
    pub name: String,
    /// radical-expression entries (row-major), when given literally
    #[serde(default)]
    pub entries: Option<Vec<Vec<String>>>,
    /// named constructor for forms that need root-finding or complex
    /// parameters (ψ-quartic point, hermitian-ball witness)
    #[serde(default)]
    pub construct: Option<String>,
    /// frozen parametrization coordinates: {"type": name, "coords": [...]}
    #[serde(default)]
    pub param: Option<serde_json::Value>,
    pub provenance: String,
    /// name of the type whose variety this form belongs to, when fixed
    #[serde(default)]
    pub member_of: Option<String>,
}

#[derive(Debug, Deserialize)]
pub struct SplitsFile {
    pub schema: String,
    pub splits: Vec<SplitEntry>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct SplitEntry {
    /// type name this splitting belongs to
    pub name: String,
    /// splitting matrix entries (radical expressions, row-major)
    pub p: Vec<Vec<String>>,
    pub provenance: String,
}

#[derive(Debug, Deserialize)]
pub struct TablesFile {
    pub schema: String,
    pub algebraic: Vec<AlgTableRow>,
    pub geometric: Vec<GeoTableRow>,
    pub inclusion_captions: BTreeMap<String, String>,
}

/// One `F` entry of the order tables (tables of types by order `d`).
#[derive(Debug, Clone, Deserialize)]
pub struct AlgTableRow {
    pub table: u32,
    pub d: u64,
    pub r: String,
    pub f: String,
}

/// One row of the geometric tables.
#[derive(Debug, Clone, Deserialize)]
pub struct GeoTableRow {
    pub table: u32,
    pub no: usize,
    pub f: String,
    pub dim: usize,
    /// expected |Γ_F| when the source fixes it (product of the named factors)
    #[serde(default)]
    pub gamma_order: Option<u64>,
    /// density constant: {"eq": name} or {"geq": name}
    #[serde(default)]
    pub mu: Option<MuSpec>,
    /// witness producing the μ value (gram name or construction), if any
    #[serde(default)]
    pub mu_witness: Option<serde_json::Value>,
    /// containment list (row numbers in the same table; "max" = maximal);
    /// entries `0` (containment in a non-principal type) are not checkable
    /// here and are skipped
    #[serde(default)]
    pub ceq: Option<Vec<usize>>,
    #[serde(default)]
    pub maximal: bool,
    /// basepoint gram name overriding the generic split basepoint
    #[serde(default)]
    pub basepoint: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
pub enum MuSpec {
    #[serde(rename = "eq")]
    Eq(String),
    #[serde(rename = "geq")]
    Geq(String),
}

/// The loaded catalog.
pub struct Catalog {
    pub torsion: TorsionFile,
    pub algtypes: AlgTypesFile,
    pub grams: GramsFile,
    pub splits: SplitsFile,
    pub tables: TablesFile,
}

macro_rules! embedded {
    ($name:literal) => {
        include_str!(concat!("../../data/", $name))
    };
}

impl Catalog {
    /// Load from `ISODUAL_DATA` when set, else the embedded data files.
    pub fn load() -> Result<Catalog> {
        match std::env::var("ISODUAL_DATA") {
            Ok(dir) => Self::load_dir(std::path::Path::new(&dir)),
            Err(_) => Self::load_embedded(),
        }
    }

    pub fn load_embedded() -> Result<Catalog> {
        Self::from_strs(
            embedded!("torsion.json"),
            embedded!("algtypes.json"),
            embedded!("grams.json"),
            embedded!("splits.json"),
            embedded!("tables.json"),
        )
    }

    pub fn load_dir(dir: &std::path::Path) -> Result<Catalog> {
        let read = |file: &str| -> Result<String> {
            std::fs::read_to_string(dir.join(file))
                .map_err(|e| Error::Parse(format!("{file}: {e}")))
        };
        Self::from_strs(
            &read("torsion.json")?,
            &read("algtypes.json")?,
            &read("grams.json")?,
            &read("splits.json")?,
            &read("tables.json")?,
        )
    }

    fn from_strs(t: &str, a: &str, g: &str, s: &str, tb: &str) -> Result<Catalog> {
        let parse_err = |f: &str, e: serde_json::Error| Error::Parse(format!("{f}: {e}"));
        let torsion: TorsionFile = serde_json::from_str(t).map_err(|e| parse_err("torsion", e))?;
        let algtypes: AlgTypesFile = serde_json::from_str(a).map_err(|e| parse_err("algtypes", e))?;
        let grams: GramsFile = serde_json::from_str(g).map_err(|e| parse_err("grams", e))?;
        let splits: SplitsFile = serde_json::from_str(s).map_err(|e| parse_err("splits", e))?;
        let tables: TablesFile = serde_json::from_str(tb).map_err(|e| parse_err("tables", e))?;
        for schema in [
            &torsion.schema,
            &algtypes.schema,
            &grams.schema,
            &splits.schema,
            &tables.schema,
        ] {
            if schema != SCHEMA {
                return Err(Error::Parse(format!("unsupported catalog schema {schema:?}")));
            }
        }
        Ok(Catalog { torsion, algtypes, grams, splits, tables })
    }

    /// Resolve a (possibly composite) matrix name against the catalog.
    pub fn matrix(&self, name: &str) -> Result<IntMat> {
        names::resolve_with(name, &|atom| {
            if let Some(rows) = self.torsion.primitives.get(atom) {
                return Some(int_mat(rows));
            }
            self.algtypes
                .types
                .iter()
                .find(|t| t.name == atom)
                .map(|t| int_mat(&t.matrix))
        })
    }

    /// The algebraic type of a named matrix.
    pub fn alg_type(&self, name: &str) -> Result<AlgType> {
        let f = self.matrix(name)?;
        Ok(make_type(&f, Some(name))?)
    }

    /// A named explicit Gram form.
    pub fn gram(&self, name: &str) -> Result<Gram> {
        let entry = self
            .grams
            .grams
            .iter()
            .find(|g| g.name == name)
            .ok_or_else(|| Error::NotFound(name.to_string()))?;
        if let Some(rows) = &entry.entries {
            return Gram::from_expr_rows(rows);
        }
        if let Some(ctor) = &entry.construct {
            return witness::construct_gram(ctor);
        }
        if let Some(param) = &entry.param {
            return witness::build_witness(self, &serde_json::json!({"param": param}));
        }
        Err(Error::Parse(format!("gram entry {name:?} has no payload")))
    }

    /// The geometric type of a named type matrix: curated splitting matrix
    /// where available, generic construction otherwise; curated basepoint
    /// when a table row pins one.
    pub fn geo_type(&self, name: &str) -> Result<GeoType> {
        let alg = self.alg_type(name)?;
        let gt = if let Some(split) = self.splits.splits.iter().find(|s| s.name == name) {
            let p_rows: Result<Vec<Vec<f64>>> = split
                .p
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| crate::expr::Expr::parse(s).map(|e| e.eval()))
                        .collect()
                })
                .collect();
            let p_rows = p_rows?;
            let n = alg.n();
            let p = nalgebra::DMatrix::from_fn(n, n, |i, j| p_rows[i][j]);
            let generic = crate::realtypes::real_split(&alg)?;
            let curated = crate::realtypes::RealSplit { p, ..generic };
            // re-verify the curated matrix against the canonical blocks
            let f0 = curated.canonical_form();
            let residual = (&curated.p * f0 * curated.p.transpose() - alg.f().to_f64()).amax();
            if residual > crate::realtypes::SPLIT_TOL {
                return Err(Error::SplitFailed { residual, tol: crate::realtypes::SPLIT_TOL });
            }
            GeoType::with_split(alg, curated)?
        } else {
            GeoType::new(alg)?
        };
        let row = self
            .tables
            .geometric
            .iter()
            .find(|r| r.f == name && r.basepoint.is_some());
        if let Some(row) = row {
            let bp = self.gram(row.basepoint.as_deref().unwrap())?;
            return gt.with_basepoint(bp);
        }
        Ok(gt)
    }

    /// Generic lookup across all sections, as a JSON payload.
    pub fn lookup(&self, name: &str) -> Result<serde_json::Value> {
        if let Some(rows) = self.torsion.primitives.get(name) {
            return Ok(serde_json::json!({"kind": "torsion", "name": name, "rows": rows}));
        }
        if let Some(t) = self.algtypes.types.iter().find(|t| t.name == name) {
            return Ok(serde_json::json!({
                "kind": "algtype", "name": name, "rows": t.matrix,
                "r": t.r, "order": t.order, "provenance": t.provenance,
            }));
        }
        if let Some(g) = self.grams.grams.iter().find(|g| g.name == name) {
            let gram = self.gram(name)?;
            return Ok(serde_json::json!({
                "kind": "gram", "name": name, "provenance": g.provenance,
                "member_of": g.member_of, "value": gram.to_json(),
            }));
        }
        if let Some(s) = self.splits.splits.iter().find(|s| s.name == name || s.name == name.trim_end_matches("_split")) {
            return Ok(serde_json::json!({
                "kind": "split", "name": s.name, "p": s.p, "provenance": s.provenance,
            }));
        }
        // composite names resolve to matrices
        if let Ok(m) = self.matrix(name) {
            return Ok(serde_json::json!({"kind": "matrix", "name": name, "value": format!("{m}")}));
        }
        Err(Error::NotFound(name.to_string()))
    }
}

fn int_mat(rows: &[Vec<i64>]) -> IntMat {
    IntMat::from_fn(rows.len(), |i, j| rows[i][j].into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::finite_order;

    #[test]
    fn algtype_entries_exact_r() {
        // FF^∨ equals the claimed R, exactly, for every indecomposable entry
        let cat = Catalog::load_embedded().unwrap();
        for entry in &cat.algtypes.types {
            let f = cat.matrix(&entry.name).unwrap();
            let r_claim = cat.matrix(&entry.r).unwrap();
            assert_eq!(f.ffdual().unwrap(), r_claim, "R mismatch for {}", entry.name);
            let t = cat.alg_type(&entry.name).unwrap();
            assert_eq!(t.order(), entry.order, "order mismatch for {}", entry.name);
        }
    }

    #[test]
    fn census_cells_verify() {
        let cat = Catalog::load_embedded().unwrap();
        for cell in &cat.torsion.cells {
            let report = census_distinct(&cat, cell.n, cell.d).unwrap();
            let fails: Vec<_> = report
                .rows
                .iter()
                .filter(|r| r.status.is_fail())
                .map(|r| format!("{}: {:?}", r.label, r.status))
                .collect();
            assert!(fails.is_empty(), "census ({},{}): {:?}", cell.n, cell.d, fails);
            assert_eq!(report.found, report.expected, "count ({},{})", cell.n, cell.d);
        }
    }

    #[test]
    fn order_two_count_formula() {
        // [n²/4] + n classes of order 2 for n ≤ 4
        let cat = Catalog::load_embedded().unwrap();
        for n in 1..=4usize {
            let cell = cat.torsion.cells.iter().find(|c| c.n == n && c.d == 2).unwrap();
            assert_eq!(cell.count, n * n / 4 + n);
        }
    }

    #[test]
    fn primitive_orders() {
        let cat = Catalog::load_embedded().unwrap();
        let expect = [
            ("X_3", 4), ("X_4", 8), ("Y_4", 12),
            ("Z_4", 4), ("Z_4p", 4), ("Z_4pp", 4),
            ("T_4", 6), ("T_4p", 6), ("T_4pp", 6),
            ("X_5", 8), ("X_6", 8), ("Y_6", 8), ("Z_6", 8), ("Z_6p", 8), ("Z_6pp", 8),
            ("X_7", 8), ("Y_7", 8), ("Z_7", 8), ("Z_7p", 8), ("Z_7pp", 8),
        ];
        for (name, d) in expect {
            let m = cat.matrix(name).unwrap();
            assert_eq!(finite_order(&m).unwrap(), Some(d), "{name}");
        }
    }
}
