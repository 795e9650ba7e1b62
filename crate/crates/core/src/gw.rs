//! One-point genus-zero Gromov–Witten invariants `GW^{X,h+α}_{0,1}(pt)` and
//! the open invariants `c_{β₀+α}` they determine.
//!
//! Values come from a built-in rule for `F₂` or from a user table. A class
//! with no known value is an error unless zero-filling was requested
//! explicitly; absence of data is never read as vanishing.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bundle;
use crate::error::{Error, Result};
use crate::fan::{standard, Fan, HomologyClass};
use crate::kahler::parse_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `c_{β₀} = 1`, the basic disk count.
    BasicDisk,
    /// Built-in `F₂` rule.
    Builtin,
    /// Loaded from a table.
    Table,
    /// Unknown, filled with zero on request.
    AssumedZero,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::BasicDisk => "basic_disk",
            Provenance::Builtin => "builtin",
            Provenance::Table => "table",
            Provenance::AssumedZero => "assumed_zero",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwValue {
    pub value: BigRational,
    pub provenance: Provenance,
}

/// `GW^{F₂, h+kα}_{0,1}(pt)`: 1 for `k ∈ {0, 1}`, 0 otherwise.
pub fn f2_builtin(k: u64) -> BigRational {
    if k <= 1 {
        BigRational::one()
    } else {
        BigRational::zero()
    }
}

/// On-disk form of a table; classes in `entries` are coordinates over
/// `basis`, whose members are given in ray coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GwTableDocument {
    pub fan_fingerprint: String,
    pub basis: Vec<Vec<i64>>,
    pub entries: Vec<GwTableEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GwTableEntry {
    pub class: Vec<i64>,
    pub value: String,
}

/// A validated table bound to one fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GwTable {
    fingerprint: String,
    entries: BTreeMap<HomologyClass, BigRational>,
}

impl GwTable {
    pub fn from_document(doc: &GwTableDocument, fan: &Fan) -> Result<Self> {
        let expected = fan.fingerprint();
        if doc.fan_fingerprint != expected {
            return Err(Error::FingerprintMismatch {
                expected,
                found: doc.fan_fingerprint.clone(),
            });
        }
        let d = fan.num_rays();
        for b in &doc.basis {
            if b.len() != d {
                return Err(Error::SchemaError(format!(
                    "basis class {b:?} should have {d} coordinates"
                )));
            }
        }
        let mut entries = BTreeMap::new();
        for e in &doc.entries {
            if e.class.len() != doc.basis.len() {
                return Err(Error::SchemaError(format!(
                    "class {:?} should have {} coordinates",
                    e.class,
                    doc.basis.len()
                )));
            }
            let mut coords = vec![0i64; d];
            for (c, b) in e.class.iter().zip(&doc.basis) {
                for (x, bi) in coords.iter_mut().zip(b) {
                    *x += c * bi;
                }
            }
            let class = HomologyClass::new(coords);
            fan.check_class(&class)
                .map_err(|_| Error::SchemaError(format!("{class} is not a curve class")))?;
            if class.chern_degree() != 0 {
                return Err(Error::BadChernDegree {
                    class: e.class.clone(),
                    degree: class.chern_degree(),
                });
            }
            let value = parse_rational(&e.value)
                .ok_or_else(|| Error::SchemaError(format!("bad rational `{}`", e.value)))?;
            if entries.insert(class.clone(), value).is_some() {
                return Err(Error::SchemaError(format!("class {class} listed twice")));
            }
        }
        Ok(Self {
            fingerprint: expected,
            entries,
        })
    }

    pub fn fingerprint(&self) -> &str {
        &self.fingerprint
    }

    /// Value keyed by the class `α` (ray coordinates).
    pub fn get(&self, alpha: &HomologyClass) -> Option<&BigRational> {
        self.entries.get(alpha)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Reads and validates a table against `fan`.
pub fn load_table(path: &Path, fan: &Fan) -> Result<GwTable> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::SchemaError(format!("{}: {e}", path.display())))?;
    let doc: GwTableDocument =
        serde_json::from_str(&text).map_err(|e| Error::SchemaError(e.to_string()))?;
    GwTable::from_document(&doc, fan)
}

/// Source of closed invariants: built-in rule, then table, then (only if
/// enabled) zero.
#[derive(Clone, Debug, Default)]
pub struct GwProvider {
    table: Option<GwTable>,
    assume_zero: bool,
}

impl GwProvider {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_table(mut self, table: GwTable) -> Self {
        self.table = Some(table);
        self
    }

    pub fn assume_zero(mut self, yes: bool) -> Self {
        self.assume_zero = yes;
        self
    }

    pub fn table(&self) -> Option<&GwTable> {
        self.table.as_ref()
    }

    /// `GW^{X,h+α}_{0,1}(pt)` for `c₁(α) = 0`.
    pub fn gw_one_point(&self, fan: &Fan, alpha: &HomologyClass) -> Result<GwValue> {
        fan.check_class(alpha)?;
        if alpha.chern_degree() != 0 {
            return Err(Error::BadChernDegree {
                class: alpha.coords().to_vec(),
                degree: alpha.chern_degree(),
            });
        }
        let builtin = f2_multiple(fan, alpha)?.map(f2_builtin);
        let tabled = self
            .table
            .as_ref()
            .filter(|t| t.fingerprint() == fan.fingerprint())
            .and_then(|t| t.get(alpha));
        match (builtin, tabled) {
            (Some(b), Some(t)) if &b != t => Err(Error::InconsistentTable {
                class: alpha.coords().to_vec(),
            }),
            (Some(b), _) => Ok(GwValue {
                value: b,
                provenance: Provenance::Builtin,
            }),
            (None, Some(t)) => Ok(GwValue {
                value: t.clone(),
                provenance: Provenance::Table,
            }),
            (None, None) if self.assume_zero => Ok(GwValue {
                value: BigRational::zero(),
                provenance: Provenance::AssumedZero,
            }),
            (None, None) => Err(Error::UnknownInvariant {
                class: alpha.coords().to_vec(),
            }),
        }
    }

    /// `c_{β₀+α}`, which equals `GW^{X,h+α}_{0,1}(pt)` for bundle fans; the
    /// basic disk `α = 0` counts 1.
    pub fn open_invariant(&self, fan: &Fan, alpha: &HomologyClass) -> Result<GwValue> {
        bundle::recognize_bundle(fan).ok_or(Error::NotBundle)?;
        fan.check_class(alpha)?;
        if alpha.is_zero() {
            return Ok(GwValue {
                value: BigRational::one(),
                provenance: Provenance::BasicDisk,
            });
        }
        self.gw_one_point(fan, alpha)
    }
}

/// If `fan` is `F₂` (in any lattice convention) and `α = k·α₀` for the
/// degree-zero primitive class `α₀`, returns `k`.
fn f2_multiple(fan: &Fan, alpha: &HomologyClass) -> Result<Option<u64>> {
    if fan.dim() != 2 || fan.num_rays() != 4 {
        return Ok(None);
    }
    if fan.isomorphism_to(&standard::f2_reference())?.is_none() {
        return Ok(None);
    }
    let base = fan
        .primitive_relations()?
        .into_iter()
        .find(|r| r.degree == 0)
        .expect("F2 has a degree-zero primitive relation")
        .class;
    let (i, &b) = base
        .coords()
        .iter()
        .enumerate()
        .find(|(_, &b)| b != 0)
        .expect("nonzero class");
    let a = alpha.coords()[i];
    if a % b != 0 {
        return Ok(None);
    }
    let k = a / b;
    Ok((k >= 0 && base.scaled(k) == *alpha).then_some(k as u64))
}
