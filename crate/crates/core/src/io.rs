//! JSON documents: fans, analysis reports and potentials.
//!
//! All output goes through [`to_canonical_json`], which sorts object keys, so
//! identical inputs give identical bytes.

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::bundle;
use crate::error::{Error, Result};
use crate::fan::{Fan, HomologyClass, Positivity, PrimitiveRelation};
use crate::gw::{GwProvider, Provenance};
use crate::kahler::{self, parse_rational, KahlerData, LinearForm, RelativeClass};
use crate::laurent::{Coefficient, LaurentPoly};
use crate::superpotential;

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is ordered, so a round trip through Value sorts keys
    let v = serde_json::to_value(value).map_err(|e| Error::SchemaError(e.to_string()))?;
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::SchemaError(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::SchemaError(e.to_string()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KahlerSection {
    pub parameters: Vec<String>,
    /// One linear form per ray, e.g. `"-t1 - 2*t2"`.
    pub lambdas: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanDocument {
    pub dimension: usize,
    pub rays: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximal_cones: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kahler: Option<KahlerSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_basis: Option<Vec<Vec<i64>>>,
}

impl FanDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_fan(&self) -> Result<Fan> {
        Fan::new(
            self.dimension,
            self.rays.clone(),
            self.maximal_cones.clone(),
        )
    }

    /// The document's Kähler data, falling back to the default q-basis and
    /// default support constants for whatever is missing.
    pub fn kahler_data(&self, fan: &Fan) -> Result<KahlerData> {
        let q_basis = match &self.q_basis {
            Some(b) => b.iter().cloned().map(HomologyClass::new).collect(),
            None => kahler::default_q_basis(fan)?,
        };
        match &self.kahler {
            None => KahlerData::standard(fan.clone(), q_basis),
            Some(k) => {
                let lambdas = k
                    .lambdas
                    .iter()
                    .map(|s| s.parse::<LinearForm>())
                    .collect::<Result<Vec<_>>>()?;
                KahlerData::new(fan.clone(), k.parameters.clone(), lambdas, q_basis)
            }
        }
    }

    pub fn from_fan(fan: &Fan, kahler: Option<&KahlerData>) -> Self {
        FanDocument {
            dimension: fan.dim(),
            rays: fan.rays().to_vec(),
            maximal_cones: Some(fan.maximal_cones().to_vec()),
            kahler: kahler.map(|k| KahlerSection {
                parameters: k.params().to_vec(),
                lambdas: k.lambdas().iter().map(ToString::to_string).collect(),
            }),
            q_basis: kahler.map(|k| k.q_basis().iter().map(|c| c.coords().to_vec()).collect()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationRecord {
    pub collection: Vec<usize>,
    pub focus: Vec<usize>,
    pub multiplicities: Vec<i64>,
    pub class: Vec<i64>,
    pub degree: i64,
}

impl From<&PrimitiveRelation> for RelationRecord {
    fn from(r: &PrimitiveRelation) -> Self {
        RelationRecord {
            collection: r.collection.clone(),
            focus: r.focus.clone(),
            multiplicities: r.multiplicities.clone(),
            class: r.class.coords().to_vec(),
            degree: r.degree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub valid: bool,
    pub dimension: usize,
    pub num_rays: usize,
    pub fingerprint: String,
    pub homology_basis: Vec<Vec<i64>>,
    pub primitive_collections: Vec<Vec<usize>>,
    pub primitive_relations: Vec<RelationRecord>,
    pub positivity: Positivity,
    pub effective_generators: Vec<Vec<i64>>,
    /// Rays of `Y` when the fan is `P(K_Y ⊕ O_Y)`.
    pub bundle_base: Option<Vec<Vec<i64>>>,
}

pub fn analyze(fan: &Fan) -> Result<AnalysisReport> {
    let coords = |v: Vec<HomologyClass>| v.into_iter().map(HomologyClass::into_coords).collect();
    let relations = fan.primitive_relations()?;
    Ok(AnalysisReport {
        valid: true,
        dimension: fan.dim(),
        num_rays: fan.num_rays(),
        fingerprint: fan.fingerprint(),
        homology_basis: coords(fan.homology_basis()?),
        primitive_collections: fan.primitive_collections(),
        primitive_relations: relations.iter().map(RelationRecord::from).collect(),
        positivity: fan.classify_positivity()?,
        effective_generators: coords(fan.effective_generators()?),
        bundle_base: bundle::recognize_bundle(fan).map(|b| b.base.rays().to_vec()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `Σ Z_{βᵢ}` for a Fano fan.
    HoriVafa,
    /// `C·Z_{β₀} + Σ Z_{βᵢ}` for `P(K_Y ⊕ O_Y)`.
    Corrected,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QTerm {
    pub q: Vec<u32>,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZTerm {
    pub z: Vec<i64>,
    pub coefficient: Vec<QTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GwRecord {
    pub class: Vec<i64>,
    pub q: Vec<u32>,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpenRecord {
    /// Relative class in basic-disk coordinates.
    pub class: Vec<i64>,
    pub value: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialDocument {
    pub dimension: usize,
    pub fan_fingerprint: String,
    pub branch: Branch,
    pub q_variables: Vec<String>,
    pub q_basis: Vec<Vec<i64>>,
    /// Area of each q-basis class over `2π`, as a linear form.
    pub q_areas: Vec<String>,
    /// Truncation of the correction sum; absent for the uncorrected branch.
    pub cutoff: Option<usize>,
    pub correction_factor: Option<Vec<QTerm>>,
    pub correction_text: Option<String>,
    pub gw_values: Vec<GwRecord>,
    pub open_invariants: Vec<OpenRecord>,
    pub terms: Vec<ZTerm>,
    pub text: String,
}

fn q_terms(c: &Coefficient) -> Vec<QTerm> {
    c.terms()
        .map(|(q, v)| QTerm {
            q: q.to_vec(),
            value: v.to_string(),
        })
        .collect()
}

fn from_q_terms(nq: usize, terms: &[QTerm]) -> Result<Coefficient> {
    let mut c = Coefficient::zero(nq);
    for t in terms {
        if t.q.len() != nq {
            return Err(Error::SchemaError(format!(
                "q-exponent {:?} should have {nq} entries",
                t.q
            )));
        }
        let v = parse_rational(&t.value)
            .ok_or_else(|| Error::SchemaError(format!("bad rational `{}`", t.value)))?;
        c = &c + &Coefficient::monomial(t.q.clone(), v);
    }
    Ok(c)
}

fn one_string() -> String {
    BigRational::from_integer(1.into()).to_string()
}

impl PotentialDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    /// Rebuilds `W` from `terms`.
    pub fn to_laurent(&self) -> Result<LaurentPoly> {
        let nq = self.q_variables.len();
        let mut w = LaurentPoly::zero(self.dimension, nq);
        for t in &self.terms {
            if t.z.len() != self.dimension {
                return Err(Error::SchemaError(format!(
                    "z-exponent {:?} should have {} entries",
                    t.z, self.dimension
                )));
            }
            w.add_term(t.z.clone(), from_q_terms(nq, &t.coefficient)?);
        }
        Ok(w)
    }
}

fn serialize_terms(w: &LaurentPoly) -> Vec<ZTerm> {
    w.terms()
        .map(|(z, c)| ZTerm {
            z: z.to_vec(),
            coefficient: q_terms(c),
        })
        .collect()
}

/// The potential of `k`'s fan: corrected for bundle fans, Hori–Vafa for Fano
/// fans, `NotFano` otherwise.
pub fn potential_document(
    k: &KahlerData,
    gw: &GwProvider,
    cutoff: usize,
) -> Result<PotentialDocument> {
    let fan = k.fan();
    let nq = k.q_basis().len();
    let mut doc = PotentialDocument {
        dimension: fan.dim(),
        fan_fingerprint: fan.fingerprint(),
        branch: Branch::HoriVafa,
        q_variables: (1..=nq).map(|j| format!("q{j}")).collect(),
        q_basis: k.q_basis().iter().map(|c| c.coords().to_vec()).collect(),
        q_areas: k
            .q_basis()
            .iter()
            .map(|c| k.sphere_area(c).to_string())
            .collect(),
        cutoff: None,
        correction_factor: None,
        correction_text: None,
        gw_values: vec![],
        open_invariants: vec![],
        terms: vec![],
        text: String::new(),
    };
    let w = if bundle::recognize_bundle(fan).is_some() {
        let corrected = superpotential::corrected_potential(k, gw, cutoff)?;
        let c = &corrected.correction;
        doc.branch = Branch::Corrected;
        doc.cutoff = Some(cutoff);
        doc.correction_factor = Some(q_terms(&c.factor));
        doc.correction_text = Some(c.factor.to_string());
        doc.gw_values = c
            .terms
            .iter()
            .map(|t| GwRecord {
                class: t.class.coords().to_vec(),
                q: t.q_exponent.clone(),
                value: t.invariant.value.to_string(),
                provenance: t.invariant.provenance,
            })
            .collect();
        let d = fan.num_rays();
        let mut open: Vec<OpenRecord> = (1..d)
            .map(|i| OpenRecord {
                class: RelativeClass::basic(d, i).coords().to_vec(),
                value: one_string(),
                provenance: Provenance::BasicDisk,
            })
            .collect();
        let beta0 = RelativeClass::basic(d, 0);
        open.push(OpenRecord {
            class: beta0.coords().to_vec(),
            value: one_string(),
            provenance: Provenance::BasicDisk,
        });
        for t in &c.terms {
            open.push(OpenRecord {
                class: beta0.plus_sphere(&t.class).coords().to_vec(),
                value: t.invariant.value.to_string(),
                provenance: t.invariant.provenance,
            });
        }
        doc.open_invariants = open;
        corrected.potential
    } else {
        superpotential::hori_vafa(k)?
    };
    doc.terms = serialize_terms(&w);
    doc.text = w.to_string();
    Ok(doc)
}
