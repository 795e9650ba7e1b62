//! Mirror superpotentials.
//!
//! For Fano fans the potential is the sum of the basic disk monomials
//! `Z_{βᵢ} = e^{λᵢ} z^{vᵢ}`. For `X = P(K_Y ⊕ O_Y)` the only other Maslov-two
//! contributions are `β₀ + α` with `c₁(α) = 0`, which fold into a factor
//! multiplying `Z_{β₀}`:
//!
//! ```text
//! W = C·Z_{β₀} + Z_{β₁} + … + Z_{β_{m+1}},   C = 1 + Σ_{α≠0} GW^{X,h+α}_{0,1}(pt) q^α
//! ```
//!
//! The sum defining `C` is truncated at an explicit cutoff on the number of
//! effective generators in `α`.

use num_rational::BigRational;

use crate::bundle;
use crate::error::{Error, Result};
use crate::fan::{Fan, HomologyClass, Positivity};
use crate::gw::{GwProvider, GwValue};
use crate::kahler::{KahlerData, RelativeClass};
use crate::laurent::{Coefficient, LaurentPoly};

/// `Z_{βᵢ}` as a one-term polynomial.
pub fn basic_monomial(k: &KahlerData, i: usize) -> Result<LaurentPoly> {
    let q = k.lambda_monomial(i)?;
    Ok(LaurentPoly::monomial(
        k.fan().rays()[i].clone(),
        Coefficient::monomial(q, BigRational::from_integer(1.into())),
    ))
}

fn sum_of_basic(k: &KahlerData, indices: impl Iterator<Item = usize>) -> Result<LaurentPoly> {
    let mut w = LaurentPoly::zero(k.fan().dim(), k.q_basis().len());
    for i in indices {
        w = &w + &basic_monomial(k, i)?;
    }
    Ok(w)
}

/// `W = Σᵢ e^{λᵢ} z^{vᵢ}` for a Fano fan.
pub fn hori_vafa(k: &KahlerData) -> Result<LaurentPoly> {
    if k.fan().classify_positivity()? != Positivity::Fano {
        return Err(Error::NotFano);
    }
    sum_of_basic(k, 0..k.fan().num_rays())
}

/// Nonzero effective classes `α` with `c₁(α) = 0` reachable within the
/// cutoff, sorted.
pub fn degree_zero_classes(fan: &Fan, cutoff: usize) -> Result<Vec<HomologyClass>> {
    Ok(fan
        .effective_classes_up_to(cutoff)?
        .into_iter()
        .filter(|a| !a.is_zero() && a.chern_degree() == 0)
        .collect())
}

/// The classes that may carry a nonzero open invariant: `β₁..β_{m+1}` and
/// `β₀ + α` for effective `α` with `c₁(α) = 0` (including `α = 0`).
pub fn contributing_classes(fan: &Fan, cutoff: usize) -> Result<Vec<RelativeClass>> {
    bundle::recognize_bundle(fan).ok_or(Error::NotBundle)?;
    let d = fan.num_rays();
    let mut out: Vec<RelativeClass> = (1..d).map(|i| RelativeClass::basic(d, i)).collect();
    let beta0 = RelativeClass::basic(d, 0);
    out.push(beta0.clone());
    for alpha in degree_zero_classes(fan, cutoff)? {
        out.push(beta0.plus_sphere(&alpha));
    }
    debug_assert!(out.iter().all(|b| b.maslov_index() == 2));
    Ok(out)
}

/// One term of the correction factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectionTerm {
    pub class: HomologyClass,
    pub q_exponent: Vec<u32>,
    pub invariant: GwValue,
}

/// The truncated factor `C` with the invariants that went into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correction {
    pub cutoff: usize,
    pub factor: Coefficient,
    pub terms: Vec<CorrectionTerm>,
}

/// `C = 1 + Σ GW^{X,h+α}_{0,1}(pt) q^α` over nonzero effective `α` with
/// `c₁(α) = 0` within the cutoff.
pub fn correction_factor(k: &KahlerData, gw: &GwProvider, cutoff: usize) -> Result<Correction> {
    let fan = k.fan();
    bundle::recognize_bundle(fan).ok_or(Error::NotBundle)?;
    let nq = k.q_basis().len();
    let mut factor = Coefficient::one(nq);
    let mut terms = Vec::new();
    for alpha in degree_zero_classes(fan, cutoff)? {
        let invariant = gw.gw_one_point(fan, &alpha)?;
        let q_exponent = k.q_weight(&alpha)?;
        factor = &factor + &Coefficient::monomial(q_exponent.clone(), invariant.value.clone());
        terms.push(CorrectionTerm {
            class: alpha,
            q_exponent,
            invariant,
        });
    }
    Ok(Correction {
        cutoff,
        factor,
        terms,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrectedPotential {
    pub potential: LaurentPoly,
    pub correction: Correction,
}

/// `W = C·Z_{β₀} + Σ_{i≥1} Z_{βᵢ}` for `X = P(K_Y ⊕ O_Y)` over a Fano `Y`.
pub fn corrected_potential(
    k: &KahlerData,
    gw: &GwProvider,
    cutoff: usize,
) -> Result<CorrectedPotential> {
    let structure = bundle::recognize_bundle(k.fan()).ok_or(Error::NotBundle)?;
    if structure.base.classify_positivity()? != Positivity::Fano {
        return Err(Error::NotFano);
    }
    let correction = correction_factor(k, gw, cutoff)?;
    let z0 = &basic_monomial(k, 0)? * &correction.factor;
    let rest = sum_of_basic(k, 1..k.fan().num_rays())?;
    Ok(CorrectedPotential {
        potential: &z0 + &rest,
        correction,
    })
}
