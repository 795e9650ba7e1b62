//! The projective bundle `X = P(K_Y ⊕ O_Y)` over a toric Fano manifold `Y`.
//!
//! With `w₁..w_m` the rays of `Y`, the rays of `X` are ordered
//! `v₀ = eₙ, vᵢ = wᵢ + eₙ, v_{m+1} = −eₙ`, and every maximal cone of `Y` lifts
//! to two maximal cones of `X`, one through `v₀` and one through `v_{m+1}`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::fan::{Fan, HomologyClass, Positivity};
use crate::lattice::{self, big_vec, rational, IntMatrix};

/// Builds the fan of `P(K_Y ⊕ O_Y)` from the fan of a Fano `Y`.
pub fn projectivize_canonical(base: &Fan) -> Result<Fan> {
    if base.classify_positivity()? != Positivity::Fano {
        return Err(Error::NotFano);
    }
    let n = base.dim() + 1;
    let m = base.num_rays();
    let mut rays = Vec::with_capacity(m + 2);
    let mut top = vec![0i64; n];
    top[n - 1] = 1;
    rays.push(top.clone());
    for w in base.rays() {
        let mut v = w.clone();
        v.push(1);
        rays.push(v);
    }
    rays.push(top.iter().map(|x| -x).collect());
    let mut cones = Vec::with_capacity(2 * base.maximal_cones().len());
    for c in base.maximal_cones() {
        let lifted: Vec<usize> = c.iter().map(|&i| i + 1).collect();
        for apex in [0, m + 1] {
            let mut cone = lifted.clone();
            cone.push(apex);
            cones.push(cone);
        }
    }
    Fan::new(n, rays, Some(cones))
}

/// How a fan decomposes as `P(K_Y ⊕ O_Y)`.
#[derive(Clone, Debug)]
pub struct BundleStructure {
    /// The base `Y`, with rays in the order of `v₁..v_m`.
    pub base: Fan,
    /// Unimodular `T` with `T v₀ = eₙ` and `T vᵢ = (wᵢ, 1)`.
    pub transform: IntMatrix,
}

impl BundleStructure {
    /// Index of `v_{m+1}`.
    pub fn last_index(&self) -> usize {
        self.base.num_rays() + 1
    }
}

/// Recognises a fan of the form `P(K_Y ⊕ O_Y)` up to a lattice automorphism,
/// given the ray ordering `(v₀, v₁..v_m, v_{m+1})`. The base need not be Fano.
pub fn recognize_bundle(fan: &Fan) -> Option<BundleStructure> {
    let n = fan.dim();
    let d = fan.num_rays();
    if n < 2 || d < n + 2 {
        return None;
    }
    let rays = fan.rays();
    let (v0, vlast) = (&rays[0], &rays[d - 1]);
    if v0.iter().zip(vlast).any(|(a, b)| a + b != 0) {
        return None;
    }
    // height functional φ with φ(v₀) = 1 = φ(vᵢ) for the middle rays
    let columns: Vec<Vec<BigRational>> = (0..n)
        .map(|j| rays[..d - 1].iter().map(|v| rational(v[j])).collect())
        .collect();
    let ones = vec![BigRational::one(); d - 1];
    let phi = lattice::solve_columns(&columns, &ones).ok()??;
    if phi.iter().any(|x| !x.is_integer()) {
        return None;
    }
    let phi: Vec<BigInt> = phi.iter().map(|x| x.to_integer()).collect();
    let mut rows =
        lattice::kernel_basis(&IntMatrix::from_rows(n, std::slice::from_ref(v0))).ok()?;
    rows.push(phi);
    let transform = IntMatrix::from_rows(n, &rows);
    if !transform.determinant().abs().is_one() {
        return None;
    }
    let mut base_rays = Vec::with_capacity(d - 2);
    for v in &rays[1..d - 1] {
        let img = lattice::to_i64_vec(&transform.mul_vec(&big_vec(v))).ok()?;
        debug_assert_eq!(img[n - 1], 1);
        base_rays.push(img[..n - 1].to_vec());
    }
    let base_cones: Vec<Vec<usize>> = fan
        .maximal_cones()
        .iter()
        .filter(|c| c[0] == 0)
        .map(|c| c[1..].iter().map(|&i| i - 1).collect())
        .collect();
    let base = Fan::new(n - 1, base_rays, Some(base_cones)).ok()?;
    let expected: BTreeSet<Vec<usize>> = base
        .maximal_cones()
        .iter()
        .flat_map(|c| {
            let lifted: Vec<usize> = c.iter().map(|&i| i + 1).collect();
            [0, d - 1].map(|apex| {
                let mut cone = lifted.clone();
                cone.push(apex);
                cone.sort();
                cone
            })
        })
        .collect();
    let actual: BTreeSet<Vec<usize>> = fan.maximal_cones().iter().cloned().collect();
    (expected == actual).then_some(BundleStructure { base, transform })
}

/// The fiber class `h`, the class of `v₀ + v_{m+1} = 0`.
pub fn fiber_class(fan: &Fan) -> Result<HomologyClass> {
    recognize_bundle(fan).ok_or(Error::NotBundle)?;
    let d = fan.num_rays();
    let mut coords = vec![0; d];
    coords[0] = 1;
    coords[d - 1] = 1;
    Ok(HomologyClass::new(coords))
}

/// Pushes a class of `Y` to `X` along the zero section:
/// `γ ↦ (−Σγᵢ, γ₁..γ_m, 0)`.
pub fn push_h2(base: &Fan, class: &HomologyClass) -> Result<HomologyClass> {
    base.check_class(class)?;
    let mut coords = Vec::with_capacity(class.len() + 2);
    coords.push(-class.chern_degree());
    coords.extend_from_slice(class.coords());
    coords.push(0);
    Ok(HomologyClass::new(coords))
}

/// The lifts of the base's primitive-relation classes followed by `h`.
pub fn default_q_basis(fan: &Fan) -> Result<Vec<HomologyClass>> {
    let bundle = recognize_bundle(fan).ok_or(Error::NotBundle)?;
    let mut basis = bundle
        .base
        .effective_generators()?
        .iter()
        .map(|g| push_h2(&bundle.base, g))
        .collect::<Result<Vec<_>>>()?;
    basis.push(fiber_class(fan)?);
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::standard::*;

    fn hc(v: &[i64]) -> HomologyClass {
        HomologyClass::new(v.to_vec())
    }

    #[test]
    fn bundle_over_p1_is_f2() {
        let x = projectivize_canonical(&projective_line()).unwrap();
        assert_eq!(
            x.rays(),
            &[vec![0, 1], vec![1, 1], vec![-1, 1], vec![0, -1]]
        );
        assert_eq!(x.maximal_cones().len(), 4);
        let t = x.isomorphism_to(&f2_reference()).unwrap().unwrap();
        assert_eq!(t.to_i64_rows().unwrap(), vec![vec![1, 0], vec![1, -1]]);
    }

    #[test]
    fn bundle_over_p2() {
        let x = projectivize_canonical(&projective_plane()).unwrap();
        assert_eq!(
            x.rays(),
            &[
                vec![0, 0, 1],
                vec![1, 0, 1],
                vec![0, 1, 1],
                vec![-1, -1, 1],
                vec![0, 0, -1]
            ]
        );
        assert_eq!(x.maximal_cones().len(), 6);
        assert_eq!(
            x.classify_positivity().unwrap(),
            Positivity::SemiFanoNotFano
        );
    }

    #[test]
    fn non_fano_base_is_rejected() {
        assert_eq!(
            projectivize_canonical(&hirzebruch(3)).unwrap_err(),
            Error::NotFano
        );
        assert_eq!(
            projectivize_canonical(&hirzebruch(2)).unwrap_err(),
            Error::NotFano
        );
    }

    #[test]
    fn fiber_classes() {
        let x1 = projectivize_canonical(&projective_line()).unwrap();
        assert_eq!(fiber_class(&x1).unwrap(), hc(&[1, 0, 0, 1]));
        let x2 = projectivize_canonical(&projective_plane()).unwrap();
        let h = fiber_class(&x2).unwrap();
        assert_eq!(h, hc(&[1, 0, 0, 0, 1]));
        assert_eq!(h.chern_degree(), 2);
        assert_eq!(fiber_class(&projective_plane()), Err(Error::NotBundle));
    }

    #[test]
    fn pushforward_examples() {
        let p1 = projective_line();
        assert_eq!(push_h2(&p1, &hc(&[1, 1])).unwrap(), hc(&[-2, 1, 1, 0]));
        assert_eq!(push_h2(&p1, &hc(&[0, 0])).unwrap(), hc(&[0, 0, 0, 0]));
        let p2 = projective_plane();
        let lift = push_h2(&p2, &hc(&[1, 1, 1])).unwrap();
        assert_eq!(lift, hc(&[-3, 1, 1, 1, 0]));
        let x = projectivize_canonical(&p2).unwrap();
        assert!(x.is_class(&lift));
        assert_eq!(lift.chern_degree(), 0);
        assert!(push_h2(&p2, &hc(&[1, 0, 0])).is_err());
    }

    #[test]
    fn recognizes_the_reference_f2_convention() {
        let b = recognize_bundle(&f2_reference()).unwrap();
        assert_eq!(b.base.rays(), &[vec![1], vec![-1]]);
        assert_eq!(
            default_q_basis(&f2_reference()).unwrap(),
            vec![hc(&[-2, 1, 1, 0]), hc(&[1, 0, 0, 1])]
        );
        assert!(recognize_bundle(&hirzebruch(1)).is_none());
        assert!(recognize_bundle(&p1_times_p1()).is_none());
    }
}
