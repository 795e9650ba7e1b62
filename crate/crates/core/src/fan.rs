//! Smooth complete fans and their primitive-relation combinatorics.
//!
//! Rays are indexed in input order. Curve classes are integer vectors in ray
//! coordinates: `a` is a class iff `Σ aᵢ vᵢ = 0`, its pairing with the toric
//! divisor `Dᵢ` is `aᵢ`, and its anticanonical degree is `Σ aᵢ`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::lattice::{self, cone_coefficients, rational, IntMatrix};

/// A curve class in ray coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HomologyClass(Vec<i64>);

impl HomologyClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(len: usize) -> Self {
        Self(vec![0; len])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<i64> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Anticanonical degree `c₁(β) = Σ aᵢ`.
    pub fn chern_degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// Indices `i` with `Dᵢ·β < 0`. Any irreducible curve in this class lies
    /// inside each of these divisors.
    pub fn forced_divisors(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a < 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self(self.0.iter().map(|&x| x * k).collect())
    }
}

impl Add for &HomologyClass {
    type Output = HomologyClass;
    fn add(self, rhs: &HomologyClass) -> HomologyClass {
        assert_eq!(self.len(), rhs.len());
        HomologyClass(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &HomologyClass {
    type Output = HomologyClass;
    fn sub(self, rhs: &HomologyClass) -> HomologyClass {
        self + &(-rhs)
    }
}

impl Neg for &HomologyClass {
    type Output = HomologyClass;
    fn neg(self) -> HomologyClass {
        HomologyClass(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

/// `Σ_{i∈P} vᵢ = Σ nⱼ v_{fⱼ}` for a primitive collection `P` with focus
/// generators `fⱼ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveRelation {
    pub collection: Vec<usize>,
    pub focus: Vec<usize>,
    pub multiplicities: Vec<i64>,
    pub class: HomologyClass,
    pub degree: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Positivity {
    Fano,
    SemiFanoNotFano,
    NotNef,
}

impl fmt::Display for Positivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Positivity::Fano => "Fano",
            Positivity::SemiFanoNotFano => "semi-Fano (not Fano)",
            Positivity::NotNef => "not nef",
        })
    }
}

/// A validated smooth complete fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
    faces: BTreeSet<Vec<usize>>,
}

impl Fan {
    /// Validates the candidate and builds the fan.
    ///
    /// Maximal cones may be omitted in dimension 1 and 2, where they are
    /// inferred from the angular order of the rays.
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Option<Vec<Vec<usize>>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::IncompleteFan("dimension must be positive".into()));
        }
        for r in &rays {
            if r.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: r.len(),
                });
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if !lattice::is_primitive(r).unwrap_or(false) {
                return Err(Error::NonPrimitiveRay { index: i });
            }
            if rays[..i].contains(r) {
                return Err(Error::DuplicateRay { index: i });
            }
        }
        if rays.len() <= dim {
            return Err(Error::IncompleteFan(format!(
                "{} rays cannot span a complete fan in dimension {dim}",
                rays.len()
            )));
        }
        let cones = match cones {
            Some(c) => c,
            None if dim == 1 => (0..rays.len()).map(|i| vec![i]).collect(),
            None if dim == 2 => infer_planar_cones(&rays)?,
            None => {
                return Err(Error::MalformedCone {
                    cone: 0,
                    reason: "maximal cones are required in dimension >= 3".into(),
                })
            }
        };
        let mut canon: Vec<Vec<usize>> = Vec::with_capacity(cones.len());
        for (ci, c) in cones.iter().enumerate() {
            let sorted: Vec<usize> = c.iter().copied().sorted().collect();
            if sorted.len() != dim {
                return Err(Error::MalformedCone {
                    cone: ci,
                    reason: format!("expected {dim} rays, found {}", sorted.len()),
                });
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::MalformedCone {
                    cone: ci,
                    reason: "repeated ray index".into(),
                });
            }
            if sorted.iter().any(|&i| i >= rays.len()) {
                return Err(Error::MalformedCone {
                    cone: ci,
                    reason: "ray index out of range".into(),
                });
            }
            let det = ray_det(&rays, &sorted, None);
            if !det.abs().is_one() {
                return Err(Error::NonUnimodularCone { cone: ci });
            }
            canon.push(sorted);
        }
        canon.sort();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedCone {
                cone: 0,
                reason: format!("cone {:?} listed twice", w[0]),
            });
        }
        if let Some(i) = (0..rays.len()).find(|i| !canon.iter().any(|c| c.contains(i))) {
            return Err(Error::UnusedRay { index: i });
        }
        check_facets(&rays, &canon)?;
        check_covering_degree(dim, &rays, &canon)?;

        let mut faces = BTreeSet::new();
        for c in &canon {
            for k in 0..=dim {
                for s in c.iter().copied().combinations(k) {
                    faces.insert(s);
                }
            }
        }
        Ok(Self {
            dim,
            rays,
            cones: canon,
            faces,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    /// Maximal cones, each sorted, in lexicographic order.
    pub fn maximal_cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Whether the (sorted) index set spans a cone of the fan.
    pub fn is_face(&self, indices: &[usize]) -> bool {
        self.faces.contains(indices)
    }

    /// All cones of the fan as sorted index sets, ordered by dimension and
    /// then lexicographically. Starts with the zero cone.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut f: Vec<Vec<usize>> = self.faces.iter().cloned().collect();
        f.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        f
    }

    /// The ray map `ℤᵈ → N` as an `n × d` matrix.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.rays)
    }

    pub fn is_class(&self, class: &HomologyClass) -> bool {
        class.len() == self.num_rays()
            && (0..self.dim).all(|j| {
                class
                    .coords()
                    .iter()
                    .zip(&self.rays)
                    .map(|(a, v)| a * v[j])
                    .sum::<i64>()
                    == 0
            })
    }

    pub fn check_class(&self, class: &HomologyClass) -> Result<()> {
        if self.is_class(class) {
            Ok(())
        } else {
            Err(Error::InvalidClass {
                class: class.coords().to_vec(),
            })
        }
    }

    /// A ℤ-basis of `H₂(X, ℤ)` in ray coordinates.
    pub fn homology_basis(&self) -> Result<Vec<HomologyClass>> {
        lattice::kernel_basis(&self.ray_matrix())?
            .iter()
            .map(|v| lattice::to_i64_vec(v).map(HomologyClass))
            .collect()
    }

    /// Minimal non-faces, found breadth-first by size. Only extensions of
    /// faces are ever generated, so supersets of a known non-face are never
    /// visited.
    pub fn primitive_collections(&self) -> Vec<Vec<usize>> {
        let d = self.num_rays();
        let mut found = Vec::new();
        let mut layer: Vec<Vec<usize>> = vec![vec![]];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for face in &layer {
                let start = face.last().map_or(0, |&m| m + 1);
                for j in start..d {
                    let mut cand = face.clone();
                    cand.push(j);
                    let boundary_ok = (0..cand.len()).all(|skip| {
                        let sub: Vec<usize> = cand
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &x)| x)
                            .collect();
                        self.faces.contains(&sub)
                    });
                    if !boundary_ok {
                        continue;
                    }
                    if self.faces.contains(&cand) {
                        next.push(cand);
                    } else {
                        found.push(cand);
                    }
                }
            }
            layer = next;
        }
        found.sort();
        found
    }

    fn is_primitive_collection(&self, c: &[usize]) -> bool {
        !c.is_empty()
            && c.windows(2).all(|w| w[0] < w[1])
            && c.iter().all(|&i| i < self.num_rays())
            && !self.faces.contains(c)
            && (0..c.len()).all(|skip| {
                let sub: Vec<usize> = c
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, &x)| x)
                    .collect();
                self.faces.contains(&sub)
            })
    }

    /// The primitive relation of a primitive collection: the cone of smallest
    /// dimension containing the generator sum is found by testing cones in
    /// order of increasing dimension.
    pub fn primitive_relation(&self, collection: &[usize]) -> Result<PrimitiveRelation> {
        let collection: Vec<usize> = collection.iter().copied().sorted().collect();
        if !self.is_primitive_collection(&collection) {
            return Err(Error::NotPrimitiveCollection { collection });
        }
        let sum: Vec<BigRational> = (0..self.dim)
            .map(|j| rational(collection.iter().map(|&i| self.rays[i][j]).sum()))
            .collect();
        let not_found = || Error::FocusNotFound {
            collection: collection.clone(),
        };
        for face in self.faces() {
            let gens: Vec<Vec<i64>> = face.iter().map(|&i| self.rays[i].clone()).collect();
            let Some(coeffs) = cone_coefficients(&sum, &gens)? else {
                continue;
            };
            if coeffs.iter().any(Zero::is_zero) {
                continue;
            }
            if face.iter().any(|i| collection.contains(i)) {
                return Err(not_found());
            }
            let mut multiplicities = Vec::with_capacity(coeffs.len());
            for c in coeffs {
                if !c.is_integer() {
                    return Err(not_found());
                }
                multiplicities.push(c.to_integer().to_i64().ok_or_else(not_found)?);
            }
            let mut coords = vec![0i64; self.num_rays()];
            for &i in &collection {
                coords[i] = 1;
            }
            for (&i, &n) in face.iter().zip(&multiplicities) {
                coords[i] = -n;
            }
            let class = HomologyClass(coords);
            debug_assert!(self.is_class(&class));
            let degree = class.chern_degree();
            return Ok(PrimitiveRelation {
                collection,
                focus: face,
                multiplicities,
                class,
                degree,
            });
        }
        Err(not_found())
    }

    pub fn primitive_relations(&self) -> Result<Vec<PrimitiveRelation>> {
        self.primitive_collections()
            .iter()
            .map(|c| self.primitive_relation(c))
            .collect()
    }

    /// Fano iff every primitive relation has positive degree, nef iff all
    /// degrees are nonnegative.
    pub fn classify_positivity(&self) -> Result<Positivity> {
        let degrees: Vec<i64> = self
            .primitive_relations()?
            .iter()
            .map(|r| r.degree)
            .collect();
        Ok(if degrees.iter().all(|&d| d > 0) {
            Positivity::Fano
        } else if degrees.iter().all(|&d| d >= 0) {
            Positivity::SemiFanoNotFano
        } else {
            Positivity::NotNef
        })
    }

    /// Distinct primitive-relation classes, sorted. These generate the
    /// effective cone.
    pub fn effective_generators(&self) -> Result<Vec<HomologyClass>> {
        let set: BTreeSet<HomologyClass> = self
            .primitive_relations()?
            .into_iter()
            .map(|r| r.class)
            .collect();
        Ok(set.into_iter().collect())
    }

    /// All `Σ m_r g_r` over effective generators `g_r` with `m_r ≥ 0` and
    /// `Σ m_r ≤ cutoff`.
    pub fn effective_classes_up_to(&self, cutoff: usize) -> Result<BTreeSet<HomologyClass>> {
        let gens = self.effective_generators()?;
        let mut all = BTreeSet::new();
        let mut frontier = BTreeSet::new();
        frontier.insert(HomologyClass::zero(self.num_rays()));
        all.extend(frontier.iter().cloned());
        for _ in 0..cutoff {
            let mut next = BTreeSet::new();
            for c in &frontier {
                for g in &gens {
                    let s = c + g;
                    if !all.contains(&s) {
                        next.insert(s);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            all.extend(next.iter().cloned());
            frontier = next;
        }
        Ok(all)
    }

    /// SHA-256 over the fan with rays sorted lexicographically and cones
    /// relabelled accordingly; independent of the input ray order.
    pub fn fingerprint(&self) -> String {
        let order: Vec<usize> = (0..self.num_rays())
            .sorted_by(|&a, &b| self.rays[a].cmp(&self.rays[b]))
            .collect();
        let mut new_index = vec![0; self.num_rays()];
        for (k, &i) in order.iter().enumerate() {
            new_index[i] = k;
        }
        let cones: BTreeSet<Vec<usize>> = self
            .cones
            .iter()
            .map(|c| c.iter().map(|&i| new_index[i]).sorted().collect())
            .collect();
        let canonical = format!(
            "{}|{}|{}",
            self.dim,
            order
                .iter()
                .map(|&i| self.rays[i].iter().join(","))
                .join(";"),
            cones.iter().map(|c| c.iter().join(",")).join(";")
        );
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    /// A lattice automorphism carrying this fan onto `other`, if any.
    pub fn isomorphism_to(&self, other: &Fan) -> Result<Option<IntMatrix>> {
        lattice::unimodular_map_search(&self.rays, &self.cones, &other.rays, &other.cones)
    }
}

fn ray_det(rays: &[Vec<i64>], cone: &[usize], extra: Option<usize>) -> BigInt {
    let cols: Vec<Vec<i64>> = cone
        .iter()
        .chain(extra.iter())
        .map(|&i| rays[i].clone())
        .collect();
    IntMatrix::from_columns(rays[0].len(), &cols).determinant()
}

/// Exact counterclockwise comparison of nonzero plane vectors, starting at
/// the positive x-axis.
fn angular_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let half = |v: &[i64]| u8::from(!(v[1] > 0 || (v[1] == 0 && v[0] > 0)));
    half(a)
        .cmp(&half(b))
        .then_with(|| 0.cmp(&(a[0] * b[1] - a[1] * b[0])))
}

fn infer_planar_cones(rays: &[Vec<i64>]) -> Result<Vec<Vec<usize>>> {
    let order: Vec<usize> = (0..rays.len())
        .sorted_by(|&a, &b| angular_cmp(&rays[a], &rays[b]))
        .collect();
    let mut cones = Vec::with_capacity(order.len());
    for k in 0..order.len() {
        let (a, b) = (order[k], order[(k + 1) % order.len()]);
        let cross = rays[a][0] * rays[b][1] - rays[a][1] * rays[b][0];
        if cross <= 0 {
            return Err(Error::IncompleteFan(format!(
                "angular gap between rays {a} and {b} is at least pi"
            )));
        }
        cones.push(vec![a, b]);
    }
    Ok(cones)
}

/// Every facet must lie in exactly two maximal cones, and those two cones
/// must sit on opposite sides of it.
fn check_facets(rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<()> {
    let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for c in cones {
        for &opp in c {
            let facet: Vec<usize> = c.iter().copied().filter(|&i| i != opp).collect();
            facets.entry(facet).or_default().push(opp);
        }
    }
    for (facet, opposite) in &facets {
        if opposite.len() != 2 {
            return Err(Error::IncompleteFan(format!(
                "facet {facet:?} lies in {} maximal cones",
                opposite.len()
            )));
        }
        let sa = ray_det(rays, facet, Some(opposite[0])).signum();
        let sb = ray_det(rays, facet, Some(opposite[1])).signum();
        if sa == sb {
            return Err(Error::BadFaceIntersection(format!(
                "cones through facet {facet:?} overlap"
            )));
        }
    }
    Ok(())
}

/// Counts maximal cones containing a generic point; a fan covers space
/// exactly once.
fn check_covering_degree(dim: usize, rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<()> {
    let cols: Vec<Vec<Vec<BigRational>>> = cones
        .iter()
        .map(|c| {
            c.iter()
                .map(|&i| rays[i].iter().map(|&x| rational(x)).collect())
                .collect()
        })
        .collect();
    // points on the moment curve (1, s, s², ...) with assorted signs; only
    // finitely many s put the point on a cone wall
    for k in 1..200i64 {
        let s = BigRational::new(BigInt::from(k * 7 + 3), BigInt::from(k * 5 + 11));
        let s = if k % 2 == 0 { -s } else { s };
        let mut point = Vec::with_capacity(dim);
        let mut p = BigRational::from_integer(BigInt::from(if k % 3 == 0 { -1 } else { 1 }));
        for _ in 0..dim {
            point.push(p.clone());
            p *= &s;
        }
        let mut generic = true;
        let mut containing = 0;
        for c in &cols {
            let coeffs = lattice::solve_columns(c, &point)?
                .expect("unimodular cone generators span the space");
            if coeffs.iter().any(Zero::is_zero) {
                generic = false;
                break;
            }
            if coeffs.iter().all(Signed::is_positive) {
                containing += 1;
            }
        }
        if !generic {
            continue;
        }
        return match containing {
            1 => Ok(()),
            0 => Err(Error::IncompleteFan("cones leave a gap".into())),
            n => Err(Error::BadFaceIntersection(format!(
                "cones cover a generic point {n} times"
            ))),
        };
    }
    Err(Error::BadFaceIntersection(
        "could not find a generic test point".into(),
    ))
}

/// Named fans used in tests, examples and the built-in invariant rules.
pub mod standard {
    use super::Fan;

    pub fn projective_line() -> Fan {
        Fan::new(1, vec![vec![1], vec![-1]], None).expect("P1")
    }

    pub fn projective_plane() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            Some(vec![vec![0, 1], vec![1, 2], vec![2, 0]]),
        )
        .expect("P2")
    }

    pub fn p1_times_p1() -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![-1, 0], vec![0, 1], vec![0, -1]],
            None,
        )
        .expect("P1xP1")
    }

    /// Hirzebruch surface `F_a` with rays (1,0), (0,1), (-1,-a), (0,-1).
    pub fn hirzebruch(a: i64) -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -a], vec![0, -1]],
            None,
        )
        .expect("Hirzebruch surface")
    }

    /// `F_2` with rays v0=(0,-1), v1=(1,0), v2=(-1,-2), v3=(0,1), the ordering
    /// in which v0 and v3 are the two sections' normal directions.
    pub fn f2_reference() -> Fan {
        Fan::new(
            2,
            vec![vec![0, -1], vec![1, 0], vec![-1, -2], vec![0, 1]],
            None,
        )
        .expect("F2")
    }
}

#[cfg(test)]
mod tests {
    use super::standard::*;
    use super::*;

    fn hc(v: &[i64]) -> HomologyClass {
        HomologyClass::new(v.to_vec())
    }

    #[test]
    fn validates_p2() {
        let p2 = projective_plane();
        assert_eq!(p2.maximal_cones(), &[vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn infers_f2_cones_from_angles() {
        // {v1v3, v3v2, v2v0, v0v1}
        let f2 = f2_reference();
        assert_eq!(
            f2.maximal_cones(),
            &[vec![0, 1], vec![0, 2], vec![1, 3], vec![2, 3]]
        );
    }

    #[test]
    fn rejects_bad_fans() {
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0], vec![-1, 0]], None),
            Err(Error::IncompleteFan(_))
        ));
        assert!(matches!(
            Fan::new(2, vec![vec![2, 0], vec![0, 1], vec![-1, -1]], None),
            Err(Error::NonPrimitiveRay { index: 0 })
        ));
        // (1,0),(1,2) spans a cone of index 2
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0], vec![1, 2], vec![-1, -1]], None),
            Err(Error::NonUnimodularCone { .. })
        ));
        assert!(matches!(
            Fan::new(
                2,
                vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
                Some(vec![vec![0, 1], vec![1, 2]])
            ),
            Err(Error::IncompleteFan(_))
        ));
        assert!(matches!(
            Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 0]], None),
            Err(Error::DuplicateRay { index: 2 })
        ));
    }

    #[test]
    fn rejects_doubly_wound_cones() {
        // Six rays of the hexagon fan listed with cones that skip every other
        // ray: (1,0),(1,1)... each cone is unimodular but they overlap.
        let rays = vec![
            vec![1, 0],
            vec![1, 1],
            vec![0, 1],
            vec![-1, 0],
            vec![-1, -1],
            vec![0, -1],
        ];
        let overlapping = vec![
            vec![0, 1],
            vec![1, 3],
            vec![3, 4],
            vec![4, 0],
            vec![0, 2],
            vec![2, 3],
            vec![3, 5],
            vec![5, 0],
        ];
        assert!(Fan::new(2, rays, Some(overlapping)).is_err());
    }

    #[test]
    fn three_dimensional_fan_needs_cones() {
        let rays = vec![
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![-1, -1, -1],
        ];
        assert!(Fan::new(3, rays.clone(), None).is_err());
        let cones = (0..4).combinations(3).collect();
        let p3 = Fan::new(3, rays, Some(cones)).unwrap();
        assert_eq!(p3.primitive_collections(), vec![vec![0, 1, 2, 3]]);
        assert_eq!(p3.classify_positivity().unwrap(), Positivity::Fano);
    }

    #[test]
    fn homology_bases() {
        let f2 = f2_reference();
        let b = f2.homology_basis().unwrap();
        assert_eq!(b, vec![hc(&[1, 0, 0, 1]), hc(&[0, 1, 1, 2])]);
        // (0,1,1,2) = α + 2h, so the span is that of {h, α}
        assert_eq!(&hc(&[-2, 1, 1, 0]) + &hc(&[1, 0, 0, 1]).scaled(2), b[1]);

        let b = p1_times_p1().homology_basis().unwrap();
        assert_eq!(b, vec![hc(&[1, 1, 0, 0]), hc(&[0, 0, 1, 1])]);
        assert_eq!(
            projective_plane().homology_basis().unwrap(),
            vec![hc(&[1, 1, 1])]
        );
    }

    #[test]
    fn primitive_collections_examples() {
        assert_eq!(
            projective_plane().primitive_collections(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(
            f2_reference().primitive_collections(),
            vec![vec![0, 3], vec![1, 2]]
        );
        assert_eq!(
            p1_times_p1().primitive_collections(),
            vec![vec![0, 1], vec![2, 3]]
        );
    }

    #[test]
    fn primitive_relations_of_f2() {
        let f2 = f2_reference();
        let r = f2.primitive_relation(&[1, 2]).unwrap();
        assert_eq!(r.focus, vec![0]);
        assert_eq!(r.multiplicities, vec![2]);
        assert_eq!(r.class, hc(&[-2, 1, 1, 0]));
        assert_eq!(r.degree, 0);

        let r = f2.primitive_relation(&[0, 3]).unwrap();
        assert!(r.focus.is_empty());
        assert_eq!(r.class, hc(&[1, 0, 0, 1]));
        assert_eq!(r.degree, 2);

        let r = projective_plane().primitive_relation(&[0, 1, 2]).unwrap();
        assert!(r.focus.is_empty());
        assert_eq!((r.class, r.degree), (hc(&[1, 1, 1]), 3));

        assert!(matches!(
            f2.primitive_relation(&[0, 1]),
            Err(Error::NotPrimitiveCollection { .. })
        ));
    }

    #[test]
    fn chern_degrees() {
        assert_eq!(hc(&[1, 0, 0, 1]).chern_degree(), 2);
        assert_eq!(hc(&[-2, 1, 1, 0]).chern_degree(), 0);
        assert_eq!(HomologyClass::zero(4).chern_degree(), 0);
    }

    #[test]
    fn positivity_battery() {
        assert_eq!(
            projective_plane().classify_positivity().unwrap(),
            Positivity::Fano
        );
        assert_eq!(
            f2_reference().classify_positivity().unwrap(),
            Positivity::SemiFanoNotFano
        );
        let f3 = Fan::new(
            2,
            vec![vec![1, 0], vec![0, 1], vec![-1, -3], vec![0, -1]],
            None,
        )
        .unwrap();
        let rel = f3.primitive_relation(&[0, 2]).unwrap();
        assert_eq!(
            (rel.focus.clone(), rel.multiplicities.clone()),
            (vec![3], vec![3])
        );
        assert_eq!(rel.degree, -1);
        assert_eq!(f3.classify_positivity().unwrap(), Positivity::NotNef);
    }

    #[test]
    fn effective_classes_of_f2() {
        let f2 = f2_reference();
        let h = hc(&[1, 0, 0, 1]);
        let a = hc(&[-2, 1, 1, 0]);
        let z = HomologyClass::zero(4);
        let one: BTreeSet<_> = [z.clone(), h.clone(), a.clone()].into();
        assert_eq!(f2.effective_classes_up_to(1).unwrap(), one);

        // enumerate (m_h, m_a) with m_h + m_a <= 2
        let mut two = BTreeSet::new();
        for mh in 0..=2i64 {
            for ma in 0..=(2 - mh) {
                two.insert(&h.scaled(mh) + &a.scaled(ma));
            }
        }
        assert_eq!(two.len(), 6);
        assert_eq!(f2.effective_classes_up_to(2).unwrap(), two);
        assert_eq!(f2.effective_classes_up_to(0).unwrap(), [z].into());
    }

    #[test]
    fn forced_divisor_examples() {
        assert_eq!(hc(&[-1, 1, 1, 1]).forced_divisors(), vec![0]);
        assert_eq!(hc(&[-2, 1, 1, 0]).forced_divisors(), vec![0]);
        assert!(hc(&[1, 0, 0, 1]).forced_divisors().is_empty());
    }

    #[test]
    fn fingerprint_ignores_ray_order() {
        let a = hirzebruch(1);
        let b = f2_reference();
        assert_eq!(hirzebruch(2).fingerprint(), b.fingerprint());
        let c = Fan::new(
            2,
            vec![vec![0, -1], vec![-1, -2], vec![1, 0], vec![0, 1]],
            None,
        )
        .unwrap();
        assert_eq!(b.fingerprint(), c.fingerprint());
        assert_ne!(a.fingerprint(), b.fingerprint());
        assert_eq!(b.fingerprint().len(), 64);
    }
}
