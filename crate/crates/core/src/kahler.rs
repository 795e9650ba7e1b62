//! Kähler parameters, the moment polytope and symplectic areas.
//!
//! All areas are measured in units of `2π`, so the area of a class is a
//! linear form in the named parameters `t₁, t₂, …` with rational
//! coefficients. Support constants `λᵢ` are such forms as well.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bundle;
use crate::error::{Error, Result};
use crate::fan::{Fan, HomologyClass};
use crate::lattice::{self, rational, IntMatrix};
use crate::par;

/// Values assigned to named parameters.
pub type ParamValues = BTreeMap<String, BigRational>;

/// `c + Σ aₖ tₖ` with rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinearForm {
    constant: BigRational,
    coeffs: BTreeMap<String, BigRational>,
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn param(name: &str) -> Self {
        Self::term(name, BigRational::one())
    }

    pub fn term(name: &str, coeff: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !coeff.is_zero() {
            coeffs.insert(name.to_string(), coeff);
        }
        Self {
            constant: BigRational::zero(),
            coeffs,
        }
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn coefficient(&self, name: &str) -> BigRational {
        self.coeffs
            .get(name)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn params(&self) -> impl Iterator<Item = &str> {
        self.coeffs.keys().map(String::as_str)
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self {
            constant: &self.constant * k,
            coeffs: self
                .coeffs
                .iter()
                .map(|(n, c)| (n.clone(), c * k))
                .collect(),
        }
    }

    pub fn eval(&self, values: &ParamValues) -> Result<BigRational> {
        let mut out = self.constant.clone();
        for (name, c) in &self.coeffs {
            let v = values
                .get(name)
                .ok_or_else(|| Error::MissingParameter(name.clone()))?;
            out += c * v;
        }
        Ok(out)
    }
}

impl Add for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (name, c) in &rhs.coeffs {
            let e = out
                .coeffs
                .entry(name.clone())
                .or_insert_with(BigRational::zero);
            *e += c;
            if e.is_zero() {
                out.coeffs.remove(name);
            }
        }
        out
    }
}

impl Sub for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        self + &(-rhs)
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&-BigRational::one())
    }
}

impl Mul<&BigRational> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, k: &BigRational) -> LinearForm {
        self.scale(k)
    }
}

fn write_rational_term(
    f: &mut fmt::Formatter<'_>,
    first: bool,
    c: &BigRational,
    name: Option<&str>,
) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    match name {
        Some(n) if mag.is_one() => f.write_str(n),
        Some(n) => write!(f, "{mag}*{n}"),
        None => write!(f, "{mag}"),
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (name, c) in &self.coeffs {
            write_rational_term(f, first, c, Some(name))?;
            first = false;
        }
        if !self.constant.is_zero() || first {
            write_rational_term(f, first, &self.constant, None)?;
        }
        Ok(())
    }
}

impl FromStr for LinearForm {
    type Err = Error;

    /// Parses sums like `-t1 - 2*t2 + 1/2` or `3/2 t1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadLinearForm(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut out = LinearForm::zero();
        let mut rest = compact.as_str();
        let mut first = true;
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (BigRational::one(), &rest[1..]),
                b'-' => (-BigRational::one(), &rest[1..]),
                _ if first => (BigRational::one(), rest),
                _ => return Err(bad()),
            };
            first = false;
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad());
            }
            let split = term.find(|c: char| c.is_ascii_alphabetic() || c == '_');
            let (num, name) = match split {
                Some(i) => (
                    term[..i].strip_suffix('*').unwrap_or(&term[..i]),
                    Some(&term[i..]),
                ),
                None => (term, None),
            };
            let coeff = if num.is_empty() {
                BigRational::one()
            } else {
                parse_rational(num).ok_or_else(bad)?
            } * sign;
            match name {
                Some(n) => {
                    if !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                        return Err(bad());
                    }
                    out = &out + &LinearForm::term(n, coeff);
                }
                None => out = &out + &LinearForm::constant(coeff),
            }
        }
        Ok(out)
    }
}

/// Parses `p` or `p/q`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: BigInt = num.trim().parse().ok()?;
    let den: BigInt = den.trim().parse().ok()?;
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

/// A class `Σ bᵢ βᵢ` of `π₂(X, L)`, with `βᵢ` the basic disk meeting `Dᵢ`
/// once.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(transparent)]
pub struct RelativeClass(Vec<i64>);

impl RelativeClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn basic(num_rays: usize, i: usize) -> Self {
        let mut c = vec![0; num_rays];
        c[i] = 1;
        Self(c)
    }

    /// Image of a sphere class under `H₂(X) → π₂(X, L)`.
    pub fn from_sphere(class: &HomologyClass) -> Self {
        Self(class.coords().to_vec())
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn plus_sphere(&self, class: &HomologyClass) -> Self {
        Self(
            self.0
                .iter()
                .zip(class.coords())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// `∂β = Σ bᵢ vᵢ`.
    pub fn boundary(&self, fan: &Fan) -> Vec<i64> {
        (0..fan.dim())
            .map(|j| self.0.iter().zip(fan.rays()).map(|(b, v)| b * v[j]).sum())
            .collect()
    }

    pub fn maslov_index(&self) -> i64 {
        2 * self.0.iter().sum::<i64>()
    }
}

/// Exponent vector of a monomial in `q₁..q_r`.
pub type QMonomial = Vec<u32>;

/// Support constants and a named basis of `H₂` for a fan.
#[derive(Clone, Debug)]
pub struct KahlerData {
    fan: Fan,
    params: Vec<String>,
    lambdas: Vec<LinearForm>,
    q_basis: Vec<HomologyClass>,
}

impl KahlerData {
    pub fn new(
        fan: Fan,
        params: Vec<String>,
        lambdas: Vec<LinearForm>,
        q_basis: Vec<HomologyClass>,
    ) -> Result<Self> {
        if lambdas.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch {
                expected: fan.num_rays(),
                found: lambdas.len(),
            });
        }
        let known: BTreeSet<&str> = params.iter().map(String::as_str).collect();
        if known.len() != params.len() {
            return Err(Error::SchemaError("repeated parameter name".into()));
        }
        for l in &lambdas {
            if let Some(p) = l.params().find(|p| !known.contains(p)) {
                return Err(Error::UnknownParameter(p.to_string()));
            }
        }
        check_q_basis(&fan, &q_basis)?;
        Ok(Self {
            fan,
            params,
            lambdas,
            q_basis,
        })
    }

    /// Default Kähler data: parameters `t1..tr` with `tⱼ` the area of the
    /// `j`-th q-basis class, and `λᵢ = 0` on the rays of one maximal cone.
    /// For a bundle `X` that cone is the first through `v_{m+1}`; otherwise
    /// the first maximal cone.
    pub fn standard(fan: Fan, q_basis: Vec<HomologyClass>) -> Result<Self> {
        check_q_basis(&fan, &q_basis)?;
        let d = fan.num_rays();
        let anchor = if bundle::recognize_bundle(&fan).is_some() {
            fan.maximal_cones()
                .iter()
                .find(|c| c.contains(&(d - 1)))
                .cloned()
        } else {
            None
        }
        .unwrap_or_else(|| fan.maximal_cones()[0].clone());
        let free: Vec<usize> = (0..d).filter(|i| !anchor.contains(i)).collect();
        let r = q_basis.len();
        let params: Vec<String> = (1..=r).map(|j| format!("t{j}")).collect();
        // -Σ_{i∈free} a_{j,i} λ_i = t_j, solved one parameter at a time
        let columns: Vec<Vec<BigRational>> = free
            .iter()
            .map(|&i| q_basis.iter().map(|q| rational(-q.coords()[i])).collect())
            .collect();
        let mut lambdas = vec![LinearForm::zero(); d];
        for (j, name) in params.iter().enumerate() {
            let e: Vec<BigRational> = (0..r)
                .map(|k| {
                    if k == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect();
            let sol = lattice::solve_columns(&columns, &e)?
                .ok_or_else(|| Error::InvalidQBasis("cannot solve for support constants".into()))?;
            for (&i, c) in free.iter().zip(sol) {
                lambdas[i] = &lambdas[i] + &LinearForm::term(name, c);
            }
        }
        Self::new(fan, params, lambdas, q_basis)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn lambdas(&self) -> &[LinearForm] {
        &self.lambdas
    }

    pub fn q_basis(&self) -> &[HomologyClass] {
        &self.q_basis
    }

    /// `lᵢ(x) = ⟨x, vᵢ⟩ − λᵢ`.
    pub fn support_value(&self, i: usize, x: &[BigRational]) -> LinearForm {
        let pairing: BigRational = self.fan.rays()[i]
            .iter()
            .zip(x)
            .map(|(&v, xj)| xj * rational(v))
            .sum();
        &LinearForm::constant(pairing) - &self.lambdas[i]
    }

    /// `(1/2π) ∫_β ω = Σ bᵢ lᵢ(x)`.
    pub fn disk_area(&self, beta: &RelativeClass, x: &[BigRational]) -> LinearForm {
        beta.coords()
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .fold(LinearForm::zero(), |acc, (i, &b)| {
                &acc + &self.support_value(i, x).scale(&rational(b))
            })
    }

    /// `(1/2π) ∫_α ω = −Σ aᵢ λᵢ`, independent of the torus fiber.
    pub fn sphere_area(&self, alpha: &HomologyClass) -> LinearForm {
        alpha
            .coords()
            .iter()
            .zip(&self.lambdas)
            .filter(|(&a, _)| a != 0)
            .fold(LinearForm::zero(), |acc, (&a, l)| {
                &acc - &l.scale(&rational(a))
            })
    }

    /// Coordinates of `α` in the q-basis.
    pub fn q_coordinates(&self, alpha: &HomologyClass) -> Result<Vec<i64>> {
        let not_in_span = || Error::NotInBasisSpan {
            class: alpha.coords().to_vec(),
        };
        if alpha.len() != self.fan.num_rays() {
            return Err(not_in_span());
        }
        let columns: Vec<Vec<BigRational>> = self
            .q_basis
            .iter()
            .map(|q| q.coords().iter().map(|&x| rational(x)).collect())
            .collect();
        let target: Vec<BigRational> = alpha.coords().iter().map(|&x| rational(x)).collect();
        let sol = lattice::solve_columns(&columns, &target)?.ok_or_else(not_in_span)?;
        sol.iter()
            .map(|c| {
                c.is_integer()
                    .then(|| c.to_integer().to_i64())
                    .flatten()
                    .ok_or_else(not_in_span)
            })
            .collect()
    }

    /// The monomial `q^α = ∏ qⱼ^{cⱼ}` where `α = Σ cⱼ (q-basis)ⱼ`.
    pub fn q_weight(&self, alpha: &HomologyClass) -> Result<QMonomial> {
        self.q_coordinates(alpha)?
            .into_iter()
            .map(|c| {
                u32::try_from(c).map_err(|_| Error::NegativeQExponent {
                    class: alpha.coords().to_vec(),
                })
            })
            .collect()
    }

    /// `exp(−area(α))` at the given parameter values.
    pub fn q_weight_value(&self, alpha: &HomologyClass, values: &ParamValues) -> Result<f64> {
        let area = self.sphere_area(alpha).eval(values)?;
        Ok((-area.to_f64().unwrap_or(f64::NAN)).exp())
    }

    /// Writes `e^{λᵢ}` as a monomial in the q-variables: solves
    /// `λᵢ = −Σ cⱼ area(q-basisⱼ)` for nonnegative integers `cⱼ`.
    pub fn lambda_monomial(&self, i: usize) -> Result<QMonomial> {
        let fail = || Error::LambdaNotQExpressible { ray: i };
        let areas: Vec<LinearForm> = self.q_basis.iter().map(|q| self.sphere_area(q)).collect();
        // one equation per parameter plus the constant term
        let mut rows: Vec<Option<String>> = vec![None];
        rows.extend(self.params.iter().cloned().map(Some));
        let coord = |f: &LinearForm, row: &Option<String>| match row {
            None => f.constant_part().clone(),
            Some(name) => f.coefficient(name),
        };
        let columns: Vec<Vec<BigRational>> = areas
            .iter()
            .map(|a| rows.iter().map(|r| -coord(a, r)).collect())
            .collect();
        let target: Vec<BigRational> = rows.iter().map(|r| coord(&self.lambdas[i], r)).collect();
        let sol = match lattice::solve_columns(&columns, &target) {
            Ok(Some(s)) => s,
            _ => return Err(fail()),
        };
        sol.iter()
            .map(|c| {
                c.is_integer()
                    .then(|| c.to_integer().to_u32())
                    .flatten()
                    .ok_or_else(fail)
            })
            .collect()
    }

    /// Vertices of the moment polytope `{x : lᵢ(x) ≥ 0}` at the given
    /// parameter values, sorted.
    pub fn vertices(&self, values: &ParamValues) -> Result<Vec<Vec<BigRational>>> {
        self.vertices_with(values, par::available())
    }

    /// [`Self::vertices`] with an explicit choice of the sequential path.
    pub fn vertices_with(
        &self,
        values: &ParamValues,
        parallel: bool,
    ) -> Result<Vec<Vec<BigRational>>> {
        let n = self.fan.dim();
        let d = self.fan.num_rays();
        let lambdas: Vec<BigRational> = self
            .lambdas
            .iter()
            .map(|l| l.eval(values))
            .collect::<Result<_>>()?;
        let rays = self.fan.rays();
        let subsets: Vec<Vec<usize>> = (0..d).combinations(n).collect();
        let candidates = par::map(&subsets, parallel, |s| {
            let columns: Vec<Vec<BigRational>> = (0..n)
                .map(|j| s.iter().map(|&i| rational(rays[i][j])).collect())
                .collect();
            let rhs: Vec<BigRational> = s.iter().map(|&i| lambdas[i].clone()).collect();
            let x = lattice::solve_columns(&columns, &rhs).ok()??;
            let feasible = (0..d).all(|i| {
                let v: BigRational = rays[i]
                    .iter()
                    .zip(&x)
                    .map(|(&r, xj)| xj * rational(r))
                    .sum();
                v >= lambdas[i]
            });
            feasible.then_some(x)
        });
        let set: BTreeSet<Vec<BigRational>> = candidates.into_iter().flatten().collect();
        Ok(set.into_iter().collect())
    }

    /// A point with every `lᵢ > 0`: the average of the polytope's vertices.
    pub fn interior_point(&self, values: &ParamValues) -> Result<Vec<BigRational>> {
        let n = self.fan.dim();
        let verts = self.vertices(values)?;
        if verts.len() <= n {
            return Err(Error::EmptyInterior);
        }
        let count = rational(verts.len() as i64);
        let x: Vec<BigRational> = (0..n)
            .map(|j| verts.iter().map(|v| v[j].clone()).sum::<BigRational>() / &count)
            .collect();
        for i in 0..self.fan.num_rays() {
            if !self.support_value(i, &x).eval(values)?.is_positive() {
                return Err(Error::EmptyInterior);
            }
        }
        Ok(x)
    }
}

fn check_q_basis(fan: &Fan, q_basis: &[HomologyClass]) -> Result<()> {
    let rank = fan.num_rays() - fan.dim();
    if q_basis.len() != rank {
        return Err(Error::InvalidQBasis(format!(
            "expected {rank} classes, found {}",
            q_basis.len()
        )));
    }
    for q in q_basis {
        if !fan.is_class(q) {
            return Err(Error::InvalidQBasis(format!("{q} is not a curve class")));
        }
    }
    let m = IntMatrix::from_rows(
        fan.num_rays(),
        &q_basis
            .iter()
            .map(|q| q.coords().to_vec())
            .collect::<Vec<_>>(),
    );
    let divisors = m.elementary_divisors();
    if divisors.len() != rank || divisors.iter().any(|d| !d.is_one()) {
        return Err(Error::InvalidQBasis(
            "classes do not form a basis of H2".into(),
        ));
    }
    Ok(())
}

/// The q-basis used when none is supplied: for a bundle, the lifts of the
/// base's primitive-relation classes followed by the fiber class; otherwise
/// the primitive-relation classes, provided they form a basis.
pub fn default_q_basis(fan: &Fan) -> Result<Vec<HomologyClass>> {
    let candidate = match bundle::default_q_basis(fan) {
        Ok(b) => b,
        Err(Error::NotBundle) => fan.effective_generators()?,
        Err(e) => return Err(e),
    };
    check_q_basis(fan, &candidate).map_err(|_| Error::QBasisRequired)?;
    Ok(candidate)
}
