//! Sparse Laurent polynomials in `z₁..zₙ` whose coefficients are exact
//! polynomials in the formal variables `q₁..q_r`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A q-exponent vector, ordered by total degree and then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QExp(pub Vec<u32>);

impl QExp {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }
}

impl Ord for QExp {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for QExp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in the q-variables with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coefficient {
    nq: usize,
    terms: BTreeMap<QExp, BigRational>,
}

impl Coefficient {
    pub fn zero(nq: usize) -> Self {
        Self {
            nq,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nq: usize) -> Self {
        Self::monomial(vec![0; nq], BigRational::one())
    }

    pub fn monomial(exp: Vec<u32>, c: BigRational) -> Self {
        let mut out = Self::zero(exp.len());
        if !c.is_zero() {
            out.terms.insert(QExp(exp), c);
        }
        out
    }

    pub fn num_vars(&self) -> usize {
        self.nq
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigRational)> {
        self.terms.iter().map(|(k, v)| (k.0.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, exp: QExp, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self
            .terms
            .entry(exp.clone())
            .or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        let mut out = Self::zero(self.nq);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    /// Value at `qⱼ = exp(−tⱼ)`.
    pub fn eval(&self, q: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 =
                    e.0.iter()
                        .zip(q)
                        .map(|(&k, &qj)| qj.powi(k as i32))
                        .product();
                c.to_f64().unwrap_or(f64::NAN) * m
            })
            .sum()
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;
    fn add(self, rhs: &Coefficient) -> Coefficient {
        assert_eq!(self.nq, rhs.nq, "q-variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;
    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;
    fn mul(self, rhs: &Coefficient) -> Coefficient {
        assert_eq!(self.nq, rhs.nq, "q-variable count mismatch");
        let mut out = Coefficient::zero(self.nq);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.0.iter().zip(&eb.0).map(|(a, b)| a + b).collect();
                out.add_term(QExp(e), ca * cb);
            }
        }
        out
    }
}

fn fmt_monomial(f: &mut fmt::Formatter<'_>, prefix: &str, exps: &[i64]) -> fmt::Result {
    let mut first = true;
    for (j, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "{prefix}{}", j + 1)?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k == 0, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let exps: Vec<i64> = e.0.iter().map(|&x| i64::from(x)).collect();
            let constant = exps.iter().all(|&x| x == 0);
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                fmt_monomial(f, "q", &exps)?;
            }
        }
        Ok(())
    }
}

/// `Σ c_e(q) z^e` over integer exponent vectors `e`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nz: usize,
    nq: usize,
    terms: BTreeMap<Vec<i64>, Coefficient>,
}

impl LaurentPoly {
    pub fn zero(nz: usize, nq: usize) -> Self {
        Self {
            nz,
            nq,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nz: usize, c: Coefficient) -> Self {
        Self::monomial(vec![0; nz], c)
    }

    pub fn monomial(z: Vec<i64>, c: Coefficient) -> Self {
        let mut out = Self::zero(z.len(), c.num_vars());
        out.add_term(z, c);
        out
    }

    pub fn num_vars(&self) -> usize {
        self.nz
    }

    pub fn num_q_vars(&self) -> usize {
        self.nq
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms sorted lexicographically by z-exponent.
    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Coefficient)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, z: &[i64]) -> Option<&Coefficient> {
        self.terms.get(z)
    }

    pub fn add_term(&mut self, z: Vec<i64>, c: Coefficient) {
        assert_eq!(z.len(), self.nz, "z-variable count mismatch");
        assert_eq!(c.num_vars(), self.nq, "q-variable count mismatch");
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&z) {
            Some(existing) => existing + &c,
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&z);
        } else {
            self.terms.insert(z, sum);
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|z| z.iter().all(|&e| e == 0))
    }

    /// `zⱼ ∂/∂zⱼ`, applied term by term.
    pub fn log_derivative(&self, j: usize) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nz, self.nq);
        for (z, c) in &self.terms {
            out.add_term(z.clone(), c.scale(&BigRational::from_integer(z[j].into())));
        }
        out
    }

    /// Numeric coefficients at `qⱼ = exp(−tⱼ)`.
    pub fn numeric_terms(&self, t: &[f64]) -> Result<Vec<(Vec<i64>, f64)>> {
        if t.len() != self.nq {
            return Err(Error::DimensionMismatch {
                expected: self.nq,
                found: t.len(),
            });
        }
        let q: Vec<f64> = t.iter().map(|tj| (-tj).exp()).collect();
        Ok(self
            .terms
            .iter()
            .map(|(z, c)| (z.clone(), c.eval(&q)))
            .collect())
    }

    /// `W(z)` with `qⱼ = exp(−tⱼ)`; powers are formed by repeated squaring.
    pub fn evaluate(&self, z: &[Complex64], t: &[f64]) -> Result<Complex64> {
        if z.len() != self.nz {
            return Err(Error::DimensionMismatch {
                expected: self.nz,
                found: z.len(),
            });
        }
        if let Some(index) = z.iter().position(|v| v.norm() == 0.0) {
            return Err(Error::ZeroCoordinate { index });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for (exps, c) in self.numeric_terms(t)? {
            let mut m = Complex64::new(c, 0.0);
            for (zj, &e) in z.iter().zip(&exps) {
                m *= pow_int(*zj, e);
            }
            total += m;
        }
        Ok(total)
    }
}

/// `z^e` for any integer `e`, by binary exponentiation.
pub fn pow_int(z: Complex64, e: i64) -> Complex64 {
    let mut base = if e < 0 { z.inv() } else { z };
    let mut k = e.unsigned_abs();
    let mut acc = Complex64::new(1.0, 0.0);
    while k > 0 {
        if k & 1 == 1 {
            acc *= base;
        }
        base *= base;
        k >>= 1;
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (z, c) in &rhs.terms {
            out.add_term(z.clone(), c.clone());
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nz: self.nz,
            nq: self.nq,
            terms: self.terms.iter().map(|(z, c)| (z.clone(), -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &(-rhs)
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nz, rhs.nz, "z-variable count mismatch");
        let mut out = LaurentPoly::zero(self.nz, self.nq);
        for (za, ca) in &self.terms {
            for (zb, cb) in &rhs.terms {
                let z = za.iter().zip(zb).map(|(a, b)| a + b).collect();
                out.add_term(z, ca * cb);
            }
        }
        out
    }
}

impl Mul<&Coefficient> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &Coefficient) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.nz, self.nq);
        for (z, c) in &self.terms {
            out.add_term(z.clone(), c * rhs);
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (z, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            let constant_z = z.iter().all(|&e| e == 0);
            let single = c.len() == 1;
            let unit = single
                && c.terms()
                    .next()
                    .is_some_and(|(e, v)| v.is_one() && e.iter().all(|&x| x == 0));
            match (constant_z, unit, single) {
                (true, _, _) => write!(f, "{c}")?,
                (false, true, _) => {}
                (false, false, true) => write!(f, "{c}*")?,
                (false, false, false) => write!(f, "({c})*")?,
            }
            if !constant_z {
                fmt_monomial(f, "z", z)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn q_exponents_order_by_degree_first() {
        let mut v = vec![
            QExp(vec![0, 2]),
            QExp(vec![1, 0]),
            QExp(vec![0, 0]),
            QExp(vec![1, 1]),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                QExp(vec![0, 0]),
                QExp(vec![1, 0]),
                QExp(vec![0, 2]),
                QExp(vec![1, 1])
            ]
        );
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let a = Coefficient::monomial(vec![1], r(3));
        let d = &a - &a;
        assert!(d.is_zero());
        let p = LaurentPoly::monomial(vec![1, -1], a.clone());
        assert!((&p - &p).is_empty());
    }

    #[test]
    fn display_forms() {
        let one = Coefficient::one(1);
        let q = Coefficient::monomial(vec![1], r(1));
        let mut w = LaurentPoly::monomial(vec![1], one.clone());
        w.add_term(vec![-1], q.clone());
        assert_eq!(w.to_string(), "q1*z1^-1 + z1");
        w.add_term(vec![-1], one.clone());
        assert_eq!(w.to_string(), "(1 + q1)*z1^-1 + z1");
        assert_eq!(LaurentPoly::constant(1, one).to_string(), "1");
        assert_eq!(LaurentPoly::zero(2, 0).to_string(), "0");
    }

    #[test]
    fn evaluation_examples() {
        // z + q/z at z = 0.1, q = 0.01
        let mut w = LaurentPoly::monomial(vec![1], Coefficient::one(1));
        w.add_term(vec![-1], Coefficient::monomial(vec![1], r(1)));
        let t = [-(0.01f64).ln()];
        let v = w.evaluate(&[Complex64::new(0.1, 0.0)], &t).unwrap();
        assert!((v - Complex64::new(0.2, 0.0)).norm() < 1e-15);

        let c = LaurentPoly::constant(2, Coefficient::one(0));
        let v = c
            .evaluate(&[Complex64::new(3.0, 1.0), Complex64::new(-2.0, 0.5)], &[])
            .unwrap();
        assert_eq!(v, Complex64::new(1.0, 0.0));

        assert_eq!(
            w.evaluate(&[Complex64::new(0.0, 0.0)], &t),
            Err(Error::ZeroCoordinate { index: 0 })
        );
    }

    #[test]
    fn integer_powers() {
        let z = Complex64::new(0.3, -1.2);
        for e in -7..=7 {
            let expect = z.powf(e as f64);
            assert!((pow_int(z, e) - expect).norm() < 1e-12 * expect.norm().max(1.0));
        }
    }

    #[test]
    fn log_derivative_scales_by_exponent() {
        let mut w = LaurentPoly::monomial(vec![2, -1], Coefficient::one(0));
        w.add_term(vec![0, 3], Coefficient::monomial(vec![], r(5)));
        let d0 = w.log_derivative(0);
        assert_eq!(d0.len(), 1);
        assert_eq!(
            d0.coefficient(&[2, -1]).unwrap(),
            &Coefficient::monomial(vec![], r(2))
        );
        let d1 = w.log_derivative(1);
        assert_eq!(
            d1.coefficient(&[0, 3]).unwrap(),
            &Coefficient::monomial(vec![], r(15))
        );
        assert_eq!(
            d1.coefficient(&[2, -1]).unwrap(),
            &Coefficient::monomial(vec![], r(-1))
        );
    }
}
