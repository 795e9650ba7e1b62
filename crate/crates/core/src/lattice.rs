//! Exact integer linear algebra.
//!
//! Everything here works over arbitrary-precision integers (or rationals where
//! a solve is unavoidable). The main entry points are [`kernel_basis`], which
//! computes a saturated, canonically reduced basis of the integer kernel of a
//! matrix, and [`unimodular_map_search`], which looks for a lattice
//! automorphism carrying one fan onto another.

use std::collections::{HashMap, HashSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows<T: Clone + Into<BigInt>>(cols: usize, rows: &[Vec<T>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned().map(Into::into));
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns<T: Clone + Into<BigInt>>(rows: usize, columns: &[Vec<T>]) -> Self {
        Self::from_rows(rows, columns).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Converts to machine integers, failing on overflow.
    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        self.to_rows().iter().map(|r| to_i64_vec(r)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "incompatible shapes");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Row-style Hermite normal form.
    ///
    /// Returns `(h, u)` with `u` unimodular and `u * self == h`. Pivots of `h`
    /// are positive and entries above each pivot are reduced into
    /// `[0, pivot)`; zero rows sit at the bottom.
    pub fn hermite_form(&self) -> (IntMatrix, IntMatrix) {
        let mut h = self.to_rows();
        let mut u = IntMatrix::identity(self.rows).to_rows();
        let mut pivot_row = 0;
        for col in 0..self.cols {
            if pivot_row == self.rows {
                break;
            }
            loop {
                let best = (pivot_row..self.rows)
                    .filter(|&r| !h[r][col].is_zero())
                    .min_by(|&a, &b| h[a][col].abs().cmp(&h[b][col].abs()));
                let Some(best) = best else { break };
                h.swap(pivot_row, best);
                u.swap(pivot_row, best);
                let mut clean = true;
                for r in pivot_row + 1..self.rows {
                    if h[r][col].is_zero() {
                        continue;
                    }
                    let q = h[r][col].div_floor(&h[pivot_row][col]);
                    sub_scaled_row(&mut h, r, pivot_row, &q);
                    sub_scaled_row(&mut u, r, pivot_row, &q);
                    if !h[r][col].is_zero() {
                        clean = false;
                    }
                }
                if clean {
                    break;
                }
            }
            if h[pivot_row][col].is_zero() {
                continue;
            }
            if h[pivot_row][col].is_negative() {
                negate_row(&mut h[pivot_row]);
                negate_row(&mut u[pivot_row]);
            }
            for r in 0..pivot_row {
                let q = h[r][col].div_floor(&h[pivot_row][col]);
                if !q.is_zero() {
                    sub_scaled_row(&mut h, r, pivot_row, &q);
                    sub_scaled_row(&mut u, r, pivot_row, &q);
                }
            }
            pivot_row += 1;
        }
        (
            IntMatrix::from_rows(self.cols, &h),
            IntMatrix::from_rows(self.rows, &u),
        )
    }

    pub fn rank(&self) -> usize {
        let (h, _) = self.hermite_form();
        (0..h.rows)
            .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
            .count()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Diagonal of the Smith normal form (nonzero entries only), each
    /// dividing the next.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let mut a = self.to_rows();
        let (m, n) = (self.rows, self.cols);
        let mut out = Vec::new();
        for t in 0..m.min(n) {
            loop {
                // smallest nonzero entry of the trailing block becomes the pivot
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        if a[i][j].is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else {
                    return out;
                };
                a.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                let p = a[t][t].clone();
                let mut dirty = false;
                for i in t + 1..m {
                    let q = a[i][t].div_floor(&p);
                    if !q.is_zero() {
                        sub_scaled_row(&mut a, i, t, &q);
                    }
                    dirty |= !a[i][t].is_zero();
                }
                for j in t + 1..n {
                    let q = a[t][j].div_floor(&p);
                    if !q.is_zero() {
                        for row in a.iter_mut() {
                            let v = &row[t] * &q;
                            row[j] -= v;
                        }
                    }
                    dirty |= !a[t][j].is_zero();
                }
                if dirty {
                    continue;
                }
                // pivot must divide the rest of the block
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => {
                        let row = a[i][t..n].to_vec();
                        for (x, v) in a[t][t..n].iter_mut().zip(row) {
                            *x += v;
                        }
                    }
                    None => break,
                }
            }
            out.push(a[t][t].abs());
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[{}]", self.row(i).iter().join(", "))?;
        }
        write!(f, "]")
    }
}

fn sub_scaled_row(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = m[source].clone();
    for (t, s) in m[target].iter_mut().zip(src) {
        *t -= q * s;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for x in row.iter_mut() {
        *x = -std::mem::take(x);
    }
}

pub(crate) fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Overflow(x.to_string())))
        .collect()
}

pub(crate) fn big_vec(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub(crate) fn rational(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// A ℤ-basis of `{a ∈ ℤ^cols : m·a = 0}`.
///
/// The basis is read off the unimodular transform of the Hermite form of
/// `mᵀ`, then put in Hermite form itself so the output is canonical. The
/// result is checked to span a saturated lattice (all elementary divisors 1),
/// which also makes every basis vector primitive.
pub fn kernel_basis(m: &IntMatrix) -> Result<Vec<Vec<BigInt>>> {
    let (h, u) = m.transpose().hermite_form();
    let rank = (0..h.rows())
        .filter(|&i| h.row(i).iter().any(|x| !x.is_zero()))
        .count();
    if rank < m.rows() {
        return Err(Error::NotFullRank {
            rank,
            rows: m.rows(),
        });
    }
    let raw: Vec<Vec<BigInt>> = (rank..m.cols()).map(|i| u.row(i).to_vec()).collect();
    if raw.is_empty() {
        return Ok(raw);
    }
    let (canon, _) = IntMatrix::from_rows(m.cols(), &raw).hermite_form();
    let basis: Vec<Vec<BigInt>> = canon
        .to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    debug_assert_eq!(basis.len(), raw.len());
    let saturated = IntMatrix::from_rows(m.cols(), &basis)
        .elementary_divisors()
        .iter()
        .all(|d| d.is_one());
    assert!(
        saturated,
        "unimodular transform produced a non-saturated kernel"
    );
    Ok(basis)
}

/// True iff the entries of `v` have gcd 1.
pub fn is_primitive(v: &[i64]) -> Result<bool> {
    let g = v.iter().fold(0i64, |g, &x| g.gcd(&x));
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(g == 1)
}

/// Solves `A·x = b` exactly. `A` is given by its columns.
///
/// Returns `Err(DependentGenerators)` if the columns are dependent,
/// `Ok(None)` if the system is inconsistent.
pub(crate) fn solve_columns(
    columns: &[Vec<BigRational>],
    rhs: &[BigRational],
) -> Result<Option<Vec<BigRational>>> {
    let k = columns.len();
    let n = rhs.len();
    // augmented n × (k+1)
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = columns.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::with_capacity(k);
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            return Err(Error::DependentGenerators);
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let src = a[r].clone();
                for (x, s) in a[i].iter_mut().zip(src) {
                    *x -= &f * s;
                }
            }
        }
        pivots.push(r);
        r += 1;
    }
    if (r..n).any(|i| !a[i][k].is_zero()) {
        return Ok(None);
    }
    Ok(Some(pivots.iter().map(|&i| a[i][k].clone()).collect()))
}

/// Expresses `point` as a nonnegative combination of linearly independent
/// `generators`, if possible.
pub fn cone_coefficients(
    point: &[BigRational],
    generators: &[Vec<i64>],
) -> Result<Option<Vec<BigRational>>> {
    for g in generators {
        if g.len() != point.len() {
            return Err(Error::DimensionMismatch {
                expected: point.len(),
                found: g.len(),
            });
        }
    }
    if generators.is_empty() {
        return Ok(point.iter().all(Zero::is_zero).then(Vec::new));
    }
    let cols: Vec<Vec<BigRational>> = generators
        .iter()
        .map(|g| g.iter().map(|&x| rational(x)).collect())
        .collect();
    Ok(solve_columns(&cols, point)?.filter(|c| c.iter().all(|x| !x.is_negative())))
}

/// Exact inverse of a unimodular integer matrix.
fn unimodular_inverse(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.rows();
    let cols: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| BigRational::from_integer(m[(i, j)].clone()))
                .collect()
        })
        .collect();
    let mut inv = IntMatrix::zeros(n, n);
    for j in 0..n {
        let e: Vec<BigRational> = (0..n)
            .map(|i| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .collect();
        let x = solve_columns(&cols, &e).ok()??;
        for (i, v) in x.into_iter().enumerate() {
            if !v.is_integer() {
                return None;
            }
            inv[(i, j)] = v.to_integer();
        }
    }
    Some(inv)
}

/// Upper bounds for [`unimodular_map_search`].
pub const MAP_SEARCH_MAX_DIM: usize = 4;
pub const MAP_SEARCH_MAX_RAYS: usize = 16;

/// Searches for `T ∈ GL(n, ℤ)` mapping fan A onto fan B.
///
/// `T` must send the ray set of A bijectively onto that of B and every
/// maximal cone of A onto a maximal cone of B. The first maximal cone of A
/// is used as an anchor basis; every ordered choice of `n` rays of B for its
/// image determines a candidate `T`, tried in lexicographic order.
pub fn unimodular_map_search(
    rays_a: &[Vec<i64>],
    cones_a: &[Vec<usize>],
    rays_b: &[Vec<i64>],
    cones_b: &[Vec<usize>],
) -> Result<Option<IntMatrix>> {
    let dim_of = |rays: &[Vec<i64>]| rays.first().map_or(0, Vec::len);
    let (n, nb) = (dim_of(rays_a), dim_of(rays_b));
    if n != nb {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: nb,
        });
    }
    let most = rays_a.len().max(rays_b.len());
    if n > MAP_SEARCH_MAX_DIM || most > MAP_SEARCH_MAX_RAYS {
        return Err(Error::SearchTooLarge { dim: n, rays: most });
    }
    if rays_a.len() != rays_b.len() || cones_a.len() != cones_b.len() {
        return Ok(None);
    }
    let Some(anchor) = cones_a.first() else {
        return Ok(None);
    };
    let basis_a = IntMatrix::from_columns(
        n,
        &anchor
            .iter()
            .map(|&i| rays_a[i].clone())
            .collect::<Vec<_>>(),
    );
    let Some(inv_a) = unimodular_inverse(&basis_a) else {
        return Ok(None);
    };
    let index_b: HashMap<&[i64], usize> = rays_b
        .iter()
        .enumerate()
        .map(|(i, r)| (r.as_slice(), i))
        .collect();
    let cone_set_b: HashSet<Vec<usize>> = cones_b
        .iter()
        .map(|c| c.iter().copied().sorted().collect())
        .collect();

    for images in (0..rays_b.len()).permutations(n) {
        let basis_b = IntMatrix::from_columns(
            n,
            &images
                .iter()
                .map(|&i| rays_b[i].clone())
                .collect::<Vec<_>>(),
        );
        let t = basis_b.mul(&inv_a);
        if !t.determinant().abs().is_one() {
            continue;
        }
        let mut image_of = Vec::with_capacity(rays_a.len());
        let mut hit = vec![false; rays_b.len()];
        let mut ok = true;
        for r in rays_a {
            let img = t.mul_vec(&big_vec(r));
            let found = to_i64_vec(&img)
                .ok()
                .and_then(|v| index_b.get(v.as_slice()).copied());
            match found {
                Some(j) if !hit[j] => {
                    hit[j] = true;
                    image_of.push(j);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let cones_ok = cones_a.iter().all(|c| {
            let mapped: Vec<usize> = c.iter().map(|&i| image_of[i]).sorted().collect();
            cone_set_b.contains(&mapped)
        });
        if cones_ok {
            return Ok(Some(t));
        }
    }
    Ok(None)
}
