//! Extended ADHM data, the potential `Tr W_{m,d}` and its critical equations,
//! GIT stability by span closure, and reducedness of the curve `f_alpha = 0`.
//!
//! A point is `(u_1, .., u_{a+1}, v_1, .., v_a, A, B, C, alpha)` with `u_k` column
//! vectors, `v_k` row covectors and `alpha_ij` indexed by
//! `I_m = {(i, j) : 1 <= i + j <= m}`. Matrix substitution in
//! `f_alpha = 1 + sum alpha_ij x^i y^j` always puts powers of `A` to the left:
//! `f_alpha(A, B) = Id + sum alpha_ij A^i B^j`.
//!
//! For `a = 1` the potential is
//! `W = sum alpha_ij v A^i B^j u_2 + Tr C (u_1 v + [A, B])`.
//! Derivatives follow `dW = Tr(D_X dX)`, so `D_X` has the transposed shape of
//! `X`: rows for column vectors, columns for covectors, and for a word
//! `Tr(X_1 .. X_n)` the derivative in `X` sums the cyclically rotated words
//! following each occurrence of `X`.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{Num, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::rational::{self, Q};

pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {}
impl<T: Clone + Debug + PartialEq + Num + Neg<Output = T>> Scalar for T {}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged matrix rows".into()));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn column(v: &[T]) -> Self {
        Matrix {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn row(v: &[T]) -> Self {
        Matrix {
            rows: 1,
            cols: v.len(),
            data: v.to_vec(),
        }
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data
            .chunks(self.cols.max(1))
            .map(<[T]>::to_vec)
            .take(self.rows)
            .collect()
    }

    pub fn mul(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = Matrix::<T>::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs.get(k, j).clone();
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + prod;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn sub(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, k: &T) -> Matrix<T> {
        let data = self.data.iter().map(|a| a.clone() * k.clone()).collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn transpose(&self) -> Matrix<T> {
        let mut out = Matrix::<T>::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *out.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Matrix<T> {
        assert_eq!(self.rows, self.cols);
        (0..k).fold(Matrix::identity(self.rows), |acc, _| acc.mul(self))
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }
}

/// `I_m = {(i, j) : 1 <= i + j <= m}` ordered by total degree, then by `i` descending.
pub fn index_set(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=m {
        for i in (0..=k).rev() {
            out.push((i, k - i));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct AdhmPoint<T> {
    pub u: Vec<Vec<T>>,
    pub v: Vec<Vec<T>>,
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    pub c: Matrix<T>,
    pub alpha: BTreeMap<(usize, usize), T>,
}

impl<T: Scalar> AdhmPoint<T> {
    pub fn d(&self) -> usize {
        self.a.rows
    }

    pub fn check_shape(&self) -> Result<()> {
        let d = self.d();
        let bad = |what: &str| Err(Error::ShapeMismatch(what.to_string()));
        for (name, m) in [("A", &self.a), ("B", &self.b), ("C", &self.c)] {
            if m.rows != d || m.cols != d {
                return bad(&format!("{name} must be {d}x{d}"));
            }
        }
        if self.u.iter().chain(&self.v).any(|x| x.len() != d) {
            return bad(&format!("u and v vectors must have length {d}"));
        }
        if self.u.len() != self.v.len() + 1 {
            return bad("expected a + 1 vectors u and a covectors v");
        }
        Ok(())
    }

    fn check_potential_shape(&self, m: usize) -> Result<()> {
        self.check_shape()?;
        if self.u.len() != 2 {
            return Err(Error::ShapeMismatch(
                "the potential needs u_1, u_2 and one v".into(),
            ));
        }
        if let Some(&(i, j)) = self.alpha.keys().find(|&&(i, j)| i + j == 0 || i + j > m) {
            return Err(Error::ShapeMismatch(format!(
                "alpha_({i},{j}) is outside I_{m}"
            )));
        }
        Ok(())
    }

    pub fn map<S, F: Fn(&T) -> S>(&self, f: F) -> AdhmPoint<S> {
        let mat = |m: &Matrix<T>| Matrix {
            rows: m.rows,
            cols: m.cols,
            data: m.data.iter().map(&f).collect(),
        };
        AdhmPoint {
            u: self.u.iter().map(|x| x.iter().map(&f).collect()).collect(),
            v: self.v.iter().map(|x| x.iter().map(&f).collect()).collect(),
            a: mat(&self.a),
            b: mat(&self.b),
            c: mat(&self.c),
            alpha: self.alpha.iter().map(|(k, x)| (*k, f(x))).collect(),
        }
    }
}

/// `f_alpha(A, B) = Id + sum alpha_ij A^i B^j`.
pub fn eval_f_alpha<T: Scalar>(
    alpha: &BTreeMap<(usize, usize), T>,
    a: &Matrix<T>,
    b: &Matrix<T>,
) -> Matrix<T> {
    let mut out = Matrix::identity(a.rows);
    for (&(i, j), coeff) in alpha {
        out = out.add(&a.pow(i).mul(&b.pow(j)).scale(coeff));
    }
    out
}

/// `f_alpha(x, y)` for scalars.
pub fn eval_f_alpha_scalar<T: Scalar>(alpha: &BTreeMap<(usize, usize), T>, x: &T, y: &T) -> T {
    let pow = |base: &T, k: usize| (0..k).fold(T::one(), |acc, _| acc * base.clone());
    alpha.iter().fold(T::one(), |acc, (&(i, j), c)| {
        acc + c.clone() * pow(x, i) * pow(y, j)
    })
}

/// `sum alpha_ij v A^i B^j u_2 + Tr C (u_1 v + [A, B])`.
pub fn potential<T: Scalar>(p: &AdhmPoint<T>, m: usize) -> Result<T> {
    p.check_potential_shape(m)?;
    let v = Matrix::row(&p.v[0]);
    let u1 = Matrix::column(&p.u[0]);
    let u2 = Matrix::column(&p.u[1]);
    let f_minus_id = eval_f_alpha(&p.alpha, &p.a, &p.b).sub(&Matrix::identity(p.d()));
    let framing = v.mul(&f_minus_id).mul(&u2).trace();
    let nu = u1.mul(&v).add(&p.a.mul(&p.b)).sub(&p.b.mul(&p.a));
    Ok(framing + p.c.mul(&nu).trace())
}

/// `D_X` for each variable of the potential.
#[derive(Clone, Debug, PartialEq)]
pub struct Residuals<T> {
    /// `u_1 v + [A, B]`, the ADHM relation
    pub c: Matrix<T>,
    /// `v C`, a row
    pub u1: Matrix<T>,
    /// `(f_alpha(A, B) - Id) u_2 + C u_1`, a column
    pub v: Matrix<T>,
    /// `v (f_alpha(A, B) - Id)`, a row
    pub u2: Matrix<T>,
    pub a: Matrix<T>,
    pub b: Matrix<T>,
    /// `v A^i B^j u_2` over `I_m`
    pub alpha: Vec<((usize, usize), T)>,
}

impl<T: Scalar> Residuals<T> {
    pub fn blocks(&self) -> Vec<(&'static str, Vec<T>)> {
        vec![
            ("C", self.c.data.clone()),
            ("u1", self.u1.data.clone()),
            ("v", self.v.data.clone()),
            ("u2", self.u2.data.clone()),
            ("A", self.a.data.clone()),
            ("B", self.b.data.clone()),
            ("alpha", self.alpha.iter().map(|(_, x)| x.clone()).collect()),
        ]
    }

    pub fn is_critical(&self) -> bool {
        self.blocks()
            .iter()
            .all(|(_, xs)| xs.iter().all(Zero::is_zero))
    }
}

pub fn critical_residuals<T: Scalar>(p: &AdhmPoint<T>, m: usize) -> Result<Residuals<T>> {
    p.check_potential_shape(m)?;
    let d = p.d();
    let v = Matrix::row(&p.v[0]);
    let u1 = Matrix::column(&p.u[0]);
    let u2 = Matrix::column(&p.u[1]);
    let f_minus_id = eval_f_alpha(&p.alpha, &p.a, &p.b).sub(&Matrix::identity(d));
    let u2v = u2.mul(&v);

    let mut da = p.b.mul(&p.c).sub(&p.c.mul(&p.b));
    let mut db = p.c.mul(&p.a).sub(&p.a.mul(&p.c));
    for (&(i, j), coeff) in &p.alpha {
        let bj = p.b.pow(j);
        let ai = p.a.pow(i);
        for s in 0..i {
            let word = p.a.pow(i - 1 - s).mul(&bj).mul(&u2v).mul(&p.a.pow(s));
            da = da.add(&word.scale(coeff));
        }
        for s in 0..j {
            let word = p.b.pow(j - 1 - s).mul(&u2v).mul(&ai).mul(&p.b.pow(s));
            db = db.add(&word.scale(coeff));
        }
    }
    let alpha = index_set(m)
        .into_iter()
        .map(|(i, j)| ((i, j), v.mul(&p.a.pow(i)).mul(&p.b.pow(j)).mul(&u2).trace()))
        .collect();
    Ok(Residuals {
        c: u1.mul(&v).add(&p.a.mul(&p.b)).sub(&p.b.mul(&p.a)),
        u1: v.mul(&p.c),
        v: f_minus_id.mul(&u2).add(&p.c.mul(&u1)),
        u2: v.mul(&f_minus_id),
        a: da,
        b: db,
        alpha,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Dt,
    Pt,
}

/// Row-echelon span used for exact closure computations.
#[derive(Clone, Debug, Default)]
struct Span {
    basis: Vec<(usize, Vec<Q>)>,
}

impl Span {
    /// Adds `x` if it is independent; returns the reduced vector when added.
    fn insert(&mut self, x: &[Q]) -> Option<Vec<Q>> {
        let mut r = x.to_vec();
        for (pivot, b) in &self.basis {
            if !r[*pivot].is_zero() {
                let k = r[*pivot].clone();
                for (ri, bi) in r.iter_mut().zip(b) {
                    *ri -= &k * bi;
                }
            }
        }
        let pivot = r.iter().position(|c| !c.is_zero())?;
        let lead = r[pivot].clone();
        r.iter_mut().for_each(|c| *c /= &lead);
        self.basis.push((pivot, r.clone()));
        Some(r)
    }
}

/// Outcome of a stability test; `invariant_subspace` spans the proper
/// `A, B, C`-stable subspace generated by the vectors when unstable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stability {
    pub semistable: bool,
    #[serde(serialize_with = "serialize_basis")]
    pub invariant_subspace: Vec<Vec<Q>>,
}

fn serialize_basis<S: serde::Serializer>(
    b: &[Vec<Q>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(
        b.iter()
            .map(|v| v.iter().map(rational::to_wire).collect::<Vec<_>>()),
    )
}

/// `C<A, B, C>(u_1, ..)` is all of `V` (DT), or `C<A, B, C>(v_1, ..)` is all of
/// `V^dual` with the matrices acting on covectors from the right (PT).
pub fn is_semistable(p: &AdhmPoint<Q>, side: Side) -> Result<Stability> {
    p.check_shape()?;
    let d = p.d();
    let (seeds, ops) = match side {
        Side::Dt => (&p.u, [p.a.clone(), p.b.clone(), p.c.clone()]),
        Side::Pt => (&p.v, [p.a.transpose(), p.b.transpose(), p.c.transpose()]),
    };
    let mut span = Span::default();
    let mut queue: Vec<Vec<Q>> = seeds.iter().filter_map(|x| span.insert(x)).collect();
    while let Some(x) = queue.pop() {
        let col = Matrix::column(&x);
        for op in &ops {
            if let Some(y) = span.insert(&op.mul(&col).data) {
                queue.push(y);
            }
        }
    }
    let semistable = span.basis.len() == d;
    let invariant_subspace = if semistable {
        Vec::new()
    } else {
        span.basis.into_iter().map(|(_, b)| b).collect()
    };
    Ok(Stability {
        semistable,
        invariant_subspace,
    })
}

/// Dense univariate polynomials over [`Q`], coefficients in ascending degree.
pub mod poly {
    use super::*;

    pub fn trim(mut p: Vec<Q>) -> Vec<Q> {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        p
    }

    pub fn degree(p: &[Q]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    pub fn add(p: &[Q], q: &[Q]) -> Vec<Q> {
        let n = p.len().max(q.len());
        trim(
            (0..n)
                .map(|i| {
                    p.get(i).cloned().unwrap_or_else(Q::zero)
                        + q.get(i).cloned().unwrap_or_else(Q::zero)
                })
                .collect(),
        )
    }

    pub fn mul(p: &[Q], q: &[Q]) -> Vec<Q> {
        if p.is_empty() || q.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Q::zero(); p.len() + q.len() - 1];
        for (i, a) in p.iter().enumerate() {
            for (j, b) in q.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        trim(out)
    }

    pub fn derivative(p: &[Q]) -> Vec<Q> {
        trim(
            p.iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rational::int(i as i64))
                .collect(),
        )
    }

    /// Remainder of `p` modulo a nonzero `q`.
    pub fn rem(p: &[Q], q: &[Q]) -> Vec<Q> {
        let dq = degree(q).expect("division by zero polynomial");
        let mut r = trim(p.to_vec());
        while let Some(dr) = degree(&r) {
            if dr < dq {
                break;
            }
            let k = &r[dr] / &q[dq];
            for (i, c) in q.iter().enumerate() {
                r[dr - dq + i] -= &k * c;
            }
            r = trim(r);
        }
        r
    }

    /// Monic greatest common divisor; the zero polynomial if both are zero.
    pub fn gcd(p: &[Q], q: &[Q]) -> Vec<Q> {
        let (mut a, mut b) = (trim(p.to_vec()), trim(q.to_vec()));
        while degree(&b).is_some() {
            let r = rem(&a, &b);
            a = b;
            b = r;
        }
        match degree(&a) {
            Some(da) => {
                let lead = a[da].clone();
                a.iter().map(|c| c / &lead).collect()
            }
            None => a,
        }
    }
}

/// A bivariate polynomial `sum c_ij x^i y^j` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Polynomial2 {
    pub coeffs: BTreeMap<(usize, usize), Q>,
}

impl Polynomial2 {
    /// `f_alpha = 1 + sum alpha_ij x^i y^j`.
    pub fn f_alpha(alpha: &BTreeMap<(usize, usize), Q>) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0, 0), Q::one());
        for (&k, c) in alpha {
            *coeffs.entry(k).or_insert_with(Q::zero) += c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Polynomial2 { coeffs }
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&(i, j)| i + j).max()
    }

    pub fn eval(&self, x: &Q, y: &Q) -> Q {
        self.coeffs
            .iter()
            .map(|(&(i, j), c)| c * num_traits::pow(x.clone(), i) * num_traits::pow(y.clone(), j))
            .sum()
    }

    /// The top-degree form evaluated at a direction.
    pub fn top_form(&self, dx: &Q, dy: &Q) -> Q {
        let Some(deg) = self.degree() else {
            return Q::zero();
        };
        self.coeffs
            .iter()
            .filter(|(&(i, j), _)| i + j == deg)
            .map(|(&(i, j), c)| c * num_traits::pow(dx.clone(), i) * num_traits::pow(dy.clone(), j))
            .sum()
    }

    /// `t -> f(px + t dx, py + t dy)`.
    pub fn restrict(&self, base: (&Q, &Q), dir: (&Q, &Q)) -> Vec<Q> {
        let x = vec![base.0.clone(), dir.0.clone()];
        let y = vec![base.1.clone(), dir.1.clone()];
        let power = |p: &[Q], k: usize| (0..k).fold(vec![Q::one()], |acc, _| poly::mul(&acc, p));
        let mut out = Vec::new();
        for (&(i, j), c) in &self.coeffs {
            let term = poly::mul(
                &poly::mul(&power(&x, i), &power(&y, j)),
                std::slice::from_ref(c),
            );
            out = poly::add(&out, &term);
        }
        out
    }
}

/// Whether `f_alpha` is squarefree.
///
/// Along a direction where the top form does not vanish, every restriction to a
/// parallel line has full degree `D`, and a squarefree `f` has squarefree
/// restrictions on all but at most `D(D-1)` of them; a square factor survives on
/// every line. Testing `m^2 + 1` lines therefore decides the question exactly.
pub fn is_reduced(alpha: &BTreeMap<(usize, usize), Q>, m: usize) -> bool {
    let f = Polynomial2::f_alpha(alpha);
    let Some(deg) = f.degree().filter(|&d| d > 0) else {
        return true;
    };
    let deg_bound = m.max(deg);
    let zero = Q::zero();
    let one = Q::one();
    let mut directions: Vec<(Q, Q)> = (0..=deg as i64)
        .map(|k| (one.clone(), rational::int(k)))
        .collect();
    directions.push((zero.clone(), one.clone()));
    let (dx, dy) = directions
        .into_iter()
        .find(|(dx, dy)| !f.top_form(dx, dy).is_zero())
        .expect("a nonzero binary form of degree D has at most D projective roots");
    let lines = deg_bound * deg_bound + 1;
    (0..lines as i64).any(|c| {
        let c = rational::int(c);
        let base = if dx.is_zero() {
            (c, zero.clone())
        } else {
            (zero.clone(), c)
        };
        let g = f.restrict((&base.0, &base.1), (&dx, &dy));
        debug_assert_eq!(poly::degree(&g), Some(deg));
        poly::degree(&poly::gcd(&g, &poly::derivative(&g))) == Some(0)
    })
}

/// JSON form of an [`AdhmPoint`] over rationals: matrices row-major, entries `"p/q"`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AdhmPointJson {
    pub u: Vec<Vec<String>>,
    pub v: Vec<Vec<String>>,
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<String>>,
    /// `[i, j, "p/q"]` triples
    #[serde(default)]
    pub alpha: Vec<(usize, usize, String)>,
}

impl AdhmPointJson {
    pub fn parse(&self) -> Result<AdhmPoint<Q>> {
        let vecs = |xs: &[Vec<String>]| -> std::result::Result<Vec<Vec<Q>>, ParseError> {
            xs.iter()
                .map(|x| x.iter().map(|s| rational::parse_q(s)).collect())
                .collect()
        };
        let mut alpha = BTreeMap::new();
        for (i, j, s) in &self.alpha {
            if alpha.insert((*i, *j), rational::parse_q(s)?).is_some() {
                return Err(ParseError::Malformed(format!("alpha_({i},{j}) given twice")).into());
            }
        }
        let point = AdhmPoint {
            u: vecs(&self.u)?,
            v: vecs(&self.v)?,
            a: Matrix::from_rows(vecs(&self.a)?)?,
            b: Matrix::from_rows(vecs(&self.b)?)?,
            c: Matrix::from_rows(vecs(&self.c)?)?,
            alpha,
        };
        point.check_shape()?;
        Ok(point)
    }

    pub fn from_point(p: &AdhmPoint<Q>) -> Self {
        let vecs = |xs: &[Vec<Q>]| {
            xs.iter()
                .map(|x| x.iter().map(rational::to_wire).collect())
                .collect()
        };
        let mat = |m: &Matrix<Q>| vecs(&m.to_rows());
        AdhmPointJson {
            u: vecs(&p.u),
            v: vecs(&p.v),
            a: mat(&p.a),
            b: mat(&p.b),
            c: mat(&p.c),
            alpha: p
                .alpha
                .iter()
                .map(|(&(i, j), c)| (i, j, rational::to_wire(c)))
                .collect(),
        }
    }
}

/// Largest absolute entry of a residual block.
pub fn max_abs(xs: &[Q]) -> Q {
    xs.iter().map(Signed::abs).max().unwrap_or_else(Q::zero)
}
