//! Level, `p` and type invariants of weights in `V^a(1, d)`.
//!
//! Given `chi` with `chi + rho + delta` in `V^a(1, d)`, `delta = mu * sigma_d`,
//! the level `e(chi)` is the unique `e` for which
//!
//! ```text
//! chi + rho + delta = sum_{j<i<=e} c_ij (b_i - b_j) + sum_{e<j<i} c_ij (b_i - b_j)
//!                   + sum_{j<=e<i} 3/2 (b_i - b_j) + sum_i c_i b_i
//! ```
//!
//! with `0 <= c_ij <= 3/2`, `c_i` in `[-(a+2)/2, -a/2]` for `i <= e` and in
//! `(-a/2, a/2]` for `i > e`. Each candidate level is a translated zonotope,
//! so membership is decided by [`polytope::certificate`].

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{self, Segment, Zonotope};
use crate::rational::{self, frac, int, Q};
use crate::weight::{is_dominant, pair_unchecked, rho, sigma, Cocharacter, Weight};

/// `delta = mu * sigma_d`.
pub fn delta(mu: &Q, d: usize) -> Weight {
    sigma(d).scale(mu)
}

/// `2 mu l` is not an integer for any `1 <= l <= d`.
pub fn is_generic_mu(mu: &Q, d: usize) -> bool {
    (1..=d as i64).all(|l| !(mu * int(2 * l)).is_integer())
}

/// `chi + rho + delta`.
pub fn shifted(chi: &Weight, mu: &Q) -> Weight {
    &(chi + &rho(chi.d())) + &delta(mu, chi.d())
}

/// Coefficients of a level decomposition. Indices are one-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionWitness {
    pub e: usize,
    /// `(i, j, c_ij)` for every `j < i`, including the forced `3/2` entries.
    #[serde(serialize_with = "serialize_roots")]
    pub c_roots: Vec<(usize, usize, Q)>,
    #[serde(serialize_with = "rational::serialize_q_vec")]
    pub c_diag: Vec<Q>,
}

fn serialize_roots<S: serde::Serializer>(
    roots: &[(usize, usize, Q)],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(roots.iter().map(|(i, j, c)| (i, j, rational::to_wire(c))))
}

impl DecompositionWitness {
    /// The point the witness decomposes.
    pub fn recompose(&self) -> Weight {
        let d = self.c_diag.len();
        let mut x = Weight::new(self.c_diag.clone());
        for (i, j, c) in &self.c_roots {
            x = &x + &Weight::root(d, i - 1, j - 1).scale(c);
        }
        x
    }

    /// `sum_{i <= e} (c_i + a/2)`.
    pub fn p_value(&self, a: usize) -> Q {
        let h = frac(a as i64, 2);
        self.c_diag[..self.e].iter().map(|c| c + &h).sum()
    }
}

/// The zonotope of points admitting a level-`e` decomposition.
pub fn level_zonotope(d: usize, e: usize, a: usize) -> Zonotope {
    assert!(e <= d);
    let three_halves = frac(3, 2);
    let h = frac(a as i64, 2);
    let mut translation = Weight::zero(d);
    for i in e..d {
        for j in 0..e {
            translation = &translation + &Weight::root(d, i, j).scale(&three_halves);
        }
    }
    let mut z = Zonotope::point(translation);
    for i in 0..d {
        for j in 0..i {
            if (i < e) == (j < e) {
                z.segments.push(Segment::closed(
                    Weight::root(d, i, j),
                    Q::zero(),
                    three_halves.clone(),
                ));
            }
        }
    }
    for i in 0..d {
        let seg = if i < e {
            Segment::closed(Weight::basis(d, i), -&h - int(1), -h.clone())
        } else {
            Segment {
                direction: Weight::basis(d, i),
                lo: -h.clone(),
                hi: h.clone(),
                lo_strict: true,
                hi_strict: false,
            }
        };
        z.segments.push(seg);
    }
    z
}

fn witness_from(d: usize, e: usize, cert: &polytope::Certificate) -> DecompositionWitness {
    let mut values = cert.segments.iter();
    let mut c_roots = Vec::new();
    for i in 0..d {
        for j in 0..i {
            let c = if (i < e) == (j < e) {
                values.next().expect("root coefficient").clone()
            } else {
                frac(3, 2)
            };
            c_roots.push((i + 1, j + 1, c));
        }
    }
    let c_diag = values.cloned().collect();
    DecompositionWitness { e, c_roots, c_diag }
}

/// Every level whose decomposition accepts the point `x = chi + rho + delta`.
pub fn passing_levels(x: &Weight, a: usize) -> Result<Vec<DecompositionWitness>> {
    let d = x.d();
    let mut out = Vec::new();
    for e in 0..=d {
        if let Some(cert) = polytope::certificate(&level_zonotope(d, e, a), x)? {
            out.push(witness_from(d, e, &cert));
        }
    }
    Ok(out)
}

/// The unique level of a point of `V^a(1, d)` given directly as `chi + rho + delta`.
pub fn level_of_point(x: &Weight, a: usize) -> Result<DecompositionWitness> {
    if !polytope::contains(&polytope::build_va(x.d(), a), x)? {
        return Err(Error::NotInPolytope);
    }
    let mut found = passing_levels(x, a)?;
    match found.len() {
        0 => Err(Error::NoLevel),
        1 => Ok(found.pop().expect("one level")),
        _ => Err(Error::MultipleLevels(found.iter().map(|w| w.e).collect())),
    }
}

fn check_dominant_integral(chi: &Weight) -> Result<()> {
    if chi.is_integral() && is_dominant(chi, false) {
        Ok(())
    } else {
        Err(Error::NotDominantIntegral)
    }
}

/// The level `e(chi)` together with its decomposition.
pub fn find_level_e(chi: &Weight, a: usize, mu: &Q) -> Result<DecompositionWitness> {
    check_dominant_integral(chi)?;
    level_of_point(&shifted(chi, mu), a)
}

/// `p_l(chi) = <tau_l, chi + rho + delta> + 3/2 l (d - l) + a/2 l`.
pub fn p_l(chi: &Weight, l: usize, a: usize, mu: &Q) -> Q {
    let d = chi.d();
    assert!(l <= d);
    let l_q = int(l as i64);
    pair_unchecked(&Cocharacter::tau(l, d), &shifted(chi, mu))
        + frac(3, 2) * &l_q * int((d - l) as i64)
        + frac(a as i64, 2) * l_q
}

/// `p(chi) = p_{e(chi)}(chi)`, cross-checked against the witness.
pub fn p(chi: &Weight, a: usize, mu: &Q) -> Result<Q> {
    let witness = find_level_e(chi, a, mu)?;
    Ok(p_checked(chi, &witness, a, mu))
}

pub(crate) fn p_checked(chi: &Weight, witness: &DecompositionWitness, a: usize, mu: &Q) -> Q {
    let value = p_l(chi, witness.e, a, mu);
    assert_eq!(
        value,
        witness.p_value(a),
        "p(chi) disagrees with its witness"
    );
    assert!(!value.is_positive(), "p(chi) = {value} is positive");
    value
}

/// `v_i = w_i + d_i (d' + sum_{j>i} d_j - sum_{j<i} d_j)`.
pub fn transform_w_to_v(parts: &[(usize, i64)], d_prime: usize) -> Vec<i64> {
    let offsets = transform_offsets(parts, d_prime);
    parts
        .iter()
        .zip(offsets)
        .map(|(&(_, w), o)| w + o)
        .collect()
}

/// Inverse of [`transform_w_to_v`]; `parts` carries `(d_i, v_i)`.
pub fn transform_v_to_w(parts: &[(usize, i64)], d_prime: usize) -> Vec<i64> {
    let offsets = transform_offsets(parts, d_prime);
    parts
        .iter()
        .zip(offsets)
        .map(|(&(_, v), o)| v - o)
        .collect()
}

fn transform_offsets(parts: &[(usize, i64)], d_prime: usize) -> Vec<i64> {
    let sizes: Vec<i64> = parts.iter().map(|&(d, _)| d as i64).collect();
    (0..sizes.len())
        .map(|i| {
            let after: i64 = sizes[i + 1..].iter().sum();
            let before: i64 = sizes[..i].iter().sum();
            sizes[i] * (d_prime as i64 + after - before)
        })
        .collect()
}

/// A summand label `S = ((d_1, w_1), ..., (d_k, w_k); d')` at fixed `(d, a, mu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TypeS {
    pub d: usize,
    pub a: usize,
    pub mu: Q,
    pub parts: Vec<(usize, i64)>,
    pub d_prime: usize,
}

impl TypeS {
    pub fn e(&self) -> usize {
        self.d - self.d_prime
    }

    pub fn v(&self) -> Vec<i64> {
        transform_w_to_v(&self.parts, self.d_prime)
    }

    /// `-1 - mu - a/2 <= v_1/d_1 < ... < v_k/d_k <= -mu - a/2`, with strict ends
    /// when `closed` is false.
    pub fn satisfies_chain(&self, closed: bool) -> bool {
        chain_holds(&self.parts, self.d_prime, self.a, &self.mu, closed)
    }
}

pub(crate) fn chain_holds(
    parts: &[(usize, i64)],
    d_prime: usize,
    a: usize,
    mu: &Q,
    closed: bool,
) -> bool {
    let v = transform_w_to_v(parts, d_prime);
    let ratios: Vec<Q> = parts
        .iter()
        .zip(&v)
        .map(|(&(di, _), &vi)| frac(vi, di as i64))
        .collect();
    let upper = -mu - frac(a as i64, 2);
    let lower = &upper - int(1);
    let (Some(first), Some(last)) = (ratios.first(), ratios.last()) else {
        return true;
    };
    let ends = if closed {
        *first >= lower && *last <= upper
    } else {
        *first > lower && *last < upper
    };
    ends && ratios.windows(2).all(|r| r[0] < r[1])
}

/// The two expressions `sum w_i - (d - d')(-mu - d' - a/2)` and
/// `sum v_i - (d - d')(-mu - a/2)` for `p(S)`.
pub fn p_of_type_both(s: &TypeS) -> (Q, Q) {
    let e = int(s.e() as i64);
    let h = frac(s.a as i64, 2);
    let sum_w: i64 = s.parts.iter().map(|&(_, w)| w).sum();
    let sum_v: i64 = s.v().iter().sum();
    let from_w = int(sum_w) - &e * (-&s.mu - int(s.d_prime as i64) - &h);
    let from_v = int(sum_v) - &e * (-&s.mu - &h);
    (from_w, from_v)
}

/// `p(S)`; panics if its two expressions disagree.
pub fn p_of_type(s: &TypeS) -> Q {
    let (from_w, from_v) = p_of_type_both(s);
    assert_eq!(from_w, from_v, "the two expressions for p(S) disagree");
    from_w
}

/// Clause three of the order: a comparison between types of equal `p` and
/// equal `sum d_i`. The default [`Incomparable`] never relates two types.
pub trait TieBreak {
    fn in_o(&self, s_prime: &TypeS, s: &TypeS) -> bool;
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Incomparable;

impl TieBreak for Incomparable {
    fn in_o(&self, _: &TypeS, _: &TypeS) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderVerdict {
    InO,
    NotInO,
    BothDirections,
}

/// Whether `(s_prime, s)` lies in the order `O`.
pub fn in_order(s_prime: &TypeS, s: &TypeS, tie: &dyn TieBreak) -> bool {
    let (pp, ps) = (p_of_type(s_prime), p_of_type(s));
    if pp != ps {
        return pp > ps;
    }
    match s_prime.e().cmp(&s.e()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Greater => false,
        std::cmp::Ordering::Equal => tie.in_o(s_prime, s),
    }
}

pub fn compare_types(s_prime: &TypeS, s: &TypeS) -> OrderVerdict {
    compare_types_with(s_prime, s, &Incomparable)
}

pub fn compare_types_with(s_prime: &TypeS, s: &TypeS, tie: &dyn TieBreak) -> OrderVerdict {
    match (in_order(s_prime, s, tie), in_order(s, s_prime, tie)) {
        (true, true) => OrderVerdict::BothDirections,
        (true, false) => OrderVerdict::InO,
        _ => OrderVerdict::NotInO,
    }
}

/// Compositions of `n` (ordered tuples of positive integers), lexicographic.
pub fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for rest in compositions(n - first) {
            let mut c = vec![first];
            c.extend(rest);
            out.push(c);
        }
    }
    out
}

/// The full decomposition of `chi`: level, type and components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeDecomposition {
    pub level: DecompositionWitness,
    pub p: Q,
    pub ty: TypeS,
    /// `chi_1, ..., chi_k`, each in `M(d_i)`.
    pub components: Vec<Weight>,
    /// `chi'` in `M(d')`.
    pub residual: Weight,
}

/// The type of a dominant integral weight with `chi + rho + delta` in `V^a(1, d)`.
pub fn type_of_weight(chi: &Weight, a: usize, mu: &Q) -> Result<TypeDecomposition> {
    let level = find_level_e(chi, a, mu)?;
    let p = p_checked(chi, &level, a, mu);
    let d = chi.d();
    let e = level.e;
    let d_prime = d - e;
    let residual = chi.block(e, d_prime);
    let residual_shift = &rho(d_prime) + &sigma(d_prime).scale(&(mu - int(e as i64)));
    if !polytope::contains(
        &polytope::build_wa(d_prime, a),
        &(&residual + &residual_shift),
    )? {
        return Err(Error::NoDecomposition);
    }
    let head = chi.block(0, e);
    let mut found = Vec::new();
    for comp in compositions(e) {
        let mut parts = Vec::with_capacity(comp.len());
        let mut blocks = Vec::with_capacity(comp.len());
        let mut start = 0;
        let mut ok = true;
        for &di in &comp {
            let block = head.block(start, di);
            start += di;
            let wi = rational::as_i64(&block.total()).expect("integral block total");
            if !polytope::contains(&polytope::build_w_slice(di, wi), &(&block + &rho(di)))? {
                ok = false;
                break;
            }
            parts.push((di, wi));
            blocks.push(block);
        }
        if ok && chain_holds(&parts, d_prime, a, mu, true) {
            found.push((parts, blocks));
        }
    }
    match found.len() {
        0 => Err(Error::NoDecomposition),
        1 => {
            let (parts, components) = found.pop().expect("one decomposition");
            let ty = TypeS {
                d,
                a,
                mu: mu.clone(),
                parts,
                d_prime,
            };
            assert_eq!(p_of_type(&ty), p, "p(S(chi)) differs from p(chi)");
            Ok(TypeDecomposition {
                level,
                p,
                ty,
                components,
                residual,
            })
        }
        n => Err(Error::MultipleDecompositions(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mu0() -> Q {
        frac(-9, 14)
    }

    #[test]
    fn level_in_one_dimension() {
        let w = find_level_e(&Weight::from_ints(&[0]), 1, &mu0()).unwrap();
        assert_eq!(w.e, 1);
        assert_eq!(w.recompose(), Weight::new(vec![frac(-9, 14)]));
        let w = find_level_e(&Weight::from_ints(&[1]), 1, &mu0()).unwrap();
        assert_eq!(w.e, 0);
    }

    #[test]
    fn p_in_one_dimension() {
        assert_eq!(p(&Weight::from_ints(&[0]), 1, &mu0()).unwrap(), frac(-1, 7));
        assert_eq!(p(&Weight::from_ints(&[1]), 1, &mu0()).unwrap(), Q::zero());
    }

    #[test]
    fn origin_has_level_zero() {
        for a in 1..3 {
            assert_eq!(level_of_point(&Weight::zero(2), a).unwrap().e, 0);
        }
    }

    #[test]
    fn outside_points_are_rejected() {
        let chi = Weight::from_ints(&[7]);
        assert_eq!(find_level_e(&chi, 1, &mu0()), Err(Error::NotInPolytope));
        let chi = Weight::from_ints(&[1, 0]);
        assert_eq!(
            find_level_e(&chi, 1, &mu0()),
            Err(Error::NotDominantIntegral)
        );
    }

    #[test]
    fn transform_examples() {
        assert_eq!(transform_w_to_v(&[(3, 5)], 0), vec![5]);
        assert_eq!(transform_w_to_v(&[(1, 4), (1, 9)], 1), vec![6, 9]);
        let parts = [(2, -3), (1, 4), (3, 0)];
        let v = transform_w_to_v(&parts, 2);
        let back: Vec<(usize, i64)> = parts.iter().zip(&v).map(|(&(d, _), &v)| (d, v)).collect();
        assert_eq!(transform_v_to_w(&back, 2), vec![-3, 4, 0]);
        assert_eq!(v.iter().sum::<i64>() - 1, 6 * 2);
    }

    #[test]
    fn type_in_one_dimension() {
        let t = type_of_weight(&Weight::from_ints(&[0]), 1, &mu0()).unwrap();
        assert_eq!(t.ty.parts, vec![(1, 0)]);
        assert_eq!(t.ty.d_prime, 0);
        let t = type_of_weight(&Weight::from_ints(&[1]), 1, &mu0()).unwrap();
        assert!(t.ty.parts.is_empty());
        assert_eq!(t.ty.d_prime, 1);
        assert_eq!(t.residual, Weight::from_ints(&[1]));
    }

    #[test]
    fn order_clauses() {
        let mk = |parts: Vec<(usize, i64)>, d_prime| TypeS {
            d: 2,
            a: 1,
            mu: mu0(),
            parts,
            d_prime,
        };
        let high = mk(vec![], 2);
        let low = mk(vec![(1, -1)], 1);
        assert!(low.satisfies_chain(false));
        assert!(p_of_type(&high) > p_of_type(&low));
        assert_eq!(compare_types(&high, &low), OrderVerdict::InO);
        assert_eq!(compare_types(&low, &high), OrderVerdict::NotInO);
        assert_eq!(compare_types(&low, &low), OrderVerdict::NotInO);
    }

    #[test]
    fn compositions_are_lexicographic() {
        assert_eq!(
            compositions(3),
            vec![vec![1, 1, 1], vec![1, 2], vec![2, 1], vec![3]]
        );
        assert_eq!(compositions(0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn genericity() {
        assert!(is_generic_mu(&mu0(), 4));
        assert!(is_generic_mu(&frac(-1, 3), 2));
        assert!(!is_generic_mu(&frac(-1, 3), 3));
        assert!(!is_generic_mu(&frac(-1, 2), 1));
    }
}
