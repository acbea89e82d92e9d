//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use wallx::invariants::TypeS;
use wallx::polytope::Zonotope;
use wallx::rational::{int, Q};
use wallx::sod::{enumerate_summands, residual_generators, slice_generators};
use wallx::Weight;

/// `coeffs . t <= rhs`, or `<` when strict.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Ineq {
    coeffs: Vec<Q>,
    rhs: Q,
    strict: bool,
}

impl Ineq {
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Q::zero);
        if !scale.is_zero() {
            for c in &mut self.coeffs {
                *c /= &scale;
            }
            self.rhs /= &scale;
        }
        self
    }
}

/// A segment `[lo, hi] * direction` with open ends flagged.
type Interval = (Q, Q, bool, bool);

/// Merges collinear segments: a Minkowski sum of parallel segments is a segment.
fn merged_segments(p: &Zonotope) -> Vec<(Weight, Interval)> {
    let mut merged: BTreeMap<Weight, Interval> = BTreeMap::new();
    for s in &p.segments {
        let flip = s
            .direction
            .coeffs()
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_negative());
        let (dir, iv) = if flip {
            (-&s.direction, (-&s.hi, -&s.lo, s.hi_strict, s.lo_strict))
        } else {
            (
                s.direction.clone(),
                (s.lo.clone(), s.hi.clone(), s.lo_strict, s.hi_strict),
            )
        };
        merged
            .entry(dir)
            .and_modify(|acc| {
                acc.0 += &iv.0;
                acc.1 += &iv.1;
                acc.2 |= iv.2;
                acc.3 |= iv.3;
            })
            .or_insert(iv);
    }
    merged.into_iter().collect()
}

/// Membership by Fourier-Motzkin elimination over the segment and line
/// coefficients, after eliminating what the equalities determine.
pub fn fm_contains(p: &Zonotope, x: &Weight) -> bool {
    let empty = |s: &wallx::polytope::Segment| {
        s.lo > s.hi || (s.lo == s.hi && (s.lo_strict || s.hi_strict))
    };
    if p.segments.iter().any(empty) {
        return false;
    }
    let segments = merged_segments(p);
    let n = segments.len() + p.lines.len();
    let d = p.d();
    let target = x - &p.translation;
    // equalities: sum t_k dir_k + sum s_m line_m = target
    let mut eqs: Vec<(Vec<Q>, Q)> = (0..d)
        .map(|r| {
            let mut row: Vec<Q> = segments
                .iter()
                .map(|(dir, _)| dir.coeffs()[r].clone())
                .collect();
            row.extend(p.lines.iter().map(|l| l.coeffs()[r].clone()));
            (row, target.coeffs()[r].clone())
        })
        .collect();
    let mut ineqs = Vec::new();
    for (k, (_, (lo, hi, lo_strict, hi_strict))) in segments.iter().enumerate() {
        let mut up = vec![Q::zero(); n];
        up[k] = Q::one();
        ineqs.push(Ineq {
            coeffs: up.clone(),
            rhs: hi.clone(),
            strict: *hi_strict,
        });
        let down: Vec<Q> = up.iter().map(|c| -c).collect();
        ineqs.push(Ineq {
            coeffs: down,
            rhs: -lo,
            strict: *lo_strict,
        });
    }
    // Gaussian substitution
    let mut alive: Vec<bool> = vec![true; n];
    while let Some(pos) = eqs
        .iter()
        .position(|(row, _)| row.iter().any(|c| !c.is_zero()))
    {
        let (row, rhs) = eqs.swap_remove(pos);
        let v = row
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero entry");
        alive[v] = false;
        let pivot = row[v].clone();
        let substitute = |coeffs: &mut Vec<Q>, b: &mut Q| {
            let f = &coeffs[v] / &pivot;
            if f.is_zero() {
                return;
            }
            for (c, r) in coeffs.iter_mut().zip(&row) {
                *c -= &f * r;
            }
            *b -= &f * &rhs;
        };
        for (r, b) in eqs.iter_mut() {
            substitute(r, b);
        }
        for q in ineqs.iter_mut() {
            substitute(&mut q.coeffs, &mut q.rhs);
        }
    }
    if eqs.iter().any(|(_, b)| !b.is_zero()) {
        return false;
    }
    let mut set: BTreeSet<Ineq> = ineqs.into_iter().map(Ineq::normalized).collect();
    for v in (0..n).filter(|&v| alive[v]) {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for q in set {
            if q.coeffs[v].is_positive() {
                pos.push(q);
            } else if q.coeffs[v].is_negative() {
                neg.push(q);
            } else {
                rest.push(q);
            }
        }
        let mut next: BTreeSet<Ineq> = rest.into_iter().collect();
        for a in &pos {
            for b in &neg {
                let fa = -&b.coeffs[v];
                let fb = a.coeffs[v].clone();
                let coeffs = a
                    .coeffs
                    .iter()
                    .zip(&b.coeffs)
                    .map(|(x, y)| x * &fa + y * &fb)
                    .collect();
                let rhs = &a.rhs * &fa + &b.rhs * &fb;
                next.insert(
                    Ineq {
                        coeffs,
                        rhs,
                        strict: a.strict || b.strict,
                    }
                    .normalized(),
                );
            }
        }
        set = next;
    }
    set.iter().all(|q| {
        if q.strict {
            q.rhs.is_positive()
        } else {
            !q.rhs.is_negative()
        }
    })
}

// ---- bivariate polynomials for the reducedness oracle ----

type Uni = Vec<Q>;

fn trim(mut p: Uni) -> Uni {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn uni_mul(p: &Uni, q: &Uni) -> Uni {
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

fn uni_sub(p: &Uni, q: &Uni) -> Uni {
    let n = p.len().max(q.len());
    trim(
        (0..n)
            .map(|i| {
                p.get(i).cloned().unwrap_or_else(Q::zero)
                    - q.get(i).cloned().unwrap_or_else(Q::zero)
            })
            .collect(),
    )
}

/// Quotient and remainder in `Q[x]`.
fn uni_divmod(p: &Uni, q: &Uni) -> (Uni, Uni) {
    let q = trim(q.clone());
    let mut r = trim(p.clone());
    let mut quo = vec![Q::zero(); r.len().max(1)];
    while r.len() >= q.len() && !r.is_empty() {
        let shift = r.len() - q.len();
        let f = r.last().unwrap() / q.last().unwrap();
        quo[shift] += &f;
        for (i, c) in q.iter().enumerate() {
            r[i + shift] -= &f * c;
        }
        r = trim(r);
    }
    (trim(quo), r)
}

fn uni_gcd(p: &Uni, q: &Uni) -> Uni {
    let (mut a, mut b) = (trim(p.clone()), trim(q.clone()));
    while !b.is_empty() {
        let r = uni_divmod(&a, &b).1;
        a = b;
        b = r;
    }
    if let Some(lead) = a.last().cloned() {
        for c in &mut a {
            *c /= &lead;
        }
    }
    a
}

/// A polynomial in `y` with coefficients in `Q[x]`.
type Bi = Vec<Uni>;

fn bi_trim(mut p: Bi) -> Bi {
    for c in &mut p {
        *c = trim(std::mem::take(c));
    }
    while p.last().is_some_and(|c| c.is_empty()) {
        p.pop();
    }
    p
}

fn content(p: &Bi) -> Uni {
    p.iter().fold(Vec::new(), |g, c| uni_gcd(&g, c))
}

fn primitive(p: &Bi) -> Bi {
    let c = content(p);
    bi_trim(p.iter().map(|x| uni_divmod(x, &c).0).collect())
}

/// Pseudo-remainder of `a` by `b` in `y`.
fn prem(a: &Bi, b: &Bi) -> Bi {
    let mut r = bi_trim(a.clone());
    let lead = b.last().unwrap().clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let top = r.last().unwrap().clone();
        let mut next: Bi = r.iter().map(|c| uni_mul(c, &lead)).collect();
        for (i, c) in b.iter().enumerate() {
            next[i + shift] = uni_sub(&next[i + shift], &uni_mul(c, &top));
        }
        r = bi_trim(next);
    }
    r
}

/// Gcd in `Q[x, y]` by the primitive polynomial remainder sequence.
fn bi_gcd(a: &Bi, b: &Bi) -> Bi {
    let (a, b) = (bi_trim(a.clone()), bi_trim(b.clone()));
    if a.is_empty() {
        return b;
    }
    if b.is_empty() {
        return a;
    }
    let c = uni_gcd(&content(&a), &content(&b));
    let (mut p, mut q) = (primitive(&a), primitive(&b));
    if p.len() < q.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        let r = prem(&p, &q);
        p = q;
        q = if r.is_empty() { r } else { primitive(&r) };
    }
    p.into_iter().map(|x| uni_mul(&x, &c)).collect()
}

fn bi_total_degree(p: &Bi) -> usize {
    p.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(j, c)| j + c.len() - 1)
        .max()
        .unwrap_or(0)
}

fn bi_from_terms(terms: &BTreeMap<(usize, usize), Q>) -> Bi {
    let mut out: Bi = Vec::new();
    for (&(i, j), c) in terms {
        if out.len() <= j {
            out.resize(j + 1, Vec::new());
        }
        if out[j].len() <= i {
            out[j].resize(i + 1, Q::zero());
        }
        out[j][i] += c;
    }
    bi_trim(out)
}

fn bi_dx(p: &Bi) -> Bi {
    bi_trim(
        p.iter()
            .map(|c| {
                c.iter()
                    .enumerate()
                    .skip(1)
                    .map(|(i, x)| x * int(i as i64))
                    .collect()
            })
            .collect(),
    )
}

fn bi_dy(p: &Bi) -> Bi {
    bi_trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.iter().map(|x| x * int(j as i64)).collect())
            .collect(),
    )
}

/// `f = 1 + sum alpha_ij x^i y^j` is squarefree iff `gcd(f, f_x, f_y)` is constant.
pub fn prs_squarefree(alpha: &BTreeMap<(usize, usize), Q>) -> bool {
    let mut terms = alpha.clone();
    *terms.entry((0, 0)).or_insert_with(Q::zero) += Q::one();
    let f = bi_from_terms(&terms);
    let g = bi_gcd(&bi_gcd(&f, &bi_dx(&f)), &bi_dy(&f));
    bi_total_degree(&g) == 0
}

/// Expands `g^2 h` for polynomials given by their terms.
pub fn square_times(
    g: &BTreeMap<(usize, usize), Q>,
    h: &BTreeMap<(usize, usize), Q>,
) -> BTreeMap<(usize, usize), Q> {
    let mul = |p: &BTreeMap<(usize, usize), Q>, q: &BTreeMap<(usize, usize), Q>| {
        let mut out: BTreeMap<(usize, usize), Q> = BTreeMap::new();
        for (&(i, j), a) in p {
            for (&(k, l), b) in q {
                *out.entry((i + k, j + l)).or_insert_with(Q::zero) += a * b;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    };
    mul(&mul(g, g), h)
}

// ---- reverse construction of the type bijection ----

/// Every weight assembled from a summand and one generator per factor, with its label.
pub fn assemble_from_summands(d: usize, a: usize, mu: &Q) -> Vec<(Weight, TypeS)> {
    let mut out = Vec::new();
    for s in enumerate_summands(d, a, mu, true).unwrap() {
        let mut partial: Vec<Weight> = vec![Weight::zero(0)];
        for &(di, wi) in &s.parts {
            let gens = slice_generators(di, wi).unwrap();
            partial = partial
                .iter()
                .flat_map(|p| gens.iter().map(move |g| Weight::concat([p, g])))
                .collect();
        }
        let tails = residual_generators(s.d_prime, a, mu, s.e()).unwrap();
        for p in &partial {
            for t in &tails {
                out.push((Weight::concat([p, t]), s.clone()));
            }
        }
    }
    out
}

/// Generic and non-generic parameter pairs used by the sweeps.
pub fn sweep_mus(a: usize) -> [Q; 2] {
    [
        -wallx::rational::frac(a as i64, 2) - wallx::rational::frac(1, 7),
        wallx::rational::frac(-1, 3),
    ]
}
