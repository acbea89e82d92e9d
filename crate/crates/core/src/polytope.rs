//! Translated zonotopes with half-open segments and exact membership.
//!
//! A point `x` lies in a [`Zonotope`] when
//! `x = translation + sum t_k * direction_k + sum s_m * line_m`
//! for segment coefficients `t_k` in their (possibly half-open) ranges and free
//! reals `s_m`. Membership is decided by an exact linear program over the
//! coefficients; strict bounds are handled by maximizing a common slack.

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{self, frac, int, Q};
use crate::weight::{is_dominant, tau_weight, Weight};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub direction: Weight,
    #[serde(
        serialize_with = "rational::serialize_q",
        deserialize_with = "rational::deserialize_q"
    )]
    pub lo: Q,
    #[serde(
        serialize_with = "rational::serialize_q",
        deserialize_with = "rational::deserialize_q"
    )]
    pub hi: Q,
    pub lo_strict: bool,
    pub hi_strict: bool,
}

impl Segment {
    pub fn closed(direction: Weight, lo: Q, hi: Q) -> Self {
        Segment {
            direction,
            lo,
            hi,
            lo_strict: false,
            hi_strict: false,
        }
    }

    /// Whether `t` is an admissible coefficient.
    pub fn admits(&self, t: &Q) -> bool {
        let above = if self.lo_strict {
            *t > self.lo
        } else {
            *t >= self.lo
        };
        let below = if self.hi_strict {
            *t < self.hi
        } else {
            *t <= self.hi
        };
        above && below
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Zonotope {
    pub translation: Weight,
    pub segments: Vec<Segment>,
    pub lines: Vec<Weight>,
}

/// Coefficients exhibiting a point as a member of a zonotope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(serialize_with = "rational::serialize_q_vec")]
    pub segments: Vec<Q>,
    #[serde(serialize_with = "rational::serialize_q_vec")]
    pub lines: Vec<Q>,
}

impl Zonotope {
    pub fn point(translation: Weight) -> Self {
        Zonotope {
            translation,
            segments: Vec::new(),
            lines: Vec::new(),
        }
    }

    pub fn d(&self) -> usize {
        self.translation.d()
    }

    pub fn is_bounded(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn translated(&self, by: &Weight) -> Zonotope {
        Zonotope {
            translation: &self.translation + by,
            ..self.clone()
        }
    }

    /// The point given by a choice of coefficients.
    pub fn evaluate(&self, cert: &Certificate) -> Weight {
        let mut x = self.translation.clone();
        for (seg, t) in self.segments.iter().zip(&cert.segments) {
            x = &x + &seg.direction.scale(t);
        }
        for (line, s) in self.lines.iter().zip(&cert.lines) {
            x = &x + &line.scale(s);
        }
        x
    }

    /// Per-coordinate bounds `(lo, hi)` of the closure; `None` if there are lines.
    pub fn coordinate_bounds(&self) -> Option<Vec<(Q, Q)>> {
        if !self.is_bounded() {
            return None;
        }
        let mut bounds: Vec<(Q, Q)> = self
            .translation
            .coeffs()
            .iter()
            .map(|c| (c.clone(), c.clone()))
            .collect();
        for seg in &self.segments {
            for (c, dir) in seg.direction.coeffs().iter().enumerate() {
                let a = dir * &seg.lo;
                let b = dir * &seg.hi;
                let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                bounds[c].0 += lo;
                bounds[c].1 += hi;
            }
        }
        Some(bounds)
    }
}

fn root_segments(d: usize) -> Vec<Segment> {
    let mut out = Vec::new();
    for i in 0..d {
        for j in 0..d {
            if i != j {
                out.push(Segment::closed(
                    Weight::root(d, i, j),
                    Q::zero(),
                    frac(3, 2),
                ));
            }
        }
    }
    out
}

/// `W(d)`: root segments `[0, 3/2]` for every ordered pair plus the line `R tau_d`.
pub fn build_w(d: usize) -> Zonotope {
    let mut z = Zonotope::point(Weight::zero(d));
    z.segments = root_segments(d);
    if d > 0 {
        z.lines.push(tau_weight(d));
    }
    z
}

/// The hyperplane slice `W(d)_w`.
pub fn build_w_slice(d: usize, w: i64) -> Zonotope {
    let translation = if d == 0 {
        Weight::zero(0)
    } else {
        tau_weight(d).scale(&int(w))
    };
    let mut z = Zonotope::point(translation);
    z.segments = root_segments(d);
    z
}

/// `V(d)`: root segments plus `[-beta_k, 0]`.
pub fn build_v(d: usize) -> Zonotope {
    let mut z = Zonotope::point(Weight::zero(d));
    z.segments = root_segments(d);
    for k in 0..d {
        z.segments
            .push(Segment::closed(Weight::basis(d, k), -Q::one(), Q::zero()));
    }
    z
}

/// `W^a(1, d)`: root segments plus the half-open `(a/2)(-beta_k, beta_k]`.
///
/// For `a = 0` the half-open range is empty, so the polytope is empty for `d > 0`.
pub fn build_wa(d: usize, a: usize) -> Zonotope {
    let h = frac(a as i64, 2);
    let mut z = Zonotope::point(Weight::zero(d));
    z.segments = root_segments(d);
    for k in 0..d {
        z.segments.push(Segment {
            direction: Weight::basis(d, k),
            lo: -h.clone(),
            hi: h.clone(),
            lo_strict: true,
            hi_strict: false,
        });
    }
    z
}

/// `V^a(1, d)`: root segments, `(a/2)[-beta_k, beta_k]` and `[-beta_k, 0]`.
pub fn build_va(d: usize, a: usize) -> Zonotope {
    let h = frac(a as i64, 2);
    let mut z = Zonotope::point(Weight::zero(d));
    z.segments = root_segments(d);
    for k in 0..d {
        z.segments
            .push(Segment::closed(Weight::basis(d, k), -h.clone(), h.clone()));
    }
    for k in 0..d {
        z.segments
            .push(Segment::closed(Weight::basis(d, k), -Q::one(), Q::zero()));
    }
    z
}

pub fn contains(p: &Zonotope, x: &Weight) -> Result<bool> {
    Ok(certificate(p, x)?.is_some())
}

/// Segment and line coefficients realizing `x`, or `None` if `x` is not a member.
pub fn certificate(p: &Zonotope, x: &Weight) -> Result<Option<Certificate>> {
    check_dim(p.d(), x.d())?;
    for seg in &p.segments {
        check_dim(p.d(), seg.direction.d())?;
    }
    for line in &p.lines {
        check_dim(p.d(), line.d())?;
    }

    let nseg = p.segments.len();
    let mut lp = LinearProgram::new(0);
    for seg in &p.segments {
        lp.add_var(Some(seg.lo.clone()), Some(seg.hi.clone()));
    }
    for _ in &p.lines {
        lp.add_var(None, None);
    }
    let strict: Vec<(usize, bool)> = p
        .segments
        .iter()
        .enumerate()
        .flat_map(|(k, s)| {
            let lo = s.lo_strict.then_some((k, true));
            let hi = s.hi_strict.then_some((k, false));
            lo.into_iter().chain(hi)
        })
        .collect();
    let slack = if strict.is_empty() {
        None
    } else {
        Some(lp.add_var(Some(Q::zero()), Some(Q::one())))
    };
    let gaps: Vec<usize> = strict
        .iter()
        .map(|_| lp.add_var(Some(Q::zero()), None))
        .collect();
    let n = lp.num_vars();

    for c in 0..p.d() {
        let mut row = vec![Q::zero(); n];
        for (k, seg) in p.segments.iter().enumerate() {
            row[k] = seg.direction.coeffs()[c].clone();
        }
        for (m, line) in p.lines.iter().enumerate() {
            row[nseg + m] = line.coeffs()[c].clone();
        }
        lp.add_equality(row, &x.coeffs()[c] - &p.translation.coeffs()[c]);
    }
    // t_k - slack - gap = lo_k  or  t_k + slack + gap = hi_k
    for (&(k, is_lo), &gap) in strict.iter().zip(&gaps) {
        let s = slack.expect("slack exists when strict bounds exist");
        let mut row = vec![Q::zero(); n];
        row[k] = Q::one();
        let (sign, rhs) = if is_lo {
            (-Q::one(), p.segments[k].lo.clone())
        } else {
            (Q::one(), p.segments[k].hi.clone())
        };
        row[s] = sign.clone();
        row[gap] = sign;
        lp.add_equality(row, rhs);
    }
    if let Some(s) = slack {
        let mut obj = vec![Q::zero(); n];
        obj[s] = Q::one();
        lp.set_objective(obj);
    }

    match lp.solve()? {
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("slack is bounded"),
        LpOutcome::Optimal { value, x: sol } => {
            if slack.is_some() && !value.is_positive() {
                return Ok(None);
            }
            Ok(Some(Certificate {
                segments: sol[..nseg].to_vec(),
                lines: sol[nseg..nseg + p.lines.len()].to_vec(),
            }))
        }
    }
}

/// Non-decreasing integer tuples with entries in the given boxes, in
/// lexicographic order.
pub(crate) fn dominant_box(bounds: &[(i64, i64)]) -> Vec<Vec<i64>> {
    fn go(bounds: &[(i64, i64)], prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        let c = prefix.len();
        if c == bounds.len() {
            out.push(prefix.clone());
            return;
        }
        let start = match prefix.last() {
            Some(&prev) => bounds[c].0.max(prev),
            None => bounds[c].0,
        };
        for v in start..=bounds[c].1 {
            prefix.push(v);
            go(bounds, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if bounds.iter().any(|(lo, hi)| lo > hi) {
        return out;
    }
    go(bounds, &mut Vec::new(), &mut out);
    out
}

/// All dominant integral `chi` with `chi + shift` in `p`, sorted lexicographically.
pub fn enumerate_dominant_integral(p: &Zonotope, shift: &Weight) -> Result<Vec<Weight>> {
    check_dim(p.d(), shift.d())?;
    let bounds = p.coordinate_bounds().ok_or(Error::Unbounded)?;
    let boxes: Vec<(i64, i64)> = bounds
        .iter()
        .zip(shift.coeffs())
        .map(|((lo, hi), s)| {
            (
                rational::ceil_i64(&(lo - s)),
                rational::floor_i64(&(hi - s)),
            )
        })
        .collect();
    let candidates = dominant_box(&boxes);
    let hits: Result<Vec<Option<Weight>>> = candidates
        .into_par_iter()
        .map(|c| {
            let chi = Weight::from_ints(&c);
            debug_assert!(is_dominant(&chi, false));
            Ok(contains(p, &(&chi + shift))?.then_some(chi))
        })
        .collect();
    Ok(hits?.into_iter().flatten().collect())
}
