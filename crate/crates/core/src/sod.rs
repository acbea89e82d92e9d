//! Summand labels of the semiorthogonal decomposition and window bookkeeping.
//!
//! A summand is a [`TypeS`] whose `v`-tuple satisfies
//! `-1 - mu - a/2 < v_1/d_1 < ... < v_k/d_k < -mu - a/2`
//! (or the closed variant). Its generators are products of dominant integral
//! weights of `W(d_i)_{w_i}` (shifted by `rho_i`) and of `W^a(1, d')` shifted by
//! `rho' + (mu - e) sigma_{d'}`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{compositions, delta, is_generic_mu, transform_v_to_w, TypeS};
use crate::polytope::{build_va, build_w_slice, build_wa, enumerate_dominant_integral};
use crate::rational::{self, frac, int, Q};
use crate::weight::{lambda_weight_range, pair_unchecked, rho, sigma, Cocharacter, Weight};

/// Every summand label for `(d, a, mu)`, ordered by `d'` descending and then
/// lexicographically on the parts.
pub fn enumerate_summands(d: usize, a: usize, mu: &Q, closed: bool) -> Result<Vec<TypeS>> {
    if !closed && !is_generic_mu(mu, d) {
        return Err(Error::NonGenericMu {
            mu: rational::to_wire(mu),
            d,
        });
    }
    let upper = -mu - frac(a as i64, 2);
    let lower = &upper - int(1);
    let mut out = Vec::new();
    for d_prime in (0..=d).rev() {
        let mut labels = Vec::new();
        for comp in compositions(d - d_prime) {
            let ranges: Vec<(i64, i64)> = comp
                .iter()
                .map(|&di| {
                    let di = int(di as i64);
                    let lo = &lower * &di;
                    let hi = &upper * &di;
                    let mut lo_i = rational::ceil_i64(&lo);
                    let mut hi_i = rational::floor_i64(&hi);
                    if !closed && lo.is_integer() {
                        lo_i += 1;
                    }
                    if !closed && hi.is_integer() {
                        hi_i -= 1;
                    }
                    (lo_i, hi_i)
                })
                .collect();
            let mut v = Vec::with_capacity(comp.len());
            increasing_ratios(&comp, &ranges, &mut v, &mut |v| {
                let with_v: Vec<(usize, i64)> =
                    comp.iter().copied().zip(v.iter().copied()).collect();
                let w = transform_v_to_w(&with_v, d_prime);
                let parts = comp.iter().copied().zip(w).collect();
                labels.push(TypeS {
                    d,
                    a,
                    mu: mu.clone(),
                    parts,
                    d_prime,
                });
            });
        }
        labels.sort_by(|x, y| x.parts.cmp(&y.parts));
        out.extend(labels);
    }
    Ok(out)
}

fn increasing_ratios(
    sizes: &[usize],
    ranges: &[(i64, i64)],
    prefix: &mut Vec<i64>,
    emit: &mut dyn FnMut(&[i64]),
) {
    let i = prefix.len();
    if i == sizes.len() {
        emit(prefix);
        return;
    }
    for vi in ranges[i].0..=ranges[i].1 {
        if let Some(&prev) = prefix.last() {
            // prev / d_{i-1} < vi / d_i
            if prev * sizes[i] as i64 >= vi * sizes[i - 1] as i64 {
                continue;
            }
        }
        prefix.push(vi);
        increasing_ratios(sizes, ranges, prefix, emit);
        prefix.pop();
    }
}

/// Generators of the whole window: dominant integral `chi` with
/// `chi + rho + delta` in `V^a(1, d)`.
pub fn generators(d: usize, a: usize, mu: &Q) -> Result<Vec<Weight>> {
    let shift = &rho(d) + &delta(mu, d);
    enumerate_dominant_integral(&build_va(d, a), &shift)
}

/// Dominant integral `chi` with `chi + rho` in `W(d)_w`.
pub fn slice_generators(d: usize, w: i64) -> Result<Vec<Weight>> {
    enumerate_dominant_integral(&build_w_slice(d, w), &rho(d))
}

/// Dominant integral `chi'` with `chi' + rho' + (mu - e) sigma_{d'}` in `W^a(1, d')`.
pub fn residual_generators(d_prime: usize, a: usize, mu: &Q, e: usize) -> Result<Vec<Weight>> {
    let shift = &rho(d_prime) + &sigma(d_prime).scale(&(mu - int(e as i64)));
    enumerate_dominant_integral(&build_wa(d_prime, a), &shift)
}

/// Memoized generator counts for the factors of a summand.
#[derive(Default)]
pub struct GeneratorCounter {
    slices: HashMap<(usize, i64), usize>,
    residuals: HashMap<(usize, usize, Q, usize), usize>,
}

impl GeneratorCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn slice(&mut self, d: usize, w: i64) -> Result<usize> {
        // tensoring with det identifies W(d)_w with W(d)_{w+d}
        let key = (d, w.rem_euclid(d.max(1) as i64));
        if let Some(&n) = self.slices.get(&key) {
            return Ok(n);
        }
        let n = slice_generators(d, key.1)?.len();
        self.slices.insert(key, n);
        Ok(n)
    }

    pub fn residual(&mut self, d_prime: usize, a: usize, mu: &Q, e: usize) -> Result<usize> {
        let key = (d_prime, a, mu.clone(), e);
        if let Some(&n) = self.residuals.get(&key) {
            return Ok(n);
        }
        let n = residual_generators(d_prime, a, mu, e)?.len();
        self.residuals.insert(key, n);
        Ok(n)
    }

    /// `prod_i #gen W(d_i)_{w_i} * #gen W^a(1, d')`.
    pub fn summand(&mut self, s: &TypeS) -> Result<usize> {
        let mut n = self.residual(s.d_prime, s.a, &s.mu, s.e())?;
        for &(di, wi) in &s.parts {
            if n == 0 {
                break;
            }
            n *= self.slice(di, wi)?;
        }
        Ok(n)
    }
}

/// A summand label with its `v`-tuple and generator count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandReport {
    pub d_prime: usize,
    pub parts: Vec<(usize, i64)>,
    pub v: Vec<i64>,
    pub generators: usize,
}

pub fn summand_reports(d: usize, a: usize, mu: &Q, closed: bool) -> Result<Vec<SummandReport>> {
    let mut counter = GeneratorCounter::new();
    enumerate_summands(d, a, mu, closed)?
        .into_iter()
        .map(|s| {
            Ok(SummandReport {
                d_prime: s.d_prime,
                v: s.v(),
                generators: counter.summand(&s)?,
                parts: s.parts,
            })
        })
        .collect()
}

/// `eta = (a + 1) e + 2 e (d - e)`.
pub fn window_width(e: usize, d: usize, a: usize) -> i64 {
    assert!(e <= d);
    let (e, d, a) = (e as i64, d as i64, a as i64);
    (a + 1) * e + 2 * e * (d - e)
}

/// Whether the `tau_e^{-1}`-weights of `Gamma(chi)`, shifted by
/// `<tau_e^{-1}, delta + sigma_d / 2>`, lie in `[-eta/2, eta/2)` (or the closed
/// interval when `half_open` is false).
pub fn window_contains(chi: &Weight, e: usize, a: usize, mu: &Q, half_open: bool) -> Result<bool> {
    let d = chi.d();
    let lambda = Cocharacter::tau_inv(e, d);
    let (lo, hi) = lambda_weight_range(chi, &lambda)?;
    let offset = &delta(mu, d) + &sigma(d).scale(&rational::half());
    let shift = pair_unchecked(&lambda, &offset);
    let half_width = frac(window_width(e, d, a), 2);
    let lo = lo + &shift;
    let hi = hi + &shift;
    let below = if half_open {
        hi < half_width
    } else {
        hi <= half_width
    };
    Ok(lo >= -half_width && below)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_summands() {
        let got = enumerate_summands(1, 1, &frac(-9, 14), false).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!((got[0].d_prime, got[0].parts.clone()), (1, vec![]));
        assert_eq!((got[1].d_prime, got[1].parts.clone()), (0, vec![(1, 0)]));
    }

    #[test]
    fn zero_dimension_has_one_summand() {
        assert_eq!(
            enumerate_summands(0, 2, &frac(-1, 3), false).unwrap().len(),
            1
        );
    }

    #[test]
    fn non_generic_mu_is_rejected_for_strict_ends() {
        assert!(matches!(
            enumerate_summands(3, 1, &frac(-1, 3), false),
            Err(Error::NonGenericMu { .. })
        ));
        assert!(enumerate_summands(3, 1, &frac(-1, 3), true).is_ok());
    }

    #[test]
    fn one_dimensional_count_identity() {
        let mu = frac(-9, 14);
        let total: usize = summand_reports(1, 1, &mu, false)
            .unwrap()
            .iter()
            .map(|s| s.generators)
            .sum();
        assert_eq!(total, generators(1, 1, &mu).unwrap().len());
        assert_eq!(total, 2);
    }

    #[test]
    fn window_widths() {
        assert_eq!(window_width(1, 2, 1), 4);
        assert_eq!(window_width(3, 3, 2), 9);
        assert_eq!(window_width(2, 3, 0), 6);
    }

    #[test]
    fn window_of_zero_weight_depends_only_on_shift() {
        // shift is -(mu + 1/2) e = 1/7 for e = 1
        let mu = frac(-9, 14);
        assert!(window_contains(&Weight::zero(1), 1, 1, &mu, true).unwrap());
        assert!(!window_contains(&Weight::zero(1), 1, 1, &frac(-5, 1), true).unwrap());
    }
}
