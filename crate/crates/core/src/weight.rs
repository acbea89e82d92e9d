//! Weight and coweight lattice arithmetic for the maximal torus `T(d)` of `GL(d)`.
//!
//! A [`Weight`] stores its coefficients in the basis `beta_1, ..., beta_d` of
//! standard torus characters. Dominance means non-decreasing coefficients, so
//! `rho` has increasing entries and straightening sorts ascending.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Result};
use crate::rational::{self, frac, int, Q};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    coeffs: Vec<Q>,
}

impl Weight {
    pub fn new(coeffs: Vec<Q>) -> Self {
        Weight { coeffs }
    }

    pub fn zero(d: usize) -> Self {
        Weight::new(vec![Q::zero(); d])
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Weight::new(values.iter().map(|&v| int(v)).collect())
    }

    /// The character `beta_i` (zero-based index).
    pub fn basis(d: usize, i: usize) -> Self {
        let mut w = Weight::zero(d);
        w.coeffs[i] = Q::one();
        w
    }

    /// The root `beta_i - beta_j` (zero-based indices).
    pub fn root(d: usize, i: usize, j: usize) -> Self {
        let mut w = Weight::zero(d);
        w.coeffs[i] += Q::one();
        w.coeffs[j] -= Q::one();
        w
    }

    pub fn d(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Q> {
        self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Integer coefficients, if the weight is integral and fits in `i64`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coeffs.iter().map(rational::as_i64).collect()
    }

    /// Pairing with the diagonal cocharacter `1_d`.
    pub fn total(&self) -> Q {
        self.coeffs.iter().sum()
    }

    pub fn scale(&self, k: &Q) -> Weight {
        Weight::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Coefficients `start..start + len`, read as a weight of `T(len)`.
    pub fn block(&self, start: usize, len: usize) -> Weight {
        Weight::new(self.coeffs[start..start + len].to_vec())
    }

    /// Concatenation along the identification `M(d_1) + ... + M(d_k) = M(d)`.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a Weight>) -> Weight {
        Weight::new(
            parts
                .into_iter()
                .flat_map(|w| w.coeffs.iter().cloned())
                .collect(),
        )
    }

    pub fn permuted(&self, perm: &[usize]) -> Weight {
        Weight::new(perm.iter().map(|&i| self.coeffs[i].clone()).collect())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        rational::serialize_q_vec(&self.coeffs, s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        rational::deserialize_q_vec(d).map(Weight::new)
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        assert_eq!(self.d(), rhs.d(), "weight dimension mismatch");
        Weight::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        assert_eq!(self.d(), rhs.d(), "weight dimension mismatch");
        Weight::new(
            self.coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// A cocharacter of `T(d)`, `t -> (t^{e_1}, ..., t^{e_d})`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cocharacter {
    exps: Vec<i64>,
}

impl Cocharacter {
    pub fn new(exps: Vec<i64>) -> Self {
        Cocharacter { exps }
    }

    pub fn zero(d: usize) -> Self {
        Cocharacter::new(vec![0; d])
    }

    /// The diagonal cocharacter `1_d`.
    pub fn diagonal(d: usize) -> Self {
        Cocharacter::new(vec![1; d])
    }

    /// `tau_e = (t, ..., t, 1, ..., 1)` with `e` copies of `t`.
    pub fn tau(e: usize, d: usize) -> Self {
        assert!(e <= d);
        Cocharacter::new((0..d).map(|i| i64::from(i < e)).collect())
    }

    /// `tau_e^{-1}`.
    pub fn tau_inv(e: usize, d: usize) -> Self {
        assert!(e <= d);
        Cocharacter::new((0..d).map(|i| -i64::from(i < e)).collect())
    }

    /// The antidominant cocharacter `(t^k, .., t^k, t^{k-1}, .., t, .., t, 1, .., 1)`
    /// attached to a partition `d_1, ..., d_k` of `d - f` followed by `f` fixed slots.
    pub fn for_partition(parts: &[usize], f: usize) -> Self {
        let k = parts.len() as i64;
        let mut exps = Vec::new();
        for (idx, &len) in parts.iter().enumerate() {
            exps.extend(std::iter::repeat_n(k - idx as i64, len));
        }
        exps.extend(std::iter::repeat_n(0, f));
        Cocharacter::new(exps)
    }

    pub fn d(&self) -> usize {
        self.exps.len()
    }

    pub fn exps(&self) -> &[i64] {
        &self.exps
    }

    pub fn is_antidominant(&self) -> bool {
        self.exps.windows(2).all(|w| w[0] >= w[1])
    }
}

/// The natural pairing between `N_R` and `M_R`.
pub fn pair(lambda: &Cocharacter, chi: &Weight) -> Result<Q> {
    check_dim(lambda.d(), chi.d())?;
    Ok(lambda
        .exps
        .iter()
        .zip(chi.coeffs())
        .map(|(&e, c)| c * int(e))
        .sum())
}

/// Pairing of a root-type or character weight with a cocharacter when the caller
/// already guarantees matching dimensions.
pub(crate) fn pair_unchecked(lambda: &Cocharacter, chi: &Weight) -> Q {
    pair(lambda, chi).expect("dimensions checked by caller")
}

/// Half the sum of the positive roots, entry `i` (one-based) is `(2i - d - 1)/2`.
pub fn rho(d: usize) -> Weight {
    let d = d as i64;
    Weight::new((1..=d).map(|i| frac(2 * i - d - 1, 2)).collect())
}

/// `sigma_d = beta_1 + ... + beta_d`.
pub fn sigma(d: usize) -> Weight {
    Weight::new(vec![Q::one(); d])
}

/// `tau_d = sigma_d / d` as a weight.
pub fn tau_weight(d: usize) -> Weight {
    assert!(d > 0, "tau_0 is undefined");
    Weight::new(vec![frac(1, d as i64); d])
}

pub fn is_dominant(chi: &Weight, strict: bool) -> bool {
    chi.coeffs()
        .windows(2)
        .all(|w| if strict { w[0] < w[1] } else { w[0] <= w[1] })
}

/// Result of moving a weight into the dominant chamber with the `rho`-shifted
/// Weyl action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Straightened {
    /// `chi + rho` has a repeated entry.
    Vanished,
    Dominant {
        weight: Weight,
        length: usize,
    },
}

impl Straightened {
    pub fn weight(&self) -> Option<&Weight> {
        match self {
            Straightened::Vanished => None,
            Straightened::Dominant { weight, .. } => Some(weight),
        }
    }

    pub fn is_vanished(&self) -> bool {
        matches!(self, Straightened::Vanished)
    }
}

pub fn weyl_straighten(chi: &Weight) -> Straightened {
    let shifted = chi + &rho(chi.d());
    let vals = shifted.coeffs();
    let mut inversions = 0usize;
    for i in 0..vals.len() {
        for j in i + 1..vals.len() {
            match vals[i].cmp(&vals[j]) {
                std::cmp::Ordering::Equal => return Straightened::Vanished,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut sorted = vals.to_vec();
    sorted.sort();
    Straightened::Dominant {
        weight: &Weight::new(sorted) - &rho(chi.d()),
        length: inversions,
    }
}

/// Minimum and maximum of `<lambda, w chi>` over all permutations `w`, i.e. the
/// `lambda`-weight span of the irreducible representation with highest weight
/// `chi`. Uses the rearrangement inequality.
pub fn lambda_weight_range(chi: &Weight, lambda: &Cocharacter) -> Result<(Q, Q)> {
    check_dim(lambda.d(), chi.d())?;
    let mut c = chi.coeffs().to_vec();
    c.sort();
    let mut e = lambda.exps().to_vec();
    e.sort();
    let max: Q = c.iter().zip(&e).map(|(c, &e)| c * int(e)).sum();
    let min: Q = c.iter().rev().zip(&e).map(|(c, &e)| c * int(e)).sum();
    Ok((min, max))
}

/// Representation shape for the quivers `Q^a`, `Q^{af}` (and `Q^{af,N}`) at
/// dimension vector `(1, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuiverShape {
    pub d: usize,
    pub a: usize,
    pub framed: bool,
    pub loops_at_zero: usize,
}

impl QuiverShape {
    pub fn unframed(d: usize, a: usize) -> Self {
        QuiverShape {
            d,
            a,
            framed: false,
            loops_at_zero: 0,
        }
    }

    pub fn framed(d: usize, a: usize) -> Self {
        QuiverShape {
            d,
            a,
            framed: true,
            loops_at_zero: 0,
        }
    }
}

/// Which weights of a representation to keep, by the sign of their pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairingSign {
    Negative,
    Zero,
    Positive,
    NonNegative,
    NonPositive,
    Any,
}

impl PairingSign {
    fn accepts(self, value: &Q) -> bool {
        match self {
            PairingSign::Negative => *value < Q::zero(),
            PairingSign::Zero => value.is_zero(),
            PairingSign::Positive => *value > Q::zero(),
            PairingSign::NonNegative => *value >= Q::zero(),
            PairingSign::NonPositive => *value <= Q::zero(),
            PairingSign::Any => true,
        }
    }
}

/// One distinct weight of a multiset together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightMult {
    pub weight: Weight,
    pub multiplicity: usize,
}

/// Total multiplicity of a multiset.
pub fn multiset_size(items: &[WeightMult]) -> usize {
    items.iter().map(|w| w.multiplicity).sum()
}

/// The `T(d)`-weights of `R^a(1, d)` (or `R^{af}(1, d)` when framed) whose
/// pairing with `lambda` has the requested sign.
///
/// Roots `beta_i - beta_j` (all ordered pairs, including the zero weights
/// `i = j`) carry multiplicity 3, `+-beta_i` multiplicity `a`, the framing adds
/// `beta_i` once, and each loop at vertex 0 adds one zero weight. Equal weights
/// are merged; the output is sorted lexicographically.
pub fn weight_multiset(
    shape: &QuiverShape,
    sign: PairingSign,
    lambda: &Cocharacter,
) -> Result<Vec<WeightMult>> {
    check_dim(shape.d, lambda.d())?;
    let d = shape.d;
    let mut acc: BTreeMap<Weight, usize> = BTreeMap::new();
    let mut push = |w: Weight, mult: usize| {
        if mult > 0 && sign.accepts(&pair_unchecked(lambda, &w)) {
            *acc.entry(w).or_insert(0) += mult;
        }
    };
    for i in 0..d {
        for j in 0..d {
            push(Weight::root(d, i, j), 3);
        }
    }
    for i in 0..d {
        push(Weight::basis(d, i), shape.a);
        push(-&Weight::basis(d, i), shape.a);
        if shape.framed {
            push(Weight::basis(d, i), 1);
        }
    }
    push(Weight::zero(d), shape.loops_at_zero);
    Ok(acc
        .into_iter()
        .map(|(weight, multiplicity)| WeightMult {
            weight,
            multiplicity,
        })
        .collect())
}
