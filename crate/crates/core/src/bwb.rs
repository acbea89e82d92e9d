//! Borel-Weil-Bott expansion of attracting-locus pushforwards and the
//! orthogonality inequality built on it.
//!
//! For a cocharacter `lambda` the pushforward of `Gamma(chi)` from the attracting
//! locus is resolved by terms `Gamma((chi - sigma_J)^+)[|J| - l(J)]`, one for each
//! sub-multiset `J` of the weights pairing negatively with `lambda`.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::invariants::{type_of_weight, TypeS};
use crate::rational::{self, Q};
use crate::weight::{
    pair_unchecked, weight_multiset, weyl_straighten, Cocharacter, PairingSign, QuiverShape,
    Straightened, Weight, WeightMult,
};

/// Multiplicity vectors `0 <= m_k <= bound_k` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SubMultisets {
    bounds: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl SubMultisets {
    pub fn new(bounds: Vec<usize>) -> Self {
        let next = Some(vec![0; bounds.len()]);
        SubMultisets { bounds, next }
    }

    /// Number of sub-multisets, saturating at `u64::MAX`.
    pub fn count(bounds: &[usize]) -> u64 {
        bounds
            .iter()
            .fold(1u64, |acc, &b| acc.saturating_mul(b as u64 + 1))
    }
}

impl Iterator for SubMultisets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut k = succ.len();
        loop {
            if k == 0 {
                break;
            }
            k -= 1;
            if succ[k] < self.bounds[k] {
                succ[k] += 1;
                self.next = Some(succ);
                break;
            }
            succ[k] = 0;
        }
        Some(current)
    }
}

/// `sigma_J` for a multiplicity vector over `items`.
pub fn sigma_of(items: &[WeightMult], mult: &[usize], d: usize) -> Weight {
    let mut s = Weight::zero(d);
    for (item, &m) in items.iter().zip(mult) {
        if m > 0 {
            s = &s + &item.weight.scale(&rational::int(m as i64));
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BwbTerm {
    /// Multiplicity of each distinct negative weight in `J`.
    pub j: Vec<usize>,
    /// `(chi - sigma_J)^+`, absent when the term vanishes.
    pub weight: Option<Weight>,
    /// `|J| - l(J)`; zero for vanished terms.
    pub shift: i64,
    pub vanished: bool,
}

/// The negative weights for `lambda` and one term per sub-multiset `J`, in
/// lexicographic order of multiplicity vectors. Vanished terms are kept and
/// flagged. At most `max_terms` terms are produced when given.
pub fn bwb_terms(
    chi: &Weight,
    shape: &QuiverShape,
    lambda: &Cocharacter,
    max_terms: Option<usize>,
) -> Result<(Vec<WeightMult>, Vec<BwbTerm>)> {
    crate::error::check_dim(shape.d, chi.d())?;
    let negative = weight_multiset(shape, PairingSign::Negative, lambda)?;
    let bounds: Vec<usize> = negative.iter().map(|w| w.multiplicity).collect();
    let limit = max_terms.unwrap_or(usize::MAX);
    let terms = SubMultisets::new(bounds)
        .take(limit)
        .map(|j| {
            let size: usize = j.iter().sum();
            let sigma_j = sigma_of(&negative, &j, chi.d());
            match weyl_straighten(&(chi - &sigma_j)) {
                Straightened::Vanished => BwbTerm {
                    j,
                    weight: None,
                    shift: 0,
                    vanished: true,
                },
                Straightened::Dominant { weight, length } => BwbTerm {
                    j,
                    weight: Some(weight),
                    shift: size as i64 - length as i64,
                    vanished: false,
                },
            }
        })
        .collect();
    Ok((negative, terms))
}

/// `S = {i : x_i <= 0}`, the index set minimizing subset sums of `x`.
pub fn nonpositive_support(x: &[Q]) -> Vec<usize> {
    (0..x.len()).filter(|&i| x[i] <= Q::zero()).collect()
}

/// A weight with its level, `p` and type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classified {
    pub chi: Weight,
    pub e: usize,
    pub p: Q,
    pub ty: TypeS,
}

pub fn classify(chi: &Weight, a: usize, mu: &Q) -> Result<Classified> {
    let t = type_of_weight(chi, a, mu)?;
    Ok(Classified {
        chi: chi.clone(),
        e: t.level.e,
        p: t.p,
        ty: t.ty,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    /// `p(chi') > p(chi)`
    LargerP,
    /// `p(chi') = p(chi)` and `e' < e`
    LowerLevel,
    /// `p(chi') = p(chi)`, `e' = e` and `I` nonempty
    SameLevel,
}

pub fn hypothesis(chi: &Classified, chi_prime: &Classified) -> Option<Hypothesis> {
    if chi_prime.p > chi.p {
        Some(Hypothesis::LargerP)
    } else if chi_prime.p == chi.p && chi_prime.e < chi.e {
        Some(Hypothesis::LowerLevel)
    } else if chi_prime.p == chi.p && chi_prime.e == chi.e && chi.e > 0 {
        Some(Hypothesis::SameLevel)
    } else {
        None
    }
}

/// How to range over the sub-multisets `I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SubsetPolicy {
    /// Enumerate every `I` when there are at most this many.
    pub exhaustive_limit: u64,
    /// Otherwise draw this many multiplicity vectors.
    pub samples: usize,
    pub seed: u64,
}

impl Default for SubsetPolicy {
    fn default() -> Self {
        SubsetPolicy {
            exhaustive_limit: 1 << 14,
            samples: 1 << 14,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub i: Vec<usize>,
    #[serde(serialize_with = "rational::serialize_q")]
    pub lhs: Q,
    #[serde(serialize_with = "rational::serialize_q")]
    pub rhs: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "verdict")]
pub enum OrthogonalityVerdict {
    NotApplicable,
    Checked {
        hypothesis: Hypothesis,
        exhaustive: bool,
        checked: usize,
        vanished: usize,
        failure: Option<Counterexample>,
    },
}

impl OrthogonalityVerdict {
    pub fn passed(&self) -> bool {
        !matches!(
            self,
            OrthogonalityVerdict::Checked {
                failure: Some(_),
                ..
            }
        )
    }
}

/// Checks `<tau_e, (chi' - sigma_I)^+> > <tau_e, chi>` for sub-multisets `I` of
/// `W^a_{e'}`, where `e = e(chi)` and `e' = e(chi')`.
pub fn orthogonality_check(
    chi: &Classified,
    chi_prime: &Classified,
    a: usize,
    policy: &SubsetPolicy,
) -> Result<OrthogonalityVerdict> {
    let Some(hyp) = hypothesis(chi, chi_prime) else {
        return Ok(OrthogonalityVerdict::NotApplicable);
    };
    let d = chi.chi.d();
    crate::error::check_dim(d, chi_prime.chi.d())?;
    let tau_e = Cocharacter::tau(chi.e, d);
    let rhs = pair_unchecked(&tau_e, &chi.chi);
    let universe = weight_multiset(
        &QuiverShape::unframed(d, a),
        PairingSign::Negative,
        &Cocharacter::tau(chi_prime.e, d),
    )?;
    let bounds: Vec<usize> = universe.iter().map(|w| w.multiplicity).collect();
    let total = SubMultisets::count(&bounds);
    let exhaustive = total <= policy.exhaustive_limit;
    let subsets: Box<dyn Iterator<Item = Vec<usize>>> = if exhaustive {
        Box::new(SubMultisets::new(bounds))
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        let draws: Vec<Vec<usize>> = (0..policy.samples)
            .map(|_| bounds.iter().map(|&b| rng.gen_range(0..=b)).collect())
            .collect();
        Box::new(draws.into_iter())
    };

    let mut checked = 0;
    let mut vanished = 0;
    let fast = IntegralSubsets::new(&universe, &chi_prime.chi, chi.e);
    for i in subsets {
        if hyp == Hypothesis::SameLevel && i.iter().all(|&m| m == 0) {
            continue;
        }
        let lhs = match &fast {
            Some(fast) => fast.head_sum(&i).map(rational::int),
            None => {
                let sigma_i = sigma_of(&universe, &i, d);
                weyl_straighten(&(&chi_prime.chi - &sigma_i))
                    .weight()
                    .map(|plus| pair_unchecked(&tau_e, plus))
            }
        };
        let Some(lhs) = lhs else {
            vanished += 1;
            continue;
        };
        checked += 1;
        if lhs <= rhs {
            return Ok(OrthogonalityVerdict::Checked {
                hypothesis: hyp,
                exhaustive,
                checked,
                vanished,
                failure: Some(Counterexample { i, lhs, rhs }),
            });
        }
    }
    Ok(OrthogonalityVerdict::Checked {
        hypothesis: hyp,
        exhaustive,
        checked,
        vanished,
        failure: None,
    })
}

/// Machine-integer evaluation of `<tau_e, (chi' - sigma_I)^+>`.
struct IntegralSubsets {
    weights: Vec<Vec<i64>>,
    chi: Vec<i64>,
    e: usize,
}

impl IntegralSubsets {
    fn new(universe: &[WeightMult], chi: &Weight, e: usize) -> Option<Self> {
        let weights = universe
            .iter()
            .map(|w| w.weight.to_ints())
            .collect::<Option<_>>()?;
        Some(IntegralSubsets {
            weights,
            chi: chi.to_ints()?,
            e,
        })
    }

    /// `None` when the straightening vanishes.
    fn head_sum(&self, mult: &[usize]) -> Option<i64> {
        let d = self.chi.len() as i64;
        // entries of 2 (chi' - sigma_I + rho)
        let mut x: Vec<i64> = self
            .chi
            .iter()
            .enumerate()
            .map(|(k, &c)| 2 * c + 2 * k as i64 + 1 - d)
            .collect();
        for (w, &m) in self.weights.iter().zip(mult) {
            if m > 0 {
                for (xk, wk) in x.iter_mut().zip(w) {
                    *xk -= 2 * m as i64 * wk;
                }
            }
        }
        x.sort_unstable();
        if x.windows(2).any(|p| p[0] == p[1]) {
            return None;
        }
        let total: i64 = x[..self.e]
            .iter()
            .enumerate()
            .map(|(k, &v)| v - (2 * k as i64 + 1 - d))
            .sum();
        Some(total / 2)
    }
}
