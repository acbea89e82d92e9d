use proptest::prelude::*;
use wallx::bwb::{self, bwb_terms, orthogonality_check, sigma_of, SubMultisets, SubsetPolicy};
use wallx::rational::frac;
use wallx::sod::generators;
use wallx::weight::{weyl_straighten, QuiverShape};
use wallx::{Cocharacter, Weight};

fn shape() -> impl Strategy<Value = QuiverShape> {
    (1usize..=3, 0usize..=2, any::<bool>()).prop_map(|(d, a, framed)| QuiverShape {
        d,
        a,
        framed,
        loops_at_zero: 0,
    })
}

proptest! {
    #[test]
    fn one_term_per_sub_multiset(
        (shape, chi, e) in shape().prop_flat_map(|s| {
            let d = s.d;
            (Just(s), prop::collection::vec(-3i64..=3, d), 0..=d)
        }),
        inverse in any::<bool>(),
    ) {
        let d = shape.d;
        let lambda = if inverse { Cocharacter::tau_inv(e, d) } else { Cocharacter::tau(e, d) };
        let chi = Weight::from_ints(&chi);
        let (negative, terms) = bwb_terms(&chi, &shape, &lambda, None).unwrap();
        let bounds: Vec<usize> = negative.iter().map(|w| w.multiplicity).collect();
        prop_assert_eq!(terms.len() as u64, SubMultisets::count(&bounds));
        for t in &terms {
            let sigma_j = sigma_of(&negative, &t.j, d);
            let raw = &chi - &sigma_j;
            match (&t.weight, weyl_straighten(&raw)) {
                (None, s) => prop_assert!(t.vanished && s.is_vanished()),
                (Some(w), s) => {
                    prop_assert_eq!(Some(w), s.weight());
                    prop_assert_eq!(w.total(), raw.total());
                    let size: usize = t.j.iter().sum();
                    prop_assert!(t.shift <= size as i64);
                }
            }
        }
    }
}

#[test]
fn orthogonality_holds_in_rank_two() {
    for a in 0..=1 {
        let mu = frac(-(a as i64), 2) - frac(1, 7);
        let classified: Vec<_> = generators(2, a, &mu)
            .unwrap()
            .iter()
            .map(|chi| bwb::classify(chi, a, &mu).unwrap())
            .collect();
        let policy = SubsetPolicy::default();
        for x in &classified {
            for y in &classified {
                let verdict = orthogonality_check(x, y, a, &policy).unwrap();
                assert!(verdict.passed(), "{verdict:?}");
            }
        }
    }
}

#[test]
fn sampling_is_seeded() {
    let mu = frac(-9, 14);
    let classified: Vec<_> = generators(2, 1, &mu)
        .unwrap()
        .iter()
        .map(|chi| bwb::classify(chi, 1, &mu).unwrap())
        .collect();
    let policy = SubsetPolicy {
        exhaustive_limit: 0,
        samples: 64,
        seed: 5,
    };
    for x in &classified {
        for y in &classified {
            let first = orthogonality_check(x, y, 1, &policy).unwrap();
            assert_eq!(first, orthogonality_check(x, y, 1, &policy).unwrap());
        }
    }
}
