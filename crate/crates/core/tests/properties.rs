//! Algebraic invariants over random inputs.

use std::sync::Arc;

use bsc_core::bimodule::{concat, element_from_tensor};
use bsc_core::cartan::RANK2_TYPES;
use bsc_core::poly::{decompose, demazure, half_root, is_invariant, reflect, weyl_act};
use bsc_core::random::{random_element, random_poly, random_seq, random_weyl, seeded};
use bsc_core::{BSElement, CartanData, Gallery, Poly};
use proptest::prelude::*;
use rand::Rng;

fn cartan(k: usize) -> Arc<CartanData> {
    Arc::new(CartanData::from_type(RANK2_TYPES[k % RANK2_TYPES.len()]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decomposition_is_exact(k in 0usize..4, seed: u64, s in 0usize..2) {
        let c = cartan(k);
        let f = random_poly(&mut seeded(seed), 2, 6);
        let (p, d) = decompose(&c, s, &f).unwrap();
        prop_assert_eq!(&p + &(&d * &half_root(2, s)), f);
        prop_assert!(is_invariant(&c, s, &p).unwrap() && is_invariant(&c, s, &d).unwrap());
    }

    #[test]
    fn demazure_squares_to_zero_and_reflections_are_involutions(k in 0usize..4, seed: u64, s in 0usize..2) {
        let c = cartan(k);
        let f = random_poly(&mut seeded(seed), 2, 5);
        let d = demazure(&c, s, &f).unwrap();
        prop_assert!(demazure(&c, s, &d).unwrap().is_zero());
        prop_assert_eq!(reflect(&c, s, &reflect(&c, s, &f).unwrap()).unwrap(), f);
    }

    #[test]
    fn weyl_action_is_a_ring_map(k in 0usize..4, seed: u64) {
        let c = cartan(k);
        let mut rng = seeded(seed);
        let w = random_weyl(&mut rng, &c, 5);
        let (f, g) = (random_poly(&mut rng, 2, 3), random_poly(&mut rng, 2, 3));
        let act = |p: &Poly| weyl_act(&w, p).unwrap();
        prop_assert_eq!(act(&(&f * &g)), &act(&f) * &act(&g));
        prop_assert_eq!(act(&(&f + &g)), &act(&f) + &act(&g));
    }

    #[test]
    fn normalization_is_idempotent(k in 0usize..4, seed: u64) {
        let c = cartan(k);
        let mut rng = seeded(seed);
        let len = rng.gen_range(0..=3);
        let seq = random_seq(&mut rng, 2, len);
        let m = random_element(&mut rng, &c, &seq, 3);
        let mut rebuilt = BSElement::zero(c.clone(), seq.clone()).unwrap();
        for (bits, coeff) in m.coeffs() {
            let mut slots = vec![coeff.clone()];
            for (i, &s) in seq.iter().enumerate() {
                slots.push(if bits >> i & 1 == 1 { half_root(2, s) } else { Poly::one(2) });
            }
            rebuilt = rebuilt.try_add(&element_from_tensor(&c, &seq, &slots).unwrap()).unwrap();
        }
        prop_assert_eq!(rebuilt, m);
    }

    #[test]
    fn actions_commute_and_compose(k in 0usize..4, seed: u64) {
        let c = cartan(k);
        let mut rng = seeded(seed);
        let len = rng.gen_range(1..=3);
        let seq = random_seq(&mut rng, 2, len);
        let m = random_element(&mut rng, &c, &seq, 2);
        let (f, g) = (random_poly(&mut rng, 2, 2), random_poly(&mut rng, 2, 2));
        prop_assert_eq!(
            m.left_mul(&f).unwrap().right_mul(&g).unwrap(),
            m.right_mul(&g).unwrap().left_mul(&f).unwrap()
        );
        prop_assert_eq!(
            m.right_mul(&(&f * &g)).unwrap(),
            m.right_mul(&f).unwrap().right_mul(&g).unwrap()
        );
    }

    #[test]
    fn concatenation_is_associative_and_balanced(k in 0usize..4, seed: u64) {
        let c = cartan(k);
        let mut rng = seeded(seed);
        let seqs: Vec<Vec<usize>> = (0..3).map(|_| {
            let len = rng.gen_range(0..=2);
            random_seq(&mut rng, 2, len)
        }).collect();
        let [a, b, d] = [0, 1, 2].map(|i| random_element(&mut rng, &c, &seqs[i], 2));
        let left = concat(&concat(&a, &b).unwrap(), &d).unwrap();
        let right = concat(&a, &concat(&b, &d).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        let f = random_poly(&mut rng, 2, 2);
        prop_assert_eq!(
            concat(&a.right_mul(&f).unwrap(), &b).unwrap(),
            concat(&a, &b.left_mul(&f).unwrap()).unwrap()
        );
    }

    #[test]
    fn localization_is_additive(k in 0usize..4, seed: u64) {
        let c = cartan(k);
        let mut rng = seeded(seed);
        let len = rng.gen_range(0..=3);
        let seq = random_seq(&mut rng, 2, len);
        let a = random_element(&mut rng, &c, &seq, 2);
        let b = random_element(&mut rng, &c, &seq, 2);
        let sum = a.try_add(&b).unwrap();
        for g in Gallery::all(&seq) {
            let expected = &a.localize(&g).unwrap().value + &b.localize(&g).unwrap().value;
            prop_assert_eq!(sum.localize(&g).unwrap().value, expected);
        }
    }

    #[test]
    fn json_round_trips(k in 0usize..4, seed: u64) {
        let c = cartan(k);
        let mut rng = seeded(seed);
        let len = rng.gen_range(0..=3);
        let seq = random_seq(&mut rng, 2, len);
        let m = random_element(&mut rng, &c, &seq, 3);
        prop_assert_eq!(BSElement::from_json(c.clone(), &m.to_json()).unwrap(), m);
        let f = random_poly(&mut rng, 2, 4);
        prop_assert_eq!(Poly::from_json(&f.to_json(), 2).unwrap(), f.clone());
        prop_assert_eq!(Poly::parse(&f.to_string(), 2).unwrap(), f);
    }
}
