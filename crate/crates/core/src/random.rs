//! Seeded random inputs for property checks and suites.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bimodule::{all_ones, BSElement};
use crate::cartan::{CartanData, WeylElement};
use crate::poly::{rat, Monomial, Poly, Rational};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-6..=6), rng.gen_range(1..=3))
}

/// Homogeneous polynomial of polynomial degree `degree` with a few terms.
pub fn random_homogeneous<R: Rng>(rng: &mut R, rank: usize, degree: u32) -> Poly {
    let monomials = Monomial::all_of_degree(rank, degree);
    let count = rng.gen_range(1..=monomials.len().min(4));
    let terms = (0..count).map(|_| (monomials[rng.gen_range(0..monomials.len())].clone(), random_rational(rng)));
    let mut p = Poly::zero(rank);
    for (m, c) in terms {
        p += &Poly::monomial(rank, m, c);
    }
    p
}

/// Inhomogeneous polynomial of degree at most `max_degree`.
pub fn random_poly<R: Rng>(rng: &mut R, rank: usize, max_degree: u32) -> Poly {
    let mut p = Poly::zero(rank);
    for d in 0..=max_degree {
        if rng.gen_bool(0.6) {
            p += &random_homogeneous(rng, rank, d);
        }
    }
    p
}

pub fn random_seq<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..rank)).collect()
}

/// Random element with coefficients of degree at most `max_degree`.
pub fn random_element<R: Rng>(rng: &mut R, cartan: &Arc<CartanData>, seq: &[usize], max_degree: u32) -> BSElement {
    let r = cartan.rank();
    let mut coeffs = BTreeMap::new();
    for bits in 0..=all_ones(seq.len()) {
        if rng.gen_bool(0.7) {
            coeffs.insert(bits, random_poly(rng, r, max_degree));
        }
    }
    BSElement::from_coeffs(cartan.clone(), seq.to_vec(), coeffs).expect("valid random element")
}

/// Random Weyl group element as a product of `len` simple reflections.
pub fn random_weyl<R: Rng>(rng: &mut R, cartan: &CartanData, len: usize) -> WeylElement {
    let word = random_seq(rng, cartan.rank(), len);
    cartan.weyl_from_word(&word).expect("indices in range")
}
