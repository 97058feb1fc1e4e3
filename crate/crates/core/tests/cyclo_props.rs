//! Property tests for the cyclotomic layer: ring axioms on the canonical
//! form, Galois-action composition, and embedding homomorphy, over
//! random elements and mixed conductors.

use num_bigint::BigInt;
use proptest::prelude::*;

use wittgauss_core::cyclo::{phi, CyclotomicInt};

const CONDUCTORS: &[u64] = &[1, 2, 3, 4, 6, 8, 9, 12, 20, 24, 45, 72];

fn element(m: u64) -> impl Strategy<Value = CyclotomicInt> {
    let len = phi(m) as usize;
    proptest::collection::vec(-9i64..=9, len).prop_map(move |coeffs| {
        let mut acc = CyclotomicInt::zero(m);
        for (j, c) in coeffs.into_iter().enumerate() {
            acc = acc.add(&CyclotomicInt::root(m, j as i64).scale(&BigInt::from(c)));
        }
        acc
    })
}

fn conductor() -> impl Strategy<Value = u64> {
    proptest::sample::select(CONDUCTORS.to_vec())
}

proptest! {
    #[test]
    fn ring_axioms((m, seedvals) in conductor().prop_flat_map(|m| (Just(m), (element(m), element(m), element(m))))) {
        let (a, b, c) = seedvals;
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.sub(&a), CyclotomicInt::zero(m));
        prop_assert_eq!(a.mul(&CyclotomicInt::one(m)), a);
    }

    #[test]
    fn galois_action_composes((m, a) in conductor().prop_flat_map(|m| (Just(m), element(m))), s in 1u64..60, t in 1u64..60) {
        prop_assume!(wittgauss_core::abelian::gcd(s % m + u64::from(s % m == 0), m) == 1);
        prop_assume!(wittgauss_core::abelian::gcd(t % m + u64::from(t % m == 0), m) == 1);
        let s = (s % m).max(1) as i64;
        let t = (t % m).max(1) as i64;
        let lhs = a.galois_conj(s).unwrap().galois_conj(t).unwrap();
        let rhs = a.galois_conj(s * t % m as i64).unwrap();
        prop_assert_eq!(lhs, rhs);
        // Conjugation is an automorphism: it fixes products.
        let sq = a.mul(&a);
        prop_assert_eq!(sq.galois_conj(s).unwrap(), a.galois_conj(s).unwrap().pow(2));
    }

    #[test]
    fn embedding_is_injective_ring_hom((m, pair) in conductor().prop_flat_map(|m| (Just(m), (element(m), element(m)))), mult in 1u64..=4) {
        let (a, b) = pair;
        let big = m * mult;
        let ea = a.embed(big).unwrap();
        let eb = b.embed(big).unwrap();
        prop_assert_eq!(a.mul(&b).embed(big).unwrap(), ea.mul(&eb));
        prop_assert_eq!(a.add(&b).embed(big).unwrap(), ea.add(&eb));
        // Injectivity on the nose: embeddings of distinct elements differ.
        if a != b {
            prop_assert_ne!(ea, eb);
        }
    }

    #[test]
    fn power_basis_round_trips((m, a) in conductor().prop_flat_map(|m| (Just(m), element(m)))) {
        let coeffs = a.to_power_coeffs();
        prop_assert_eq!(coeffs.len() as u64, phi(m));
        prop_assert_eq!(CyclotomicInt::from_power_coeffs(m, &coeffs), a);
    }
}
