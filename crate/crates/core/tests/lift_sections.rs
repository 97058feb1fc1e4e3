//! Subring compatibility of the two lift sections, on towers with both
//! prime and non-prime base fields.
//!
//! The Teichmüller-digit lift commutes with every unramified embedding,
//! because ring homomorphisms of Galois rings carry Teichmüller digits to
//! Teichmüller digits. The coefficient lift does so only when the base
//! of the tower is a prime field: over F_4 ⊂ F_16 the embedded
//! coordinates of a subring element are not coefficient-wise least
//! residues, and the naive lift leaves the subring.

use wittgauss_core::ff::make_field;
use wittgauss_core::witt::{LiftSection, WittEmbedding, WittRing};

fn section_compatible(
    p: u64,
    ksub: usize,
    ksup: usize,
    n: usize,
    r: usize,
    section: LiftSection,
) -> bool {
    let sub_n = WittRing::new(&make_field(p, ksub).unwrap(), n).unwrap();
    let sup_n = WittRing::new(&make_field(p, ksup).unwrap(), n).unwrap();
    let emb_n = WittEmbedding::new(&sub_n, &sup_n).unwrap();
    let sub_r = sub_n.ring_at_level(r).unwrap();
    let sup_r = sup_n.ring_at_level(r).unwrap();
    let emb_r = WittEmbedding::new(&sub_r, &sup_r).unwrap();
    let all: Vec<_> = sub_r.elements().collect();
    all.iter().all(|z| {
        let lifted = section.lift(&sup_n, &emb_r.embed(z));
        match emb_n.retract(&lifted) {
            Err(_) => false,
            // The retraction must also be the lift taken downstairs.
            Ok(back) => back == section.lift(&sub_n, z),
        }
    })
}

const TOWERS: &[(u64, usize, usize, usize, usize)] = &[
    (2, 1, 2, 2, 1),
    (2, 1, 2, 3, 2),
    (2, 1, 2, 3, 1),
    (2, 2, 4, 2, 1),
    (3, 1, 2, 2, 1),
    (3, 2, 4, 2, 1),
    (5, 1, 2, 2, 1),
];

#[test]
fn teichmuller_digit_lift_is_subring_compatible_everywhere() {
    for &(p, ksub, ksup, n, r) in TOWERS {
        assert!(
            section_compatible(p, ksub, ksup, n, r, LiftSection::TeichmullerDigits),
            "digit lift must be compatible at p={p}, F^{ksub} in F^{ksup}, n={n}, r={r}"
        );
    }
}

#[test]
fn coefficient_lift_is_subring_compatible_exactly_over_prime_bases() {
    for &(p, ksub, ksup, n, r) in TOWERS {
        let ok = section_compatible(p, ksub, ksup, n, r, LiftSection::Coefficient);
        assert_eq!(
            ok,
            ksub == 1,
            "coefficient-lift compatibility boundary moved at p={p}, F^{ksub} in F^{ksup}, n={n}, r={r}"
        );
    }
}
