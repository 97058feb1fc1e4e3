//! Shared fixtures for the sweep benchmarks.

use wittgauss_core::chars::{enumerate_mult_chars, AddChar, MultChar, UnitGroup};
use wittgauss_core::ff::make_field;
use wittgauss_core::witt::WittRing;
use std::sync::Arc;

/// A ring with its unit group, standard additive character and full dual.
pub struct Fixture {
    pub ring: WittRing,
    pub group: Arc<UnitGroup>,
    pub psi: AddChar,
    pub chars: Vec<MultChar>,
}

pub fn fixture(p: u64, k: usize, n: usize) -> Fixture {
    let ring = WittRing::new(&make_field(p, k).unwrap(), n).unwrap();
    let group = UnitGroup::new(&ring);
    let psi = AddChar::standard(&ring);
    let chars = enumerate_mult_chars(&group);
    Fixture { ring, group, psi, chars }
}
