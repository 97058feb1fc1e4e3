//! Truncated Witt vectors `W_n(F_q)` realised as Galois rings.
//!
//! The authoritative representation is `(Z/p^n)[x]/(f̃)` where `f̃` is the
//! canonical Hensel lift of the field modulus: the unique monic lift
//! dividing `x^q - x`. Its generator class is then a Teichmüller element,
//! which makes the Frobenius a plain substitution `ξ ↦ ξ^p`. Witt
//! coordinates are kept as a verification view only and are derived from
//! the Teichmüller digit expansion `x = Σ p^i [d_i]`.

use std::sync::{Arc, OnceLock};

use crate::ff::{FieldElement, FiniteField, SubfieldMap};
use crate::{Error, Result};

/// Default bound on `q^n` for full-enumeration work over a single ring.
pub const DEFAULT_RING_BOUND: u128 = 1 << 20;

#[derive(Debug)]
struct WittInner {
    field: FiniteField,
    n: usize,
    pn: u64,
    /// Canonical lift of the field modulus, constant first, length `k+1`.
    gr_modulus: Vec<u64>,
    /// Coordinates of `(ξ^p)^i` for `i < k`: the Frobenius substitution.
    frob_basis: Vec<Vec<u64>>,
    /// Full trace (down to `Z/p^n`) of each basis element `ξ^i`.
    trace_row: Vec<u64>,
    /// Lazily built truncations at levels `1..n`.
    levels: OnceLock<Vec<WittRing>>,
}

/// The ring `W_n(F_q)`; cheap to clone and share across threads.
#[derive(Clone, Debug)]
pub struct WittRing(Arc<WittInner>);

/// An element of `W_n(F_q)` in the Galois-ring view: a coefficient vector
/// of length `k` with entries mod `p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WittElement {
    ring: WittRing,
    coeffs: Vec<u64>,
}

impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field
                && self.0.n == other.0.n
                && self.0.gr_modulus == other.0.gr_modulus)
    }
}
impl Eq for WittRing {}

impl WittRing {
    pub fn new(field: &FiniteField, n: usize) -> Result<Self> {
        Self::with_bound(field, n, DEFAULT_RING_BOUND)
    }

    pub fn with_bound(field: &FiniteField, n: usize, bound: u128) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidDegree(n));
        }
        let card = (field.cardinality() as u128).pow(n as u32);
        if card > bound {
            return Err(Error::BoundExceeded { got: card, bound });
        }
        let pn = field.p().pow(n as u32);
        let k = field.degree();

        // Provisional ring on the naive coefficient lift of the modulus;
        // any monic lift presents the same Galois ring.
        let naive: Vec<u64> = field.modulus().to_vec();
        let provisional = WittRing(Arc::new(WittInner {
            field: field.clone(),
            n,
            pn,
            gr_modulus: naive,
            frob_basis: Vec::new(),
            trace_row: Vec::new(),
            levels: OnceLock::new(),
        }));

        // Canonical modulus: ∏_j (x - θ_j) over the Teichmüller lifts θ_j
        // of the Frobenius orbit of the field generator.
        let gr_modulus = if k == 1 {
            let alpha = field.gen(); // zero; modulus x stays x
            let theta = provisional.teichmuller(&alpha);
            vec![(pn - theta.coeffs[0]) % pn, 1]
        } else {
            let alpha = field.gen();
            let mut roots = Vec::with_capacity(k);
            let mut conj = alpha;
            for _ in 0..k {
                roots.push(provisional.teichmuller(&conj));
                conj = conj.frobenius();
            }
            // Expand ∏ (x - θ_j) with coefficients in the provisional ring.
            let mut poly: Vec<WittElement> = vec![provisional.one()];
            for root in &roots {
                let mut next = vec![provisional.zero(); poly.len() + 1];
                for (i, c) in poly.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(c);
                    next[i] = next[i].sub(&c.mul(root));
                }
                poly = next;
            }
            let mut out = Vec::with_capacity(k + 1);
            for c in &poly {
                assert!(
                    c.coeffs[1..].iter().all(|&x| x == 0),
                    "canonical modulus coefficients must be scalars"
                );
                out.push(c.coeffs[0]);
            }
            out
        };
        debug_assert_eq!(gr_modulus.len(), k + 1);
        for (a, b) in gr_modulus.iter().zip(field.modulus()) {
            assert_eq!(a % field.p(), *b, "canonical lift must reduce to the field modulus");
        }

        // Final ring with Frobenius substitution and trace data.
        let mut ring = WittRing(Arc::new(WittInner {
            field: field.clone(),
            n,
            pn,
            gr_modulus,
            frob_basis: Vec::new(),
            trace_row: Vec::new(),
            levels: OnceLock::new(),
        }));
        let xi_p = ring.gen().pow_u64(field.p());
        let mut frob_basis = Vec::with_capacity(k);
        let mut pow = ring.one();
        for _ in 0..k {
            frob_basis.push(pow.coeffs.clone());
            pow = pow.mul(&xi_p);
        }
        let mut trace_row = Vec::with_capacity(k);
        {
            let with_frob = WittRing(Arc::new(WittInner {
                field: field.clone(),
                n,
                pn,
                gr_modulus: ring.0.gr_modulus.clone(),
                frob_basis: frob_basis.clone(),
                trace_row: Vec::new(),
                levels: OnceLock::new(),
            }));
            for i in 0..k {
                let mut acc = with_frob.zero();
                let mut conj = with_frob.gen().pow_u64(i as u64);
                for _ in 0..k {
                    acc = acc.add(&conj);
                    conj = with_frob.frobenius(&conj);
                }
                assert!(
                    acc.coeffs[1..].iter().all(|&x| x == 0),
                    "trace must land in Z/p^n"
                );
                trace_row.push(acc.coeffs[0]);
            }
            ring = WittRing(Arc::new(WittInner {
                field: field.clone(),
                n,
                pn,
                gr_modulus: with_frob.0.gr_modulus.clone(),
                frob_basis,
                trace_row,
                levels: OnceLock::new(),
            }));
        }
        Ok(ring)
    }

    pub fn field(&self) -> &FiniteField {
        &self.0.field
    }

    pub fn p(&self) -> u64 {
        self.0.field.p()
    }

    pub fn q(&self) -> u64 {
        self.0.field.cardinality()
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    pub fn pn(&self) -> u64 {
        self.0.pn
    }

    pub fn degree(&self) -> usize {
        self.0.field.degree()
    }

    pub fn gr_modulus(&self) -> &[u64] {
        &self.0.gr_modulus
    }

    pub fn cardinality(&self) -> u64 {
        self.q().pow(self.0.n as u32)
    }

    /// `|W_n(F_q)^×| = q^{n-1}(q-1)`.
    pub fn unit_order(&self) -> u64 {
        let q = self.q();
        q.pow(self.0.n as u32 - 1) * (q - 1)
    }

    pub fn zero(&self) -> WittElement {
        WittElement { ring: self.clone(), coeffs: vec![0; self.degree()] }
    }

    pub fn one(&self) -> WittElement {
        self.from_scalar(1)
    }

    pub fn from_scalar(&self, c: u64) -> WittElement {
        let mut coeffs = vec![0; self.degree()];
        coeffs[0] = c % self.0.pn;
        WittElement { ring: self.clone(), coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> WittElement {
        assert!(coeffs.len() <= self.degree());
        let mut v = vec![0; self.degree()];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = c % self.0.pn;
        }
        WittElement { ring: self.clone(), coeffs: v }
    }

    /// The generator class `ξ`, a Teichmüller element by construction.
    pub fn gen(&self) -> WittElement {
        if self.degree() == 1 {
            // F_p has modulus x, so ξ = 0 there; callers treat k = 1 apart.
            return self.zero();
        }
        let mut coeffs = vec![0; self.degree()];
        coeffs[1] = 1;
        WittElement { ring: self.clone(), coeffs }
    }

    /// Element with the given index in base-`p^n` counting order.
    pub fn element(&self, index: usize) -> WittElement {
        let pn = self.0.pn as usize;
        let mut idx = index;
        let coeffs = (0..self.degree())
            .map(|_| {
                let c = (idx % pn) as u64;
                idx /= pn;
                c
            })
            .collect();
        WittElement { ring: self.clone(), coeffs }
    }

    pub fn elements(&self) -> impl Iterator<Item = WittElement> + '_ {
        (0..self.cardinality() as usize).map(move |i| self.element(i))
    }

    pub fn units(&self) -> impl Iterator<Item = WittElement> + '_ {
        self.elements().filter(|x| x.is_unit())
    }

    /// The Teichmüller lift `[δ]`: the unique multiplicative section of
    /// reduction, computed by iterating `y ↦ y^q` until stable.
    pub fn teichmuller(&self, delta: &FieldElement) -> WittElement {
        assert_eq!(*delta.field(), *self.field());
        let mut y = self.from_coeffs(delta.coeffs());
        let q = self.q();
        for _ in 0..=self.0.n {
            y = y.pow_u64(q);
        }
        debug_assert_eq!(y.pow_u64(q), y, "Teichmüller iteration must stabilise");
        y
    }

    /// The same ring truncated at length `r ≤ n`; built once and cached.
    pub fn ring_at_level(&self, r: usize) -> Result<WittRing> {
        if r < 1 || r > self.0.n {
            return Err(Error::BadProjection { r, n: self.0.n });
        }
        if r == self.0.n {
            return Ok(self.clone());
        }
        let levels = self.0.levels.get_or_init(|| {
            (1..self.0.n)
                .map(|level| {
                    let ring = WittRing::with_bound(self.field(), level, u128::MAX)
                        .expect("lower levels satisfy any bound the parent did");
                    let pr = self.p().pow(level as u32);
                    debug_assert_eq!(
                        ring.0.gr_modulus,
                        self.0.gr_modulus.iter().map(|c| c % pr).collect::<Vec<_>>(),
                        "level rings must share the canonical modulus tower"
                    );
                    ring
                })
                .collect()
        });
        Ok(levels[r - 1].clone())
    }

    /// `pr^n_r : W_n → W_r`, a ring homomorphism.
    pub fn project(&self, x: &WittElement, r: usize) -> Result<WittElement> {
        assert_eq!(x.ring, *self);
        let target = self.ring_at_level(r)?;
        Ok(target.from_coeffs(&x.coeffs))
    }

    /// Coefficient-wise lift (least nonnegative residues) from a lower
    /// truncation level into this ring; a section of `project`.
    pub fn lift_from(&self, x: &WittElement) -> WittElement {
        assert!(x.ring.0.n <= self.0.n && x.ring.field() == self.field());
        self.from_coeffs(&x.coeffs)
    }

    /// Teichmüller-digit lift: rebuilds `Σ p^i [d_i]` at this level from
    /// the digits of `x`.
    pub fn lift_teich(&self, x: &WittElement) -> WittElement {
        assert!(x.ring.0.n <= self.0.n && x.ring.field() == self.field());
        let digits = x.ring.teich_digits(x);
        let mut acc = self.zero();
        let mut p_pow = 1u64;
        for d in &digits {
            acc = acc.add(&self.teichmuller(d).scalar_mul(p_pow));
            p_pow *= self.p();
        }
        acc
    }

    pub fn frobenius(&self, x: &WittElement) -> WittElement {
        assert_eq!(x.ring, *self);
        let mut coeffs = vec![0u64; self.degree()];
        for (i, &c) in x.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, &b) in self.0.frob_basis[i].iter().enumerate() {
                coeffs[j] = (coeffs[j] + c * b) % self.0.pn;
            }
        }
        WittElement { ring: self.clone(), coeffs }
    }

    pub fn frobenius_iter(&self, x: &WittElement, times: usize) -> WittElement {
        let mut y = x.clone();
        for _ in 0..times {
            y = self.frobenius(&y);
        }
        y
    }

    /// Trace down to `W_n(F_p) = Z/p^n`.
    pub fn full_trace(&self, x: &WittElement) -> u64 {
        assert_eq!(x.ring, *self);
        let mut t = 0u64;
        for (c, row) in x.coeffs.iter().zip(&self.0.trace_row) {
            t = (t + c * row) % self.0.pn;
        }
        t
    }

    pub fn reduce_to_field(&self, x: &WittElement) -> FieldElement {
        let p = self.p();
        self.0
            .field
            .from_coeffs(&x.coeffs.iter().map(|c| c % p).collect::<Vec<_>>())
    }

    /// Teichmüller digits: the unique `d_i ∈ F_q` with `x = Σ p^i [d_i]`.
    pub fn teich_digits(&self, x: &WittElement) -> Vec<FieldElement> {
        assert_eq!(x.ring, *self);
        let p = self.p();
        let mut digits = Vec::with_capacity(self.0.n);
        let mut level = self.clone();
        let mut cur = x.clone();
        loop {
            let d = level.reduce_to_field(&cur);
            digits.push(d.clone());
            if level.0.n == 1 {
                break;
            }
            let t = level.teichmuller(&d);
            let diff = cur.sub(&t);
            debug_assert!(diff.coeffs.iter().all(|c| c % p == 0));
            let lower = level.ring_at_level(level.0.n - 1).expect("level - 1 is valid");
            cur = lower.from_coeffs(&diff.coeffs.iter().map(|c| c / p).collect::<Vec<_>>());
            level = lower;
        }
        digits
    }

    /// Witt coordinates `(w_0, …, w_{n-1})`: `w_i = d_i^{p^i}` in terms of
    /// the Teichmüller digits. A verification view only.
    pub fn witt_coords(&self, x: &WittElement) -> Vec<FieldElement> {
        self.teich_digits(x)
            .into_iter()
            .enumerate()
            .map(|(i, d)| d.frobenius_iter(i))
            .collect()
    }

    /// Rebuilds an element from Witt coordinates.
    pub fn from_witt_coords(&self, coords: &[FieldElement]) -> WittElement {
        assert_eq!(coords.len(), self.0.n);
        let k = self.degree();
        let mut acc = self.zero();
        let mut p_pow = 1u64;
        for (i, w) in coords.iter().enumerate() {
            // d_i is the p^i-th root of w_i: inverse Frobenius is x^{p^{k-1}}.
            let mut d = w.clone();
            for _ in 0..i {
                d = d.frobenius_iter(k - 1);
            }
            acc = acc.add(&self.teichmuller(&d).scalar_mul(p_pow));
            p_pow *= self.p();
        }
        acc
    }

    /// Unit decomposition `u = z̃ (1 + p^{n-r} w̃)` with `z = pr^n_{n-r}(u)`
    /// and `w ∈ W_r`; unique given the lift section.
    pub fn unit_decompose(
        &self,
        u: &WittElement,
        r: usize,
        section: LiftSection,
    ) -> Result<(WittElement, WittElement)> {
        if !u.is_unit() {
            return Err(Error::NotAUnit);
        }
        let n = self.0.n;
        if r < 1 || r >= n {
            return Err(Error::BadProjection { r, n });
        }
        let z = self.project(u, n - r)?;
        let z_lift = section.lift(self, &z);
        let v = u.mul(&z_lift.inverse()?);
        let step = self.p().pow((n - r) as u32);
        debug_assert!(v.sub(&self.one()).coeffs.iter().all(|c| c % step == 0));
        let w_ring = self.ring_at_level(r)?;
        let w = w_ring.from_coeffs(
            &v.sub(&self.one())
                .coeffs
                .iter()
                .map(|c| c / step)
                .collect::<Vec<_>>(),
        );
        Ok((z, w))
    }

    /// Recomposes `z̃ (1 + p^{n-r} w̃)` from a decomposition.
    pub fn unit_recompose(
        &self,
        z: &WittElement,
        w: &WittElement,
        section: LiftSection,
    ) -> WittElement {
        let n = self.0.n;
        let r = w.ring.0.n;
        assert_eq!(z.ring.0.n, n - r);
        let step = self.p().pow((n - r) as u32);
        let one_plus = self.one().add(&section.lift(self, w).scalar_mul(step));
        section.lift(self, z).mul(&one_plus)
    }

    /// Gram matrix `[Tr(t · ξ^i ξ^j)]` of the (twisted) trace pairing on
    /// this ring, with entries in `Z/p^n`.
    pub fn trace_pairing_gram(&self, twist: &WittElement) -> Vec<Vec<u64>> {
        let k = self.degree();
        let mut basis = Vec::with_capacity(k);
        let mut pow = self.one();
        for _ in 0..k {
            basis.push(pow.clone());
            pow = pow.mul(&self.gen());
        }
        if k == 1 {
            basis = vec![self.one()];
        }
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| self.full_trace(&twist.mul(&basis[i]).mul(&basis[j])))
                    .collect()
            })
            .collect()
    }
}

impl WittElement {
    pub fn ring(&self) -> &WittRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn index(&self) -> usize {
        let pn = self.ring.0.pn as usize;
        self.coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * pn + c as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_unit(&self) -> bool {
        !self.ring.reduce_to_field(self).is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring);
        let pn = self.ring.0.pn;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % pn)
            .collect();
        WittElement { ring: self.ring.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring);
        let pn = self.ring.0.pn;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + pn - b) % pn)
            .collect();
        WittElement { ring: self.ring.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        self.ring.zero().sub(self)
    }

    pub fn scalar_mul(&self, c: u64) -> Self {
        let pn = self.ring.0.pn;
        let c = c % pn;
        let coeffs = self.coeffs.iter().map(|a| a * c % pn).collect();
        WittElement { ring: self.ring.clone(), coeffs }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ring, other.ring);
        let inner = &self.ring.0;
        let pn = inner.pn;
        let k = inner.gr_modulus.len() - 1;
        let mut prod = vec![0u64; 2 * k];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b != 0 {
                    prod[i + j] = (prod[i + j] + a * b) % pn;
                }
            }
        }
        // Reduce modulo the monic gr_modulus.
        for d in (k..2 * k).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &mi) in inner.gr_modulus.iter().enumerate().take(k) {
                if mi != 0 {
                    prod[d - k + i] = (prod[d - k + i] + (pn - mi) * c % pn) % pn;
                }
            }
        }
        prod.truncate(k);
        WittElement { ring: self.ring.clone(), coeffs: prod }
    }

    pub fn pow_u64(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        Ok(self.pow_u64(self.ring.unit_order() - 1))
    }
}

/// Choice of section for `pr^n_r`; the paper only requires a section that
/// is compatible with subrings, which the Teichmüller-digit lift is.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftSection {
    /// Least nonnegative residue on every Galois-ring coefficient.
    Coefficient,
    /// Lift each Teichmüller digit and reassemble `Σ p^i [d_i]`.
    TeichmullerDigits,
}

impl LiftSection {
    pub fn lift(&self, target: &WittRing, x: &WittElement) -> WittElement {
        match self {
            LiftSection::Coefficient => target.lift_from(x),
            LiftSection::TeichmullerDigits => target.lift_teich(x),
        }
    }
}

/// Functorial embedding `W_n(F_q) → W_n(F_{q^s})` lifting a deterministic
/// subfield embedding; carries the relative norm and trace.
#[derive(Clone, Debug)]
pub struct WittEmbedding {
    sub: WittRing,
    sup: WittRing,
    field_map: SubfieldMap,
    /// `ζ^i` for `i < k_sub`, where `ζ` is the Teichmüller lift of the
    /// canonical field root.
    basis_images: Vec<WittElement>,
}

impl WittEmbedding {
    pub fn new(sub: &WittRing, sup: &WittRing) -> Result<Self> {
        if sub.n() != sup.n() {
            return Err(Error::NotSubfield("truncation lengths differ".into()));
        }
        let field_map = SubfieldMap::new(sub.field(), sup.field())?;
        // The root of the canonical sub-modulus inside the extension ring
        // is the Teichmüller lift of the field-level root.
        let zeta = if sub.degree() == 1 {
            sup.zero()
        } else {
            let delta = field_map.embed(&sub.field().gen());
            sup.teichmuller(&delta)
        };
        // ζ must satisfy the canonical sub-modulus exactly.
        let mut acc = sup.zero();
        for &c in sub.gr_modulus().iter().rev() {
            acc = acc.mul(&zeta).add(&sup.from_scalar(c));
        }
        assert!(acc.is_zero(), "Teichmüller root must kill the canonical modulus");

        let mut basis_images = Vec::with_capacity(sub.degree());
        let mut pow = sup.one();
        for _ in 0..sub.degree() {
            basis_images.push(pow.clone());
            pow = pow.mul(&zeta);
        }
        Ok(WittEmbedding {
            sub: sub.clone(),
            sup: sup.clone(),
            field_map,
            basis_images,
        })
    }

    pub fn sub(&self) -> &WittRing {
        &self.sub
    }

    pub fn sup(&self) -> &WittRing {
        &self.sup
    }

    pub fn field_map(&self) -> &SubfieldMap {
        &self.field_map
    }

    pub fn relative_degree(&self) -> usize {
        self.sup.degree() / self.sub.degree()
    }

    pub fn embed(&self, x: &WittElement) -> WittElement {
        assert_eq!(*x.ring(), self.sub);
        let mut acc = self.sup.zero();
        for (&c, img) in x.coeffs().iter().zip(&self.basis_images) {
            if c != 0 {
                acc = acc.add(&img.scalar_mul(c));
            }
        }
        acc
    }

    /// Solves for the subring preimage; errors when `y` is outside the
    /// image.
    pub fn retract(&self, y: &WittElement) -> Result<WittElement> {
        assert_eq!(*y.ring(), self.sup);
        let pn = self.sup.pn();
        let p = self.sup.p();
        let big_k = self.sup.degree();
        let k = self.sub.degree();
        let mut aug: Vec<Vec<u64>> = (0..big_k)
            .map(|r| {
                let mut row: Vec<u64> =
                    (0..k).map(|c| self.basis_images[c].coeffs()[r]).collect();
                row.push(y.coeffs()[r]);
                row
            })
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..k {
            // A pivot must be a unit mod p^n, i.e. nonzero mod p.
            if let Some(pr) = (r..big_k).find(|&i| aug[i][c] % p != 0) {
                aug.swap(r, pr);
                let inv = inverse_mod_pn(aug[r][c], pn);
                for x in aug[r].iter_mut() {
                    *x = *x * inv % pn;
                }
                for i in 0..big_k {
                    if i != r && aug[i][c] != 0 {
                        let f = aug[i][c];
                        for j in 0..=k {
                            aug[i][j] = (aug[i][j] + (pn - f) * aug[r][j] % pn) % pn;
                        }
                    }
                }
                pivots.push(c);
                r += 1;
            } else {
                return Err(Error::NotInSubring);
            }
        }
        let mut coeffs = vec![0u64; k];
        for (rank_row, &c) in pivots.iter().enumerate() {
            coeffs[c] = aug[rank_row][k];
        }
        let candidate = self.sub.from_coeffs(&coeffs);
        if self.embed(&candidate) == *y {
            Ok(candidate)
        } else {
            Err(Error::NotInSubring)
        }
    }

    /// Functorial norm `Nr : W_n(F_{q^s})^× → W_n(F_q)^×`, the product of
    /// relative Frobenius conjugates.
    pub fn rel_norm(&self, x: &WittElement) -> WittElement {
        let k = self.sub.degree();
        let s = self.relative_degree();
        let mut acc = self.sup.one();
        let mut conj = x.clone();
        for _ in 0..s {
            acc = acc.mul(&conj);
            conj = self.sup.frobenius_iter(&conj, k);
        }
        self.retract(&acc)
            .expect("norm is Galois-invariant, hence lands in the subring")
    }

    /// Functorial trace `Tr : W_n(F_{q^s}) → W_n(F_q)`.
    pub fn rel_trace(&self, x: &WittElement) -> WittElement {
        let k = self.sub.degree();
        let s = self.relative_degree();
        let mut acc = self.sup.zero();
        let mut conj = x.clone();
        for _ in 0..s {
            acc = acc.add(&conj);
            conj = self.sup.frobenius_iter(&conj, k);
        }
        self.retract(&acc)
            .expect("trace is Galois-invariant, hence lands in the subring")
    }
}

/// Norm of a Witt vector along an unramified extension.
pub fn witt_norm(x: &WittElement, emb: &WittEmbedding) -> WittElement {
    emb.rel_norm(x)
}

/// Trace of a Witt vector along an unramified extension.
pub fn witt_trace(x: &WittElement, emb: &WittEmbedding) -> WittElement {
    emb.rel_trace(x)
}

/// Inverse of a unit modulo `p^n` (extended Euclid).
pub fn inverse_mod_pn(a: u64, pn: u64) -> u64 {
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (pn as i128, (a % pn) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert_eq!(r, 1, "not a unit mod p^n");
    t.rem_euclid(pn as i128) as u64
}

/// Solves `M x = b` over `Z/p^r` when `M` is invertible mod `p` (pivots
/// are always units). Returns the unique solution.
pub fn solve_unit_system(m: &[Vec<u64>], b: &[u64], p: u64, pr: u64) -> Vec<u64> {
    let size = b.len();
    let mut aug: Vec<Vec<u64>> = (0..size)
        .map(|i| {
            let mut row = m[i].clone();
            row.push(b[i]);
            row
        })
        .collect();
    for c in 0..size {
        let piv = (c..size)
            .find(|&i| aug[i][c] % p != 0)
            .expect("matrix must be invertible mod p");
        aug.swap(c, piv);
        let inv = inverse_mod_pn(aug[c][c], pr);
        for x in aug[c].iter_mut() {
            *x = *x * inv % pr;
        }
        for i in 0..size {
            if i != c && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..=size {
                    aug[i][j] = (aug[i][j] + (pr - f) * aug[c][j] % pr) % pr;
                }
            }
        }
    }
    (0..size).map(|i| aug[i][size]).collect()
}

/// Inverts a matrix over `Z/p^r` whose reduction mod `p` is invertible;
/// this is the constructive form of trace-pairing perfectness.
pub fn invert_unit_matrix(m: &[Vec<u64>], p: u64, pr: u64) -> Option<Vec<Vec<u64>>> {
    let size = m.len();
    let mut aug: Vec<Vec<u64>> = (0..size)
        .map(|i| {
            let mut row = m[i].clone();
            let mut id = vec![0u64; size];
            id[i] = 1;
            row.extend(id);
            row
        })
        .collect();
    for c in 0..size {
        let piv = (c..size).find(|&i| aug[i][c] % p != 0)?;
        aug.swap(c, piv);
        let inv = inverse_mod_pn(aug[c][c], pr);
        for x in aug[c].iter_mut() {
            *x = *x * inv % pr;
        }
        for i in 0..size {
            if i != c && aug[i][c] != 0 {
                let f = aug[i][c];
                for j in 0..2 * size {
                    aug[i][j] = (aug[i][j] + (pr - f) * aug[c][j] % pr) % pr;
                }
            }
        }
    }
    Some((0..size).map(|i| aug[i][size..].to_vec()).collect())
}
