//! Exact arithmetic in finite fields `F_{p^k}` and their extensions.
//!
//! A field is `F_p[x]/(f)` for a deterministically chosen monic
//! irreducible `f`: the scan runs through monic polynomials in base-`p`
//! counting order of their coefficient vectors and takes the first
//! irreducible one, so tables are reproducible across runs and machines.

use std::sync::Arc;

use crate::{Error, Result};

/// Default bound on `p^k` for full-enumeration work.
pub const DEFAULT_FIELD_BOUND: u128 = 1024;

#[derive(Debug)]
struct FieldInner {
    p: u64,
    k: usize,
    /// Monic modulus of degree `k`, constant term first, length `k + 1`.
    modulus: Vec<u64>,
}

/// A finite field `F_{p^k}`; cheap to clone and share.
#[derive(Clone, Debug)]
pub struct FiniteField(Arc<FieldInner>);

/// An element of a finite field, as a coefficient vector of length `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElement {
    field: FiniteField,
    coeffs: Vec<u64>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for FiniteField {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Constructs `F_{p^k}` with the default enumeration bound.
pub fn make_field(p: u64, k: usize) -> Result<FiniteField> {
    FiniteField::new(p, k)
}

impl FiniteField {
    pub fn new(p: u64, k: usize) -> Result<Self> {
        Self::with_bound(p, k, DEFAULT_FIELD_BOUND)
    }

    pub fn with_bound(p: u64, k: usize, bound: u128) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k < 1 {
            return Err(Error::InvalidDegree(k));
        }
        let card = (p as u128).checked_pow(k as u32).ok_or(Error::BoundExceeded {
            got: u128::MAX,
            bound,
        })?;
        if card > bound {
            return Err(Error::BoundExceeded { got: card, bound });
        }
        let modulus = if k == 1 {
            vec![0, 1] // x itself: F_p = F_p[x]/(x)
        } else {
            find_irreducible(p, k)
        };
        Ok(FiniteField(Arc::new(FieldInner { p, k, modulus })))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> usize {
        self.0.k
    }

    pub fn cardinality(&self) -> u64 {
        self.0.p.pow(self.0.k as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { field: self.clone(), coeffs: vec![0; self.0.k] }
    }

    pub fn one(&self) -> FieldElement {
        self.from_scalar(1)
    }

    pub fn from_scalar(&self, c: u64) -> FieldElement {
        let mut coeffs = vec![0; self.0.k];
        coeffs[0] = c % self.0.p;
        FieldElement { field: self.clone(), coeffs }
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.0.k);
        let mut v = vec![0; self.0.k];
        for (i, &c) in coeffs.iter().enumerate() {
            v[i] = c % self.0.p;
        }
        FieldElement { field: self.clone(), coeffs: v }
    }

    /// The generator class `x` of `F_p[x]/(f)`.
    pub fn gen(&self) -> FieldElement {
        if self.0.k == 1 {
            return self.zero();
        }
        let mut coeffs = vec![0; self.0.k];
        coeffs[1] = 1;
        FieldElement { field: self.clone(), coeffs }
    }

    /// Element with the given index in base-`p` counting order.
    pub fn element(&self, index: usize) -> FieldElement {
        let p = self.0.p as usize;
        let mut idx = index;
        let coeffs = (0..self.0.k)
            .map(|_| {
                let c = (idx % p) as u64;
                idx /= p;
                c
            })
            .collect();
        FieldElement { field: self.clone(), coeffs }
    }

    /// Iterates every element in base-`p` counting order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.cardinality() as usize).map(move |i| self.element(i))
    }

    /// The least primitive element (generator of `F_q^×`) in counting order.
    pub fn primitive_element(&self) -> FieldElement {
        let q = self.cardinality();
        'outer: for i in 1..q as usize {
            let x = self.element(i);
            if x.is_zero() {
                continue;
            }
            // Order test against maximal proper divisors of q - 1.
            for (ell, _) in prime_factors(q - 1) {
                if x.pow((q - 1) / ell).is_one() {
                    continue 'outer;
                }
            }
            return x;
        }
        unreachable!("every finite field has a primitive element")
    }
}

impl FieldElement {
    pub fn field(&self) -> &FiniteField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Index of this element in base-`p` counting order.
    pub fn index(&self) -> usize {
        let p = self.field.p() as usize;
        self.coeffs
            .iter()
            .rev()
            .fold(0usize, |acc, &c| acc * p + c as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let p = self.field.p();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn neg(&self) -> Self {
        self.field.zero().sub(self)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.field, other.field);
        let inner = &self.field.0;
        let coeffs = poly_mul_mod(inner.p, &self.coeffs, &other.coeffs, &inner.modulus);
        FieldElement { field: self.field.clone(), coeffs }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.field.one();
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
        if self.is_zero() {
            return Err(Error::NotAUnit);
        }
        Ok(self.pow(self.field.cardinality() - 2))
    }

    /// The `p`-power Frobenius `x ↦ x^p`.
    pub fn frobenius(&self) -> Self {
        self.pow(self.field.p())
    }

    /// `x ↦ x^{p^i}`.
    pub fn frobenius_iter(&self, i: usize) -> Self {
        let mut x = self.clone();
        for _ in 0..i {
            x = x.frobenius();
        }
        x
    }
}

/// Deterministic embedding of a subfield into an extension.
///
/// The image of the subfield generator is the first root of the subfield
/// modulus in counting order; pulling back is a linear solve over `F_p`
/// against the precomputed basis image.
#[derive(Clone, Debug)]
pub struct SubfieldMap {
    sub: FiniteField,
    sup: FiniteField,
    /// `root^i` for `i < k_sub`, as coefficient vectors in the extension.
    basis_images: Vec<FieldElement>,
}

impl SubfieldMap {
    pub fn new(sub: &FiniteField, sup: &FiniteField) -> Result<Self> {
        if sub.p() != sup.p() || sup.degree() % sub.degree() != 0 {
            return Err(Error::NotSubfield(format!(
                "F_{}^{} into F_{}^{}",
                sub.p(),
                sub.degree(),
                sup.p(),
                sup.degree()
            )));
        }
        let root = if sub.degree() == 1 {
            sup.zero() // modulus of F_p is x; its root is 0
        } else {
            sup.elements()
                .find(|x| eval_poly(sub.modulus(), x).is_zero())
                .ok_or_else(|| Error::NotSubfield("no root of subfield modulus".into()))?
        };
        let mut basis_images = Vec::with_capacity(sub.degree());
        let mut pow = sup.one();
        for _ in 0..sub.degree() {
            basis_images.push(pow.clone());
            pow = pow.mul(&root);
        }
        Ok(SubfieldMap { sub: sub.clone(), sup: sup.clone(), basis_images })
    }

    pub fn sub(&self) -> &FiniteField {
        &self.sub
    }

    pub fn sup(&self) -> &FiniteField {
        &self.sup
    }

    /// Relative degree `[sup : sub]`.
    pub fn relative_degree(&self) -> usize {
        self.sup.degree() / self.sub.degree()
    }

    pub fn embed(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(*x.field(), self.sub);
        let mut acc = self.sup.zero();
        for (c, img) in x.coeffs().iter().zip(&self.basis_images) {
            if *c != 0 {
                acc = acc.add(&img.mul(&self.sup.from_scalar(*c)));
            }
        }
        acc
    }

    /// Expresses an element of the extension in the subfield, if it lies
    /// in the image.
    pub fn retract(&self, y: &FieldElement) -> Result<FieldElement> {
        assert_eq!(*y.field(), self.sup);
        let p = self.sup.p();
        let big_k = self.sup.degree();
        let k = self.sub.degree();
        // Solve basis_images · c = y over F_p by Gaussian elimination.
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
            if let Some(pr) = (r..big_k).find(|&i| aug[i][c] != 0) {
                aug.swap(r, pr);
                let inv = mod_inverse(aug[r][c], p);
                for x in aug[r].iter_mut() {
                    *x = *x * inv % p;
                }
                for i in 0..big_k {
                    if i != r && aug[i][c] != 0 {
                        let f = aug[i][c];
                        for j in 0..=k {
                            aug[i][j] = (aug[i][j] + (p - f) * aug[r][j]) % p;
                        }
                    }
                }
                pivots.push(c);
                r += 1;
            }
        }
        for row in aug.iter().skip(r) {
            if row[k] != 0 {
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

    /// Relative trace `Tr_{sup/sub}(x) = Σ_j x^{p^{k·j}}`, as an element
    /// of the subfield.
    pub fn rel_trace(&self, x: &FieldElement) -> FieldElement {
        let k = self.sub.degree();
        let s = self.relative_degree();
        let mut acc = self.sup.zero();
        let mut conj = x.clone();
        for _ in 0..s {
            acc = acc.add(&conj);
            conj = conj.frobenius_iter(k);
        }
        self.retract(&acc)
            .expect("trace lands in the subfield by Galois invariance")
    }

    /// Relative norm `Nr_{sup/sub}(x) = Π_j x^{p^{k·j}}`.
    pub fn rel_norm(&self, x: &FieldElement) -> FieldElement {
        let k = self.sub.degree();
        let s = self.relative_degree();
        let mut acc = self.sup.one();
        let mut conj = x.clone();
        for _ in 0..s {
            acc = acc.mul(&conj);
            conj = conj.frobenius_iter(k);
        }
        self.retract(&acc)
            .expect("norm lands in the subfield by Galois invariance")
    }
}

/// Relative trace via a subfield map; see [`SubfieldMap::rel_trace`].
pub fn rel_trace(x: &FieldElement, map: &SubfieldMap) -> FieldElement {
    map.rel_trace(x)
}

/// Relative norm via a subfield map; see [`SubfieldMap::rel_norm`].
pub fn rel_norm(x: &FieldElement, map: &SubfieldMap) -> FieldElement {
    map.rel_norm(x)
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // p prime, a != 0 mod p.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

fn prime_factors(n: u64) -> Vec<(u64, u32)> {
    let mut n = n;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn eval_poly(poly: &[u64], x: &FieldElement) -> FieldElement {
    let field = x.field();
    let mut acc = field.zero();
    for &c in poly.iter().rev() {
        acc = acc.mul(x).add(&field.from_scalar(c));
    }
    acc
}

// ---- dense polynomial arithmetic over F_p ---------------------------------

fn poly_mul_mod(p: u64, a: &[u64], b: &[u64], modulus: &[u64]) -> Vec<u64> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            if bj != 0 {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
    }
    poly_rem(p, &mut prod, modulus);
    prod.truncate(k);
    prod.resize(k, 0);
    prod
}

/// Reduces `a` modulo the monic `modulus` in place.
fn poly_rem(p: u64, a: &mut Vec<u64>, modulus: &[u64]) {
    let k = modulus.len() - 1;
    let mut d = a.len();
    while d > k {
        d -= 1;
        let c = a[d];
        if c == 0 {
            continue;
        }
        a[d] = 0;
        for (i, &mi) in modulus.iter().enumerate().take(k) {
            if mi != 0 {
                a[d - k + i] = (a[d - k + i] + (p - mi) * c % p) % p;
            }
        }
    }
}

fn poly_deg(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn poly_gcd(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    loop {
        let Some(db) = poly_deg(&b) else {
            // Normalise to monic.
            if let Some(da) = poly_deg(&a) {
                let inv = mod_inverse(a[da], p);
                for c in a.iter_mut() {
                    *c = *c * inv % p;
                }
                a.truncate(da + 1);
            } else {
                a.clear();
            }
            return a;
        };
        // a mod b
        let inv_lead = mod_inverse(b[db], p);
        while let Some(da) = poly_deg(&a) {
            if da < db {
                break;
            }
            let f = a[da] * inv_lead % p;
            for i in 0..=db {
                a[da - db + i] = (a[da - db + i] + (p - b[i]) * f % p) % p;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
}

/// `x^{p^e} mod f`, by repeated `p`-th powering.
fn x_pow_p_iter(p: u64, e: usize, f: &[u64]) -> Vec<u64> {
    let k = f.len() - 1;
    let mut cur = vec![0u64; k];
    if k == 1 {
        // x ≡ -f[0]
        cur[0] = (p - f[0] % p) % p;
    } else {
        cur[1] = 1;
    }
    for _ in 0..e {
        cur = poly_pow_mod(p, &cur, p, f);
    }
    cur
}

fn poly_pow_mod(p: u64, base: &[u64], mut e: u64, f: &[u64]) -> Vec<u64> {
    let k = f.len() - 1;
    let mut acc = vec![0u64; k];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mul_mod(p, &acc, &b, f);
        }
        e >>= 1;
        if e > 0 {
            b = poly_mul_mod(p, &b, &b, f);
        }
    }
    acc
}

fn is_irreducible(p: u64, f: &[u64]) -> bool {
    let k = f.len() - 1;
    // x^{p^k} ≡ x (mod f) …
    let mut xq = x_pow_p_iter(p, k, f);
    if k == 1 {
        return true;
    }
    let mut x = vec![0u64; k];
    x[1] = 1;
    if xq != x {
        return false;
    }
    // … and gcd(x^{p^d} - x, f) = 1 for every proper divisor d of k.
    for d in 1..k {
        if k % d != 0 {
            continue;
        }
        xq = x_pow_p_iter(p, d, f);
        let diff: Vec<u64> = xq
            .iter()
            .zip(&x)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        let g = poly_gcd(p, &diff, f);
        if poly_deg(&g) != Some(0) {
            return false;
        }
    }
    true
}

fn find_irreducible(p: u64, k: usize) -> Vec<u64> {
    let total = (p as u128).pow(k as u32);
    for idx in 0..total {
        let mut f = Vec::with_capacity(k + 1);
        let mut t = idx;
        for _ in 0..k {
            f.push((t % p as u128) as u64);
            t /= p as u128;
        }
        f.push(1); // monic
        if is_irreducible(p, &f) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_field_examples() {
        let f2 = make_field(2, 1).unwrap();
        assert_eq!(f2.modulus(), &[0, 1]);
        let f4 = make_field(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // x^2 + x + 1
        let f9 = make_field(3, 2).unwrap();
        // Lexicographically smallest irreducible quadratic over F_3 in
        // counting order is x^2 + 1.
        assert_eq!(f9.modulus(), &[1, 0, 1]);
        assert!(is_irreducible(3, f9.modulus()));
    }

    #[test]
    fn make_field_errors() {
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 0), Err(Error::InvalidDegree(0))));
        assert!(matches!(make_field(2, 11), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn frobenius_examples() {
        let f4 = make_field(2, 2).unwrap();
        assert!(f4.zero().frobenius().is_zero());
        let alpha = f4.gen();
        // α^2 = α + 1 modulo x^2 + x + 1.
        assert_eq!(alpha.frobenius(), alpha.add(&f4.one()));
        // Frobenius fixes the prime subfield.
        for c in 0..2 {
            let x = f4.from_scalar(c);
            assert_eq!(x.frobenius(), x);
        }
        // Iterating k times is the identity.
        for x in f4.elements() {
            assert_eq!(x.frobenius_iter(2), x);
        }
    }

    #[test]
    fn fermat_identity() {
        for (p, k) in [(2u64, 4usize), (3, 2), (5, 2), (7, 1)] {
            let f = make_field(p, k).unwrap();
            let q = f.cardinality();
            for x in f.elements() {
                assert_eq!(x.pow(q), x);
            }
        }
    }

    #[test]
    fn trace_norm_examples() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let map = SubfieldMap::new(&f2, &f4).unwrap();
        let alpha = f4.gen();
        // Tr(α) = α + α^2 = 1, Nr(α) = α · α^2 = 1.
        assert!(map.rel_trace(&alpha).is_one());
        assert!(map.rel_norm(&alpha).is_one());
        // Identity extension: trace is the identity map.
        let idmap = SubfieldMap::new(&f4, &f4).unwrap();
        for x in f4.elements() {
            assert_eq!(idmap.rel_trace(&x), x);
        }
    }

    #[test]
    fn trace_linear_norm_multiplicative() {
        for (p, k, d) in [(2u64, 4usize, 2usize), (2, 4, 1), (3, 2, 1), (5, 2, 1), (2, 6, 3), (2, 6, 2)] {
            let sub = make_field(p, d).unwrap();
            let sup = make_field(p, k).unwrap();
            let map = SubfieldMap::new(&sub, &sup).unwrap();
            let q = sup.cardinality() as usize;
            for i in 0..q {
                for j in 0..q {
                    let x = sup.element(i);
                    let y = sup.element(j);
                    assert_eq!(
                        map.rel_trace(&x.add(&y)),
                        map.rel_trace(&x).add(&map.rel_trace(&y))
                    );
                    assert_eq!(
                        map.rel_norm(&x.mul(&y)),
                        map.rel_norm(&x).mul(&map.rel_norm(&y))
                    );
                }
            }
        }
    }

    #[test]
    fn trace_surjective() {
        for (p, k, d) in [(2u64, 2usize, 1usize), (2, 4, 2), (3, 2, 1), (5, 2, 1), (2, 6, 3)] {
            let sub = make_field(p, d).unwrap();
            let sup = make_field(p, k).unwrap();
            let map = SubfieldMap::new(&sub, &sup).unwrap();
            let mut hit = vec![false; sub.cardinality() as usize];
            for x in sup.elements() {
                hit[map.rel_trace(&x).index()] = true;
            }
            assert!(hit.iter().all(|&h| h), "trace must be onto the base field");
        }
    }

    #[test]
    fn tower_transitivity() {
        // Every tower F ⊆ E ⊆ K with p^k ≤ 64.
        let towers = [(2u64, 1usize, 2usize, 4usize), (2, 1, 2, 6), (2, 1, 3, 6), (2, 2, 2, 4), (2, 1, 2, 4)];
        for (p, a, b, c) in towers {
            if b % a != 0 || c % b != 0 {
                continue;
            }
            let fa = make_field(p, a).unwrap();
            let fb = make_field(p, b).unwrap();
            let fc = make_field(p, c).unwrap();
            let ab = SubfieldMap::new(&fa, &fb).unwrap();
            let bc = SubfieldMap::new(&fb, &fc).unwrap();
            let ac = SubfieldMap::new(&fa, &fc).unwrap();
            for x in fc.elements() {
                assert_eq!(ab.rel_trace(&bc.rel_trace(&x)), ac.rel_trace(&x));
                assert_eq!(ab.rel_norm(&bc.rel_norm(&x)), ac.rel_norm(&x));
            }
        }
    }

    #[test]
    fn embed_retract_round_trip() {
        let sub = make_field(3, 1).unwrap();
        let sup = make_field(3, 2).unwrap();
        let map = SubfieldMap::new(&sub, &sup).unwrap();
        for x in sub.elements() {
            assert_eq!(map.retract(&map.embed(&x)).unwrap(), x);
        }
        // The generator of F_9 is not in F_3.
        assert!(map.retract(&sup.gen()).is_err());
    }

    #[test]
    fn primitive_element_orders() {
        for (p, k) in [(2u64, 1usize), (2, 2), (3, 1), (3, 2), (5, 1), (7, 1)] {
            let f = make_field(p, k).unwrap();
            let g = f.primitive_element();
            let q = f.cardinality();
            let mut seen = std::collections::HashSet::new();
            let mut x = f.one();
            for _ in 0..q - 1 {
                seen.insert(x.index());
                x = x.mul(&g);
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }
}
