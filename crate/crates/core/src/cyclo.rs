//! Exact arithmetic in cyclotomic integer rings `Z[ζ_m]`.
//!
//! Internally an element is stored on the tensor basis induced by the
//! factorisation `m = ∏ p_i^{e_i}`: writing `ζ_{p^e}` for `ζ_m^{m/p^e}`,
//! the products `∏ ζ_{p_i^{e_i}}^{d_i}` with `0 ≤ d_i < φ(p_i^{e_i})` form
//! a `Z`-basis of `Z[ζ_m]`. Reduction on each axis needs only the single
//! relation `Φ_{p^e}(ζ_{p^e}) = 0`, so canonical forms are cheap and
//! equality is coefficient equality. The public serialisation uses the
//! classical power basis reduced modulo `Φ_m`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One prime-power factor `p^e` of the conductor, with the data needed to
/// reduce exponents on its axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Axis {
    p: u64,
    pe: u64,
    /// `φ(p^e) = p^{e-1}(p-1)`, the basis length of this axis.
    phi: u64,
    /// `p^{e-1}`, the step appearing in `Φ_{p^e}`.
    step: u64,
    /// Mixed-radix stride of this axis in the flat coefficient vector.
    stride: usize,
    /// CRT idempotent factor: the inverse of `m/p^e` mod `p^e`, so that
    /// `ζ_m^j = ∏_a ζ_{p^e}^{j · crt_inv}` on the axes.
    crt_inv: u64,
}

fn factor(m: u64) -> Vec<(u64, u32)> {
    let mut m = m;
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            let mut e = 0;
            while m % d == 0 {
                m /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

fn axes_of(m: u64) -> Vec<Axis> {
    assert!(m >= 1, "conductor must be positive");
    let mut axes = Vec::new();
    let mut stride = 1usize;
    for (p, e) in factor(m) {
        let pe = p.pow(e);
        let step = p.pow(e - 1);
        let phi = step * (p - 1);
        let crt_inv = inverse_mod(m / pe % pe, pe);
        axes.push(Axis { p, pe, phi, step, stride, crt_inv });
        stride *= phi as usize;
    }
    axes
}

fn inverse_mod(a: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let (mut t, mut new_t): (i128, i128) = (0, 1);
    let (mut r, mut new_r): (i128, i128) = (n as i128, (a % n) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1, "CRT cofactor must be a unit");
    t.rem_euclid(n as i128) as u64
}

/// Euler totient of `m`.
pub fn phi(m: u64) -> u64 {
    factor(m)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p - 1))
        .product::<u64>()
        .max(1)
}

/// An exact element of `Z[ζ_m]` in canonical form.
#[derive(Clone, PartialEq, Eq)]
pub struct CyclotomicInt {
    m: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicInt {
    /// The zero element of `Z[ζ_m]`.
    pub fn zero(m: u64) -> Self {
        let len = phi(m) as usize;
        CyclotomicInt { m, coeffs: vec![BigInt::zero(); len] }
    }

    /// The multiplicative identity of `Z[ζ_m]`.
    pub fn one(m: u64) -> Self {
        Self::integer(m, BigInt::one())
    }

    /// The rational integer `n` viewed in `Z[ζ_m]`.
    pub fn integer(m: u64, n: BigInt) -> Self {
        let mut v = Self::zero(m);
        v.coeffs[0] = n;
        v
    }

    /// The root of unity `ζ_m^j`.
    pub fn root(m: u64, j: i64) -> Self {
        let mut v = Self::zero(m);
        let j = j.rem_euclid(m as i64) as u64;
        v.add_root_assign(j, &BigInt::one());
        v
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Adds `c · ζ_m^j` in place.
    pub fn add_root_assign(&mut self, j: u64, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let axes = axes_of(self.m);
        let j = j % self.m;
        // Per-axis exponents of ζ_m^j, via the CRT idempotents.
        let exps: Vec<u64> = axes.iter().map(|a| j % a.pe * a.crt_inv % a.pe).collect();
        add_monomial(&mut self.coeffs, &axes, &exps, c);
    }

    /// Builds `Σ_j counts[j] · ζ_m^j` from a histogram indexed by exponent.
    ///
    /// This is the workhorse for Gauss-sum accumulation: character sweeps
    /// count root-of-unity hits into a length-`m` table and reduce once.
    pub fn from_histogram(m: u64, counts: &[i64]) -> Self {
        assert!(counts.len() as u64 <= m);
        let axes = axes_of(m);
        let mut v = Self::zero(m);
        let mut exps = vec![0u64; axes.len()];
        for (j, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (t, a) in exps.iter_mut().zip(&axes) {
                *t = j as u64 % a.pe * a.crt_inv % a.pe;
            }
            let big = BigInt::from(c);
            add_monomial_normalised(&mut v.coeffs, &axes, &mut exps, 0, &big);
        }
        v
    }

    pub fn neg(&self) -> Self {
        CyclotomicInt { m: self.m, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "ambient conductor mismatch");
        CyclotomicInt {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "ambient conductor mismatch");
        CyclotomicInt {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CyclotomicInt { m: self.m, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m, "ambient conductor mismatch");
        let axes = axes_of(self.m);
        let mut out = Self::zero(self.m);
        let digit_table: Vec<Vec<u64>> =
            (0..self.coeffs.len()).map(|i| digits(i, &axes)).collect();
        let mut exps = vec![0u64; axes.len()];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let di = &digit_table[i];
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let c = a * b;
                let dj = &digit_table[j];
                for (t, (x, y)) in exps.iter_mut().zip(di.iter().zip(dj)) {
                    *t = x + y;
                }
                add_monomial(&mut out.coeffs, &axes, &exps, &c);
            }
        }
        out
    }

    /// Raises to the `k`-th power by square-and-multiply.
    pub fn pow(&self, k: u64) -> Self {
        if k == 1 {
            return self.clone();
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.m);
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The Galois automorphism `σ_a : ζ ↦ ζ^a` for `gcd(a, m) = 1`.
    pub fn galois_conj(&self, a: i64) -> Result<Self> {
        let m = self.m;
        let ar = a.rem_euclid(m as i64) as u64;
        if gcd(ar.max(1), m) != 1 || (ar == 0 && m > 1) {
            return Err(Error::NotCoprime { a, m });
        }
        let axes = axes_of(m);
        let mut out = Self::zero(m);
        let mut exps = vec![0u64; axes.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (t, (axis, d)) in exps.iter_mut().zip(axes.iter().zip(digits(i, &axes))) {
                *t = (d % axis.pe) * (ar % axis.pe) % axis.pe;
            }
            add_monomial(&mut out.coeffs, &axes, &exps, c);
        }
        Ok(out)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        if self.m == 1 {
            return self.clone();
        }
        self.galois_conj(-1).expect("-1 is always coprime to m")
    }

    /// Ring embedding `Z[ζ_{m'}] → Z[ζ_m]` via `ζ_{m'} ↦ ζ_m^{m/m'}`.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if m % self.m != 0 {
            return Err(Error::BadEmbedding { m_sub: self.m, m });
        }
        if m == self.m {
            return Ok(self.clone());
        }
        let small = axes_of(self.m);
        let big = axes_of(m);
        let mut out = Self::zero(m);
        let mut exps = vec![0u64; big.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let di = digits(i, &small);
            for (t, axis) in exps.iter_mut().zip(&big) {
                *t = match small.iter().position(|s| s.p == axis.p) {
                    // ζ_{p^{e'}} = ζ_{p^e}^{p^{e-e'}}; the scaled digit stays
                    // below φ(p^e), so no reduction is triggered here.
                    Some(pos) => di[pos] * (axis.pe / small[pos].pe),
                    None => 0,
                };
            }
            add_monomial(&mut out.coeffs, &big, &exps, c);
        }
        Ok(out)
    }

    /// Numerical evaluation at `ζ_m = exp(2πi/m)`. Display only; never
    /// used in equality decisions.
    pub fn to_complex(&self) -> (f64, f64) {
        let axes = axes_of(self.m);
        let (mut re, mut im) = (0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = c.to_f64().unwrap_or(f64::NAN);
            let mut angle = 0.0f64;
            for (axis, d) in axes.iter().zip(digits(i, &axes)) {
                angle += d as f64 / axis.pe as f64;
            }
            let theta = 2.0 * std::f64::consts::PI * angle;
            re += cf * theta.cos();
            im += cf * theta.sin();
        }
        (re, im)
    }

    /// Coefficients over the power basis `1, ζ, …, ζ^{φ(m)-1}`, fully
    /// reduced modulo `Φ_m`. This is the serialised form.
    pub fn to_power_coeffs(&self) -> Vec<BigInt> {
        let m = self.m as usize;
        let deg = phi(self.m) as usize;
        let axes = axes_of(self.m);
        let mut hist = vec![BigInt::zero(); m];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut j: u64 = 0;
            for (axis, d) in axes.iter().zip(digits(i, &axes)) {
                j = (j + d % axis.pe * ((self.m / axis.pe) % self.m)) % self.m;
            }
            hist[j as usize] += c;
        }
        let cyc = cyclotomic_polynomial(self.m);
        // Synthetic division by the monic Φ_m.
        for d in (deg..m).rev() {
            if hist[d].is_zero() {
                continue;
            }
            let q = std::mem::take(&mut hist[d]);
            for (k, ck) in cyc.iter().enumerate().take(deg) {
                let delta = &q * ck;
                hist[d - deg + k] -= delta;
            }
        }
        hist.truncate(deg);
        hist
    }

    /// Rebuilds an element from power-basis coefficients (length ≤ m).
    pub fn from_power_coeffs(m: u64, coeffs: &[BigInt]) -> Self {
        let mut v = Self::zero(m);
        for (j, c) in coeffs.iter().enumerate() {
            v.add_root_assign(j as u64 % m, c);
        }
        v
    }
}

/// Adds `c · ∏ ζ_{p_a^{e_a}}^{exps[a]}` into `coeffs`, reducing every axis
/// whose exponent lies outside the basis range.
fn add_monomial(coeffs: &mut [BigInt], axes: &[Axis], exps: &[u64], c: &BigInt) {
    let mut e: Vec<u64> = exps.iter().zip(axes).map(|(&t, a)| t % a.pe).collect();
    add_monomial_normalised(coeffs, axes, &mut e, 0, c);
}

// Exponents are < p^e on every axis; axes before `from` are < φ(p^e).
fn add_monomial_normalised(
    coeffs: &mut [BigInt],
    axes: &[Axis],
    exps: &mut [u64],
    from: usize,
    c: &BigInt,
) {
    for pos in from..axes.len() {
        let a = axes[pos];
        let t = exps[pos];
        if t < a.phi {
            continue;
        }
        // ζ^{φ + u} = -Σ_{i < p-1} ζ^{i·p^{e-1} + u}.
        let u = t - a.phi;
        let negc = -c;
        for i in 0..(a.p - 1) {
            exps[pos] = i * a.step + u;
            add_monomial_normalised(coeffs, axes, exps, pos, &negc);
        }
        exps[pos] = t;
        return;
    }
    let idx: usize = exps
        .iter()
        .zip(axes)
        .map(|(&t, a)| t as usize * a.stride)
        .sum();
    coeffs[idx] += c;
}

fn digits(mut idx: usize, axes: &[Axis]) -> Vec<u64> {
    let mut out = Vec::with_capacity(axes.len());
    for a in axes {
        out.push((idx % a.phi as usize) as u64);
        idx /= a.phi as usize;
    }
    out
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Coefficients of the `m`-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    // Φ_m = ∏_{d|m} (x^{m/d} - 1)^{μ(d)}.
    let mut num = vec![BigInt::one()]; // running numerator polynomial
    let mut dens: Vec<u64> = Vec::new();
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        match moebius(d) {
            1 => num = poly_mul_xn_minus_1(&num, m / d),
            -1 => dens.push(m / d),
            _ => {}
        }
    }
    for d in dens {
        num = poly_div_exact_xn_minus_1(&num, d);
    }
    num
}

fn moebius(n: u64) -> i32 {
    let f = factor(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

fn poly_mul_xn_minus_1(a: &[BigInt], n: u64) -> Vec<BigInt> {
    let n = n as usize;
    let mut out = vec![BigInt::zero(); a.len() + n];
    for (i, c) in a.iter().enumerate() {
        out[i + n] += c;
        out[i] -= c;
    }
    out
}

fn poly_div_exact_xn_minus_1(a: &[BigInt], n: u64) -> Vec<BigInt> {
    // Exact division by x^n - 1, highest coefficients first.
    let n = n as usize;
    let mut rem = a.to_vec();
    let out_len = a.len() - n;
    let mut out = vec![BigInt::zero(); out_len];
    for d in (n..a.len()).rev() {
        let q = std::mem::take(&mut rem[d]);
        rem[d - n] += &q;
        out[d - n] = q;
    }
    debug_assert!(rem[..n].iter().all(|c| c.is_zero()), "division not exact");
    out
}

impl fmt::Debug for CyclotomicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeffs = self.to_power_coeffs();
        write!(f, "Cyclo(m={}; [", self.m)?;
        for (i, c) in coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c)?;
        }
        write!(f, "])")
    }
}

/// Serialised form: power-basis coefficients as decimal strings (the
/// values routinely exceed what a JSON number can carry exactly).
#[derive(Serialize, Deserialize)]
struct CycloRepr {
    m: u64,
    coeffs: Vec<String>,
}

impl Serialize for CyclotomicInt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = CycloRepr {
            m: self.m,
            coeffs: self.to_power_coeffs().iter().map(|c| c.to_string()).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CyclotomicInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CycloRepr::deserialize(d)?;
        let coeffs: Vec<BigInt> = repr
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<_, _>>()?;
        Ok(CyclotomicInt::from_power_coeffs(repr.m, &coeffs))
    }
}

/// A cyclotomic integer scaled by an exact positive integer denominator.
///
/// Epsilon factors are `q`-power multiples of Gauss sums, so they live in
/// `(1/q^e) Z[ζ_m]`; equality is decided by cross-multiplication.
#[derive(Clone, Debug)]
pub struct ScaledCyclo {
    pub num: CyclotomicInt,
    pub den: BigInt,
}

#[derive(Serialize, Deserialize)]
struct ScaledRepr {
    num: CyclotomicInt,
    den: String,
}

impl Serialize for ScaledCyclo {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ScaledRepr { num: self.num.clone(), den: self.den.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScaledCyclo {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ScaledRepr::deserialize(d)?;
        let den: BigInt = repr.den.parse().map_err(serde::de::Error::custom)?;
        if !den.is_positive() {
            return Err(serde::de::Error::custom("denominator must be positive"));
        }
        Ok(ScaledCyclo { num: repr.num, den })
    }
}

impl ScaledCyclo {
    pub fn new(num: CyclotomicInt, den: BigInt) -> Self {
        assert!(den.is_positive(), "denominator must be positive");
        ScaledCyclo { num, den }
    }

    pub fn from_int(v: CyclotomicInt) -> Self {
        ScaledCyclo { num: v, den: BigInt::one() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        ScaledCyclo { num: self.num.mul(&other.num), den: &self.den * &other.den }
    }

    pub fn scale(&self, num: &BigInt, den: &BigInt) -> Self {
        assert!(den.is_positive());
        ScaledCyclo { num: self.num.scale(num), den: &self.den * den }
    }

    pub fn eq_exact(&self, other: &Self) -> bool {
        self.num.scale(&other.den) == other.num.scale(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn to_complex(&self) -> (f64, f64) {
        let (re, im) = self.num.to_complex();
        let d = self.den.to_f64().unwrap_or(f64::NAN);
        (re / d, im / d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn root(m: u64, j: i64) -> CyclotomicInt {
        CyclotomicInt::root(m, j)
    }

    #[test]
    fn prime_root_sums_vanish() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let mut s = CyclotomicInt::zero(p);
            for j in 0..p {
                s = s.add(&root(p, j as i64));
            }
            assert!(s.is_zero(), "1 + ζ_{p} + ... should vanish");
        }
    }

    #[test]
    fn prime_power_relations() {
        // Φ_{p^e}(ζ) = 0 as a rewriting rule.
        for m in [4u64, 8, 9, 27, 25, 125] {
            let (p, e) = factor(m)[0];
            let step = p.pow(e - 1);
            let mut s = CyclotomicInt::zero(m);
            for i in 0..p {
                s = s.add(&root(m, (i * step) as i64));
            }
            assert!(s.is_zero());
        }
    }

    #[test]
    fn root_order() {
        for m in [12u64, 600, 3000] {
            assert_eq!(root(m, m as i64), CyclotomicInt::one(m));
            let z = root(m, 1);
            assert_eq!(z.pow(m), CyclotomicInt::one(m));
        }
    }

    #[test]
    fn embed_examples() {
        // ζ_2 into Z[ζ_4] is ζ_4^2 = -1.
        let z2 = root(2, 1);
        let in4 = z2.embed(4).unwrap();
        assert_eq!(in4, CyclotomicInt::integer(4, BigInt::from(-1)));
        // ζ_3 into Z[ζ_12] is ζ_12^4.
        let z3 = root(3, 1);
        assert_eq!(z3.embed(12).unwrap(), root(12, 4));
    }

    #[test]
    fn embed_is_ring_hom() {
        let a = root(6, 1).add(&root(6, 5)).sub(&CyclotomicInt::one(6));
        let b = root(6, 2).add(&CyclotomicInt::integer(6, BigInt::from(3)));
        let m = 24;
        assert_eq!(
            a.mul(&b).embed(m).unwrap(),
            a.embed(m).unwrap().mul(&b.embed(m).unwrap())
        );
    }

    #[test]
    fn conj_examples() {
        // σ_{-1}(ζ_4) = -ζ_4.
        let i = root(4, 1);
        assert_eq!(i.conj(), i.neg());
        // conj fixes integers.
        let n = CyclotomicInt::integer(60, BigInt::from(-17));
        assert_eq!(n.conj(), n);
        // (ζ_3 - ζ_3^2) · conj(ζ_3 - ζ_3^2) = 3.
        let t = root(3, 1).sub(&root(3, 2));
        assert_eq!(t.mul(&t.conj()), CyclotomicInt::integer(3, BigInt::from(3)));
    }

    #[test]
    fn conj_composition_law() {
        let m = 36;
        let x = root(m, 1).add(&root(m, 7).scale(&BigInt::from(2)));
        for a in [1i64, 5, 7, 11, 13, 25, 35] {
            for b in [5i64, 7, 11, 35] {
                let lhs = x.galois_conj(a).unwrap().galois_conj(b).unwrap();
                let rhs = x.galois_conj(a * b % m as i64).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn to_complex_examples() {
        let (re, im) = CyclotomicInt::one(8).to_complex();
        assert!((re - 1.0).abs() < 1e-12 && im.abs() < 1e-12);
        let (re, im) = root(4, 1).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.0).abs() < 1e-12);
        let (re, im) = root(3, 1).sub(&root(3, 2)).to_complex();
        assert!(re.abs() < 1e-12 && (im - 1.7320508075688772).abs() < 1e-9);
    }

    #[test]
    fn power_basis_round_trip() {
        for m in [1u64, 2, 3, 4, 8, 12, 45, 600] {
            let x = root(m, 1)
                .add(&root(m, (m as i64) - 1).scale(&BigInt::from(7)))
                .sub(&CyclotomicInt::integer(m, BigInt::from(3)));
            let coeffs = x.to_power_coeffs();
            assert_eq!(coeffs.len() as u64, phi(m));
            assert_eq!(CyclotomicInt::from_power_coeffs(m, &coeffs), x);
        }
    }

    #[test]
    fn cyclotomic_polynomial_small() {
        let to_i64 = |v: Vec<BigInt>| -> Vec<i64> { v.iter().map(|c| c.to_i64().unwrap()).collect() };
        assert_eq!(to_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(to_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
        // First index where a coefficient other than 0, ±1 appears.
        let c105 = cyclotomic_polynomial(105);
        assert_eq!(c105[7].to_i64().unwrap(), -2);
    }

    #[test]
    fn embed_round_trip_membership() {
        // Solve the linear system over Q to confirm the embedded element
        // lies in (and only in) the image subring.
        let m_sub = 6u64;
        let m = 24u64;
        let x = root(m_sub, 1).scale(&BigInt::from(3)).sub(&CyclotomicInt::one(m_sub));
        let y = x.embed(m).unwrap();
        // Basis of the image: embeddings of the power basis of Z[ζ_6].
        let basis: Vec<Vec<BigRational>> = (0..phi(m_sub))
            .map(|j| {
                root(m_sub, j as i64)
                    .embed(m)
                    .unwrap()
                    .to_power_coeffs()
                    .into_iter()
                    .map(BigRational::from_integer)
                    .collect()
            })
            .collect();
        let target: Vec<BigRational> = y
            .to_power_coeffs()
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        let sol = solve_rational(&basis, &target).expect("must be in the image");
        assert_eq!(sol.len() as u64, phi(m_sub));
        assert_eq!(sol[0], BigRational::from_integer(BigInt::from(-1)));
        assert_eq!(sol[1], BigRational::from_integer(BigInt::from(3)));
        // A generic element of Z[ζ_24] is not in the image of Z[ζ_6].
        let outside: Vec<BigRational> = root(m, 1)
            .to_power_coeffs()
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        assert!(solve_rational(&basis, &outside).is_none());
    }

    // Solves Σ c_j basis[j] = target over Q, if a solution exists.
    fn solve_rational(
        basis: &[Vec<BigRational>],
        target: &[BigRational],
    ) -> Option<Vec<BigRational>> {
        let rows = target.len();
        let cols = basis.len();
        let zero = BigRational::from_integer(BigInt::from(0));
        let mut aug: Vec<Vec<BigRational>> = (0..rows)
            .map(|r| {
                let mut row: Vec<BigRational> =
                    (0..cols).map(|c| basis[c][r].clone()).collect();
                row.push(target[r].clone());
                row
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if let Some(pr) = (r..rows).find(|&i| aug[i][c] != zero) {
                aug.swap(r, pr);
                let inv = aug[r][c].clone();
                for x in aug[r].iter_mut() {
                    *x = &*x / &inv;
                }
                for i in 0..rows {
                    if i != r && aug[i][c] != zero {
                        let f = aug[i][c].clone();
                        for j in 0..=cols {
                            let delta = &f * &aug[r][j];
                            aug[i][j] = &aug[i][j] - delta;
                        }
                    }
                }
                pivot_cols.push(c);
                r += 1;
            }
        }
        // Consistency: no row 0 = nonzero.
        for i in r..rows {
            if aug[i][cols] != zero {
                return None;
            }
        }
        let mut sol = vec![zero.clone(); cols];
        for (rank_row, &c) in pivot_cols.iter().enumerate() {
            sol[c] = aug[rank_row][cols].clone();
        }
        Some(sol)
    }

    #[test]
    fn scaled_equality() {
        let a = ScaledCyclo::new(root(3, 1).scale(&BigInt::from(2)), BigInt::from(6));
        let b = ScaledCyclo::new(root(3, 1), BigInt::from(3));
        assert!(a.eq_exact(&b));
        let c = ScaledCyclo::new(root(3, 2), BigInt::from(3));
        assert!(!a.eq_exact(&c));
    }

    #[test]
    fn serde_round_trip() {
        let x = root(12, 5).scale(&BigInt::from(1234567)).sub(&CyclotomicInt::one(12));
        let json = serde_json::to_string(&x).unwrap();
        let back: CyclotomicInt = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
