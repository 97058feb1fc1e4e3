//! Polynomials in the formal variable `T` (standing for `Nv^{-s}`) with
//! exact cyclotomic coefficients.
//!
//! Local `L`-factor reciprocals `det(1 - Frob·T)` are stored this way;
//! products with signed multiplicities are compared as rational functions
//! by cross-multiplication, so no division is ever needed.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CyclotomicInt, ScaledCyclo};

/// A polynomial `Σ c_i T^i` over `Z[ζ_m]`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerPoly {
    m: u64,
    coeffs: Vec<CyclotomicInt>,
}

impl EulerPoly {
    pub fn zero(m: u64) -> Self {
        EulerPoly { m, coeffs: Vec::new() }
    }

    pub fn one(m: u64) -> Self {
        EulerPoly { m, coeffs: vec![CyclotomicInt::one(m)] }
    }

    pub fn constant(c: CyclotomicInt) -> Self {
        let m = c.conductor();
        let mut p = EulerPoly { m, coeffs: vec![c] };
        p.trim();
        p
    }

    /// `1 - v·T^d`: the Euler factor of an eigenvalue `v` at a place of
    /// residue degree `d`.
    pub fn one_minus_v_td(v: &CyclotomicInt, d: usize) -> Self {
        let m = v.conductor();
        let mut coeffs = vec![CyclotomicInt::zero(m); d + 1];
        coeffs[0] = CyclotomicInt::one(m);
        coeffs[d] = v.neg();
        let mut p = EulerPoly { m, coeffs };
        p.trim();
        p
    }

    pub fn from_coeffs(m: u64, coeffs: Vec<CyclotomicInt>) -> Self {
        let mut p = EulerPoly { m, coeffs };
        p.trim();
        p
    }

    pub fn conductor(&self) -> u64 {
        self.m
    }

    pub fn coeffs(&self) -> &[CyclotomicInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == CyclotomicInt::one(self.m)
    }

    fn trim(&mut self) {
        while matches!(self.coeffs.last(), Some(c) if c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        let len = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(len);
        for i in 0..len {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(|| CyclotomicInt::zero(self.m));
            let b = other.coeffs.get(i).cloned().unwrap_or_else(|| CyclotomicInt::zero(self.m));
            coeffs.push(a.add(&b));
        }
        let mut p = EulerPoly { m: self.m, coeffs };
        p.trim();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        EulerPoly { m: self.m, coeffs: self.coeffs.iter().map(|c| c.neg()).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.m, other.m);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.m);
        }
        let mut coeffs =
            vec![CyclotomicInt::zero(self.m); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        let mut p = EulerPoly { m: self.m, coeffs };
        p.trim();
        p
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut acc = Self::one(self.m);
        let mut base = self.clone();
        let mut e = e;
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

    /// Evaluation at the exact rational point `T = num/den`, returned as
    /// a scaled cyclotomic value.
    pub fn eval_rational(&self, num: &BigInt, den: &BigInt) -> ScaledCyclo {
        let deg = self.coeffs.len().saturating_sub(1);
        let mut acc = CyclotomicInt::zero(self.m);
        for (i, c) in self.coeffs.iter().enumerate() {
            // c_i num^i den^{deg-i}
            let scale = num.pow(i as u32) * den.pow((deg - i) as u32);
            acc = acc.add(&c.scale(&scale));
        }
        ScaledCyclo::new(acc, den.pow(deg as u32))
    }
}

/// A formal product `∏ f_i^{e_i}` with signed integer multiplicities.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactoredPoly {
    pub m: u64,
    pub factors: Vec<(EulerPoly, i64)>,
}

impl FactoredPoly {
    pub fn new(m: u64) -> Self {
        FactoredPoly { m, factors: Vec::new() }
    }

    pub fn push(&mut self, f: EulerPoly, e: i64) {
        assert_eq!(f.conductor(), self.m);
        if e != 0 {
            self.factors.push((f, e));
        }
    }

    /// Expands the positive and negative parts: the product is
    /// `numerator / denominator`.
    pub fn expand(&self) -> (EulerPoly, EulerPoly) {
        let mut num = EulerPoly::one(self.m);
        let mut den = EulerPoly::one(self.m);
        for (f, e) in &self.factors {
            let p = f.pow(e.unsigned_abs());
            if *e > 0 {
                num = num.mul(&p);
            } else {
                den = den.mul(&p);
            }
        }
        (num, den)
    }

    /// Exact equality with another product, as rational functions in `T`.
    pub fn eq_as_rational_function(&self, other: &Self) -> bool {
        let (an, ad) = self.expand();
        let (bn, bd) = other.expand();
        an.mul(&bd) == bn.mul(&ad)
    }
}
