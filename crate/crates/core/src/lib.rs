//! Exact-arithmetic toolkit for Gauss sums over truncated Witt vectors.
//!
//! The crate is organised around a small tower of exact structures:
//!
//! * [`ff`] — finite fields `F_{p^k}` with Frobenius, relative trace/norm
//!   and full enumeration;
//! * [`witt`] — truncated Witt vector rings `W_n(F_q)` realised as Galois
//!   rings, with Teichmüller lifts, projections and functorial norm/trace;
//! * [`cyclo`] — the cyclotomic integer rings `Z[ζ_m]` in which every
//!   character value and Gauss sum lives, with decidable equality;
//! * [`chars`] — additive and multiplicative characters of `W_n(F_q)`,
//!   their enumeration, conductors and norm inflation;
//! * [`gauss`] — Gauss sums, their closed forms, the Davenport–Hasse
//!   sweep and local epsilon factors;
//! * [`brauer`] — finite-group character machinery: induction,
//!   restriction, Mackey decomposition, Frobenius determinants and Euler
//!   factor inductivity;
//! * [`interp`] — exact symbolic ledgers for the archimedean, period and
//!   constant matching identities.
//!
//! All equalities asserted by the verification suites are exact: no
//! floating-point comparison ever decides a result. Floats appear only in
//! [`cyclo::CyclotomicInt::to_complex`], which is display-only.

pub mod abelian;
pub mod brauer;
pub mod chars;
pub mod cyclo;
pub mod error;
pub mod ff;
pub mod gauss;
pub mod interp;
pub mod poly;
pub mod witt;

pub use error::Error;

/// Convenience result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
