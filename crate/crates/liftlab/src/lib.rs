//! Exact and statistical verification of sign equidistribution for the
//! coefficient families `{a(t p^{2 nu})}` of half-integral-weight eigenforms,
//! synthesized through the Shimura lift.
//!
//! The library splits into an exact layer and a statistical layer:
//!
//! * [`qseries`] — truncated q-expansions over an arbitrary coefficient ring
//!   (BigInt in production), enough to expand eta quotients to 10^5-10^6 terms;
//! * [`arith`] — sieving, Moebius, divisors, the Kronecker symbol;
//! * [`characters`] — Dirichlet characters mod 4N with exact root-of-unity
//!   values, fibers over the image, and rational zero-fiber detection;
//! * [`modforms`] — the eta-quotient eigenform catalog, Hecke verification,
//!   normalized eigenvalues;
//! * [`shimura`] — the coefficient relation between the half-integral form
//!   and its lift, its Moebius inversion, and exact per-prime families;
//! * [`satotate`] — angles, the prime-power trigonometric identity, the
//!   Sato-Tate CDF/measure, interval unions, sampling, K-S statistics;
//! * [`densities`] — sign classification, fiber-decomposed density reports,
//!   oscillation evidence, and the synthetic Monte-Carlo driver.
//!
//! Scalar genericity: series take any exact coefficient ring (`ZSeries`
//! pins BigInt), float routines take any [`num_traits::Float`] (`Real`
//! pins f64).

pub mod arith;
pub mod characters;
pub mod densities;
pub mod error;
pub mod modforms;
pub mod qseries;
pub mod satotate;
pub mod shimura;

pub use error::{Error, Result};

/// Default float type for the statistical layer.
pub type Real = f64;

/// Power series over arbitrary-precision integers: the production
/// instantiation of [`qseries::PowerSeries`].
pub type ZSeries = qseries::PowerSeries<num_bigint::BigInt>;
