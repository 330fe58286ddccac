//! Survival amplitudes and probabilities for a single state coupled to a
//! Lorentzian quasi-continuum, with the continuum taken as the full real
//! line, truncated from below, truncated on both sides, or replaced by a
//! finite ladder of discrete levels.
//!
//! The full-line case decays exponentially forever; every other support
//! does not: truncation produces power-law tails, interference regrowth,
//! and (for two-sided truncation) purely real amplitudes, while a finite
//! ladder brings exact recurrences. The library computes the amplitudes
//! by oscillatory-integral quadrature ([`quadrature`]), closed forms built
//! from complex sine/cosine integrals ([`specfun`], [`continuum`]), and
//! exact eigensolves of the discrete model ([`discrete`]); [`analysis`]
//! quantifies the resulting decay laws and [`cli`]/[`config`] expose the
//! whole pipeline as a command-line tool.
//!
//! Amplitudes use the convention `A(t) = ∫ M(ω)·e^{−iωt} dω` with the
//! density `M` centered at zero and the initial-state frequency entering
//! only as a global phase `e^{−iω_s t}`; probabilities are `|A|²`, with
//! optional normalization to the `t = 0` amplitude when the support does
//! not carry full weight.

// Validation guards use `!(x > 0.0)` on purpose: unlike `x <= 0.0` it also
// rejects NaN, which is exactly what input checks on floats need.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod continuum;
pub mod discrete;
pub mod model;
pub mod quadrature;
pub mod specfun;
