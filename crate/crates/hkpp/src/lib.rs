//! Numerical laboratory for Fisher-KPP reaction-diffusion fronts in hyperbolic
//! space, reduced to one spatial dimension by the three cohomogeneity-one
//! isometry classes (elliptic, hyperbolic, parabolic).
//!
//! The crate covers the full experimental chain:
//!
//! * [`reaction`] — KPP nonlinearities and the spectral constants
//!   λ₀ = √f′(0), c₀ = 2λ₀, c* = c₀ − (d−1), λ₁ = (d−1)²/4.
//! * [`geometry`] — warped-product drift coefficients h₁, their gap to 1,
//!   the curvature factor in a moving frame, and the H³ heat kernel with its
//!   Davies-type envelope.
//! * [`waves`] — traveling-wave profiles U″ + cU′ + f(U) = 0 by shooting,
//!   half-level normalization and tail asymptotics (s+κ)e^{−λ₀s}.
//! * [`evolve`] — IMEX Crank–Nicolson integrator for
//!   u_t = u_ρρ + (d−1)h₁(ρ)u_ρ + f(u) with a moving computational window.
//! * [`selfsim`] — the moving-frame / self-similar change of variables and
//!   the half-line Fokker–Planck dipole dynamics.
//! * [`frontlab`] — front tracking, speed / log-correction regression,
//!   traveling-wave convergence error, extinction fits, and the
//!   propagation-extinction dichotomy classifier.
//!
//! The crate is `no_std`-compatible (with `alloc`); enable the `libm` feature
//! and disable default features for embedded use.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod error;
pub mod evolve;
pub mod fit;
pub mod frontlab;
pub mod geometry;
pub(crate) mod num;
pub mod quad;
pub mod reaction;
pub mod selfsim;
pub mod waves;

pub use error::Error;
