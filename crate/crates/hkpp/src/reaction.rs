//! KPP reaction terms f and the spectral constants they induce.
//!
//! A KPP nonlinearity satisfies f(0) = f(1) = 0, f > 0 on (0,1),
//! f′(0) > 0 > f′(1), and (the "KPP condition") f(u) ≤ f′(0)u. The minimal
//! front speed is c₀ = 2λ₀ with λ₀ = √f′(0); in hyperbolic space the drift
//! from infinity slows the observable spreading speed to c* = c₀ − (d−1),
//! and the spectral gap λ₁ = (d−1)²/4 sets the propagation/extinction
//! threshold.

use alloc::boxed::Box;
use alloc::sync::Arc;

use crate::error::{Error, Result};
use crate::num;

/// Tolerance for the endpoint conditions f(0) = f(1) = 0; anything tighter
/// is swamped by propagated floating error in long integrations.
pub const ENDPOINT_TOL: f64 = 1e-10;

type ScalarFn = dyn Fn(f64) -> f64 + Send + Sync;

/// A KPP nonlinearity with evaluator, derivative and f′(0).
///
/// Evaluation is extended by zero outside [0,1] so that transient scheme
/// overshoot cannot inject spurious reaction. Immutable after construction;
/// cheap to clone and safe to share across concurrent runs.
#[derive(Clone)]
pub struct ReactionFn {
    eval: Arc<ScalarFn>,
    deriv: Arc<ScalarFn>,
    fprime0: f64,
}

impl core::fmt::Debug for ReactionFn {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("ReactionFn")
            .field("fprime0", &self.fprime0)
            .finish_non_exhaustive()
    }
}

impl ReactionFn {
    /// Logistic reaction f(u) = a·u(1−u) with f′(0) = a.
    pub fn logistic(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter { what: "logistic rate a must be positive" });
        }
        Ok(Self {
            eval: Arc::new(move |u: f64| {
                if (0.0..=1.0).contains(&u) {
                    a * u * (1.0 - u)
                } else {
                    0.0
                }
            }),
            deriv: Arc::new(move |u: f64| a * (1.0 - 2.0 * u)),
            fprime0: a,
        })
    }

    /// The zero reaction f ≡ 0, used to exercise the pure
    /// advection–diffusion part of the solver. Not a KPP function
    /// (f′(0) = 0); [`validate_kpp`] rejects it.
    pub fn zero() -> Self {
        Self {
            eval: Arc::new(|_| 0.0),
            deriv: Arc::new(|_| 0.0),
            fprime0: 0.0,
        }
    }

    /// Wrap user-supplied closures. The endpoint conditions are checked up
    /// front (tolerance [`ENDPOINT_TOL`]); the evaluator is extended by zero
    /// outside [0,1].
    pub fn from_fns(
        eval: Box<ScalarFn>,
        deriv: Box<ScalarFn>,
        fprime0: f64,
    ) -> Result<Self> {
        if num::abs(eval(0.0)) > ENDPOINT_TOL {
            return Err(Error::NotKpp { detail: "f(0) != 0" });
        }
        if num::abs(eval(1.0)) > ENDPOINT_TOL {
            return Err(Error::NotKpp { detail: "f(1) != 0" });
        }
        if !(fprime0 > 0.0) {
            return Err(Error::NotKpp { detail: "f'(0) must be positive" });
        }
        let eval: Arc<ScalarFn> = Arc::from(eval);
        let inner = Arc::clone(&eval);
        Ok(Self {
            eval: Arc::new(move |u: f64| {
                if (0.0..=1.0).contains(&u) {
                    inner(u)
                } else {
                    0.0
                }
            }),
            deriv: Arc::from(deriv),
            fprime0,
        })
    }

    #[inline]
    pub fn eval(&self, u: f64) -> f64 {
        (self.eval)(u)
    }

    #[inline]
    pub fn deriv(&self, u: f64) -> f64 {
        (self.deriv)(u)
    }

    #[inline]
    pub fn fprime0(&self) -> f64 {
        self.fprime0
    }
}

/// Sampled certificate of the KPP hypotheses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KppCertificate {
    /// f(u) ≤ f′(0)·u on the sample grid.
    pub satisfies_h2: bool,
    /// f′(u) ≤ f′(0) on the sample grid (strictly stronger than H2).
    pub satisfies_h2star: bool,
    pub sample_count: usize,
    /// Largest signed violation over all sampled checks
    /// (negative means every check passed with margin).
    pub max_violation: f64,
}

/// Sample the KPP hypotheses on a uniform grid of [0,1].
///
/// Checks positivity of f on the interior, f(u) ≤ f′(0)u, f′(u) ≤ f′(0),
/// and the endpoint slopes f′(0) > 0 > f′(1). Checks are pointwise, not
/// symbolic: a user-supplied f admits only evaluation.
pub fn validate_kpp(f: &ReactionFn, n_samples: usize) -> Result<KppCertificate> {
    if n_samples < 100 {
        return Err(Error::InvalidParameter { what: "n_samples must be >= 100" });
    }
    if num::abs(f.eval(0.0)) > ENDPOINT_TOL || num::abs(f.eval(1.0)) > ENDPOINT_TOL {
        return Err(Error::NotKpp { detail: "endpoints f(0), f(1) not zero" });
    }
    if !(f.fprime0() > 0.0) {
        return Err(Error::NotKpp { detail: "f'(0) must be positive" });
    }
    if !(f.deriv(1.0) < 0.0) {
        return Err(Error::NotKpp { detail: "f'(1) must be negative" });
    }

    let fp0 = f.fprime0();
    let tol = 1e-12;
    let mut h2 = true;
    let mut h2star = true;
    let mut max_violation = f64::NEG_INFINITY;
    for j in 0..=n_samples {
        let u = j as f64 / n_samples as f64;
        let fu = f.eval(u);
        if u > 0.0 && u < 1.0 {
            // interior positivity (H_f1)
            let v = -fu;
            max_violation = max_violation.max(v);
            if v > tol {
                return Err(Error::NotKpp { detail: "f not positive on (0,1)" });
            }
        }
        let v2 = fu - fp0 * u;
        max_violation = max_violation.max(v2);
        if v2 > tol {
            h2 = false;
        }
        let v2s = f.deriv(u) - fp0;
        max_violation = max_violation.max(v2s);
        if v2s > tol {
            h2star = false;
        }
    }
    Ok(KppCertificate {
        satisfies_h2: h2,
        satisfies_h2star: h2star,
        sample_count: n_samples + 1,
        max_violation,
    })
}

/// The spectral constants of the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Speeds {
    /// λ₀ = √f′(0).
    pub lambda0: f64,
    /// Minimal Euclidean front speed c₀ = 2λ₀.
    pub c0: f64,
    /// Hyperbolic spreading speed c* = c₀ − (d−1).
    pub c_star: f64,
    /// Spectral gap λ₁ = (d−1)²/4 of the Laplace–Beltrami operator.
    pub lambda1: f64,
}

/// Derive (λ₀, c₀, c*, λ₁) from a reaction and the ambient dimension.
pub fn speeds(f: &ReactionFn, d: u32) -> Result<Speeds> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    if !(f.fprime0() > 0.0) {
        return Err(Error::InvalidParameter { what: "f'(0) must be positive" });
    }
    let lambda0 = num::sqrt(f.fprime0());
    let c0 = 2.0 * lambda0;
    let dm1 = (d - 1) as f64;
    Ok(Speeds {
        lambda0,
        c0,
        c_star: c0 - dm1,
        lambda1: dm1 * dm1 / 4.0,
    })
}
