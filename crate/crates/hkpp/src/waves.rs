//! Traveling-wave profiles U″ + cU′ + f(U) = 0 with U(−∞)=1, U(+∞)=0.
//!
//! Profiles exist (monotone) exactly for c ≥ c₀ = 2√f′(0). The connecting
//! orbit is computed by shooting forward along the one-dimensional unstable
//! manifold of the saddle (U,U′) = (1,0): the seed U = 1−tol,
//! U′ = −μ₊(1−U) with μ₊ the positive root of μ² + cμ + f′(1) = 0 is
//! exponentially accurate, and the forward flow contracts onto the orbit
//! (the origin is a stable node). Shooting backward out of the U=0 tail is
//! ill-posed here — the tail is a stable node in forward s, so the backward
//! flow leaves the heteroclinic and blows up past U=1 — which is why the
//! integration direction matters.
//!
//! At c = c₀ the tail decays like (s+κ)e^{−λ₀s}; for c > c₀ like e^{−λ₋s}
//! with λ₋ the smaller root of λ² − cλ + f′(0) = 0.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fit;
use crate::num;
use crate::reaction::ReactionFn;

/// Fitted tail asymptotics of a profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailForm {
    /// A·(s+κ)·e^{−λs}: the minimal-speed (double root) tail.
    CriticalLinear,
    /// A·e^{−λs}: the supercritical slow-mode tail.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFit {
    pub form: TailForm,
    pub lambda: f64,
    pub kappa: f64,
    pub amplitude: f64,
}

impl TailFit {
    pub fn eval(&self, s: f64) -> f64 {
        match self.form {
            TailForm::CriticalLinear => {
                self.amplitude * (s + self.kappa) * num::exp(-self.lambda * s)
            }
            TailForm::Exponential => self.amplitude * num::exp(-self.lambda * s),
        }
    }

    /// Re-anchor after translating the grid by `shift` (s → s − shift).
    fn translated(&self, shift: f64) -> TailFit {
        let amp = self.amplitude * num::exp(-self.lambda * shift);
        TailFit {
            form: self.form,
            lambda: self.lambda,
            kappa: match self.form {
                TailForm::CriticalLinear => self.kappa + shift,
                TailForm::Exponential => 0.0,
            },
            amplitude: amp,
        }
    }
}

/// A sampled traveling-wave profile on a uniform grid.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    pub c: f64,
    pub s_min: f64,
    pub drho: f64,
    pub values: Vec<f64>,
    pub normalized: bool,
    /// Whether c sits at the minimal speed (double-root tail).
    pub minimal_speed: bool,
    pub tail: TailFit,
}

impl WaveProfile {
    pub fn s_max(&self) -> f64 {
        self.s_min + self.drho * (self.values.len() - 1) as f64
    }

    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let (s0, h) = (self.s_min, self.drho);
        (0..self.values.len()).map(move |j| s0 + h * j as f64)
    }

    pub fn tail_lambda(&self) -> f64 {
        self.tail.lambda
    }

    pub fn tail_kappa(&self) -> f64 {
        self.tail.kappa
    }
}

/// Pick a span for [`solve_profile`] long enough for ~10 e-foldings of the
/// slow tail mode past the front region.
pub fn default_span(f: &ReactionFn, c: f64) -> (f64, f64) {
    let fp0 = f.fprime0().max(1e-12);
    let lambda0 = num::sqrt(fp0);
    let disc = c * c - 4.0 * fp0;
    let lam_slow = if disc > 0.0 { (c - num::sqrt(disc)) / 2.0 } else { lambda0 };
    let fp1 = num::abs(f.deriv(1.0)).max(1e-12);
    let mu_plus = (-c + num::sqrt(c * c + 4.0 * fp1)) / 2.0;
    // shoulder (saddle escape) + front + 12 e-foldings of tail decay
    (0.0, 25.0 / mu_plus + 5.0 / lambda0 + 12.0 / lam_slow)
}

/// Cash–Karp 4(5) embedded step for the 2D system (U, V).
fn ck_step(
    f: &ReactionFn,
    c: f64,
    y: [f64; 2],
    h: f64,
) -> ([f64; 2], f64) {
    let rhs = |y: [f64; 2]| [y[1], -c * y[1] - f.eval(y[0])];
    let k1 = rhs(y);
    let add = |y: [f64; 2], ks: &[([f64; 2], f64)]| {
        let mut out = y;
        for (k, a) in ks {
            out[0] += h * a * k[0];
            out[1] += h * a * k[1];
        }
        out
    };
    let k2 = rhs(add(y, &[(k1, 0.2)]));
    let k3 = rhs(add(y, &[(k1, 3.0 / 40.0), (k2, 9.0 / 40.0)]));
    let k4 = rhs(add(y, &[(k1, 0.3), (k2, -0.9), (k3, 1.2)]));
    let k5 = rhs(add(y, &[(k1, -11.0 / 54.0), (k2, 2.5), (k3, -70.0 / 27.0), (k4, 35.0 / 27.0)]));
    let k6 = rhs(add(
        y,
        &[
            (k1, 1631.0 / 55296.0),
            (k2, 175.0 / 512.0),
            (k3, 575.0 / 13824.0),
            (k4, 44275.0 / 110592.0),
            (k5, 253.0 / 4096.0),
        ],
    ));
    let y5 = add(
        y,
        &[
            (k1, 37.0 / 378.0),
            (k3, 250.0 / 621.0),
            (k4, 125.0 / 594.0),
            (k6, 512.0 / 1771.0),
        ],
    );
    let y4 = add(
        y,
        &[
            (k1, 2825.0 / 27648.0),
            (k3, 18575.0 / 48384.0),
            (k4, 13525.0 / 55296.0),
            (k5, 277.0 / 14336.0),
            (k6, 0.25),
        ],
    );
    let err = num::abs(y5[0] - y4[0]).max(num::abs(y5[1] - y4[1]));
    (y5, err)
}

/// Integrate from one output node to the next with adaptive substeps.
fn advance(
    f: &ReactionFn,
    c: f64,
    mut y: [f64; 2],
    mut s: f64,
    s_target: f64,
    rtol: f64,
) -> Result<[f64; 2]> {
    let mut h = s_target - s;
    let mut guard = 0usize;
    while s < s_target {
        h = h.min(s_target - s);
        let (ynew, err) = ck_step(f, c, y, h);
        let scale = rtol * (num::abs(y[0]) + num::abs(h * y[1]) + 1e-30);
        if err <= scale || h <= 1e-12 * (1.0 + num::abs(s)) {
            s += h;
            y = ynew;
            // mild growth for the next substep
            h *= 1.5;
        } else {
            h *= 0.5;
        }
        guard += 1;
        if guard > 1_000_000 {
            return Err(Error::NumericalFailure { detail: "profile integrator stalled" });
        }
    }
    Ok(y)
}

/// Compute a traveling-wave profile at speed c by forward shooting from the
/// unstable manifold of U = 1.
///
/// `span` is the grid extent in the seed-anchored coordinate (the seed
/// U = 1 − tol sits at span.0). Fails with `NoMonotoneFront` for
/// c < c₀ − tol (complex tail eigenvalues: the profile would oscillate).
pub fn solve_profile(
    f: &ReactionFn,
    c: f64,
    span: (f64, f64),
    tol: f64,
) -> Result<WaveProfile> {
    if !(tol > 0.0 && tol < 0.1) {
        return Err(Error::InvalidParameter { what: "tol must be in (0, 0.1)" });
    }
    let fp0 = f.fprime0();
    if !(fp0 > 0.0) {
        return Err(Error::InvalidParameter { what: "f'(0) must be positive" });
    }
    let lambda0 = num::sqrt(fp0);
    let c0 = 2.0 * lambda0;
    let disc = c * c - 4.0 * fp0;
    if disc < -tol * tol {
        return Err(Error::NoMonotoneFront { c, c0 });
    }
    let minimal_speed = disc <= 0.0 || num::sqrt(disc) <= tol;
    let lam_slow = if minimal_speed { lambda0 } else { (c - num::sqrt(disc)) / 2.0 };
    let (s_lo, s_hi) = span;
    if !(s_hi > s_lo) || lam_slow * (s_hi - s_lo) < 20.0 {
        return Err(Error::InvalidParameter { what: "span shorter than 20 tail e-foldings" });
    }

    let fp1 = f.deriv(1.0);
    if !(fp1 < 0.0) {
        return Err(Error::InvalidParameter { what: "f'(1) must be negative" });
    }
    let mu_plus = (-c + num::sqrt(c * c - 4.0 * fp1)) / 2.0;

    let drho = 1e-3 / lambda0.max(1.0);
    let n = ((s_hi - s_lo) / drho) as usize + 1;
    let mut values = Vec::with_capacity(n);
    let mut y = [1.0 - tol, -mu_plus * tol];
    values.push(y[0]);
    let rtol = tol / 10.0;
    let mut s = s_lo;
    for j in 1..n {
        let s_next = s_lo + drho * j as f64;
        y = advance(f, c, y, s, s_next, rtol)?;
        s = s_next;
        if y[0] > 1.0 + tol {
            return Err(Error::SeedFailure);
        }
        if y[0] <= 1e-16 || y[0] < 0.0 {
            break;
        }
        values.push(y[0]);
    }
    // strict monotonicity
    if values.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::NumericalFailure { detail: "profile not strictly decreasing" });
    }
    if *values.last().unwrap() > 1e-6 {
        return Err(Error::InvalidParameter { what: "span too short: tail unresolved" });
    }

    let mut profile = WaveProfile {
        c,
        s_min: s_lo,
        drho,
        values,
        normalized: false,
        minimal_speed,
        tail: TailFit {
            form: if minimal_speed { TailForm::CriticalLinear } else { TailForm::Exponential },
            lambda: lam_slow,
            kappa: 0.0,
            amplitude: 1.0,
        },
    };
    let window = default_tail_window(&profile);
    let (lambda, kappa, amplitude) = fit_tail_model(&profile, window, profile.minimal_speed)?;
    profile.tail.lambda = lambda;
    profile.tail.kappa = kappa;
    profile.tail.amplitude = amplitude;
    Ok(profile)
}

/// Default tail-fit window: the s-range where U ∈ [1e-10, 1e-4]
/// (shrunk to the resolved range if the profile ends earlier).
pub fn default_tail_window(p: &WaveProfile) -> (f64, f64) {
    let mut lo = p.s_min;
    let mut hi = p.s_max();
    for (j, &u) in p.values.iter().enumerate() {
        let s = p.s_min + p.drho * j as f64;
        if u >= 1e-4 {
            lo = s;
        }
        if u >= 1e-10f64.max(*p.values.last().unwrap() * 10.0) {
            hi = s;
        }
    }
    (lo, hi)
}

fn window_indices(p: &WaveProfile, window: (f64, f64)) -> Vec<usize> {
    (0..p.values.len())
        .filter(|&j| {
            let s = p.s_min + p.drho * j as f64;
            s >= window.0 && s <= window.1 && p.values[j] > 1e-12
        })
        .collect()
}

fn fit_tail_model(
    p: &WaveProfile,
    window: (f64, f64),
    critical: bool,
) -> Result<(f64, f64, f64)> {
    let idx = window_indices(p, window);
    if idx.len() < 10 {
        return Err(Error::IllConditionedFit);
    }
    let ss: Vec<f64> = idx.iter().map(|&j| p.s_min + p.drho * j as f64).collect();
    let lnu: Vec<f64> = idx.iter().map(|&j| num::ln(p.values[j])).collect();
    let ones: Vec<f64> = core::iter::repeat(1.0).take(ss.len()).collect();

    // exponential fit first: ln U ~ ln A - lambda s
    let coef = fit::least_squares(&[&ones, &ss], &lnu)?;
    let (mut ln_a, mut lambda) = (coef[0], -coef[1]);
    if lambda * (window.1 - window.0) < 5.0 {
        return Err(Error::IllConditionedFit);
    }
    if !critical {
        return Ok((lambda, 0.0, num::exp(ln_a)));
    }

    // Gauss-Newton on ln U = ln A + ln(s + kappa) - lambda s
    let s_first = ss[0];
    let mut kappa = 0.0f64.max(-s_first + 1.0);
    // absorb the initial ln(s+kappa) level into ln A
    ln_a -= num::ln(0.5 * (ss[0] + ss[ss.len() - 1]) + kappa);
    for _ in 0..100 {
        let mut r = Vec::with_capacity(ss.len());
        let mut j_lna = Vec::with_capacity(ss.len());
        let mut j_kap = Vec::with_capacity(ss.len());
        let mut j_lam = Vec::with_capacity(ss.len());
        for (i, &s) in ss.iter().enumerate() {
            let model = ln_a + num::ln(s + kappa) - lambda * s;
            r.push(lnu[i] - model);
            j_lna.push(1.0);
            j_kap.push(1.0 / (s + kappa));
            j_lam.push(-s);
        }
        let step = fit::least_squares(&[&j_lna, &j_kap, &j_lam], &r)?;
        let mut scale = 1.0;
        // keep s + kappa positive
        while kappa + scale * step[1] <= -s_first + 1e-6 && scale > 1e-6 {
            scale *= 0.5;
        }
        ln_a += scale * step[0];
        kappa += scale * step[1];
        lambda += scale * step[2];
        if num::abs(step[0]) + num::abs(step[1]) + num::abs(step[2]) < 1e-13 {
            break;
        }
    }
    Ok((lambda, kappa, num::exp(ln_a)))
}

/// Fit the tail exponents over an explicit window. For a minimal-speed
/// profile returns (λ̂₀, κ̂) of A(s+κ)e^{−λ₀s}; for supercritical profiles
/// the exponential rate (λ̂₋, 0).
pub fn tail_fit(p: &WaveProfile, fit_window: (f64, f64)) -> Result<(f64, f64)> {
    let (lambda, kappa, _) = fit_tail_model(p, fit_window, p.minimal_speed)?;
    Ok((lambda, kappa))
}

/// Translate the grid so the interpolated half-level sits at s = 0.
pub fn normalize_half(p: &WaveProfile) -> Result<WaveProfile> {
    let n = p.values.len();
    let j_cross = (0..n - 1)
        .find(|&j| p.values[j] >= 0.5 && p.values[j + 1] < 0.5)
        .ok_or(Error::NotNormalizable)?;
    // Newton on the monotone cubic, seeded by the linear crossing
    let s_lo = p.s_min + p.drho * j_cross as f64;
    let mut s_half = s_lo
        + p.drho * (p.values[j_cross] - 0.5) / (p.values[j_cross] - p.values[j_cross + 1]);
    for _ in 0..100 {
        let v = evaluate(p, s_half);
        let dv = (evaluate(p, s_half + 1e-7) - evaluate(p, s_half - 1e-7)) / 2e-7;
        if num::abs(dv) < 1e-30 {
            break;
        }
        let step = (v - 0.5) / dv;
        s_half -= step;
        if num::abs(step) < 1e-13 {
            break;
        }
    }
    let mut out = p.clone();
    out.s_min -= s_half;
    out.tail = p.tail.translated(s_half);
    out.normalized = true;
    Ok(out)
}

/// Evaluate a profile anywhere: 1 left of the grid, monotone cubic inside,
/// the fitted tail beyond the right end (clipped so monotonicity survives).
pub fn evaluate(p: &WaveProfile, s: f64) -> f64 {
    let s_max = p.s_max();
    if s <= p.s_min {
        return 1.0;
    }
    if s >= s_max {
        let last = *p.values.last().unwrap();
        return p.tail.eval(s).clamp(0.0, last);
    }
    let x = (s - p.s_min) / p.drho;
    let j = (x as usize).min(p.values.len() - 2);
    let t = x - j as f64;
    // Fritsch-Carlson slopes on the uniform grid (limited to keep the
    // interpolant monotone)
    let d = |j: usize| p.values[j + 1] - p.values[j];
    let slope = |j: usize| -> f64 {
        if j == 0 {
            d(0)
        } else if j == p.values.len() - 1 {
            d(j - 1)
        } else {
            let (d0, d1) = (d(j - 1), d(j));
            if d0 * d1 <= 0.0 {
                0.0
            } else {
                2.0 * d0 * d1 / (d0 + d1)
            }
        }
    };
    let (y0, y1) = (p.values[j], p.values[j + 1]);
    let (m0, m1) = (slope(j), slope(j + 1));
    let t2 = t * t;
    let t3 = t2 * t;
    let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    let h10 = t3 - 2.0 * t2 + t;
    let h01 = -2.0 * t3 + 3.0 * t2;
    let h11 = t3 - t2;
    (h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn logistic(a: f64) -> ReactionFn {
        ReactionFn::logistic(a).unwrap()
    }

    #[test]
    fn minimal_speed_profile_monotone() {
        let f = logistic(1.0);
        let p = solve_profile(&f, 2.0, default_span(&f, 2.0), 1e-9).unwrap();
        assert!(p.values.windows(2).all(|w| w[1] < w[0]));
        assert!(p.values[0] >= 1.0 - 1e-8);
        assert!(*p.values.last().unwrap() <= 1e-9);
        assert!(p.minimal_speed);
    }

    #[test]
    fn below_minimal_speed_rejected() {
        let f = logistic(1.0);
        let err = solve_profile(&f, 1.5, default_span(&f, 1.5), 1e-9).unwrap_err();
        assert!(matches!(err, Error::NoMonotoneFront { .. }));
    }

    #[test]
    fn supercritical_tail_exponent() {
        let f = logistic(1.0);
        let p = solve_profile(&f, 5.0, default_span(&f, 5.0), 1e-9).unwrap();
        // lambda_minus = (5 - sqrt(21))/2
        let expect = (5.0 - 21.0f64.sqrt()) / 2.0;
        assert_abs_diff_eq!(expect, 0.208_712_152_522_08, epsilon = 1e-12);
        assert_abs_diff_eq!(p.tail.lambda, expect, epsilon = 2e-3);
        assert!(!p.minimal_speed);
    }

    #[test]
    fn normalization_puts_half_at_zero() {
        let f = logistic(1.0);
        let p = solve_profile(&f, 2.0, default_span(&f, 2.0), 1e-9).unwrap();
        let q = normalize_half(&p).unwrap();
        assert!(q.normalized);
        assert!((evaluate(&q, 0.0) - 0.5).abs() <= 1e-10);
        // idempotent up to re-anchoring
        let q2 = normalize_half(&q).unwrap();
        assert_abs_diff_eq!(q2.s_min, q.s_min, epsilon = 1e-9);
    }

    #[test]
    fn not_normalizable_without_crossing() {
        let p = WaveProfile {
            c: 2.0,
            s_min: 0.0,
            drho: 0.1,
            values: (0..64).map(|j| 1.0 - 1e-3 * j as f64).collect(),
            normalized: false,
            minimal_speed: true,
            tail: TailFit {
                form: TailForm::CriticalLinear,
                lambda: 1.0,
                kappa: 0.0,
                amplitude: 1.0,
            },
        };
        assert!(matches!(normalize_half(&p), Err(Error::NotNormalizable)));
    }

    #[test]
    fn tail_fit_recovers_synthetic_model() {
        // exact data (s+3)e^{-s} on s in [5, 25]
        let drho = 1e-3;
        let n = 20_001;
        let values: Vec<f64> =
            (0..n).map(|j| (5.0 + drho * j as f64 + 3.0) * (-(5.0 + drho * j as f64)).exp()).collect();
        let p = WaveProfile {
            c: 2.0,
            s_min: 5.0,
            drho,
            values,
            normalized: true,
            minimal_speed: true,
            tail: TailFit {
                form: TailForm::CriticalLinear,
                lambda: 1.0,
                kappa: 3.0,
                amplitude: 1.0,
            },
        };
        let (lam, kap) = tail_fit(&p, (6.0, 24.0)).unwrap();
        assert_abs_diff_eq!(lam, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(kap, 3.0, epsilon = 1e-6);
    }

    #[test]
    fn tail_fit_lambda0_within_band() {
        for (a, lam0) in [(1.0, 1.0), (4.0, 2.0)] {
            let f = logistic(a);
            let c0 = 2.0 * lam0;
            let p = normalize_half(&solve_profile(&f, c0, default_span(&f, c0), 1e-9).unwrap())
                .unwrap();
            let (lam, _) = tail_fit(&p, default_tail_window(&p)).unwrap();
            assert!(
                lam >= 0.98 * lam0 && lam <= 1.02 * lam0,
                "a={a}: lambda0_hat={lam}"
            );
        }
    }

    #[test]
    fn short_window_is_ill_conditioned() {
        let f = logistic(1.0);
        let p = normalize_half(&solve_profile(&f, 2.0, default_span(&f, 2.0), 1e-9).unwrap())
            .unwrap();
        let (lo, hi) = default_tail_window(&p);
        assert!(hi - lo >= 5.0);
        assert!(matches!(tail_fit(&p, (lo, lo + 2.0)), Err(Error::IllConditionedFit)));
    }

    #[test]
    fn ode_residual_small() {
        let f = logistic(1.0);
        let p = solve_profile(&f, 2.0, default_span(&f, 2.0), 1e-7).unwrap();
        let h = p.drho;
        let maxf = 0.25; // max of u(1-u)
        let mut worst = 0.0f64;
        for j in 1..p.values.len() - 1 {
            let (um, u0, up) = (p.values[j - 1], p.values[j], p.values[j + 1]);
            let upp = (up - 2.0 * u0 + um) / (h * h);
            let upr = (up - um) / (2.0 * h);
            worst = worst.max((upp + p.c * upr + f.eval(u0)).abs());
        }
        assert!(worst < 10.0 * 1e-7 * maxf, "residual {worst}");
    }

    #[test]
    fn translation_family() {
        // different seed anchors (tolerances) give the same wave up to shift
        let f = logistic(1.0);
        let tol = 1e-8;
        let p1 = normalize_half(&solve_profile(&f, 2.0, default_span(&f, 2.0), tol).unwrap())
            .unwrap();
        let p2 = normalize_half(&solve_profile(&f, 2.0, (0.0, 90.0), 2e-8).unwrap()).unwrap();
        let mut worst = 0.0f64;
        let mut s = -5.0;
        while s <= 12.0 {
            worst = worst.max((evaluate(&p1, s) - evaluate(&p2, s)).abs());
            s += 0.05;
        }
        assert!(worst < 10.0 * 2e-8 / 1e-2, "sup distance {worst}");
        assert!(worst < 1e-4, "sup distance {worst}");
    }

    #[test]
    fn speed_ordering_of_tail_exponents() {
        let f = logistic(1.0);
        let mut prev = f64::INFINITY;
        for c in [2.0, 2.5, 3.5, 5.0] {
            let p = solve_profile(&f, c, default_span(&f, c), 1e-8).unwrap();
            assert!(p.tail.lambda < prev, "tail exponent not decreasing at c={c}");
            prev = p.tail.lambda;
        }
    }

    #[test]
    fn evaluate_limits() {
        let f = logistic(1.0);
        let p = normalize_half(&solve_profile(&f, 2.0, default_span(&f, 2.0), 1e-9).unwrap())
            .unwrap();
        assert_eq!(evaluate(&p, p.s_min - 100.0), 1.0);
        assert_abs_diff_eq!(evaluate(&p, 0.0), 0.5, epsilon = 1e-10);
        let tail_v = evaluate(&p, p.s_max() + 5.0);
        assert!(tail_v <= *p.values.last().unwrap());
        assert!(tail_v >= 0.0);
    }
}
