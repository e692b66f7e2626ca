//! Change of variables to the moving frame R(t) = c*t − k·log t + ρ₀ and
//! on to self-similar coordinates η = ϱ/√t, τ = log t, where the leading
//! edge is governed by the half-line Fokker–Planck equation
//! w_τ = w_ηη + (η/2)w_η + w with Dirichlet conditions. Its slowest mode is
//! the dipole φ₀(η) = η·e^{−η²/4}; the dipole amplitude α fixes the front
//! shift β = ±(1/λ₀)log α.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::evolve::{Field, Grid1D};
use crate::num;
use crate::reaction::{speeds, ReactionFn};

/// Parameters of the moving frame R(t) = c*·t − k·log t + ρ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameParams {
    pub c_star: f64,
    pub k: f64,
    pub rho0: f64,
}

impl FrameParams {
    /// Frame induced by a reaction and dimension: c* = c₀ − (d−1) and the
    /// log coefficient fixed by λ₀k = 3/2, i.e. k = 3/c₀.
    pub fn new(f: &ReactionFn, d: u32, rho0: f64) -> Result<Self> {
        let s = speeds(f, d)?;
        Ok(Self { c_star: s.c_star, k: 3.0 / s.c0, rho0 })
    }

    /// Explicit parameters (no λ₀k = 3/2 constraint), for synthetic frames.
    pub fn raw(c_star: f64, k: f64, rho0: f64) -> Self {
        Self { c_star, k, rho0 }
    }

    /// R(t); defined for t ≥ 1 so the logarithm causes no trouble.
    pub fn r_of_t(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::InvalidTime);
        }
        Ok(self.c_star * t - self.k * num::ln(t) + self.rho0)
    }
}

/// w(η, τ) sampled on a uniform η grid [0, eta_max].
#[derive(Debug, Clone)]
pub struct SelfSimField {
    pub eta_max: f64,
    pub values: Vec<f64>,
    pub tau: f64,
}

impl SelfSimField {
    pub fn deta(&self) -> f64 {
        self.eta_max / (self.values.len() - 1) as f64
    }

    pub fn eta(&self, j: usize) -> f64 {
        self.deta() * j as f64
    }
}

/// Monotonicity-preserving cubic sample of a field at an arbitrary point
/// (clamped to the grid range).
fn pchip_sample(values: &[f64], x: f64) -> f64 {
    let n = values.len();
    if x <= 0.0 {
        return values[0];
    }
    if x >= (n - 1) as f64 {
        return values[n - 1];
    }
    let j = x as usize;
    let t = x - j as f64;
    let d = |j: usize| values[j + 1] - values[j];
    let slope = |j: usize| -> f64 {
        if j == 0 {
            d(0)
        } else if j == n - 1 {
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
    let (y0, y1, m0, m1) = (values[j], values[j + 1], slope(j), slope(j + 1));
    let (t2, t3) = (t * t, t * t * t);
    (2.0 * t3 - 3.0 * t2 + 1.0) * y0
        + (t3 - 2.0 * t2 + t) * m0
        + (-2.0 * t3 + 3.0 * t2) * y1
        + (t3 - t2) * m1
}

/// Resample a field onto the frame coordinate ϱ = ρ − R(t), on the grid
/// ϱ ∈ [0, ρ_max − R(t)] with the original spacing.
pub fn to_moving_frame(field_at_t: &Field, frame: &FrameParams) -> Result<Field> {
    let r = frame.r_of_t(field_at_t.time)?;
    let g = &field_at_t.grid;
    let h = g.drho();
    if r < g.rho_min || r > g.rho_max {
        return Err(Error::CoverageError);
    }
    let n_out = ((g.rho_max - r) / h) as usize;
    if n_out < 16 {
        return Err(Error::CoverageError);
    }
    let mut values = Vec::with_capacity(n_out);
    for j in 0..n_out {
        let rho = r + h * j as f64;
        values.push(pchip_sample(&field_at_t.values, (rho - g.rho_min) / h).clamp(0.0, 1.0));
    }
    Ok(Field {
        grid: Grid1D::new(0.0, h * (n_out - 1) as f64, n_out)?,
        values,
        time: field_at_t.time,
    })
}

/// Zoom a moving-frame field into self-similar coordinates:
/// w(η, τ) = e^{−τ/2}·e^{λ₀ϱ}·û(ϱ, t) with η = ϱ/√t, τ = log t.
/// The exponential amplification is done in log space with an overflow
/// guard.
pub fn to_selfsim(field_hat: &Field, lambda0: f64) -> Result<SelfSimField> {
    let t = field_hat.time;
    if !(t >= 1.0) {
        return Err(Error::InvalidTime);
    }
    if !(lambda0 > 0.0) {
        return Err(Error::InvalidParameter { what: "lambda0 must be positive" });
    }
    let g = &field_hat.grid;
    if num::abs(g.rho_min) > 1e-9 {
        return Err(Error::CoverageError);
    }
    let tau = num::ln(t);
    let sqrt_t = num::sqrt(t);
    let mut values = Vec::with_capacity(g.n);
    for j in 0..g.n {
        let varrho = g.rho(j);
        let u = field_hat.values[j];
        if u <= 0.0 {
            values.push(0.0);
        } else {
            let lnw = -tau / 2.0 + lambda0 * varrho + num::ln(u);
            if lnw > 700.0 {
                return Err(Error::Overflow);
            }
            values.push(num::exp(lnw));
        }
    }
    Ok(SelfSimField { eta_max: g.rho_max / sqrt_t, values, tau })
}

/// The dipole profile φ₀(η) = η e^{−η²/4}, the stationary slowest mode.
pub fn phi0(eta: f64) -> f64 {
    eta * num::exp(-eta * eta / 4.0)
}

/// φ₀ sampled on [0, eta_max] with n points, at self-similar time tau.
pub fn phi0_field(eta_max: f64, n: usize, tau: f64) -> SelfSimField {
    let h = eta_max / (n - 1) as f64;
    SelfSimField {
        eta_max,
        values: (0..n).map(|j| phi0(h * j as f64)).collect(),
        tau,
    }
}

/// Apply the discrete spatial operator A w = w_ηη + (η/2)w_η + w with
/// fourth-order centered stencils in the interior (second-order in the rows
/// adjacent to the boundary) and Dirichlet rows at both ends.
pub(crate) fn apply_fp_operator(values: &[f64], deta: f64) -> Vec<f64> {
    let n = values.len();
    let h = deta;
    let mut out = vec![0.0; n];
    for j in 1..n - 1 {
        let eta = h * j as f64;
        let w = values;
        if j >= 2 && j <= n - 3 {
            let wpp = (-w[j - 2] + 16.0 * w[j - 1] - 30.0 * w[j] + 16.0 * w[j + 1] - w[j + 2])
                / (12.0 * h * h);
            let wp = (w[j - 2] - 8.0 * w[j - 1] + 8.0 * w[j + 1] - w[j + 2]) / (12.0 * h);
            out[j] = wpp + 0.5 * eta * wp + w[j];
        } else {
            let wpp = (w[j - 1] - 2.0 * w[j] + w[j + 1]) / (h * h);
            let wp = (w[j + 1] - w[j - 1]) / (2.0 * h);
            out[j] = wpp + 0.5 * eta * wp + w[j];
        }
    }
    out
}

/// Pentadiagonal solve (no pivoting; the Crank–Nicolson matrices here are
/// strongly diagonally dominant for the step sizes in use).
fn solve_penta(
    a: &mut [f64],
    b: &mut [f64],
    d: &mut [f64],
    c: &mut [f64],
    e: &mut [f64],
    rhs: &mut [f64],
) -> Result<Vec<f64>> {
    let n = rhs.len();
    for i in 0..n - 1 {
        if num::abs(d[i]) < 1e-300 {
            return Err(Error::NumericalFailure { detail: "pentadiagonal pivot underflow" });
        }
        let m1 = b[i + 1] / d[i];
        b[i + 1] = 0.0;
        d[i + 1] -= m1 * c[i];
        c[i + 1] -= m1 * e[i];
        rhs[i + 1] -= m1 * rhs[i];
        if i + 2 < n {
            let m2 = a[i + 2] / d[i];
            a[i + 2] = 0.0;
            b[i + 2] -= m2 * c[i];
            d[i + 2] -= m2 * e[i];
            rhs[i + 2] -= m2 * rhs[i];
        }
    }
    let mut x = vec![0.0; n];
    x[n - 1] = rhs[n - 1] / d[n - 1];
    if n >= 2 {
        x[n - 2] = (rhs[n - 2] - c[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (rhs[i] - c[i] * x[i + 1] - e[i] * x[i + 2]) / d[i];
    }
    Ok(x)
}

/// One Crank–Nicolson step of w_τ = w_ηη + (η/2)w_η + w with Dirichlet 0 at
/// η = 0 and η = eta_max.
pub fn fp_step(w: &SelfSimField, dtau: f64) -> Result<SelfSimField> {
    if !(dtau > 0.0) {
        return Err(Error::InvalidParameter { what: "dtau must be positive" });
    }
    if w.eta_max < 8.0 {
        return Err(Error::InvalidParameter { what: "eta_max must be >= 8" });
    }
    let n = w.values.len();
    if n < 16 {
        return Err(Error::InvalidParameter { what: "self-similar grid needs n >= 16" });
    }
    let h = w.deta();
    // rows of A in banded form
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut d = vec![0.0; n];
    let mut c = vec![0.0; n];
    let mut e = vec![0.0; n];
    let s = -0.5 * dtau; // matrix is I − (dτ/2)A
    for j in 1..n - 1 {
        let eta = h * j as f64;
        if j >= 2 && j <= n - 3 {
            let h2 = 12.0 * h * h;
            let h1 = 12.0 * h;
            a[j] = s * (-1.0 / h2 + 0.5 * eta / h1);
            b[j] = s * (16.0 / h2 - 4.0 * eta / h1);
            d[j] = 1.0 + s * (-30.0 / h2 + 1.0);
            c[j] = s * (16.0 / h2 + 4.0 * eta / h1);
            e[j] = s * (-1.0 / h2 - 0.5 * eta / h1);
        } else {
            b[j] = s * (1.0 / (h * h) - 0.25 * eta / h);
            d[j] = 1.0 + s * (-2.0 / (h * h) + 1.0);
            c[j] = s * (1.0 / (h * h) + 0.25 * eta / h);
        }
    }
    d[0] = 1.0;
    d[n - 1] = 1.0;
    let aw = apply_fp_operator(&w.values, h);
    let mut rhs: Vec<f64> = (0..n).map(|j| w.values[j] + 0.5 * dtau * aw[j]).collect();
    rhs[0] = 0.0;
    rhs[n - 1] = 0.0;
    let values = solve_penta(&mut a, &mut b, &mut d, &mut c, &mut e, &mut rhs)?;
    Ok(SelfSimField { eta_max: w.eta_max, values, tau: w.tau + dtau })
}

/// Trapezoidal dipole moment ∫ η·w dη with a truncation warning when the
/// tail has not decayed below 1e−12 at eta_max.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleMoment {
    pub value: f64,
    pub truncation_warning: bool,
}

pub fn dipole_moment(w: &SelfSimField) -> DipoleMoment {
    let h = w.deta();
    let n = w.values.len();
    let mut sum = 0.0;
    for j in 0..n - 1 {
        let f0 = w.eta(j) * w.values[j];
        let f1 = w.eta(j + 1) * w.values[j + 1];
        sum += 0.5 * h * (f0 + f1);
    }
    DipoleMoment {
        value: sum,
        truncation_warning: num::abs(w.values[n - 1]) > 1e-12
            || num::abs(w.values[n - 2]) > 1e-12,
    }
}

/// Weighted sup distance to the dipole: sup_η e^{η²/16}|w − αφ₀|.
pub fn dipole_distance(w: &SelfSimField, alpha: f64) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..w.values.len() {
        let eta = w.eta(j);
        let dev = num::abs(w.values[j] - alpha * phi0(eta)) * num::exp(eta * eta / 16.0);
        worst = worst.max(dev);
    }
    worst
}

/// Both sign conventions for the front shift induced by a dipole amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaCandidates {
    pub plus: f64,
    pub minus: f64,
}

/// β = ±(1/λ₀) log α; both candidates are reported and the caller selects
/// the one matching the measured front.
pub fn beta_from_alpha(alpha: f64, lambda0: f64) -> Result<BetaCandidates> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter { what: "alpha must be positive" });
    }
    if !(lambda0 > 0.0) {
        return Err(Error::InvalidParameter { what: "lambda0 must be positive" });
    }
    let plus = num::ln(alpha) / lambda0;
    Ok(BetaCandidates { plus, minus: -plus })
}
