//! Hyperbolic-space ingredients: warped-product drift coefficients, the
//! curvature factor seen from a moving frame, and the H³ heat kernel with
//! its Davies-type envelope.
//!
//! Each cohomogeneity-one isometry class reduces the Laplace–Beltrami
//! operator on H^d to u_ρρ + (d−1)h₁(ρ)u_ρ with
//!
//! | class      | h₁(ρ)   | domain I |
//! |------------|---------|----------|
//! | elliptic   | coth ρ  | (0, ∞)   |
//! | hyperbolic | tanh ρ  | ℝ        |
//! | parabolic  | 1       | ℝ        |
//!
//! In every class h₁ → 1 at infinity ("drift from infinity"), which is what
//! slows the spreading speed from c₀ to c* = c₀ − (d−1).

use crate::error::{Error, Result};
use crate::num;
use crate::quad;
use crate::selfsim::FrameParams;

/// The three cohomogeneity-one isometry classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    /// Rotations about a point; radial coordinate, I = (0, ∞).
    Elliptic,
    /// Isometries fixing a hyperplane; signed distance, I = ℝ.
    Hyperbolic,
    /// Horospherical motions; Busemann coordinate, I = ℝ.
    Parabolic,
}

impl SymmetryClass {
    /// Lower end of the reduced domain I (upper end is +∞ in all classes).
    pub fn domain_inf(self) -> f64 {
        match self {
            SymmetryClass::Elliptic => 0.0,
            _ => f64::NEG_INFINITY,
        }
    }

    pub fn contains(self, rho: f64) -> bool {
        rho > self.domain_inf() || (self != SymmetryClass::Elliptic && rho.is_finite())
    }
}

/// Drift coefficient h₁(ρ) of the reduced Laplacian.
pub fn drift_h1(class: SymmetryClass, rho: f64) -> Result<f64> {
    match class {
        SymmetryClass::Elliptic => {
            if rho <= 0.0 {
                return Err(Error::OutOfDomain);
            }
            Ok(num::coth(rho))
        }
        SymmetryClass::Hyperbolic => Ok(num::tanh(rho)),
        SymmetryClass::Parabolic => Ok(1.0),
    }
}

/// Closed form of |h₁(ρ) − 1|: 2/(e^{2ρ}−1) (elliptic), 2/(e^{2ρ}+1)
/// (hyperbolic), 0 (parabolic).
pub fn drift_gap(class: SymmetryClass, rho: f64) -> Result<f64> {
    match class {
        SymmetryClass::Elliptic => {
            if rho <= 0.0 {
                return Err(Error::OutOfDomain);
            }
            Ok(2.0 / (num::exp(2.0 * rho) - 1.0))
        }
        SymmetryClass::Hyperbolic => Ok(2.0 / (num::exp(2.0 * rho) + 1.0)),
        SymmetryClass::Parabolic => Ok(0.0),
    }
}

/// Curvature error factor 𝓗(ϱ,t) = (d−1)(h₁(ϱ+R(t)) − 1) in the moving
/// frame. Identically zero in the parabolic class.
pub fn curvature_h(
    class: SymmetryClass,
    d: u32,
    varrho: f64,
    t: f64,
    frame: &FrameParams,
) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    if class == SymmetryClass::Parabolic {
        return Ok(0.0);
    }
    let rho = varrho + frame.r_of_t(t)?;
    // h₁ − 1 via the closed-form gap: evaluating coth(ρ) − 1 directly loses
    // all significant digits once ρ ≳ 20 (coth rounds to 1).
    let signed_gap = match class {
        SymmetryClass::Elliptic => drift_gap(class, rho)?, // coth > 1
        SymmetryClass::Hyperbolic => -drift_gap(class, rho)?, // tanh < 1
        SymmetryClass::Parabolic => 0.0,
    };
    Ok((d - 1) as f64 * signed_gap)
}

/// Exact heat kernel of H³ as a function of geodesic distance:
/// P_t(r) = (4πt)^{−3/2} (r / sinh r) e^{−t − r²/4t}.
pub fn heat_kernel_p3(r: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidTime);
    }
    if r < 0.0 {
        return Err(Error::InvalidParameter { what: "distance r must be >= 0" });
    }
    let pref = num::powf(4.0 * core::f64::consts::PI * t, -1.5);
    Ok(pref * num::x_over_sinh(r) * num::exp(-t - r * r / (4.0 * t)))
}

/// Davies envelope h_t(r) = ((1+r)/(4πt)^{d/2}) (1+r+t)^{(d−3)/2}
/// e^{−λ₁t − (d−1)r/2 − r²/4t}, a two-sided bound for the kernel up to a
/// dimension constant.
pub fn heat_kernel_bound_h(d: u32, r: f64, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidTime);
    }
    if r < 0.0 {
        return Err(Error::InvalidParameter { what: "distance r must be >= 0" });
    }
    let dm1 = (d - 1) as f64;
    let lambda1 = dm1 * dm1 / 4.0;
    let pref = (1.0 + r) * num::powf(4.0 * core::f64::consts::PI * t, -(d as f64) / 2.0);
    let mid = num::powf(1.0 + r + t, (d as f64 - 3.0) / 2.0);
    Ok(pref * mid * num::exp(-lambda1 * t - dm1 * r / 2.0 - r * r / (4.0 * t)))
}

/// The same envelope written as e^{−(r+(d−1)t)²/4t} H_t(r) with
/// H_t(r) = (1+r+t)^{(d−3)/2} (1+r) / t^{d/2}; equal to
/// [`heat_kernel_bound_h`] up to the (4π)^{−d/2} normalization.
pub fn heat_kernel_bound_h_gaussian_form(d: u32, r: f64, t: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension { d });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidTime);
    }
    let dm1 = (d - 1) as f64;
    let big_h =
        num::powf(1.0 + r + t, (d as f64 - 3.0) / 2.0) * (1.0 + r) / num::powf(t, d as f64 / 2.0);
    let arg = r + dm1 * t;
    Ok(num::powf(4.0 * core::f64::consts::PI, -(d as f64) / 2.0)
        * num::exp(-arg * arg / (4.0 * t))
        * big_h)
}

/// ∫ P₃ dμ over H³, i.e. ∫₀^∞ P₃(r,t)·4π sinh²r dr by adaptive quadrature.
/// Should be 1 (the kernel is a probability density).
pub fn p3_mass(t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidTime);
    }
    // The integrand r sinh(r) e^{-t - r^2/4t} peaks near r = 2t with width
    // ~sqrt(t); beyond the cut the tail is below 1e-12 of the total.
    let r_cut = 2.0 * t + 30.0 * num::sqrt(t) + 20.0;
    let four_pi = 4.0 * core::f64::consts::PI;
    let pref = four_pi * num::powf(four_pi * t, -1.5);
    quad::integrate(
        &|r: f64| pref * r * num::sinh(r) * num::exp(-t - r * r / (4.0 * t)),
        0.0,
        r_cut,
        1e-10,
        1e-12,
    )
}

/// Min and max of P₃/h_t over an n-point grid on [0, r_max]; the theory
/// promises both are finite and positive (two-sided comparability), without
/// giving the constant.
pub fn kernel_ratio_check(t: f64, r_max: f64, n: usize) -> Result<(f64, f64)> {
    if n < 2 || !(r_max > 0.0) {
        return Err(Error::InvalidParameter { what: "kernel_ratio_check grid" });
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..n {
        let r = r_max * j as f64 / (n - 1) as f64;
        let ratio = heat_kernel_p3(r, t)? / heat_kernel_bound_h(3, r, t)?;
        lo = lo.min(ratio);
        hi = hi.max(ratio);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    #[test]
    fn drift_values() {
        assert_eq!(drift_h1(SymmetryClass::Parabolic, -3.0).unwrap(), 1.0);
        assert_eq!(drift_h1(SymmetryClass::Hyperbolic, 0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(drift_h1(SymmetryClass::Elliptic, 20.0).unwrap(), 1.0, epsilon = 1e-15);
        assert!(drift_h1(SymmetryClass::Elliptic, 0.0).is_err());
        assert!(drift_h1(SymmetryClass::Elliptic, -1.0).is_err());
    }

    #[test]
    fn coth_series_is_continuous() {
        // both branches agree with the Laurent expansion 1/x + x/3 just
        // outside the switch point (relative check: coth ~ 1e6 here)
        for &x in &[0.999_999e-6, 1.000_001e-6] {
            let v = drift_h1(SymmetryClass::Elliptic, x).unwrap();
            let series = 1.0 / x + x / 3.0;
            assert!(((v - series) / series).abs() < 1e-12, "x={x}: {v} vs {series}");
        }
    }

    #[test]
    fn drift_gap_closed_forms() {
        assert_eq!(drift_gap(SymmetryClass::Parabolic, 5.0).unwrap(), 0.0);
        assert_abs_diff_eq!(drift_gap(SymmetryClass::Hyperbolic, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            drift_gap(SymmetryClass::Elliptic, 1.0).unwrap(),
            2.0 / (crate::num::exp(2.0) - 1.0),
            epsilon = 1e-15
        );
        // frozen oracle for the elliptic gap at rho = 1
        assert_abs_diff_eq!(
            drift_gap(SymmetryClass::Elliptic, 1.0).unwrap(),
            0.313_035_285_499_331_3,
            epsilon = 1e-13
        );
    }

    #[test]
    fn curvature_factor() {
        let frame0 = FrameParams::raw(0.0, 0.0, 0.0);
        assert_eq!(
            curvature_h(SymmetryClass::Parabolic, 5, 3.0, 7.0, &frame0).unwrap(),
            0.0
        );
        assert_abs_diff_eq!(
            curvature_h(SymmetryClass::Hyperbolic, 2, 0.0, 1.0, &frame0).unwrap(),
            -1.0
        );
        // elliptic, d=3, varrho=0, R(t)=10 -> 2 * 2/(e^20 - 1)
        let frame10 = FrameParams::raw(10.0, 0.0, 0.0);
        assert_abs_diff_eq!(
            curvature_h(SymmetryClass::Elliptic, 3, 0.0, 1.0, &frame10).unwrap(),
            8.244_614_506_747_648e-9,
            epsilon = 1e-17
        );
    }

    #[test]
    fn p3_point_values() {
        // r=0, t=1: (4 pi)^{-3/2} e^{-1}
        let expect = (4.0 * PI).powf(-1.5) * (-1.0f64).exp();
        assert_abs_diff_eq!(heat_kernel_p3(0.0, 1.0).unwrap(), expect, epsilon = 1e-18);
        assert_abs_diff_eq!(expect, 8.258_301_266_124_23e-3, epsilon = 1e-12);
        let expect2 = (4.0 * PI).powf(-1.5) * (2.0 / 2.0f64.sinh()) * (-2.0f64).exp();
        assert_abs_diff_eq!(heat_kernel_p3(2.0, 1.0).unwrap(), expect2, epsilon = 1e-18);
        assert!(heat_kernel_p3(1.0, 0.0).is_err());
    }

    #[test]
    fn p3_series_limit_matches_ratio() {
        // series branch (r < 1e-4) continuous with the direct ratio; the
        // kernel itself varies by ~1e-16 between the probe points
        let a = heat_kernel_p3(0.999_999e-4, 1.0).unwrap();
        let b = heat_kernel_p3(1.000_001e-4, 1.0).unwrap();
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }

    #[test]
    fn envelope_point_values() {
        // d=3, r=0, t=1: (4 pi)^{-3/2} e^{-1}
        let expect = (4.0 * PI).powf(-1.5) * (-1.0f64).exp();
        assert_abs_diff_eq!(heat_kernel_bound_h(3, 0.0, 1.0).unwrap(), expect, epsilon = 1e-18);
        // d=2, r=1, t=1: 2 * 3^{-1/2} (4 pi)^{-1} e^{-1/4 - 1/2 - 1/4}
        let expect2 = 2.0 / 3.0f64.sqrt() / (4.0 * PI) * (-1.0f64).exp();
        assert_abs_diff_eq!(heat_kernel_bound_h(2, 1.0, 1.0).unwrap(), expect2, epsilon = 1e-17);
    }

    #[test]
    fn envelope_forms_agree() {
        for &(d, r, t) in &[(4u32, 2.0, 0.5), (2, 1.0, 1.0), (3, 5.0, 2.0), (7, 0.3, 0.1)] {
            let a = heat_kernel_bound_h(d, r, t).unwrap();
            let b = heat_kernel_bound_h_gaussian_form(d, r, t).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-12 * a.abs());
        }
    }

    #[test]
    fn p3_normalization() {
        for &t in &[0.1, 1.0, 10.0] {
            let mass = p3_mass(t).unwrap();
            assert!((mass - 1.0).abs() < 1e-6, "t={t}: mass={mass}");
        }
    }

    #[test]
    fn p3_monotone_in_r() {
        for &t in &[0.5, 1.0, 5.0] {
            let mut prev = heat_kernel_p3(0.0, t).unwrap();
            for j in 1..400 {
                let r = 20.0 * j as f64 / 399.0;
                let v = heat_kernel_p3(r, t).unwrap();
                assert!(v < prev, "P3 not decreasing at r={r}, t={t}");
                prev = v;
            }
        }
    }

    #[test]
    fn kernel_ratio_bounded() {
        for &(t, rmax) in &[(1.0, 20.0), (10.0, 50.0)] {
            let (lo, hi) = kernel_ratio_check(t, rmax, 1000).unwrap();
            assert!(lo > 0.1 && hi < 10.0, "t={t}: ratio range [{lo}, {hi}]");
        }
    }

    #[test]
    fn p3_satisfies_radial_heat_equation() {
        // residual of dP/dt - [P_rr + 2 coth(r) P_r], 4th-order central FD
        let p = |r: f64, t: f64| heat_kernel_p3(r, t).unwrap();
        let d1 = |g: &dyn Fn(f64) -> f64, x: f64, h: f64| {
            (-g(x + 2.0 * h) + 8.0 * g(x + h) - 8.0 * g(x - h) + g(x - 2.0 * h)) / (12.0 * h)
        };
        let d2 = |g: &dyn Fn(f64) -> f64, x: f64, h: f64| {
            (-g(x + 2.0 * h) + 16.0 * g(x + h) - 30.0 * g(x) + 16.0 * g(x - h) - g(x - 2.0 * h))
                / (12.0 * h * h)
        };
        for &(r, t) in &[(0.5, 1.0), (1.0, 0.5), (2.0, 1.0), (4.0, 2.0), (6.0, 1.5)] {
            let h = 0.008;
            let pt = d1(&|tt| p(r, tt), t, h * t.min(1.0));
            let pr = d1(&|rr| p(rr, t), r, h);
            let prr = d2(&|rr| p(rr, t), r, h);
            let lap = prr + 2.0 * crate::num::coth(r) * pr;
            let scale = pt.abs() + prr.abs() + (2.0 * crate::num::coth(r) * pr).abs();
            let rel = (pt - lap).abs() / scale;
            assert!(rel < 1e-6, "residual {rel} at (r={r}, t={t})");
        }
    }

    #[test]
    fn curvature_decay_in_moving_frame() {
        // e^{3 tau/2} sup_varrho |H| decreases along tau = log t once the
        // frame has moved out (R(t) >= c* t / 2), for both curved classes.
        let frame = FrameParams::raw(2.0, 0.75, 0.0);
        for &class in &[SymmetryClass::Elliptic, SymmetryClass::Hyperbolic] {
            let mut prev = f64::INFINITY;
            for &t in &[20.0, 40.0, 80.0, 160.0] {
                let tau = crate::num::ln(t);
                // sup over varrho >= 0 is attained at varrho = 0 (gap decreasing)
                let sup = curvature_h(class, 3, 0.0, t, &frame).unwrap().abs();
                let weighted = crate::num::exp(1.5 * tau) * sup;
                assert!(weighted < prev, "{class:?} t={t}");
                prev = weighted;
            }
        }
    }
}
