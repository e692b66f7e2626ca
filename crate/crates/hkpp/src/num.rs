//! Scalar math shim: std float intrinsics when available, `libm` otherwise.

#![allow(dead_code)]

#[cfg(feature = "std")]
mod imp {
    pub fn exp(x: f64) -> f64 {
        x.exp()
    }
    pub fn ln(x: f64) -> f64 {
        x.ln()
    }
    pub fn sqrt(x: f64) -> f64 {
        x.sqrt()
    }
    pub fn tanh(x: f64) -> f64 {
        x.tanh()
    }
    pub fn sinh(x: f64) -> f64 {
        x.sinh()
    }
    pub fn cosh(x: f64) -> f64 {
        x.cosh()
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        x.powf(y)
    }
    pub fn powi(x: f64, y: i32) -> f64 {
        x.powi(y)
    }
    pub fn abs(x: f64) -> f64 {
        x.abs()
    }
    pub fn floor(x: f64) -> f64 {
        x.floor()
    }
    pub fn round(x: f64) -> f64 {
        x.round()
    }
}

#[cfg(not(feature = "std"))]
mod imp {
    pub fn exp(x: f64) -> f64 {
        libm::exp(x)
    }
    pub fn ln(x: f64) -> f64 {
        libm::log(x)
    }
    pub fn sqrt(x: f64) -> f64 {
        libm::sqrt(x)
    }
    pub fn tanh(x: f64) -> f64 {
        libm::tanh(x)
    }
    pub fn sinh(x: f64) -> f64 {
        libm::sinh(x)
    }
    pub fn cosh(x: f64) -> f64 {
        libm::cosh(x)
    }
    pub fn powf(x: f64, y: f64) -> f64 {
        libm::pow(x, y)
    }
    pub fn powi(x: f64, y: i32) -> f64 {
        libm::pow(x, y as f64)
    }
    pub fn abs(x: f64) -> f64 {
        libm::fabs(x)
    }
    pub fn floor(x: f64) -> f64 {
        libm::floor(x)
    }
    pub fn round(x: f64) -> f64 {
        libm::round(x)
    }
}

pub use imp::*;

/// coth x, valid for x > 0 (Laurent expansion 1/x + x/3 below 1e-6 to avoid
/// the 0/0 of cosh/sinh ratios near the origin).
pub fn coth(x: f64) -> f64 {
    if x < 1e-6 {
        1.0 / x + x / 3.0
    } else {
        1.0 / tanh(x)
    }
}

/// x / sinh x with the removable singularity at 0 filled by series.
pub fn x_over_sinh(x: f64) -> f64 {
    if abs(x) < 1e-4 {
        let x2 = x * x;
        // x/sinh x = 1 - x^2/6 + 7x^4/360 - ...
        1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0
    } else {
        x / sinh(x)
    }
}
