//! Error taxonomy shared by the whole crate.

use core::fmt;

/// All failure modes of the laboratory.
///
/// Grouped loosely by origin: input validation, solver breakdown, and
/// estimator preconditions. The CLI maps validation errors to exit code 2
/// and numerical failures to exit code 3.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A scalar parameter is outside its admissible range.
    InvalidParameter { what: &'static str },
    /// The supplied reaction fails the KPP endpoint conditions.
    NotKpp { detail: &'static str },
    /// Dimension must satisfy d >= 2.
    InvalidDimension { d: u32 },
    /// A coordinate left the symmetry class domain I.
    OutOfDomain,
    /// Time argument outside its admissible range.
    InvalidTime,
    /// Requested wave speed is below minimal: the profile would oscillate.
    NoMonotoneFront { c: f64, c0: f64 },
    /// Shooting left [0, 1+tol]; the seed missed the connecting orbit.
    SeedFailure,
    /// Profile never crosses the requested level.
    NotNormalizable,
    /// Fit window too short or design matrix rank-deficient.
    IllConditionedFit,
    /// Initial datum leaves [0,1].
    InvalidDatum,
    /// Scheme configuration violates its stability/monotonicity bound.
    ConfigError { detail: &'static str },
    /// Linear solve or stepping broke down (NaN, zero pivot).
    NumericalFailure { detail: &'static str },
    /// A transform asked for data outside the simulated window.
    CoverageError,
    /// Exponential-zoom arithmetic left the representable range.
    Overflow,
    /// Front tracking found no level crossing.
    NoFront,
    /// The beta objective was not unimodal within tolerance.
    AmbiguousBeta,
    /// Estimator fed nonpositive data where positivity is required.
    InvalidData { detail: &'static str },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { what } => write!(f, "invalid parameter: {what}"),
            Error::NotKpp { detail } => write!(f, "not a KPP reaction: {detail}"),
            Error::InvalidDimension { d } => write!(f, "invalid dimension d={d} (need d >= 2)"),
            Error::OutOfDomain => write!(f, "coordinate outside the symmetry-class domain"),
            Error::InvalidTime => write!(f, "time argument out of range"),
            Error::NoMonotoneFront { c, c0 } => {
                write!(f, "no monotone front at speed c={c} below minimal c0={c0}")
            }
            Error::SeedFailure => write!(f, "shooting seed failed (overshoot above 1)"),
            Error::NotNormalizable => write!(f, "profile does not cross the half level"),
            Error::IllConditionedFit => write!(f, "fit window too short / rank-deficient design"),
            Error::InvalidDatum => write!(f, "initial datum outside [0,1]"),
            Error::ConfigError { detail } => write!(f, "solver config error: {detail}"),
            Error::NumericalFailure { detail } => write!(f, "numerical failure: {detail}"),
            Error::CoverageError => write!(f, "requested region exits the simulated window"),
            Error::Overflow => write!(f, "exponential overflow in self-similar transform"),
            Error::NoFront => write!(f, "no front-level crossing in field"),
            Error::AmbiguousBeta => write!(f, "beta objective not unimodal"),
            Error::InvalidData { detail } => write!(f, "invalid data: {detail}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
