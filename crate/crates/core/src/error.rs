use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} = {value} is below the vacuum variance 1/2")]
    BelowVacuum { name: &'static str, value: f64 },

    #[error(
        "uncertainty inequality (b_max + 1/2)(b_min - 1/2) - c^2 >= 0 violated: margin = {margin:e}"
    )]
    Uncertainty { margin: f64 },

    #[error("non-physical spectrum: (b1 + b2)^2 - 4 c^2 = {value:e} is not positive")]
    NonPhysicalSpectrum { value: f64 },

    #[error("entropic function needs x >= 1/2, got {0}")]
    EntropyDomain(f64),

    #[error("discord {name} = {value:e} is negative beyond rounding")]
    NegativeDiscord { name: &'static str, value: f64 },

    #[error("conditional variance {name} = {value} fell below 1/2")]
    ConditionalVariance { name: &'static str, value: f64 },

    #[error("degenerate denominator (b1 + b2)^2 = 4 c^2")]
    DegenerateDenominator,

    #[error("time must be non-negative and finite, got {0}")]
    InvalidTime(f64),

    #[error("separability condition (b1 - 1/2)(b2 - 1/2) - c^2 >= 0 already holds (margin = {margin:e}); nothing to kill")]
    AlreadySeparable { margin: f64 },

    #[error("damping rate must be positive, got {0}")]
    NonPositiveRate(f64),

    #[error("no reservoir is attached (both damping rates are zero)")]
    NoChannel,

    #[error("undamped mode has b = 1/2, the single-bath death time is undefined")]
    DegenerateMode,

    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,

    #[error("eigenvalue moduli do not pair: {0:?}")]
    Unpaired([f64; 4]),

    #[error("separability margin has no root up to t = {t_max}")]
    NoRoot { t_max: f64 },
}
