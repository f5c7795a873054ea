//! Equilibrium pricing for a single-tree exchange economy whose log consumption
//! growth follows a Gaussian MA(1) process.
//!
//! The asset pays aggregate consumption as its dividend and is priced by a
//! representative agent with isoelastic (CRRA) utility, discount factor `beta`
//! and risk aversion `alpha`. The price admits a closed form
//! `p_t = a * exp(b * eps_t) * c_t`, but only when the discounted-dividend
//! series converges, which happens exactly when the existence margin `k + e`
//! is negative, or equivalently when `beta` lies below the frontier
//! `beta_prime(alpha, rho)`. The crate computes the closed form, the frontier,
//! the iid-case return block, and verifies all of it against seeded Monte
//! Carlo oracles.
//!
//! Modules:
//! - [`model`]: preferences, the growth process, lognormal-moment identities.
//! - [`closed_form`]: price coefficients, existence margin, frontier, series.
//! - [`premium`]: risk-free rate, expected equity return, premium diagnostics.
//! - [`simulation`]: seeded MA(1) paths and Monte Carlo verification oracles.
//! - [`sweep`]: frontier grids and CSV/SVG emission.
//! - [`cli`]: the command-line front end.

use std::fmt;

pub mod cli;
pub mod closed_form;
pub mod model;
pub mod premium;
pub mod simulation;
pub mod sweep;

pub use closed_form::PriceCoefficients;
pub use model::{EconomyState, GaussianSpec, GrowthProcess, Preferences};
pub use premium::ReturnBlock;
pub use simulation::{McEstimate, PathSample, SimConfig};
pub use sweep::{FrontierRow, ScenarioReport};

#[derive(Debug)]
pub enum PricerError {
    /// A constructor or operation received a value outside its domain.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// Pricing was requested where the discounted-dividend series diverges.
    /// Carries the offending existence margin `k + e` (>= 0 here).
    NoEquilibrium { margin: f64 },
    /// An operation defined only for serially uncorrelated growth was called
    /// with a nonzero MA(1) coefficient.
    RequiresIid { rho: f64 },
    /// The inverse-frontier search hit its upper bracket without crossing.
    SearchCapExceeded { cap: f64 },
    /// Paired sequences disagree in length.
    LengthMismatch { left: usize, right: usize },
    /// A grid does not contain enough distinct points to emit.
    DegenerateGrid(&'static str),
    Io(std::io::Error),
}

impl fmt::Display for PricerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PricerError::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid {name} = {value}: {reason}"),
            PricerError::NoEquilibrium { margin } => write!(
                f,
                "no equilibrium: existence margin k + e = {margin:+.6} is not negative, \
                 the discounted-dividend series diverges"
            ),
            PricerError::RequiresIid { rho } => write!(
                f,
                "operation is defined only for iid growth (rho = 0), got rho = {rho}"
            ),
            PricerError::SearchCapExceeded { cap } => {
                write!(f, "frontier search exceeded the alpha cap {cap}")
            }
            PricerError::LengthMismatch { left, right } => {
                write!(f, "sequence lengths differ: {left} vs {right}")
            }
            PricerError::DegenerateGrid(what) => write!(f, "degenerate grid: {what}"),
            PricerError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for PricerError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            PricerError::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<std::io::Error> for PricerError {
    fn from(e: std::io::Error) -> Self {
        PricerError::Io(e)
    }
}

pub type Result<T> = std::result::Result<T, PricerError>;
