//! The iid-case return block: risk-free rate, expected equity return, their
//! log difference, and the diagnostic that flags premium figures quoted at
//! parameters where no equilibrium supports them.
//!
//! These closed forms hold only for serially uncorrelated growth (rho = 0);
//! no analytic general-rho premium is offered, deliberately. With MA(1)
//! correlation the returns are available empirically through the simulation
//! module instead.

use serde::Serialize;

use crate::closed_form::{beta_prime, coefficients};
use crate::model::{GrowthProcess, Preferences};
use crate::{PricerError, Result};

/// Gross one-period returns implied by the Euler equation in the iid case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnBlock {
    /// Gross risk-free rate R_f.
    pub risk_free_gross: f64,
    /// Expected gross equity return E(R_e).
    pub expected_equity_gross: f64,
    /// ln E(R_e) - ln R_f, equal to alpha * sigma2_x by construction of the
    /// two closed forms.
    pub log_premium: f64,
}

/// The log equity premium `alpha * sigma2_x`: risk aversion times the
/// observed variance of consumption growth.
#[inline]
pub fn equity_premium_log(alpha: f64, sigma2_x: f64) -> f64 {
    alpha * sigma2_x
}

fn require_iid(process: &GrowthProcess) -> Result<()> {
    if process.rho != 0.0 {
        return Err(PricerError::RequiresIid { rho: process.rho });
    }
    Ok(())
}

/// Gross risk-free rate `exp(-ln beta + alpha mu_x - alpha^2 sigma2_x / 2)`,
/// from the Euler equation with a unit payoff.
///
/// Defined regardless of whether the equity equilibrium exists: the sure
/// claim is priced by the kernel alone.
pub fn risk_free_rate_iid(prefs: &Preferences, process: &GrowthProcess) -> Result<f64> {
    require_iid(process)?;
    let sigma2_x = process.observed_variance();
    Ok((-prefs.beta.ln() + prefs.alpha * process.mu_x
        - prefs.alpha * prefs.alpha * sigma2_x / 2.0)
        .exp())
}

/// Expected gross equity return `exp(-k + mu_x + sigma2_x / 2)`, i.e.
/// `(1 + 1/a) * E[growth]` with the iid price-dividend ratio `a`.
pub fn expected_equity_return_iid(prefs: &Preferences, process: &GrowthProcess) -> Result<f64> {
    require_iid(process)?;
    let co = coefficients(prefs, process);
    if co.margin >= 0.0 {
        return Err(PricerError::NoEquilibrium { margin: co.margin });
    }
    let sigma2_x = process.observed_variance();
    Ok((-co.k + process.mu_x + sigma2_x / 2.0).exp())
}

/// Both returns and their log difference.
pub fn return_block_iid(prefs: &Preferences, process: &GrowthProcess) -> Result<ReturnBlock> {
    let risk_free_gross = risk_free_rate_iid(prefs, process)?;
    let expected_equity_gross = expected_equity_return_iid(prefs, process)?;
    Ok(ReturnBlock {
        risk_free_gross,
        expected_equity_gross,
        log_premium: expected_equity_gross.ln() - risk_free_gross.ln(),
    })
}

/// Whether a quoted premium is backed by an existing equilibrium.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// Equilibrium exists; the premium is a property of the model.
    Valid,
    /// No equilibrium at these parameters: the premium formula still
    /// evaluates, but prices the asset of a model with no solution.
    Misleading,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Valid => write!(f, "VALID"),
            Verdict::Misleading => write!(f, "MISLEADING"),
        }
    }
}

/// The premium-quoting procedure with its existence check: computes the
/// premium formula unconditionally, then reports whether the underlying
/// equilibrium exists. The formula value is reported even when it is
/// meaningless; the verdict carries the warning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PremiumDiagnostic {
    /// The formula value `alpha * sigma2_x`, always computed.
    pub premium_log: f64,
    pub exists: bool,
    /// Existence margin k + e at these parameters.
    pub margin: f64,
    /// Frontier value at this alpha.
    pub beta_prime: f64,
    /// Price-dividend scale, present only when the equilibrium exists.
    pub a_if_exists: Option<f64>,
    pub verdict: Verdict,
}

pub fn premium_diagnostic(prefs: &Preferences, process: &GrowthProcess) -> PremiumDiagnostic {
    let co = coefficients(prefs, process);
    let exists = co.margin < 0.0;
    PremiumDiagnostic {
        premium_log: equity_premium_log(prefs.alpha, process.observed_variance()),
        exists,
        margin: co.margin,
        beta_prime: beta_prime(prefs.alpha, process),
        a_if_exists: co.a,
        verdict: if exists {
            Verdict::Valid
        } else {
            Verdict::Misleading
        },
    }
}
