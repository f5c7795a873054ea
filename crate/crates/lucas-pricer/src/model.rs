//! Domain types and the small identities everything else is built on:
//! lognormal moments, CRRA utility, and the MA(1) variance/autocorrelation
//! mapping between the innovation scale and the observed growth series.

use serde::Serialize;

use crate::{PricerError, Result};

fn require_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(PricerError::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        })
    }
}

/// Behavioral parameters of the representative agent.
///
/// `beta` is deliberately not capped below 1: whether a given `beta` is
/// consistent with equilibrium is exactly what the existence frontier decides,
/// so values at or above 1 must be representable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preferences {
    /// Coefficient of relative risk aversion, > 0.
    pub alpha: f64,
    /// Subjective discount factor per period, > 0.
    pub beta: f64,
}

impl Preferences {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        require_finite("alpha", alpha)?;
        require_finite("beta", beta)?;
        if alpha <= 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "risk aversion must be positive",
            });
        }
        if beta <= 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "beta",
                value: beta,
                reason: "discount factor must be positive",
            });
        }
        Ok(Preferences { alpha, beta })
    }
}

/// Law of log consumption growth: `x_{t+1} = mu_x + eps_{t+1} + rho * eps_t`
/// with iid Gaussian innovations `eps ~ N(0, sigma2_eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthProcess {
    /// Mean of log growth per period.
    pub mu_x: f64,
    /// Variance of the innovation, >= 0.
    pub sigma2_eps: f64,
    /// MA(1) coefficient on the lagged innovation.
    pub rho: f64,
}

impl GrowthProcess {
    pub fn new(mu_x: f64, sigma2_eps: f64, rho: f64) -> Result<Self> {
        require_finite("mu_x", mu_x)?;
        require_finite("sigma2_eps", sigma2_eps)?;
        require_finite("rho", rho)?;
        if sigma2_eps < 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "sigma2_eps",
                value: sigma2_eps,
                reason: "variance cannot be negative",
            });
        }
        Ok(GrowthProcess {
            mu_x,
            sigma2_eps,
            rho,
        })
    }

    /// Calibrate from the observed variance of the growth series itself,
    /// `sigma2_x = (1 + rho^2) * sigma2_eps`, the quantity measured in data.
    pub fn from_observed(mu_x: f64, sigma2_x: f64, rho: f64) -> Result<Self> {
        require_finite("sigma2_x", sigma2_x)?;
        if sigma2_x < 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "sigma2_x",
                value: sigma2_x,
                reason: "variance cannot be negative",
            });
        }
        GrowthProcess::new(mu_x, innovation_variance_from_observed(sigma2_x, rho), rho)
    }

    /// Variance of the observed growth series: `(1 + rho^2) * sigma2_eps`.
    #[inline]
    pub fn observed_variance(&self) -> f64 {
        (1.0 + self.rho * self.rho) * self.sigma2_eps
    }

    /// Innovation standard deviation.
    #[inline]
    pub fn sigma_eps(&self) -> f64 {
        self.sigma2_eps.sqrt()
    }
}

/// Innovation variance implied by an observed growth variance; inverse of
/// [`GrowthProcess::observed_variance`].
#[inline]
pub fn innovation_variance_from_observed(sigma2_x: f64, rho: f64) -> f64 {
    sigma2_x / (1.0 + rho * rho)
}

/// Lag-1 autocorrelation of the growth series, `rho / (1 + rho^2)`.
/// Lies in [-0.5, 0.5], attaining the bounds only at `rho = ±1`; all higher
/// lags of an MA(1) are zero.
#[inline]
pub fn ma1_lag1_autocorr(rho: f64) -> f64 {
    rho / (1.0 + rho * rho)
}

/// Current state of the economy: consumption level and realized innovation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EconomyState {
    /// Per-capita consumption = dividend level, > 0.
    pub c: f64,
    /// Realized current innovation `eps_t`.
    pub eps: f64,
}

impl EconomyState {
    pub fn new(c: f64, eps: f64) -> Result<Self> {
        require_finite("c", c)?;
        require_finite("eps", eps)?;
        if c <= 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "c",
                value: c,
                reason: "consumption must be positive",
            });
        }
        Ok(EconomyState { c, eps })
    }
}

/// A Gaussian law `N(mu, sigma2)`, the input to the lognormal-moment identity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianSpec {
    pub mu: f64,
    /// Variance, >= 0.
    pub sigma2: f64,
}

impl GaussianSpec {
    pub fn new(mu: f64, sigma2: f64) -> Result<Self> {
        require_finite("mu", mu)?;
        require_finite("sigma2", sigma2)?;
        if sigma2 < 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "sigma2",
                value: sigma2,
                reason: "variance cannot be negative",
            });
        }
        Ok(GaussianSpec { mu, sigma2 })
    }

    /// `E[exp(z)] = exp(mu + sigma2 / 2)` for `z ~ N(mu, sigma2)`.
    #[inline]
    pub fn lognormal_mean(&self) -> f64 {
        (self.mu + self.sigma2 / 2.0).exp()
    }
}

/// Period utility `c^(1 - alpha) / (1 - alpha)`.
///
/// Undefined at `alpha = 1`; the log-utility limit is accepted by the pricing
/// formulas downstream but not by this function.
pub fn isoelastic_utility(c: f64, alpha: f64) -> Result<f64> {
    require_finite("c", c)?;
    require_finite("alpha", alpha)?;
    if c <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "c",
            value: c,
            reason: "consumption must be positive",
        });
    }
    if alpha <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "risk aversion must be positive",
        });
    }
    if alpha == 1.0 {
        return Err(PricerError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "isoelastic utility is undefined at alpha = 1",
        });
    }
    Ok(c.powf(1.0 - alpha) / (1.0 - alpha))
}

/// Marginal utility `c^(-alpha)`, the building block of the pricing kernel.
pub fn marginal_utility(c: f64, alpha: f64) -> Result<f64> {
    require_finite("c", c)?;
    require_finite("alpha", alpha)?;
    if c <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "c",
            value: c,
            reason: "consumption must be positive",
        });
    }
    if alpha <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "alpha",
            value: alpha,
            reason: "risk aversion must be positive",
        });
    }
    Ok(c.powf(-alpha))
}
