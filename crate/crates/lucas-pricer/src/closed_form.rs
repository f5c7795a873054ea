//! Closed-form pricing: the coefficient quadruple (k, e, b, a), the existence
//! margin k + e, the frontier beta_prime, the price itself, and the analytic
//! discounted-dividend series with log-space partial sums.
//!
//! The two existence tests are deliberately kept as independent code paths:
//! `existence_margin` sums the coefficient formulas in innovation-variance
//! terms, while `beta_prime` is evaluated directly in observed-variance terms.
//! Their equivalence is asserted by tests, not by sharing code.

use serde::Serialize;

use crate::model::{EconomyState, GrowthProcess, Preferences};
use crate::{PricerError, Result};

/// Coefficients of the equilibrium price `p_t = a * exp(b * eps_t) * c_t`.
///
/// `a` is present only when the discounted-dividend series converges
/// (`margin < 0`); representing the divergent case as a number would invite
/// reading a meaningless negative "price" off the same formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriceCoefficients {
    /// Log of the one-period expected discounted dividend growth factor.
    pub k: f64,
    /// MA(1) correction to the geometric ratio of successive terms.
    pub e: f64,
    /// Loading of the price on the current innovation: `b = (1 - alpha) * rho`.
    pub b: f64,
    /// Existence margin `k + e`; the series converges iff this is negative.
    pub margin: f64,
    /// Price-dividend scale `exp(k) / (1 - exp(k + e))`, present iff `margin < 0`.
    pub a: Option<f64>,
}

/// Coefficients of the closed-form price for the given preferences and
/// growth law.
pub fn coefficients(prefs: &Preferences, process: &GrowthProcess) -> PriceCoefficients {
    let one_less_alpha = 1.0 - prefs.alpha;
    let s2 = process.sigma2_eps;
    let rho = process.rho;
    let k = prefs.beta.ln()
        + one_less_alpha * process.mu_x
        + one_less_alpha * one_less_alpha * s2 / 2.0;
    let e = one_less_alpha * one_less_alpha * (rho * rho + 2.0 * rho) * s2 / 2.0;
    let b = one_less_alpha * rho;
    let margin = k + e;
    // 1 - exp(margin) as -exp_m1(margin): exact cancellation near the boundary
    let a = if margin < 0.0 {
        Some(k.exp() / (-margin.exp_m1()))
    } else {
        None
    };
    PriceCoefficients {
        k,
        e,
        b,
        margin,
        a,
    }
}

/// The existence margin `k + e`. Negative iff the equilibrium exists.
pub fn existence_margin(prefs: &Preferences, process: &GrowthProcess) -> f64 {
    coefficients(prefs, process).margin
}

/// Whether an equilibrium price exists, via the margin test.
/// Equivalent to `prefs.beta < beta_prime(prefs.alpha, process)`.
pub fn equilibrium_exists(prefs: &Preferences, process: &GrowthProcess) -> bool {
    existence_margin(prefs, process) < 0.0
}

/// The existence frontier: the largest discount factor compatible with
/// equilibrium at risk aversion `alpha`, in observed-variance terms.
///
/// May exceed 1. Evaluated independently of [`coefficients`], as the product
/// of an iid factor and an MA(1) correction factor.
pub fn beta_prime(alpha: f64, process: &GrowthProcess) -> f64 {
    let one_less_alpha = 1.0 - alpha;
    let sigma2_x = process.observed_variance();
    let rho = process.rho;
    let iid_factor =
        (-one_less_alpha * process.mu_x - one_less_alpha * one_less_alpha * sigma2_x / 2.0).exp();
    let ma_factor =
        (-rho * one_less_alpha * one_less_alpha * sigma2_x / (1.0 + rho * rho)).exp();
    iid_factor * ma_factor
}

/// The equilibrium price `a * exp(b * eps) * c`.
pub fn equilibrium_price(co: &PriceCoefficients, state: &EconomyState) -> Result<f64> {
    Ok(price_dividend_ratio(co, state.eps)? * state.c)
}

/// The price-dividend ratio `a * exp(b * eps)`.
pub fn price_dividend_ratio(co: &PriceCoefficients, eps: f64) -> Result<f64> {
    match co.a {
        Some(a) => Ok(a * (co.b * eps).exp()),
        None => Err(PricerError::NoEquilibrium { margin: co.margin }),
    }
}

/// The i-th expected discounted dividend per unit of current consumption,
/// conditional on the current innovation: `exp(k + (i - 1)(k + e) + b * eps)`.
///
/// Consecutive terms have the exact ratio `exp(k + e)`, so the series is
/// geometric after the first term.
///
/// Panics if `i == 0`; terms are indexed from 1.
pub fn series_term(i: u32, prefs: &Preferences, process: &GrowthProcess, eps: f64) -> f64 {
    assert!(i >= 1, "series terms are indexed from 1");
    let co = coefficients(prefs, process);
    (co.k + f64::from(i - 1) * co.margin + co.b * eps).exp()
}

/// Natural log of the n-term partial sum of the discounted-dividend series.
///
/// Always finite for finite inputs, even deep in the divergent region where
/// the sum itself overflows f64; this is the value to use for divergence
/// diagnostics.
///
/// Panics if `n == 0`.
pub fn log_partial_sum(n: u64, prefs: &Preferences, process: &GrowthProcess, eps: f64) -> f64 {
    assert!(n >= 1, "partial sums need at least one term");
    let co = coefficients(prefs, process);
    let base = co.b * eps + co.k;
    if n == 1 {
        // the one-term sum is exactly its term; skipping the geometric
        // correction (identically zero here) keeps the equality bitwise
        return base;
    }
    let m = co.margin;
    let nf = n as f64;
    if m < 0.0 {
        // log of (1 - exp(n m)) / (1 - exp(m))
        base + (-(nf * m).exp_m1()).ln() - (-m.exp_m1()).ln()
    } else if m > 0.0 {
        // log of (exp(n m) - 1) / (exp(m) - 1), via ln(exp(x) - 1) = x + ln(1 - exp(-x))
        let ln_em1 = |x: f64| x + (-(-x).exp_m1()).ln();
        base + ln_em1(nf * m) - ln_em1(m)
    } else {
        base + nf.ln()
    }
}

/// The n-term partial sum itself. Saturates to `f64::INFINITY` when the true
/// value exceeds the f64 range (possible only in the divergent region).
pub fn partial_sum(n: u64, prefs: &Preferences, process: &GrowthProcess, eps: f64) -> f64 {
    log_partial_sum(n, prefs, process, eps).exp()
}

/// The unique stationary point of `ln beta_prime` in alpha:
/// `1 + mu_x (1 + rho^2) / (sigma2_x (1 + rho)^2)`.
///
/// For `mu_x > 0` this is the interior maximizer of the hump-shaped frontier.
/// Undefined without growth risk or at `rho = -1`, where the frontier has no
/// interior peak.
pub fn frontier_peak_alpha(process: &GrowthProcess) -> Result<f64> {
    let sigma2_x = process.observed_variance();
    if sigma2_x <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "sigma2_x",
            value: sigma2_x,
            reason: "the frontier has no interior peak without growth risk",
        });
    }
    if process.rho == -1.0 {
        return Err(PricerError::InvalidParameter {
            name: "rho",
            value: process.rho,
            reason: "the frontier peak is undefined at rho = -1",
        });
    }
    let rho = process.rho;
    let one_plus_rho = 1.0 + rho;
    Ok(1.0 + process.mu_x * (1.0 + rho * rho) / (sigma2_x * one_plus_rho * one_plus_rho))
}

/// Upper bracket for the inverse-frontier search.
const ALPHA_SEARCH_CAP: f64 = 1e4;

/// Absolute tolerance of the bisection, in alpha.
const ALPHA_TOL: f64 = 1e-9;

/// Largest risk aversion on the decreasing branch of the frontier at which
/// `beta_prime(alpha) >= beta`, i.e. how much risk aversion the model tolerates
/// before the given discount factor rules out equilibrium.
///
/// Returns `None` when `beta` lies above the frontier's peak (no alpha works);
/// errors if the decreasing branch has not crossed `beta` by alpha = 10^4.
/// The small-alpha crossing left of the peak is deliberately not reported:
/// the question this answers is how high alpha can go.
pub fn max_alpha_given_beta(beta: f64, process: &GrowthProcess) -> Result<Option<f64>> {
    if !beta.is_finite() || beta <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "beta",
            value: beta,
            reason: "discount factor must be positive and finite",
        });
    }
    let peak = frontier_peak_alpha(process)?;
    if beta > beta_prime(peak, process) {
        return Ok(None);
    }
    let mut hi = (peak * 2.0).max(peak + 1.0);
    while beta_prime(hi, process) >= beta {
        if hi >= ALPHA_SEARCH_CAP {
            return Err(PricerError::SearchCapExceeded {
                cap: ALPHA_SEARCH_CAP,
            });
        }
        hi = (hi * 2.0).min(ALPHA_SEARCH_CAP);
    }
    // invariant: beta_prime(lo) >= beta > beta_prime(hi) on the decreasing branch
    let mut lo = peak;
    while hi - lo > ALPHA_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if beta_prime(mid, process) >= beta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
