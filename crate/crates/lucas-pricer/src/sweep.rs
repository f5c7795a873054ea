//! Parameter sweeps over the existence frontier, scenario reports, and file
//! emission (CSV table, SVG line plot).
//!
//! Sweeps hold the observed growth variance fixed while the MA coefficient
//! varies: each rho level re-derives its innovation variance so that curves
//! are compared at the same calibrated observable.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::closed_form::{beta_prime, coefficients, PriceCoefficients};
use crate::model::{GrowthProcess, Preferences};
use crate::premium::{equity_premium_log, return_block_iid, ReturnBlock, Verdict};
use crate::{PricerError, Result};

/// Historical US annual consumption-growth calibration (Mehra-Prescott).
pub const MP_MEAN_GROWTH: f64 = 0.0172;
/// Observed variance of annual log consumption growth, same calibration.
pub const MP_OBSERVED_VARIANCE: f64 = 0.00125;
/// MA coefficients plotted by default: negative, zero, positive persistence.
pub const DEFAULT_RHOS: [f64; 3] = [-0.15, 0.0, 0.5];

/// One point of the existence frontier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontierRow {
    pub alpha: f64,
    pub rho: f64,
    pub beta_prime: f64,
}

/// Everything the pricing procedure says about one parameter point.
///
/// The premium formula value is always present; the return block only when it
/// is meaningful (iid growth and an existing equilibrium). Field order is the
/// JSON field order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub preferences: Preferences,
    pub process: GrowthProcess,
    pub coefficients: PriceCoefficients,
    /// Frontier value at this alpha: largest discount factor with equilibrium.
    pub beta_prime: f64,
    pub exists: bool,
    /// The premium formula `alpha * sigma2_x`, computed unconditionally.
    pub premium_log: f64,
    pub return_block: Option<ReturnBlock>,
    pub verdict: Verdict,
}

/// Evenly spaced grid `min, min + step, ...` up to and including `max` (with
/// a half-ulp-scale slack so that an exact multiple lands on `max`).
pub fn alpha_range(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    for (name, value) in [("alpha_min", min), ("alpha_max", max), ("alpha_step", step)] {
        if !value.is_finite() {
            return Err(PricerError::InvalidParameter {
                name,
                value,
                reason: "must be finite",
            });
        }
    }
    if min <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "alpha_min",
            value: min,
            reason: "risk aversion grid must be positive",
        });
    }
    if max < min {
        return Err(PricerError::InvalidParameter {
            name: "alpha_max",
            value: max,
            reason: "must be at least alpha_min",
        });
    }
    if step <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "alpha_step",
            value: step,
            reason: "must be positive",
        });
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    if count > 5_000_000 {
        return Err(PricerError::InvalidParameter {
            name: "alpha_step",
            value: step,
            reason: "grid exceeds 5e6 points",
        });
    }
    Ok((0..count).map(|i| min + step * i as f64).collect())
}

/// Frontier values over the cartesian grid, rho outer and alpha inner.
///
/// `base` supplies the mean and the observed variance; the innovation
/// variance is re-derived for every rho level so the observable stays fixed.
pub fn frontier_grid(
    alpha_grid: &[f64],
    rho_list: &[f64],
    base: &GrowthProcess,
) -> Result<Vec<FrontierRow>> {
    if alpha_grid.is_empty() || rho_list.is_empty() {
        return Err(PricerError::DegenerateGrid("empty frontier grid"));
    }
    for &alpha in alpha_grid {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(PricerError::InvalidParameter {
                name: "alpha",
                value: alpha,
                reason: "grid alphas must be positive and finite",
            });
        }
    }
    let sigma2_x = base.observed_variance();
    let procs = rho_list
        .iter()
        .map(|&rho| GrowthProcess::from_observed(base.mu_x, sigma2_x, rho))
        .collect::<Result<Vec<_>>>()?;
    let n_alpha = alpha_grid.len();
    Ok((0..rho_list.len() * n_alpha)
        .into_par_iter()
        .map(|idx| {
            let (ri, ai) = (idx / n_alpha, idx % n_alpha);
            FrontierRow {
                alpha: alpha_grid[ai],
                rho: rho_list[ri],
                beta_prime: beta_prime(alpha_grid[ai], &procs[ri]),
            }
        })
        .collect())
}

/// The default frontier sweep: alpha from 1 to 80 in steps of 0.5, the three
/// default rho levels, Mehra-Prescott calibration.
pub fn default_frontier_grid() -> Vec<FrontierRow> {
    let alphas = alpha_range(1.0, 80.0, 0.5).expect("static grid bounds");
    let base = GrowthProcess::from_observed(MP_MEAN_GROWTH, MP_OBSERVED_VARIANCE, 0.0)
        .expect("static calibration");
    frontier_grid(&alphas, &DEFAULT_RHOS, &base).expect("static grid")
}

/// Full diagnostic report for one parameter point. Non-existence is data
/// here, not an error: the report carries the verdict.
pub fn scenario_report(prefs: &Preferences, process: &GrowthProcess) -> ScenarioReport {
    let co = coefficients(prefs, process);
    let exists = co.margin < 0.0;
    let return_block = if exists && process.rho == 0.0 {
        Some(return_block_iid(prefs, process).expect("iid and margin < 0"))
    } else {
        None
    };
    ScenarioReport {
        preferences: *prefs,
        process: *process,
        coefficients: co,
        beta_prime: beta_prime(prefs.alpha, process),
        exists,
        premium_log: equity_premium_log(prefs.alpha, process.observed_variance()),
        return_block,
        verdict: if exists {
            Verdict::Valid
        } else {
            Verdict::Misleading
        },
    }
}

/// Write the frontier table: header `alpha,rho,beta_prime`, then one row per
/// point as `{:.6},{:.6},{:.12}`, `\n` line endings, exactly one final
/// newline. Re-emitting parsed rows reproduces the bytes.
pub fn emit_frontier_csv<W: Write>(rows: &[FrontierRow], out: &mut W) -> Result<()> {
    writeln!(out, "alpha,rho,beta_prime")?;
    for r in rows {
        writeln!(out, "{:.6},{:.6},{:.12}", r.alpha, r.rho, r.beta_prime)?;
    }
    Ok(())
}

const SVG_WIDTH: f64 = 720.0;
const SVG_HEIGHT: f64 = 480.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_TOP: f64 = 20.0;
const PLOT_WIDTH: f64 = 630.0;
const PLOT_HEIGHT: f64 = 410.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
];

/// Write a standalone SVG line plot of the frontier: one polyline per rho
/// level (in order of first appearance), axes labeled by the variables they
/// carry, and a legend.
pub fn emit_frontier_svg<W: Write>(rows: &[FrontierRow], out: &mut W) -> Result<()> {
    let mut groups: Vec<(f64, Vec<&FrontierRow>)> = Vec::new();
    for row in rows {
        match groups.iter_mut().find(|(rho, _)| *rho == row.rho) {
            Some((_, members)) => members.push(row),
            None => groups.push((row.rho, vec![row])),
        }
    }
    if groups.is_empty() {
        return Err(PricerError::DegenerateGrid("no frontier rows to plot"));
    }
    for (_, members) in &groups {
        let mut alphas: Vec<f64> = members.iter().map(|r| r.alpha).collect();
        alphas.sort_by(f64::total_cmp);
        alphas.dedup();
        if alphas.len() < 2 {
            return Err(PricerError::DegenerateGrid(
                "need at least two distinct alphas per rho to draw a curve",
            ));
        }
    }
    let a_min = rows.iter().map(|r| r.alpha).fold(f64::INFINITY, f64::min);
    let a_max = rows.iter().map(|r| r.alpha).fold(f64::NEG_INFINITY, f64::max);
    let y_max = rows
        .iter()
        .map(|r| r.beta_prime)
        .fold(f64::NEG_INFINITY, f64::max)
        * 1.05;
    let x = |alpha: f64| MARGIN_LEFT + (alpha - a_min) / (a_max - a_min) * PLOT_WIDTH;
    let y = |v: f64| MARGIN_TOP + PLOT_HEIGHT - v / y_max * PLOT_HEIGHT;
    let x_axis = MARGIN_TOP + PLOT_HEIGHT;

    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}" viewBox="0 0 {SVG_WIDTH} {SVG_HEIGHT}">"#
    )?;
    writeln!(
        out,
        r#"<rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>"#
    )?;
    writeln!(
        out,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{x_axis}" stroke="black"/>"#
    )?;
    writeln!(
        out,
        r#"<line x1="{MARGIN_LEFT}" y1="{x_axis}" x2="{}" y2="{x_axis}" stroke="black"/>"#,
        MARGIN_LEFT + PLOT_WIDTH
    )?;
    for i in 0..=4 {
        let frac = f64::from(i) / 4.0;
        let tick_alpha = a_min + frac * (a_max - a_min);
        let tx = x(tick_alpha);
        writeln!(
            out,
            r#"<line x1="{tx:.2}" y1="{x_axis}" x2="{tx:.2}" y2="{}" stroke="black"/>"#,
            x_axis + 5.0
        )?;
        writeln!(
            out,
            r#"<text x="{tx:.2}" y="{}" font-size="12" text-anchor="middle">{tick_alpha:.1}</text>"#,
            x_axis + 20.0
        )?;
        let tick_v = frac * y_max;
        let ty = y(tick_v);
        writeln!(
            out,
            r#"<line x1="{}" y1="{ty:.2}" x2="{MARGIN_LEFT}" y2="{ty:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{:.2}" font-size="12" text-anchor="end">{tick_v:.3}</text>"#,
            MARGIN_LEFT - 9.0,
            ty + 4.0
        )?;
    }
    writeln!(
        out,
        r#"<text x="{:.2}" y="{}" font-size="14" text-anchor="middle">α</text>"#,
        MARGIN_LEFT + PLOT_WIDTH / 2.0,
        SVG_HEIGHT - 12.0
    )?;
    writeln!(
        out,
        r#"<text transform="rotate(-90)" x="{:.2}" y="16" font-size="14" text-anchor="middle">β′</text>"#,
        -(MARGIN_TOP + PLOT_HEIGHT / 2.0)
    )?;
    for (gi, (_, members)) in groups.iter().enumerate() {
        let color = PALETTE[gi % PALETTE.len()];
        let points: Vec<String> = members
            .iter()
            .map(|r| format!("{:.2},{:.2}", x(r.alpha), y(r.beta_prime)))
            .collect();
        writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        )?;
    }
    for (gi, (rho, _)) in groups.iter().enumerate() {
        let color = PALETTE[gi % PALETTE.len()];
        let ly = MARGIN_TOP + 16.0 + 22.0 * gi as f64;
        let lx = MARGIN_LEFT + PLOT_WIDTH - 130.0;
        writeln!(
            out,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="1.5"/>"#,
            lx + 28.0
        )?;
        writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="13">ρ = {rho}</text>"#,
            lx + 34.0,
            ly + 4.0
        )?;
    }
    writeln!(out, "</svg>")?;
    Ok(())
}
