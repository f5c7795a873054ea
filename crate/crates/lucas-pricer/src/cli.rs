//! Command-line front door: pricing, frontier sweeps, premia, scenario
//! reports, simulation summaries, and the Monte Carlo verification suite.
//!
//! Output discipline: one datum per line as `name = value`, parameters at 6
//! decimals, computed quantities at 12, stable ordering, no timing or host
//! information. Every numeric printed comes from exactly one library call
//! (plus unit rendering such as log-to-percent); the same argv and seed give
//! byte-identical output at any worker count.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::closed_form::{
    beta_prime, coefficients, equilibrium_price, existence_margin, partial_sum,
    price_dividend_ratio, series_term,
};
use crate::model::{EconomyState, GrowthProcess, Preferences};
use crate::premium::equity_premium_log;
use crate::simulation::{
    empirical_premium_mc, estimate_mean, euler_residual_mc, euler_residual_mc_perturbed,
    price_path, realized_returns, series_term_mc, simulate_growth_paths, InnovationStart,
    SimConfig,
};
use crate::sweep::{
    alpha_range, emit_frontier_csv, emit_frontier_svg, frontier_grid, scenario_report,
    DEFAULT_RHOS, MP_MEAN_GROWTH, MP_OBSERVED_VARIANCE,
};
use crate::{PricerError, Result};

#[derive(Debug, Parser)]
#[command(
    name = "lucas-pricer",
    version,
    about = "Consumption-claim pricing in a lognormal endowment economy: closed forms, existence frontier, premia, and seeded Monte Carlo verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Growth-process parameters shared by most subcommands.
#[derive(Debug, Args)]
pub struct EconomyArgs {
    /// Mean of log consumption growth per period
    #[arg(long, default_value_t = MP_MEAN_GROWTH, allow_negative_numbers = true)]
    pub mu_x: f64,
    /// Observed variance of log consumption growth
    #[arg(long, default_value_t = MP_OBSERVED_VARIANCE)]
    pub sigma2_x: f64,
    /// Innovation variance (expert alternative to --sigma2-x)
    #[arg(long, conflicts_with = "sigma2_x")]
    pub sigma2_eps: Option<f64>,
    /// Moving-average coefficient on the lagged innovation
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rho: f64,
}

impl EconomyArgs {
    fn process(&self) -> Result<GrowthProcess> {
        match self.sigma2_eps {
            Some(s2) => GrowthProcess::new(self.mu_x, s2, self.rho),
            None => GrowthProcess::from_observed(self.mu_x, self.sigma2_x, self.rho),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Price the consumption claim at a state from the closed form
    Price {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Coefficient of relative risk aversion
        #[arg(long)]
        alpha: f64,
        /// Subjective discount factor
        #[arg(long)]
        beta: f64,
        /// Current consumption level
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Current innovation
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        eps: f64,
    },
    /// Existence frontier: point query, or grid sweep with CSV/SVG output
    Frontier {
        /// Mean of log consumption growth per period
        #[arg(long, default_value_t = MP_MEAN_GROWTH, allow_negative_numbers = true)]
        mu_x: f64,
        /// Observed variance of log consumption growth
        #[arg(long, default_value_t = MP_OBSERVED_VARIANCE)]
        sigma2_x: f64,
        /// Query a single risk-aversion level instead of sweeping a grid
        #[arg(long, conflicts_with_all = ["alpha_min", "alpha_max", "alpha_step", "csv", "svg"])]
        alpha: Option<f64>,
        /// Moving-average coefficient; repeatable
        #[arg(long, allow_negative_numbers = true)]
        rho: Vec<f64>,
        /// Grid start
        #[arg(long, default_value_t = 1.0)]
        alpha_min: f64,
        /// Grid end (inclusive)
        #[arg(long, default_value_t = 80.0)]
        alpha_max: f64,
        /// Grid spacing
        #[arg(long, default_value_t = 0.5)]
        alpha_step: f64,
        /// Write the grid as CSV to this path
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Write the grid as an SVG line plot to this path
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Premium formula value, as a log return and in percent
    Premium {
        /// Coefficient of relative risk aversion
        #[arg(long)]
        alpha: f64,
        /// Observed variance of log consumption growth
        #[arg(long, default_value_t = MP_OBSERVED_VARIANCE)]
        sigma2_x: f64,
    },
    /// Full scenario diagnostic with an existence verdict
    Report {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Coefficient of relative risk aversion
        #[arg(long)]
        alpha: f64,
        /// Subjective discount factor
        #[arg(long)]
        beta: f64,
        /// Also write the report as JSON to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Simulate growth paths and summarize sample moments
    Simulate {
        #[command(flatten)]
        economy: EconomyArgs,
        /// Number of independent paths
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// Periods per path
        #[arg(long, default_value_t = 10)]
        horizon: usize,
        /// Master seed for the per-path substreams
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Condition on a fixed pre-sample innovation instead of a stationary draw
        #[arg(long)]
        fixed_eps0: bool,
        /// Pre-sample innovation value, used with --fixed-eps0
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, requires = "fixed_eps0")]
        eps: f64,
        /// Risk aversion; with --beta, adds price and return summaries
        #[arg(long, requires = "beta")]
        alpha: Option<f64>,
        /// Discount factor; with --alpha, adds price and return summaries
        #[arg(long, requires = "alpha")]
        beta: Option<f64>,
    },
    /// Run the Monte Carlo oracle suite against the closed forms
    Verify {
        /// Master seed for the per-path substreams
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Draws per oracle check
        #[arg(long, default_value_t = 1_000_000)]
        paths: usize,
    },
}

/// Input parameter line: 6 decimals.
fn param<W: Write>(out: &mut W, name: &str, value: f64) -> std::io::Result<()> {
    writeln!(out, "{name} = {value:.6}")
}

/// Computed quantity line: 12 decimals; negative zero prints as zero.
fn datum<W: Write>(out: &mut W, name: &str, value: f64) -> std::io::Result<()> {
    let v = if value == 0.0 { 0.0 } else { value };
    writeln!(out, "{name} = {v:.12}")
}

fn echo_process<W: Write>(out: &mut W, process: &GrowthProcess) -> std::io::Result<()> {
    param(out, "mu_x", process.mu_x)?;
    param(out, "sigma2_x", process.observed_variance())?;
    param(out, "sigma2_eps", process.sigma2_eps)?;
    param(out, "rho", process.rho)
}

fn require_positive(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value <= 0.0 {
        return Err(PricerError::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

/// Dispatch a parsed invocation; returns the process exit code. Human-facing
/// diagnostics for expected failures go to standard error here; `Err` means
/// the run failed and the caller should exit 1 after printing the error.
pub fn run<W: Write>(cli: &Cli, out: &mut W) -> Result<i32> {
    match &cli.command {
        Command::Price {
            economy,
            alpha,
            beta,
            c,
            eps,
        } => run_price(economy, *alpha, *beta, *c, *eps, out),
        Command::Frontier {
            mu_x,
            sigma2_x,
            alpha,
            rho,
            alpha_min,
            alpha_max,
            alpha_step,
            csv,
            svg,
        } => run_frontier(
            *mu_x,
            *sigma2_x,
            *alpha,
            rho,
            (*alpha_min, *alpha_max, *alpha_step),
            csv.as_deref(),
            svg.as_deref(),
            out,
        ),
        Command::Premium { alpha, sigma2_x } => run_premium(*alpha, *sigma2_x, out),
        Command::Report {
            economy,
            alpha,
            beta,
            json,
        } => run_report(economy, *alpha, *beta, json.as_deref(), out),
        Command::Simulate {
            economy,
            paths,
            horizon,
            seed,
            fixed_eps0,
            eps,
            alpha,
            beta,
        } => run_simulate(
            economy,
            *paths,
            *horizon,
            *seed,
            *fixed_eps0,
            *eps,
            *alpha,
            *beta,
            out,
        ),
        Command::Verify { seed, paths } => run_verify(*seed, *paths, out),
    }
}

fn run_price<W: Write>(
    economy: &EconomyArgs,
    alpha: f64,
    beta: f64,
    c: f64,
    eps: f64,
    out: &mut W,
) -> Result<i32> {
    let prefs = Preferences::new(alpha, beta)?;
    let process = economy.process()?;
    let state = EconomyState::new(c, eps)?;
    let co = coefficients(&prefs, &process);
    let bp = beta_prime(prefs.alpha, &process);
    if co.a.is_none() {
        eprintln!(
            "price: beta = {:.6} is not below the existence frontier beta_prime = {bp:.12} \
             at alpha = {:.6}, rho = {:.6}",
            prefs.beta, prefs.alpha, process.rho
        );
        return Err(PricerError::NoEquilibrium { margin: co.margin });
    }
    param(out, "alpha", prefs.alpha)?;
    param(out, "beta", prefs.beta)?;
    echo_process(out, &process)?;
    param(out, "eps", state.eps)?;
    param(out, "c", state.c)?;
    datum(out, "k", co.k)?;
    datum(out, "e", co.e)?;
    datum(out, "b", co.b)?;
    datum(out, "margin", co.margin)?;
    datum(out, "beta_prime", bp)?;
    datum(out, "a", co.a.expect("checked above"))?;
    datum(out, "price_dividend_ratio", price_dividend_ratio(&co, state.eps)?)?;
    datum(out, "price", equilibrium_price(&co, &state)?)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_frontier<W: Write>(
    mu_x: f64,
    sigma2_x: f64,
    alpha: Option<f64>,
    rho: &[f64],
    (alpha_min, alpha_max, alpha_step): (f64, f64, f64),
    csv: Option<&std::path::Path>,
    svg: Option<&std::path::Path>,
    out: &mut W,
) -> Result<i32> {
    if let Some(alpha) = alpha {
        require_positive("alpha", alpha)?;
        let rhos: Vec<f64> = if rho.is_empty() { vec![0.0] } else { rho.to_vec() };
        param(out, "alpha", alpha)?;
        param(out, "mu_x", mu_x)?;
        param(out, "sigma2_x", sigma2_x)?;
        for &r in &rhos {
            let process = GrowthProcess::from_observed(mu_x, sigma2_x, r)?;
            param(out, "rho", r)?;
            datum(out, "beta_prime", beta_prime(alpha, &process))?;
        }
        return Ok(0);
    }
    let rhos: Vec<f64> = if rho.is_empty() {
        DEFAULT_RHOS.to_vec()
    } else {
        rho.to_vec()
    };
    let alphas = alpha_range(alpha_min, alpha_max, alpha_step)?;
    let base = GrowthProcess::from_observed(mu_x, sigma2_x, 0.0)?;
    let rows = frontier_grid(&alphas, &rhos, &base)?;
    if csv.is_none() && svg.is_none() {
        emit_frontier_csv(&rows, out)?;
        return Ok(0);
    }
    if let Some(path) = csv {
        let mut w = BufWriter::new(File::create(path)?);
        emit_frontier_csv(&rows, &mut w)?;
        w.flush()?;
    }
    if let Some(path) = svg {
        let mut w = BufWriter::new(File::create(path)?);
        emit_frontier_svg(&rows, &mut w)?;
        w.flush()?;
    }
    Ok(0)
}

fn run_premium<W: Write>(alpha: f64, sigma2_x: f64, out: &mut W) -> Result<i32> {
    require_positive("alpha", alpha)?;
    if !sigma2_x.is_finite() || sigma2_x < 0.0 {
        return Err(PricerError::InvalidParameter {
            name: "sigma2_x",
            value: sigma2_x,
            reason: "must be nonnegative and finite",
        });
    }
    param(out, "alpha", alpha)?;
    param(out, "sigma2_x", sigma2_x)?;
    let premium = equity_premium_log(alpha, sigma2_x);
    datum(out, "premium_log", premium)?;
    datum(out, "premium_percent", 100.0 * premium)?;
    Ok(0)
}

fn run_report<W: Write>(
    economy: &EconomyArgs,
    alpha: f64,
    beta: f64,
    json: Option<&std::path::Path>,
    out: &mut W,
) -> Result<i32> {
    let prefs = Preferences::new(alpha, beta)?;
    let process = economy.process()?;
    let report = scenario_report(&prefs, &process);
    param(out, "alpha", prefs.alpha)?;
    param(out, "beta", prefs.beta)?;
    echo_process(out, &process)?;
    datum(out, "k", report.coefficients.k)?;
    datum(out, "e", report.coefficients.e)?;
    datum(out, "b", report.coefficients.b)?;
    datum(out, "margin", report.coefficients.margin)?;
    datum(out, "beta_prime", report.beta_prime)?;
    writeln!(out, "exists = {}", report.exists)?;
    datum(out, "premium_log", report.premium_log)?;
    datum(out, "premium_percent", 100.0 * report.premium_log)?;
    if let Some(a) = report.coefficients.a {
        datum(out, "a", a)?;
    }
    if let Some(block) = report.return_block {
        datum(out, "risk_free_gross", block.risk_free_gross)?;
        datum(out, "expected_equity_gross", block.expected_equity_gross)?;
        datum(out, "equity_premium_log", block.log_premium)?;
    }
    writeln!(out, "verdict = {}", report.verdict)?;
    if let Some(path) = json {
        let mut w = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut w, &report).map_err(std::io::Error::from)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn run_simulate<W: Write>(
    economy: &EconomyArgs,
    paths: usize,
    horizon: usize,
    seed: u64,
    fixed_eps0: bool,
    eps: f64,
    alpha: Option<f64>,
    beta: Option<f64>,
    out: &mut W,
) -> Result<i32> {
    let process = economy.process()?;
    let start = if fixed_eps0 {
        InnovationStart::Fixed(eps)
    } else {
        InnovationStart::Stationary
    };
    let cfg = SimConfig::new(paths, horizon, seed)?.with_start(start);
    let prefs = match (alpha, beta) {
        (Some(a), Some(b)) => Some(Preferences::new(a, b)?),
        _ => None,
    };
    writeln!(out, "paths = {}", cfg.n_paths)?;
    writeln!(out, "horizon = {}", cfg.horizon)?;
    writeln!(out, "seed = {}", cfg.master_seed)?;
    match cfg.start {
        InnovationStart::Stationary => writeln!(out, "start = stationary")?,
        InnovationStart::Fixed(eps0) => {
            writeln!(out, "start = fixed")?;
            param(out, "eps0", eps0)?;
        }
    }
    echo_process(out, &process)?;
    if let Some(p) = &prefs {
        param(out, "alpha", p.alpha)?;
        param(out, "beta", p.beta)?;
    }
    let samples = simulate_growth_paths(&process, &cfg);
    let growths: Vec<f64> = samples
        .iter()
        .flat_map(|p| p.growths.iter().copied())
        .collect();
    let g = estimate_mean(&growths);
    datum(out, "mean_growth", g.mean)?;
    datum(out, "se_mean_growth", g.std_error)?;
    if let Some(p) = &prefs {
        let co = coefficients(p, &process);
        if co.a.is_none() {
            eprintln!(
                "simulate: no equilibrium at alpha = {:.6}, beta = {:.6} \
                 (existence frontier beta_prime = {:.12}); price summaries unavailable",
                p.alpha,
                p.beta,
                beta_prime(p.alpha, &process)
            );
            return Err(PricerError::NoEquilibrium { margin: co.margin });
        }
        let mut pd = Vec::with_capacity(samples.len() * (horizon + 1));
        let mut rets = Vec::with_capacity(samples.len() * horizon);
        for sample in &samples {
            let prices = price_path(&co, sample)?;
            for &e in &sample.innovations {
                pd.push(price_dividend_ratio(&co, e)?);
            }
            rets.extend(realized_returns(&prices, &sample.consumptions)?);
        }
        let pd_est = estimate_mean(&pd);
        let ret_est = estimate_mean(&rets);
        datum(out, "mean_price_dividend", pd_est.mean)?;
        datum(out, "se_mean_price_dividend", pd_est.std_error)?;
        datum(out, "mean_equity_return", ret_est.mean)?;
        datum(out, "se_mean_equity_return", ret_est.std_error)?;
    }
    Ok(0)
}

/// Parameter sets exercised by `verify`: (beta, alpha, rho), all at the
/// default calibration. They cover the benign case, both signs of serial
/// correlation, extreme risk aversion with a low discount factor, and log
/// utility.
const VERIFY_SETS: [(f64, f64, f64); 5] = [
    (0.95, 2.0, 0.0),
    (0.9, 5.0, 0.5),
    (0.97, 10.0, -0.15),
    (0.3, 55.0, 0.0),
    (0.95, 1.0, 0.0),
];

/// Innovation the oracle checks condition on. Nonzero so that a wrong
/// innovation loading in the price shifts the Euler residual at first order:
/// at eps = 0 the perturbed-loading control is nearly invisible (its detection
/// power there is a few standard errors at one million draws), while here it
/// fails by tens to hundreds.
const VERIFY_STATE_EPS: f64 = 0.05;

const VERIFY_SERIES_INDICES: [u32; 3] = [1, 2, 5];

fn emit_check<W: Write>(
    out: &mut W,
    ok: bool,
    label: &str,
    detail: &str,
    passed: &mut usize,
    failed: &mut usize,
) -> std::io::Result<()> {
    if ok {
        *passed += 1;
    } else {
        *failed += 1;
    }
    writeln!(
        out,
        "{} {label:<24} {detail}",
        if ok { "PASS" } else { "FAIL" }
    )
}

fn run_verify<W: Write>(seed: u64, paths: usize, out: &mut W) -> Result<i32> {
    let mut passed = 0usize;
    let mut failed = 0usize;
    writeln!(out, "seed = {seed}")?;
    writeln!(out, "paths = {paths}")?;
    param(out, "state_eps", VERIFY_STATE_EPS)?;
    let cfg = SimConfig::new(paths, 1, seed)?;
    let state = EconomyState::new(1.0, VERIFY_STATE_EPS)?;
    for (idx, &(beta, alpha, rho)) in VERIFY_SETS.iter().enumerate() {
        let set = idx + 1;
        let prefs = Preferences::new(alpha, beta)?;
        let process = GrowthProcess::from_observed(MP_MEAN_GROWTH, MP_OBSERVED_VARIANCE, rho)?;
        let co = coefficients(&prefs, &process);
        let tag = format!("set={set} beta={beta:.2} alpha={alpha:.0} rho={rho:+.2}");

        let est = euler_residual_mc(&prefs, &process, &state, &cfg)?;
        emit_check(
            out,
            est.within_3se_of(0.0),
            "euler_residual",
            &format!("{tag} mean={:+.3e} t={:+.2}", est.mean, est.t_stat(0.0)),
            &mut passed,
            &mut failed,
        )?;
        if set == 1 {
            let ctrl = euler_residual_mc_perturbed(&prefs, &process, &state, &cfg, 0.1)?;
            emit_check(
                out,
                ctrl.t_stat(0.0).abs() > 5.0,
                "perturbed_control",
                &format!(
                    "{tag} delta_b=0.10 t={:+.2} (must exceed 5 in magnitude)",
                    ctrl.t_stat(0.0)
                ),
                &mut passed,
                &mut failed,
            )?;
        }
        for &i in &VERIFY_SERIES_INDICES {
            let est = series_term_mc(i, &prefs, &process, &state, &cfg);
            let target = series_term(i, &prefs, &process, state.eps);
            emit_check(
                out,
                est.within_3se_of(target),
                "series_term",
                &format!(
                    "{tag} i={i} mc={:.6e} analytic={:.6e} t={:+.2}",
                    est.mean,
                    target,
                    est.t_stat(target)
                ),
                &mut passed,
                &mut failed,
            )?;
        }
        if rho == 0.0 {
            let est = empirical_premium_mc(&prefs, &process, &cfg)?;
            let target = equity_premium_log(prefs.alpha, process.observed_variance());
            emit_check(
                out,
                est.within_3se_of(target),
                "premium",
                &format!(
                    "{tag} mc={:.6} analytic={:.6} t={:+.2}",
                    est.mean,
                    target,
                    est.t_stat(target)
                ),
                &mut passed,
                &mut failed,
            )?;
        }
        let pd = price_dividend_ratio(&co, state.eps)?;
        let ps = partial_sum(1000, &prefs, &process, state.eps);
        let rel = ((ps - pd) / pd).abs();
        emit_check(
            out,
            rel <= 1e-10,
            "partial_sum_convergence",
            &format!("{tag} rel_err={rel:.2e} (must be <= 1e-10)"),
            &mut passed,
            &mut failed,
        )?;
    }
    // divergence detection: a mildly supercritical point whose partial sums
    // are still representable, so growth past 1e12 is observable directly
    let div_prefs = Preferences::new(30.0, 0.995)?;
    let div_process = GrowthProcess::from_observed(MP_MEAN_GROWTH, MP_OBSERVED_VARIANCE, 0.0)?;
    let margin = existence_margin(&div_prefs, &div_process);
    let ps = partial_sum(20_000, &div_prefs, &div_process, 0.0);
    emit_check(
        out,
        margin >= 0.01 && ps.is_finite() && ps > 1e12,
        "divergence_detection",
        &format!(
            "beta={:.3} alpha={:.0} rho={:+.2} margin={margin:+.6} partial_sum_20000={ps:.3e} (must exceed 1e12, finite)",
            div_prefs.beta, div_prefs.alpha, div_process.rho
        ),
        &mut passed,
        &mut failed,
    )?;
    let total = passed + failed;
    if failed == 0 {
        writeln!(out, "verify: {passed}/{total} checks passed")?;
        Ok(0)
    } else {
        writeln!(out, "verify: {passed}/{total} checks passed, {failed} failed")?;
        Ok(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(args).expect("should parse")
    }

    fn run_capture(args: &[&str]) -> (i32, String) {
        let cli = parse(args);
        let mut buf = Vec::new();
        let code = run(&cli, &mut buf).expect("should run");
        (code, String::from_utf8(buf).expect("utf8 output"))
    }

    #[test]
    fn frontier_defaults_describe_the_standard_sweep() {
        let cli = parse(&["lucas-pricer", "frontier"]);
        match cli.command {
            Command::Frontier {
                mu_x,
                sigma2_x,
                alpha,
                rho,
                alpha_min,
                alpha_max,
                alpha_step,
                csv,
                svg,
            } => {
                assert_eq!(mu_x, 0.0172);
                assert_eq!(sigma2_x, 0.00125);
                assert!(alpha.is_none());
                assert!(rho.is_empty());
                assert_eq!((alpha_min, alpha_max, alpha_step), (1.0, 80.0, 0.5));
                assert!(csv.is_none() && svg.is_none());
            }
            _ => panic!("wrong subcommand"),
        }
    }

    #[test]
    fn rejects_unknown_flags_and_missing_required() {
        assert!(Cli::try_parse_from(["lucas-pricer", "price", "--bogus", "1"]).is_err());
        assert!(Cli::try_parse_from(["lucas-pricer", "price", "--alpha", "2"]).is_err());
        assert!(Cli::try_parse_from(["lucas-pricer", "nonsense"]).is_err());
    }

    #[test]
    fn point_query_conflicts_with_grid_flags() {
        assert!(Cli::try_parse_from([
            "lucas-pricer",
            "frontier",
            "--alpha",
            "55",
            "--alpha-min",
            "2"
        ])
        .is_err());
    }

    #[test]
    fn simulate_price_flags_come_in_pairs() {
        assert!(Cli::try_parse_from(["lucas-pricer", "simulate", "--alpha", "2"]).is_err());
        assert!(Cli::try_parse_from(["lucas-pricer", "simulate", "--beta", "0.9"]).is_err());
        assert!(Cli::try_parse_from(["lucas-pricer", "simulate", "--eps", "0.1"]).is_err());
    }

    #[test]
    fn expert_variance_flag_conflicts_with_observed() {
        assert!(Cli::try_parse_from([
            "lucas-pricer",
            "price",
            "--alpha",
            "2",
            "--beta",
            "0.95",
            "--sigma2-x",
            "0.001",
            "--sigma2-eps",
            "0.001"
        ])
        .is_err());
    }

    #[test]
    fn price_prints_the_closed_form_block() {
        let (code, text) = run_capture(&[
            "lucas-pricer",
            "price",
            "--alpha",
            "2",
            "--beta",
            "0.95",
        ]);
        assert_eq!(code, 0);
        assert!(text.contains("alpha = 2.000000"));
        assert!(text.contains("sigma2_eps = 0.001250"));
        assert!(text.contains("a = 14.2400759320"));
        assert!(text.contains("price = 14.2400759320"));
        assert!(text.contains("b = 0.000000000000"), "negative zero must not leak: {text}");
    }

    #[test]
    fn price_log_utility_anchor() {
        let (_, text) = run_capture(&[
            "lucas-pricer",
            "price",
            "--alpha",
            "1",
            "--beta",
            "0.95",
        ]);
        assert!(text.contains("a = 19.000000000000"));
    }

    #[test]
    fn price_fails_cleanly_without_equilibrium() {
        let cli = parse(&["lucas-pricer", "price", "--alpha", "55", "--beta", "0.9"]);
        let mut buf = Vec::new();
        match run(&cli, &mut buf) {
            Err(PricerError::NoEquilibrium { margin }) => assert!(margin >= 0.0),
            other => panic!("expected NoEquilibrium, got {other:?}"),
        }
        assert!(buf.is_empty(), "no partial output on failure");
    }

    #[test]
    fn premium_prints_both_unit_renderings() {
        let (code, text) = run_capture(&["lucas-pricer", "premium", "--alpha", "30"]);
        assert_eq!(code, 0);
        assert!(text.contains("premium_log = 0.037500000000"));
        assert!(text.contains("premium_percent = 3.750000000000"));
    }

    #[test]
    fn frontier_point_query_matches_published_value() {
        let (code, text) = run_capture(&[
            "lucas-pricer",
            "frontier",
            "--alpha",
            "55",
            "--rho",
            "0.5",
        ]);
        assert_eq!(code, 0);
        assert!(text.contains("beta_prime = 0.095207172370"), "{text}");
    }

    #[test]
    fn frontier_point_query_defaults_to_iid() {
        let (_, text) = run_capture(&["lucas-pricer", "frontier", "--alpha", "55"]);
        assert!(text.contains("rho = 0.000000"));
        assert!(text.contains("beta_prime = 0.409139133942"));
    }

    #[test]
    fn frontier_grid_streams_csv_to_stdout() {
        let (code, text) = run_capture(&["lucas-pricer", "frontier"]);
        assert_eq!(code, 0);
        assert!(text.starts_with("alpha,rho,beta_prime\n"));
        assert_eq!(text.lines().count(), 478);
    }

    #[test]
    fn report_labels_misleading_premium_but_exits_zero() {
        let (code, text) = run_capture(&[
            "lucas-pricer",
            "report",
            "--alpha",
            "55",
            "--beta",
            "0.9",
        ]);
        assert_eq!(code, 0, "the verdict is output, not process failure");
        assert!(text.contains("exists = false"));
        assert!(text.contains("premium_log = 0.068750000000"));
        assert!(text.contains("verdict = MISLEADING"));
        assert!(!text.contains("risk_free_gross"));
        assert!(!text.contains("\na = "));
    }

    #[test]
    fn report_populates_returns_for_valid_iid_scenario() {
        let (code, text) = run_capture(&[
            "lucas-pricer",
            "report",
            "--alpha",
            "30",
            "--beta",
            "0.9",
        ]);
        assert_eq!(code, 0);
        assert!(text.contains("exists = true"));
        assert!(text.contains("premium_percent = 3.750000000000"));
        assert!(text.contains("a = 12.2396366394"));
        assert!(text.contains("risk_free_gross = 1.060627289522"));
        assert!(text.contains("expected_equity_gross = 1.101155976414"));
        assert!(text.contains("equity_premium_log = 0.037500000000"));
        assert!(text.contains("verdict = VALID"));
    }

    #[test]
    fn report_writes_json_with_stable_fields() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        let cli = parse(&[
            "lucas-pricer",
            "report",
            "--alpha",
            "55",
            "--beta",
            "0.9",
            "--json",
            path.to_str().unwrap(),
        ]);
        let mut buf = Vec::new();
        assert_eq!(run(&cli, &mut buf).unwrap(), 0);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.ends_with('\n'));
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"], "MISLEADING");
        assert_eq!(v["exists"], false);
        assert_eq!(v["coefficients"]["a"], serde_json::Value::Null);
        assert!((v["premium_log"].as_f64().unwrap() - 0.06875).abs() < 1e-15);
    }

    #[test]
    fn simulate_summarizes_growth_and_prices() {
        let (code, text) = run_capture(&[
            "lucas-pricer",
            "simulate",
            "--paths",
            "200",
            "--horizon",
            "4",
            "--seed",
            "1",
            "--alpha",
            "2",
            "--beta",
            "0.95",
        ]);
        assert_eq!(code, 0);
        assert!(text.contains("start = stationary"));
        assert!(text.contains("mean_growth = "));
        assert!(text.contains("mean_price_dividend = "));
        assert!(text.contains("mean_equity_return = "));
    }

    #[test]
    fn simulate_fixed_start_echoes_the_conditioning() {
        let (_, text) = run_capture(&[
            "lucas-pricer",
            "simulate",
            "--paths",
            "10",
            "--horizon",
            "2",
            "--fixed-eps0",
            "--eps",
            "0.05",
        ]);
        assert!(text.contains("start = fixed"));
        assert!(text.contains("eps0 = 0.050000"));
    }

    #[test]
    fn verify_emits_one_line_per_check_and_is_deterministic() {
        let args = ["lucas-pricer", "verify", "--paths", "2000", "--seed", "1"];
        let cli = parse(&args);
        let mut first = Vec::new();
        let code_first = run(&cli, &mut first).unwrap();
        let mut second = Vec::new();
        let code_second = run(&parse(&args), &mut second).unwrap();
        assert_eq!(first, second, "same argv and seed must reproduce bytes");
        assert_eq!(code_first, code_second);
        let text = String::from_utf8(first).unwrap();
        let checks = text
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count();
        assert_eq!(checks, 30);
        assert!(text.lines().last().unwrap().starts_with("verify: "));
    }

    #[test]
    fn verify_exit_code_tracks_failures() {
        // at a reasonable draw count all thirty checks pass
        let (code, text) = run_capture(&[
            "lucas-pricer",
            "verify",
            "--paths",
            "200000",
            "--seed",
            "7",
        ]);
        let failed = text.lines().filter(|l| l.starts_with("FAIL")).count();
        assert_eq!(code, i32::from(failed > 0));
        assert!(text.contains("divergence_detection"));
    }
}
