//! Command-line frontend.
//!
//! Reports go to standard error; data rows go to standard output or
//! `--out PATH`. Exit codes: 0 success, 1 configuration error, 2 domain
//! error, 3 verification failure.

pub mod config;
pub mod output;
pub mod verify;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;
use thiserror::Error;

use crate::budget_dynamics::{
    stability_report_for, BudgetParams, FixedPoint, Recurrence, RecurrenceMode, StabilityReport,
    TaxationRange,
};
use crate::error::Error;
use crate::numeric_oracles::{linspace, rk4_integrate, IntegrationSpec};
use crate::sweep_engine::{
    check_grid_domain, sweep, BudgetBinding, ModelBinding, ParamGrid, Schedule, SweepResult,
    ValueBinding, ValueSweepParams, WageBinding, WageSweepParams,
};
use crate::value_feedback::{
    beta_from_coeffs, default_homog_coeff, limit_probe, market_value_any, ode_rhs, BetaParam,
    FeedbackCoefficients, FeedbackRegime,
};
use crate::wage_profit::{
    optimal_wage, profit_constant, profit_curve, profit_derivatives, CostStructure, WageBound,
    WageOptimum,
};

use config::{Format, RunConfig, SweepModel};
use output::{Cell, Table};

/// Coefficient used for the `β = 1` family when none is configured; the
/// resulting curve passes through `V_m = V_t = 1`.
pub const BETA_ONE_DEFAULT_COEFF: f64 = 1.0;

/// Horizon for `budget` when neither the config nor `--horizon` sets one.
pub const DEFAULT_HORIZON: usize = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) => CliError::Config(e.to_string()),
            _ => CliError::Domain(e.to_string()),
        }
    }
}

fn domain_err(e: Error) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "econ-feedback",
    version,
    about = "Feedback-model analysis and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// TOML run configuration
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write data rows here instead of standard output [config: output.path]
    #[arg(long, value_name = "PATH")]
    pub out: Option<String>,
    /// Data format [config: output.format; default: csv]
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Net profit against labor cost and the constrained optimum
    Wage {
        #[command(flatten)]
        common: Common,
    },
    /// Market value against true value: analytic curve with RK4 comparison
    Value {
        #[command(flatten)]
        common: Common,
    },
    /// Budget recurrence trajectory and stability report
    Budget {
        #[command(flatten)]
        common: Common,
        /// Recurrence semantics [config: budget.mode; default: level]
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Number of years to iterate [config: budget.horizon; default: 10]
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Parameter sweep or stability-region raster
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Recurrence semantics for budget sweeps [config: sweep.mode; default: level]
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Run every numerical cross-check and print pass/fail per check
    Verify {
        #[command(flatten)]
        common: Common,
        /// Override a check tolerance, e.g. rk4_agreement=1e-8 [config: verification.NAME]
        #[arg(long, value_name = "NAME=VALUE")]
        tolerance: Vec<String>,
        /// List the checks without running them
        #[arg(long)]
        list: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    Level,
    Incremental,
}

impl From<ModeArg> for RecurrenceMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Level => RecurrenceMode::Level,
            ModeArg::Incremental => RecurrenceMode::Incremental,
        }
    }
}

/// Short fixed-precision rendering for report lines.
pub(crate) fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x != 0.0 && (x.abs() >= 1e9 || x.abs() < 1e-3) {
        return format!("{x:.6e}");
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

struct Ctx<'a> {
    report: &'a mut dyn Write,
    format: Format,
    out: Option<String>,
}

impl Ctx<'_> {
    fn line(&mut self, s: impl AsRef<str>) {
        let _ = writeln!(self.report, "{}", s.as_ref());
    }

    fn emit(&self, table: &Table) -> Result<(), CliError> {
        table.emit(self.format, self.out.as_deref())
    }
}

fn context<'a>(common: &Common, cfg: &RunConfig, report: &'a mut dyn Write) -> Ctx<'a> {
    Ctx {
        report,
        format: common.format.or(cfg.output.format).unwrap_or_default(),
        out: common.out.clone().or_else(|| cfg.output.path.clone()),
    }
}

fn require<T>(section: Option<T>, name: &str) -> Result<T, CliError> {
    section.ok_or_else(|| CliError::Config(format!("config needs a [{name}] section")))
}

/// Parse arguments and run; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let mut stderr = std::io::stderr().lock();
    match run(cli, &mut stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli, report: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Wage { common } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let mut ctx = context(&common, &cfg, report);
            cmd_wage(&cfg, &mut ctx)
        }
        Command::Value { common } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let mut ctx = context(&common, &cfg, report);
            cmd_value(&cfg, &mut ctx)
        }
        Command::Budget {
            common,
            mode,
            horizon,
        } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let mut ctx = context(&common, &cfg, report);
            cmd_budget(&cfg, mode.map(Into::into), horizon, &mut ctx)
        }
        Command::Sweep { common, mode } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let mut ctx = context(&common, &cfg, report);
            cmd_sweep(&cfg, mode.map(Into::into), &mut ctx)
        }
        Command::Verify {
            common,
            tolerance,
            list,
        } => {
            let cfg = RunConfig::load(common.config.as_deref())?;
            let mut ctx = context(&common, &cfg, report);
            cmd_verify(&cfg, &tolerance, list, &mut ctx)
        }
    }
}

fn cmd_wage(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let w = require(cfg.wage.as_ref(), "wage")?;
    let cs = CostStructure::new(w.max_market_price, w.labor_weight, w.other_factors.clone())
        .map_err(|e| CliError::Config(format!("config [wage]: {e}")))?;
    let bound =
        WageBound::new(w.w0).map_err(|e| CliError::Config(format!("config [wage]: {e}")))?;
    let c = profit_constant(&cs).map_err(domain_err)?;

    ctx.line("wage model: NP(w) = C/w - alpha_1");
    ctx.line(format!("  C={}", fmt_num(c)));
    ctx.line(format!("  alpha_1={}", fmt_num(cs.labor_weight())));
    match optimal_wage(&cs, bound).map_err(domain_err)? {
        WageOptimum::Bounded(p) => {
            ctx.line(format!(
                "  optimum at the lower bound: w*={} NP*={}",
                fmt_num(p.wage),
                fmt_num(p.net_profit)
            ));
            let (d1, d2) = profit_derivatives(&cs, p.wage).map_err(domain_err)?;
            ctx.line(format!(
                "  derivatives at w*: dNP/dw={} (<= 0) d2NP/dw2={} (>= 0)",
                fmt_num(d1),
                fmt_num(d2)
            ));
        }
        WageOptimum::Unbounded => {
            ctx.line("  optimum: unbounded (slavery regime): w0 = 0 and NP -> +inf as w -> 0+");
        }
    }
    if cs.labor_weight() > 0.0 {
        ctx.line(format!(
            "  break-even wage C/alpha_1={}",
            fmt_num(c / cs.labor_weight())
        ));
    }

    let mut table = Table::new(
        ["wage", "net_profit", "d_first", "d_second"],
        json!({ "command": "wage", "constant": c, "w0": w.w0 }),
    );
    if let Some(curve) = &w.curve {
        if curve.points == 0 || !(curve.start <= curve.end) {
            return Err(CliError::Config(
                "config [wage.curve]: need points >= 1 and start <= end".into(),
            ));
        }
        let grid = linspace(curve.start, curve.end, curve.points);
        for p in profit_curve(&cs, &grid).map_err(domain_err)? {
            let (d1, d2) = profit_derivatives(&cs, p.wage).map_err(domain_err)?;
            table.push(vec![
                Cell::Num(p.wage),
                Cell::Num(p.net_profit),
                Cell::Num(d1),
                Cell::Num(d2),
            ]);
        }
    }
    ctx.emit(&table)
}

fn cmd_value(cfg: &RunConfig, ctx: &mut Ctx) -> Result<(), CliError> {
    let v = require(cfg.value.as_ref(), "value")?;
    let regime = match (v.beta, v.c_plus, v.c_minus) {
        (Some(b), None, None) => FeedbackRegime::Finite(BetaParam::new(b)?),
        (None, Some(p), Some(m)) => beta_from_coeffs(FeedbackCoefficients::new(p, m)?),
        _ => {
            return Err(CliError::Config(
                "config [value]: give either beta or both c_plus and c_minus".into(),
            ))
        }
    };
    if v.points == 0 || v.rk4_steps == 0 || !(v.vt_start <= v.vt_end) {
        return Err(CliError::Config(
            "config [value]: need points >= 1, rk4_steps >= 1 and vt_start <= vt_end".into(),
        ));
    }
    if !(v.vt_start > 0.0) {
        return Err(CliError::Domain(format!(
            "true value must be > 0, got vt_start = {}",
            v.vt_start
        )));
    }
    let grid = linspace(v.vt_start, v.vt_end, v.points);
    let columns = ["Vt", "Vm", "gap", "rk4", "rk4_err"];

    let beta = match regime {
        FeedbackRegime::Balanced => {
            ctx.line("value model: c_plus = c_minus");
            ctx.line("  balanced feedback: V_m = V_t");
            let mut table =
                Table::new(columns, json!({ "command": "value", "regime": "balanced" }));
            for &x in &grid {
                table.push(vec![
                    Cell::Num(x),
                    Cell::Num(x),
                    Cell::Num(0.0),
                    Cell::Empty,
                    Cell::Empty,
                ]);
            }
            return ctx.emit(&table);
        }
        FeedbackRegime::Finite(b) => b,
    };

    let k = match v.homog_coeff {
        Some(k) => k,
        None if beta.is_singular() => BETA_ONE_DEFAULT_COEFF,
        None => default_homog_coeff(beta.value()),
    };
    ctx.line(format!(
        "value model: beta={} K={}",
        fmt_num(beta.value()),
        fmt_num(k)
    ));
    if beta.is_singular() {
        ctx.line("  beta = 1: using V_m = K*V_t - V_t*ln(V_t)");
    } else {
        ctx.line("  V_m = K*V_t^beta + beta/(beta-1)*V_t");
    }

    let analytic = |x: f64| market_value_any(beta, k, x);
    let rhs = |x: f64, y: f64| ode_rhs(beta, x, y).unwrap_or(f64::NAN);
    let mut table = Table::new(
        columns,
        json!({ "command": "value", "beta": beta.value(), "homog_coeff": k, "rk4_steps": v.rk4_steps }),
    );
    let mut y = analytic(grid[0]).map_err(domain_err)?;
    let mut max_err: f64 = 0.0;
    for (i, &x) in grid.iter().enumerate() {
        if i > 0 {
            let spec = IntegrationSpec::new(grid[i - 1], x, v.rk4_steps, rhs)?;
            y = rk4_integrate(&spec, y).map_err(domain_err)?;
        }
        let vm = analytic(x).map_err(domain_err)?;
        let err = if vm == 0.0 {
            (y - vm).abs()
        } else {
            ((y - vm) / vm).abs()
        };
        max_err = max_err.max(err);
        table.push(vec![
            Cell::Num(x),
            Cell::Num(vm),
            Cell::Num(vm - x),
            Cell::Num(y),
            Cell::Num(err),
        ]);
    }
    ctx.line(format!(
        "  max relative RK4 error over the grid: {}",
        fmt_num(max_err)
    ));

    if let Some(betas) = &v.probe_betas {
        let vt = v.probe_vt.unwrap_or(v.vt_end);
        let probe = limit_probe(vt, betas).map_err(domain_err)?;
        ctx.line(format!(
            "  limit probe at V_t={} (beta -> -inf):",
            fmt_num(vt)
        ));
        for (b, gap) in &probe.gaps {
            ctx.line(format!("    beta={} gap={}", fmt_num(*b), fmt_num(*gap)));
        }
        if probe.divergent {
            ctx.line("  DIVERGENT: 0 < V_t < 1, the V_t^beta term grows without bound");
        } else {
            ctx.line(format!(
                "  |gap| strictly decreasing: {}",
                probe.converging()
            ));
            if probe.gaps.iter().all(|g| g.1 < 0.0) {
                ctx.line("  INFO: V_m approaches V_t from below here, not from above");
            }
        }
    }
    ctx.emit(&table)
}

fn describe_range(range: TaxationRange) -> String {
    match range {
        TaxationRange::Interval { lower, upper } => {
            format!("[{}, {}]", fmt_num(lower), fmt_num(upper))
        }
        TaxationRange::Empty => "empty".into(),
        TaxationRange::Degenerate => "degenerate (1 + tau <= 0)".into(),
    }
}

fn describe_fixed(fp: FixedPoint) -> String {
    match fp {
        FixedPoint::Point(b0) => fmt_num(b0),
        FixedPoint::Divergent => "divergent (unit pole, C != 0)".into(),
        FixedPoint::Neutral => "neutral (unit pole, C = 0)".into(),
    }
}

fn cmd_budget(
    cfg: &RunConfig,
    mode: Option<RecurrenceMode>,
    horizon: Option<usize>,
    ctx: &mut Ctx,
) -> Result<(), CliError> {
    let b = require(cfg.budget.as_ref(), "budget")?;
    let params = b.params();
    params.validate().map_err(domain_err)?;
    let mode = mode.or(b.mode).unwrap_or_default();
    let n = horizon.or(b.horizon).unwrap_or(DEFAULT_HORIZON);

    let (rec, report) = match &b.deficiency {
        None => (
            Recurrence::new(&params, mode),
            stability_report_for(&params, mode),
        ),
        Some(d) => {
            d.validate().map_err(domain_err)?;
            let rec = Recurrence {
                coeffs: d.adjust_coefficients(&params),
                mode,
            };
            let hat = BudgetParams {
                tax_rate: params.tax_rate * (1.0 - d.eps_t),
                infra_spending: params.infra_spending * (1.0 - d.eps_g),
                ..params
            };
            let base = stability_report_for(&hat, mode);
            let pole = rec.pole();
            let report = StabilityReport {
                pole,
                stable: pole.abs() <= 1.0,
                fixed_point: rec.fixed_point(),
                ..base
            };
            (rec, report)
        }
    };

    let k = rec.coeffs;
    ctx.line(format!("budget model ({} mode)", mode.name()));
    ctx.line(format!(
        "  A={} B={} C={}",
        fmt_num(k.a),
        fmt_num(k.b),
        fmt_num(k.c)
    ));
    ctx.line(format!("  pole={}", fmt_num(report.pole)));
    ctx.line(format!("  tau={}", fmt_num(report.tau)));
    ctx.line(format!("  stable={}", report.stable));
    ctx.line(format!("  range={}", describe_range(report.range)));
    ctx.line(format!("  shrink_condition={}", report.shrink_condition));
    ctx.line(format!(
        "  fixed_point={}",
        describe_fixed(report.fixed_point)
    ));
    if let Some(d) = &b.deficiency {
        if d.eps_w != 0.0 || d.eps_phi != 0.0 {
            ctx.line(
                "  INFO: range and tau use t-hat and G-hat only; eps_w and eps_phi act on the pole",
            );
        }
    }

    let iterated = rec.iterate_from(params.initial_wages, n);
    let mut table = Table::new(
        ["n", "iterate", "closed_form", "abs_diff"],
        json!({
            "command": "budget",
            "mode": mode.name(),
            "pole": report.pole,
            "tau": report.tau,
            "stable": report.stable,
        }),
    );
    let mut max_diff: f64 = 0.0;
    for (i, &w) in iterated.iter().enumerate() {
        let cf = rec.closed_form_from(params.initial_wages, i);
        let diff = (w - cf).abs();
        max_diff = max_diff.max(diff);
        table.push(vec![
            Cell::Int(i as u64),
            Cell::Num(w),
            Cell::Num(cf),
            Cell::Num(diff),
        ]);
    }
    ctx.line(format!("  max|iter-closed|={}", fmt_num(max_diff)));
    ctx.emit(&table)
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}

fn sweep_table(mut result: SweepResult) -> Result<Table, CliError> {
    result.metadata.timestamp = Some(timestamp());
    let metadata =
        serde_json::to_value(&result.metadata).map_err(|e| CliError::Io(e.to_string()))?;
    let mut columns: Vec<String> = result
        .metadata
        .axes
        .iter()
        .map(|a| a.name.clone())
        .collect();
    columns.extend(result.output_names.iter().map(|s| s.to_string()));
    columns.push("error".into());
    let mut table = Table::new(columns, metadata);
    let n_out = result.output_names.len();
    for rec in result.records {
        let mut row: Vec<Cell> = rec.axis_values.iter().map(|&v| Cell::Num(v)).collect();
        match rec.outcome {
            Ok(values) => {
                row.extend(values.into_iter().map(Cell::from));
                row.push(Cell::Empty);
            }
            Err(msg) => {
                row.extend(std::iter::repeat_n(Cell::Empty, n_out));
                row.push(Cell::Text(msg));
            }
        }
        table.push(row);
    }
    Ok(table)
}

fn run_sweep<B, V>(
    binding: &B,
    base: &B::Params,
    grid: &ParamGrid,
    valid: V,
) -> Result<SweepResult, CliError>
where
    B: ModelBinding,
    V: Fn(&B::Params) -> crate::Result<()>,
{
    check_grid_domain(binding, base, grid, valid)
        .map_err(|e| CliError::Config(format!("config [sweep]: {e}")))?;
    sweep(binding, base, grid, Schedule::Parallel)
        .map_err(|e| CliError::Config(format!("config [sweep]: {e}")))
}

fn cmd_sweep(cfg: &RunConfig, mode: Option<RecurrenceMode>, ctx: &mut Ctx) -> Result<(), CliError> {
    let s = require(cfg.sweep.as_ref(), "sweep")?;
    let grid = ParamGrid::new(s.axes.clone())
        .map_err(|e| CliError::Config(format!("config [sweep]: {e}")))?;
    let result = match s.model {
        SweepModel::Budget => {
            let base = require(s.budget, "sweep.budget")?;
            let mode = mode.or(s.mode).unwrap_or_default();
            ctx.line(format!("sweep: budget model ({} mode)", mode.name()));
            run_sweep(&BudgetBinding { mode }, &base, &grid, |p| p.validate())?
        }
        SweepModel::Wage => {
            let w = require(s.wage.as_ref(), "sweep.wage")?;
            let cost =
                CostStructure::new(w.max_market_price, w.labor_weight, w.other_factors.clone())
                    .map_err(|e| CliError::Config(format!("config [sweep.wage]: {e}")))?;
            let base = WageSweepParams {
                cost,
                wage: w.wage,
                w0: w.w0,
            };
            ctx.line("sweep: wage model");
            run_sweep(&WageBinding, &base, &grid, |p| {
                CostStructure::new(
                    p.cost.max_market_price(),
                    p.cost.labor_weight(),
                    p.cost.other_factors().to_vec(),
                )?;
                WageBound::new(p.w0)?;
                if p.wage > 0.0 {
                    Ok(())
                } else {
                    Err(crate::error::invalid(format!(
                        "wage must be > 0, got {}",
                        p.wage
                    )))
                }
            })?
        }
        SweepModel::Value => {
            let v = require(s.value.as_ref(), "sweep.value")?;
            let base = ValueSweepParams {
                beta: v.beta,
                homog_coeff: v.homog_coeff,
                true_value: v.true_value,
            };
            ctx.line("sweep: value model");
            run_sweep(&ValueBinding, &base, &grid, |p| {
                BetaParam::new(p.beta)?;
                if p.true_value > 0.0 {
                    Ok(())
                } else {
                    Err(crate::error::invalid(format!(
                        "true_value must be > 0, got {}",
                        p.true_value
                    )))
                }
            })?
        }
    };
    let total = result.records.len();
    let failed = result.failed();
    ctx.line(format!("  cells={total} failed={failed}"));
    if s.model == SweepModel::Budget {
        let stable = result
            .records
            .iter()
            .filter(|r| {
                matches!(
                    r.outcome.as_deref(),
                    Ok([_, crate::sweep_engine::Value::Flag(true), ..])
                )
            })
            .count();
        ctx.line(format!("  stable cells={stable}"));
    }
    if failed == total {
        return Err(CliError::Domain(format!("all {total} sweep cells failed")));
    }
    ctx.emit(&sweep_table(result)?)
}

fn cmd_verify(
    cfg: &RunConfig,
    overrides: &[String],
    list: bool,
    ctx: &mut Ctx,
) -> Result<(), CliError> {
    let checks = verify::checks();
    if list {
        let mut table = Table::new(
            ["check", "tolerance", "description"],
            json!({ "command": "verify --list" }),
        );
        for c in &checks {
            table.push(vec![
                Cell::Text(c.name.into()),
                c.default_tolerance.map_or(Cell::Empty, Cell::Num),
                Cell::Text(c.description.into()),
            ]);
        }
        return ctx.emit(&table);
    }
    let mut tolerances = cfg.verification.clone();
    for o in overrides {
        let (name, value) = o
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("--tolerance expects NAME=VALUE, got {o}")))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--tolerance {name}: not a number: {value}")))?;
        tolerances.insert(name.trim().to_string(), value);
    }
    for (name, value) in &tolerances {
        let check = checks
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| CliError::Config(format!("unknown check {name}")))?;
        if check.default_tolerance.is_none() {
            return Err(CliError::Config(format!("check {name} has no tolerance")));
        }
        if !(value.is_finite() && *value >= 0.0) {
            return Err(CliError::Config(format!("tolerance {name} must be >= 0")));
        }
    }

    let mut table = Table::new(
        ["check", "status", "measured", "tolerance"],
        json!({ "command": "verify" }),
    );
    let mut failures = Vec::new();
    for c in &checks {
        let tol = tolerances.get(c.name).copied().or(c.default_tolerance);
        let outcome = (c.run)(tol);
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        ctx.line(format!(
            "{status} {}: measured {}{} ({})",
            c.name,
            fmt_num(outcome.measured),
            tol.map_or(String::new(), |t| format!(" vs tolerance {}", fmt_num(t))),
            outcome.detail
        ));
        if !outcome.pass {
            failures.push(c.name);
        }
        table.push(vec![
            Cell::Text(c.name.into()),
            Cell::Text(status.into()),
            Cell::Num(outcome.measured),
            tol.map_or(Cell::Empty, Cell::Num),
        ]);
    }
    for info in verify::findings() {
        ctx.line(format!("INFO {info}"));
    }
    ctx.emit(&table)?;
    if failures.is_empty() {
        ctx.line(format!("all {} checks passed", checks.len()));
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{} check(s) failed: {}",
            failures.len(),
            failures.join(", ")
        )))
    }
}
