//! Government budget flow model and its first-order recurrence.
//!
//! Annual wages `W` are taxed at `t`; a split `c` of spending goes to
//! infrastructure `G_s`, the rest to public salaries, and a fraction `p` of
//! the work force is private. The yearly balance and investments give
//!
//! ```text
//! φ  = W·t − (1−c)(1−t)(1−p)·W − G_s·c  = A·W + C
//! I  = ξ·W·(1−t)(1+ϑ)                   = B·W
//! ΔW = φ + I
//! ```
//!
//! In [`RecurrenceMode::Level`] the next year's level is `ΔW` itself, so
//! `W_{n+1} = (A+B)·W_n + C` with pole `A+B`. [`RecurrenceMode::Incremental`]
//! instead accumulates, `W_{n+1} = W_n + ΔW`, with pole `1+A+B`.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetParams {
    /// `t`
    pub tax_rate: f64,
    /// `c`, infrastructure share of government spending.
    pub spending_split: f64,
    /// `p`, private-sector share of the work force.
    pub private_fraction: f64,
    /// `ξ`
    pub invest_share: f64,
    /// `ϑ`
    pub foreign_multiplier: f64,
    /// `G_s`
    pub infra_spending: f64,
    /// `W₀`
    pub initial_wages: f64,
}

fn fraction(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn nonneg(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be >= 0, got {v}")))
    }
}

impl BudgetParams {
    pub fn validate(&self) -> Result<()> {
        fraction("tax_rate", self.tax_rate)?;
        fraction("spending_split", self.spending_split)?;
        fraction("private_fraction", self.private_fraction)?;
        nonneg("invest_share", self.invest_share)?;
        nonneg("foreign_multiplier", self.foreign_multiplier)?;
        nonneg("infra_spending", self.infra_spending)?;
        if !(self.initial_wages.is_finite() && self.initial_wages > 0.0) {
            return Err(invalid(format!(
                "initial_wages must be > 0, got {}",
                self.initial_wages
            )));
        }
        Ok(())
    }

    /// Salaries paid by the private sector, `S = (1−p)·W`.
    pub fn salaries(&self, w: f64) -> f64 {
        (1.0 - self.private_fraction) * w
    }

    /// Private profits, `P = p·W`.
    pub fn profits(&self, w: f64) -> f64 {
        self.private_fraction * w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecurrenceMode {
    #[default]
    Level,
    Incremental,
}

impl RecurrenceMode {
    fn pole_offset(self) -> f64 {
        match self {
            RecurrenceMode::Level => 0.0,
            RecurrenceMode::Incremental => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RecurrenceMode::Level => "level",
            RecurrenceMode::Incremental => "incremental",
        }
    }
}

/// Losses on tax collection, work effort, spending efficiency and currency
/// value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeficiencyFactors {
    #[serde(default)]
    pub eps_t: f64,
    #[serde(default)]
    pub eps_w: f64,
    #[serde(default)]
    pub eps_g: f64,
    #[serde(default)]
    pub eps_phi: f64,
}

impl DeficiencyFactors {
    pub fn validate(&self) -> Result<()> {
        fraction("eps_t", self.eps_t)?;
        fraction("eps_w", self.eps_w)?;
        fraction("eps_g", self.eps_g)?;
        fraction("eps_phi", self.eps_phi)
    }

    /// Recurrence coefficients with the deficiencies folded in: the balance
    /// is evaluated on effective wages `Ŵ` with `t̂` and `Ĝ`, then scaled by
    /// `1 − ε_φ`; investments see `t̂` only.
    pub fn adjust_coefficients(&self, params: &BudgetParams) -> RecurrenceCoefficients {
        let adjusted = BudgetParams {
            tax_rate: params.tax_rate * (1.0 - self.eps_t),
            infra_spending: params.infra_spending * (1.0 - self.eps_g),
            ..*params
        };
        let raw = coefficients(&adjusted);
        let phi_scale = 1.0 - self.eps_phi;
        RecurrenceCoefficients {
            a: raw.a * (1.0 - self.eps_w) * phi_scale,
            b: raw.b,
            c: raw.c * phi_scale,
        }
    }
}

/// Deficiency-adjusted quantities for one wage level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdjustedBudget {
    pub tax_rate: f64,
    pub wages: f64,
    pub infra_spending: f64,
    /// Multiplier `1 − ε_φ` for any balance computed from these values.
    pub balance_scale: f64,
}

impl AdjustedBudget {
    /// `φ̂ = φ·(1 − ε_φ)`
    pub fn scale_balance(&self, phi: f64) -> f64 {
        phi * self.balance_scale
    }
}

pub fn apply_deficiencies(params: &BudgetParams, w: f64, d: &DeficiencyFactors) -> AdjustedBudget {
    AdjustedBudget {
        tax_rate: params.tax_rate * (1.0 - d.eps_t),
        wages: w * (1.0 - d.eps_w),
        infra_spending: params.infra_spending * (1.0 - d.eps_g),
        balance_scale: 1.0 - d.eps_phi,
    }
}

/// A convex list of `(weight, value)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedInputs(Vec<(f64, f64)>);

impl WeightedInputs {
    fn new(items: Vec<(f64, f64)>, what: &str) -> Result<Self> {
        crate::check_convex(items.iter().map(|i| i.0), what)?;
        Ok(Self(items))
    }

    pub fn items(&self) -> &[(f64, f64)] {
        &self.0
    }
}

/// Infrastructure spending factors `(αᵢ, gᵢ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpendingInputs(WeightedInputs);

impl SpendingInputs {
    pub fn new(items: Vec<(f64, f64)>) -> Result<Self> {
        if let Some(i) = items.iter().find(|i| !(i.1.is_finite() && i.1 >= 0.0)) {
            return Err(invalid(format!(
                "spending amounts must be >= 0, got {}",
                i.1
            )));
        }
        WeightedInputs::new(items, "spending weights").map(Self)
    }
}

/// Public-welfare factors `(γ_k, h_k)`, `h_k` the excluded fraction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WelfareInputs(WeightedInputs);

impl WelfareInputs {
    pub fn new(items: Vec<(f64, f64)>) -> Result<Self> {
        for i in &items {
            fraction("excluded fraction", i.1)?;
        }
        WeightedInputs::new(items, "welfare weights").map(Self)
    }
}

/// `G_s = Σ αᵢ·gᵢ`
pub fn spending_index(s: &SpendingInputs) -> f64 {
    s.0.items().iter().map(|(a, g)| a * g).sum()
}

/// `G_w = Σ γ_k·(1 − h_k)`
pub fn welfare_index(w: &WelfareInputs) -> f64 {
    w.0.items().iter().map(|(g, h)| g * (1.0 - h)).sum()
}

/// `φ = W·t − (1−c)(1−t)(1−p)·W − G_s·c`
pub fn flow_balance(params: &BudgetParams, w: f64) -> f64 {
    let BudgetParams {
        tax_rate: t,
        spending_split: c,
        private_fraction: p,
        infra_spending: gs,
        ..
    } = *params;
    w * t - (1.0 - c) * (1.0 - t) * (1.0 - p) * w - gs * c
}

/// `I = ξ·W·(1−t)·(1+ϑ)`
pub fn investments(params: &BudgetParams, w: f64) -> f64 {
    params.invest_share * w * (1.0 - params.tax_rate) * (1.0 + params.foreign_multiplier)
}

/// `ΔW = φ + I`
pub fn annual_change(params: &BudgetParams, w: f64) -> f64 {
    flow_balance(params, w) + investments(params, w)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RecurrenceCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn coefficients(params: &BudgetParams) -> RecurrenceCoefficients {
    let t = params.tax_rate;
    let c = params.spending_split;
    let p = params.private_fraction;
    RecurrenceCoefficients {
        a: t - (1.0 - c) * (1.0 - t) * (1.0 - p),
        b: params.invest_share * (1.0 - t) * (1.0 + params.foreign_multiplier),
        c: -params.infra_spending * c,
    }
}

/// Long-run level of the recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPoint {
    Point(f64),
    /// Unit pole with a nonzero forcing term: the level drifts by `C` a year.
    Divergent,
    /// Unit pole and no forcing: every level is stationary.
    Neutral,
}

/// `x_{n+1} = pole·x_n + C` for given coefficients and mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recurrence {
    pub coeffs: RecurrenceCoefficients,
    pub mode: RecurrenceMode,
}

impl Recurrence {
    pub fn new(params: &BudgetParams, mode: RecurrenceMode) -> Self {
        Self {
            coeffs: coefficients(params),
            mode,
        }
    }

    pub fn pole(&self) -> f64 {
        self.mode.pole_offset() + (self.coeffs.a + self.coeffs.b)
    }

    pub fn step(&self, w: f64) -> f64 {
        self.pole() * w + self.coeffs.c
    }

    pub fn fixed_point(&self) -> FixedPoint {
        let pole = self.pole();
        if pole != 1.0 {
            FixedPoint::Point(self.coeffs.c / (1.0 - pole))
        } else if self.coeffs.c != 0.0 {
            FixedPoint::Divergent
        } else {
            FixedPoint::Neutral
        }
    }

    /// `[w0, w1, ..., wn]` by repeated stepping.
    pub fn iterate_from(&self, w0: f64, n: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(n + 1);
        let mut w = w0;
        out.push(w);
        for _ in 0..n {
            w = self.step(w);
            out.push(w);
        }
        out
    }

    /// `w_n = pole^n·(w0 − b₀) + b₀` with `b₀ = C/(1 − pole)`, evaluated as
    /// `pole^n·w0 + C·(1 − pole^n)/(1 − pole)`. The geometric factor is
    /// computed through `expm1`/`ln_1p` near the unit pole, where it tends
    /// to `n`.
    pub fn closed_form_from(&self, w0: f64, n: usize) -> f64 {
        let pole = self.pole();
        let power = pole.powi(n as i32);
        power * w0 + self.coeffs.c * geometric_sum(pole, n)
    }

    /// `h(n) = C·pole^n`
    pub fn impulse_response(&self, n: usize) -> f64 {
        self.coeffs.c * self.pole().powi(n as i32)
    }
}

/// `Σ_{k<n} r^k`
fn geometric_sum(r: f64, n: usize) -> f64 {
    if r == 1.0 {
        return n as f64;
    }
    let d = r - 1.0;
    if d.abs() < 0.5 {
        (n as f64 * d.ln_1p()).exp_m1() / d
    } else {
        (1.0 - r.powi(n as i32)) / (1.0 - r)
    }
}

/// `W₀..Wₙ` under the level-mode recurrence.
pub fn iterate(params: &BudgetParams, n: usize) -> Vec<f64> {
    iterate_with(params, n, RecurrenceMode::Level)
}

pub fn iterate_with(params: &BudgetParams, n: usize, mode: RecurrenceMode) -> Vec<f64> {
    Recurrence::new(params, mode).iterate_from(params.initial_wages, n)
}

/// Closed-form `Wₙ` under the level-mode recurrence.
pub fn closed_form(params: &BudgetParams, n: usize) -> f64 {
    closed_form_with(params, n, RecurrenceMode::Level)
}

pub fn closed_form_with(params: &BudgetParams, n: usize, mode: RecurrenceMode) -> f64 {
    Recurrence::new(params, mode).closed_form_from(params.initial_wages, n)
}

pub fn impulse_response(params: &BudgetParams, n: usize) -> f64 {
    Recurrence::new(params, RecurrenceMode::Level).impulse_response(n)
}

/// `τ = (1−c)(1−p) − ξ(1+ϑ)`, so that `A+B = t(1+τ) − τ`.
pub fn tau(params: &BudgetParams) -> f64 {
    (1.0 - params.spending_split) * (1.0 - params.private_fraction)
        - params.invest_share * (1.0 + params.foreign_multiplier)
}

/// Tax rates for which the pole stays in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TaxationRange {
    Interval {
        lower: f64,
        upper: f64,
    },
    /// The bounds exist but no rate in `[0, 1]` satisfies both.
    Empty,
    /// `1 + τ ≤ 0`: dividing by `1 + τ` flips the inequalities.
    Degenerate,
}

impl TaxationRange {
    pub fn contains(&self, t: f64) -> bool {
        match *self {
            TaxationRange::Interval { lower, upper } => lower <= t && t <= upper,
            _ => false,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, TaxationRange::Degenerate)
    }
}

/// Stable taxation interval `[max{0, (τ−1)/(1+τ)}, 1]` (level mode). The
/// tax rate in `params` is ignored.
pub fn taxation_range(params: &BudgetParams) -> TaxationRange {
    taxation_range_for(params, RecurrenceMode::Level)
}

/// With pole `o + t(1+τ) − τ` the bounds are `(τ ∓ 1 − o)/(1+τ)`,
/// intersected with `[0, 1]`.
pub fn taxation_range_for(params: &BudgetParams, mode: RecurrenceMode) -> TaxationRange {
    let tau = tau(params);
    let denom = 1.0 + tau;
    if denom <= 0.0 {
        return TaxationRange::Degenerate;
    }
    let o = mode.pole_offset();
    let lower = ((tau - 1.0 - o) / denom).max(0.0);
    let upper = ((tau + 1.0 - o) / denom).min(1.0);
    if lower <= upper {
        TaxationRange::Interval { lower, upper }
    } else {
        TaxationRange::Empty
    }
}

/// `τ > 1`, the condition under which the stable range excludes low taxes.
pub fn shrink_condition(params: &BudgetParams) -> bool {
    tau(params) > 1.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    pub mode: RecurrenceMode,
    pub pole: f64,
    pub tau: f64,
    /// `|pole| ≤ 1`
    pub stable: bool,
    pub range: TaxationRange,
    pub shrink_condition: bool,
    pub fixed_point: FixedPoint,
}

pub fn stability_report(params: &BudgetParams) -> StabilityReport {
    stability_report_for(params, RecurrenceMode::Level)
}

pub fn stability_report_for(params: &BudgetParams, mode: RecurrenceMode) -> StabilityReport {
    let rec = Recurrence::new(params, mode);
    let pole = rec.pole();
    StabilityReport {
        mode,
        pole,
        tau: tau(params),
        stable: pole.abs() <= 1.0,
        range: taxation_range_for(params, mode),
        shrink_condition: shrink_condition(params),
        fixed_point: rec.fixed_point(),
    }
}

/// Result of scanning `(c, p, ξ, ϑ)` for the shrink condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkScan {
    pub cells: usize,
    pub max_tau: f64,
    pub reachable: usize,
}

/// Exhaustive scan over `c, p ∈ [0, 1]`, `ξ ∈ [0, xi_max]`,
/// `ϑ ∈ [0, vartheta_max]` with `points` values per axis.
pub fn shrink_reachability_scan(points: usize, xi_max: f64, vartheta_max: f64) -> ShrinkScan {
    use crate::numeric_oracles::linspace;
    let unit = linspace(0.0, 1.0, points);
    let xis = linspace(0.0, xi_max, points);
    let thetas = linspace(0.0, vartheta_max, points);
    let mut scan = ShrinkScan {
        cells: 0,
        max_tau: f64::NEG_INFINITY,
        reachable: 0,
    };
    for &c in &unit {
        for &p in &unit {
            for &xi in &xis {
                for &th in &thetas {
                    let params = BudgetParams {
                        tax_rate: 0.0,
                        spending_split: c,
                        private_fraction: p,
                        invest_share: xi,
                        foreign_multiplier: th,
                        infra_spending: 0.0,
                        initial_wages: 1.0,
                    };
                    let tau = tau(&params);
                    scan.cells += 1;
                    scan.max_tau = scan.max_tau.max(tau);
                    if shrink_condition(&params) {
                        scan.reachable += 1;
                    }
                }
            }
        }
    }
    scan
}
