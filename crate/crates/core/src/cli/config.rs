//! TOML run configuration. Key names mirror the library's field names.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::budget_dynamics::{BudgetParams, DeficiencyFactors, RecurrenceMode};
use crate::sweep_engine::Axis;
use crate::wage_profit::CostFactor;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<Format>,
    pub path: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WageSection {
    pub max_market_price: f64,
    pub labor_weight: f64,
    #[serde(default)]
    pub other_factors: Vec<CostFactor>,
    pub w0: f64,
    pub curve: Option<CurveSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueSection {
    pub c_plus: Option<f64>,
    pub c_minus: Option<f64>,
    pub beta: Option<f64>,
    pub homog_coeff: Option<f64>,
    pub vt_start: f64,
    pub vt_end: f64,
    #[serde(default = "default_value_points")]
    pub points: usize,
    /// RK4 steps between consecutive grid points.
    #[serde(default = "default_rk4_steps")]
    pub rk4_steps: usize,
    pub probe_vt: Option<f64>,
    pub probe_betas: Option<Vec<f64>>,
}

fn default_value_points() -> usize {
    21
}

fn default_rk4_steps() -> usize {
    100
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub tax_rate: f64,
    pub spending_split: f64,
    pub private_fraction: f64,
    pub invest_share: f64,
    pub foreign_multiplier: f64,
    pub infra_spending: f64,
    pub initial_wages: f64,
    pub horizon: Option<usize>,
    pub mode: Option<RecurrenceMode>,
    pub deficiency: Option<DeficiencyFactors>,
}

impl BudgetSection {
    pub fn params(&self) -> BudgetParams {
        BudgetParams {
            tax_rate: self.tax_rate,
            spending_split: self.spending_split,
            private_fraction: self.private_fraction,
            invest_share: self.invest_share,
            foreign_multiplier: self.foreign_multiplier,
            infra_spending: self.infra_spending,
            initial_wages: self.initial_wages,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepModel {
    Budget,
    Wage,
    Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WageBase {
    pub max_market_price: f64,
    pub labor_weight: f64,
    #[serde(default)]
    pub other_factors: Vec<CostFactor>,
    pub wage: f64,
    #[serde(default)]
    pub w0: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValueBase {
    pub beta: f64,
    pub homog_coeff: Option<f64>,
    pub true_value: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub model: SweepModel,
    pub mode: Option<RecurrenceMode>,
    pub axes: Vec<Axis>,
    pub budget: Option<BudgetParams>,
    pub wage: Option<WageBase>,
    pub value: Option<ValueBase>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub output: OutputSection,
    pub wage: Option<WageSection>,
    pub value: Option<ValueSection>,
    pub budget: Option<BudgetSection>,
    pub sweep: Option<SweepSection>,
    /// Tolerance overrides by check name.
    #[serde(default)]
    pub verification: BTreeMap<String, f64>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig =
            toml::from_str(text).map_err(|e| CliError::Config(format!("config: {e}")))?;
        let sections = [
            cfg.wage.is_some(),
            cfg.value.is_some(),
            cfg.budget.is_some(),
            cfg.sweep.is_some(),
        ];
        if sections.iter().filter(|s| **s).count() > 1 {
            return Err(CliError::Config(
                "config: exactly one of [wage], [value], [budget], [sweep] per run".into(),
            ));
        }
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }
}
