//! Net profit per sold unit as a function of the total labor cost `w`.
//!
//! With a convex cost weighting `NC(w) = α₁·w + Σ αᵢ·zᵢ` and a market price
//! ceiling `MPr_max`, the profit ratio reduces to `NP(w) = C/w − α₁` where
//! `C = MPr_max − Σ αᵢ·zᵢ` does not depend on `w`. `NP` is strictly
//! decreasing and convex in `w`, so under a lower wage bound `w₀` the
//! optimum sits on the bound, and without one (`w₀ = 0`) it is unbounded.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// One non-labor cost factor: its convex weight and per-unit value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostFactor {
    pub weight: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostStructure {
    max_market_price: f64,
    labor_weight: f64,
    other_factors: Vec<CostFactor>,
}

impl CostStructure {
    pub fn new(
        max_market_price: f64,
        labor_weight: f64,
        other_factors: Vec<CostFactor>,
    ) -> Result<Self> {
        if !(max_market_price.is_finite() && max_market_price > 0.0) {
            return Err(invalid(format!(
                "max_market_price must be > 0, got {max_market_price}"
            )));
        }
        let weights = std::iter::once(labor_weight).chain(other_factors.iter().map(|f| f.weight));
        crate::check_convex(weights, "cost weights")?;
        if let Some(f) = other_factors
            .iter()
            .find(|f| !(f.value.is_finite() && f.value >= 0.0))
        {
            return Err(invalid(format!(
                "cost factor values must be >= 0, got {}",
                f.value
            )));
        }
        Ok(Self {
            max_market_price,
            labor_weight,
            other_factors,
        })
    }

    pub fn max_market_price(&self) -> f64 {
        self.max_market_price
    }

    pub fn labor_weight(&self) -> f64 {
        self.labor_weight
    }

    pub fn other_factors(&self) -> &[CostFactor] {
        &self.other_factors
    }

    pub(crate) fn set_max_market_price_unchecked(&mut self, price: f64) {
        self.max_market_price = price;
    }

    fn non_labor_cost(&self) -> f64 {
        self.other_factors.iter().map(|f| f.weight * f.value).sum()
    }
}

/// Minimum allowable total labor cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WageBound {
    w0: f64,
}

impl WageBound {
    pub fn new(w0: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 >= 0.0) {
            return Err(invalid(format!("wage bound w0 must be >= 0, got {w0}")));
        }
        Ok(Self { w0 })
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfitPoint {
    pub wage: f64,
    pub net_profit: f64,
}

/// Constrained optimum of the net profit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WageOptimum {
    Bounded(ProfitPoint),
    /// `w₀ = 0`: the profit ratio grows without bound as wages go to zero.
    Unbounded,
}

/// `C = MPr_max − Σ_{i≥2} αᵢ·zᵢ`, required to be positive.
pub fn profit_constant(cs: &CostStructure) -> Result<f64> {
    let c = cs.max_market_price - cs.non_labor_cost();
    if c > 0.0 {
        Ok(c)
    } else {
        Err(Error::NonpositiveMargin(c))
    }
}

/// `NC(w) = α₁·w + Σ αᵢ·zᵢ`
pub fn total_cost(cs: &CostStructure, w: f64) -> Result<f64> {
    if !(w.is_finite() && w >= 0.0) {
        return Err(domain(format!("labor cost must be >= 0, got {w}")));
    }
    Ok(cs.labor_weight * w + cs.non_labor_cost())
}

fn positive_wage(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("labor cost must be > 0, got {w}")))
    }
}

/// `NP(w) = C/w − α₁`
pub fn net_profit(cs: &CostStructure, w: f64) -> Result<f64> {
    positive_wage(w)?;
    let c = profit_constant(cs)?;
    Ok(c / w - cs.labor_weight)
}

/// `(dNP/dw, d²NP/dw²) = (−C/w², 2C/w³)`
pub fn profit_derivatives(cs: &CostStructure, w: f64) -> Result<(f64, f64)> {
    positive_wage(w)?;
    let c = profit_constant(cs)?;
    Ok((-c / (w * w), 2.0 * c / (w * w * w)))
}

pub fn optimal_wage(cs: &CostStructure, bound: WageBound) -> Result<WageOptimum> {
    let c = profit_constant(cs)?;
    if bound.w0 == 0.0 {
        return Ok(WageOptimum::Unbounded);
    }
    Ok(WageOptimum::Bounded(ProfitPoint {
        wage: bound.w0,
        net_profit: c / bound.w0 - cs.labor_weight,
    }))
}

/// Pointwise `NP` over a strictly increasing grid of positive wages.
pub fn profit_curve(cs: &CostStructure, wages: &[f64]) -> Result<Vec<ProfitPoint>> {
    if let Some(pair) = wages.windows(2).find(|p| !(p[0] < p[1])) {
        return Err(domain(format!(
            "wage grid must be strictly increasing ({} then {})",
            pair[0], pair[1]
        )));
    }
    wages
        .iter()
        .map(|&w| {
            Ok(ProfitPoint {
                wage: w,
                net_profit: net_profit(cs, w)?,
            })
        })
        .collect()
}
