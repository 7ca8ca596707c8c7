//! Closed-form analysis and numerical cross-checks for three first-order
//! economic feedback models:
//!
//! * [`wage_profit`]: net profit per unit against total labor cost, and its
//!   constrained optimum under a minimum-wage bound;
//! * [`value_feedback`]: the market-value/true-value ODE, its solution
//!   family and the balanced-feedback limit;
//! * [`budget_dynamics`]: the government-budget recurrence, its closed form
//!   and the stable taxation range.
//!
//! [`numeric_oracles`] holds the independent integrator, differentiators and
//! grid search used to check every closed form, [`sweep_engine`] rasterizes
//! model outputs over parameter grids, and [`cli`] drives it all from the
//! command line.

// NaN-rejecting validation reads better as `!(a < b)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod budget_dynamics;
pub mod cli;
pub mod error;
pub mod numeric_oracles;
pub mod sweep_engine;
pub mod value_feedback;
pub mod wage_profit;

pub use error::{Error, Result};

/// Absolute tolerance on the sum of a convex weight list.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

pub(crate) fn check_convex(weights: impl IntoIterator<Item = f64>, what: &str) -> Result<()> {
    let mut sum = 0.0;
    for w in weights {
        if !(0.0..=1.0).contains(&w) {
            return Err(error::invalid(format!("{what}: weight {w} outside [0, 1]")));
        }
        sum += w;
    }
    if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(error::invalid(format!(
            "{what}: weights sum to {sum}, expected 1"
        )));
    }
    Ok(())
}
