//! Market value `V_m` against true value `V_t` under inflationary and
//! deflationary feedback.
//!
//! The feedback gains reduce to the homogeneous first-order ODE
//! `y' = β·y/x − β` with `x = V_t`, `y = V_m` and `β = 1/(c⁺ − c⁻)`, whose
//! general solution for `β ≠ 1` is `y = K·x^β + β/(β−1)·x`. The default
//! `K = 1/(β−1)` is the member obtained when the quadrature constant is
//! dropped. For `β = 1` the family becomes `y = K·x − x·ln x`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};

/// Inflationary (`c_plus`) and deflationary (`c_minus`) feedback gains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeedbackCoefficients {
    c_plus: f64,
    c_minus: f64,
}

impl FeedbackCoefficients {
    pub fn new(c_plus: f64, c_minus: f64) -> Result<Self> {
        for (name, v) in [("c_plus", c_plus), ("c_minus", c_minus)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(Self { c_plus, c_minus })
    }

    pub fn c_plus(&self) -> f64 {
        self.c_plus
    }

    pub fn c_minus(&self) -> f64 {
        self.c_minus
    }
}

/// The solution exponent `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaParam(f64);

impl BetaParam {
    pub fn new(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(invalid(format!("beta must be finite, got {beta}")));
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `β = 1` needs the logarithmic closed form.
    pub fn is_singular(self) -> bool {
        self.0 == 1.0
    }
}

/// Outcome of turning feedback gains into an exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeedbackRegime {
    Finite(BetaParam),
    /// `c⁺ = c⁻`: `|β| → ∞` and the market value collapses onto `V_m = V_t`.
    Balanced,
}

/// One member of the solution family, selected by the coefficient `K` of
/// the homogeneous `x^β` term.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralSolution {
    beta: BetaParam,
    homog_coeff: f64,
}

impl GeneralSolution {
    pub fn new(beta: BetaParam, homog_coeff: f64) -> Result<Self> {
        if !homog_coeff.is_finite() {
            return Err(invalid(format!(
                "homog_coeff must be finite, got {homog_coeff}"
            )));
        }
        Ok(Self { beta, homog_coeff })
    }

    /// The member with `K = 1/(β−1)`.
    pub fn with_default_coeff(beta: BetaParam) -> Result<Self> {
        if beta.is_singular() {
            return Err(Error::SingularBeta);
        }
        Self::new(beta, default_homog_coeff(beta.value()))
    }

    pub fn beta(&self) -> BetaParam {
        self.beta
    }

    pub fn homog_coeff(&self) -> f64 {
        self.homog_coeff
    }
}

pub fn default_homog_coeff(beta: f64) -> f64 {
    1.0 / (beta - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValuePoint {
    pub true_value: f64,
    pub market_value: f64,
}

fn positive_value(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("true value must be > 0, got {x}")))
    }
}

/// `β = 1/(c⁺ − c⁻)`, or the balanced regime when the gains coincide.
pub fn beta_from_coeffs(fc: FeedbackCoefficients) -> FeedbackRegime {
    let diff = fc.c_plus - fc.c_minus;
    if diff == 0.0 {
        return FeedbackRegime::Balanced;
    }
    match BetaParam::new(1.0 / diff) {
        Ok(b) => FeedbackRegime::Finite(b),
        // Subnormal differences overflow the reciprocal.
        Err(_) => FeedbackRegime::Balanced,
    }
}

/// Instantaneous adjustment `ρ = (c⁺ − c⁻)·dV_m/dV_t`.
pub fn rho_instantaneous(fc: FeedbackCoefficients, dvm_dvt: f64) -> f64 {
    (fc.c_plus - fc.c_minus) * dvm_dvt
}

/// `F(y/x) = β·(y/x) − β`
pub fn ode_rhs(beta: BetaParam, x: f64, y: f64) -> Result<f64> {
    positive_value(x)?;
    Ok(beta.0 * (y / x) - beta.0)
}

/// `V_m = K·V_t^β + β/(β−1)·V_t`
pub fn analytic_market_value(sol: &GeneralSolution, vt: f64) -> Result<f64> {
    if sol.beta.is_singular() {
        return Err(Error::SingularBeta);
    }
    positive_value(vt)?;
    let b = sol.beta.0;
    Ok(sol.homog_coeff * vt.powf(b) + b / (b - 1.0) * vt)
}

/// `V_m = K·V_t − V_t·ln V_t`, the `β = 1` family.
pub fn beta_one_market_value(homog_coeff: f64, vt: f64) -> Result<f64> {
    positive_value(vt)?;
    Ok(homog_coeff * vt - vt * vt.ln())
}

/// Derivative of [`beta_one_market_value`]: `K − ln x − 1`.
pub fn beta_one_slope(homog_coeff: f64, x: f64) -> Result<f64> {
    positive_value(x)?;
    Ok(homog_coeff - x.ln() - 1.0)
}

/// `dy/dx = K·β·x^{β−1} + β/(β−1)`
pub fn closed_form_slope(sol: &GeneralSolution, x: f64) -> Result<f64> {
    if sol.beta.is_singular() {
        return Err(Error::SingularBeta);
    }
    positive_value(x)?;
    let b = sol.beta.0;
    Ok(sol.homog_coeff * b * x.powf(b - 1.0) + b / (b - 1.0))
}

/// Market value for any `β`, dispatching to the logarithmic form at `β = 1`.
pub fn market_value_any(beta: BetaParam, homog_coeff: f64, vt: f64) -> Result<f64> {
    if beta.is_singular() {
        beta_one_market_value(homog_coeff, vt)
    } else {
        analytic_market_value(&GeneralSolution::new(beta, homog_coeff)?, vt)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitProbe {
    pub true_value: f64,
    /// `(β, V_m − V_t)` with the default coefficient.
    pub gaps: Vec<(f64, f64)>,
    /// Set for `0 < V_t < 1`, where `V_t^β` grows without bound as `β → −∞`.
    pub divergent: bool,
}

impl LimitProbe {
    /// Whether `|gap|` strictly decreases along the probe.
    pub fn converging(&self) -> bool {
        self.gaps.windows(2).all(|w| w[1].1.abs() < w[0].1.abs())
    }
}

/// Gap `V_m − V_t` along a strictly decreasing list of negative exponents.
pub fn limit_probe(vt: f64, betas: &[f64]) -> Result<LimitProbe> {
    positive_value(vt)?;
    if let Some(b) = betas.iter().find(|b| !(**b < 0.0 && b.is_finite())) {
        return Err(domain(format!("probe exponents must be negative, got {b}")));
    }
    if betas.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(domain("probe exponents must be strictly decreasing"));
    }
    let gaps = betas
        .iter()
        .map(|&b| {
            let sol = GeneralSolution::with_default_coeff(BetaParam::new(b)?)?;
            Ok((b, analytic_market_value(&sol, vt)? - vt))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitProbe {
        true_value: vt,
        gaps,
        divergent: vt < 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GapReport {
    Finite {
        beta: f64,
        gap: f64,
    },
    /// Balanced gains: the limiting gap is zero.
    BalancedLimit,
}

impl GapReport {
    pub fn gap(&self) -> f64 {
        match *self {
            GapReport::Finite { gap, .. } => gap,
            GapReport::BalancedLimit => 0.0,
        }
    }
}

/// `V_m − V_t` for the given gains with the default coefficient.
pub fn market_gap(fc: FeedbackCoefficients, vt: f64) -> Result<GapReport> {
    positive_value(vt)?;
    match beta_from_coeffs(fc) {
        FeedbackRegime::Balanced => Ok(GapReport::BalancedLimit),
        FeedbackRegime::Finite(beta) => {
            let sol = GeneralSolution::with_default_coeff(beta)?;
            Ok(GapReport::Finite {
                beta: beta.value(),
                gap: analytic_market_value(&sol, vt)? - vt,
            })
        }
    }
}

/// The factored slope `β/(β−1)·(x^{β−1} + β)` as it is sometimes written
/// for the default member. It does not match the derivative of the
/// solution; kept only so the audit can measure the mismatch.
pub fn misfactored_slope(beta: f64, x: f64) -> f64 {
    beta / (beta - 1.0) * (x.powf(beta - 1.0) + beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric_oracles::{central_diff_first, linspace, DiffSpec};

    fn beta(b: f64) -> BetaParam {
        BetaParam::new(b).unwrap()
    }

    fn fc(p: f64, m: f64) -> FeedbackCoefficients {
        FeedbackCoefficients::new(p, m).unwrap()
    }

    #[test]
    fn beta_examples() {
        assert_eq!(
            beta_from_coeffs(fc(1.5, 1.0)),
            FeedbackRegime::Finite(beta(2.0))
        );
        assert_eq!(
            beta_from_coeffs(fc(1.0, 1.5)),
            FeedbackRegime::Finite(beta(-2.0))
        );
        assert_eq!(beta_from_coeffs(fc(0.8, 0.8)), FeedbackRegime::Balanced);
        assert!(FeedbackCoefficients::new(-0.1, 0.0).is_err());
        assert!(BetaParam::new(f64::INFINITY).is_err());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho_instantaneous(fc(1.5, 1.0), 2.0), 1.0);
        assert_eq!(rho_instantaneous(fc(0.4, 0.4), 17.0), 0.0);
        assert_eq!(rho_instantaneous(fc(0.0, 1.0), 1.0), -1.0);
    }

    #[test]
    fn rhs_examples() {
        assert_eq!(ode_rhs(beta(2.0), 3.0, 15.0).unwrap(), 8.0);
        for b in [-7.0, -0.5, 1.0, 4.0] {
            assert_eq!(ode_rhs(beta(b), 2.5, 2.5).unwrap(), 0.0);
        }
        assert!(matches!(
            ode_rhs(beta(2.0), 0.0, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn analytic_examples() {
        let s = GeneralSolution::new(beta(2.0), 1.0).unwrap();
        assert_eq!(analytic_market_value(&s, 3.0).unwrap(), 15.0);
        let s = GeneralSolution::with_default_coeff(beta(-2.0)).unwrap();
        assert!((s.homog_coeff() + 1.0 / 3.0).abs() < 1e-15);
        assert!((analytic_market_value(&s, 2.0).unwrap() - 1.25).abs() < 1e-12);
        let s = GeneralSolution::new(beta(1.0), 1.0).unwrap();
        assert_eq!(analytic_market_value(&s, 2.0), Err(Error::SingularBeta));
        assert_eq!(closed_form_slope(&s, 2.0), Err(Error::SingularBeta));
        assert_eq!(
            GeneralSolution::with_default_coeff(beta(1.0)),
            Err(Error::SingularBeta)
        );
        let s = GeneralSolution::new(beta(2.0), 1.0).unwrap();
        assert!(matches!(
            analytic_market_value(&s, -1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn beta_one_examples() {
        assert_eq!(beta_one_market_value(2.0, 1.0).unwrap(), 2.0);
        let e = std::f64::consts::E;
        assert!(beta_one_market_value(1.0, e).unwrap().abs() < 1e-15);
        assert!(beta_one_market_value(1.0, 0.0).is_err());
        for x in linspace(0.5, 5.0, 37) {
            for k in [0.0, 2.0, -1.3] {
                let y = beta_one_market_value(k, x).unwrap();
                let fd =
                    central_diff_first(|t| beta_one_market_value(k, t), x, DiffSpec::default())
                        .unwrap();
                let rhs = ode_rhs(beta(1.0), x, y).unwrap();
                assert!((fd - rhs).abs() < 1e-9, "x={x} k={k}");
                assert!((beta_one_slope(k, x).unwrap() - rhs).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn slope_examples() {
        let s = GeneralSolution::new(beta(2.0), 1.0).unwrap();
        assert_eq!(closed_form_slope(&s, 3.0).unwrap(), 8.0);
        let s = GeneralSolution::with_default_coeff(beta(-2.0)).unwrap();
        assert!((closed_form_slope(&s, 1.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn family_satisfies_ode() {
        for b in [-5.0, -2.0, -0.5, 2.0, 3.0] {
            for k in [0.0, 1.0, -3.7, default_homog_coeff(b)] {
                let s = GeneralSolution::new(beta(b), k).unwrap();
                for x in linspace(0.5, 5.0, 50) {
                    let y = analytic_market_value(&s, x).unwrap();
                    let rhs = ode_rhs(beta(b), x, y).unwrap();
                    let slope = closed_form_slope(&s, x).unwrap();
                    assert!(
                        (slope - rhs).abs() <= 1e-12 * rhs.abs().max(1.0),
                        "b={b} k={k} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_reconstructs_market_value() {
        for (p, m) in [(1.5, 1.0), (1.0, 1.5), (0.2, 2.2), (3.0, 2.7)] {
            let f = fc(p, m);
            let FeedbackRegime::Finite(b) = beta_from_coeffs(f) else {
                panic!()
            };
            let s = GeneralSolution::with_default_coeff(b).unwrap();
            for x in linspace(0.5, 5.0, 10) {
                let y = analytic_market_value(&s, x).unwrap();
                let rho = rho_instantaneous(f, closed_form_slope(&s, x).unwrap());
                assert!(((rho + 1.0) * x - y).abs() < 1e-9 * y.abs().max(1.0));
            }
        }
    }

    #[test]
    fn probe_examples() {
        let p = limit_probe(2.0, &[-10.0]).unwrap();
        assert!((p.gaps[0].1 + 0.181907).abs() < 1e-6);
        let p = limit_probe(2.0, &[-1000.0]).unwrap();
        assert!((p.gaps[0].1 + 0.0019980).abs() < 1e-7);
        assert!(p.gaps[0].1.abs() < 0.002);
        let p = limit_probe(2.0, &[-10.0, -100.0, -1000.0]).unwrap();
        assert!(p.converging() && !p.divergent);
        assert!(p.gaps.iter().all(|g| g.1 < 0.0));
        let p = limit_probe(0.5, &[-100.0]).unwrap();
        assert!(p.divergent);
        assert!(p.gaps[0].1.abs() > 1e25);
        assert!(limit_probe(2.0, &[-10.0, -5.0]).is_err());
        assert!(limit_probe(2.0, &[1.0]).is_err());
    }

    #[test]
    fn gap_examples() {
        let r = market_gap(fc(1.0, 1.001), 2.0).unwrap();
        match r {
            GapReport::Finite { beta, gap } => {
                assert!((beta + 1000.0).abs() < 1e-6);
                assert!((gap + 0.0019980).abs() < 1e-7);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            market_gap(fc(0.3, 0.3), 2.0).unwrap(),
            GapReport::BalancedLimit
        );
        assert_eq!(GapReport::BalancedLimit.gap(), 0.0);
        assert_eq!(
            market_gap(fc(1.0, 0.5), 3.0).unwrap(),
            GapReport::Finite {
                beta: 2.0,
                gap: 12.0
            }
        );
        assert_eq!(market_gap(fc(1.5, 0.5), 3.0), Err(Error::SingularBeta));
    }

    #[test]
    fn misfactored_slope_disagrees() {
        let b = 2.0;
        let s = GeneralSolution::with_default_coeff(beta(b)).unwrap();
        let x = 3.0;
        let good = closed_form_slope(&s, x).unwrap();
        assert_eq!(good, 8.0);
        assert_eq!(misfactored_slope(b, x), 10.0);
    }
}
