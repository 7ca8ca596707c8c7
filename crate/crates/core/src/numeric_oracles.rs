//! Independent numerical machinery used to cross-check the closed forms:
//! a fixed-step RK4 integrator, central-difference differentiators and a
//! brute-force grid maximizer.

use crate::error::{domain, invalid, Error, Result};

/// Default central-difference step.
pub const DEFAULT_DIFF_STEP: f64 = 1e-5;

/// A scalar initial-value problem `y' = rhs(x, y)` on `[x_start, x_end]`.
pub struct IntegrationSpec<F> {
    pub x_start: f64,
    pub x_end: f64,
    pub steps: usize,
    pub rhs: F,
}

impl<F> IntegrationSpec<F>
where
    F: Fn(f64, f64) -> f64,
{
    pub fn new(x_start: f64, x_end: f64, steps: usize, rhs: F) -> Result<Self> {
        if steps == 0 {
            return Err(invalid("integration needs at least one step"));
        }
        if !(x_start.is_finite() && x_end.is_finite() && x_start < x_end) {
            return Err(invalid(format!(
                "integration interval [{x_start}, {x_end}] must be finite with x_start < x_end"
            )));
        }
        Ok(Self {
            x_start,
            x_end,
            steps,
            rhs,
        })
    }
}

/// Classical fourth-order Runge-Kutta with a fixed step, returning the
/// estimate of `y(x_end)`.
pub fn rk4_integrate<F>(spec: &IntegrationSpec<F>, y_start: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let h = (spec.x_end - spec.x_start) / spec.steps as f64;
    let f = &spec.rhs;
    let mut y = y_start;
    for i in 0..spec.steps {
        // Recompute x from the index so the last step lands on x_end.
        let x = spec.x_start + h * i as f64;
        let k1 = f(x, y);
        let k2 = f(x + 0.5 * h, y + 0.5 * h * k1);
        let k3 = f(x + 0.5 * h, y + 0.5 * h * k2);
        let k4 = f(x + h, y + h * k3);
        y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !y.is_finite() {
            return Err(Error::NumericalFailure(format!(
                "non-finite state after step {} at x = {}",
                i + 1,
                x + h
            )));
        }
    }
    Ok(y)
}

/// Central-difference configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffSpec {
    pub h: f64,
}

impl Default for DiffSpec {
    fn default() -> Self {
        Self {
            h: DEFAULT_DIFF_STEP,
        }
    }
}

impl DiffSpec {
    pub fn new(h: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return Err(invalid(format!("difference step must be > 0, got {h}")));
        }
        Ok(Self { h })
    }

    /// Step `rel·|x|` (`rel` at `x = 0`), for functions whose natural length
    /// scale is `|x|`, such as `1/x`. Second differences divide rounding
    /// noise by `h²`, so they need a larger `rel` than first differences.
    pub fn scaled(x: f64, rel: f64) -> Self {
        let scale = if x == 0.0 { 1.0 } else { x.abs() };
        Self { h: rel * scale }
    }
}

/// Relative step for [`DiffSpec::scaled`] when taking first differences.
pub const FIRST_DIFF_REL_STEP: f64 = 1e-5;

/// Relative step for [`DiffSpec::scaled`] when taking second differences.
pub const SECOND_DIFF_REL_STEP: f64 = 1e-4;

fn eval<F>(f: &F, x: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    f(x).map_err(|e| match e {
        Error::Domain(msg) => domain(format!("stencil point {x} left the domain: {msg}")),
        other => other,
    })
}

/// `(f(x+h) - f(x-h)) / 2h`
pub fn central_diff_first<F>(f: F, x: f64, spec: DiffSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = spec.h;
    let ahead = eval(&f, x + h)?;
    let behind = eval(&f, x - h)?;
    Ok((ahead - behind) / (2.0 * h))
}

/// `(f(x+h) - 2 f(x) + f(x-h)) / h^2`
pub fn central_diff_second<F>(f: F, x: f64, spec: DiffSpec) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let h = spec.h;
    let ahead = eval(&f, x + h)?;
    let centre = eval(&f, x)?;
    let behind = eval(&f, x - h)?;
    Ok((ahead - 2.0 * centre + behind) / (h * h))
}

/// Brute-force maximizer over an ordered grid. Ties resolve to the leftmost
/// grid point; NaN evaluations never win. Returns `None` for an empty grid
/// or when every evaluation is NaN.
pub fn grid_argmax<F>(f: F, grid: &[f64]) -> Option<(f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut best: Option<(f64, f64)> = None;
    for &x in grid {
        let v = f(x);
        if v.is_nan() {
            continue;
        }
        match best {
            Some((_, bv)) if v <= bv => {}
            _ => best = Some((x, v)),
        }
    }
    best
}

/// `points` values spaced linearly over `[start, end]`, endpoints included.
pub fn linspace(start: f64, end: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        end
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<f64> {
        move |x| Ok(f(x))
    }

    #[test]
    fn rk4_exponential() {
        let spec = IntegrationSpec::new(0.0, 1.0, 100, |_, y| y).unwrap();
        let y = rk4_integrate(&spec, 1.0).unwrap();
        assert!((y - std::f64::consts::E).abs() < 1e-8, "{y}");
    }

    #[test]
    fn rk4_constant_field_is_exact() {
        let spec = IntegrationSpec::new(-2.0, 7.5, 13, |_, _| 0.0).unwrap();
        assert_eq!(rk4_integrate(&spec, 4.25).unwrap(), 4.25);
    }

    #[test]
    fn rk4_fourth_order_ratio() {
        let err = |steps| {
            let spec = IntegrationSpec::new(0.0, 1.0, steps, |_, y| y).unwrap();
            (rk4_integrate(&spec, 1.0).unwrap() - std::f64::consts::E).abs()
        };
        for steps in [4, 8, 16, 32] {
            let ratio = err(steps) / err(2 * steps);
            assert!(ratio >= 14.0, "steps {steps}: ratio {ratio}");
        }
    }

    #[test]
    fn rk4_reports_blow_up() {
        let spec = IntegrationSpec::new(0.0, 1.0, 10, |_, y| y * y * 1e300).unwrap();
        assert!(matches!(
            rk4_integrate(&spec, 1.0),
            Err(Error::NumericalFailure(_))
        ));
    }

    #[test]
    fn integration_spec_validation() {
        assert!(IntegrationSpec::new(0.0, 1.0, 0, |_, y| y).is_err());
        assert!(IntegrationSpec::new(1.0, 1.0, 5, |_, y| y).is_err());
        assert!(IntegrationSpec::new(2.0, 1.0, 5, |_, y| y).is_err());
        assert!(DiffSpec::new(0.0).is_err());
        assert!(DiffSpec::new(-1e-3).is_err());
    }

    #[test]
    fn central_differences_on_square() {
        let sq = ok(|x| x * x);
        let d1 = central_diff_first(&sq, 3.0, DiffSpec::default()).unwrap();
        assert!((d1 - 6.0).abs() < 1e-9);
        let d2 =
            central_diff_second(&sq, 3.0, DiffSpec::scaled(3.0, SECOND_DIFF_REL_STEP)).unwrap();
        assert!((d2 - 2.0).abs() < 1e-6, "{d2}");
        // At h = 1e-5 the rounding noise alone is ~eps·9/h² ≈ 2e-5.
        let coarse = central_diff_second(&sq, 3.0, DiffSpec::default()).unwrap();
        assert!((coarse - 2.0).abs() < 1e-4);
    }

    #[test]
    fn scaled_step_tracks_small_arguments() {
        let inv = ok(|x| 1.0 / x);
        for x in [1e-3, 0.05, 2.0, 80.0] {
            let d1 = central_diff_first(&inv, x, DiffSpec::scaled(x, FIRST_DIFF_REL_STEP)).unwrap();
            let d2 =
                central_diff_second(&inv, x, DiffSpec::scaled(x, SECOND_DIFF_REL_STEP)).unwrap();
            assert!((d1 * x * x + 1.0).abs() < 1e-8, "{x}: {d1}");
            assert!((d2 * x * x * x / 2.0 - 1.0).abs() < 1e-6, "{x}: {d2}");
        }
        assert_eq!(DiffSpec::scaled(0.0, 1e-4).h, 1e-4);
    }

    #[test]
    fn central_difference_exact_on_affine() {
        let spec = DiffSpec::new(0.25).unwrap();
        for x in [-3.0, 0.0, 0.5, 11.0] {
            let d = central_diff_first(ok(|x| 2.5 * x - 1.0), x, spec).unwrap();
            assert!((d - 2.5).abs() < 1e-12);
        }
    }

    #[test]
    fn central_difference_domain_error() {
        let sqrt = |x: f64| {
            if x < 0.0 {
                Err(domain("negative"))
            } else {
                Ok(x.sqrt())
            }
        };
        let r = central_diff_first(sqrt, 1e-6, DiffSpec::default());
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn argmax_symmetric_peak() {
        let grid = linspace(0.0, 4.0, 401);
        let (x, v) = grid_argmax(|x| -(x - 2.0) * (x - 2.0), &grid).unwrap();
        assert!((x - 2.0).abs() < 1e-12);
        assert!(v.abs() < 1e-20);
    }

    #[test]
    fn argmax_leftmost_tie() {
        let grid = [0.5, 1.0, 1.5];
        assert_eq!(grid_argmax(|_| 3.0, &grid), Some((0.5, 3.0)));
        assert_eq!(grid_argmax(|x| x, &[]), None);
        assert_eq!(grid_argmax(|_| f64::NAN, &grid), None);
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(0.0, 1.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert_eq!(linspace(3.0, 9.0, 1), vec![3.0]);
        assert!(linspace(0.0, 1.0, 0).is_empty());
    }
}
