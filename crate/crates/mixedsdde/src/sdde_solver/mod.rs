//! Euler scheme for the mixed stochastic delay differential equation and the
//! existence-construction variant that folds the mollified rough driver into
//! a random drift.
//!
//! The scheme is explicit left-point Euler for all three integrals: left-point
//! evaluation preserves adaptedness for the Itô part and is the standard
//! first-order pathwise rule for the Young part.

pub mod coefficients;
pub mod oracle;

use crate::driver_paths::{derivative_of_smoothed, stop_driver, stopping_time_tau_n, InitialSegment};
use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::holder_norms::{one_norm_history, sup_norm_history};

use coefficients::CoefficientSet;

/// A read-only view of the recent past of a path: s ∈ [−r, 0] maps to the
/// value at (anchor + s) by piecewise-linear grid lookup. Evaluation never
/// reads beyond the anchor, which enforces adaptedness structurally.
pub struct SegmentView<'a> {
    grid: &'a TimeGrid,
    values: &'a [f64],
    dims: usize,
    anchor_index: usize,
    delay: f64,
}

impl<'a> SegmentView<'a> {
    /// View a standalone path on [−r, 0] as a segment anchored at 0.
    pub fn standalone(path: &'a SamplePath) -> Self {
        let grid = path.grid();
        Self {
            grid,
            values: path.values(),
            dims: path.dims(),
            anchor_index: grid.n_steps(),
            delay: grid.t_end() - grid.t_start(),
        }
    }

    pub fn anchor_time(&self) -> f64 {
        self.grid.point(self.anchor_index)
    }

    pub fn delay(&self) -> f64 {
        self.delay
    }

    /// Evaluate at s ∈ [−r, 0] relative to the anchor.
    pub fn eval_into(&self, s: f64, out: &mut [f64]) {
        debug_assert!(
            s <= 1e-12 && s >= -self.delay - 1e-9,
            "segment argument {s} outside [-{}, 0]",
            self.delay
        );
        let t = (self.anchor_time() + s.min(0.0)).max(self.grid.t_start());
        // Clamp the cell so the interpolation endpoints never pass the anchor.
        let k = self.grid.cell_index(t).min(self.anchor_index.max(1) - 1);
        let t_k = self.grid.point(k);
        let w = ((t - t_k) / self.grid.dt()).clamp(0.0, 1.0);
        let a = &self.values[k * self.dims..(k + 1) * self.dims];
        let b = &self.values[(k + 1) * self.dims..(k + 2) * self.dims];
        for j in 0..self.dims {
            out[j] = a[j] + w * (b[j] - a[j]);
        }
    }

    pub fn eval(&self, s: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dims];
        self.eval_into(s, &mut out);
        out
    }

    /// First coordinate at s ∈ [−r, 0].
    pub fn eval_scalar(&self, s: f64) -> f64 {
        let t = (self.anchor_time() + s.min(0.0)).max(self.grid.t_start());
        let k = self.grid.cell_index(t).min(self.anchor_index.max(1) - 1);
        let t_k = self.grid.point(k);
        let w = ((t - t_k) / self.grid.dt()).clamp(0.0, 1.0);
        let a = self.values[k * self.dims];
        let b = self.values[(k + 1) * self.dims];
        a + w * (b - a)
    }

    /// Sup of the Euclidean norm over the segment's grid points.
    pub fn sup_norm(&self) -> f64 {
        let r_steps = (self.delay / self.grid.dt()).round() as usize;
        let lo = self.anchor_index.saturating_sub(r_steps);
        (lo..=self.anchor_index)
            .map(|k| {
                self.values[k * self.dims..(k + 1) * self.dims]
                    .iter()
                    .map(|v| v * v)
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

/// The exponent triple (α, γ, θ) a problem is posed under.
#[derive(Debug, Clone, Copy)]
pub struct Exponents {
    pub alpha: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl Exponents {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.5 && self.gamma < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (1/2, 1), got {}",
                self.gamma
            )));
        }
        if self.theta <= 1.0 - self.gamma {
            return Err(Error::InvalidParameter(format!(
                "theta = {} must exceed 1 - gamma = {}",
                self.theta,
                1.0 - self.gamma
            )));
        }
        let hi = self.theta.min(0.5);
        if !(self.alpha > 1.0 - self.gamma && self.alpha < hi) {
            return Err(Error::InvalidParameter(format!(
                "alpha = {} must lie in ({}, {hi})",
                self.alpha,
                1.0 - self.gamma
            )));
        }
        Ok(())
    }
}

/// A fully assembled problem: coefficients, initial segment, drivers on a
/// shared [0, T] grid, and the exponents.
pub struct SddeProblem<'a> {
    pub coefficients: &'a CoefficientSet,
    pub initial: &'a InitialSegment,
    pub wiener: &'a SamplePath,
    pub driver: &'a SamplePath,
    pub exponents: Exponents,
}

impl<'a> SddeProblem<'a> {
    pub fn new(
        coefficients: &'a CoefficientSet,
        initial: &'a InitialSegment,
        wiener: &'a SamplePath,
        driver: &'a SamplePath,
        exponents: Exponents,
    ) -> Result<Self> {
        exponents.validate()?;
        if initial.theta != exponents.theta {
            return Err(Error::InvalidParameter(format!(
                "initial segment theta {} disagrees with declared theta {}",
                initial.theta, exponents.theta
            )));
        }
        initial.validate_against_driver(exponents.gamma)?;
        coefficients.metadata.validate(exponents.gamma)?;
        if wiener.grid() != driver.grid() {
            return Err(Error::GridMismatch("W and Z must share a grid".into()));
        }
        if wiener.grid().t_start().abs() > 1e-12 {
            return Err(Error::InvalidGrid("drivers must start at 0".into()));
        }
        if wiener.dims() != coefficients.dim_wiener {
            return Err(Error::DimensionMismatch(format!(
                "W has {} dims, coefficients expect m = {}",
                wiener.dims(),
                coefficients.dim_wiener
            )));
        }
        if driver.dims() != coefficients.dim_driver {
            return Err(Error::DimensionMismatch(format!(
                "Z has {} dims, coefficients expect l = {}",
                driver.dims(),
                coefficients.dim_driver
            )));
        }
        if initial.values.dims() != coefficients.dim_state {
            return Err(Error::DimensionMismatch(format!(
                "initial segment has {} dims, coefficients expect d = {}",
                initial.values.dims(),
                coefficients.dim_state
            )));
        }
        let dt_hist = initial.values.grid().dt();
        let dt_main = wiener.grid().dt();
        if (dt_hist - dt_main).abs() > 1e-9 * dt_main {
            return Err(Error::GridMismatch(format!(
                "history step {dt_hist} differs from driver step {dt_main}"
            )));
        }
        Ok(Self {
            coefficients,
            initial,
            wiener,
            driver,
            exponents,
        })
    }

    pub fn horizon(&self) -> f64 {
        self.wiener.grid().t_end()
    }

    pub fn delay(&self) -> f64 {
        self.initial.r
    }
}

/// Which scheme produced a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolverTag {
    Euler,
    Smoothed { threshold: f64, mollify: u32 },
    MethodOfSteps,
}

/// A solution on [−r, T] with the history prefilled by η.
#[derive(Debug, Clone)]
pub struct SolutionPath {
    pub path: SamplePath,
    pub solver: SolverTag,
    pub steps: usize,
    pub max_increment: f64,
}

/// Direct Euler scheme for the mixed equation:
/// X(t_{k+1}) = X(t_k) + a·dt + b·ΔW_k + c·ΔZ_k, left-point throughout.
pub fn euler_solve(problem: &SddeProblem<'_>) -> Result<SolutionPath> {
    euler_core(problem, None, SolverTag::Euler)
}

/// The existence-construction scheme: stop the driver at τ_N, mollify it,
/// and run a classical SDDE with random drift a + c·(d/ds)Z^{N,n}.
/// `threshold` may be infinite to skip the stopping entirely.
pub fn smoothed_solve(
    problem: &SddeProblem<'_>,
    threshold: f64,
    n_mollify: u32,
) -> Result<SolutionPath> {
    let alpha = problem.exponents.alpha;
    let z = problem.driver;
    let zn = if threshold.is_finite() {
        let tau = stopping_time_tau_n(z, alpha, threshold)?;
        stop_driver(z, tau)?
    } else {
        z.clone()
    };
    let zdot = derivative_of_smoothed(&zn, n_mollify)?;
    euler_core(
        problem,
        Some(&zdot),
        SolverTag::Smoothed {
            threshold,
            mollify: n_mollify,
        },
    )
}

fn euler_core(
    problem: &SddeProblem<'_>,
    drift_rate: Option<&SamplePath>,
    tag: SolverTag,
) -> Result<SolutionPath> {
    let coeffs = problem.coefficients;
    let (d, m, l) = (coeffs.dim_state, coeffs.dim_wiener, coeffs.dim_driver);
    let r = problem.delay();
    let t_end = problem.horizon();
    let n_hist = problem.initial.values.grid().n_steps();
    let n_main = problem.wiener.grid().n_steps();
    let grid = TimeGrid::new(-r, t_end, n_hist + n_main)?;
    let dt = problem.wiener.grid().dt();

    let mut values = vec![0.0; grid.n_points() * d];
    values[..(n_hist + 1) * d].copy_from_slice(problem.initial.values.values());

    // Shape check before stepping.
    {
        let seg = SegmentView {
            grid: &grid,
            values: &values,
            dims: d,
            anchor_index: n_hist,
            delay: r,
        };
        let t0 = grid.point(n_hist);
        let a = (coeffs.drift)(t0, &seg);
        let b = (coeffs.diffusion)(t0, &seg);
        let c = (coeffs.young)(t0, &seg);
        if a.len() != d || b.len() != d * m || c.len() != d * l {
            return Err(Error::DimensionMismatch(format!(
                "coefficient shapes ({}, {}, {}) do not match (d, d*m, d*l) = ({d}, {}, {})",
                a.len(),
                b.len(),
                c.len(),
                d * m,
                d * l
            )));
        }
    }

    let mut max_increment = 0.0f64;
    for k in n_hist..(n_hist + n_main) {
        let t = grid.point(k);
        let kw = k - n_hist;
        let mut next = vec![0.0; d];
        {
            let seg = SegmentView {
                grid: &grid,
                values: &values,
                dims: d,
                anchor_index: k,
                delay: r,
            };
            let a = (coeffs.drift)(t, &seg);
            let b = (coeffs.diffusion)(t, &seg);
            let c = (coeffs.young)(t, &seg);
            let w_prev = problem.wiener.row(kw);
            let w_next = problem.wiener.row(kw + 1);
            let cur = &values[k * d..(k + 1) * d];
            for i in 0..d {
                let mut inc = a[i] * dt;
                for j in 0..m {
                    inc += b[i * m + j] * (w_next[j] - w_prev[j]);
                }
                match drift_rate {
                    Some(rate) => {
                        let rate_row = rate.row(kw);
                        for j in 0..l {
                            inc += c[i * l + j] * rate_row[j] * dt;
                        }
                    }
                    None => {
                        let z_prev = problem.driver.row(kw);
                        let z_next = problem.driver.row(kw + 1);
                        for j in 0..l {
                            inc += c[i * l + j] * (z_next[j] - z_prev[j]);
                        }
                    }
                }
                max_increment = max_increment.max(inc.abs());
                next[i] = cur[i] + inc;
            }
        }
        if next.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolverBlowup { step: k - n_hist });
        }
        values[(k + 1) * d..(k + 2) * d].copy_from_slice(&next);
    }

    Ok(SolutionPath {
        path: SamplePath::new(grid, d, values)?,
        solver: tag,
        steps: n_main,
        max_increment,
    })
}

/// Sup-distance and total-norm distance between two solutions on a shared
/// grid with shared history.
#[derive(Debug, Clone, Copy)]
pub struct DistanceReport {
    pub sup: f64,
    pub one: f64,
}

impl DistanceReport {
    pub fn total(&self) -> f64 {
        self.sup + self.one
    }
}

pub fn solution_distance(
    x: &SolutionPath,
    y: &SolutionPath,
    alpha: f64,
    t: f64,
) -> Result<DistanceReport> {
    let diff = x.path.difference(&y.path)?;
    Ok(DistanceReport {
        sup: sup_norm_history(&diff, t)?,
        one: one_norm_history(&diff, t, alpha)?,
    })
}
