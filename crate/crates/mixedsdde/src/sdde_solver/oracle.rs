//! Independent reference solutions the solver tests are checked against:
//! a high-order method-of-steps integrator for deterministic affine delay
//! ODEs, and the closed form for the mixed geometric equation.

use crate::driver_paths::InitialSegment;
use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::sdde_solver::{SolutionPath, SolverTag};

/// A deterministic affine delay ODE
/// x'(t) = A x(t) + Σ_i B_i x(t − r_i), with history η on [−r, 0].
/// Matrices are d×d row-major; all lags must be positive and at most r.
pub struct DelayOdeSpec<'a> {
    pub dim: usize,
    pub state_matrix: Vec<f64>,
    pub lag_terms: Vec<(f64, Vec<f64>)>,
    pub initial: &'a InitialSegment,
    pub horizon: f64,
}

impl<'a> DelayOdeSpec<'a> {
    fn validate(&self) -> Result<()> {
        let d = self.dim;
        if d == 0 || self.initial.values.dims() != d {
            return Err(Error::DimensionMismatch(
                "delay ODE dimension disagrees with history".into(),
            ));
        }
        if self.state_matrix.len() != d * d {
            return Err(Error::DimensionMismatch("state matrix must be d*d".into()));
        }
        for (lag, mat) in &self.lag_terms {
            if !(*lag > 0.0 && *lag <= self.initial.r + 1e-12) {
                return Err(Error::InvalidParameter(format!(
                    "lag {lag} outside (0, r = {}]",
                    self.initial.r
                )));
            }
            if mat.len() != d * d {
                return Err(Error::DimensionMismatch("lag matrix must be d*d".into()));
            }
        }
        if !(self.horizon > 0.0) {
            return Err(Error::EmptyInterval {
                a: 0.0,
                b: self.horizon,
            });
        }
        Ok(())
    }
}

/// Solve a deterministic affine delay ODE by RK4 on a fine grid, returning the
/// solution on the coarse [−r, T] output grid (`out_steps` cells per the main
/// interval, `substeps` RK4 steps per output cell). Stochastic problems have
/// no place here: this oracle accepts only the affine structure above.
pub fn method_of_steps_oracle(
    spec: &DelayOdeSpec<'_>,
    out_steps: usize,
    substeps: usize,
) -> Result<SolutionPath> {
    spec.validate()?;
    if out_steps == 0 || substeps == 0 {
        return Err(Error::InvalidParameter(
            "out_steps and substeps must be positive".into(),
        ));
    }
    let d = spec.dim;
    let r = spec.initial.r;
    let t_end = spec.horizon;
    let h = t_end / (out_steps * substeps) as f64;
    let min_lag = spec
        .lag_terms
        .iter()
        .map(|(lag, _)| *lag)
        .fold(f64::INFINITY, f64::min);
    if min_lag < h && min_lag.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fine step {h} exceeds smallest lag {min_lag}; increase substeps"
        )));
    }

    // Fine history + solution storage; the history portion is resampled from η.
    let n_hist_fine = (r / h).ceil() as usize;
    let h_hist = r / n_hist_fine as f64;
    let n_main_fine = out_steps * substeps;
    let fine_times: Vec<f64> = (0..=n_hist_fine)
        .map(|k| -r + k as f64 * h_hist)
        .chain((1..=n_main_fine).map(|k| k as f64 * h))
        .collect();
    let n_fine = fine_times.len();
    let mut fine = vec![0.0; n_fine * d];
    for (k, &t) in fine_times.iter().take(n_hist_fine + 1).enumerate() {
        let row = spec.initial.values.at(t.min(0.0));
        fine[k * d..(k + 1) * d].copy_from_slice(&row);
    }

    // Linear interpolation in the filled portion of the fine storage.
    let lookup = |fine: &[f64], filled: usize, t: f64, out: &mut [f64]| {
        let t = t.clamp(fine_times[0], fine_times[filled]);
        // History and main portions are both uniform; locate by bisection.
        let mut lo = 0usize;
        let mut hi = filled;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if fine_times[mid] <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let span = fine_times[lo + 1] - fine_times[lo];
        let w = ((t - fine_times[lo]) / span).clamp(0.0, 1.0);
        for j in 0..d {
            let a = fine[lo * d + j];
            let b = fine[(lo + 1) * d + j];
            out[j] = a + w * (b - a);
        }
    };

    let rhs = |fine: &[f64], filled: usize, t: f64, x: &[f64], out: &mut [f64]| {
        for i in 0..d {
            let mut v = 0.0;
            for j in 0..d {
                v += spec.state_matrix[i * d + j] * x[j];
            }
            out[i] = v;
        }
        let mut delayed = vec![0.0; d];
        for (lag, mat) in &spec.lag_terms {
            lookup(fine, filled, t - lag, &mut delayed);
            for i in 0..d {
                for j in 0..d {
                    out[i] += mat[i * d + j] * delayed[j];
                }
            }
        }
    };

    let mut k1 = vec![0.0; d];
    let mut k2 = vec![0.0; d];
    let mut k3 = vec![0.0; d];
    let mut k4 = vec![0.0; d];
    let mut stage = vec![0.0; d];
    for step in 0..n_main_fine {
        let filled = n_hist_fine + step;
        let t = fine_times[filled];
        let x: Vec<f64> = fine[filled * d..(filled + 1) * d].to_vec();
        rhs(&fine, filled, t, &x, &mut k1);
        for j in 0..d {
            stage[j] = x[j] + 0.5 * h * k1[j];
        }
        rhs(&fine, filled, t + 0.5 * h, &stage, &mut k2);
        for j in 0..d {
            stage[j] = x[j] + 0.5 * h * k2[j];
        }
        rhs(&fine, filled, t + 0.5 * h, &stage, &mut k3);
        for j in 0..d {
            stage[j] = x[j] + h * k3[j];
        }
        rhs(&fine, filled, t + h, &stage, &mut k4);
        for j in 0..d {
            fine[(filled + 1) * d + j] =
                x[j] + h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }

    // Resample onto the coarse output grid.
    let n_hist_out = ((r / (t_end / out_steps as f64)).round() as usize).max(1);
    let grid = TimeGrid::new(-r, t_end, n_hist_out + out_steps)?;
    let mut values = vec![0.0; grid.n_points() * d];
    let mut row = vec![0.0; d];
    for k in 0..grid.n_points() {
        lookup(&fine, n_fine - 1, grid.point(k), &mut row);
        values[k * d..(k + 1) * d].copy_from_slice(&row);
    }
    Ok(SolutionPath {
        path: SamplePath::new(grid, d, values)?,
        solver: SolverTag::MethodOfSteps,
        steps: out_steps,
        max_increment: 0.0,
    })
}

/// Closed form for the scalar mixed geometric equation
/// dX = μ X dt + σ X dW + ν X dZ, X(0) = x0:
/// X(t) = x0 · exp((μ − σ²/2) t + σ W(t) + ν Z(t)).
pub fn geometric_mixed_closed_form(
    x0: f64,
    mu: f64,
    sigma: f64,
    nu: f64,
    w: &SamplePath,
    z: &SamplePath,
) -> Result<SamplePath> {
    if w.grid() != z.grid() {
        return Err(Error::GridMismatch(
            "W and Z must share a grid for the closed form".into(),
        ));
    }
    if w.dims() != 1 || z.dims() != 1 {
        return Err(Error::NoClosedForm(
            "the geometric closed form is scalar only".into(),
        ));
    }
    let grid = w.grid().clone();
    let mut k = 0usize;
    SamplePath::from_fn(grid.clone(), 1, move |t| {
        let v =
            x0 * ((mu - 0.5 * sigma * sigma) * t + sigma * w.scalar(k) + nu * z.scalar(k)).exp();
        k += 1;
        vec![v]
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::driver_paths::generate_wiener;
    use approx::assert_relative_eq;

    fn constant_history(r: f64, n: usize, x0: f64) -> InitialSegment {
        let g = TimeGrid::new(-r, 0.0, n).unwrap();
        InitialSegment::new(SamplePath::constant(g, &[x0]), 1.0).unwrap()
    }

    #[test]
    fn pure_delay_unit_history_closed_form() {
        // x'(t) = x(t - 1), η ≡ 1: x(1) = 2, x(2) = 3.5.
        let initial = constant_history(1.0, 64, 1.0);
        let spec = DelayOdeSpec {
            dim: 1,
            state_matrix: vec![0.0],
            lag_terms: vec![(1.0, vec![1.0])],
            initial: &initial,
            horizon: 2.0,
        };
        let sol = method_of_steps_oracle(&spec, 256, 8).unwrap();
        let g = sol.path.grid().clone();
        let x1 = sol.path.scalar(g.index_of(1.0).unwrap());
        let x2 = sol.path.scalar(g.index_of(2.0).unwrap());
        assert_relative_eq!(x1, 2.0, epsilon = 1e-8);
        assert_relative_eq!(x2, 3.5, epsilon = 1e-8);
    }

    #[test]
    fn no_delay_exponential_decay() {
        // x' = -x collapses to a plain ODE: x(t) = e^{-t}.
        let initial = constant_history(0.5, 32, 1.0);
        let spec = DelayOdeSpec {
            dim: 1,
            state_matrix: vec![-1.0],
            lag_terms: vec![],
            initial: &initial,
            horizon: 1.0,
        };
        let sol = method_of_steps_oracle(&spec, 128, 8).unwrap();
        let g = sol.path.grid().clone();
        let x1 = sol.path.scalar(g.index_of(1.0).unwrap());
        assert_relative_eq!(x1, (-1.0f64).exp(), epsilon = 1e-9);
    }

    #[test]
    fn invalid_lag_rejected() {
        let initial = constant_history(0.5, 32, 1.0);
        let spec = DelayOdeSpec {
            dim: 1,
            state_matrix: vec![0.0],
            lag_terms: vec![(2.0, vec![1.0])], // exceeds r
            initial: &initial,
            horizon: 1.0,
        };
        assert!(method_of_steps_oracle(&spec, 32, 4).is_err());
    }

    #[test]
    fn geometric_closed_form_deterministic_reduction() {
        // σ = ν = 0: plain exponential growth.
        let g = TimeGrid::new(0.0, 1.0, 64).unwrap();
        let w = SamplePath::zeros(g.clone(), 1);
        let z = SamplePath::zeros(g.clone(), 1);
        let x = geometric_mixed_closed_form(2.0, 0.7, 0.0, 0.0, &w, &z).unwrap();
        let k = g.index_of(1.0).unwrap();
        assert_relative_eq!(x.scalar(k), 2.0 * 0.7f64.exp(), epsilon = 1e-12);
    }

    #[test]
    fn geometric_closed_form_uses_both_drivers() {
        let g = TimeGrid::new(0.0, 1.0, 128).unwrap();
        let w = generate_wiener(&g, 1, 99).unwrap();
        let z = SamplePath::from_scalar_fn(g.clone(), |t| t * t).unwrap();
        let x = geometric_mixed_closed_form(1.0, 0.0, 0.5, 0.25, &w, &z).unwrap();
        let k = g.index_of(1.0).unwrap();
        let expected = (-0.125 + 0.5 * w.scalar(k) + 0.25).exp();
        assert_relative_eq!(x.scalar(k), expected, epsilon = 1e-12);
    }
}
