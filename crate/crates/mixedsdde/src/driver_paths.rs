//! Stochastic driver generation and the transformations used by the
//! existence construction: stopped drivers and their sliding-window
//! mollifications.
//!
//! Fractional Brownian motion is synthesized by circulant embedding
//! (Davies–Harte) in O(n log n), falling back to a dense Cholesky factor of
//! the increment covariance when the embedding is not nonnegative-definite.
//! Both routes produce the exact target covariance at grid points.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::holder_norms::{holder_seminorm, singular_cell};

/// Parameters for fractional Brownian motion synthesis.
#[derive(Debug, Clone, Copy)]
pub struct FbmParams {
    pub hurst: f64,
    pub dims: usize,
    pub seed: u64,
}

impl FbmParams {
    pub fn new(hurst: f64, dims: usize, seed: u64) -> Result<Self> {
        if !(hurst > 0.5 && hurst < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "Hurst exponent must lie in (0.5, 1), got {hurst}"
            )));
        }
        if dims == 0 {
            return Err(Error::InvalidParameter("dims must be positive".into()));
        }
        Ok(Self { hurst, dims, seed })
    }
}

/// Which synthesis route produced an fBm sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbmMethod {
    DaviesHarte,
    Cholesky,
}

/// An fBm sample path together with the method that produced it.
#[derive(Debug, Clone)]
pub struct FbmSample {
    pub path: SamplePath,
    pub method: FbmMethod,
}

/// The θ-Hölder initial condition η on [−r, 0].
#[derive(Debug, Clone)]
pub struct InitialSegment {
    pub r: f64,
    pub theta: f64,
    pub values: SamplePath,
}

impl InitialSegment {
    pub fn new(values: SamplePath, theta: f64) -> Result<Self> {
        let grid = values.grid();
        if grid.index_of(0.0).is_err() || (grid.t_end() - 0.0).abs() > 1e-12 {
            return Err(Error::InvalidGrid(
                "initial segment must live on [-r, 0]".into(),
            ));
        }
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in (0, 1], got {theta}"
            )));
        }
        let r = -grid.t_start();
        if r <= 0.0 {
            return Err(Error::InvalidGrid("delay r must be positive".into()));
        }
        Ok(Self { r, theta, values })
    }

    /// Standing assumption θ > 1 − γ against a declared driver exponent.
    pub fn validate_against_driver(&self, gamma: f64) -> Result<()> {
        if self.theta <= 1.0 - gamma {
            return Err(Error::InvalidParameter(format!(
                "theta = {} must exceed 1 - gamma = {}",
                self.theta,
                1.0 - gamma
            )));
        }
        Ok(())
    }

    /// Measured θ-Hölder quotient of the segment on its grid.
    pub fn holder_quotient(&self) -> Result<f64> {
        holder_seminorm(
            &self.values,
            self.theta,
            self.values.grid().t_start(),
            0.0,
        )
    }
}

fn require_driver_grid(grid: &TimeGrid) -> Result<()> {
    if grid.t_start().abs() > 1e-12 {
        return Err(Error::InvalidGrid(format!(
            "driver grid must start at 0, got {}",
            grid.t_start()
        )));
    }
    Ok(())
}

/// Generate a Wiener path on a grid starting at 0. Increments over disjoint
/// cells are independent N(0, dt) per coordinate; identical seeds give
/// bit-identical paths.
pub fn generate_wiener(grid: &TimeGrid, dims: usize, seed: u64) -> Result<SamplePath> {
    require_driver_grid(grid)?;
    if dims == 0 {
        return Err(Error::InvalidParameter("dims must be positive".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let n = grid.n_steps();
    let sqrt_dt = grid.dt().sqrt();
    let mut values = vec![0.0; (n + 1) * dims];
    for k in 1..=n {
        for j in 0..dims {
            let z: f64 = rng.sample(StandardNormal);
            values[k * dims + j] = values[(k - 1) * dims + j] + sqrt_dt * z;
        }
    }
    SamplePath::new(grid.clone(), dims, values)
}

/// Autocovariance of unit-spacing fractional Gaussian noise,
/// ρ(k) = ½(|k+1|^{2H} − 2|k|^{2H} + |k−1|^{2H}).
pub fn fgn_autocovariance(k: usize, hurst: f64) -> f64 {
    let k = k as f64;
    let h2 = 2.0 * hurst;
    0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2))
}

/// Circulant eigenvalues for the Davies–Harte embedding, or `None` when the
/// embedding is not nonnegative-definite.
fn circulant_eigenvalues(n: usize, hurst: f64) -> Option<Vec<f64>> {
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for k in 0..=n {
        row.push(Complex::new(fgn_autocovariance(k, hurst), 0.0));
    }
    for k in (1..n).rev() {
        row.push(Complex::new(fgn_autocovariance(k, hurst), 0.0));
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut row);
    let eigs: Vec<f64> = row.iter().map(|c| c.re).collect();
    let max = eigs.iter().cloned().fold(0.0f64, f64::max);
    let tol = -1e-10 * max.max(1.0);
    if eigs.iter().any(|&e| e < tol) {
        return None;
    }
    Some(eigs.into_iter().map(|e| e.max(0.0)).collect())
}

/// One fGn realization (unit spacing, unit variance) via the circulant
/// embedding, consuming 2n normal draws from `rng`.
fn fgn_davies_harte(eigs: &[f64], n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let m = 2 * n;
    let mut spectrum = vec![Complex::new(0.0, 0.0); m];
    let z0: f64 = rng.sample(StandardNormal);
    let zn: f64 = rng.sample(StandardNormal);
    spectrum[0] = Complex::new((eigs[0] / m as f64).sqrt() * z0, 0.0);
    spectrum[n] = Complex::new((eigs[n] / m as f64).sqrt() * zn, 0.0);
    for k in 1..n {
        let zr: f64 = rng.sample(StandardNormal);
        let zi: f64 = rng.sample(StandardNormal);
        let scale = (eigs[k] / (2 * m) as f64).sqrt();
        spectrum[k] = Complex::new(scale * zr, scale * zi);
        spectrum[m - k] = spectrum[k].conj();
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut spectrum);
    spectrum[..n].iter().map(|c| c.re).collect()
}

/// Lower Cholesky factor of the fGn covariance, used when the embedding fails.
fn fgn_cholesky_factor(n: usize, hurst: f64) -> Result<DMatrix<f64>> {
    if n > 4096 {
        return Err(Error::InvalidParameter(format!(
            "Cholesky fallback limited to 4096 steps, got {n}"
        )));
    }
    let cov = DMatrix::from_fn(n, n, |i, j| fgn_autocovariance(i.abs_diff(j), hurst));
    cov.cholesky()
        .map(|c| c.l())
        .ok_or_else(|| Error::InvalidParameter("fGn covariance is not positive definite".into()))
}

fn fgn_cholesky(factor: &DMatrix<f64>, n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let z: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut acc = 0.0;
        for j in 0..=i {
            acc += factor[(i, j)] * z[j];
        }
        out[i] = acc;
    }
    out
}

/// Generate a fractional Brownian motion path with exact covariance
/// ½(t^{2H} + s^{2H} − |t−s|^{2H}) at grid points.
pub fn generate_fbm(grid: &TimeGrid, params: &FbmParams) -> Result<FbmSample> {
    require_driver_grid(grid)?;
    let n = grid.n_steps();
    let scale = grid.dt().powf(params.hurst);
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let eigs = circulant_eigenvalues(n, params.hurst);
    let (method, chol) = match &eigs {
        Some(_) => (FbmMethod::DaviesHarte, None),
        None => (
            FbmMethod::Cholesky,
            Some(fgn_cholesky_factor(n, params.hurst)?),
        ),
    };
    let mut values = vec![0.0; (n + 1) * params.dims];
    for j in 0..params.dims {
        let fgn = match method {
            FbmMethod::DaviesHarte => fgn_davies_harte(eigs.as_ref().unwrap(), n, &mut rng),
            FbmMethod::Cholesky => fgn_cholesky(chol.as_ref().unwrap(), n, &mut rng),
        };
        let mut acc = 0.0;
        for (k, inc) in fgn.iter().enumerate() {
            acc += scale * inc;
            values[(k + 1) * params.dims + j] = acc;
        }
    }
    Ok(FbmSample {
        path: SamplePath::new(grid.clone(), params.dims, values)?,
        method,
    })
}

/// Force the dense Cholesky route (exercises the fallback directly).
pub fn generate_fbm_cholesky(grid: &TimeGrid, params: &FbmParams) -> Result<SamplePath> {
    require_driver_grid(grid)?;
    let n = grid.n_steps();
    let factor = fgn_cholesky_factor(n, params.hurst)?;
    let scale = grid.dt().powf(params.hurst);
    let mut rng = ChaCha12Rng::seed_from_u64(params.seed);
    let mut values = vec![0.0; (n + 1) * params.dims];
    for j in 0..params.dims {
        let fgn = fgn_cholesky(&factor, n, &mut rng);
        let mut acc = 0.0;
        for (k, inc) in fgn.iter().enumerate() {
            acc += scale * inc;
            values[(k + 1) * params.dims + j] = acc;
        }
    }
    SamplePath::new(grid.clone(), params.dims, values)
}

fn row_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// τ_N = the smallest grid point t with discretized ‖Z‖_{α;[0,t]} ≥ N, or
/// t_end if the norm never reaches N.
///
/// Computed incrementally: extending the interval by one grid point adds one
/// kernel cell per left endpoint, so the full prefix scan is O(n²).
pub fn stopping_time_tau_n(z: &SamplePath, alpha: f64, threshold: f64) -> Result<f64> {
    require_driver_grid(z.grid())?;
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    if threshold < 0.0 {
        return Err(Error::InvalidParameter("threshold must be >= 0".into()));
    }
    let grid = z.grid();
    let n = grid.n_steps();
    let dt = grid.dt();
    // inner[i] = current ∫ over [t_i, t_k] of |z(t_i) - z(s)| kernel ds
    let mut inner = vec![0.0; n + 1];
    // edge[i] = |z(t_i) - z| at the previous sweep point
    let mut edge = vec![0.0; n + 1];
    let mut running_max = 0.0f64;
    for k in 1..=n {
        let zk = z.row(k);
        for i in 0..k {
            let v_right = row_dist(z.row(i), zk);
            let wp = (k - 1 - i) as f64 * dt;
            let wq = (k - i) as f64 * dt;
            inner[i] += singular_cell(edge[i], v_right, wp, wq, alpha - 2.0);
            edge[i] = v_right;
            let quot = v_right / wq.powf(1.0 - alpha);
            running_max = running_max.max(quot + inner[i]);
        }
        if running_max >= threshold {
            return Ok(grid.point(k));
        }
    }
    Ok(grid.t_end())
}

/// Z^N(t) = Z(t ∧ τ): the driver frozen at its value at `tau`.
pub fn stop_driver(z: &SamplePath, tau: f64) -> Result<SamplePath> {
    let grid = z.grid();
    let itau = grid.index_of(tau)?;
    let dims = z.dims();
    let mut values = z.values().to_vec();
    let frozen: Vec<f64> = z.row(itau).to_vec();
    for k in (itau + 1)..grid.n_points() {
        values[k * dims..(k + 1) * dims].copy_from_slice(&frozen);
    }
    SamplePath::new(grid.clone(), dims, values)
}

fn check_window(grid: &TimeGrid, n_mollify: u32) -> Result<f64> {
    if n_mollify == 0 {
        return Err(Error::InvalidParameter(
            "mollification parameter must be >= 1".into(),
        ));
    }
    let window = 1.0 / n_mollify as f64;
    if window < grid.dt() * (1.0 - 1e-12) {
        return Err(Error::UnresolvableWindow {
            window,
            dt: grid.dt(),
        });
    }
    Ok(window)
}

/// Cumulative trapezoidal integral P(t_k) = ∫_{t_start}^{t_k} z(s) ds per
/// coordinate. Exact for the piecewise-linear interpolant.
fn cumulative_trapezoid(z: &SamplePath) -> Vec<f64> {
    let dims = z.dims();
    let n = z.grid().n_points();
    let dt = z.grid().dt();
    let mut acc = vec![0.0; n * dims];
    for k in 1..n {
        let a = z.row(k - 1);
        let b = z.row(k);
        for j in 0..dims {
            acc[k * dims + j] = acc[(k - 1) * dims + j] + 0.5 * dt * (a[j] + b[j]);
        }
    }
    acc
}

/// Evaluate the cumulative integral at an off-grid time (the partial cell is
/// again exact for the linear interpolant).
fn cumulative_at(z: &SamplePath, cum: &[f64], t: f64, out: &mut [f64]) {
    let grid = z.grid();
    let k = grid.cell_index(t);
    let t_k = grid.point(k);
    let h = (t - t_k).clamp(0.0, grid.dt());
    let dims = z.dims();
    let a = z.row(k);
    let b = z.row(k + 1);
    let w = h / grid.dt();
    for j in 0..dims {
        let z_t = a[j] + w * (b[j] - a[j]);
        out[j] = cum[k * dims + j] + 0.5 * h * (a[j] + z_t);
    }
}

/// Sliding-window average of the (stopped) driver:
/// Z^{N,n}(t) = (1/w) ∫_{(t−1/n)∨0}^t Z^N(s) ds with w the effective window
/// width t ∧ 1/n, computed by trapezoidal quadrature on the grid.
///
/// Normalizing by the effective width (rather than always by 1/n) keeps the
/// operator average-like on the initial ramp t < 1/n: constants map to
/// themselves and adding a constant commutes with smoothing.
pub fn smooth_driver(zn: &SamplePath, n_mollify: u32) -> Result<SamplePath> {
    let grid = zn.grid();
    let window = check_window(grid, n_mollify)?;
    let cum = cumulative_trapezoid(zn);
    let dims = zn.dims();
    let mut values = vec![0.0; grid.n_points() * dims];
    values[..dims].copy_from_slice(zn.row(0));
    let mut lo = vec![0.0; dims];
    let mut hi = vec![0.0; dims];
    for k in 1..grid.n_points() {
        let t = grid.point(k);
        let start = (t - window).max(grid.t_start());
        let width = t - start;
        cumulative_at(zn, &cum, start, &mut lo);
        hi.copy_from_slice(&cum[k * dims..(k + 1) * dims]);
        for j in 0..dims {
            values[k * dims + j] = (hi[j] - lo[j]) / width;
        }
    }
    SamplePath::new(grid.clone(), dims, values)
}

/// (d/ds) Z^{N,n}(s) = n · (Z^N(s) − Z^N((s − 1/n) ∨ 0)) on the grid.
///
/// This is the exact derivative of the window integral for s ≥ 1/n; on the
/// initial ramp it reproduces the same difference-quotient form, which keeps
/// the drift bounded by 2n·max|Z^N| everywhere.
pub fn derivative_of_smoothed(zn: &SamplePath, n_mollify: u32) -> Result<SamplePath> {
    let grid = zn.grid();
    let window = check_window(grid, n_mollify)?;
    let dims = zn.dims();
    let rate = n_mollify as f64;
    let mut values = vec![0.0; grid.n_points() * dims];
    let mut lagged = vec![0.0; dims];
    for k in 0..grid.n_points() {
        let t = grid.point(k);
        let s = (t - window).max(grid.t_start());
        zn.at_into(s, &mut lagged);
        let row = zn.row(k);
        for j in 0..dims {
            values[k * dims + j] = rate * (row[j] - lagged[j]);
        }
    }
    SamplePath::new(grid.clone(), dims, values)
}
