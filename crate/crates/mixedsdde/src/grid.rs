//! Uniform time grids and discretized sample paths.
//!
//! Every path in the crate lives on a uniform grid. Grid points are always
//! computed as `t_start + k * dt` (never by repeated addition), so the k-th
//! point is reproducible to one ulp regardless of how the grid is traversed.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Uniform discretization of an interval `[t_start, t_end]` into `n_steps` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    n_steps: usize,
    dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        if n_steps == 0 {
            return Err(Error::InvalidGrid("n_steps must be positive".into()));
        }
        if !(t_end > t_start) {
            return Err(Error::InvalidGrid(format!(
                "t_end ({t_end}) must exceed t_start ({t_start})"
            )));
        }
        let dt = (t_end - t_start) / n_steps as f64;
        if !dt.is_finite() || dt <= 0.0 {
            return Err(Error::InvalidGrid(format!("non-positive step dt = {dt}")));
        }
        Ok(Self {
            t_start,
            t_end,
            n_steps,
            dt,
        })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// Number of grid points (`n_steps + 1`).
    pub fn n_points(&self) -> usize {
        self.n_steps + 1
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// The k-th grid point, `t_start + k * dt`.
    pub fn point(&self, k: usize) -> f64 {
        debug_assert!(k <= self.n_steps);
        self.t_start + k as f64 * self.dt
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        (0..=self.n_steps).map(move |k| self.point(k))
    }

    /// Index of the cell containing `t`, clamped to `[0, n_steps - 1]`.
    pub fn cell_index(&self, t: f64) -> usize {
        let raw = ((t - self.t_start) / self.dt).floor();
        (raw.max(0.0) as usize).min(self.n_steps - 1)
    }

    /// Index of the grid point closest to `t`; errors if `t` is not within
    /// half a step of a grid point.
    pub fn index_of(&self, t: f64) -> Result<usize> {
        let raw = (t - self.t_start) / self.dt;
        let k = raw.round();
        if (raw - k).abs() > 1e-9 * (self.n_steps as f64).max(1.0) || k < 0.0 || k > self.n_steps as f64 {
            return Err(Error::InvalidParameter(format!(
                "t = {t} is not a grid point of [{}, {}] with dt = {}",
                self.t_start, self.t_end, self.dt
            )));
        }
        Ok(k as usize)
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.t_start - 1e-12 && t <= self.t_end + 1e-12
    }
}

/// A vector-valued path sampled on a uniform grid, with piecewise-linear
/// interpolation between grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplePath {
    grid: TimeGrid,
    dims: usize,
    /// Row-major: `values[k * dims + j]` is coordinate `j` at grid point `k`.
    values: Vec<f64>,
}

impl SamplePath {
    pub fn new(grid: TimeGrid, dims: usize, values: Vec<f64>) -> Result<Self> {
        if dims == 0 {
            return Err(Error::InvalidParameter("dims must be positive".into()));
        }
        if values.len() != grid.n_points() * dims {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values ({} points x {} dims), got {}",
                grid.n_points() * dims,
                grid.n_points(),
                dims,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: format!("path value index {pos}"),
            });
        }
        Ok(Self { grid, dims, values })
    }

    pub fn zeros(grid: TimeGrid, dims: usize) -> Self {
        let n = grid.n_points() * dims;
        Self {
            grid,
            dims,
            values: vec![0.0; n],
        }
    }

    pub fn constant(grid: TimeGrid, value: &[f64]) -> Self {
        let n = grid.n_points();
        let mut values = Vec::with_capacity(n * value.len());
        for _ in 0..n {
            values.extend_from_slice(value);
        }
        Self {
            grid,
            dims: value.len(),
            values,
        }
    }

    /// Build a path by evaluating `f` at every grid point.
    pub fn from_fn<F>(grid: TimeGrid, dims: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> Vec<f64>,
    {
        let mut values = Vec::with_capacity(grid.n_points() * dims);
        for t in grid.points() {
            let row = f(t);
            if row.len() != dims {
                return Err(Error::DimensionMismatch(format!(
                    "row at t = {t} has {} entries, expected {dims}",
                    row.len()
                )));
            }
            values.extend_from_slice(&row);
        }
        Self::new(grid, dims, values)
    }

    /// Scalar convenience constructor.
    pub fn from_scalar_fn<F>(grid: TimeGrid, mut f: F) -> Result<Self>
    where
        F: FnMut(f64) -> f64,
    {
        Self::from_fn(grid, 1, |t| vec![f(t)])
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Values at the k-th grid point.
    pub fn row(&self, k: usize) -> &[f64] {
        &self.values[k * self.dims..(k + 1) * self.dims]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dims)
    }

    /// Scalar value at grid point `k` (first coordinate).
    pub fn scalar(&self, k: usize) -> f64 {
        self.values[k * self.dims]
    }

    /// Piecewise-linear evaluation at an arbitrary time in the grid's span.
    pub fn at(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dims];
        self.at_into(t, &mut out);
        out
    }

    /// Like [`at`](Self::at) but writes into a caller-provided buffer.
    pub fn at_into(&self, t: f64, out: &mut [f64]) {
        debug_assert!(self.grid.contains(t), "t = {t} outside grid span");
        let k = self.grid.cell_index(t);
        let t_k = self.grid.point(k);
        let w = ((t - t_k) / self.grid.dt()).clamp(0.0, 1.0);
        let a = self.row(k);
        let b = self.row(k + 1);
        for j in 0..self.dims {
            out[j] = a[j] + w * (b[j] - a[j]);
        }
    }

    /// Scalar piecewise-linear evaluation (first coordinate).
    pub fn scalar_at(&self, t: f64) -> f64 {
        let k = self.grid.cell_index(t);
        let t_k = self.grid.point(k);
        let w = ((t - t_k) / self.grid.dt()).clamp(0.0, 1.0);
        let a = self.values[k * self.dims];
        let b = self.values[(k + 1) * self.dims];
        a + w * (b - a)
    }

    /// Euclidean norm of the value at grid point `k`.
    pub fn euclidean_at(&self, k: usize) -> f64 {
        self.row(k).iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Apply `f` to every stored value, keeping the grid.
    pub fn map<F>(&self, f: F) -> Self
    where
        F: Fn(f64) -> f64,
    {
        Self {
            grid: self.grid.clone(),
            dims: self.dims,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise difference `self - other` on a shared grid.
    pub fn difference(&self, other: &SamplePath) -> Result<SamplePath> {
        if self.grid != other.grid || self.dims != other.dims {
            return Err(Error::GridMismatch(
                "difference requires identical grids and dims".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a - b)
            .collect();
        Ok(SamplePath {
            grid: self.grid.clone(),
            dims: self.dims,
            values,
        })
    }

    /// Pointwise sum on a shared grid.
    pub fn sum(&self, other: &SamplePath) -> Result<SamplePath> {
        if self.grid != other.grid || self.dims != other.dims {
            return Err(Error::GridMismatch(
                "sum requires identical grids and dims".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(SamplePath {
            grid: self.grid.clone(),
            dims: self.dims,
            values,
        })
    }

    /// Sup of the Euclidean norm over all grid points.
    pub fn sup_norm(&self) -> f64 {
        (0..self.grid.n_points())
            .map(|k| self.euclidean_at(k))
            .fold(0.0, f64::max)
    }

    /// Write the CSV wire format: header `t,v0,...,v{dims-1}`, one row per
    /// grid point, full decimal (round-trip) precision.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "t")?;
        for j in 0..self.dims {
            write!(w, ",v{j}")?;
        }
        writeln!(w)?;
        for (k, row) in self.rows().enumerate() {
            write!(w, "{}", self.grid.point(k))?;
            for v in row {
                write!(w, ",{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    }

    /// Read a path back from the CSV wire format.
    pub fn read_csv<R: BufRead>(r: R) -> Result<SamplePath> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty CSV".into()))??;
        let dims = header.split(',').count().saturating_sub(1);
        if dims == 0 {
            return Err(Error::Config("CSV header has no value columns".into()));
        }
        let mut times = Vec::new();
        let mut values = Vec::new();
        for line in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let mut fields = line.split(',');
            let t: f64 = fields
                .next()
                .ok_or_else(|| Error::Config("missing time field".into()))?
                .parse()
                .map_err(|e| Error::Config(format!("bad time field: {e}")))?;
            times.push(t);
            for f in fields {
                values.push(
                    f.parse::<f64>()
                        .map_err(|e| Error::Config(format!("bad value field: {e}")))?,
                );
            }
        }
        if times.len() < 2 {
            return Err(Error::Config("CSV must contain at least two rows".into()));
        }
        let grid = TimeGrid::new(times[0], *times.last().unwrap(), times.len() - 1)?;
        SamplePath::new(grid, dims, values)
    }
}

/// Write a `key = value` sidecar metadata file.
pub fn write_metadata<W: Write>(mut w: W, entries: &[(&str, String)]) -> Result<()> {
    for (key, value) in entries {
        writeln!(w, "{key} = {value}")?;
    }
    Ok(())
}
