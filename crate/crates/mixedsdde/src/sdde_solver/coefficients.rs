//! Coefficient triples (a, b, c) as segment functionals, the declared
//! assumption metadata that goes with them, a registry of built-in presets,
//! and the sampling-based assumption checker.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::grid::{SamplePath, TimeGrid};
use crate::sdde_solver::SegmentView;

/// A coefficient as a functional of (time, recent past of the solution).
pub type SegmentFn = dyn Fn(f64, &SegmentView<'_>) -> Vec<f64> + Send + Sync;

/// Declared constants for the standing coefficient assumptions: linear
/// growth, a bounded Fréchet derivative of c, local Lipschitz continuity,
/// and Hölder continuity of c in time.
#[derive(Debug, Clone)]
pub struct CoefficientMetadata {
    /// Growth constant K in |a| + |b| + |c| <= K (1 + ||psi||).
    pub growth_const: f64,
    /// Uniform bound on the Fréchet derivative of c in the segment.
    pub frechet_bound: f64,
    /// Local Lipschitz constants per radius R.
    pub lipschitz: Vec<(f64, f64)>,
    /// Time-Hölder exponent β of c, required in (1 − γ, 1].
    pub time_holder_beta: f64,
    /// Time-Hölder constant of c.
    pub time_holder_const: f64,
}

impl CoefficientMetadata {
    pub fn validate(&self, gamma: f64) -> Result<()> {
        if self.growth_const <= 0.0 || self.frechet_bound <= 0.0 || self.time_holder_const <= 0.0 {
            return Err(Error::InvalidParameter(
                "coefficient metadata constants must be positive".into(),
            ));
        }
        if !(self.time_holder_beta > 1.0 - gamma && self.time_holder_beta <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "beta = {} must lie in (1 - gamma, 1] = ({}, 1]",
                self.time_holder_beta,
                1.0 - gamma
            )));
        }
        Ok(())
    }
}

/// The triple (a, b, c): drift in R^d, diffusion as a d×m matrix (row-major)
/// against the Wiener process, and a d×l matrix against the rough driver.
pub struct CoefficientSet {
    pub dim_state: usize,
    pub dim_wiener: usize,
    pub dim_driver: usize,
    pub drift: Box<SegmentFn>,
    pub diffusion: Box<SegmentFn>,
    pub young: Box<SegmentFn>,
    pub metadata: CoefficientMetadata,
}

impl std::fmt::Debug for CoefficientSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientSet")
            .field("dim_state", &self.dim_state)
            .field("dim_wiener", &self.dim_wiener)
            .field("dim_driver", &self.dim_driver)
            .field("metadata", &self.metadata)
            .finish()
    }
}

fn default_metadata() -> CoefficientMetadata {
    CoefficientMetadata {
        growth_const: 10.0,
        frechet_bound: 10.0,
        lipschitz: vec![(1.0, 10.0), (2.0, 10.0), (4.0, 10.0)],
        time_holder_beta: 1.0,
        time_holder_const: 10.0,
    }
}

/// Scalar presets selectable from a problem config. Parameters not present
/// in `params` fall back to the listed defaults.
///
/// - `zero`: a = b = c = 0.
/// - `pure_delay`: a = rate·ψ(−r), b = c = 0 (rate = 1).
/// - `geometric`: a = μ·ψ(0), b = σ·ψ(0), c = ν·ψ(0) (μ = 0.5, σ = 0.3, ν = 0.5).
/// - `linear_mixed`: a = a0·ψ(0) + a1·ψ(−r), b = b0·ψ(0), c = c0·ψ(−r)
///   (a0 = −0.5, a1 = 0.25, b0 = 0.2, c0 = 0.5).
/// - `bounded_diffusion`: a = a0·ψ(0) + a1·ψ(−r), b = σ·sin(ψ(0)), c = c0·ψ(−r)
///   (a0 = −0.5, a1 = 0.25, σ = 0.3, c0 = 0.5); b is globally bounded by σ.
pub fn build_preset(
    name: &str,
    params: &BTreeMap<String, f64>,
    delay: f64,
) -> Result<CoefficientSet> {
    let get = |key: &str, default: f64| params.get(key).copied().unwrap_or(default);
    let r = delay;
    let scalar_dims = (1usize, 1usize, 1usize);
    let (d, m, l) = scalar_dims;
    let set = match name {
        "zero" => CoefficientSet {
            dim_state: d,
            dim_wiener: m,
            dim_driver: l,
            drift: Box::new(|_, _| vec![0.0]),
            diffusion: Box::new(|_, _| vec![0.0]),
            young: Box::new(|_, _| vec![0.0]),
            metadata: default_metadata(),
        },
        "pure_delay" => {
            let rate = get("rate", 1.0);
            CoefficientSet {
                dim_state: d,
                dim_wiener: m,
                dim_driver: l,
                drift: Box::new(move |_, psi| vec![rate * psi.eval_scalar(-r)]),
                diffusion: Box::new(|_, _| vec![0.0]),
                young: Box::new(|_, _| vec![0.0]),
                metadata: default_metadata(),
            }
        }
        "geometric" => {
            let mu = get("mu", 0.5);
            let sigma = get("sigma", 0.3);
            let nu = get("nu", 0.5);
            CoefficientSet {
                dim_state: d,
                dim_wiener: m,
                dim_driver: l,
                drift: Box::new(move |_, psi| vec![mu * psi.eval_scalar(0.0)]),
                diffusion: Box::new(move |_, psi| vec![sigma * psi.eval_scalar(0.0)]),
                young: Box::new(move |_, psi| vec![nu * psi.eval_scalar(0.0)]),
                metadata: default_metadata(),
            }
        }
        "linear_mixed" => {
            let a0 = get("a0", -0.5);
            let a1 = get("a1", 0.25);
            let b0 = get("b0", 0.2);
            let c0 = get("c0", 0.5);
            CoefficientSet {
                dim_state: d,
                dim_wiener: m,
                dim_driver: l,
                drift: Box::new(move |_, psi| {
                    vec![a0 * psi.eval_scalar(0.0) + a1 * psi.eval_scalar(-r)]
                }),
                diffusion: Box::new(move |_, psi| vec![b0 * psi.eval_scalar(0.0)]),
                young: Box::new(move |_, psi| vec![c0 * psi.eval_scalar(-r)]),
                metadata: default_metadata(),
            }
        }
        "bounded_diffusion" => {
            let a0 = get("a0", -0.5);
            let a1 = get("a1", 0.25);
            let sigma = get("sigma", 0.3);
            let c0 = get("c0", 0.5);
            CoefficientSet {
                dim_state: d,
                dim_wiener: m,
                dim_driver: l,
                drift: Box::new(move |_, psi| {
                    vec![a0 * psi.eval_scalar(0.0) + a1 * psi.eval_scalar(-r)]
                }),
                diffusion: Box::new(move |_, psi| vec![sigma * psi.eval_scalar(0.0).sin()]),
                young: Box::new(move |_, psi| vec![c0 * psi.eval_scalar(-r)]),
                metadata: default_metadata(),
            }
        }
        other => {
            return Err(Error::Config(format!(
                "unknown coefficient preset '{other}'"
            )))
        }
    };
    Ok(set)
}

/// Sampling-based report of the observed assumption ratios against the
/// declared metadata. Report-only: violations are flagged, never fatal.
#[derive(Debug, Clone)]
pub struct CoefficientReport {
    /// Max of (|a| + |b| + |c|) / (1 + ||psi||).
    pub growth_ratio: f64,
    /// Max Lipschitz ratio per sampled radius.
    pub lipschitz_ratios: Vec<(f64, f64)>,
    /// Max of |c(s, psi) - c(t, psi)| / (|s - t|^β (1 + ||psi||)).
    pub time_holder_ratio: f64,
    /// Max directional difference quotient of c in the segment.
    pub frechet_ratio: f64,
    pub flags: Vec<String>,
}

/// Produces random segments on [−r, 0] with sup norm at most the requested
/// radius, used to probe the coefficient assumptions.
pub struct SegmentSampler {
    pub delay: f64,
    pub dims: usize,
    pub n_steps: usize,
    rng: ChaCha12Rng,
}

impl SegmentSampler {
    pub fn new(delay: f64, dims: usize, n_steps: usize, seed: u64) -> Self {
        Self {
            delay,
            dims,
            n_steps,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    /// A random low-frequency Fourier path scaled into the given radius.
    pub fn sample(&mut self, radius: f64) -> SamplePath {
        let grid = TimeGrid::new(-self.delay, 0.0, self.n_steps).expect("valid segment grid");
        let n_modes = 4;
        let mut coeffs = Vec::with_capacity(self.dims * n_modes * 2);
        for _ in 0..self.dims * n_modes * 2 {
            coeffs.push(self.rng.sample::<f64, _>(StandardNormal));
        }
        let offset: f64 = self.rng.gen_range(-0.5..0.5) * radius;
        let delay = self.delay;
        let dims = self.dims;
        let mut path = SamplePath::from_fn(grid, dims, |t| {
            let u = (t + delay) / delay;
            (0..dims)
                .map(|j| {
                    let mut v = offset;
                    for k in 0..n_modes {
                        let base = (j * n_modes + k) * 2;
                        let freq = (k + 1) as f64 * std::f64::consts::PI;
                        v += coeffs[base] * (freq * u).sin() + coeffs[base + 1] * (freq * u).cos();
                    }
                    v
                })
                .collect()
        })
        .expect("sampler path");
        let sup = path.sup_norm();
        if sup > radius {
            path = path.map(|v| v * radius / sup);
        }
        path
    }
}

fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn vec_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Empirically probe the coefficient assumptions over sampled
/// (time, segment) pairs and compare observed ratios with the declared
/// metadata.
pub fn validate_coefficients(
    coeffs: &CoefficientSet,
    sampler: &mut SegmentSampler,
    trials: usize,
    horizon: f64,
) -> Result<CoefficientReport> {
    if sampler.dims != coeffs.dim_state {
        return Err(Error::DimensionMismatch(format!(
            "sampler dims {} != state dims {}",
            sampler.dims, coeffs.dim_state
        )));
    }
    let radii: Vec<f64> = coeffs.metadata.lipschitz.iter().map(|(r, _)| *r).collect();
    let radii = if radii.is_empty() { vec![1.0, 2.0, 4.0] } else { radii };
    let mut growth_ratio = 0.0f64;
    let mut time_holder_ratio = 0.0f64;
    let mut frechet_ratio = 0.0f64;
    let mut lipschitz_ratios: Vec<(f64, f64)> = radii.iter().map(|&r| (r, 0.0)).collect();
    let mut times = ChaCha12Rng::seed_from_u64(0xF00D);
    let beta = coeffs.metadata.time_holder_beta;
    let eps = 1e-6;
    for (ri, &radius) in radii.iter().enumerate() {
        for _ in 0..trials {
            let t: f64 = times.gen_range(0.0..horizon);
            let s: f64 = times.gen_range(0.0..horizon);
            let psi1_path = sampler.sample(radius);
            let psi2_path = sampler.sample(radius);
            let psi1 = SegmentView::standalone(&psi1_path);
            let psi2 = SegmentView::standalone(&psi2_path);
            let sup1 = psi1_path.sup_norm();

            let a1 = (coeffs.drift)(t, &psi1);
            let b1 = (coeffs.diffusion)(t, &psi1);
            let c1 = (coeffs.young)(t, &psi1);
            let total = vec_norm(&a1) + vec_norm(&b1) + vec_norm(&c1);
            growth_ratio = growth_ratio.max(total / (1.0 + sup1));

            // Local Lipschitz within this radius.
            let seg_dist = psi1_path
                .difference(&psi2_path)
                .map(|d| d.sup_norm())
                .unwrap_or(0.0);
            if seg_dist > 1e-10 {
                let a2 = (coeffs.drift)(t, &psi2);
                let b2 = (coeffs.diffusion)(t, &psi2);
                let num = vec_dist(&a1, &a2) + vec_dist(&b1, &b2);
                let ratio = num / seg_dist;
                if ratio > lipschitz_ratios[ri].1 {
                    lipschitz_ratios[ri].1 = ratio;
                }
            }

            // Time-Hölder continuity of c.
            if (s - t).abs() > 1e-10 {
                let c_s = (coeffs.young)(s, &psi1);
                let num = vec_dist(&c1, &c_s);
                let ratio = num / ((s - t).abs().powf(beta) * (1.0 + sup1));
                time_holder_ratio = time_holder_ratio.max(ratio);
            }

            // Fréchet derivative of c probed by directional quotients.
            let dir = sampler.sample(1.0);
            let dir_norm = dir.sup_norm();
            if dir_norm > 1e-10 {
                let bumped_path = psi1_path
                    .sum(&dir.map(|v| v * eps / dir_norm))
                    .expect("segment grids agree");
                let bumped = SegmentView::standalone(&bumped_path);
                let c_bumped = (coeffs.young)(t, &bumped);
                frechet_ratio = frechet_ratio.max(vec_dist(&c_bumped, &c1) / eps);
            }
        }
    }
    let mut flags = Vec::new();
    if growth_ratio > coeffs.metadata.growth_const {
        flags.push(format!(
            "growth ratio {growth_ratio:.3} exceeds declared {}",
            coeffs.metadata.growth_const
        ));
    }
    for (i, &(radius, observed)) in lipschitz_ratios.iter().enumerate() {
        let declared = coeffs
            .metadata
            .lipschitz
            .get(i)
            .map(|&(_, c)| c)
            .unwrap_or(f64::INFINITY);
        if observed > declared {
            flags.push(format!(
                "Lipschitz ratio {observed:.3} at R = {radius} exceeds declared {declared}"
            ));
        }
    }
    if time_holder_ratio > coeffs.metadata.time_holder_const {
        flags.push(format!(
            "time-Hölder ratio {time_holder_ratio:.3} exceeds declared {}",
            coeffs.metadata.time_holder_const
        ));
    }
    if frechet_ratio > coeffs.metadata.frechet_bound {
        flags.push(format!(
            "Fréchet quotient {frechet_ratio:.3} exceeds declared {}",
            coeffs.metadata.frechet_bound
        ));
    }
    Ok(CoefficientReport {
        growth_ratio,
        lipschitz_ratios,
        time_holder_ratio,
        frechet_ratio,
        flags,
    })
}
