//! Norm functionals on discretized paths: Hölder seminorms, the fractional
//! α-norm, and the solution norms built from a sup part and a singular-kernel
//! integral part.
//!
//! All suprema are taken over grid points; singular kernels are integrated
//! cell by cell with exact kernel moments against a linear-in-the-cell model
//! of the benign factor, so every rule is exact on linear paths.

use std::io::Write;

use crate::error::{Error, Result};
use crate::grid::SamplePath;

/// Configuration for norm evaluation: the exponent α and the declared
/// regularity of the driver (γ) and initial segment (θ) it must sit between.
#[derive(Debug, Clone, Copy)]
pub struct NormConfig {
    pub alpha: f64,
}

impl NormConfig {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 0.5) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in (0, 1/2), got {alpha}"
            )));
        }
        Ok(Self { alpha })
    }

    /// Check α against the declared exponents: α ∈ (1 − γ, min(θ, 1/2)).
    pub fn validate_against(&self, gamma: f64, theta: f64) -> Result<()> {
        if self.alpha <= 1.0 - gamma {
            return Err(Error::InvalidParameter(format!(
                "alpha = {} must exceed 1 - gamma = {}",
                self.alpha,
                1.0 - gamma
            )));
        }
        if self.alpha >= theta {
            return Err(Error::InvalidParameter(format!(
                "alpha = {} must be below theta = {theta}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Euclidean distance between two grid rows.
fn row_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn interval_indices(path: &SamplePath, a: f64, b: f64) -> Result<(usize, usize)> {
    let ia = path.grid().index_of(a)?;
    let ib = path.grid().index_of(b)?;
    if ib <= ia {
        return Err(Error::EmptyInterval { a, b });
    }
    Ok((ia, ib))
}

/// λ-Hölder seminorm over `[a, b]`: max over grid pairs u < v of
/// |x(v) − x(u)| / (v − u)^λ.
pub fn holder_seminorm(path: &SamplePath, lambda: f64, a: f64, b: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "lambda must lie in (0, 1], got {lambda}"
        )));
    }
    let (ia, ib) = interval_indices(path, a, b)?;
    let dt = path.grid().dt();
    let mut best = 0.0f64;
    for i in ia..ib {
        for k in (i + 1)..=ib {
            let gap = (k - i) as f64 * dt;
            let q = row_dist(path.row(k), path.row(i)) / gap.powf(lambda);
            best = best.max(q);
        }
    }
    Ok(best)
}

/// Contribution of one kernel cell to a singular integral
/// ∫ v(w) w^(power) dw over [wp, wq], where the benign factor `v` is modeled
/// linearly between its endpoint values and the kernel moments are exact.
///
/// `power` is the kernel exponent (e.g. α − 2 for the α-norm inner integral).
/// A cell touching the singularity (`wp == 0`) is allowed when either the
/// kernel is integrable there (`power > -1`) or the factor vanishes
/// (`vp == 0`) at the rate the linear model assumes.
pub(crate) fn singular_cell(vp: f64, vq: f64, wp: f64, wq: f64, power: f64) -> f64 {
    let dw = wq - wp;
    let s = (vq - vp) / dw;
    // M1 = ∫ w^(power+1) dw, finite for power > -2.
    let p1 = power + 2.0;
    let m1 = (wq.powf(p1) - wp.powf(p1)) / p1;
    let p0 = power + 1.0;
    if wp == 0.0 && p0 <= 0.0 {
        // Non-integrable kernel at the singularity: v(w) = s*w exactly
        // (vp must be 0), so only the first moment survives.
        debug_assert_eq!(vp, 0.0);
        return s * m1;
    }
    let m0 = (wq.powf(p0) - wp.powf(p0)) / p0;
    vp * m0 + s * (m1 - wp * m0)
}

/// The fractional norm ‖g‖_{α;[a,b]}: sup over grid pairs u < v of
/// |g(v) − g(u)|/(v − u)^{1−α} + ∫_u^v |g(u) − g(z)|/(z − u)^{2−α} dz.
pub fn alpha_norm(g: &SamplePath, alpha: f64, a: f64, b: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    let (ia, ib) = interval_indices(g, a, b)?;
    let dt = g.grid().dt();
    let mut best = 0.0f64;
    // For each u, sweep v upward keeping the inner integral incrementally.
    for i in ia..ib {
        let gu = g.row(i);
        let mut inner = 0.0;
        let mut v_left = 0.0; // |g(u) - g(z)| at the cell's left edge
        for k in (i + 1)..=ib {
            let v_right = row_dist(gu, g.row(k));
            let wp = (k - 1 - i) as f64 * dt;
            let wq = (k - i) as f64 * dt;
            inner += singular_cell(v_left, v_right, wp, wq, alpha - 2.0);
            v_left = v_right;
            let quot = v_right / wq.powf(1.0 - alpha);
            best = best.max(quot + inner);
        }
    }
    Ok(best)
}

/// ‖X‖_{∞,t}: sup of |X(s)| over grid points s ∈ [t_start, t].
pub fn sup_norm_history(x: &SamplePath, t: f64) -> Result<f64> {
    let it = x.grid().index_of(t)?;
    Ok((0..=it).map(|k| x.euclidean_at(k)).fold(0.0, f64::max))
}

/// Inner segment-difference sup ‖X_{·+t−s} − X_·‖_{∞,s} =
/// sup_{u ∈ [t_start, s]} |X(u + t − s) − X(u)|, evaluated by grid scan with
/// interpolation for the shifted argument.
fn segment_diff_sup(x: &SamplePath, t: f64, s: f64, shifted: &mut [f64]) -> f64 {
    let offset = t - s;
    let grid = x.grid();
    let dt = grid.dt();
    let last = ((s - grid.t_start()) / dt).floor() as usize;
    let last = last.min(grid.n_steps());
    let mut best = 0.0f64;
    for k in 0..=last {
        let u = grid.point(k);
        if u > s + 1e-12 {
            break;
        }
        x.at_into(u + offset, shifted);
        best = best.max(row_dist(shifted, x.row(k)));
    }
    // Include u = s itself when s is off-grid.
    let s_point = grid.point(last);
    if s - s_point > 1e-12 * dt {
        let mut base = vec![0.0; x.dims()];
        x.at_into(s, &mut base);
        x.at_into(t, shifted);
        best = best.max(row_dist(shifted, &base));
    }
    best
}

/// ‖X‖_{1,t}: the singular integral ∫_0^t ‖X_{·+t−s} − X_·‖_{∞,s} (t−s)^{−1−α} ds.
///
/// Per-cell rule: exact kernel mass times the inner sup at the cell midpoint;
/// the final cell adjacent to s = t uses the inner sup at its left endpoint
/// with a linearly-vanishing closure (the inner sup vanishes at s = t, which
/// is what makes the product integrable).
pub fn one_norm_history(x: &SamplePath, t: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "alpha must lie in (0, 1/2), got {alpha}"
        )));
    }
    let grid = x.grid();
    let i0 = grid.index_of(0.0)?;
    let it = grid.index_of(t)?;
    if it == i0 {
        return Ok(0.0);
    }
    let dt = grid.dt();
    let mut shifted = vec![0.0; x.dims()];
    let mut total = 0.0;
    for k in i0..(it - 1) {
        let s_lo = grid.point(k);
        let s_hi = grid.point(k + 1);
        let mid = 0.5 * (s_lo + s_hi);
        let phi = segment_diff_sup(x, t, mid, &mut shifted);
        // ∫ (t-s)^{-1-α} ds over the cell, exactly.
        let mass = ((t - s_hi).powf(-alpha) - (t - s_lo).powf(-alpha)) / alpha;
        total += phi * mass;
    }
    // Final cell [t - dt, t]: model the inner sup as vanishing linearly.
    let phi_left = segment_diff_sup(x, t, grid.point(it - 1), &mut shifted);
    total += phi_left * dt.powf(-alpha) / (1.0 - alpha);
    Ok(total)
}

/// One entry of a norm profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub t: f64,
    pub sup: f64,
    pub one: f64,
}

impl ProfilePoint {
    pub fn total(&self) -> f64 {
        self.sup + self.one
    }
}

/// The solution norm ‖X‖_t = ‖X‖_{∞,t} + ‖X‖_{1,t}, with a per-time profile.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub sup_norm: f64,
    pub one_norm: f64,
    pub total: f64,
    pub profile: Vec<ProfilePoint>,
}

impl NormReport {
    /// Serialize profile rows as `t,sup,one,total`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,sup,one,total")?;
        for p in &self.profile {
            writeln!(w, "{},{},{},{}", p.t, p.sup, p.one, p.total())?;
        }
        Ok(())
    }
}

/// ‖X‖_t with a profile at up to `max_checkpoints` grid times in [0, t].
pub fn solution_norm(
    x: &SamplePath,
    t: f64,
    alpha: f64,
    max_checkpoints: usize,
) -> Result<NormReport> {
    let grid = x.grid();
    let i0 = grid.index_of(0.0)?;
    let it = grid.index_of(t)?;
    let span = it - i0;
    let n_check = max_checkpoints.max(1).min(span.max(1));
    let mut profile = Vec::with_capacity(n_check);
    for j in 1..=n_check {
        let k = i0 + (span * j) / n_check;
        let tj = grid.point(k);
        profile.push(ProfilePoint {
            t: tj,
            sup: sup_norm_history(x, tj)?,
            one: one_norm_history(x, tj, alpha)?,
        });
    }
    let last = *profile.last().expect("profile is non-empty");
    Ok(NormReport {
        sup_norm: last.sup,
        one_norm: last.one,
        total: last.total(),
        profile,
    })
}

/// Measured Hölder exponent via log-log regression of the sup increment over
/// dyadic lags. A discrete path only exhibits its exponent statistically, so
/// callers should treat this as an estimate.
pub fn measured_holder_exponent(path: &SamplePath, a: f64, b: f64) -> Result<f64> {
    let (ia, ib) = interval_indices(path, a, b)?;
    let dt = path.grid().dt();
    let span = ib - ia;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut lag = 1usize;
    while lag <= span / 4 {
        let mut sup = 0.0f64;
        for k in ia..=(ib - lag) {
            sup = sup.max(row_dist(path.row(k + lag), path.row(k)));
        }
        if sup > 0.0 {
            xs.push((lag as f64 * dt).ln());
            ys.push(sup.ln());
        }
        lag *= 2;
    }
    if xs.len() < 2 {
        return Err(Error::InvalidParameter(
            "interval too short (or path constant) for exponent regression".into(),
        ));
    }
    Ok(regression_slope(&xs, &ys))
}

/// Least-squares slope of y against x.
pub fn regression_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use approx::assert_relative_eq;

    fn linear_path(n: usize) -> SamplePath {
        let g = TimeGrid::new(0.0, 1.0, n).unwrap();
        SamplePath::from_scalar_fn(g, |t| t).unwrap()
    }

    #[test]
    fn seminorm_of_constant_is_zero() {
        let g = TimeGrid::new(0.0, 1.0, 64).unwrap();
        let p = SamplePath::constant(g, &[3.0]);
        assert_eq!(holder_seminorm(&p, 0.5, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn seminorm_of_linear_path() {
        let p = linear_path(128);
        // λ = 1: quotient is identically 1.
        assert_relative_eq!(holder_seminorm(&p, 1.0, 0.0, 1.0).unwrap(), 1.0);
        // λ = 0.4: sup of (v-u)^{0.6} is attained at (0,1) and equals 1.
        let v = holder_seminorm(&p, 0.4, 0.0, 1.0).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
        // Brute-force cross-check at a different exponent.
        let brute = {
            let dt = p.grid().dt();
            let mut best = 0.0f64;
            for i in 0..128 {
                for k in (i + 1)..=128 {
                    let gap = (k - i) as f64 * dt;
                    best = best.max((p.scalar(k) - p.scalar(i)).abs() / gap.powf(0.7));
                }
            }
            best
        };
        assert_relative_eq!(holder_seminorm(&p, 0.7, 0.0, 1.0).unwrap(), brute);
    }

    #[test]
    fn seminorm_rejects_bad_input() {
        let p = linear_path(8);
        assert!(holder_seminorm(&p, 0.0, 0.0, 1.0).is_err());
        assert!(holder_seminorm(&p, 0.5, 0.5, 0.5).is_err());
    }

    #[test]
    fn alpha_norm_of_constant_is_zero() {
        let g = TimeGrid::new(0.0, 1.0, 32).unwrap();
        let p = SamplePath::constant(g, &[-7.0]);
        assert_eq!(alpha_norm(&p, 0.25, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn alpha_norm_of_linear_path_matches_closed_form() {
        // For g(t) = t: term1 = (v-u)^α, term2 = ∫_u^v (z-u)^{α-1} dz = (v-u)^α/α,
        // so the sup is (1 + 1/α), attained at (0, 1).
        let p = linear_path(1 << 10);
        let alpha = 0.25;
        let v = alpha_norm(&p, alpha, 0.0, 1.0).unwrap();
        assert_relative_eq!(v, 1.0 + 1.0 / alpha, max_relative = 1e-10);
    }

    #[test]
    fn alpha_norm_is_absolutely_homogeneous() {
        let g = TimeGrid::new(0.0, 1.0, 128).unwrap();
        let p = SamplePath::from_scalar_fn(g, |t| (5.0 * t).sin()).unwrap();
        let scaled = p.map(|v| -3.0 * v);
        let a = alpha_norm(&p, 0.3, 0.0, 1.0).unwrap();
        let b = alpha_norm(&scaled, 0.3, 0.0, 1.0).unwrap();
        assert_relative_eq!(b, 3.0 * a, max_relative = 1e-12);
    }

    #[test]
    fn alpha_norm_dominates_holder_seminorm() {
        let g = TimeGrid::new(0.0, 1.0, 128).unwrap();
        let p = SamplePath::from_scalar_fn(g, |t| (3.0 * t).cos() + t).unwrap();
        let alpha = 0.3;
        let an = alpha_norm(&p, alpha, 0.0, 1.0).unwrap();
        let hs = holder_seminorm(&p, 1.0 - alpha, 0.0, 1.0).unwrap();
        assert!(an >= hs);
    }

    #[test]
    fn sup_norm_history_examples() {
        let g = TimeGrid::new(-1.0, 1.0, 100).unwrap();
        let c = SamplePath::constant(g.clone(), &[5.0]);
        assert_eq!(sup_norm_history(&c, 0.5).unwrap(), 5.0);
        // History dominates: η(s) = -2s on [-1,0], zero afterwards.
        let p = SamplePath::from_scalar_fn(g, |t| if t <= 0.0 { -2.0 * t } else { 0.0 }).unwrap();
        assert_relative_eq!(sup_norm_history(&p, 0.0).unwrap(), 2.0);
        assert_relative_eq!(sup_norm_history(&p, 1.0).unwrap(), 2.0);
    }

    #[test]
    fn sup_norm_matches_linear_scan() {
        let g = TimeGrid::new(-0.5, 1.0, 150).unwrap();
        let p = SamplePath::from_scalar_fn(g, |t| (13.0 * t).sin() * (1.0 + t)).unwrap();
        let it = p.grid().index_of(1.0).unwrap();
        let brute = (0..=it).map(|k| p.scalar(k).abs()).fold(0.0, f64::max);
        assert_eq!(sup_norm_history(&p, 1.0).unwrap(), brute);
    }

    #[test]
    fn one_norm_of_constant_is_zero() {
        let g = TimeGrid::new(-1.0, 1.0, 64).unwrap();
        let p = SamplePath::constant(g, &[2.5]);
        assert_eq!(one_norm_history(&p, 1.0, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn one_norm_of_linear_path_matches_closed_form() {
        // X(t) = t everywhere: the inner sup is exactly (t - s), so the
        // integral is ∫_0^t (t-s)^{-α} ds = t^{1-α}/(1-α) = 4/3 at t=1, α=1/4.
        let g = TimeGrid::new(-1.0, 1.0, 1 << 12).unwrap();
        let p = SamplePath::from_scalar_fn(g, |t| t).unwrap();
        let v = one_norm_history(&p, 1.0, 0.25).unwrap();
        assert_relative_eq!(v, 4.0 / 3.0, epsilon = 1e-2);
    }

    #[test]
    fn one_norm_grid_refinement_is_stable() {
        for &n in &[1usize << 12, 1 << 13] {
            let g = TimeGrid::new(-1.0, 1.0, n).unwrap();
            let p = SamplePath::from_scalar_fn(g, |t| (4.0 * t).sin()).unwrap();
            let v = one_norm_history(&p, 1.0, 0.25).unwrap();
            // Compare against the half-resolution value.
            let g2 = TimeGrid::new(-1.0, 1.0, n / 2).unwrap();
            let p2 = SamplePath::from_scalar_fn(g2, |t| (4.0 * t).sin()).unwrap();
            let v2 = one_norm_history(&p2, 1.0, 0.25).unwrap();
            assert!((v - v2).abs() / v < 0.05, "n={n}: {v} vs {v2}");
        }
    }

    #[test]
    fn solution_norm_decomposes_and_is_monotone() {
        let g = TimeGrid::new(-0.5, 1.0, 300).unwrap();
        let p = SamplePath::from_scalar_fn(g, |t| (7.0 * t).sin() + 0.5 * t).unwrap();
        let report = solution_norm(&p, 1.0, 0.3, 30).unwrap();
        assert_relative_eq!(report.total, report.sup_norm + report.one_norm);
        for w in report.profile.windows(2) {
            assert!(w[1].sup >= w[0].sup - 1e-12);
            assert!(w[1].one >= w[0].one - 1e-12);
        }
    }

    #[test]
    fn solution_norm_of_constant() {
        let g = TimeGrid::new(-1.0, 1.0, 50).unwrap();
        let p = SamplePath::constant(g, &[-4.0]);
        let report = solution_norm(&p, 1.0, 0.25, 10).unwrap();
        assert_eq!(report.total, 4.0);
    }

    #[test]
    fn triangle_inequality_for_norms() {
        let g = TimeGrid::new(-0.5, 1.0, 300).unwrap();
        let x = SamplePath::from_scalar_fn(g.clone(), |t| (9.0 * t).sin()).unwrap();
        let y = SamplePath::from_scalar_fn(g, |t| (t * t) - 0.3 * t).unwrap();
        let s = x.sum(&y).unwrap();
        let alpha = 0.3;
        let sx = sup_norm_history(&x, 1.0).unwrap();
        let sy = sup_norm_history(&y, 1.0).unwrap();
        let ss = sup_norm_history(&s, 1.0).unwrap();
        assert!(ss <= sx + sy + 1e-12);
        let ox = one_norm_history(&x, 1.0, alpha).unwrap();
        let oy = one_norm_history(&y, 1.0, alpha).unwrap();
        let os = one_norm_history(&s, 1.0, alpha).unwrap();
        assert!(os <= ox + oy + 1e-12);
    }

    #[test]
    fn norm_config_validation() {
        assert!(NormConfig::new(0.6).is_err());
        let cfg = NormConfig::new(0.4).unwrap();
        assert!(cfg.validate_against(0.65, 1.0).is_ok());
        assert!(cfg.validate_against(0.55, 1.0).is_err()); // alpha <= 1 - gamma
        assert!(cfg.validate_against(0.65, 0.3).is_err()); // alpha >= theta
    }

    #[test]
    fn measured_exponent_of_linear_path_is_one() {
        let p = linear_path(1 << 10);
        let e = measured_holder_exponent(&p, 0.0, 1.0).unwrap();
        assert_relative_eq!(e, 1.0, epsilon = 1e-9);
    }
}
