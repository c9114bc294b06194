//! Replicated Monte Carlo studies over the delay-equation solvers, plus the
//! plumbing they share: configuration, seed substreams, summary statistics,
//! and the CSV/metadata output contract of the `mixedsdde` binary.

pub mod studies;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::grid::write_metadata;

/// Which study to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Moments,
    Stability,
    Uniqueness,
    Convergence,
    Norms,
}

impl StudyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StudyKind::Moments => "moments",
            StudyKind::Stability => "stability",
            StudyKind::Uniqueness => "uniqueness",
            StudyKind::Convergence => "convergence",
            StudyKind::Norms => "norms",
        }
    }
}

/// The benchmark problem a study runs on.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemConfig {
    /// Coefficient preset name (see the preset registry).
    pub preset: String,
    /// Preset parameter overrides.
    pub params: BTreeMap<String, f64>,
    /// Driver for the Young term: "fbm" or "smooth" (a fixed sine path).
    pub driver: String,
    pub delay: f64,
    pub horizon: f64,
    pub hurst: f64,
    pub alpha: f64,
    pub gamma: f64,
    pub theta: f64,
    /// Constant initial value on [-r, 0].
    pub x0: f64,
    /// Number of grid cells on [0, horizon].
    pub grid_steps: usize,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        Self {
            preset: "linear_mixed".into(),
            params: BTreeMap::new(),
            driver: "fbm".into(),
            delay: 0.5,
            horizon: 1.0,
            hurst: 0.7,
            alpha: 0.4,
            gamma: 0.65,
            theta: 1.0,
            x0: 1.0,
            grid_steps: 1 << 10,
        }
    }
}

/// Full study configuration. Any TOML field may be omitted; the CLI can
/// override `seed`, `replicas`, and the output directory.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudyConfig {
    pub study: Option<StudyKind>,
    pub problem: ProblemConfig,
    pub replicas: usize,
    pub seed: u64,
    /// Moment orders p (each >= 1).
    pub moment_orders: Vec<f64>,
    /// Mollification ladder (strictly increasing window rates n).
    pub ladder: Vec<u32>,
    /// Stopping threshold N for the smoothed solver; may be `inf`.
    pub threshold: f64,
    /// Thresholds N for the restricted moments E[.. 1_{A_N}].
    pub threshold_ladder: Vec<f64>,
    /// Grid refinement ladder: grid_steps = 2^k per entry.
    pub dt_exponents: Vec<u32>,
    /// Final-rung distance tolerance.
    pub epsilon: f64,
    /// Allowed deviation of fitted convergence slopes.
    pub slope_tol: f64,
    /// Allowed disagreement in pooled standard errors.
    pub se_tol: f64,
    pub out_dir: Option<PathBuf>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            study: None,
            problem: ProblemConfig::default(),
            replicas: 100,
            seed: 42,
            moment_orders: vec![2.0, 4.0, 8.0],
            ladder: vec![4, 16, 64, 256],
            threshold: f64::INFINITY,
            threshold_ladder: vec![1.0, 2.0, 4.0, 8.0],
            dt_exponents: vec![7, 8, 9, 10],
            epsilon: 1e-2,
            slope_tol: 0.2,
            se_tol: 3.0,
            out_dir: None,
        }
    }
}

impl StudyConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: StudyConfig =
            toml::from_str(text).map_err(|e| Error::Config(format!("bad config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicas == 0 {
            return Err(Error::Config("replicas must be at least 1".into()));
        }
        if self.moment_orders.iter().any(|&p| p < 1.0) {
            return Err(Error::Config("moment orders must satisfy p >= 1".into()));
        }
        if self.ladder.windows(2).any(|w| w[1] <= w[0]) || self.ladder.is_empty() {
            return Err(Error::Config(
                "mollification ladder must be non-empty and strictly increasing".into(),
            ));
        }
        if self.dt_exponents.windows(2).any(|w| w[1] <= w[0]) || self.dt_exponents.is_empty() {
            return Err(Error::Config(
                "dt_exponents must be non-empty and strictly increasing".into(),
            ));
        }
        if self
            .threshold_ladder
            .windows(2)
            .any(|w| w[1] <= w[0])
        {
            return Err(Error::Config(
                "threshold_ladder must be strictly increasing".into(),
            ));
        }
        let p = &self.problem;
        if !(p.horizon > 0.0 && p.delay > 0.0) {
            return Err(Error::Config("horizon and delay must be positive".into()));
        }
        let dt = p.horizon / p.grid_steps as f64;
        let ratio = p.delay / dt;
        if (ratio - ratio.round()).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "delay {} is not a multiple of the grid step {dt}",
                p.delay
            )));
        }
        if p.driver != "fbm" && p.driver != "smooth" {
            return Err(Error::Config(format!(
                "driver must be \"fbm\" or \"smooth\", got {:?}",
                p.driver
            )));
        }
        Ok(())
    }
}

/// Per-replica seed substreams: one ChaCha12 stream per replica index off the
/// master seed, drawing one sub-seed per driver. Fixed derivation so parallel
/// and sequential runs agree.
pub fn replica_seeds(master: u64, replica: u64) -> (u64, u64) {
    let mut rng = ChaCha12Rng::seed_from_u64(master);
    rng.set_stream(replica);
    (rng.next_u64(), rng.next_u64())
}

/// One per-replica record: a fixed tuple of named values.
#[derive(Debug, Clone)]
pub struct Record {
    pub replica: usize,
    pub seed: u64,
    pub values: Vec<f64>,
}

/// One pass/fail decision with its observable.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Everything a study produces; the output files are pure functions of this.
#[derive(Debug, Clone)]
pub struct StudyResult {
    pub study: StudyKind,
    pub columns: Vec<String>,
    pub records: Vec<Record>,
    pub summary: Vec<(String, f64)>,
    pub verdicts: Vec<Verdict>,
    pub warnings: Vec<String>,
}

impl StudyResult {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn records_csv(&self) -> String {
        let mut out = String::from("replica,seed");
        for c in &self.columns {
            let _ = write!(out, ",{c}");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{},{}", r.replica, r.seed);
            for v in &r.values {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut out = String::from("statistic,value\n");
        for (k, v) in &self.summary {
            let _ = writeln!(out, "{k},{v}");
        }
        out
    }

    pub fn verdict_text(&self) -> String {
        let mut out = String::new();
        for v in &self.verdicts {
            let _ = writeln!(
                out,
                "{} {}: {}",
                if v.pass { "PASS" } else { "FAIL" },
                v.name,
                v.detail
            );
        }
        let _ = writeln!(
            out,
            "VERDICT: {}",
            if self.passed() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Run the study named by the config.
pub fn run_study(cfg: &StudyConfig) -> Result<StudyResult> {
    cfg.validate()?;
    let kind = cfg
        .study
        .ok_or_else(|| Error::Config("no study selected".into()))?;
    match kind {
        StudyKind::Moments => studies::run_moment_study(cfg),
        StudyKind::Stability => studies::run_stability_study(cfg),
        StudyKind::Uniqueness => studies::run_uniqueness_check(cfg),
        StudyKind::Convergence => studies::run_convergence_study(cfg),
        StudyKind::Norms => studies::run_norm_study(cfg),
    }
}

/// Write `records.csv`, `summary.csv`, `verdict.txt`, and `meta.txt`.
pub fn write_outputs(result: &StudyResult, cfg: &StudyConfig, out_dir: &Path) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("records.csv"), result.records_csv())?;
    fs::write(out_dir.join("summary.csv"), result.summary_csv())?;
    fs::write(out_dir.join("verdict.txt"), result.verdict_text())?;

    let p = &cfg.problem;
    let mut entries: Vec<(&str, String)> = vec![
        ("study", result.study.name().to_string()),
        ("version", env!("CARGO_PKG_VERSION").to_string()),
        ("seed", cfg.seed.to_string()),
        ("replicas", cfg.replicas.to_string()),
        ("preset", p.preset.clone()),
        ("driver", p.driver.clone()),
        ("delay", p.delay.to_string()),
        ("horizon", p.horizon.to_string()),
        ("hurst", p.hurst.to_string()),
        ("alpha", p.alpha.to_string()),
        ("gamma", p.gamma.to_string()),
        ("theta", p.theta.to_string()),
        ("x0", p.x0.to_string()),
        ("grid_steps", p.grid_steps.to_string()),
        ("threshold", cfg.threshold.to_string()),
        ("epsilon", cfg.epsilon.to_string()),
        ("slope_tol", cfg.slope_tol.to_string()),
        ("se_tol", cfg.se_tol.to_string()),
        (
            "moment_orders",
            join_nums(cfg.moment_orders.iter().copied()),
        ),
        ("ladder", join_nums(cfg.ladder.iter().map(|&v| v as f64))),
        (
            "threshold_ladder",
            join_nums(cfg.threshold_ladder.iter().copied()),
        ),
        (
            "dt_exponents",
            join_nums(cfg.dt_exponents.iter().map(|&v| v as f64)),
        ),
    ];
    let param_str = p
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";");
    entries.push(("params", param_str));
    let warn = result.warnings.join(" | ");
    entries.push(("warnings", warn));

    let mut meta = fs::File::create(out_dir.join("meta.txt"))?;
    write_metadata(&mut meta, &entries)?;
    meta.flush()?;
    Ok(())
}

fn join_nums(it: impl Iterator<Item = f64>) -> String {
    it.map(|v| v.to_string()).collect::<Vec<_>>().join(";")
}

// ---------------------------------------------------------------------------
// Summary statistics shared by the studies.
// ---------------------------------------------------------------------------

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Standard error of the mean (sample standard deviation / sqrt(n)).
pub fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return f64::INFINITY;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

pub fn quantile(xs: &[f64], q: f64) -> f64 {
    assert!(!xs.is_empty() && (0.0..=1.0).contains(&q));
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let w = pos - lo as f64;
    v[lo] + w * (v[hi] - v[lo])
}

pub fn median(xs: &[f64]) -> f64 {
    quantile(xs, 0.5)
}

/// Midranks (ties averaged).
fn ranks(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| xs[i].total_cmp(&xs[j]));
    let mut r = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let rx = ranks(xs);
    let ry = ranks(ys);
    let mx = mean(&rx);
    let my = mean(&ry);
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..rx.len() {
        let dx = rx[i] - mx;
        let dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy / (sxx * syy).sqrt()
}
