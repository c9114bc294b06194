//! End-to-end acceptance suite. Each test covers one numbered criterion and
//! prints a single pass/fail line with its headline observable.

use std::collections::BTreeMap;

use mixedsdde::driver_paths::{generate_fbm, generate_wiener, FbmParams, InitialSegment};
use mixedsdde::experiments::{
    mean, run_study, standard_error, StudyConfig, StudyKind, StudyResult,
};
use mixedsdde::fractional_integrals::{gls_integral, riemann_stieltjes_oracle};
use mixedsdde::grid::{SamplePath, TimeGrid};
use mixedsdde::holder_norms::{alpha_norm, one_norm_history, solution_norm, sup_norm_history};
use mixedsdde::sdde_solver::coefficients::build_preset;
use mixedsdde::sdde_solver::{euler_solve, Exponents, SddeProblem};

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "{} criterion {criterion}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion}: {detail}");
}

fn verdict(result: &StudyResult, name: &str) -> (bool, String) {
    let v = result
        .verdicts
        .iter()
        .find(|v| v.name == name)
        .unwrap_or_else(|| panic!("missing verdict {name}"));
    (v.pass, v.detail.clone())
}

fn summary(result: &StudyResult, name: &str) -> f64 {
    result
        .summary
        .iter()
        .find(|(k, _)| k == name)
        .unwrap_or_else(|| panic!("missing summary {name}"))
        .1
}

#[test]
fn criterion_1_fbm_generator_covariance() {
    let n = 1usize << 14;
    let paths = 2000usize;
    let grid = TimeGrid::new(0.0, 1.0, n).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for &h in &[0.6, 0.75, 0.9] {
        let mut sq = Vec::with_capacity(paths);
        let mut prod = Vec::with_capacity(paths);
        let base = 500_000 + (1000.0 * h) as u64 * 10_000;
        for i in 0..paths {
            let params = FbmParams::new(h, 1, base + i as u64).unwrap();
            let b = generate_fbm(&grid, &params).unwrap().path;
            let b1 = b.scalar(n);
            let bh = b.scalar(n / 2);
            sq.push(b1 * b1);
            prod.push(b1 * bh);
        }
        // E[B(1)^2] = 1 and E[B(1)B(1/2)] = (1 + 2^{-2H} - 2^{-2H})/2 = 1/2.
        let var = mean(&sq);
        let var_se = standard_error(&sq);
        let cov = mean(&prod);
        let cov_se = standard_error(&prod);
        let ok = (var - 1.0).abs() < 3.0 * var_se && (cov - 0.5).abs() < 3.0 * cov_se;
        pass &= ok;
        details.push(format!(
            "H={h}: Var(B(1))={var:.4}±{var_se:.4}, Cov={cov:.4}±{cov_se:.4}"
        ));
    }
    report("1 (fBm generator)", pass, &details.join("; "));
}

#[test]
fn criterion_2_integral_oracle_equivalence() {
    // Smooth integrand against an fBm integrator.
    let n = 1usize << 14;
    let grid = TimeGrid::new(0.0, 1.0, n).unwrap();
    let f = SamplePath::from_scalar_fn(grid.clone(), |t| (2.0 * t).sin()).unwrap();
    let g = generate_fbm(&grid, &FbmParams::new(0.75, 1, 321).unwrap())
        .unwrap()
        .path;
    let alpha = 0.35;
    let v = gls_integral(&f, &g, alpha, 0.0, 1.0).unwrap();
    let oracle = riemann_stieltjes_oracle(&f, &g, 0.0, 1.0).unwrap();
    let rel_rough = (v - oracle).abs() / oracle.abs().max(1e-12);

    // Smooth pair with a known antiderivative: ∫ cos d(sin) = ∫ cos² dt.
    let n2 = 1usize << 12;
    let grid2 = TimeGrid::new(0.0, 1.0, n2).unwrap();
    let f2 = SamplePath::from_scalar_fn(grid2.clone(), |t| t.cos()).unwrap();
    let g2 = SamplePath::from_scalar_fn(grid2, |t| t.sin()).unwrap();
    let exact = 0.5 + (2.0f64).sin() / 4.0;
    let v2 = gls_integral(&f2, &g2, alpha, 0.0, 1.0).unwrap();
    let err_smooth = (v2 - exact).abs();

    let pass = rel_rough < 1e-2 && err_smooth < 1e-3;
    report(
        "2 (integral oracle equivalence)",
        pass,
        &format!(
            "relative error vs Riemann-Stieltjes on fBm: {rel_rough:.2e}; smooth antiderivative error: {err_smooth:.2e}"
        ),
    );
}

#[test]
fn criterion_3_norm_closed_forms() {
    // One-norm of the identity path at t = 1, alpha = 1/4 equals
    // ∫_0^1 (1-s)^{-1/4} ds = 4/3.
    let g = TimeGrid::new(-1.0, 1.0, 1 << 12).unwrap();
    let lin = SamplePath::from_scalar_fn(g, |t| t).unwrap();
    let one = one_norm_history(&lin, 1.0, 0.25).unwrap();
    let err_one = (one - 4.0 / 3.0).abs();

    // Alpha-norm of the identity on [0, 1] equals 1 + 1/alpha.
    let g2 = TimeGrid::new(0.0, 1.0, 1 << 12).unwrap();
    let lin2 = SamplePath::from_scalar_fn(g2, |t| t).unwrap();
    let alpha = 0.4;
    let a_norm = alpha_norm(&lin2, alpha, 0.0, 1.0).unwrap();
    let err_alpha = (a_norm - (1.0 + 1.0 / alpha)).abs();

    let pass = err_one < 1e-2 && err_alpha < 1e-3;
    report(
        "3 (norm closed forms)",
        pass,
        &format!("one-norm error {err_one:.2e} (tol 1e-2); alpha-norm error {err_alpha:.2e} (tol 1e-3)"),
    );
}

#[test]
fn criterion_4_scheme_convergence_slopes() {
    let mut details = Vec::new();
    let mut pass = true;

    // Deterministic pure-delay benchmark: first order in dt.
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Convergence);
    cfg.problem.preset = "pure_delay".into();
    cfg.dt_exponents = vec![6, 7, 8, 9, 10];
    let r = run_study(&cfg).unwrap();
    let slope = summary(&r, "slope");
    pass &= (slope - 1.0).abs() <= 0.2;
    details.push(format!("pure-delay slope {slope:.3}"));

    // Pure-Ito geometric: strong order 1/2.
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Convergence);
    cfg.problem.preset = "geometric".into();
    cfg.problem.params.insert("nu".into(), 0.0);
    cfg.problem.delay = 0.25;
    cfg.replicas = 400;
    cfg.dt_exponents = vec![5, 6, 7, 8, 9];
    let r = run_study(&cfg).unwrap();
    let slope = summary(&r, "slope");
    pass &= (slope - 0.5).abs() <= 0.15;
    details.push(format!("pure-Ito slope {slope:.3}"));

    // Pure-Young geometric on a smooth driver: first order pathwise.
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Convergence);
    cfg.problem.preset = "geometric".into();
    cfg.problem.params.insert("sigma".into(), 0.0);
    cfg.problem.driver = "smooth".into();
    cfg.problem.delay = 0.25;
    cfg.replicas = 1;
    cfg.dt_exponents = vec![6, 7, 8, 9, 10];
    let r = run_study(&cfg).unwrap();
    let slope = summary(&r, "slope");
    pass &= (slope - 1.0).abs() <= 0.2;
    details.push(format!("pure-Young slope {slope:.3}"));

    // Mixed geometric: strong error at dt = 2^-12 over 500 paths.
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Convergence);
    cfg.problem.preset = "geometric".into();
    cfg.problem.delay = 0.25;
    cfg.replicas = 500;
    cfg.dt_exponents = vec![11, 12];
    cfg.epsilon = 5e-2;
    let r = run_study(&cfg).unwrap();
    let strong = summary(&r, "strong_error_k12");
    pass &= strong < 5e-2;
    details.push(format!("mixed strong error {strong:.2e}"));

    report("4 (scheme correctness)", pass, &details.join("; "));
}

#[test]
fn criterion_5_uniqueness_under_refinement() {
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Uniqueness);
    cfg.problem.preset = "linear_mixed".into();
    // Benchmark Young coupling: the euler-vs-smoothed gap scales linearly
    // with it, and the mollification window at n = 256 sets the floor.
    cfg.problem.params.insert("c0".into(), 0.2);
    cfg.replicas = 200;
    cfg.dt_exponents = vec![12, 14];
    cfg.ladder = vec![64, 256];
    cfg.threshold = f64::INFINITY;
    cfg.epsilon = 1e-2;
    let r = run_study(&cfg).unwrap();
    let coarse = summary(&r, "sup_median_k12_n64");
    let fine = summary(&r, "sup_median_k14_n256");
    let (shrinks, _) = verdict(&r, "distance_shrinks_under_refinement");
    let (below, _) = verdict(&r, "final_distance_below_epsilon");
    report(
        "5 (uniqueness)",
        shrinks && below,
        &format!("median sup-distance {coarse:.3e} -> {fine:.3e} (tol 1e-2)"),
    );
}

#[test]
fn criterion_6_driver_stability() {
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Stability);
    cfg.problem.preset = "linear_mixed".into();
    cfg.problem.grid_steps = 1 << 11;
    cfg.replicas = 100;
    cfg.ladder = vec![4, 16, 64, 256];
    cfg.epsilon = 0.5; // the criterion pins monotonicity and association only
    let r = run_study(&cfg).unwrap();
    let (dz_dec, dz_detail) = verdict(&r, "driver_distance_decreasing");
    let (dx_dec, _) = verdict(&r, "solution_distance_decreasing");
    let (assoc, assoc_detail) = verdict(&r, "distances_positively_associated");
    report(
        "6 (driver stability)",
        dz_dec && dx_dec && assoc,
        &format!("{dz_detail}; {assoc_detail}"),
    );
}

#[test]
fn criterion_7_moment_behavior() {
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Moments);
    cfg.problem.preset = "bounded_diffusion".into();
    cfg.problem.hurst = 0.7;
    cfg.replicas = 2000;
    cfg.moment_orders = vec![2.0, 4.0, 8.0];
    cfg.se_tol = 3.0;
    let r = run_study(&cfg).unwrap();
    let mut pass = true;
    let mut details = Vec::new();
    for p in ["2", "4", "8"] {
        let (stable, _) = verdict(&r, &format!("moment_p{p}_stable"));
        let (monotone, _) = verdict(&r, &format!("restricted_p{p}_monotone_in_N"));
        pass &= stable && monotone;
        details.push(format!(
            "p={p}: diff {:.2} SE",
            summary(&r, &format!("moment_p{p}_diff_se"))
        ));
    }
    report("7 (moment behavior)", pass, &details.join("; "));
}

#[test]
fn criterion_8_invariant_suites() {
    let mut pass = true;
    let mut details = Vec::new();

    let exps = Exponents {
        alpha: 0.4,
        gamma: 0.65,
        theta: 1.0,
    };
    let coeffs = build_preset("linear_mixed", &BTreeMap::new(), 0.5).unwrap();
    let g = TimeGrid::new(0.0, 1.0, 512).unwrap();
    let gh = TimeGrid::new(-0.5, 0.0, 256).unwrap();
    let eta = SamplePath::from_scalar_fn(gh, |t| 1.0 + t * t).unwrap();
    let initial = InitialSegment::new(eta.clone(), 1.0).unwrap();
    let w = generate_wiener(&g, 1, 71).unwrap();
    let z = generate_fbm(&g, &FbmParams::new(0.7, 1, 72).unwrap())
        .unwrap()
        .path;

    // Adaptedness: perturbing the drivers strictly after t = 1/2 leaves the
    // solution bit-identical up to t = 1/2.
    let prob = SddeProblem::new(&coeffs, &initial, &w, &z, exps).unwrap();
    let x = euler_solve(&prob).unwrap();
    let cut = g.index_of(0.5).unwrap();
    let perturb = |p: &SamplePath| {
        let mut v = p.values().to_vec();
        for k in (cut + 1)..p.grid().n_points() {
            v[k] += 5.0;
        }
        SamplePath::new(p.grid().clone(), 1, v).unwrap()
    };
    let (w2, z2) = (perturb(&w), perturb(&z));
    let prob2 = SddeProblem::new(&coeffs, &initial, &w2, &z2, exps).unwrap();
    let x2 = euler_solve(&prob2).unwrap();
    let i_half = x.path.grid().index_of(0.5).unwrap();
    let adapted = (0..=i_half).all(|k| x.path.scalar(k) == x2.path.scalar(k));
    pass &= adapted;
    details.push(format!("adaptedness {}", ok(adapted)));

    // History exactness: the initial segment is copied bit-for-bit.
    let i0 = x.path.grid().index_of(0.0).unwrap();
    let history_exact = (0..=i0).all(|k| x.path.scalar(k) == eta.scalar(k));
    pass &= history_exact;
    details.push(format!("history exactness {}", ok(history_exact)));

    // Norm monotonicity on a rough path.
    let report_z = solution_norm(&z, 1.0, 0.4, 24).unwrap();
    let monotone = report_z
        .profile
        .windows(2)
        .all(|p| p[1].sup >= p[0].sup - 1e-12 && p[1].one >= p[0].one - 1e-12);
    pass &= monotone;
    details.push(format!("norm monotonicity {}", ok(monotone)));

    // Absolute homogeneity and the triangle inequality.
    let za = alpha_norm(&z, 0.4, 0.0, 1.0).unwrap();
    let z3 = z.map(|v| 3.0 * v);
    let homo = (alpha_norm(&z3, 0.4, 0.0, 1.0).unwrap() - 3.0 * za).abs() < 1e-9 * za;
    let wz = w.sum(&z).unwrap();
    let tri_sup = sup_norm_history(&wz, 1.0).unwrap()
        <= sup_norm_history(&w, 1.0).unwrap() + sup_norm_history(&z, 1.0).unwrap() + 1e-12;
    let tri_one = one_norm_history(&wz, 1.0, 0.4).unwrap()
        <= one_norm_history(&w, 1.0, 0.4).unwrap() + one_norm_history(&z, 1.0, 0.4).unwrap()
            + 1e-12;
    pass &= homo && tri_sup && tri_one;
    details.push(format!("homogeneity+triangle {}", ok(homo && tri_sup && tri_one)));

    // Determinism of seeded runs, end to end.
    let mut cfg = StudyConfig::default();
    cfg.study = Some(StudyKind::Stability);
    cfg.replicas = 8;
    cfg.problem.grid_steps = 256;
    cfg.ladder = vec![4, 16, 64];
    let a = run_study(&cfg).unwrap();
    let b = run_study(&cfg).unwrap();
    let deterministic = a.records_csv() == b.records_csv()
        && a.summary_csv() == b.summary_csv()
        && a.verdict_text() == b.verdict_text();
    pass &= deterministic;
    details.push(format!("determinism {}", ok(deterministic)));

    report("8 (invariant suites)", pass, &details.join("; "));
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}
