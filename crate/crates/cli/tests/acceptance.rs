//! Acceptance criteria AC1..AC15, one PASS/FAIL line each.
//!
//! Criteria listed in `KNOWN_UNATTAINABLE` are reported as FAIL but do not
//! change the exit status; every other failure does.

use std::collections::BTreeMap;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use lmoment::cache::{load_table, parse_table, render_table, save_table};
use lmoment::coeffs::{
    complete_homogeneous, delta_rankin_selberg_table, delta_spec, delta_table, diagnostic_scan, extend_multiplicative, grc_audit,
    kappa, local_coeffs, local_coeffs_deviation, rankin_selberg_local, rho, eta, ramanujan_tau, sym_square_rankin_selberg_table,
    sym_square_table, unitary_satake, zeta_like, CoefficientTable, ScanKind, TableKind, RS_REAL_TOL,
};
use lmoment::dirichlet::{DirichletPolynomial, QuadratureSpec};
use lmoment::halasz::minimize;
use lmoment::mean_sums::{
    boxplus_partial_sum, geometric_grid, main_term_fit, psi, smooth_window, window_decay_audit, BOXPLUS_TOL,
};
use lmoment::moments::{moment_experiment, trend_scan, MomentOptions, TRule};
use lmoment::primes::{binomial, gcd, primes_up_to};
use lmoment::ramare::{decompose, decompose_values, ramare_weight, select_parameters, DecompositionParams, ParameterMode};
use lmoment::rng::SplitMix64;
use lmoment::{BigRational, Complex64};

// Pinned tolerances.
const AC2_TOL: f64 = 1e-10;
const AC3_NEWTON_TOL: f64 = 1e-12;
const AC3_RS_TOL: f64 = 1e-10;
const AC4_SLACK: f64 = 1e-9;
const AC5_HECKE_TOL: f64 = 1e-12;
const AC6_TOL: f64 = 0.15;
const AC7_CEILING: f64 = 3.0;
const AC8_PERIOD_REL: f64 = 1e-3;
const AC8_CONST_ABS: f64 = 1e-6;
const AC9_T_TOL: f64 = 1e-3;
const AC9_M_TOL: f64 = 1e-6;
const AC10_KAPPA3_LITERAL: f64 = 5.864e-4;
const AC10_KAPPA3_TOL: f64 = 1e-7;
const AC13_RESIDUAL_EXP: f64 = 0.75;
const AC13_PSI_TOL: f64 = 1e-14;
const AC14_MIN_EXPONENT: f64 = 0.9;

const KNOWN_UNATTAINABLE: &[(&str, &str)] = &[(
    "AC10",
    "rho_d = 1/(100 d^3) exceeds kappa_d ~ pi^2/(72 d^5) for every d >= 4, and kappa_3 evaluates to 5.6325e-4, not 5.864e-4",
)];

type Check = Result<(bool, String), String>;

struct Outcome {
    id: &'static str,
    pass: bool,
}

fn run(id: &'static str, limit: Option<Duration>, f: impl FnOnce() -> Check) -> Outcome {
    let start = Instant::now();
    let result = f();
    let elapsed = start.elapsed();
    let (mut pass, mut detail) = match result {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = limit {
        if elapsed > limit {
            pass = false;
            detail.push_str(&format!("; runtime {:.1}s over {:.0}s", elapsed.as_secs_f64(), limit.as_secs_f64()));
        }
    }
    let status = if pass { "PASS" } else { "FAIL" };
    println!("{id:<5} {status}  {detail}  ({:.2}s)", elapsed.as_secs_f64());
    Outcome { id, pass }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn delta_1e6() -> &'static CoefficientTable {
    static T: OnceLock<CoefficientTable> = OnceLock::new();
    T.get_or_init(|| delta_table(1_000_000).expect("delta table"))
}

fn ac1() -> Check {
    let windows: [(f64, f64); 5] = [(2.0, 5.0), (3.0, 31.0), (11.0, 97.0), (2.0, 1e4), (101.0, 97.0)];
    let mut mismatches = 0usize;
    for &(p, q) in &windows {
        let prod: Vec<u64> = primes_up_to(q.max(0.0) as u64)
            .into_iter()
            .filter(|&r| r as f64 >= p && r as f64 <= q)
            .collect();
        for n in 1..=10_000u64 {
            let hit = prod.iter().any(|&r| gcd(n, r) > 1);
            let expected = if hit { BigRational::from_integer(1.into()) } else { BigRational::from_integer(0.into()) };
            if ramare_weight(n, p, q) != expected {
                mismatches += 1;
            }
        }
    }
    Ok((mismatches == 0, format!("{mismatches} mismatches over 5 windows x 10^4 n")))
}

fn ac2() -> Check {
    let params = DecompositionParams::new(5000, 11.0, 97.0, 4.0).map_err(e)?;
    let horizon = params.horizon();
    let expected_horizon = (5000.0f64 * 0.25f64.exp()).ceil() as usize;
    let table = delta_table(horizon).map_err(e)?;
    let float = decompose(&table, params).map_err(e)?.reassemble().map_err(e)?;
    let ones = vec![BigRational::from_integer(1.into()); 60];
    let exact_params = DecompositionParams::new(30, 2.0, 5.0, 2.0).map_err(e)?;
    let exact = decompose_values(&ones, exact_params, "zeta").map_err(e)?.reassemble().map_err(e)?;
    let pass = float.max_deviation < AC2_TOL && exact.max_deviation == 0.0 && horizon == expected_horizon;
    Ok((
        pass,
        format!(
            "delta max dev {:.2e} over n <= {horizon}; lambda=1 rational dev {}",
            float.max_deviation, exact.max_deviation
        ),
    ))
}

fn ac3() -> Check {
    let mut newton_max = 0.0f64;
    for seed in 0..100u64 {
        let d = 2 + (seed % 5) as usize;
        let spec = unitary_satake(1000 + seed, d, 50, seed % 2 == 0).map_err(e)?;
        for &p in spec.primes() {
            newton_max = newton_max.max(local_coeffs_deviation(spec.alphas(p).map_err(e)?, 20));
        }
    }
    let mut rs_max = 0.0f64;
    for d in 1..=4usize {
        for seed in 0..5u64 {
            let spec = unitary_satake(7 * seed + d as u64, d, 30, seed % 2 == 1).map_err(e)?;
            for &p in spec.primes() {
                let a = spec.alphas(p).map_err(e)?;
                let products: Vec<Complex64> = a.iter().flat_map(|x| a.iter().map(move |y| x * y.conj())).collect();
                let brute = complete_homogeneous(&products, 10);
                let rec = rankin_selberg_local(&spec, p, 10).map_err(e)?;
                for k in 0..=10usize {
                    let scale = binomial((k + d * d - 1) as u64, (d * d - 1) as u64) as f64;
                    rs_max = rs_max.max((brute[k] - rec[k]).norm() / scale);
                }
            }
        }
    }
    Ok((
        newton_max <= AC3_NEWTON_TOL && rs_max <= AC3_RS_TOL,
        format!("h_r vs Newton {newton_max:.2e}; RS recursion vs products {rs_max:.2e}"),
    ))
}

fn ac4() -> Check {
    let n = 100_000;
    let mut lines = Vec::new();
    let mut pass = true;
    for (name, t, rs) in [
        ("delta", delta_table(n).map_err(e)?, delta_rankin_selberg_table(n).map_err(e)?),
        ("sym2delta", sym_square_table(n).map_err(e)?, sym_square_rankin_selberg_table(n).map_err(e)?),
    ] {
        let a = grc_audit(&t, &rs).map_err(e)?;
        let ok = a.violations.is_empty()
            && a.max_tau_ratio <= 1.0 + AC4_SLACK
            && a.max_rs_ratio <= 1.0 + AC4_SLACK
            && a.max_rs_imag <= RS_REAL_TOL
            && a.min_rs_real >= -RS_REAL_TOL;
        pass &= ok;
        lines.push(format!(
            "{name}: {} violations, max |l|/tau {:.3}, max |l|^2/RS {:.12}, RS imag {:.1e}, min RS {:.1e}",
            a.violations.len(),
            a.max_tau_ratio,
            a.max_rs_ratio,
            a.max_rs_imag,
            a.min_rs_real
        ));
    }
    Ok((pass, lines.join("; ")))
}

fn ac5() -> Check {
    let values = [(2, -24), (3, 252), (5, 4830), (6, -6048)];
    let mut pass = true;
    for (n, v) in values {
        pass &= ramanujan_tau(n).map_err(e)? == v;
    }
    // Independent route: the normalised eta-product table up to 10^6, so the
    // relation is checked for every (p, r) whose p^{r+1} it contains.
    let table = delta_1e6();
    // Pairs beyond the table go through h_r of the Satake parameters instead.
    let spec = delta_spec(100).map_err(e)?;
    let mut worst = 0.0f64;
    let mut local_worst = 0.0f64;
    let mut checked = 0;
    let mut skipped = 0;
    for p in primes_up_to(100) {
        for r in 1..=5u32 {
            let Some(next) = p.checked_pow(r + 1).filter(|&m| m <= table.len() as u64) else {
                let l = local_coeffs(&spec, p, 6).map_err(e)?;
                let r = r as usize;
                local_worst = local_worst.max((l[1] * l[r] - l[r + 1] - l[r - 1]).norm());
                skipped += 1;
                continue;
            };
            let lp = table.get(p as usize).re;
            let lhs = lp * table.get(p.pow(r) as usize).re;
            let rhs = table.get(next as usize).re + table.get(p.pow(r - 1) as usize).re;
            worst = worst.max((lhs - rhs).abs());
            checked += 1;
        }
    }
    pass &= worst <= AC5_HECKE_TOL && local_worst <= AC5_HECKE_TOL;
    Ok((
        pass,
        format!(
            "tau(2,3,5,6) exact; Hecke relation max dev {worst:.2e} on {checked} (p,r) pairs from the table, {local_worst:.2e} on {skipped} pairs beyond 10^6 via Satake h_r"
        ),
    ))
}

fn ac6() -> Check {
    let report = diagnostic_scan(delta_1e6(), &ScanKind::PrimeSquare { xs: vec![1e6] }).map_err(e)?;
    let ratio = report.rows[0].ratio;
    Ok(((ratio - 1.0).abs() <= AC6_TOL, format!("sum |l(p)|^2 log p / X = {ratio:.6} at X = 10^6")))
}

fn ac7() -> Check {
    let mut rng = SplitMix64::new(20_240_607);
    let quad = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut unconverged = 0;
    for i in 0..50 {
        let n = 32u64 << (rng.next_u64() % 6);
        let t = 100.0 * 100f64.powf(rng.next_f64());
        let terms: Vec<(u64, Complex64)> = (n..=2 * n)
            .map(|m| (m, Complex64::from_polar(rng.next_f64() + 0.1, 2.0 * std::f64::consts::PI * rng.next_f64())))
            .collect();
        let poly = DirichletPolynomial::from_terms(terms, format!("random-{i}")).map_err(e)?;
        let r = poly.mvt_ratio(n, t, &quad).map_err(e)?;
        worst = worst.max(r.ratio);
        unconverged += usize::from(!r.converged);
    }
    let mut corpus_ok = true;
    let mut runs = 0;
    let synth = {
        let spec = unitary_satake(5, 4, 2048, false).map_err(e)?;
        extend_multiplicative(&spec, 2048, TableKind::Standard).map_err(e)?
    };
    let tables = [delta_table(2048).map_err(e)?, sym_square_table(2048).map_err(e)?, zeta_like(2048).map_err(e)?, synth];
    let options = MomentOptions { excise: false, ..MomentOptions::default() };
    for table in &tables {
        for &(x, t) in &[(256u64, 64.0), (2048, 200.0)] {
            let rep = moment_experiment(table, x, t, &quad, &options).map_err(e)?;
            corpus_ok &= rep.normalizations.within_ceiling && rep.integral.value >= 0.0;
            runs += 1;
        }
    }
    Ok((
        worst <= AC7_CEILING && corpus_ok,
        format!("max mvt ratio {worst:.3} over 50 blocks ({unconverged} unconverged); {runs} corpus runs within 3(2T+X) sum|l|^2: {corpus_ok}"),
    ))
}

fn ac8() -> Check {
    let quad = QuadratureSpec::with_tol(1e-8);
    let two = DirichletPolynomial::from_terms(
        vec![(1, Complex64::new(1.0, 0.0)), (2, Complex64::new(1.0, 0.0))],
        "1+2^-it",
    )
    .map_err(e)?;
    let period = 2.0 * std::f64::consts::PI / 2f64.ln();
    let got = two.second_moment(0.0, period, &quad).map_err(e)?.value;
    let want = 4.0 * std::f64::consts::PI / 2f64.ln();
    let one = DirichletPolynomial::from_terms(vec![(1, Complex64::new(1.0, 0.0))], "1").map_err(e)?;
    let c = one.second_moment(0.0, 10.0, &quad).map_err(e)?.value;
    let rel = (got - want).abs() / want;
    Ok((
        rel <= AC8_PERIOD_REL && (c - 10.0).abs() <= AC8_CONST_ABS,
        format!("period integral rel err {rel:.2e}; constant over [0,10] = {c}"),
    ))
}

fn ac9() -> Check {
    let x = 10_000u64;
    let twisted = zeta_like(x as usize).map_err(e)?.twisted(5.0);
    let prof = minimize(&twisted, x, 1000.0, 1e-3).map_err(e)?;
    let flat = minimize(&zeta_like(x as usize).map_err(e)?, x, 1000.0, 1e-3).map_err(e)?;
    let pass = (prof.t0 - 5.0).abs() <= AC9_T_TOL && prof.m <= AC9_M_TOL && flat.t0 == 0.0 && flat.m == 0.0;
    Ok((
        pass,
        format!(
            "twist: t0 = {:.10}, M = {:.2e}; lambda=1: (t0, M) = ({}, {})",
            prof.t0, prof.m, flat.t0, flat.m
        ),
    ))
}

/// `1 - sin(x)/x` by its alternating Taylor series.
fn one_minus_sinc_series(x: f64) -> f64 {
    let mut term = x * x / 6.0;
    let mut acc = 0.0;
    let mut k = 1.0;
    while term.abs() > 1e-30 {
        acc += term;
        term *= -x * x / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
        k += 1.0;
    }
    acc
}

fn ac10() -> Check {
    let mut rho_fail: Vec<usize> = Vec::new();
    let mut eta_fail: Vec<usize> = Vec::new();
    for d in 3..=64usize {
        let oracle = one_minus_sinc_series(std::f64::consts::PI / (2.0 * (d * d) as f64)) / (3.0 * d as f64);
        if (oracle - kappa(d)).abs() > 1e-12 * oracle {
            return Ok((false, format!("kappa({d}) disagrees with the series oracle")));
        }
        let r = 1.0 / (100.0 * (d as f64).powi(3));
        if !(rho(d) == r && oracle > r) {
            rho_fail.push(d);
        }
        if !(eta(d) <= r / (3 * d + 2) as f64) {
            eta_fail.push(d);
        }
    }
    let k3 = kappa(3);
    let literal_off = (k3 - AC10_KAPPA3_LITERAL).abs();
    let pass = rho_fail.is_empty() && eta_fail.is_empty() && literal_off <= AC10_KAPPA3_TOL;
    let rho_msg = match (rho_fail.first(), rho_fail.last()) {
        (Some(a), Some(b)) => format!("rho_d < kappa_d fails for d = {a}..{b} ({} values)", rho_fail.len()),
        _ => "rho_d < kappa_d for all d".into(),
    };
    Ok((
        pass,
        format!(
            "{rho_msg}; eta clause fails for {} d; kappa_3 = {k3:.6e} (series oracle agrees), |kappa_3 - 5.864e-4| = {literal_off:.2e}",
            eta_fail.len()
        ),
    ))
}

fn ac11() -> Check {
    let mut bad = Vec::new();
    let grid: Vec<f64> = (0..=4000).map(|k| 16f64 * (1e12f64 / 16.0).powf(k as f64 / 4000.0)).collect();
    for &x in grid.iter().chain([16.0, 1e12].iter()) {
        for d in 3..=5usize {
            let s = select_parameters(x, d, ParameterMode::Paper).map_err(e)?;
            if !s.infeasible || s.z != x.ln() {
                bad.push((x, d));
            }
        }
    }
    Ok((bad.is_empty(), format!("{} of {} (X, d) pairs violate infeasible && Z = log X", bad.len(), 3 * 4003)))
}

fn ac12() -> Check {
    let xs = [1024u64, 2048, 4096, 8192];
    let table = sym_square_table(8192).map_err(e)?;
    let rep = trend_scan(&table, &xs, TRule::Power { degree: 3 }, &QuadratureSpec::default()).map_err(e)?;
    let max_ratio = rep.rows.iter().map(|r| r.over_2t_mvt).fold(0.0, f64::max);
    let rule_ok = rep.rows.iter().all(|r| r.t == (r.x as f64).powf(2.0 / 3.0).max(16.0));
    let mono = rep.nonincreasing == Some(true);
    let over: Vec<String> = rep.rows.iter().map(|r| format!("{:.4}", r.over_x2)).collect();
    Ok((
        max_ratio <= 3.0 && mono && rule_ok,
        format!("I/((2T+X) sum|l|^2) <= {max_ratio:.4}; I/X^2 = [{}] non-increasing: {mono}", over.join(", ")),
    ))
}

fn ac13() -> Check {
    let table = delta_1e6();
    let mut rng = SplitMix64::new(13);
    let mut worst_dev = 0.0f64;
    for _ in 0..20 {
        let x = 1 + rng.next_u64() % 1_000_000;
        worst_dev = worst_dev.max(boxplus_partial_sum(table, x).map_err(e)?.deviation);
    }
    let fit = main_term_fit(table, &geometric_grid(1000, 1_000_000, 8)).map_err(e)?;
    let sums = lmoment::mean_sums::boxplus_prefix_sums(table, 1_000_000).map_err(e)?;
    let mut residual_ok = true;
    let mut worst_ratio = 0.0f64;
    for x in [1_000u64, 10_000, 100_000, 1_000_000] {
        let r = (sums[x as usize] - fit.c_hat * x as f64).norm();
        let env = (x as f64).powf(AC13_RESIDUAL_EXP);
        residual_ok &= r <= env;
        worst_ratio = worst_ratio.max(r / env);
    }
    let mut psi_dev = 0.0f64;
    for k in 0..=10_000 {
        let v = k as f64 / 10_000.0;
        psi_dev = psi_dev.max((psi(v) + psi(1.0 - v) - 1.0).abs());
    }
    let w = smooth_window(1000.0, 100.0).map_err(e)?;
    let boundary = w.eval(1000.0) == 1.0 && w.eval(1100.0) == 0.0 && psi(0.0) == 1.0 && psi(1.0) == 0.0;
    let pass = worst_dev <= BOXPLUS_TOL && residual_ok && psi_dev <= AC13_PSI_TOL && boundary;
    Ok((
        pass,
        format!(
            "dual-method dev {worst_dev:.2e}; max |S - cX|/X^0.75 = {worst_ratio:.2e} (c = {:.7}); psi partition dev {psi_dev:.1e}; boundary exact {boundary}",
            fit.c_hat.re
        ),
    ))
}

fn ac14() -> Check {
    let (x, y) = (1000.0, 100.0);
    let w = smooth_window(x, y).map_err(e)?;
    let (lo, hi) = (2.0 * x / y, 20.0 * x / y);
    let ts: Vec<f64> = (0..16).map(|k| lo * (hi / lo).powf(k as f64 / 15.0)).collect();
    let audit = window_decay_audit(&w, 1, &ts).map_err(e)?;
    Ok((
        audit.fitted_exponent >= AC14_MIN_EXPONENT,
        format!("fitted decay exponent {:.3} over t in [{lo}, {hi}]", audit.fitted_exponent),
    ))
}

fn masked(stdout: &[u8]) -> String {
    String::from_utf8_lossy(stdout)
        .lines()
        .filter(|l| !l.trim_start().starts_with("\"generated_at\""))
        .collect::<Vec<_>>()
        .join("\n")
}

fn ac15() -> Check {
    let bin = env!("CARGO_BIN_EXE_lmoment");
    let cache = tempfile::tempdir().map_err(e)?;
    let runs: &[&[&str]] = &[
        &["build-coeffs", "--corpus", "delta", "--N", "2000"],
        &["moment", "--corpus", "delta", "--X", "1024", "--T", "64"],
        &["verify-identity", "--corpus", "delta", "--X", "5000", "--P", "11", "--Q", "97", "--H", "4"],
        &["decompose", "--corpus", "sym2delta", "--X", "2000", "--P", "3", "--Q", "40", "--H", "2"],
        &["halasz", "--corpus", "synthetic", "--seed", "4", "--degree", "3", "--X", "500"],
        &["trend", "--corpus", "delta", "--X", "256,512"],
        &["mean-sum", "--corpus", "delta", "--X", "777", "--fit-max", "20000"],
        &["audit", "--corpus", "delta", "--N", "2000", "--window-x", "1000", "--window-y", "100"],
    ];
    let mut failures = Vec::new();
    let mut first_moment = None;
    for args in runs {
        let mut outs = Vec::new();
        for _ in 0..2 {
            let out = Command::new(bin).args(*args).env("LMOMENT_CACHE_DIR", cache.path()).output().map_err(e)?;
            if !out.status.success() {
                failures.push(format!("{} exited {:?}", args[0], out.status.code()));
            }
            outs.push(out.stdout);
        }
        let (a, b) = (masked(&outs[0]), masked(&outs[1]));
        if a != b || !a.contains("\"schema_version\": 1") {
            failures.push(format!("{} not reproducible", args[0]));
        }
        if args[0] == "moment" {
            first_moment = Some(outs.swap_remove(0));
        }
    }
    // Same report whether or not a cached table is present.
    if let Some(with_cache) = first_moment {
        let fresh = tempfile::tempdir().map_err(e)?;
        let out = Command::new(bin).args(runs[1]).env("LMOMENT_CACHE_DIR", fresh.path()).output().map_err(e)?;
        if masked(&out.stdout) != masked(&with_cache) {
            failures.push("moment report depends on the cache".into());
        }
    }
    // Invalid config: nonzero exit, one JSON line on stderr.
    let bad = Command::new(bin)
        .args(["moment", "--corpus", "delta", "--X", "1024", "--T", "1"])
        .env("LMOMENT_CACHE_DIR", cache.path())
        .output()
        .map_err(e)?;
    let err = String::from_utf8_lossy(&bad.stderr).to_string();
    let json_ok = err.lines().count() == 1 && serde_json::from_str::<serde_json::Value>(err.trim()).is_ok();
    if bad.status.success() || !json_ok {
        failures.push("invalid config not reported as a single JSON line".into());
    }
    // Table cache: bit-identical values and identical re-rendering.
    let dir = tempfile::tempdir().map_err(e)?;
    let synth = extend_multiplicative(&unitary_satake(9, 3, 5000, false).map_err(e)?, 5000, TableKind::Standard)
        .map_err(e)?;
    for (name, table) in [("delta", delta_table(10_000).map_err(e)?), ("synthetic", synth)] {
        let path = dir.path().join(format!("{name}.tbl"));
        save_table(&table, name, &path).map_err(e)?;
        let back = load_table(&path).map_err(e)?;
        let bits_equal = back
            .table
            .values()
            .iter()
            .zip(table.values())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
        let text = std::fs::read_to_string(&path).map_err(e)?;
        let rerender = render_table(&parse_table(&text).map_err(e)?.table, name).map_err(e)?;
        if !bits_equal || back.table.len() != table.len() || rerender != text {
            failures.push(format!("{name} cache round trip not exact"));
        }
    }
    Ok((
        failures.is_empty(),
        if failures.is_empty() {
            format!("{} subcommands reproducible modulo timestamp; cache round trip bit-identical", runs.len())
        } else {
            failures.join("; ")
        },
    ))
}

fn main() {
    let secs = Duration::from_secs;
    let outcomes = vec![
        run("AC1", Some(secs(5)), ac1),
        run("AC2", Some(secs(30)), ac2),
        run("AC3", Some(secs(10)), ac3),
        run("AC4", Some(secs(60)), ac4),
        run("AC5", None, ac5),
        run("AC6", None, ac6),
        run("AC7", None, ac7),
        run("AC8", None, ac8),
        run("AC9", None, ac9),
        run("AC10", None, ac10),
        run("AC11", None, ac11),
        run("AC12", Some(secs(600)), ac12),
        run("AC13", None, ac13),
        run("AC14", None, ac14),
        run("AC15", None, ac15),
    ];
    let known: BTreeMap<&str, &str> = KNOWN_UNATTAINABLE.iter().copied().collect();
    let mut unexpected = 0;
    for o in &outcomes {
        if !o.pass {
            match known.get(o.id) {
                Some(reason) => println!("note: {} is a known failure: {reason}", o.id),
                None => unexpected += 1,
            }
        }
    }
    let passed = outcomes.iter().filter(|o| o.pass).count();
    println!("acceptance: {passed}/{} passed, {unexpected} unexpected failures", outcomes.len());
    if unexpected > 0 {
        std::process::exit(1);
    }
}
