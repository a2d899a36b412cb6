//! Local coefficients at a single prime.
//!
//! `lambda(p^r)` is the complete homogeneous symmetric polynomial `h_r` in
//! the Satake parameters. It is computed directly and again through the
//! Newton recursion `r lambda(p^r) = sum_{v=1}^r a(p^v) lambda(p^{r-v})`
//! that comes from exponentiating the log-derivative series; the two must
//! agree.

use num_complex::Complex64;

use super::satake::SatakeSpec;
use crate::error::{Error, Result};

/// Relative agreement required between `h_r` and the Newton recursion.
pub const NEWTON_TOL: f64 = 1e-12;
/// Relative agreement required between the Rankin–Selberg recursion and
/// `h_k` over the `d^2` parameter products.
pub const RANKIN_SELBERG_TOL: f64 = 1e-10;

/// `h_0 .. h_{r_max}` of `xs`, by multiplying in one geometric series at a time.
pub fn complete_homogeneous(xs: &[Complex64], r_max: usize) -> Vec<Complex64> {
    let mut h = vec![Complex64::new(0.0, 0.0); r_max + 1];
    h[0] = Complex64::new(1.0, 0.0);
    for &x in xs {
        for r in 1..=r_max {
            let prev = h[r - 1];
            h[r] += x * prev;
        }
    }
    h
}

/// Same recurrence on `|x|`; the size every coefficient is measured against.
fn natural_scale(xs: &[Complex64], r_max: usize) -> Vec<f64> {
    let abs: Vec<Complex64> = xs.iter().map(|x| Complex64::new(x.norm(), 0.0)).collect();
    complete_homogeneous(&abs, r_max)
        .into_iter()
        .map(|c| c.re.max(1.0))
        .collect()
}

/// Power sums `a(p^v) = sum_j alpha_j^v` for `v = 0..=v_max` (index 0 holds `d`).
pub fn power_sums_of(xs: &[Complex64], v_max: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); v_max + 1];
    let mut pw: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); xs.len()];
    out[0] = Complex64::new(xs.len() as f64, 0.0);
    for slot in out.iter_mut().skip(1) {
        for (p, &x) in pw.iter_mut().zip(xs) {
            *p *= x;
        }
        *slot = pw.iter().sum();
    }
    out
}

/// Coefficients of `exp(sum_v s_v / v * T^v)` from the power sums `s_v`.
pub fn newton_from_power_sums(s: &[Complex64], r_max: usize) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); r_max + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for r in 1..=r_max {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in 1..=r {
            acc += s[v] * c[r - v];
        }
        c[r] = acc / r as f64;
    }
    c
}

fn cross_check(
    what: impl FnOnce() -> String,
    a: &[Complex64],
    b: &[Complex64],
    scale: &[f64],
    tol: f64,
) -> Result<()> {
    let worst = a
        .iter()
        .zip(b)
        .zip(scale)
        .map(|((x, y), s)| (x - y).norm() / s)
        .fold(0.0, f64::max);
    if worst > tol {
        return Err(Error::CrossCheck {
            what: what(),
            deviation: worst,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Largest relative deviation between the direct and recursive routes for
/// `lambda(p^r)`, `r <= r_max`.
pub fn local_coeffs_deviation(xs: &[Complex64], r_max: usize) -> f64 {
    let direct = complete_homogeneous(xs, r_max);
    let newton = newton_from_power_sums(&power_sums_of(xs, r_max.max(1)), r_max);
    let scale = natural_scale(xs, r_max);
    direct
        .iter()
        .zip(&newton)
        .zip(&scale)
        .map(|((x, y), s)| (x - y).norm() / s)
        .fold(0.0, f64::max)
}

/// `lambda(p^r)` for `r = 0..=r_max`, cross-checked between the two routes.
pub fn local_coeffs(spec: &SatakeSpec, p: u64, r_max: usize) -> Result<Vec<Complex64>> {
    local_coeffs_from(spec.alphas(p)?, r_max).map_err(|e| match e {
        Error::CrossCheck { deviation, tolerance, .. } => Error::CrossCheck {
            what: format!("lambda(p^r) at p = {p}"),
            deviation,
            tolerance,
        },
        other => other,
    })
}

pub(crate) fn local_coeffs_from(alphas: &[Complex64], r_max: usize) -> Result<Vec<Complex64>> {
    let direct = complete_homogeneous(alphas, r_max);
    let newton = newton_from_power_sums(&power_sums_of(alphas, r_max.max(1)), r_max);
    cross_check(
        || "lambda(p^r)".to_string(),
        &direct,
        &newton,
        &natural_scale(alphas, r_max),
        NEWTON_TOL,
    )?;
    Ok(direct)
}

/// `a(p^v)` for `v = 1..=v_max` (the returned vector starts at `v = 1`).
pub fn power_sums(spec: &SatakeSpec, p: u64, v_max: usize) -> Result<Vec<Complex64>> {
    if v_max < 1 {
        return Err(Error::InvalidParameter("v_max must be at least 1".into()));
    }
    let s = power_sums_of(spec.alphas(p)?, v_max);
    Ok(s[1..].to_vec())
}

pub(crate) fn rankin_selberg_from(alphas: &[Complex64], k_max: usize) -> Result<Vec<Complex64>> {
    let s = power_sums_of(alphas, k_max.max(1));
    let sq: Vec<Complex64> = s.iter().map(|a| Complex64::new(a.norm_sqr(), 0.0)).collect();
    let recursive = newton_from_power_sums(&sq, k_max);
    let products: Vec<Complex64> = alphas
        .iter()
        .flat_map(|a| alphas.iter().map(move |b| a * b.conj()))
        .collect();
    let direct = complete_homogeneous(&products, k_max);
    cross_check(
        || "lambda_RS(p^k)".to_string(),
        &recursive,
        &direct,
        &natural_scale(&products, k_max),
        RANKIN_SELBERG_TOL,
    )?;
    Ok(recursive)
}

/// `lambda_{pi x pi~}(p^k)` for `k = 0..=k_max` by the `|a(p^v)|^2` recursion,
/// cross-checked against `h_k` over the products `alpha_j * conj(alpha_l)`.
pub fn rankin_selberg_local(spec: &SatakeSpec, p: u64, k_max: usize) -> Result<Vec<Complex64>> {
    rankin_selberg_from(spec.alphas(p)?, k_max).map_err(|e| match e {
        Error::CrossCheck { deviation, tolerance, .. } => Error::CrossCheck {
            what: format!("lambda_RS(p^k) at p = {p}"),
            deviation,
            tolerance,
        },
        other => other,
    })
}
