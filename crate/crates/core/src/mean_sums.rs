//! Sharp and smoothed partial sums of `lambda_{1 boxplus pi} = 1 * lambda_pi`,
//! the smooth cut-off `W` with its Mellin transform, and the main-term fit
//! `S(X) ~ L(1, pi) X`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{boxplus_coeffs, CoefficientTable};
use crate::error::{Error, Result};
use crate::sum::{pairwise_sum_c64, pairwise_sum_f64};

/// Agreement required between the two partial-sum methods.
pub const BOXPLUS_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn bump(v: f64) -> f64 {
    if v > 0.0 {
        (-1.0 / v).exp()
    } else {
        0.0
    }
}

/// `psi(v) = f(1 - v) / (f(v) + f(1 - v))` with `f(v) = e^{-1/v}`: 1 for
/// `v <= 0`, 0 for `v >= 1`, smooth in between.
pub fn psi(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    if v >= 1.0 {
        return 0.0;
    }
    let a = bump(1.0 - v);
    a / (a + bump(v))
}

/// `psi'(v) = -f(v) f(1-v) (1/v^2 + 1/(1-v)^2) / (f(v) + f(1-v))^2`.
pub fn psi_prime(v: f64) -> f64 {
    if v <= 0.0 || v >= 1.0 {
        return 0.0;
    }
    let a = bump(1.0 - v);
    let b = bump(v);
    let s = a + b;
    -(a / s) * (b / s) * (1.0 / (v * v) + 1.0 / ((1.0 - v) * (1.0 - v)))
}

/// `W = 1` on `[0, X]`, `W(X + vY) = psi(v)`, `W = 0` beyond `X + Y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SmoothWindow {
    pub x: f64,
    pub y: f64,
}

pub fn smooth_window(x: f64, y: f64) -> Result<SmoothWindow> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::InvalidParameter(format!("window width Y must be positive, got {y}")));
    }
    if !(y <= x) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("window needs Y <= X, got X = {x}, Y = {y}")));
    }
    Ok(SmoothWindow { x, y })
}

impl SmoothWindow {
    pub fn eval(&self, u: f64) -> f64 {
        if u <= self.x {
            1.0
        } else if u >= self.x + self.y {
            0.0
        } else {
            psi((u - self.x) / self.y)
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        psi_prime((u - self.x) / self.y) / self.y
    }

    /// `sum_n a_n W(n)`, `a` indexed from `n = 1`.
    pub fn smoothed_sum(&self, a: &[Complex64]) -> Result<Complex64> {
        let last = (self.x + self.y).ceil() as usize;
        if a.len() < last {
            return Err(Error::TableTooShort {
                needed: last,
                available: a.len(),
            });
        }
        let terms: Vec<Complex64> = a[..last]
            .iter()
            .enumerate()
            .map(|(i, v)| v * self.eval((i + 1) as f64))
            .collect();
        Ok(pairwise_sum_c64(&terms))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MellinValue {
    pub value: Complex64,
    pub refinements: u32,
    pub converged: bool,
}

/// Composite Simpson for a complex integrand on `[a, b]` with halving until
/// the change is below `tol` relative to `scale`.
fn simpson<F>(g: F, a: f64, b: f64, h_max: f64, tol: f64, scale: f64, max_refinements: u32) -> (Complex64, u32, bool)
where
    F: Fn(f64) -> Complex64 + Sync,
{
    let mut m = ((b - a) / h_max).ceil().max(2.0) as usize;
    m += m % 2;
    let mut h = (b - a) / m as f64;
    let sample = |start: f64, step: f64, count: usize| -> Complex64 {
        let vals: Vec<Complex64> = (0..count).into_par_iter().map(|k| g(start + k as f64 * step)).collect();
        pairwise_sum_c64(&vals)
    };
    let ends = g(a) + g(b);
    let odd = sample(a + h, 2.0 * h, m / 2);
    let even = sample(a + 2.0 * h, 2.0 * h, m / 2 - 1);
    let mut interior = odd + even;
    let mut value = (ends + odd * 4.0 + even * 2.0) * (h / 3.0);
    for r in 1..=max_refinements {
        let mids = sample(a + h / 2.0, h, m);
        h /= 2.0;
        m *= 2;
        let next = (ends + mids * 4.0 + interior * 2.0) * (h / 3.0);
        interior += mids;
        let change = (next - value).norm();
        value = next;
        if change <= tol * scale.max(value.norm()) {
            return (value, r, true);
        }
    }
    (value, max_refinements, false)
}

const MELLIN_TOL: f64 = 1e-11;
const MELLIN_REFINEMENTS: u32 = 12;

/// `W~(s) = int_0^inf W(u) u^{s-1} du = X^s / s + int_X^{X+Y} psi u^{s-1} du`.
pub fn mellin(window: &SmoothWindow, s: Complex64) -> Result<MellinValue> {
    if !(s.re > 0.0) {
        return Err(Error::InvalidParameter(format!("Mellin transform needs Re(s) > 0, got {s}")));
    }
    let (x, y) = (window.x, window.y);
    let head = Complex64::new(x, 0.0).powc(s) / s;
    let h_max = (y / 64.0).min((x + y) * (0.1f64).min(1.0 / (4.0 * s.im.abs() + 4.0)));
    let g = |u: f64| Complex64::new(u, 0.0).powc(s - 1.0) * window.eval(u);
    let scale = head.norm();
    let (tail, refinements, converged) = simpson(g, x, x + y, h_max, MELLIN_TOL, scale, MELLIN_REFINEMENTS);
    Ok(MellinValue {
        value: head + tail,
        refinements,
        converged,
    })
}

/// `W~(s) = -(1/s) int_X^{X+Y} W'(u) u^s du`, the once-integrated form.
pub fn mellin_by_parts(window: &SmoothWindow, s: Complex64) -> Result<MellinValue> {
    if !(s.re > 0.0) {
        return Err(Error::InvalidParameter(format!("Mellin transform needs Re(s) > 0, got {s}")));
    }
    let (x, y) = (window.x, window.y);
    let h_max = (y / 64.0).min((x + y) * (0.1f64).min(1.0 / (4.0 * s.im.abs() + 4.0)));
    let g = |u: f64| Complex64::new(u, 0.0).powc(s) * window.derivative(u);
    let scale = Complex64::new(x + y, 0.0).powc(s).norm() * 1e-6;
    let (integral, refinements, converged) = simpson(g, x, x + y, h_max, MELLIN_TOL, scale, MELLIN_REFINEMENTS);
    Ok(MellinValue {
        value: -integral / s,
        refinements,
        converged,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub t: f64,
    pub modulus: f64,
    /// `|W~|` from the integrated-by-parts form.
    pub modulus_by_parts: f64,
    /// `(Y / (|t|^j X^{1/2})) (X/Y)^j`
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayAudit {
    pub x: f64,
    pub y: f64,
    pub j: u32,
    pub rows: Vec<DecayRow>,
    /// Least-squares slope of `-log |W~|` against `log t`.
    pub fitted_exponent: f64,
    /// `2 (X + Y)^{1/2}`
    pub trivial_ceiling: f64,
}

/// Slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

/// `|W~(1/2 + it)|` along `t_list` against the `j`-fold integration-by-parts
/// bound.
pub fn window_decay_audit(window: &SmoothWindow, j: u32, t_list: &[f64]) -> Result<DecayAudit> {
    if j == 0 {
        return Err(Error::InvalidParameter("decay order j must be at least 1".into()));
    }
    let (x, y) = (window.x, window.y);
    let rows = t_list
        .iter()
        .map(|&t| {
            let s = Complex64::new(0.5, t);
            let direct = mellin(window, s)?;
            let parts = mellin_by_parts(window, s)?;
            Ok(DecayRow {
                t,
                modulus: direct.value.norm(),
                modulus_by_parts: parts.value.norm(),
                bound: y / (t.abs().powi(j as i32) * x.sqrt()) * (x / y).powi(j as i32),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fitted_exponent = -loglog_slope(&rows.iter().map(|r| (r.t.abs(), r.modulus)).collect::<Vec<_>>())
        .unwrap_or(f64::NAN);
    Ok(DecayAudit {
        x,
        y,
        j,
        rows,
        fitted_exponent,
        trivial_ceiling: 2.0 * (x + y).sqrt(),
    })
}

/// `sum_{n <= X} lambda_{1 boxplus pi}(n)` by two methods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoxplusSum {
    pub x: u64,
    /// Sum of the divisor-sieve coefficients.
    pub sieve: Complex64,
    /// `sum_{l <= X} lambda(l) floor(X / l)`
    pub floor_sum: Complex64,
    pub deviation: f64,
}

pub fn boxplus_partial_sum(table: &CoefficientTable, x: u64) -> Result<BoxplusSum> {
    if x == 0 {
        return Err(Error::InvalidParameter("partial sum needs X >= 1".into()));
    }
    let n = x as usize;
    table.require_len(n)?;
    let sieve = pairwise_sum_c64(boxplus_coeffs(table, n)?.values());
    let terms: Vec<Complex64> = (1..=n).map(|l| table.get(l) * (x / l as u64) as f64).collect();
    let floor_sum = pairwise_sum_c64(&terms);
    let deviation = (sieve - floor_sum).norm() / sieve.norm().max(floor_sum.norm()).max(1.0);
    if deviation > BOXPLUS_TOL {
        return Err(Error::CrossCheck {
            what: format!("boxplus partial sum at X = {x}"),
            deviation,
            tolerance: BOXPLUS_TOL,
        });
    }
    Ok(BoxplusSum {
        x,
        sieve,
        floor_sum,
        deviation,
    })
}

/// `S(X)` for every `X <= n`, from the sieve coefficients.
pub fn boxplus_prefix_sums(table: &CoefficientTable, n: usize) -> Result<Vec<Complex64>> {
    let coeffs = boxplus_coeffs(table, n)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(ZERO);
    let mut acc = ZERO;
    for v in coeffs.values() {
        acc += v;
        out.push(acc);
    }
    Ok(out)
}

/// `sum_{n <= N} lambda(n) e^{-n / N0} / n`.
pub fn smoothed_series(table: &CoefficientTable, n: usize, n0: f64) -> Result<Complex64> {
    table.require_len(n)?;
    let terms: Vec<Complex64> = (1..=n)
        .map(|k| table.get(k) * ((-(k as f64) / n0).exp() / k as f64))
        .collect();
    Ok(pairwise_sum_c64(&terms))
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub x: u64,
    pub s: Complex64,
    pub fitted: Complex64,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MainTermFit {
    pub provenance: String,
    /// Least-squares `c` in `S(X) ~ c X`.
    pub c_hat: Complex64,
    pub c_standard_error: f64,
    /// `sqrt(sum |r_i|^2 / sum X_i^2)`
    pub c_systematic_error: f64,
    /// `sum_{n <= N} lambda(n) e^{-n/N0} / n` with `N0 = N / 10`.
    pub smoothed: Complex64,
    /// The same with `N0 / 2`.
    pub smoothed_half: Complex64,
    pub n: usize,
    pub n0: f64,
    pub smoothing_error: f64,
    /// `c_systematic_error + smoothing_error`
    pub uncertainty: f64,
    /// `|c_hat - smoothed|`
    pub gap: f64,
    pub consistent: bool,
    pub rows: Vec<ResidualRow>,
}

fn reject_pole(table: &CoefficientTable) -> Result<()> {
    if table.degree() == 1 && table.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)) {
        return Err(Error::Degenerate(
            "1 boxplus zeta has a double pole at s = 1 and no linear main term".into(),
        ));
    }
    Ok(())
}

pub fn main_term_fit(table: &CoefficientTable, x_grid: &[u64]) -> Result<MainTermFit> {
    reject_pole(table)?;
    if x_grid.is_empty() {
        return Err(Error::InvalidParameter("main-term fit needs a nonempty X grid".into()));
    }
    let n = *x_grid.iter().max().unwrap() as usize;
    if x_grid.contains(&0) {
        return Err(Error::InvalidParameter("X grid must be positive".into()));
    }
    let prefix = boxplus_prefix_sums(table, n)?;
    let sx: Vec<(f64, Complex64)> = x_grid.iter().map(|&x| (x as f64, prefix[x as usize])).collect();
    let sxx = pairwise_sum_f64(&sx.iter().map(|(x, _)| x * x).collect::<Vec<_>>());
    let sxs = pairwise_sum_c64(&sx.iter().map(|(x, s)| s * *x).collect::<Vec<_>>());
    let c_hat = sxs / sxx;
    let rows: Vec<ResidualRow> = x_grid
        .iter()
        .zip(&sx)
        .map(|(&x, (xf, s))| ResidualRow {
            x,
            s: *s,
            fitted: c_hat * *xf,
            residual: (s - c_hat * *xf).norm(),
        })
        .collect();
    let c_standard_error = if rows.len() > 1 {
        let rss: f64 = rows.iter().map(|r| r.residual * r.residual).sum();
        (rss / (rows.len() - 1) as f64 / sxx).sqrt()
    } else {
        0.0
    };
    let n0 = n as f64 / 10.0;
    let smoothed = smoothed_series(table, n, n0)?;
    let smoothed_half = smoothed_series(table, n, n0 / 2.0)?;
    // Residuals are a deterministic oscillation, not independent noise, so
    // the fit error is taken without the 1/(n-1) reduction.
    let c_systematic_error = (rows.iter().map(|r| r.residual * r.residual).sum::<f64>() / sxx).sqrt();
    // truncation error of an O(N0^{-1/2}) tail, extrapolated from two N0
    let smoothing_error = (smoothed - smoothed_half).norm() / (2f64.sqrt() - 1.0);
    let uncertainty = c_systematic_error + smoothing_error;
    let gap = (c_hat - smoothed).norm();
    Ok(MainTermFit {
        provenance: table.provenance().to_string(),
        c_hat,
        c_standard_error,
        c_systematic_error,
        smoothed,
        smoothed_half,
        n,
        n0,
        smoothing_error,
        uncertainty,
        gap,
        consistent: gap <= uncertainty,
        rows,
    })
}

/// `Y = X^{d/(d+2)} (log log X)^{2/(d+2)} / (log X)^{(2 + 2 eta)/(d+2)}`.
pub fn choose_y(x: f64, d: usize, eta: f64) -> Result<f64> {
    if !(x >= 16.0) {
        return Err(Error::InvalidParameter(format!("choose_y needs X >= 16, got {x}")));
    }
    let d = d as f64;
    let l = x.ln();
    Ok(x.powf(d / (d + 2.0)) * l.ln().powf(2.0 / (d + 2.0)) / l.powf((2.0 + 2.0 * eta) / (d + 2.0)))
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentRow {
    pub x: u64,
    pub residual: f64,
    /// `max |S(X') - c X'|` over integers `X/2 < X' <= X`
    pub block_sup: f64,
    /// `X^{d/(d+2)}`
    pub envelope: f64,
    /// `X^{d/(d+2)} (log X)^{(d - 2 eta)/(d+2)} (log log X)^{2/(d+2)}`
    pub theorem_envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExponentScan {
    pub provenance: String,
    pub degree: usize,
    pub c_hat: Complex64,
    pub rows: Vec<ExponentRow>,
    /// Log-log slope of the dyadic-block suprema against `X`.
    pub fitted_exponent: Option<f64>,
    pub note: String,
}

/// Residuals `|S(X) - c X|` against the envelope shape of the mean-value
/// theorem for `1 boxplus pi`. Shapes only: the constants need `d >= 5`.
pub fn error_exponent_scan(table: &CoefficientTable, x_grid: &[u64], fit: &MainTermFit) -> Result<ExponentScan> {
    let d = table.degree().max(1) as f64;
    let eta = crate::coeffs::eta(table.degree().max(1));
    let n = x_grid.iter().copied().max().unwrap_or(0) as usize;
    let prefix = boxplus_prefix_sums(table, n.max(1))?;
    let rows: Vec<ExponentRow> = x_grid
        .iter()
        .map(|&x| {
            let xf = x as f64;
            let residual = (prefix[x as usize] - fit.c_hat * xf).norm();
            let block_sup = (x / 2 + 1..=x)
                .map(|k| (prefix[k as usize] - fit.c_hat * k as f64).norm())
                .fold(0.0, f64::max);
            let envelope = xf.powf(d / (d + 2.0));
            let l = xf.ln();
            let theorem_envelope = envelope * l.powf((d - 2.0 * eta) / (d + 2.0)) * l.ln().powf(2.0 / (d + 2.0));
            ExponentRow {
                x,
                residual,
                block_sup,
                envelope,
                theorem_envelope,
                ratio: block_sup / envelope,
            }
        })
        .collect();
    let fitted_exponent = loglog_slope(&rows.iter().map(|r| (r.x as f64, r.block_sup)).collect::<Vec<_>>());
    Ok(ExponentScan {
        provenance: table.provenance().to_string(),
        degree: table.degree(),
        c_hat: fit.c_hat,
        rows,
        fitted_exponent,
        note: "envelope shape only; the theorem's constants apply for degree >= 5".into(),
    })
}

/// Geometric grid `round(a r^k)` from `a` to `b` with `per_decade` points
/// per factor of ten, deduplicated.
pub fn geometric_grid(a: u64, b: u64, per_decade: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    if a == 0 || b < a || per_decade == 0 {
        return out;
    }
    let steps = ((b as f64 / a as f64).log10() * per_decade as f64).round() as usize;
    for k in 0..=steps {
        let v = if steps == 0 {
            a as f64
        } else {
            (a as f64) * (b as f64 / a as f64).powf(k as f64 / steps as f64)
        };
        let v = (v.round() as u64).clamp(a, b);
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}
