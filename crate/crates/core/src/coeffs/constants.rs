use serde::Serialize;
use std::f64::consts::PI;

/// Default zero-free-region exponent.
pub const DEFAULT_BETA: f64 = 2.0 / 3.0;

/// Degree-dependent constants that enter the moment bounds.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsLedger {
    pub degree: usize,
    /// Bound on `|Re mu_j|` at the archimedean place; `None` for `d = 1`.
    pub theta: Option<f64>,
    pub kappa: f64,
    pub rho: f64,
    pub eta: f64,
    pub beta: f64,
    pub rho_below_kappa: bool,
    pub eta_within_rho_exponent: bool,
}

impl ConstantsLedger {
    pub fn new(degree: usize, beta: f64) -> Self {
        let rho = rho(degree);
        let kappa = kappa(degree);
        let eta = eta(degree);
        ConstantsLedger {
            degree,
            theta: theta(degree),
            kappa,
            rho,
            eta,
            beta,
            rho_below_kappa: 0.0 < rho && rho < kappa,
            eta_within_rho_exponent: eta <= rho / (3 * degree + 2) as f64,
        }
    }
}

pub fn theta(d: usize) -> Option<f64> {
    match d {
        0 | 1 => None,
        2 => Some(7.0 / 64.0),
        3 => Some(5.0 / 14.0),
        4 => Some(9.0 / 22.0),
        _ => Some(0.5 - 1.0 / ((d * d) as f64 + 1.0)),
    }
}

/// `1 - sin(x)/x`, with a series near zero where the subtraction cancels.
fn one_minus_sinc(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        // x^2/3! - x^4/5! + x^6/7! - x^8/9! + x^10/11!
        let mut term = x2 / 6.0;
        let mut acc = term;
        let mut k = 2.0;
        for _ in 0..6 {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            acc += term;
            k += 1.0;
        }
        acc
    } else {
        1.0 - x.sin() / x
    }
}

/// `(1/(3d)) (1 - (2d^2/pi) sin(pi/(2d^2)))`.
pub fn kappa(d: usize) -> f64 {
    let d = d as f64;
    one_minus_sinc(PI / (2.0 * d * d)) / (3.0 * d)
}

/// `1 / (100 d^3)`.
pub fn rho(d: usize) -> f64 {
    1.0 / (100.0 * (d as f64).powi(3))
}

/// `1 / (400 d^4)`, the largest admissible log-saving exponent.
pub fn eta(d: usize) -> f64 {
    1.0 / (400.0 * (d as f64).powi(4))
}
