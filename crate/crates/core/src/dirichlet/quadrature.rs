use serde::{Deserialize, Serialize};

use super::DirichletPolynomial;
use crate::error::{Error, Result};
use crate::sum::{pairwise_sum_f64, tree_reduce};

// grid points evaluated per batch, bounds memory on long intervals
const SEGMENT: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureRule {
    CompositeSimpson,
}

/// Composite Simpson with step halving until the relative change drops
/// below `tol_rel`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rule: QuadratureRule,
    /// Requested first step; it is always capped at `min(0.1, 1/(4 log N))`.
    pub base_step: Option<f64>,
    pub tol_rel: f64,
    pub max_refinements: u32,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rule: QuadratureRule::CompositeSimpson,
            base_step: None,
            tol_rel: 1e-3,
            max_refinements: 6,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tol(tol_rel: f64) -> Self {
        QuadratureSpec {
            tol_rel,
            ..Self::default()
        }
    }

    /// Largest admissible first step for a polynomial of support `n`.
    pub fn step_cap(n: u64) -> f64 {
        if n <= 1 {
            0.1
        } else {
            (0.25 / (n as f64).ln()).min(0.1)
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol_rel > 0.0) {
            return Err(Error::InvalidParameter(format!("tol_rel must be positive, got {}", self.tol_rel)));
        }
        if let Some(h) = self.base_step {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::InvalidParameter(format!("base step must be positive, got {h}")));
            }
        }
        Ok(())
    }
}

/// A quadrature value with its convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub value: f64,
    /// Number of step halvings performed.
    pub refinements: u32,
    pub converged: bool,
    /// `|S_h - S_{2h}| / |S_h|` at the last refinement.
    pub rel_change: f64,
    /// Final step.
    pub step: f64,
    pub evaluations: usize,
}

/// Sum of `|P(t)|^2 t^{-alpha}` over `t = start + k step`, `k < count`.
fn sampled_sum(poly: &DirichletPolynomial, start: f64, step: f64, count: usize, alpha: Option<f64>) -> f64 {
    let mut partials = Vec::with_capacity(count.div_ceil(SEGMENT));
    let mut k0 = 0;
    while k0 < count {
        let len = SEGMENT.min(count - k0);
        let t0 = start + k0 as f64 * step;
        let vals = poly.multi_evaluate_uniform(t0, step, len);
        let f: Vec<f64> = vals
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let sq = v.norm_sqr();
                match alpha {
                    Some(a) if a != 0.0 => sq * (t0 + k as f64 * step).powf(-a),
                    _ => sq,
                }
            })
            .collect();
        partials.push(pairwise_sum_f64(&f));
        k0 += len;
    }
    tree_reduce(&mut partials, 0.0)
}

pub(super) fn integrate_squared(
    poly: &DirichletPolynomial,
    a: f64,
    b: f64,
    alpha: Option<f64>,
    quad: &QuadratureSpec,
) -> Result<MomentEstimate> {
    quad.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!("integration needs T1 < T2, got [{a}, {b}]")));
    }
    if alpha.is_some_and(|al| al != 0.0) && a <= 0.0 {
        return Err(Error::InvalidParameter("weighted integrand needs t > 0".into()));
    }
    let mut h0 = QuadratureSpec::step_cap(poly.support()).min((b - a) / 2.0);
    if let Some(h) = quad.base_step {
        h0 = h0.min(h);
    }
    let mut m = ((b - a) / h0).ceil() as usize;
    m += m % 2;
    let mut h = (b - a) / m as f64;

    let f_at = |t: f64| {
        let sq = poly.evaluate(t).norm_sqr();
        match alpha {
            Some(al) if al != 0.0 => sq * t.powf(-al),
            _ => sq,
        }
    };
    let ends = f_at(a) + f_at(b);
    // interior points split by parity of their index
    let odd = sampled_sum(poly, a + h, 2.0 * h, m / 2, alpha);
    let even = if m > 2 {
        sampled_sum(poly, a + 2.0 * h, 2.0 * h, m / 2 - 1, alpha)
    } else {
        0.0
    };
    let mut interior_old = odd + even;
    let mut value = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    let mut evaluations = m + 1;
    let mut refinements = 0;
    let mut rel_change = f64::INFINITY;
    let mut converged = false;

    while refinements < quad.max_refinements {
        let mids = sampled_sum(poly, a + h / 2.0, h, m, alpha);
        evaluations += m;
        h /= 2.0;
        m *= 2;
        let next = h / 3.0 * (ends + 4.0 * mids + 2.0 * interior_old);
        interior_old += mids;
        refinements += 1;
        rel_change = if next == 0.0 {
            (next - value).abs()
        } else {
            (next - value).abs() / next.abs()
        };
        value = next;
        if rel_change < quad.tol_rel {
            converged = true;
            break;
        }
    }
    Ok(MomentEstimate {
        value,
        refinements,
        converged,
        rel_change,
        step: h,
        evaluations,
    })
}
