//! Ramaré's identity and the factorisation of `sum_{n <= X} f(n) n^{-s}`
//! into prime-window pieces `Q_j F_j` plus three correction lists.
//!
//! Prime windows are half-open, `e^{j/H} <= p < e^{(j+1)/H}`, so every prime
//! in `[P, Q]` belongs to exactly one window.
//!
//! `f` must be multiplicative: the pieces use `f(pm) = f(p) f(m)` for
//! `p` not dividing `m`, and only the `p | m` pairs are corrected.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::ops::{Add, Mul, Sub};

use crate::coeffs::{rho, CoefficientTable};
use crate::dirichlet::DirichletPolynomial;
use crate::error::{Error, Result};
use crate::primes::{factorize, primes_up_to};

/// Reassembly tolerance for floating coefficients, relative to `1 + |f(n)|`.
pub const REASSEMBLY_TOL: f64 = 1e-10;

/// Coefficient ring for a decomposition: complex floats for tables, exact
/// rationals for integer-valued test functions.
pub trait Coefficient:
    Clone + Send + Sync + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self>
{
    /// `num / den` in this ring.
    fn ratio(num: u64, den: u64) -> Self;

    /// `|self - reference| / (1 + |reference|)`.
    fn deviation(&self, reference: &Self) -> f64;
}

impl Coefficient for Complex64 {
    fn ratio(num: u64, den: u64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn deviation(&self, reference: &Self) -> f64 {
        (self - reference).norm() / (1.0 + reference.norm())
    }
}

impl Coefficient for BigRational {
    fn ratio(num: u64, den: u64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn deviation(&self, reference: &Self) -> f64 {
        let diff = (self - reference).abs();
        if diff.is_zero() {
            return 0.0;
        }
        (diff / (BigRational::one() + reference.abs())).to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `#{p prime : p | m, P <= p <= Q}`.
pub fn omega_range(m: u64, p: f64, q: f64) -> u32 {
    assert!(m >= 1, "omega_range needs m >= 1");
    factorize(m)
        .into_iter()
        .filter(|(pr, _)| in_window(*pr, p, q))
        .count() as u32
}

fn in_window(pr: u64, p: f64, q: f64) -> bool {
    let x = pr as f64;
    x >= p && x <= q
}

/// `sum_{mp = n, P <= p <= Q} 1 / (omega_{[P,Q]}(m) + 1_{p not | m})`, exactly.
pub fn ramare_weight(n: u64, p: f64, q: f64) -> BigRational {
    assert!(n >= 1, "ramare_weight needs n >= 1");
    let mut total = BigRational::zero();
    for (pr, _) in factorize(n).into_iter().filter(|(pr, _)| in_window(*pr, p, q)) {
        let m = n / pr;
        let den = omega_range(m, p, q) + u32::from(m % pr != 0);
        total += BigRational::ratio(1, den as u64);
    }
    total
}

/// `(X, P, Q, H)` for one decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecompositionParams {
    pub x: u64,
    pub p: f64,
    pub q: f64,
    pub h: f64,
}

impl DecompositionParams {
    pub fn new(x: u64, p: f64, q: f64, h: f64) -> Result<Self> {
        let params = DecompositionParams { x, p, q, h };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 2.0) || !(self.p <= self.q) || !(self.q <= self.x as f64) {
            return Err(Error::InvalidParameter(format!(
                "need 2 <= P <= Q <= X, got P = {}, Q = {}, X = {}",
                self.p, self.q, self.x
            )));
        }
        if !(self.h >= 1.0) || !self.h.is_finite() {
            return Err(Error::InvalidParameter(format!("need finite H >= 1, got {}", self.h)));
        }
        Ok(())
    }

    /// Window index of a prime, `floor(H log p)`.
    pub fn window_of(&self, p: u64) -> i64 {
        (self.h * (p as f64).ln()).floor() as i64
    }

    /// `floor(H log P) ..= floor(H log Q)`.
    pub fn j_range(&self) -> (i64, i64) {
        (
            (self.h * self.p.ln()).floor() as i64,
            (self.h * self.q.ln()).floor() as i64,
        )
    }

    /// `ceil(X e^{1/H})`, the reassembly horizon.
    pub fn horizon(&self) -> usize {
        (self.x as f64 * (1.0 / self.h).exp()).ceil() as usize
    }

    /// Primes `p` with `P <= p <= Q`.
    pub fn window_primes(&self) -> Vec<u64> {
        primes_up_to(self.q.floor() as u64)
            .into_iter()
            .filter(|&pr| pr as f64 >= self.p)
            .collect()
    }
}

/// `Q_j` and `F_j` for one window.
#[derive(Debug, Clone)]
pub struct WindowPiece<C> {
    pub j: i64,
    /// Primes of the window with `f(p)`.
    pub q_terms: Vec<(u64, C)>,
    /// `m <= m_max` with `f(m) / (omega(m) + 1)`.
    pub f_terms: Vec<(u64, C)>,
    pub m_max: u64,
}

/// A correction attached to the pair `(p, m)` at `n = pm`.
#[derive(Debug, Clone)]
pub struct PairTerm<C> {
    pub p: u64,
    pub m: u64,
    pub j: i64,
    pub value: C,
}

#[derive(Debug, Clone)]
pub struct RamareDecomposition<C> {
    pub params: DecompositionParams,
    pub provenance: String,
    pub windows: Vec<WindowPiece<C>>,
    /// `p | m`, `pm <= X`: `f(pm)/omega(m) - f(p) f(m)/(omega(m) + 1)`.
    pub pm_corrections: Vec<PairTerm<C>>,
    /// `pm > X` pairs picked up by dropping `pm <= X`: `f(p) f(m)/(omega(m) + 1)`.
    pub overcount: Vec<PairTerm<C>>,
    /// `f(n)` for `n <= X` coprime to every prime in `[P, Q]`.
    pub rough: Vec<(u64, C)>,
    // f(1..=horizon), index n - 1
    target: Vec<C>,
}

/// Decomposition of a coefficient table in floating point.
pub fn decompose(table: &CoefficientTable, params: DecompositionParams) -> Result<RamareDecomposition<Complex64>> {
    params.validate()?;
    let horizon = params.horizon();
    table.require_len(horizon)?;
    decompose_values(&table.values()[..horizon], params, table.provenance())
}

/// Decomposition of `f(1..=L)` with `L >= ceil(X e^{1/H})`.
pub fn decompose_values<C: Coefficient>(
    values: &[C],
    params: DecompositionParams,
    provenance: &str,
) -> Result<RamareDecomposition<C>> {
    params.validate()?;
    let horizon = params.horizon();
    if values.len() < horizon {
        return Err(Error::TableTooShort {
            needed: horizon,
            available: values.len(),
        });
    }
    let x = params.x;
    let f = |n: u64| values[(n - 1) as usize].clone();
    let primes = params.window_primes();

    // group primes by window
    let (j_lo, j_hi) = params.j_range();
    let mut by_window: Vec<Vec<u64>> = vec![Vec::new(); (j_hi - j_lo + 1) as usize];
    for &pr in &primes {
        let j = params.window_of(pr).clamp(j_lo, j_hi);
        by_window[(j - j_lo) as usize].push(pr);
    }
    let m_max_of = |j: i64, ps: &[u64]| -> u64 {
        let nominal = (x as f64 * (-(j as f64) / params.h).exp()).floor() as u64;
        // float rounding must never cut off a pair with pm <= X
        ps.iter().map(|&pr| x / pr).fold(nominal, u64::max)
    };
    let m_cap = by_window
        .iter()
        .enumerate()
        .map(|(i, ps)| m_max_of(j_lo + i as i64, ps))
        .max()
        .unwrap_or(0)
        .max(x);
    if m_cap as usize > values.len() {
        return Err(Error::TableTooShort {
            needed: m_cap as usize,
            available: values.len(),
        });
    }

    // omega_{[P,Q]}(m) for m <= m_cap
    let mut omega = vec![0u32; m_cap as usize + 1];
    for &pr in &primes {
        let mut k = pr;
        while k <= m_cap {
            omega[k as usize] += 1;
            k += pr;
        }
    }
    let weight = |m: u64| C::ratio(1, omega[m as usize] as u64 + 1);

    let windows: Vec<WindowPiece<C>> = by_window
        .par_iter()
        .enumerate()
        .map(|(i, ps)| {
            let j = j_lo + i as i64;
            let m_max = m_max_of(j, ps);
            let q_terms = ps.iter().map(|&pr| (pr, f(pr))).collect();
            let f_terms = if ps.is_empty() {
                Vec::new()
            } else {
                (1..=m_max).map(|m| (m, f(m) * weight(m))).collect()
            };
            WindowPiece {
                j,
                q_terms,
                f_terms,
                m_max,
            }
        })
        .collect();

    let mut pm_corrections = Vec::new();
    let mut overcount = Vec::new();
    for w in &windows {
        for &pr in w.q_terms.iter().map(|(pr, _)| pr) {
            for m in 1..=w.m_max {
                if pr * m > x {
                    overcount.push(PairTerm {
                        p: pr,
                        m,
                        j: w.j,
                        value: f(pr) * f(m) * weight(m),
                    });
                } else if m % pr == 0 {
                    let om = omega[m as usize] as u64;
                    pm_corrections.push(PairTerm {
                        p: pr,
                        m,
                        j: w.j,
                        value: f(pr * m) * C::ratio(1, om) - f(pr) * f(m) * weight(m),
                    });
                }
            }
        }
    }

    let rough = (1..=x)
        .filter(|&n| omega[n as usize] == 0)
        .map(|n| (n, f(n)))
        .collect();

    Ok(RamareDecomposition {
        params,
        provenance: provenance.to_string(),
        windows,
        pm_corrections,
        overcount,
        rough,
        target: values[..horizon].to_vec(),
    })
}

/// Coefficient-level recombination of a decomposition.
#[derive(Debug, Clone)]
pub struct Reassembly<C> {
    /// Combined coefficient at `n = 1..=ceil(X e^{1/H})`, index `n - 1`.
    pub combined: Vec<C>,
    pub max_deviation: f64,
    pub argmax: u64,
}

impl<C: Coefficient> RamareDecomposition<C> {
    /// `sum_j Q_j F_j - overcount + pm-corrections + rough`, coefficient by
    /// coefficient, compared with `f(n) 1_{n <= X}`.
    pub fn reassemble(&self) -> Result<Reassembly<C>> {
        let horizon = self.target.len();
        let mut combined = vec![C::zero(); horizon];
        for w in &self.windows {
            for (pr, fp) in &w.q_terms {
                for (m, fm) in &w.f_terms {
                    let n = (pr * m) as usize;
                    if n > horizon {
                        return Err(Error::Reassembly {
                            n: n as u64,
                            deviation: f64::INFINITY,
                        });
                    }
                    combined[n - 1] = combined[n - 1].clone() + fp.clone() * fm.clone();
                }
            }
        }
        for t in &self.overcount {
            let n = (t.p * t.m) as usize;
            combined[n - 1] = combined[n - 1].clone() - t.value.clone();
        }
        for t in &self.pm_corrections {
            let n = (t.p * t.m) as usize;
            combined[n - 1] = combined[n - 1].clone() + t.value.clone();
        }
        for (n, v) in &self.rough {
            let i = (*n - 1) as usize;
            combined[i] = combined[i].clone() + v.clone();
        }
        let mut max_deviation = 0.0f64;
        let mut argmax = 1;
        for (i, c) in combined.iter().enumerate() {
            let n = i as u64 + 1;
            let expected = if n <= self.params.x {
                self.target[i].clone()
            } else {
                C::zero()
            };
            let dev = c.deviation(&expected);
            if dev > max_deviation || dev.is_nan() {
                max_deviation = dev;
                argmax = n;
            }
        }
        if !(max_deviation < REASSEMBLY_TOL) {
            return Err(Error::Reassembly {
                n: argmax,
                deviation: max_deviation,
            });
        }
        Ok(Reassembly {
            combined,
            max_deviation,
            argmax,
        })
    }

    /// Support checks: window primes lie in `[P, Q]` and in their half-open
    /// window, `F_j` stays below `X e^{-j/H}`, and every prime of `[P, Q]`
    /// appears exactly once.
    pub fn check_supports(&self) -> Result<()> {
        let p = &self.params;
        let mut count = 0usize;
        for w in &self.windows {
            let lo = (w.j as f64 / p.h).exp();
            let hi = ((w.j + 1) as f64 / p.h).exp();
            for (pr, _) in &w.q_terms {
                let x = *pr as f64;
                let ok = crate::primes::is_prime(*pr)
                    && x >= p.p
                    && x <= p.q
                    && x >= lo * (1.0 - 1e-12)
                    && x < hi * (1.0 + 1e-12);
                if !ok {
                    return Err(Error::Degenerate(format!("prime {pr} misplaced in window {}", w.j)));
                }
                count += 1;
            }
            let bound = p.x as f64 * (-(w.j as f64) / p.h).exp();
            if let Some((m, _)) = w.f_terms.last() {
                if *m as f64 > bound * (1.0 + 1e-12) + 1e-9 {
                    return Err(Error::Degenerate(format!("F_{} reaches m = {m} > {bound}", w.j)));
                }
            }
        }
        if count != p.window_primes().len() {
            return Err(Error::Degenerate(format!(
                "{count} window primes stored, {} expected",
                p.window_primes().len()
            )));
        }
        Ok(())
    }
}

impl RamareDecomposition<Complex64> {
    /// `Q_j(it)` of the window with index `j`.
    pub fn q_poly(&self, j: i64) -> Option<DirichletPolynomial> {
        let w = self.windows.iter().find(|w| w.j == j)?;
        DirichletPolynomial::from_terms(w.q_terms.iter().cloned(), format!("{}|Q_{j}", self.provenance)).ok()
    }

    /// `F_j(it)` of the window with index `j`.
    pub fn f_poly(&self, j: i64) -> Option<DirichletPolynomial> {
        let w = self.windows.iter().find(|w| w.j == j)?;
        DirichletPolynomial::from_terms(w.f_terms.iter().cloned(), format!("{}|F_{j}", self.provenance)).ok()
    }

    /// Indices `j` whose window holds at least one prime.
    pub fn occupied_windows(&self) -> Vec<i64> {
        self.windows.iter().filter(|w| !w.q_terms.is_empty()).map(|w| w.j).collect()
    }
}

/// Parameter recipe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ParameterMode {
    /// `Q = exp(log X / log log X)`, `P = exp(log^{1 - e} X)`,
    /// `H = (log X)^e`, `e = rho_d / (3d + 2)`, `Z = log X`.
    Paper,
    /// `Q` as in `Paper`, `P = exp(log^{beta + eps} X)`, `H = log X`.
    PaperBeta { beta: f64, eps: f64 },
    /// User values, subject to `P < Q <= X`.
    Desk { p: f64, q: f64, h: f64 },
}

/// Output of [`select_parameters`]. Logarithms are kept alongside the
/// values because `P` and `Q` overflow `f64` for large `X`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParameterSelection {
    pub mode: ParameterMode,
    pub x: f64,
    pub degree: usize,
    pub log_p: f64,
    pub log_q: f64,
    pub p: f64,
    pub q: f64,
    pub h: f64,
    pub z: f64,
    /// `P >= Q`: no prime window exists.
    pub infeasible: bool,
}

impl ParameterSelection {
    /// Integer-`X` decomposition parameters; fails for infeasible selections.
    pub fn decomposition_params(&self) -> Result<DecompositionParams> {
        if self.infeasible {
            return Err(Error::InvalidParameter(format!(
                "parameters infeasible at X = {}: log P = {} >= log Q = {}",
                self.x, self.log_p, self.log_q
            )));
        }
        DecompositionParams::new(self.x.floor() as u64, self.p, self.q, self.h.max(1.0))
    }
}

pub fn select_parameters(x: f64, degree: usize, mode: ParameterMode) -> Result<ParameterSelection> {
    if !(x >= 16.0) || !x.is_finite() {
        return Err(Error::InvalidParameter(format!("parameter selection needs X >= 16, got {x}")));
    }
    if degree == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let log_x = x.ln();
    let log_q_paper = log_x / log_x.ln();
    let z = log_x;
    let (log_p, log_q, h) = match mode {
        ParameterMode::Paper => {
            let e = rho(degree) / (3 * degree + 2) as f64;
            (log_x.powf(1.0 - e), log_q_paper, log_x.powf(e))
        }
        ParameterMode::PaperBeta { beta, eps } => {
            if !(beta > 0.0 && eps > 0.0 && beta + eps < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "need beta, eps > 0 with beta + eps < 1, got {beta}, {eps}"
                )));
            }
            (log_x.powf(beta + eps), log_q_paper, log_x)
        }
        ParameterMode::Desk { p, q, h } => {
            if !(p >= 2.0 && p < q && q <= x) {
                return Err(Error::InvalidParameter(format!(
                    "desk parameters need 2 <= P < Q <= X, got P = {p}, Q = {q}, X = {x}"
                )));
            }
            if !(h >= 1.0) || !h.is_finite() {
                return Err(Error::InvalidParameter(format!("desk H must be finite and >= 1, got {h}")));
            }
            (p.ln(), q.ln(), h)
        }
    };
    let (p, q) = match mode {
        ParameterMode::Desk { p, q, .. } => (p, q),
        _ => (log_p.exp(), log_q.exp()),
    };
    Ok(ParameterSelection {
        mode,
        x,
        degree,
        log_p,
        log_q,
        p,
        q,
        h,
        z,
        infeasible: log_p >= log_q,
    })
}
