//! Dirichlet polynomials `P(t) = sum a_n n^{-it}` and quadrature of `|P|^2`.

mod quadrature;

pub use quadrature::{MomentEstimate, QuadratureRule, QuadratureSpec};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::primes::primes_up_to;
use crate::sum::{pairwise_sum_c64, tree_reduce, BLOCK};

/// Grid points per chunk of the accelerated path. Each chunk re-anchors its
/// phases with a direct `cis` so rounding in the rotation never accumulates
/// over more than this many steps.
pub const GRID_CHUNK: usize = 256;

/// Agreement required between the accelerated and direct evaluation paths,
/// relative to `sum |a_n|`.
pub const ACCEL_TOL: f64 = 1e-9;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// A finite Dirichlet polynomial with sparse support.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPolynomial {
    ns: Vec<u64>,
    coeffs: Vec<Complex64>,
    logs: Vec<f64>,
    provenance: String,
}

impl DirichletPolynomial {
    /// `a_n = lambda(n)` for `n <= x`.
    pub fn from_table(table: &CoefficientTable, x: usize) -> Result<Self> {
        if x == 0 {
            return Err(Error::InvalidParameter("polynomial length must be at least 1".into()));
        }
        table.require_len(x)?;
        Ok(Self::from_dense(&table.values()[..x], format!("{}|X={x}", table.provenance())))
    }

    /// `a_1..a_N` given densely.
    pub fn from_dense(coeffs: &[Complex64], provenance: impl Into<String>) -> Self {
        let ns: Vec<u64> = (1..=coeffs.len() as u64).collect();
        let logs = ns.iter().map(|&n| (n as f64).ln()).collect();
        DirichletPolynomial {
            ns,
            coeffs: coeffs.to_vec(),
            logs,
            provenance: provenance.into(),
        }
    }

    /// Arbitrary `(n, a_n)` pairs; repeated `n` are added together.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (u64, Complex64)>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let mut terms: Vec<(u64, Complex64)> = terms.into_iter().collect();
        if terms.iter().any(|(n, _)| *n == 0) {
            return Err(Error::InvalidParameter("Dirichlet polynomial index n = 0".into()));
        }
        terms.sort_by_key(|(n, _)| *n);
        let mut ns: Vec<u64> = Vec::with_capacity(terms.len());
        let mut coeffs: Vec<Complex64> = Vec::with_capacity(terms.len());
        for (n, a) in terms {
            if ns.last() == Some(&n) {
                *coeffs.last_mut().unwrap() += a;
            } else {
                ns.push(n);
                coeffs.push(a);
            }
        }
        let logs = ns.iter().map(|&n| (n as f64).ln()).collect();
        Ok(DirichletPolynomial {
            ns,
            coeffs,
            logs,
            provenance: provenance.into(),
        })
    }

    /// Largest index carrying a stored coefficient (0 for the empty polynomial).
    pub fn support(&self) -> u64 {
        self.ns.last().copied().unwrap_or(0)
    }

    pub fn indices(&self) -> &[u64] {
        &self.ns
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn num_terms(&self) -> usize {
        self.ns.len()
    }

    /// `a_n`, zero when `n` is not stored.
    pub fn coeff(&self, n: u64) -> Complex64 {
        match self.ns.binary_search(&n) {
            Ok(i) => self.coeffs[i],
            Err(_) => ZERO,
        }
    }

    /// `sum |a_n|`, the trivial bound for `|P(t)|`.
    pub fn l1_norm(&self) -> f64 {
        crate::sum::pairwise_sum_f64(&self.coeffs.iter().map(|a| a.norm()).collect::<Vec<_>>())
    }

    /// `sum |a_n|^2`.
    pub fn mass(&self) -> f64 {
        crate::sum::pairwise_sum_f64(&self.coeffs.iter().map(|a| a.norm_sqr()).collect::<Vec<_>>())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|a| a.im == 0.0)
    }

    /// Terms whose index lies in `[lo, hi]`.
    pub fn restrict(&self, lo: u64, hi: u64) -> Self {
        let (ns, coeffs): (Vec<u64>, Vec<Complex64>) = self
            .ns
            .iter()
            .zip(&self.coeffs)
            .filter(|(n, _)| **n >= lo && **n <= hi)
            .map(|(n, a)| (*n, *a))
            .unzip();
        let logs = ns.iter().map(|&n| (n as f64).ln()).collect();
        DirichletPolynomial {
            ns,
            coeffs,
            logs,
            provenance: format!("{}|[{lo},{hi}]", self.provenance),
        }
    }

    /// `P(t)` by direct summation in fixed pairwise order.
    pub fn evaluate(&self, t: f64) -> Complex64 {
        let mut blocks: Vec<Complex64> = self
            .coeffs
            .chunks(BLOCK)
            .zip(self.logs.chunks(BLOCK))
            .map(|(a, l)| {
                a.iter()
                    .zip(l)
                    .fold(ZERO, |acc, (a, l)| acc + a * Complex64::cis(-t * l))
            })
            .collect();
        tree_reduce(&mut blocks, ZERO)
    }

    /// Pointwise [`evaluate`](Self::evaluate) on a sorted grid.
    pub fn multi_evaluate_direct(&self, grid: &[f64]) -> Result<Vec<Complex64>> {
        check_sorted(grid)?;
        Ok(grid.par_iter().map(|&t| self.evaluate(t)).collect())
    }

    /// `P` on a sorted grid. Uniform grids take the phase-rotation path,
    /// anything else is evaluated directly.
    pub fn multi_evaluate(&self, grid: &[f64]) -> Result<Vec<Complex64>> {
        check_sorted(grid)?;
        if grid.len() >= 3 {
            let step = (grid[grid.len() - 1] - grid[0]) / (grid.len() - 1) as f64;
            let scale = grid[0].abs().max(grid[grid.len() - 1].abs()).max(1.0);
            let uniform = step > 0.0
                && grid
                    .iter()
                    .enumerate()
                    .all(|(k, &t)| (t - (grid[0] + k as f64 * step)).abs() <= 1e-12 * scale);
            if uniform {
                return Ok(self.multi_evaluate_uniform(grid[0], step, grid.len()));
            }
        }
        self.multi_evaluate_direct(grid)
    }

    /// `P(t0 + k step)` for `k = 0..count` by incremental phase rotation.
    ///
    /// The grid is cut into chunks of [`GRID_CHUNK`] points; within a chunk
    /// each term is advanced by multiplying with `n^{-i step}`. Block totals
    /// are combined in the same tree order as [`evaluate`](Self::evaluate).
    pub fn multi_evaluate_uniform(&self, t0: f64, step: f64, count: usize) -> Vec<Complex64> {
        let rotations: Vec<Complex64> = self.logs.iter().map(|l| Complex64::cis(-step * l)).collect();
        let starts: Vec<usize> = (0..count).step_by(GRID_CHUNK).collect();
        let chunks: Vec<Vec<Complex64>> = starts
            .par_iter()
            .map(|&k0| {
                let len = GRID_CHUNK.min(count - k0);
                let t_start = t0 + k0 as f64 * step;
                self.uniform_chunk(t_start, len, &rotations)
            })
            .collect();
        chunks.into_iter().flatten().collect()
    }

    fn uniform_chunk(&self, t_start: f64, len: usize, rotations: &[Complex64]) -> Vec<Complex64> {
        let n_blocks = self.coeffs.len().div_ceil(BLOCK);
        // block_sums[k * n_blocks + b]
        let mut block_sums = vec![ZERO; len * n_blocks];
        let mut z = Vec::with_capacity(BLOCK);
        for b in 0..n_blocks {
            let lo = b * BLOCK;
            let hi = (lo + BLOCK).min(self.coeffs.len());
            z.clear();
            z.extend(
                self.coeffs[lo..hi]
                    .iter()
                    .zip(&self.logs[lo..hi])
                    .map(|(a, l)| a * Complex64::cis(-t_start * l)),
            );
            let w = &rotations[lo..hi];
            for k in 0..len {
                let mut acc = ZERO;
                for (zi, wi) in z.iter_mut().zip(w) {
                    acc += *zi;
                    *zi *= wi;
                }
                block_sums[k * n_blocks + b] = acc;
            }
        }
        if n_blocks == 0 {
            return vec![ZERO; len];
        }
        block_sums
            .chunks(n_blocks)
            .map(|bs| tree_reduce(&mut bs.to_vec(), ZERO))
            .collect()
    }

    /// `int_{t1}^{t2} |P(t)|^2 dt` by refined composite Simpson.
    pub fn second_moment(&self, t1: f64, t2: f64, quad: &QuadratureSpec) -> Result<MomentEstimate> {
        quadrature::integrate_squared(self, t1, t2, None, quad)
    }

    /// `int_1^T t^{-alpha} |P(t)|^2 dt`.
    pub fn weighted_second_moment(&self, t: f64, alpha: f64, quad: &QuadratureSpec) -> Result<MomentEstimate> {
        if !(t > 1.0) {
            return Err(Error::InvalidParameter(format!("weighted moment needs T > 1, got {t}")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("weight exponent {alpha} is not finite")));
        }
        quadrature::integrate_squared(self, 1.0, t, Some(alpha), quad)
    }

    /// `int_0^T |P|^2 / ((T + N) sum |a_n|^2)` for a polynomial supported on
    /// the dyadic block `[N, 2N]`.
    pub fn mvt_ratio(&self, n_low: u64, t: f64, quad: &QuadratureSpec) -> Result<MvtRatio> {
        if n_low == 0 {
            return Err(Error::InvalidParameter("dyadic block must start at N >= 1".into()));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!("mvt ratio needs T > 0, got {t}")));
        }
        if let Some((n, _)) = self
            .ns
            .iter()
            .zip(&self.coeffs)
            .find(|(n, a)| (**n < n_low || **n > 2 * n_low) && **a != ZERO)
        {
            return Err(Error::InvalidParameter(format!(
                "coefficient at n = {n} lies outside [{n_low}, {}]",
                2 * n_low
            )));
        }
        let mass = self.mass();
        if mass == 0.0 {
            return Err(Error::ZeroMass);
        }
        let integral = self.second_moment(0.0, t, quad)?;
        let denominator = (t + n_low as f64) * mass;
        Ok(MvtRatio {
            n_low,
            t,
            integral: integral.value,
            mass,
            ratio: integral.value / denominator,
            converged: integral.converged,
        })
    }
}

/// Result of [`DirichletPolynomial::mvt_ratio`].
#[derive(Debug, Clone, Serialize)]
pub struct MvtRatio {
    pub n_low: u64,
    pub t: f64,
    pub integral: f64,
    pub mass: f64,
    pub ratio: f64,
    pub converged: bool,
}

fn check_sorted(grid: &[f64]) -> Result<()> {
    for (i, w) in grid.windows(2).enumerate() {
        if !(w[0] <= w[1]) {
            return Err(Error::UnsortedGrid(i + 1));
        }
    }
    if let Some(i) = grid.iter().position(|t| !t.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid point {i} is not finite")));
    }
    Ok(())
}

/// `sum_{P <= p <= Q} lambda(p) p^{-it}` over primes.
pub fn twisted_prime_sum(table: &CoefficientTable, p: f64, q: f64, t: f64) -> Result<Complex64> {
    if !(p >= 2.0) || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("prime window needs 2 <= P, got P = {p}")));
    }
    if p > q {
        return Err(Error::InvalidParameter(format!("empty prime window: P = {p} > Q = {q}")));
    }
    let q_int = q.floor() as u64;
    table.require_len(q_int as usize)?;
    let terms: Vec<Complex64> = primes_up_to(q_int)
        .into_iter()
        .filter(|&pr| pr as f64 >= p)
        .map(|pr| table.get(pr as usize) * Complex64::cis(-t * (pr as f64).ln()))
        .collect();
    Ok(pairwise_sum_c64(&terms))
}
