//! Pretentious distance `D(t) = sum_{p <= X} (|lambda(p)| - Re(lambda(p) p^{-it})) / p`
//! and its minimiser.

use num_complex::Complex64;
use serde::Serialize;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use crate::coeffs::{kappa, CoefficientTable};
use crate::error::{Error, Result};
use crate::primes::primes_up_to;
use crate::sum::pairwise_sum_f64;

/// Default search half-width `min(X, 1000)`.
pub fn default_t_bound(x: u64) -> f64 {
    (x as f64).min(1e3)
}

// cells of the first branch-and-bound partition
const COARSE_CELLS: i64 = 2048;

/// Prime data for repeated evaluation of `D(t)`.
#[derive(Debug, Clone)]
pub struct DistanceFunction {
    x: u64,
    logs: Vec<f64>,
    // lambda(p) / p
    scaled: Vec<Complex64>,
    // |lambda(p)| / p
    abs_scaled: Vec<f64>,
    lipschitz: f64,
}

impl DistanceFunction {
    pub fn new(table: &CoefficientTable, x: u64) -> Result<Self> {
        if x < 2 {
            return Err(Error::InvalidParameter(format!("distance needs X >= 2, got {x}")));
        }
        table.require_len(x as usize)?;
        let primes = primes_up_to(x);
        let logs: Vec<f64> = primes.iter().map(|&p| (p as f64).ln()).collect();
        let scaled: Vec<Complex64> = primes.iter().map(|&p| table.get(p as usize) / p as f64).collect();
        let abs_scaled: Vec<f64> = scaled.iter().map(|z| z.norm()).collect();
        let lipschitz = pairwise_sum_f64(&abs_scaled.iter().zip(&logs).map(|(a, l)| a * l).collect::<Vec<_>>());
        Ok(DistanceFunction {
            x,
            logs,
            scaled,
            abs_scaled,
            lipschitz,
        })
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    /// `sum_p |lambda(p)| log p / p`, a bound for `|D'(t)|`.
    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn is_degenerate(&self) -> bool {
        self.abs_scaled.iter().all(|&a| a == 0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let terms: Vec<f64> = self
            .scaled
            .iter()
            .zip(&self.abs_scaled)
            .zip(&self.logs)
            .map(|((z, a), l)| a - (z * Complex64::cis(-t * l)).re)
            .collect();
        pairwise_sum_f64(&terms)
    }
}

/// `D(t)` for one `t`.
pub fn distance(table: &CoefficientTable, x: u64, t: f64) -> Result<f64> {
    Ok(DistanceFunction::new(table, x)?.eval(t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub d: f64,
}

/// Sampled distance curve with its minimiser.
#[derive(Debug, Clone, Serialize)]
pub struct HalaszProfile {
    pub provenance: String,
    pub x: u64,
    pub degree: usize,
    pub t_bound: f64,
    /// Requested accuracy and the resulting fine-grid spacing.
    pub target_accuracy: f64,
    pub delta: f64,
    pub lipschitz: f64,
    /// Best point of the fine grid.
    pub grid_t: f64,
    pub grid_min: f64,
    pub t0: f64,
    pub m: f64,
    /// The minimiser sits within one grid step of `+-t_bound`.
    pub boundary: bool,
    pub evaluations: usize,
    /// Coarse partition points plus `t0`, sorted by `t`.
    pub samples: Vec<Sample>,
}

#[derive(PartialEq)]
struct Cell {
    lower: f64,
    a: i64,
    b: i64,
}

impl Eq for Cell {}

impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on the lower bound, then on position for determinism
        other
            .lower
            .total_cmp(&self.lower)
            .then_with(|| other.a.cmp(&self.a))
    }
}

impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `true` when `(d1, t1)` beats `(d2, t2)`: lower value, then smaller `|t|`,
/// then positive `t`.
fn better(d1: f64, t1: f64, d2: f64, t2: f64) -> bool {
    match d1.total_cmp(&d2) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => match t1.abs().total_cmp(&t2.abs()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => t1 > t2,
        },
    }
}

/// Minimises `D` over `|t| <= t_bound`.
///
/// The fine grid `t = k delta` with `delta <= accuracy / (2d (log X + 1))`
/// is searched by Lipschitz branch-and-bound, which returns the same point
/// as an exhaustive scan of the grid. Golden-section search then refines
/// around the three best grid points.
pub fn minimize(table: &CoefficientTable, x: u64, t_bound: f64, target_accuracy: f64) -> Result<HalaszProfile> {
    if !(t_bound > 0.0) || !t_bound.is_finite() {
        return Err(Error::InvalidParameter(format!("t_bound must be positive, got {t_bound}")));
    }
    if !(target_accuracy > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "target accuracy must be positive, got {target_accuracy}"
        )));
    }
    let f = DistanceFunction::new(table, x)?;
    if f.is_degenerate() {
        return Err(Error::Degenerate("lambda(p) vanishes at every prime p <= X".into()));
    }
    let d = table.degree().max(1) as f64;
    let nominal = target_accuracy / (2.0 * d * ((x as f64).ln() + 1.0));
    let k_max = (t_bound / nominal).ceil() as i64;
    let delta = t_bound / k_max as f64;
    let lip = f.lipschitz() * (1.0 + 1e-9);
    let slack = 1e-12 * (1.0 + pairwise_sum_f64(&f.abs_scaled));

    let mut cache: HashMap<i64, f64> = HashMap::new();
    let eval = |k: i64, cache: &mut HashMap<i64, f64>| -> f64 {
        *cache.entry(k).or_insert_with(|| f.eval(k as f64 * delta))
    };

    let stride = ((2 * k_max) / COARSE_CELLS).max(1);
    let mut coarse: Vec<i64> = (-k_max..=k_max).step_by(stride as usize).collect();
    if *coarse.last().unwrap() != k_max {
        coarse.push(k_max);
    }
    if let Err(pos) = coarse.binary_search(&0) {
        coarse.insert(pos, 0);
    }
    let mut best_k = 0i64;
    let mut best = eval(0, &mut cache);
    for &k in &coarse {
        let v = eval(k, &mut cache);
        if better(v, k as f64, best, best_k as f64) {
            best = v;
            best_k = k;
        }
    }
    let bound = |a: i64, b: i64, da: f64, db: f64| 0.5 * (da + db) - 0.5 * lip * (b - a) as f64 * delta - slack;
    let mut heap = BinaryHeap::new();
    for w in coarse.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b - a > 1 {
            let lower = bound(a, b, cache[&a], cache[&b]);
            heap.push(Cell { lower, a, b });
        }
    }
    while let Some(cell) = heap.pop() {
        if cell.lower > best {
            break;
        }
        let mid = cell.a + (cell.b - cell.a) / 2;
        let dm = eval(mid, &mut cache);
        if better(dm, mid as f64, best, best_k as f64) {
            best = dm;
            best_k = mid;
        }
        for (a, b) in [(cell.a, mid), (mid, cell.b)] {
            if b - a > 1 {
                let lower = bound(a, b, cache[&a], cache[&b]);
                if lower <= best {
                    heap.push(Cell { lower, a, b });
                }
            }
        }
    }

    // three best evaluated grid points, pairwise more than one step apart
    let mut ranked: Vec<(i64, f64)> = cache.iter().map(|(k, v)| (*k, *v)).collect();
    ranked.sort_by(|a, b| {
        if better(a.1, a.0 as f64, b.1, b.0 as f64) {
            Ordering::Less
        } else if better(b.1, b.0 as f64, a.1, a.0 as f64) {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    });
    let mut seeds: Vec<i64> = Vec::new();
    for (k, _) in &ranked {
        if seeds.iter().all(|s| (s - k).abs() > 1) {
            seeds.push(*k);
        }
        if seeds.len() == 3 {
            break;
        }
    }
    let grid_t = best_k as f64 * delta;
    let grid_min = best;
    let mut t0 = grid_t;
    let mut m = grid_min;
    let mut evaluations = cache.len();
    for k in seeds {
        let lo = ((k - 1) as f64 * delta).max(-t_bound);
        let hi = ((k + 1) as f64 * delta).min(t_bound);
        let (t, v, n) = golden_section(&f, lo, hi);
        evaluations += n;
        if v < m || (v == m && better(v, t, m, t0)) {
            t0 = t;
            m = v;
        }
    }

    let mut samples: Vec<Sample> = coarse
        .iter()
        .map(|&k| Sample {
            t: k as f64 * delta,
            d: cache[&k],
        })
        .collect();
    let pos = samples.partition_point(|s| s.t < t0);
    if samples.get(pos).map(|s| s.t) != Some(t0) {
        samples.insert(pos, Sample { t: t0, d: m });
    }

    Ok(HalaszProfile {
        provenance: table.provenance().to_string(),
        x,
        degree: table.degree(),
        t_bound,
        target_accuracy,
        delta,
        lipschitz: f.lipschitz(),
        grid_t,
        grid_min,
        t0,
        m,
        boundary: t_bound - t0.abs() <= delta,
        evaluations,
        samples,
    })
}

fn golden_section(f: &DistanceFunction, mut a: f64, mut b: f64) -> (f64, f64, usize) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f.eval(c);
    let mut fd = f.eval(d);
    let mut n = 2;
    while (b - a) > 1e-12 * (1.0 + a.abs().max(b.abs())) && n < 200 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f.eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f.eval(d);
        }
        n += 1;
    }
    if fc <= fd {
        (c, fc, n)
    } else {
        (d, fd, n)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundRow {
    pub t: f64,
    pub d: f64,
    pub bound_term: f64,
    pub slack: f64,
}

/// Empirical slack in `D(t) >= (kappa_d - eps) min(log log X, log(1 + |t - t0| log X)) - O(1)`.
#[derive(Debug, Clone, Serialize)]
pub struct LowerBoundAudit {
    pub degree: usize,
    pub eps: f64,
    pub kappa: f64,
    pub rows: Vec<LowerBoundRow>,
    /// Most negative slack: an estimate of the implied constant.
    pub offset: f64,
}

pub fn lower_bound_audit(profile: &HalaszProfile, d: usize, eps: f64) -> Result<LowerBoundAudit> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    let log_x = (profile.x as f64).ln();
    let cap = log_x.ln();
    let k = kappa(d);
    let rows: Vec<LowerBoundRow> = profile
        .samples
        .iter()
        .map(|s| {
            let bound_term = (k - eps) * cap.min((1.0 + (s.t - profile.t0).abs() * log_x).ln());
            LowerBoundRow {
                t: s.t,
                d: s.d,
                bound_term,
                slack: s.d - bound_term,
            }
        })
        .collect();
    let offset = rows.iter().map(|r| r.slack).fold(f64::INFINITY, f64::min);
    Ok(LowerBoundAudit {
        degree: d,
        eps,
        kappa: k,
        rows,
        offset,
    })
}
