//! Second-moment experiments over `[T, 2T]`: raw integrals, normalisations,
//! excision of `B_Z(t0)`, the large-value census and trend scans.

use rayon::prelude::*;
use serde::Serialize;

use crate::coeffs::{eta, ConstantsLedger, CoefficientTable, DEFAULT_BETA};
use crate::dirichlet::{DirichletPolynomial, MomentEstimate, QuadratureSpec};
use crate::error::{Error, Result};
use crate::halasz::{default_t_bound, minimize};
use crate::ramare::{decompose, select_parameters, ParameterMode, ParameterSelection, RamareDecomposition};

/// Census threshold exponent used in the paper's `T_S / T_L` split.
pub const PAPER_CENSUS_EXPONENT: f64 = 100.0;
/// Desk default for the census threshold exponent.
pub const DESK_CENSUS_EXPONENT: f64 = 1.0;
/// Generous constant in `I <= C (2T + X) sum |lambda|^2`.
pub const MVT_CONSTANT: f64 = 3.0;

#[derive(Debug, Clone, Serialize)]
pub struct MomentOptions {
    /// Also integrate over `[2, T]`.
    pub lower_interval: bool,
    /// Report `int_1^T t^{-alpha} |P|^2` as well.
    pub weighted_alpha: Option<f64>,
    /// Recipe for `(P, Q, H, Z)`; the paper recipe is always recorded too.
    pub mode: ParameterMode,
    /// Locate `t0` and integrate over `[T, 2T] minus B_Z(t0)`.
    pub excise: bool,
    pub halasz_t_bound: Option<f64>,
    pub halasz_accuracy: f64,
    /// Run the census on the decomposition of `mode` when it is feasible.
    pub census_exponent: Option<f64>,
}

impl Default for MomentOptions {
    fn default() -> Self {
        MomentOptions {
            lower_interval: false,
            weighted_alpha: None,
            mode: ParameterMode::Paper,
            excise: true,
            halasz_t_bound: None,
            halasz_accuracy: 1e-3,
            census_exponent: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Normalizations {
    /// `I / X^2`
    pub over_x2: f64,
    /// `I log^{eta_d} X / X^2`
    pub over_x2_log_eta: f64,
    /// `I / ((T + X) sum |lambda|^2)`
    pub over_mvt: f64,
    /// `3 (2T + X) sum |lambda|^2`
    pub mvt_ceiling: f64,
    pub within_ceiling: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Subinterval {
    pub a: f64,
    pub b: f64,
    pub estimate: MomentEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExcisedMoment {
    pub t0: f64,
    pub z: f64,
    /// `[t0 - Z, t0 + Z]`
    pub excised: (f64, f64),
    pub pieces: Vec<Subinterval>,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct WeightedMoment {
    pub alpha: f64,
    pub estimate: MomentEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct Census {
    pub j: i64,
    pub threshold: f64,
    pub exponent: f64,
    /// `|Q_j(it)| <= threshold`
    pub small: usize,
    pub large: usize,
    pub grid_len: usize,
    pub max_abs_q: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MomentReport {
    pub provenance: String,
    pub degree: usize,
    pub x: u64,
    pub t: f64,
    pub interval: (f64, f64),
    pub integral: MomentEstimate,
    pub lower_integral: Option<MomentEstimate>,
    pub weighted: Option<WeightedMoment>,
    /// `sum_{n <= X} |lambda(n)|^2`
    pub mass: f64,
    pub normalizations: Normalizations,
    pub constants: ConstantsLedger,
    pub paper_ledger: Option<ParameterSelection>,
    pub selection: Option<ParameterSelection>,
    pub excision: Option<ExcisedMoment>,
    pub census: Vec<Census>,
    pub warnings: Vec<String>,
}

fn normalizations(integral: f64, x: u64, t: f64, mass: f64, degree: usize) -> Normalizations {
    let xf = x as f64;
    let over_x2 = integral / (xf * xf);
    let mvt_ceiling = MVT_CONSTANT * (2.0 * t + xf) * mass;
    Normalizations {
        over_x2,
        over_x2_log_eta: over_x2 * xf.ln().powf(eta(degree.max(1))),
        over_mvt: integral / ((t + xf) * mass),
        mvt_ceiling,
        within_ceiling: integral <= mvt_ceiling,
    }
}

/// Second moment of `sum_{n <= X} lambda(n) n^{-it}` over `[T, 2T]`.
pub fn moment_experiment(
    table: &CoefficientTable,
    x: u64,
    t: f64,
    quad: &QuadratureSpec,
    options: &MomentOptions,
) -> Result<MomentReport> {
    if !(t >= 4.0) || !t.is_finite() {
        return Err(Error::InvalidParameter(format!("moment experiment needs T >= 4, got {t}")));
    }
    let poly = DirichletPolynomial::from_table(table, x as usize)?;
    let mut warnings = Vec::new();
    let integral = poly.second_moment(t, 2.0 * t, quad)?;
    if !integral.converged {
        warnings.push(format!(
            "quadrature on [T, 2T] stopped at relative change {:e}",
            integral.rel_change
        ));
    }
    let lower_integral = if options.lower_interval {
        let est = poly.second_moment(2.0, t, quad)?;
        if !est.converged {
            warnings.push(format!("quadrature on [2, T] stopped at relative change {:e}", est.rel_change));
        }
        Some(est)
    } else {
        None
    };
    let weighted = match options.weighted_alpha {
        Some(alpha) => {
            let est = poly.weighted_second_moment(t, alpha, quad)?;
            if !est.converged {
                warnings.push("weighted quadrature did not converge".into());
            }
            Some(WeightedMoment { alpha, estimate: est })
        }
        None => None,
    };
    let mass = poly.mass();
    let degree = table.degree();

    let (paper_ledger, selection) = if x >= 16 {
        let paper = select_parameters(x as f64, degree, ParameterMode::Paper)?;
        let sel = select_parameters(x as f64, degree, options.mode)?;
        (Some(paper), Some(sel))
    } else {
        warnings.push("X < 16: no parameter ledger".into());
        (None, None)
    };

    let z = (x as f64).ln();
    let excision = if options.excise && x >= 2 {
        let t_bound = options.halasz_t_bound.unwrap_or_else(|| default_t_bound(x));
        match minimize(table, x, t_bound, options.halasz_accuracy) {
            Ok(profile) => {
                if profile.boundary {
                    warnings.push(format!("minimiser t0 = {} on the search boundary", profile.t0));
                }
                Some(excised_moment(&poly, t, z, profile.t0, quad)?)
            }
            Err(e) => {
                warnings.push(format!("no excision: {e}"));
                None
            }
        }
    } else {
        None
    };

    let mut census = Vec::new();
    if let (Some(exponent), Some(sel)) = (options.census_exponent, selection.as_ref()) {
        match sel.decomposition_params() {
            Ok(params) => match decompose(table, params) {
                Ok(dec) => {
                    let (lo, hi) = excision.as_ref().map(|e| e.excised).unwrap_or((f64::NAN, f64::NAN));
                    let grid: Vec<f64> = (0..=t.floor() as u64)
                        .map(|k| t + k as f64)
                        .filter(|s| !(*s >= lo && *s <= hi))
                        .collect();
                    for j in dec.occupied_windows() {
                        census.push(large_value_census(&dec, &grid, j, exponent)?);
                    }
                }
                Err(e) => warnings.push(format!("no census: {e}")),
            },
            Err(e) => warnings.push(format!("no census: {e}")),
        }
    }

    Ok(MomentReport {
        provenance: table.provenance().to_string(),
        degree,
        x,
        t,
        interval: (t, 2.0 * t),
        normalizations: normalizations(integral.value, x, t, mass, degree),
        integral,
        lower_integral,
        weighted,
        mass,
        constants: ConstantsLedger::new(degree.max(1), DEFAULT_BETA),
        paper_ledger,
        selection,
        excision,
        census,
        warnings,
    })
}

/// `int |P|^2` over `[T, 2T]` minus `[t0 - Z, t0 + Z]`.
pub fn excised_moment(poly: &DirichletPolynomial, t: f64, z: f64, t0: f64, quad: &QuadratureSpec) -> Result<ExcisedMoment> {
    if !(z > 0.0) {
        return Err(Error::InvalidParameter(format!("excision radius must be positive, got {z}")));
    }
    let (lo, hi) = (t0 - z, t0 + z);
    let (a, b) = (t, 2.0 * t);
    let mut intervals = Vec::new();
    if hi < a || lo > b {
        intervals.push((a, b));
    } else {
        if lo > a {
            intervals.push((a, lo));
        }
        if hi < b {
            intervals.push((hi, b));
        }
    }
    let mut pieces = Vec::new();
    for (s, e) in intervals {
        pieces.push(Subinterval {
            a: s,
            b: e,
            estimate: poly.second_moment(s, e, quad)?,
        });
    }
    let value = pieces.iter().map(|p| p.estimate.value).sum();
    Ok(ExcisedMoment {
        t0,
        z,
        excised: (lo, hi),
        pieces,
        value,
    })
}

/// Splits grid points by `|Q_j(it)| <= e^{(j+1)/H} (log X)^{-exponent}`.
pub fn large_value_census(
    decomp: &RamareDecomposition<num_complex::Complex64>,
    t_grid: &[f64],
    j: i64,
    exponent: f64,
) -> Result<Census> {
    let window = decomp
        .windows
        .iter()
        .find(|w| w.j == j)
        .ok_or_else(|| Error::InvalidParameter(format!("window j = {j} outside the decomposition")))?;
    let params = decomp.params;
    let threshold = ((j + 1) as f64 / params.h).exp() * (params.x as f64).ln().powf(-exponent);
    let values = if window.q_terms.is_empty() {
        vec![0.0; t_grid.len()]
    } else {
        let q = DirichletPolynomial::from_terms(window.q_terms.iter().cloned(), "Q")?;
        q.multi_evaluate(t_grid)?.iter().map(|v| v.norm()).collect()
    };
    let small = values.iter().filter(|&&v| v <= threshold).count();
    Ok(Census {
        j,
        threshold,
        exponent,
        small,
        large: values.len() - small,
        grid_len: values.len(),
        max_abs_q: values.iter().copied().fold(0.0, f64::max),
    })
}

/// How `T` follows `X` in a trend scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum TRule {
    Fixed { t: f64 },
    /// `T = max(16, X^{2/d})`
    Power { degree: usize },
}

impl TRule {
    pub fn t_for(&self, x: u64) -> f64 {
        match *self {
            TRule::Fixed { t } => t,
            TRule::Power { degree } => (x as f64).powf(2.0 / degree.max(1) as f64).max(16.0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendRow {
    pub x: u64,
    pub t: f64,
    pub integral: f64,
    pub mass: f64,
    pub over_x2: f64,
    pub over_x2_log_eta: f64,
    pub over_mvt: f64,
    /// `I / ((2T + X) sum |lambda|^2)`
    pub over_2t_mvt: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub provenance: String,
    pub rule: TRule,
    pub rows: Vec<TrendRow>,
    /// `I / X^2` non-increasing along the grid; `None` for fewer than two rows.
    pub nonincreasing: Option<bool>,
}

pub fn trend_scan(table: &CoefficientTable, xs: &[u64], rule: TRule, quad: &QuadratureSpec) -> Result<TrendReport> {
    if xs.is_empty() {
        return Err(Error::InvalidParameter("trend scan needs at least one X".into()));
    }
    let degree = table.degree();
    let rows: Vec<TrendRow> = xs
        .par_iter()
        .map(|&x| -> Result<TrendRow> {
            let t = rule.t_for(x);
            let poly = DirichletPolynomial::from_table(table, x as usize)?;
            let est = poly.second_moment(t, 2.0 * t, quad)?;
            let mass = poly.mass();
            let n = normalizations(est.value, x, t, mass, degree);
            Ok(TrendRow {
                x,
                t,
                integral: est.value,
                mass,
                over_x2: n.over_x2,
                over_x2_log_eta: n.over_x2_log_eta,
                over_mvt: n.over_mvt,
                over_2t_mvt: est.value / ((2.0 * t + x as f64) * mass),
                converged: est.converged,
            })
        })
        .collect::<Result<_>>()?;
    let nonincreasing = if rows.len() < 2 {
        None
    } else {
        Some(rows.windows(2).all(|w| w[1].over_x2 <= w[0].over_x2))
    };
    Ok(TrendReport {
        provenance: table.provenance().to_string(),
        rule,
        rows,
        nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::{delta_table, zeta_like};
    use crate::ramare::DecompositionParams;

    #[test]
    fn constant_polynomial() {
        let z = zeta_like(10).unwrap();
        let r = moment_experiment(&z, 1, 7.0, &QuadratureSpec::default(), &MomentOptions::default()).unwrap();
        assert!((r.integral.value - 7.0).abs() < 1e-9);
        assert!(r.paper_ledger.is_none());
    }

    #[test]
    fn diagonal_dominance_for_ones() {
        let z = zeta_like(64).unwrap();
        let r = moment_experiment(&z, 64, 1000.0, &QuadratureSpec::default(), &MomentOptions::default()).unwrap();
        let ratio = r.integral.value / (1000.0 * 64.0);
        assert!((0.5..=2.0).contains(&ratio), "{ratio}");
        assert!(r.normalizations.within_ceiling);
        let ledger = r.paper_ledger.unwrap();
        assert!(ledger.infeasible);
        assert_eq!(ledger.z, 64f64.ln());
    }

    #[test]
    fn excision_cases() {
        let p = DirichletPolynomial::from_table(&delta_table(200).unwrap(), 200).unwrap();
        let q = QuadratureSpec::default();
        let full = p.second_moment(40.0, 80.0, &q).unwrap().value;
        let disjoint = excised_moment(&p, 40.0, 5.0, 0.0, &q).unwrap();
        assert_eq!(disjoint.value, full);
        let covered = excised_moment(&p, 40.0, 50.0, 60.0, &q).unwrap();
        assert_eq!(covered.value, 0.0);
        let two = excised_moment(&p, 40.0, 4.0, 60.0, &q).unwrap();
        assert_eq!(two.pieces.len(), 2);
        assert!(two.value <= full * (1.0 + 2.0 * q.tol_rel));
    }

    #[test]
    fn census_examples() {
        let z = zeta_like(27183).unwrap();
        let params = DecompositionParams::new(10000, 2.0, 50.0, 1.0).unwrap();
        let dec = decompose(&z, params).unwrap();
        let grid = vec![0.0, 3.0, 10.0];
        for j in dec.occupied_windows() {
            let c = large_value_census(&dec, &grid, j, 1.0).unwrap();
            assert!(c.large >= 1, "t = 0 must be large in window {j}");
            assert_eq!(c.small + c.large, 3);
            let all = large_value_census(&dec, &grid, j, PAPER_CENSUS_EXPONENT).unwrap();
            assert_eq!(all.large, 3);
        }
        assert!(large_value_census(&dec, &grid, 99, 1.0).is_err());
    }

    #[test]
    fn empty_window_is_small() {
        // H large enough that some windows between P and Q hold no prime
        let params = DecompositionParams::new(400, 23.0, 29.0, 20.0).unwrap();
        let dec = decompose(&zeta_like(params.horizon()).unwrap(), params).unwrap();
        let empty = dec.windows.iter().find(|w| w.q_terms.is_empty()).expect("an empty window");
        let c = large_value_census(&dec, &[0.0, 1.0], empty.j, 1.0).unwrap();
        assert_eq!((c.small, c.large), (2, 0));
    }

    #[test]
    fn trend_examples() {
        let z = zeta_like(1024).unwrap();
        let q = QuadratureSpec::default();
        let r = trend_scan(&z, &[256, 512, 1024], TRule::Fixed { t: 32.0 }, &q).unwrap();
        assert_eq!(r.nonincreasing, Some(true));
        let single = trend_scan(&z, &[256], TRule::Fixed { t: 32.0 }, &q).unwrap();
        assert_eq!(single.rows.len(), 1);
        assert_eq!(single.nonincreasing, None);
        assert_eq!(TRule::Power { degree: 3 }.t_for(8), 16.0);
    }
}
