use serde::Serialize;

use super::table::{tau_d_values, CoefficientTable, TableKind};
use crate::error::{Error, Result};

/// Relative slack allowed in `|lambda| <= tau_d` and `|lambda|^2 <= lambda_RS`.
pub const GRC_SLACK: f64 = 1e-9;
/// Tolerance on `Im lambda_RS` and on negative `Re lambda_RS`.
pub const RS_REAL_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    DivisorBound,
    RankinSelbergBound,
    RankinSelbergNotReal,
    RankinSelbergNegative,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub n: usize,
    pub kind: ViolationKind,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GrcAudit {
    pub length: usize,
    pub degree: usize,
    pub max_tau_ratio: f64,
    pub argmax_tau_ratio: usize,
    pub max_rs_ratio: f64,
    pub argmax_rs_ratio: usize,
    pub max_rs_imag: f64,
    pub min_rs_real: f64,
    pub violations: Vec<Violation>,
}

impl GrcAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Scans `|lambda(n)| / tau_d(n)` and `|lambda(n)|^2 / lambda_RS(n)` over the
/// whole table and flags anything beyond `1 + GRC_SLACK`.
pub fn grc_audit(table: &CoefficientTable, rs_table: &CoefficientTable) -> Result<GrcAudit> {
    if table.provenance() != rs_table.provenance() {
        return Err(Error::ProvenanceMismatch(
            table.provenance().to_string(),
            rs_table.provenance().to_string(),
        ));
    }
    if table.len() != rs_table.len() {
        return Err(Error::InvalidParameter(format!(
            "table lengths differ: {} vs {}",
            table.len(),
            rs_table.len()
        )));
    }
    if rs_table.kind() != TableKind::RankinSelberg {
        return Err(Error::InvalidParameter(format!(
            "second table must be rankin_selberg, got {}",
            rs_table.kind()
        )));
    }
    let d = table.degree();
    let tau = tau_d_values(table.len(), d)?;
    let mut audit = GrcAudit {
        length: table.len(),
        degree: d,
        max_tau_ratio: 0.0,
        argmax_tau_ratio: 1,
        max_rs_ratio: 0.0,
        argmax_rs_ratio: 1,
        max_rs_imag: 0.0,
        min_rs_real: f64::INFINITY,
        violations: Vec::new(),
    };
    for n in 1..=table.len() {
        let l = table.get(n);
        let rs = rs_table.get(n);
        let t = tau.get(n).re;
        let abs = l.norm();
        let sq = l.norm_sqr();

        let tau_ratio = abs / t;
        if tau_ratio > audit.max_tau_ratio {
            audit.max_tau_ratio = tau_ratio;
            audit.argmax_tau_ratio = n;
        }
        if abs > t * (1.0 + GRC_SLACK) {
            audit.violations.push(Violation { n, kind: ViolationKind::DivisorBound, lhs: abs, rhs: t });
        }

        if rs.re > RS_REAL_TOL {
            let r = sq / rs.re;
            if r > audit.max_rs_ratio {
                audit.max_rs_ratio = r;
                audit.argmax_rs_ratio = n;
            }
        }
        if sq > rs.re * (1.0 + GRC_SLACK) + RS_REAL_TOL {
            audit.violations.push(Violation {
                n,
                kind: ViolationKind::RankinSelbergBound,
                lhs: sq,
                rhs: rs.re,
            });
        }

        audit.max_rs_imag = audit.max_rs_imag.max(rs.im.abs());
        audit.min_rs_real = audit.min_rs_real.min(rs.re);
        if rs.im.abs() > RS_REAL_TOL {
            audit.violations.push(Violation {
                n,
                kind: ViolationKind::RankinSelbergNotReal,
                lhs: rs.im.abs(),
                rhs: RS_REAL_TOL,
            });
        }
        if rs.re < -RS_REAL_TOL {
            audit.violations.push(Violation {
                n,
                kind: ViolationKind::RankinSelbergNegative,
                lhs: rs.re,
                rhs: -RS_REAL_TOL,
            });
        }
    }
    Ok(audit)
}
