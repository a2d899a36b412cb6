//! Dirichlet coefficients of L-functions and their Rankin–Selberg squares,
//! built from local Satake data.

mod audit;
mod constants;
mod delta;
mod local;
pub mod ntt;
mod satake;
mod scan;
mod table;

pub use audit::{grc_audit, GrcAudit, Violation, ViolationKind, GRC_SLACK, RS_REAL_TOL};
pub use constants::{eta, kappa, rho, theta, ConstantsLedger, DEFAULT_BETA};
pub use delta::{
    delta_rankin_selberg_table, delta_spec, delta_table, jacobi_cube, ramanujan_tau, square_schoolbook,
    sym_square_rankin_selberg_table, sym_square_table, tau_values, tau_values_schoolbook, MAX_TAU_N,
};
pub use local::{
    complete_homogeneous, local_coeffs, local_coeffs_deviation, newton_from_power_sums, power_sums,
    power_sums_of, rankin_selberg_local, NEWTON_TOL, RANKIN_SELBERG_TOL,
};
pub use satake::{satake_from_hecke, unitary_satake, SatakeSource, SatakeSpec, SATAKE_TOL};
pub use scan::{diagnostic_scan, ScanKind, ScanReport, ScanRow};
pub use table::{
    boxplus_coeffs, extend_multiplicative, multiplicative_from_prime_powers, tau_d, tau_d_values, zeta_like,
    CoefficientTable, TableKind,
};
