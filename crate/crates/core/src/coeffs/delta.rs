//! The discriminant form `Delta = q prod (1 - q^n)^24` as a test corpus.
//!
//! `prod (1 - q^n)^3 = sum_k (-1)^k (2k + 1) q^{k(k+1)/2}` (Jacobi), and three
//! squarings of that sparse series give `prod (1 - q^n)^24`, so
//! `tau(n)` is its coefficient of `q^{n-1}`.

use num_complex::Complex64;

use super::ntt;
use super::satake::{satake_from_hecke, SatakeSource, SatakeSpec};
use super::table::{extend_multiplicative, CoefficientTable, TableKind};
use crate::error::{Error, Result};
use crate::primes::primes_up_to;

/// Largest `N` for which every `|tau(n)|`, `n <= N`, provably stays below
/// `2^126` (Deligne: `|tau(n)| <= d(n) n^{11/2}`).
pub const MAX_TAU_N: usize = 2_000_000;

fn check_range(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be at least 1".into()));
    }
    if n > MAX_TAU_N {
        return Err(Error::Overflow(format!(
            "tau(n) for n up to {n} may exceed the 128-bit range (limit N = {MAX_TAU_N})"
        )));
    }
    Ok(())
}

/// `prod (1 - q^n)^3` up to `q^{len-1}`.
pub fn jacobi_cube(len: usize) -> Vec<i128> {
    let mut s = vec![0i128; len];
    let mut k = 0usize;
    loop {
        let e = k * (k + 1) / 2;
        if e >= len {
            break;
        }
        let c = (2 * k + 1) as i128;
        s[e] = if k % 2 == 0 { c } else { -c };
        k += 1;
    }
    s
}

/// Schoolbook truncated square with checked arithmetic.
pub fn square_schoolbook(a: &[i128], out_len: usize) -> Result<Vec<i128>> {
    let nz: Vec<(usize, i128)> = a.iter().copied().enumerate().filter(|(_, v)| *v != 0).collect();
    let mut out = vec![0i128; out_len];
    for &(i, x) in &nz {
        for &(j, y) in &nz {
            if i + j >= out_len {
                continue;
            }
            let prod = x
                .checked_mul(y)
                .ok_or_else(|| Error::Overflow(format!("coefficient product at q^{}", i + j)))?;
            out[i + j] = out[i + j]
                .checked_add(prod)
                .ok_or_else(|| Error::Overflow(format!("coefficient sum at q^{}", i + j)))?;
        }
    }
    Ok(out)
}

/// `tau(1..=N)` by the O(N^2) schoolbook squarings.
pub fn tau_values_schoolbook(n: usize) -> Result<Vec<i128>> {
    check_range(n)?;
    let mut s = jacobi_cube(n);
    for _ in 0..3 {
        s = square_schoolbook(&s, n)?;
    }
    Ok(s)
}

/// `tau(1..=N)` with transform-based squarings.
pub fn tau_values(n: usize) -> Result<Vec<i128>> {
    check_range(n)?;
    let mut s = jacobi_cube(n);
    for _ in 0..3 {
        s = ntt::square_truncated(&s, n);
    }
    Ok(s)
}

/// Single value `tau(n)`.
pub fn ramanujan_tau(n: usize) -> Result<i128> {
    Ok(tau_values(n)?[n - 1])
}

/// `lambda_Delta(n) = tau(n) / n^{11/2}` for `n <= N`.
pub fn delta_table(n: usize) -> Result<CoefficientTable> {
    let tau = tau_values(n)?;
    let values = tau
        .iter()
        .enumerate()
        .map(|(i, &t)| Complex64::new(t as f64 / ((i + 1) as f64).powf(5.5), 0.0))
        .collect();
    CoefficientTable::from_values(2, TableKind::Standard, "delta", values)
}

/// Satake parameters of `Delta` at every prime up to `N`, read off from
/// `lambda_Delta(p) = alpha + conj(alpha)`.
pub fn delta_spec(n: usize) -> Result<SatakeSpec> {
    let table = delta_table(n)?;
    spec_from_delta_table(&table)
}

pub(crate) fn spec_from_delta_table(table: &CoefficientTable) -> Result<SatakeSpec> {
    let eigen: Vec<(u64, f64)> = primes_up_to(table.len() as u64)
        .into_iter()
        .map(|p| (p, table.get(p as usize).re))
        .collect();
    satake_from_hecke(&eigen, SatakeSource::Delta)
}

/// Degree-3 table of `sym^2 Delta` with local parameters
/// `{alpha^2, 1, conj(alpha)^2}`.
pub fn sym_square_table(n: usize) -> Result<CoefficientTable> {
    extend_multiplicative(&delta_spec(n)?.sym_square()?, n, TableKind::Standard)
}

/// Rankin–Selberg table `lambda_{Delta x Delta}`.
pub fn delta_rankin_selberg_table(n: usize) -> Result<CoefficientTable> {
    extend_multiplicative(&delta_spec(n)?, n, TableKind::RankinSelberg)
}

/// Rankin–Selberg table of `sym^2 Delta`.
pub fn sym_square_rankin_selberg_table(n: usize) -> Result<CoefficientTable> {
    extend_multiplicative(&delta_spec(n)?.sym_square()?, n, TableKind::RankinSelberg)
}
