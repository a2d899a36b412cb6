use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use super::local::{local_coeffs_from, rankin_selberg_from};
use super::satake::SatakeSpec;
use crate::error::{Error, Result};
use crate::primes::{binomial, factorize, primes_up_to, smallest_prime_factors};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableKind {
    Standard,
    RankinSelberg,
    Boxplus,
    TauD,
    Synthetic,
}

impl TableKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            TableKind::Standard => "standard",
            TableKind::RankinSelberg => "rankin_selberg",
            TableKind::Boxplus => "boxplus",
            TableKind::TauD => "tau_d",
            TableKind::Synthetic => "synthetic",
        }
    }

    /// Kinds whose first coefficient is always 1.
    pub fn is_normalized(&self) -> bool {
        matches!(
            self,
            TableKind::Standard | TableKind::RankinSelberg | TableKind::Boxplus
        )
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "standard" => TableKind::Standard,
            "rankin_selberg" => TableKind::RankinSelberg,
            "boxplus" => TableKind::Boxplus,
            "tau_d" => TableKind::TauD,
            "synthetic" => TableKind::Synthetic,
            other => return Err(Error::InvalidParameter(format!("unknown table kind {other:?}"))),
        })
    }
}

/// `n -> lambda(n)` for `1 <= n <= N`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    degree: usize,
    kind: TableKind,
    provenance: String,
    // values[0] is unused; values[n] = lambda(n)
    values: Vec<Complex64>,
}

impl CoefficientTable {
    /// Builds a table from `lambda(1..=N)`.
    pub fn from_values(
        degree: usize,
        kind: TableKind,
        provenance: impl Into<String>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter("table length must be at least 1".into()));
        }
        let mut v = Vec::with_capacity(values.len() + 1);
        v.push(Complex64::new(0.0, 0.0));
        v.extend(values);
        Ok(CoefficientTable {
            degree,
            kind,
            provenance: provenance.into(),
            values: v,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> TableKind {
        self.kind
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Table length `N`.
    pub fn len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `lambda(n)`; panics when `n` is 0 or beyond the table.
    pub fn get(&self, n: usize) -> Complex64 {
        assert!(n >= 1 && n <= self.len(), "index {n} outside 1..={}", self.len());
        self.values[n]
    }

    /// `lambda(1..=N)`.
    pub fn values(&self) -> &[Complex64] {
        &self.values[1..]
    }

    /// Values indexed directly by `n` (slot 0 is zero).
    pub fn indexed(&self) -> &[Complex64] {
        &self.values
    }

    pub fn require_len(&self, needed: usize) -> Result<()> {
        if needed > self.len() {
            return Err(Error::TableTooShort {
                needed,
                available: self.len(),
            });
        }
        Ok(())
    }

    /// The first `n` coefficients as a new table.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        self.require_len(n)?;
        CoefficientTable::from_values(
            self.degree,
            self.kind,
            self.provenance.clone(),
            self.values[1..=n].to_vec(),
        )
    }

    /// `lambda(n) n^{i tau}`; multiplicativity is preserved.
    pub fn twisted(&self, tau: f64) -> Self {
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(n, v)| {
                if n == 0 {
                    *v
                } else {
                    v * Complex64::from_polar(1.0, tau * (n as f64).ln())
                }
            })
            .collect();
        CoefficientTable {
            degree: self.degree,
            kind: self.kind,
            provenance: format!("{}|twist:{tau}", self.provenance),
            values,
        }
    }
}

/// Multiplicative extension from prime-power values. `local(p, r_max)` must
/// return `lambda(p^0..=p^r_max)`.
pub fn multiplicative_from_prime_powers<F>(
    n: usize,
    degree: usize,
    kind: TableKind,
    provenance: impl Into<String>,
    mut local: F,
) -> Result<CoefficientTable>
where
    F: FnMut(u64, usize) -> Result<Vec<Complex64>>,
{
    if n == 0 {
        return Err(Error::InvalidParameter("table length must be at least 1".into()));
    }
    let spf = smallest_prime_factors(n);
    let mut values = vec![Complex64::new(0.0, 0.0); n + 1];
    values[1] = Complex64::new(1.0, 0.0);
    // prime powers first
    for p in primes_up_to(n as u64) {
        let mut r_max = 0usize;
        let mut q = 1usize;
        while let Some(next) = q.checked_mul(p as usize) {
            if next > n {
                break;
            }
            q = next;
            r_max += 1;
        }
        let lp = local(p, r_max)?;
        let mut q = 1usize;
        for item in lp.iter().take(r_max + 1).skip(1) {
            q *= p as usize;
            values[q] = *item;
        }
    }
    // n = p^v * m with p = spf(n), gcd(p, m) = 1
    for k in 2..=n {
        let p = spf[k] as usize;
        let mut m = k;
        let mut pv = 1;
        while m % p == 0 {
            m /= p;
            pv *= p;
        }
        if m > 1 {
            values[k] = values[pv] * values[m];
        }
    }
    values.remove(0);
    CoefficientTable::from_values(degree, kind, provenance, values)
}

/// Extends Satake data to `lambda(1..=N)` (kind `Standard`) or
/// `lambda_{pi x pi~}(1..=N)` (kind `RankinSelberg`).
pub fn extend_multiplicative(spec: &SatakeSpec, n: usize, kind: TableKind) -> Result<CoefficientTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("table length must be at least 1".into()));
    }
    if !spec.covers(n as u64) {
        return Err(Error::InvalidParameter(format!(
            "Satake data stops at p = {} but the table needs every prime up to {n}",
            spec.p_max()
        )));
    }
    let provenance = spec.provenance();
    match kind {
        TableKind::Standard => multiplicative_from_prime_powers(n, spec.degree(), kind, provenance, |p, r| {
            local_coeffs_from(spec.alphas(p)?, r)
        }),
        TableKind::RankinSelberg => {
            let d = spec.degree();
            multiplicative_from_prime_powers(n, d * d, kind, provenance, |p, r| {
                rankin_selberg_from(spec.alphas(p)?, r)
            })
        }
        other => Err(Error::InvalidParameter(format!(
            "extend_multiplicative builds standard or rankin_selberg tables, not {other}"
        ))),
    }
}

/// `lambda_{1 boxplus pi} = 1 * lambda_pi` on `1..=N` by a divisor sieve.
pub fn boxplus_coeffs(table: &CoefficientTable, n: usize) -> Result<CoefficientTable> {
    if n == 0 {
        return Err(Error::InvalidParameter("table length must be at least 1".into()));
    }
    table.require_len(n)?;
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for l in 1..=n {
        let v = table.get(l);
        let mut k = l;
        while k <= n {
            out[k] += v;
            k += l;
        }
    }
    out.remove(0);
    CoefficientTable::from_values(
        table.degree() + 1,
        TableKind::Boxplus,
        format!("boxplus|{}", table.provenance()),
        out,
    )
}

/// The `d`-fold divisor function, `prod_p C(v_p(n) + d - 1, d - 1)`,
/// saturating at `u128::MAX`.
pub fn tau_d(n: u64, d: u64) -> u128 {
    assert!(n >= 1 && d >= 1, "tau_d needs n >= 1 and d >= 1");
    factorize(n)
        .into_iter()
        .map(|(_, r)| binomial(r as u64 + d - 1, d - 1))
        .fold(1u128, |a, b| a.saturating_mul(b))
}

/// `tau_d(1..=N)` as floats, by the same multiplicative sieve.
pub fn tau_d_values(n: usize, d: usize) -> Result<CoefficientTable> {
    multiplicative_from_prime_powers(n, d, TableKind::TauD, format!("tau_{d}"), |_, r| {
        Ok((0..=r)
            .map(|k| Complex64::new(binomial((k + d - 1) as u64, (d - 1) as u64) as f64, 0.0))
            .collect())
    })
}

/// The constant table `lambda = 1` (zeta) of length `n`.
pub fn zeta_like(n: usize) -> Result<CoefficientTable> {
    CoefficientTable::from_values(1, TableKind::Standard, "zeta", vec![Complex64::new(1.0, 0.0); n])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffs::unitary_satake;
    use crate::primes::gcd;

    #[test]
    fn trivial_extension() {
        let s = SatakeSpec::explicit(
            1,
            primes_up_to(10).into_iter().map(|p| (p, vec![Complex64::new(1.0, 0.0)])).collect(),
            true,
            false,
        )
        .unwrap();
        let t = extend_multiplicative(&s, 10, TableKind::Standard).unwrap();
        assert!(t.values().iter().all(|v| *v == Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        let s = unitary_satake(5, 3, 500, false).unwrap();
        let t = extend_multiplicative(&s, 500, TableKind::Standard).unwrap();
        assert_eq!(t.get(1), Complex64::new(1.0, 0.0));
        assert!((t.get(6) - t.get(2) * t.get(3)).norm() < 1e-15);
        for m in 1..=22usize {
            for n in 1..=22usize {
                if gcd(m as u64, n as u64) == 1 {
                    assert!((t.get(m * n) - t.get(m) * t.get(n)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn missing_primes_and_zero_length() {
        let s = unitary_satake(5, 2, 50, false).unwrap();
        assert!(extend_multiplicative(&s, 60, TableKind::Standard).is_err());
        assert!(extend_multiplicative(&s, 0, TableKind::Standard).is_err());
        assert!(extend_multiplicative(&s, 50, TableKind::Boxplus).is_err());
    }

    #[test]
    fn boxplus_divisor_function() {
        let one = zeta_like(12).unwrap();
        let b = boxplus_coeffs(&one, 12).unwrap();
        assert_eq!(b.get(1), Complex64::new(1.0, 0.0));
        assert_eq!(b.get(6), Complex64::new(4.0, 0.0));
        assert_eq!(b.get(12), Complex64::new(6.0, 0.0));
        assert_eq!(b.degree(), 2);
        assert!(matches!(
            boxplus_coeffs(&one, 13),
            Err(Error::TableTooShort { needed: 13, available: 12 })
        ));
        let s = unitary_satake(2, 2, 100, false).unwrap();
        let t = extend_multiplicative(&s, 100, TableKind::Standard).unwrap();
        let bt = boxplus_coeffs(&t, 100).unwrap();
        for p in primes_up_to(100) {
            let p = p as usize;
            assert!((bt.get(p) - (t.get(p) + 1.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn divisor_functions() {
        assert_eq!(tau_d(1, 5), 1);
        assert_eq!(tau_d(9, 3), 6);
        assert_eq!(tau_d(12, 2), 6);
        let tv = tau_d_values(200, 3).unwrap();
        for n in 1..=200u64 {
            assert_eq!(tv.get(n as usize).re, tau_d(n, 3) as f64);
        }
    }

    #[test]
    fn twist_keeps_modulus() {
        let t = zeta_like(50).unwrap().twisted(5.0);
        assert!((t.get(7) - Complex64::from_polar(1.0, 5.0 * 7f64.ln())).norm() < 1e-15);
        assert!(t.values().iter().all(|v| (v.norm() - 1.0).abs() < 1e-15));
    }
}
