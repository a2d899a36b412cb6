use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::primes::primes_up_to;
use crate::rng::SplitMix64;

/// Tolerance for the Ramanujan bound and conjugation-closure checks.
pub const SATAKE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SatakeSource {
    Explicit,
    Unitary { seed: u64 },
    Delta,
    SymSquareDelta,
}

/// Local parameters `alpha_j(p)`, `j = 1..d`, at every prime up to `p_max`.
#[derive(Debug, Clone)]
pub struct SatakeSpec {
    degree: usize,
    p_max: u64,
    primes: Vec<u64>,
    // row-major: params[i * degree + j] belongs to primes[i]
    params: Vec<Complex64>,
    grc_asserted: bool,
    self_dual: bool,
    source: SatakeSource,
}

impl SatakeSpec {
    /// Explicit parameters. `per_prime` is a list of `(p, [alpha_1..alpha_d])`.
    pub fn explicit(
        degree: usize,
        per_prime: Vec<(u64, Vec<Complex64>)>,
        grc_asserted: bool,
        self_dual: bool,
    ) -> Result<Self> {
        Self::assemble(degree, per_prime, grc_asserted, self_dual, SatakeSource::Explicit)
    }

    pub(crate) fn assemble(
        degree: usize,
        mut per_prime: Vec<(u64, Vec<Complex64>)>,
        grc_asserted: bool,
        self_dual: bool,
        source: SatakeSource,
    ) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidParameter("degree must be at least 1".into()));
        }
        per_prime.sort_by_key(|(p, _)| *p);
        let mut primes = Vec::with_capacity(per_prime.len());
        let mut params = Vec::with_capacity(per_prime.len() * degree);
        for (p, alphas) in per_prime {
            if alphas.len() != degree {
                return Err(Error::InvalidParameter(format!(
                    "prime {p}: expected {degree} parameters, got {}",
                    alphas.len()
                )));
            }
            if primes.last() == Some(&p) {
                return Err(Error::InvalidParameter(format!("prime {p} given twice")));
            }
            primes.push(p);
            params.extend(alphas);
        }
        let p_max = primes.last().copied().unwrap_or(0);
        let spec = SatakeSpec {
            degree,
            p_max,
            primes,
            params,
            grc_asserted,
            self_dual,
            source,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        for (i, &p) in self.primes.iter().enumerate() {
            let alphas = &self.params[i * self.degree..(i + 1) * self.degree];
            if self.grc_asserted {
                if let Some(a) = alphas.iter().find(|a| a.norm() > 1.0 + SATAKE_TOL) {
                    return Err(Error::SatakeInvariant(format!(
                        "GRC asserted but |alpha| = {} at p = {p}",
                        a.norm()
                    )));
                }
            }
            if self.self_dual && !conjugation_closed(alphas, SATAKE_TOL) {
                return Err(Error::SatakeInvariant(format!(
                    "self-dual asserted but parameters at p = {p} are not closed under conjugation"
                )));
            }
        }
        Ok(())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn p_max(&self) -> u64 {
        self.p_max
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn grc_asserted(&self) -> bool {
        self.grc_asserted
    }

    pub fn self_dual(&self) -> bool {
        self.self_dual
    }

    pub fn source(&self) -> &SatakeSource {
        &self.source
    }

    pub fn alphas(&self, p: u64) -> Result<&[Complex64]> {
        let i = self.primes.binary_search(&p).map_err(|_| Error::UnknownPrime(p))?;
        Ok(&self.params[i * self.degree..(i + 1) * self.degree])
    }

    /// Whether every prime up to `n` carries parameters.
    pub fn covers(&self, n: u64) -> bool {
        let needed = primes_up_to(n);
        needed.len() <= self.primes.len() && self.primes[..needed.len()] == needed[..]
    }

    /// Label carried by tables built from this spec. Corpus-derived specs use
    /// the corpus name so that a standard table and its Rankin–Selberg square
    /// agree regardless of how each was constructed.
    pub fn provenance(&self) -> String {
        match self.source {
            SatakeSource::Delta => "delta".into(),
            SatakeSource::SymSquareDelta => "sym2delta".into(),
            _ => format!("satake:{}", self.hash()),
        }
    }

    /// SHA-256 over degree, flags and the bit patterns of every parameter,
    /// hex encoded.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(b"satake-v1");
        h.update((self.degree as u64).to_le_bytes());
        h.update([self.grc_asserted as u8, self.self_dual as u8]);
        h.update(self.p_max.to_le_bytes());
        for (i, &p) in self.primes.iter().enumerate() {
            h.update(p.to_le_bytes());
            for a in &self.params[i * self.degree..(i + 1) * self.degree] {
                h.update(a.re.to_bits().to_le_bytes());
                h.update(a.im.to_bits().to_le_bytes());
            }
        }
        hex::encode(h.finalize())
    }

    /// Parameters of the symmetric square `{alpha^2, alpha*beta, beta^2}` of a
    /// degree-2 spec.
    pub fn sym_square(&self) -> Result<SatakeSpec> {
        if self.degree != 2 {
            return Err(Error::InvalidParameter(
                "symmetric square needs a degree-2 spec".into(),
            ));
        }
        let per_prime = self
            .primes
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let a = self.params[2 * i];
                let b = self.params[2 * i + 1];
                (p, vec![a * a, a * b, b * b])
            })
            .collect();
        let source = match self.source {
            SatakeSource::Delta => SatakeSource::SymSquareDelta,
            _ => SatakeSource::Explicit,
        };
        SatakeSpec::assemble(3, per_prime, self.grc_asserted, self.self_dual, source)
    }
}

fn conjugation_closed(alphas: &[Complex64], tol: f64) -> bool {
    let mut used = vec![false; alphas.len()];
    for a in alphas {
        let target = a.conj();
        let hit = alphas
            .iter()
            .enumerate()
            .find(|(k, b)| !used[*k] && (**b - target).norm() <= tol);
        match hit {
            Some((k, _)) => used[k] = true,
            None => return false,
        }
    }
    true
}

/// Seeded synthetic parameters on the unit circle for every prime `<= p_max`.
///
/// With `self_dual`, each prime gets `d / 2` conjugate pairs plus a random
/// sign when `d` is odd.
pub fn unitary_satake(seed: u64, d: usize, p_max: u64, self_dual: bool) -> Result<SatakeSpec> {
    if d == 0 {
        return Err(Error::InvalidParameter("degree must be at least 1".into()));
    }
    if p_max < 2 {
        return Err(Error::InvalidParameter("p_max must be at least 2".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let per_prime = primes_up_to(p_max)
        .into_iter()
        .map(|p| {
            let mut alphas = Vec::with_capacity(d);
            if self_dual {
                for _ in 0..d / 2 {
                    let a = Complex64::from_polar(1.0, 2.0 * PI * rng.next_f64());
                    alphas.push(a);
                    alphas.push(a.conj());
                }
                if d % 2 == 1 {
                    let s = if rng.next_bool() { 1.0 } else { -1.0 };
                    alphas.push(Complex64::new(s, 0.0));
                }
            } else {
                for _ in 0..d {
                    alphas.push(Complex64::from_polar(1.0, 2.0 * PI * rng.next_f64()));
                }
            }
            (p, alphas)
        })
        .collect();
    SatakeSpec::assemble(d, per_prime, true, self_dual, SatakeSource::Unitary { seed })
}

/// Degree-2 parameters `{alpha, conj(alpha)}` with `alpha + conj(alpha) = lambda(p)`,
/// from normalized Hecke eigenvalues `|lambda(p)| <= 2`.
pub fn satake_from_hecke(eigenvalues: &[(u64, f64)], source: SatakeSource) -> Result<SatakeSpec> {
    let per_prime = eigenvalues
        .iter()
        .map(|&(p, l)| {
            if l.abs() > 2.0 + 1e-9 {
                return Err(Error::SatakeInvariant(format!(
                    "|lambda({p})| = {} exceeds 2",
                    l.abs()
                )));
            }
            let l = l.clamp(-2.0, 2.0);
            let a = Complex64::new(l / 2.0, (1.0 - l * l / 4.0).max(0.0).sqrt());
            Ok((p, vec![a, a.conj()]))
        })
        .collect::<Result<Vec<_>>>()?;
    SatakeSpec::assemble(2, per_prime, true, true, source)
}
