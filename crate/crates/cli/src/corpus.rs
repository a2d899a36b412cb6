use clap::{Args, ValueEnum};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};

use lmoment::cache::{load_table, save_table};
use lmoment::coeffs::{
    boxplus_coeffs, delta_rankin_selberg_table, delta_table, extend_multiplicative, sym_square_rankin_selberg_table,
    sym_square_table, unitary_satake, zeta_like, CoefficientTable, TableKind,
};
use lmoment::{Complex64, Error, Result};

pub const CACHE_ENV: &str = "LMOMENT_CACHE_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusName {
    Delta,
    Sym2delta,
    ZetaLike,
    Synthetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Standard,
    RankinSelberg,
    Boxplus,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CorpusArgs {
    #[arg(long, value_enum)]
    pub corpus: CorpusName,
    /// Synthetic corpus: RNG seed.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Synthetic corpus: degree.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    /// Synthetic corpus: conjugation-closed Satake parameters.
    #[arg(long)]
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub self_dual: bool,
}

impl CorpusArgs {
    pub fn validate(&self) -> Result<()> {
        if self.corpus != CorpusName::Synthetic {
            if self.seed.is_some() || self.degree.is_some() || self.self_dual {
                return Err(Error::InvalidParameter(
                    "--seed, --degree and --self-dual apply to the synthetic corpus only".into(),
                ));
            }
            return Ok(());
        }
        match (self.seed, self.degree) {
            (Some(_), Some(d)) if (1..=64).contains(&d) => Ok(()),
            (Some(_), Some(d)) => Err(Error::InvalidParameter(format!(
                "synthetic degree must lie in 1..=64, got {d}"
            ))),
            _ => Err(Error::InvalidParameter("the synthetic corpus needs --seed and --degree".into())),
        }
    }

    /// Degree of the standard table.
    pub fn degree(&self) -> usize {
        match self.corpus {
            CorpusName::Delta => 2,
            CorpusName::Sym2delta => 3,
            CorpusName::ZetaLike => 1,
            CorpusName::Synthetic => self.degree.unwrap_or(1),
        }
    }

    fn key(&self) -> String {
        match self.corpus {
            CorpusName::Delta => "delta".into(),
            CorpusName::Sym2delta => "sym2delta".into(),
            CorpusName::ZetaLike => "zeta-like".into(),
            CorpusName::Synthetic => format!(
                "synthetic-s{}-d{}{}",
                self.seed.unwrap_or(0),
                self.degree(),
                if self.self_dual { "-sd" } else { "" }
            ),
        }
    }

    /// Synthetic Satake data depend on the prime range, so only an exact
    /// length match can be reused; the other corpora truncate cleanly.
    fn prefix_stable(&self) -> bool {
        self.corpus != CorpusName::Synthetic
    }

    pub fn cache_params(&self, kind: Kind, n: usize) -> String {
        format!("corpus={} kind={} N={n}", self.key(), kind_name(kind))
    }

    pub fn cache_file(&self, dir: &Path, kind: Kind, n: usize) -> PathBuf {
        dir.join(format!("{}_{}_N{n}.tbl", self.key(), kind_name(kind)))
    }

    /// Builds the table from scratch.
    pub fn build(&self, kind: Kind, n: usize) -> Result<CoefficientTable> {
        if n == 0 {
            return Err(Error::InvalidParameter("table length must be at least 1".into()));
        }
        match kind {
            Kind::Standard => self.build_standard(n),
            Kind::Boxplus => boxplus_coeffs(&self.build_standard(n)?, n),
            Kind::RankinSelberg => match self.corpus {
                CorpusName::Delta => delta_rankin_selberg_table(n),
                CorpusName::Sym2delta => sym_square_rankin_selberg_table(n),
                CorpusName::ZetaLike => {
                    CoefficientTable::from_values(1, TableKind::RankinSelberg, "zeta", vec![Complex64::new(1.0, 0.0); n])
                }
                CorpusName::Synthetic => extend_multiplicative(&self.synthetic_spec(n)?, n, TableKind::RankinSelberg),
            },
        }
    }

    fn build_standard(&self, n: usize) -> Result<CoefficientTable> {
        match self.corpus {
            CorpusName::Delta => delta_table(n),
            CorpusName::Sym2delta => sym_square_table(n),
            CorpusName::ZetaLike => zeta_like(n),
            CorpusName::Synthetic => extend_multiplicative(&self.synthetic_spec(n)?, n, TableKind::Standard),
        }
    }

    fn synthetic_spec(&self, n: usize) -> Result<lmoment::coeffs::SatakeSpec> {
        unitary_satake(self.seed.unwrap_or(0), self.degree(), (n as u64).max(2), self.self_dual)
    }

    /// The table of length `n`, read from the cache directory when a
    /// matching file is present and built in memory otherwise. Never writes.
    pub fn load(&self, kind: Kind, n: usize) -> Result<CoefficientTable> {
        if let Some(path) = self.find_cached(&cache_dir(), kind, n) {
            let cached = load_table(&path)?;
            let expected = format!("corpus={} kind={} ", self.key(), kind_name(kind));
            if !cached.params.starts_with(&expected) {
                return Err(Error::Cache(format!(
                    "{} was written for {:?}, not {expected:?}",
                    path.display(),
                    cached.params
                )));
            }
            return if cached.table.len() == n {
                Ok(cached.table)
            } else {
                cached.table.truncated(n)
            };
        }
        self.build(kind, n)
    }

    fn find_cached(&self, dir: &Path, kind: Kind, n: usize) -> Option<PathBuf> {
        let exact = self.cache_file(dir, kind, n);
        if exact.is_file() {
            return Some(exact);
        }
        if !self.prefix_stable() {
            return None;
        }
        let prefix = format!("{}_{}_N", self.key(), kind_name(kind));
        let mut best: Option<(usize, PathBuf)> = None;
        for entry in fs::read_dir(dir).ok()?.flatten() {
            let name = entry.file_name().to_string_lossy().into_owned();
            let len = name
                .strip_prefix(&prefix)
                .and_then(|r| r.strip_suffix(".tbl"))
                .and_then(|r| r.parse::<usize>().ok());
            if let Some(len) = len {
                if len >= n && best.as_ref().map_or(true, |(b, _)| len < *b) {
                    best = Some((len, entry.path()));
                }
            }
        }
        best.map(|(_, p)| p)
    }

    /// Builds the table and writes it to the cache directory.
    pub fn build_and_save(&self, kind: Kind, n: usize) -> Result<(CoefficientTable, PathBuf)> {
        let table = self.build(kind, n)?;
        let path = self.cache_file(&cache_dir(), kind, n);
        save_table(&table, &self.cache_params(kind, n), &path)?;
        Ok((table, path))
    }
}

pub fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Standard => "standard",
        Kind::RankinSelberg => "rankin_selberg",
        Kind::Boxplus => "boxplus",
    }
}

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("cache"))
}
