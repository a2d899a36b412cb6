use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

use lmoment::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, C: Serialize, R: Serialize> {
    schema_version: u32,
    tool_version: &'static str,
    command: &'a str,
    config: &'a C,
    result: &'a R,
    warnings: &'a [String],
    /// The only field allowed to differ between identical runs.
    generated_at: String,
}

/// Writes the JSON report to `out`, or to stdout when `out` is `None`.
pub fn write_report<C: Serialize, R: Serialize>(
    out: Option<&Path>,
    command: &str,
    config: &C,
    result: &R,
    warnings: &[String],
) -> Result<()> {
    let env = Envelope {
        schema_version: SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION"),
        command,
        config,
        result,
        warnings,
        generated_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    };
    let mut text = serde_json::to_string_pretty(&env).map_err(|e| lmoment::Error::Io(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => {
            ensure_parent(path)?;
            fs::write(path, text)?;
        }
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// CSV with a header row taken from the field names of `R`.
pub fn write_csv<R: Serialize>(path: &Path, rows: &[R]) -> Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| lmoment::Error::Io(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| lmoment::Error::Io(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)?;
        }
    }
    Ok(())
}
