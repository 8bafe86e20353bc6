//! Machine-readable output: CSV with 12 significant digits or JSON with
//! full precision, plus the run manifest.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliResult;
use crate::ingest::InputDigest;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `x` rounded to 12 significant digits, without trailing zeros.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let s = format!("{:.11e}", x);
    let (mantissa, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-6..=15).contains(&exp) {
        let m = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{m}e{exp}");
    }
    let decimals = (11 - exp).max(0) as usize;
    let plain = format!("{:.*}", decimals, x);
    if plain.contains('.') {
        plain.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        plain
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

/// A CSV table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| std::io::Error::other(e.to_string());
        w.write_record(&self.header).map_err(csv_err)?;
        for r in &self.rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.into_inner().map_err(|e| std::io::Error::other(e.to_string()).into())
    }
}

/// Everything a command produces.
pub trait Report: Serialize {
    fn table(&self) -> Table;
}

pub fn render<R: Report>(report: &R, format: Format) -> CliResult<Vec<u8>> {
    match format {
        Format::Csv => report.table().to_csv(),
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).map_err(std::io::Error::other)?;
            out.push(b'\n');
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: Option<String>,
    pub sha256: String,
}

/// Provenance of a run: enough to repeat it and check the result.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<u64>,
    pub format: Format,
    pub output: OutputDigest,
    pub elapsed_ms: f64,
}

pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

/// Writes the output to `out` (or stdout) and the manifest beside it (or to
/// stderr).
pub fn emit(bytes: &[u8], out: Option<&Path>, mut manifest: RunManifest) -> CliResult<()> {
    manifest.output = OutputDigest {
        path: out.map(|p| p.display().to_string()),
        sha256: hex::encode(Sha256::digest(bytes)),
    };
    let json = serde_json::to_string_pretty(&manifest).map_err(std::io::Error::other)?;
    match out {
        Some(path) => {
            std::fs::write(path, bytes)?;
            std::fs::write(manifest_path(path), json + "\n")?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            eprintln!("manifest: {}", serde_json::to_string(&manifest).map_err(std::io::Error::other)?);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.5 + 47.0 / 280.0), "0.667857142857");
        assert_eq!(sig12(-1.0 / 90.0), "-0.0111111111111");
        assert_eq!(sig12(139.0 / 360.0), "0.386111111111");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-8.0 / 360.0), "-0.0222222222222");
        assert_eq!(sig12(123456.0), "123456");
        assert_eq!(sig12(1.0 / 3.0 * 1e-9), "3.33333333333e-10");
        assert_eq!(sig12(2.5e20), "2.5e20");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn csv_quotes_awkward_labels() {
        let mut t = Table::new(vec!["label", "value"]);
        t.push(vec!["a,b".into(), "1".into()]);
        assert_eq!(String::from_utf8(t.to_csv().unwrap()).unwrap(), "label,value\n\"a,b\",1\n");
    }
}
