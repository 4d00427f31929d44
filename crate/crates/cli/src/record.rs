//! Verification records and their JSON, text and CSV renderings.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

/// A compared quantity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex([f64; 2]),
    Count(i64),
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(z: Complex64) -> Self {
        Quantity::Complex([z.re, z.im])
    }
}

impl From<i64> for Quantity {
    fn from(n: i64) -> Self {
        Quantity::Count(n)
    }
}

impl std::fmt::Display for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Quantity::Real(x) => write!(f, "{x:.10e}"),
            Quantity::Complex([re, im]) => write!(f, "{re:.10e}{im:+.10e}i"),
            Quantity::Count(n) => write!(f, "{n}"),
        }
    }
}

/// One checked identity at one point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub suite: String,
    /// Name of the identity or property being checked.
    pub paper_eq: String,
    pub form: String,
    pub alpha: String,
    pub point: Option<String>,
    pub lhs: Option<Quantity>,
    pub rhs: Option<Quantity>,
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    /// `None` for informational records with no pass criterion.
    pub pass: Option<bool>,
    pub note: Option<String>,
}

impl Record {
    pub fn failed(&self) -> bool {
        self.pass == Some(false)
    }
}

/// Formats a point the same way everywhere, so that output is reproducible.
pub fn point_label(s: Complex64) -> String {
    let trim = |x: f64| {
        let t = format!("{x:.6}");
        let t = t.trim_end_matches('0').trim_end_matches('.').to_string();
        if t == "-0" {
            "0".to_string()
        } else {
            t
        }
    };
    let im = trim(s.im);
    let sign = if im.starts_with('-') { "" } else { "+" };
    format!("{}{sign}{im}i", trim(s.re))
}

pub fn write_json_lines<W: Write>(records: &[Record], mut out: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_table<W: Write>(records: &[Record], mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<28} {:<22} {:>12} {:>10} {:<6} {}",
        "identity", "point", "residual", "tolerance", "result", "note"
    )?;
    for r in records {
        let residual = r.residual.map_or("-".to_string(), |x| format!("{x:.3e}"));
        let tol = r.tolerance.map_or("-".to_string(), |x| format!("{x:.1e}"));
        let result = match r.pass {
            Some(true) => "pass",
            Some(false) => "FAIL",
            None => "info",
        };
        writeln!(
            out,
            "{:<28} {:<22} {:>12} {:>10} {:<6} {}",
            r.paper_eq,
            r.point.as_deref().unwrap_or("-"),
            residual,
            tol,
            result,
            r.note.as_deref().unwrap_or("")
        )?;
    }
    let failed = records.iter().filter(|r| r.failed()).count();
    let checked = records.iter().filter(|r| r.pass.is_some()).count();
    if checked == 0 {
        writeln!(out, "{} records, no checks", records.len())?;
    } else {
        writeln!(out, "{} of {checked} checks passed", checked - failed)?;
    }
    Ok(())
}

/// Counts of `log10(residual)` per identity in unit-width bins.
pub fn write_histogram<W: Write>(records: &[Record], out: W) -> csv::Result<()> {
    let mut bins: std::collections::BTreeMap<(String, i32), usize> = Default::default();
    for r in records {
        if let Some(x) = r.residual {
            let bin = if x > 0.0 { x.log10().floor().max(-20.0) as i32 } else { -20 };
            *bins.entry((r.paper_eq.clone(), bin)).or_default() += 1;
        }
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["identity", "log10_residual_bin", "count"])?;
    for ((name, bin), count) in bins {
        w.write_record([name, bin.to_string(), count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}
