//! Report rows and their JSON-lines / CSV rendering.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

/// Column order of CSV run reports.
pub const RUN_CSV_HEADER: &str =
    "command,variant,seed,trial,params,solution,estimate,exact,optimum,success,error,warnings,wall_ms";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRow {
    pub command: &'static str,
    pub variant: String,
    /// Seed that reproduces this row with `--trials 1`.
    pub seed: u64,
    pub trial: usize,
    pub params: String,
    pub solution: String,
    pub estimate: Option<f64>,
    /// True objective of the returned solution, or the true quantity being
    /// estimated.
    pub exact: Option<f64>,
    pub optimum: Option<f64>,
    pub success: Option<bool>,
    /// Contract error measure of this trial (relative or additive per command).
    pub error: Option<f64>,
    pub warnings: String,
    pub wall_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub trials: usize,
    pub successes: Option<usize>,
    pub success_rate: Option<f64>,
    pub error_p50: Option<f64>,
    pub error_p90: Option<f64>,
    pub error_max: Option<f64>,
}

impl Summary {
    pub fn of(command: &'static str, rows: &[RunRow]) -> Self {
        let judged: Vec<bool> = rows.iter().filter_map(|r| r.success).collect();
        let successes = (!judged.is_empty()).then(|| judged.iter().filter(|&&s| s).count());
        let mut errors: Vec<f64> = rows.iter().filter_map(|r| r.error).collect();
        errors.sort_by(f64::total_cmp);
        let quantile = |q: f64| -> Option<f64> {
            if errors.is_empty() {
                return None;
            }
            let i = ((errors.len() - 1) as f64 * q).round() as usize;
            Some(errors[i])
        };
        Summary {
            command,
            trials: rows.len(),
            successes,
            success_rate: successes.map(|s| s as f64 / judged.len() as f64),
            error_p50: quantile(0.5),
            error_p90: quantile(0.9),
            error_max: errors.last().copied(),
        }
    }
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a Summary,
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub fn write_json_lines<T: Serialize, W: Write + ?Sized>(rows: &[T], out: &mut W) -> Result<()> {
    for row in rows {
        serde_json::to_writer(&mut *out, row).map_err(io)?;
        writeln!(out)?;
    }
    Ok(())
}

pub fn write_summary_json<W: Write + ?Sized>(summary: &Summary, out: &mut W) -> Result<()> {
    serde_json::to_writer(&mut *out, &SummaryLine { summary }).map_err(io)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_csv<T: Serialize, W: Write + ?Sized>(
    rows: &[T],
    header: &str,
    out: &mut W,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    let body = w.into_inner().map_err(io)?;
    writeln!(out, "{header}")?;
    out.write_all(&body)?;
    Ok(())
}

/// One-line text rendering for stderr next to CSV output.
pub fn summary_text(s: &Summary) -> String {
    let opt = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
    format!(
        "# summary command={} trials={} successes={} success_rate={} error_p50={} error_p90={} error_max={}",
        s.command,
        s.trials,
        s.successes.map_or("-".to_string(), |v| v.to_string()),
        opt(s.success_rate),
        opt(s.error_p50),
        opt(s.error_p90),
        opt(s.error_max),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(success: Option<bool>, error: Option<f64>) -> RunRow {
        RunRow {
            command: "f0",
            variant: "kmv".into(),
            seed: 1,
            trial: 0,
            params: "eps=0.1".into(),
            solution: String::new(),
            estimate: Some(1.0),
            exact: None,
            optimum: None,
            success,
            error,
            warnings: String::new(),
            wall_ms: None,
        }
    }

    #[test]
    fn csv_columns_match_header() {
        let mut out = Vec::new();
        write_csv(&[row(Some(true), Some(0.5))], RUN_CSV_HEADER, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], RUN_CSV_HEADER);
        assert_eq!(
            lines[1].split(',').count(),
            RUN_CSV_HEADER.split(',').count()
        );
    }

    #[test]
    fn summary_counts() {
        let rows = vec![
            row(Some(true), Some(0.1)),
            row(Some(false), Some(0.3)),
            row(None, None),
        ];
        let s = Summary::of("f0", &rows);
        assert_eq!(s.trials, 3);
        assert_eq!(s.successes, Some(1));
        assert_eq!(s.success_rate, Some(0.5));
        assert_eq!(s.error_max, Some(0.3));
    }
}
