//! CSV and summary output, plus readers for the same formats.
//!
//! Time series: `round,t_ideal_rank,kendall_tau,spearman_rho`.
//! Sweep: `ring_size,selfish_gain,t_ideal_rank`.
//! LF line endings, no trailing delimiter, reals with 17 significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::ConvergencePrediction;
use crate::config::{ConfigFile, ScenarioConfig};
use crate::error::{Error, Result};
use crate::metrics::MetricsSample;
use crate::scenario::{RunReport, SweepRow};

pub const TIMESERIES_HEADER: &str = "round,t_ideal_rank,kendall_tau,spearman_rho";
pub const SWEEP_HEADER: &str = "ring_size,selfish_gain,t_ideal_rank";
pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const SUMMARY_FILE: &str = "report.toml";

/// Formats like C's `%.17g`: enough digits to read back the same `f64`.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..17).contains(&exp) {
        let decimals = (16 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa.to_string()),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn timeseries_csv(samples: &[MetricsSample]) -> Result<String> {
    if samples.is_empty() {
        return Err(Error::config(
            "refusing to write a time series with no samples",
        ));
    }
    let mut out = String::from(TIMESERIES_HEADER);
    out.push('\n');
    for s in samples {
        writeln!(
            out,
            "{},{},{},{}",
            s.round,
            s.t_ideal_rank,
            format_real(s.kendall_tau),
            format_real(s.spearman_rho)
        )
        .unwrap();
    }
    Ok(out)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        writeln!(out, "{},{},{}", r.ring_size, r.selfish_gain, r.t_ideal_rank).unwrap();
    }
    out
}

fn data_lines<'a>(
    text: &'a str,
    header: &str,
) -> Result<impl Iterator<Item = (usize, Vec<&'a str>)>> {
    let mut lines = text.split('\n');
    match lines.next() {
        Some(h) if h == header => {}
        Some(h) => return Err(Error::parse(format!("unexpected header {h:?}"))),
        None => return Err(Error::parse("empty input")),
    }
    if !text.ends_with('\n') {
        return Err(Error::parse("missing final newline"));
    }
    let width = header.split(',').count();
    let rows: Vec<_> = lines
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| (i + 2, l.split(',').collect::<Vec<_>>()))
        .collect();
    if let Some((line, fields)) = rows.iter().find(|(_, f)| f.len() != width) {
        return Err(Error::parse(format!(
            "line {line}: {} fields, expected {width}",
            fields.len()
        )));
    }
    Ok(rows.into_iter())
}

fn field<T: std::str::FromStr>(line: usize, name: &str, text: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    text.parse()
        .map_err(|e| Error::parse(format!("line {line}: {name} {text:?}: {e}")))
}

/// Reads a time-series CSV back, checking field ranges.
pub fn parse_timeseries_csv(text: &str) -> Result<Vec<MetricsSample>> {
    let mut samples = Vec::new();
    for (line, f) in data_lines(text, TIMESERIES_HEADER)? {
        let sample = MetricsSample {
            round: field(line, "round", f[0])?,
            t_ideal_rank: field(line, "t_ideal_rank", f[1])?,
            kendall_tau: field(line, "kendall_tau", f[2])?,
            spearman_rho: field(line, "spearman_rho", f[3])?,
        };
        for (name, v) in [
            ("kendall_tau", sample.kendall_tau),
            ("spearman_rho", sample.spearman_rho),
        ] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::parse(format!(
                    "line {line}: {name} {v} outside [-1, 1]"
                )));
            }
        }
        samples.push(sample);
    }
    Ok(samples)
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<SweepRow>> {
    data_lines(text, SWEEP_HEADER)?
        .map(|(line, f)| {
            Ok(SweepRow {
                ring_size: field(line, "ring_size", f[0])?,
                selfish_gain: field(line, "selfish_gain", f[1])?,
                t_ideal_rank: field(line, "t_ideal_rank", f[2])?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalMetrics {
    pub round: u64,
    pub t_ideal_rank: usize,
    pub kendall_tau: f64,
    pub spearman_rho: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selfish_gain: Option<i64>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SummaryFile {
    config: ConfigFile,
    prediction: ConvergencePrediction,
    #[serde(rename = "final")]
    final_metrics: FinalMetrics,
}

/// The parts of a run summary that can be read back.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub config: ScenarioConfig,
    pub prediction: ConvergencePrediction,
    pub final_metrics: FinalMetrics,
}

pub fn summary_toml(report: &RunReport) -> String {
    let s = &report.final_sample;
    let file = SummaryFile {
        config: ConfigFile::from(&report.config),
        prediction: report.prediction,
        final_metrics: FinalMetrics {
            round: s.round,
            t_ideal_rank: s.t_ideal_rank,
            kendall_tau: s.kendall_tau,
            spearman_rho: s.spearman_rho,
            selfish_gain: report.selfish_gain,
        },
    };
    toml::to_string(&file).expect("summary serializes")
}

pub fn parse_summary(text: &str) -> Result<Summary> {
    let file: SummaryFile = toml::from_str(text).map_err(|e| Error::parse(e.to_string()))?;
    let config = ScenarioConfig::from(file.config);
    config.validate()?;
    Ok(Summary {
        config,
        prediction: file.prediction,
        final_metrics: file.final_metrics,
    })
}

fn write(path: PathBuf, contents: &str) -> Result<PathBuf> {
    std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Writes `timeseries.csv` and `report.toml` into `dir`.
pub fn emit_csv(report: &RunReport, dir: &Path) -> Result<Vec<PathBuf>> {
    let csv = timeseries_csv(&report.samples)?;
    ensure_dir(dir)?;
    Ok(vec![
        write(dir.join(TIMESERIES_FILE), &csv)?,
        write(dir.join(SUMMARY_FILE), &summary_toml(report))?,
    ])
}

/// Writes `sweep.csv` into `dir`.
pub fn emit_sweep(rows: &[SweepRow], dir: &Path) -> Result<PathBuf> {
    ensure_dir(dir)?;
    write(dir.join(SWEEP_FILE), &sweep_csv(rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_formatting() {
        // expected strings from printf("%.17g")
        assert_eq!(format_real(1.0), "1");
        assert_eq!(format_real(-1.0), "-1");
        assert_eq!(format_real(0.5), "0.5");
        assert_eq!(format_real(0.0), "0");
        assert_eq!(format_real(1.0 / 3.0), "0.33333333333333331");
        assert_eq!(format_real(-0.08819875776397515), "-0.08819875776397515");
        assert_eq!(format_real(1e-7), "9.9999999999999995e-08");
        assert_eq!(format_real(1e20), "1e+20");
        assert_eq!(format_real(123456.0), "123456");
    }

    #[test]
    fn g17_round_trips() {
        for x in [
            1.0 / 3.0,
            0.1,
            -0.7,
            2.0f64.sqrt(),
            1e-300,
            6.02e23,
            0.999_999_999_999_999_9,
        ] {
            assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn empty_time_series_refused() {
        assert!(timeseries_csv(&[]).is_err());
    }

    #[test]
    fn header_contract() {
        let s = MetricsSample {
            round: 0,
            t_ideal_rank: 0,
            kendall_tau: -0.5,
            spearman_rho: 0.25,
        };
        let csv = timeseries_csv(&[s]).unwrap();
        assert_eq!(
            csv,
            "round,t_ideal_rank,kendall_tau,spearman_rho\n0,0,-0.5,0.25\n"
        );
        assert_eq!(parse_timeseries_csv(&csv).unwrap(), vec![s]);
        let rows = [SweepRow {
            ring_size: 1,
            selfish_gain: -2,
            t_ideal_rank: 3,
        }];
        let csv = sweep_csv(&rows);
        assert_eq!(csv, "ring_size,selfish_gain,t_ideal_rank\n1,-2,3\n");
        assert_eq!(parse_sweep_csv(&csv).unwrap(), rows);
    }

    #[test]
    fn malformed_csv_rejected() {
        assert!(parse_timeseries_csv("").is_err());
        assert!(parse_timeseries_csv("round,t\n").is_err());
        assert!(
            parse_timeseries_csv("round,t_ideal_rank,kendall_tau,spearman_rho\n1,2,3\n").is_err()
        );
        assert!(
            parse_timeseries_csv("round,t_ideal_rank,kendall_tau,spearman_rho\n1,2,3,0\n").is_err()
        );
        assert!(
            parse_timeseries_csv("round,t_ideal_rank,kendall_tau,spearman_rho\n1,2,0,0").is_err()
        );
        assert!(parse_sweep_csv("ring_size,selfish_gain,t_ideal_rank\nx,1,2\n").is_err());
        assert!(parse_sweep_csv("ring_size,selfish_gain,t_ideal_rank\n1,1,2,\n").is_err());
    }
}
