//! File formats: CSV tables with 17 significant digits and the JSON
//! reports.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use hypeigen_core::barriers::PipelineReport;
use hypeigen_core::exhaust2d::{EigenResult, Field2D};
use hypeigen_core::RadialSolution;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Scientific notation with 17 significant digits, enough to round-trip
/// any `f64`.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_csv<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Header and rows of a CSV file as strings.
pub fn read_csv(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    let header = r.headers().map_err(csv_err)?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(String::from).collect());
    }
    Ok((header, rows))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

/// `r,u,du` rows of a radial profile.
pub fn radial_rows(s: &RadialSolution) -> impl Iterator<Item = [String; 3]> + '_ {
    s.grid()
        .iter()
        .zip(s.values())
        .zip(s.derivs())
        .map(|((r, u), du)| [real(*r), real(*u), real(*du)])
}

/// `x,y,value,mask` rows: interior nodes first, then the boundary cut points.
pub fn field_rows(f: &Field2D) -> Vec<[String; 4]> {
    let g = &f.grid;
    let mut rows = Vec::with_capacity(g.len() + g.boundary().len());
    for k in 0..g.len() {
        let [x, y] = g.coords(k);
        rows.push([real(x), real(y), real(f.values[k]), "interior".into()]);
    }
    for (s, v) in g.boundary().iter().zip(&f.boundary_values) {
        rows.push([real(s.x), real(s.y), real(*v), "boundary".into()]);
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusEntry {
    pub b: f64,
    pub lambda1_analytic: f64,
    pub lambda1_numeric: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenRecord {
    pub lambda1: f64,
    pub h: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl From<&EigenResult> for EigenRecord {
    fn from(e: &EigenResult) -> Self {
        EigenRecord {
            lambda1: e.value,
            h: e.h,
            residual: e.residual,
            iterations: e.iterations,
        }
    }
}

/// One line of `spectrum.json`: the first eigenvalue of a geodesic ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumEntry {
    pub radius: f64,
    pub lambda1: f64,
    pub h: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IterationRecord {
    pub d: f64,
    pub gamma1: f64,
    pub delta: f64,
    pub sup_u_tilde: f64,
    pub width: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateRecord {
    /// Always `"thin-annulus"`.
    pub certificate: String,
    pub lambda1_annulus: f64,
}

/// An element of `nonexistence_report.json`: the iterations in order, then
/// one certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PipelineRecord {
    Iteration(IterationRecord),
    Certificate(CertificateRecord),
}

pub fn pipeline_records(r: &PipelineReport) -> Vec<PipelineRecord> {
    let mut out: Vec<PipelineRecord> = r
        .iterations
        .iter()
        .map(|it| {
            PipelineRecord::Iteration(IterationRecord {
                d: it.d,
                gamma1: it.gamma1,
                delta: it.delta,
                sup_u_tilde: it.sup_u_tilde,
                width: it.width,
                passed: it.passed,
            })
        })
        .collect();
    out.push(PipelineRecord::Certificate(CertificateRecord {
        certificate: "thin-annulus".into(),
        lambda1_annulus: r.certificate.lambda1_annulus,
    }));
    out
}

/// Parses `nonexistence_report.json` and checks its shape: iterations
/// only, then exactly one thin-annulus certificate at the end.
pub fn parse_pipeline_report(text: &str) -> Result<Vec<PipelineRecord>, CliError> {
    let recs: Vec<PipelineRecord> = serde_json::from_str(text)?;
    let bad = |m: &str| Err(CliError::Verification(format!("pipeline report: {m}")));
    match recs.last() {
        Some(PipelineRecord::Certificate(c)) if c.certificate == "thin-annulus" => {}
        _ => return bad("must end with a thin-annulus certificate"),
    }
    if recs[..recs.len() - 1]
        .iter()
        .any(|r| matches!(r, PipelineRecord::Certificate(_)))
    {
        return bad("certificate before the last entry");
    }
    Ok(recs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_round_trip_with_17_digits() {
        for x in [0.1, 1.0 / 3.0, 5.5144200e-1, -2.2250738585072014e-308, 1e300] {
            let s = real(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
            let mantissa = s.split('e').next().unwrap();
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
        }
    }

    #[test]
    fn pipeline_report_shape() {
        let ok = r#"[{"d":2,"gamma1":0.1,"delta":0.01,"sup_u_tilde":0.5,"width":1.5,"passed":true},
                    {"certificate":"thin-annulus","lambda1_annulus":300.0}]"#;
        assert_eq!(parse_pipeline_report(ok).unwrap().len(), 2);
        let no_cert = r#"[{"d":2,"gamma1":0.1,"delta":0.01,"sup_u_tilde":0.5,"width":1.5,"passed":true}]"#;
        assert!(parse_pipeline_report(no_cert).is_err());
        let extra_key = r#"[{"certificate":"thin-annulus","lambda1_annulus":3.0,"x":1}]"#;
        assert!(parse_pipeline_report(extra_key).is_err());
    }
}
