//! The subcommands. Each writes its files into `output_dir` and returns a
//! short JSON summary for stdout.

use std::fs;
use std::path::PathBuf;

use hypeigen_core::barriers::nonexistence_pipeline;
use hypeigen_core::exhaust2d::{build_grid, dirichlet_lambda1, hyperball_exhaustion};
use hypeigen_core::horofunc::{
    exterior_horoball_eigen, horoannulus_lambda1, horoannulus_lambda1_numeric, horoball_eigen,
    HoroSide,
};
use hypeigen_core::hypgeom::Side;
use hypeigen_core::radialode::{
    decay_fit, exterior_combination, find_peak, solve_regular, solve_singular,
};
use hypeigen_core::{DomainSpec, EigenParams, Error, Point};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::io::{self, AnnulusEntry, SpectrumEntry};
use crate::CliError;

/// Inner radius of the sampled singular profile.
pub const SINGULAR_R_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialChoice {
    Regular,
    Singular,
    /// Vanishing on the sphere of this radius.
    Exterior(f64),
}

impl RadialChoice {
    fn name(self) -> &'static str {
        match self {
            RadialChoice::Regular => "regular",
            RadialChoice::Singular => "singular",
            RadialChoice::Exterior(_) => "exterior",
        }
    }
}

fn params(cfg: &RunConfig) -> Result<EigenParams, CliError> {
    Ok(EigenParams::from_fraction(cfg.n, cfg.lambda_frac)?)
}

fn out_path(cfg: &RunConfig, name: &str) -> Result<PathBuf, CliError> {
    fs::create_dir_all(&cfg.output_dir)?;
    Ok(cfg.output_dir.join(name))
}

fn plane_only(cfg: &RunConfig) -> Result<(), CliError> {
    if cfg.n != 2 {
        return Err(Error::Argument(format!("grid computations need n = 2, got {}", cfg.n)).into());
    }
    Ok(())
}

/// `radial_<kind>.csv` with header `r,u,du`.
pub fn cmd_radial(cfg: &RunConfig, kind: RadialChoice) -> Result<Value, CliError> {
    let p = params(cfg)?;
    let sol = match kind {
        RadialChoice::Regular => solve_regular(p, cfg.r_max, cfg.tol)?,
        RadialChoice::Singular => solve_singular(p, SINGULAR_R_MIN, cfg.r_max, cfg.tol)?,
        RadialChoice::Exterior(r) => {
            let u = solve_regular(p, cfg.r_max, cfg.tol)?;
            let v = solve_singular(p, SINGULAR_R_MIN.min(0.5 * r), cfg.r_max, cfg.tol)?;
            exterior_combination(&u, &v, r)?
        }
    };
    let path = out_path(cfg, &format!("radial_{}.csv", kind.name()))?;
    io::write_csv(&path, &["r", "u", "du"], io::radial_rows(&sol))?;
    let mut summary = json!({
        "kind": kind.name(),
        "file": path.display().to_string(),
        "rows": sol.len(),
    });
    if let RadialChoice::Exterior(r) = kind {
        summary["radius"] = json!(r);
        summary["r0"] = json!(find_peak(&sol)?);
        let (c, holds) = decay_fit(&sol)?;
        summary["decay_c"] = json!(c);
        summary["decay_holds"] = json!(holds);
    }
    Ok(summary)
}

/// `horo_<side>.csv` with header `d,value`, sampling `[0, r_max]`.
pub fn cmd_horo(cfg: &RunConfig, side: HoroSide, samples: usize) -> Result<Value, CliError> {
    if samples < 2 {
        return Err(Error::Argument("need at least two samples".into()).into());
    }
    let p = params(cfg)?;
    let name = match side {
        HoroSide::InteriorHoroball => "interior",
        HoroSide::ExteriorHoroball => "exterior",
    };
    let mut rows = Vec::with_capacity(samples);
    for i in 0..samples {
        let d = cfg.r_max * i as f64 / (samples - 1) as f64;
        let v = match side {
            HoroSide::InteriorHoroball => horoball_eigen(p, d, 1.0)?,
            HoroSide::ExteriorHoroball => exterior_horoball_eigen(p, d, 1.0)?,
        };
        rows.push([io::real(d), io::real(v)]);
    }
    let path = out_path(cfg, &format!("horo_{name}.csv"))?;
    io::write_csv(&path, &["d", "value"], rows)?;
    Ok(json!({ "side": name, "file": path.display().to_string(), "rows": samples }))
}

/// `annulus_spectrum.json`: analytic and finite-difference first
/// eigenvalues of horoannuli of the given widths.
pub fn cmd_annulus(cfg: &RunConfig, widths: &[f64]) -> Result<Value, CliError> {
    let mut entries = Vec::with_capacity(widths.len());
    for &b in widths {
        entries.push(AnnulusEntry {
            b,
            lambda1_analytic: horoannulus_lambda1(cfg.n, b),
            lambda1_numeric: horoannulus_lambda1_numeric(cfg.n, b)?,
        });
    }
    let path = out_path(cfg, "annulus_spectrum.json")?;
    io::write_json(&path, &entries)?;
    let worst = entries
        .iter()
        .map(|e| (e.lambda1_analytic - e.lambda1_numeric).abs())
        .fold(0.0, f64::max);
    Ok(json!({ "file": path.display().to_string(), "entries": entries.len(), "max_difference": worst }))
}

/// Exhaustion of the hyperball at distance `offset` above the diameter at
/// angle `theta`. Writes `hyperball_field.csv` (`x,y,value,mask`) and
/// `hyperball_report.json`; a violated sandwich, monotonicity or missing
/// convergence is reported as a verification failure after writing.
pub fn cmd_hyperball(cfg: &RunConfig, theta: f64, offset: f64, exhaust_tol: f64) -> Result<Value, CliError> {
    plane_only(cfg)?;
    let dom = DomainSpec::hyperball_2d(theta, offset, Side::Positive)?;
    let rep = hyperball_exhaustion(&dom, cfg.lambda(), cfg.h, exhaust_tol)?;
    let field_path = out_path(cfg, "hyperball_field.csv")?;
    io::write_csv(&field_path, &["x", "y", "value", "mask"], io::field_rows(&rep.field))?;
    let steps: Vec<Value> = rep
        .steps
        .iter()
        .map(|s| {
            json!({
                "radius": s.radius,
                "nodes": s.nodes,
                "sup_diff": s.sup_diff,
                "sandwich_violation": s.sandwich_violation,
                "monotonicity_violation": s.monotonicity_violation,
                "boundary_trace": s.boundary_trace,
                "saturated": s.saturated,
            })
        })
        .collect();
    let summary = json!({
        "file": field_path.display().to_string(),
        "lambda": cfg.lambda(),
        "h": cfg.h,
        "slack": rep.slack,
        "converged": rep.converged,
        "steps": steps,
    });
    io::write_json(&out_path(cfg, "hyperball_report.json")?, &summary)?;
    let mut failures = Vec::new();
    if let Some(s) = rep.sandwich_failure() {
        failures.push(format!("sandwich violated by {:e} at N = {}", s.sandwich_violation, s.radius));
    }
    if let Some(s) = rep.monotonicity_failure() {
        failures.push(format!(
            "u_N decreased by {:e} at N = {}",
            s.monotonicity_violation.unwrap_or(0.0),
            s.radius
        ));
    }
    if !rep.converged {
        failures.push("exhaustion did not settle".into());
    }
    if failures.is_empty() {
        Ok(summary)
    } else {
        Err(CliError::Verification(failures.join("; ")))
    }
}

/// `spectrum.json`: first Dirichlet eigenvalue of the geodesic balls
/// `B_R(0)` for each radius.
pub fn cmd_spectrum(cfg: &RunConfig, radii: &[f64]) -> Result<Value, CliError> {
    plane_only(cfg)?;
    let o = Point::origin(2);
    let mut entries = Vec::with_capacity(radii.len());
    for &r in radii {
        let dom = DomainSpec::geodesic_ball(o.clone(), r)?;
        let grid = build_grid(&dom, f64::INFINITY, &o, cfg.h)?;
        let e = dirichlet_lambda1(&grid, cfg.tol)?;
        entries.push(SpectrumEntry {
            radius: r,
            lambda1: e.value,
            h: e.h,
            residual: e.residual,
            iterations: e.iterations,
        });
    }
    let path = out_path(cfg, "spectrum.json")?;
    io::write_json(&path, &entries)?;
    Ok(json!({ "file": path.display().to_string(), "entries": entries.len() }))
}

/// `nonexistence_report.json` for a synthetic candidate on `A_{0,d_bar}`.
pub fn cmd_nonexistence(cfg: &RunConfig, d_bar: f64) -> Result<Value, CliError> {
    let rep = nonexistence_pipeline(cfg.n, cfg.lambda(), d_bar, cfg.h)?;
    let path = out_path(cfg, "nonexistence_report.json")?;
    io::write_json(&path, &io::pipeline_records(&rep))?;
    Ok(json!({
        "file": path.display().to_string(),
        "iterations": rep.iterations.len(),
        "iteration_bound": rep.iteration_bound,
        "certificate_width": rep.certificate.width,
        "lambda1_annulus": rep.certificate.lambda1_annulus,
    }))
}

/// Runs [`crate::verify::run_suite`], writes `verify_report.json` and fails
/// with exit code 1 when any check fails.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Value, CliError> {
    let checks = crate::verify::run_suite(cfg);
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let report = json!({ "passed": failed.is_empty(), "checks": checks });
    io::write_json(&out_path(cfg, "verify_report.json")?, &report)?;
    if failed.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Verification(format!("failed checks: {}", failed.join(", "))))
    }
}
