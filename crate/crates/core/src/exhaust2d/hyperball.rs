//! Exhaustion of a hyperball by truncated Dirichlet problems.
//!
//! The hyperball `Ω` contains the half-plane `H` beyond the geodesic that
//! touches `∂Ω` orthogonally at its closest point to the origin. Mirror
//! points `p₁ ∈ H`, `p₂ ∉ H` at distance `m` from that geodesic give the
//! radial eigenfunctions `v_i = φ(dist(·, p_i))`, equal on `∂H`. The data
//! `v₀ = (v₁ - v₂)⁺` is a subsolution, `v₁` a supersolution, and the
//! solutions `u_N` on `Ω ∩ B_N(0)` increase to a positive eigenfunction.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::Float;

use super::grid::{build_grid, Arm, BoundaryKind, Grid2D};
use super::solve::{DirichletSolver, Field2D};
use crate::hypgeom::{dist_raw, DomainSpec, Point};
use crate::radialode::{decay_fit, evaluate, solve_regular, EigenParams, RadialSolution};
use crate::{Error, Result};

/// Radius of the first truncation, which is also the monitored compact.
const FIRST_RADIUS: f64 = 3.0;
const MAX_STEPS: usize = 10;
/// Distance of the mirror points from `∂H`.
const MIRROR_DISTANCE: f64 = 1.0;
/// Level the ray samples must fall below.
const RAY_LEVEL: f64 = 1e-2;

/// The comparison functions `v₀ ≤ v₁` of a hyperball.
#[derive(Debug, Clone)]
pub struct HyperballData {
    domain: DomainSpec,
    lambda: f64,
    p1: [f64; 2],
    p2: [f64; 2],
    phi: RadialSolution,
}

impl HyperballData {
    pub fn new(domain: &DomainSpec, lambda: f64) -> Result<Self> {
        let DomainSpec::Hyperball {
            normal,
            offset,
            side,
        } = domain
        else {
            return Err(Error::arg("the exhaustion needs a hyperball domain"));
        };
        if domain.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: domain.dim(),
            });
        }
        if !(lambda > 0.0 && lambda <= 0.25) {
            return Err(Error::arg(format!(
                "lambda must lie in (0, 1/4], got {lambda}"
            )));
        }
        let sign = match side {
            crate::hypgeom::Side::Positive => 1.0,
            crate::hypgeom::Side::Negative => -1.0,
        };
        let nu = normal.direction();
        let at = |sigma: f64| {
            let t = (0.5 * sigma).tanh();
            [t * nu[0], t * nu[1]]
        };
        let p1 = at(sign * (offset + MIRROR_DISTANCE));
        let p2 = at(sign * (offset - MIRROR_DISTANCE));
        let params = EigenParams::new(2, lambda)?;
        let phi = solve_regular(params, 20.0 + offset + MIRROR_DISTANCE, 1e-12)?;
        Ok(HyperballData {
            domain: domain.clone(),
            lambda,
            p1,
            p2,
            phi,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn mirror_points(&self) -> (Point, Point) {
        let mk = |p: [f64; 2]| Point::xy(p[0], p[1]).expect("mirror points lie in the disk");
        (mk(self.p1), mk(self.p2))
    }

    fn phi_at(&self, r: f64) -> f64 {
        evaluate(&self.phi, r.min(self.phi.r_max())).expect("distance within the profile range")
    }

    pub fn v1(&self, p: &Point) -> f64 {
        self.phi_at(dist_raw(p.coords(), &self.p1))
    }

    pub fn v2(&self, p: &Point) -> f64 {
        self.phi_at(dist_raw(p.coords(), &self.p2))
    }

    pub fn v0(&self, p: &Point) -> f64 {
        (self.v1(p) - self.v2(p)).max(0.0)
    }

    /// Distance beyond which `v₁`, and hence the eigenfunction, stays below
    /// `level` along every geodesic from the origin. Uses the envelope
    /// `φ(r) ≤ C r e^{-√λ r}` and `dist(x, p₁) ≥ t - dist(0, p₁)`.
    pub fn decay_radius(&self, level: f64) -> Result<f64> {
        let (c, holds) = decay_fit(&self.phi)?;
        if !holds {
            return Err(Error::numerical(
                "decay envelope does not bound the profile",
            ));
        }
        let k = self.lambda.sqrt();
        let env = |r: f64| c * r * (-k * r).exp();
        // the envelope decreases beyond 1/k
        let mut lo = (1.0 / k).max(1.0);
        if env(lo) <= level {
            return Ok(lo + dist_raw(&[0.0, 0.0], &self.p1));
        }
        let mut hi = 2.0 * lo;
        while env(hi) > level {
            hi *= 2.0;
        }
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if env(mid) > level {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(hi + dist_raw(&[0.0, 0.0], &self.p1))
    }
}

/// Diagnostics of one truncation `Ω ∩ B_N(0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustionStep {
    pub radius: f64,
    pub nodes: usize,
    /// `max |u_N - u_{N-1}|` over the monitored nodes.
    pub sup_diff: Option<f64>,
    /// Largest amount by which `0 ≤ v₀ ≤ u_N ≤ v₁` fails at a node.
    pub sandwich_violation: f64,
    /// Largest `u_{N-1} - u_N` at shared nodes.
    pub monotonicity_violation: Option<f64>,
    /// Largest `|u_N|` at nodes next to `∂Ω`.
    pub boundary_trace: f64,
    /// Largest `|v₀|` at the cut points on `∂Ω`.
    pub boundary_data_max: f64,
    /// The lattice did not grow: the grid is capped by `|x| ≤ 1 - h/2`.
    pub saturated: bool,
}

/// Sampled values along a geodesic ray from the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RayCheck {
    pub angle: f64,
    /// Distance beyond which the samples must lie below the level.
    pub threshold: f64,
    /// `(t, u)` pairs at grid-covered distances.
    pub samples: Vec<(f64, f64)>,
    /// Samples beyond the threshold exist and all lie below the level.
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct ExhaustionReport {
    pub steps: Vec<ExhaustionStep>,
    pub converged: bool,
    /// Slack `10 h²` used in the nodal inequalities.
    pub slack: f64,
    pub field: Field2D,
    pub data: HyperballData,
}

impl ExhaustionReport {
    /// First step whose sandwich violation exceeds the slack.
    pub fn sandwich_failure(&self) -> Option<&ExhaustionStep> {
        self.steps
            .iter()
            .find(|s| s.sandwich_violation > self.slack)
    }

    /// First step at which `u_N` dropped below `u_{N-1}` by more than the
    /// slack.
    pub fn monotonicity_failure(&self) -> Option<&ExhaustionStep> {
        self.steps
            .iter()
            .find(|s| s.monotonicity_violation.is_some_and(|m| m > self.slack))
    }

    /// Samples the final field along rays from the origin at the given
    /// angles, every `0.05` in distance, by bilinear interpolation.
    pub fn ray_checks(&self, angles: &[f64]) -> Result<Vec<RayCheck>> {
        let threshold = self.data.decay_radius(RAY_LEVEL)?;
        let mut out = Vec::new();
        for &angle in angles {
            let (s, c) = angle.sin_cos();
            let mut samples = Vec::new();
            let mut t: f64 = 0.05;
            loop {
                let r = (0.5 * t).tanh();
                if r >= 1.0 - 0.5 * self.field.grid.h() {
                    break;
                }
                let (x, y) = (r * c, r * s);
                if let Some(v) = self
                    .field
                    .interpolate(x, y)
                    .or_else(|| self.field.nearest(x, y))
                {
                    samples.push((t, v));
                }
                t += 0.05;
            }
            let beyond: Vec<f64> = samples
                .iter()
                .filter(|(t, _)| *t >= threshold)
                .map(|s| s.1)
                .collect();
            let passed = !beyond.is_empty() && beyond.iter().all(|v| v.abs() < RAY_LEVEL);
            out.push(RayCheck {
                angle,
                threshold,
                samples,
                passed,
            });
        }
        Ok(out)
    }
}

/// Runs the truncations `N = 3, 4, …, 12` with data `v₀` until the
/// solutions agree to `tol` on the nodes of `Ω ∩ B_3(0)`. The sandwich and
/// monotonicity are measured at every step and recorded, not enforced; see
/// [`hyperball_eigenfunction`] for the checked version.
pub fn hyperball_exhaustion(
    domain: &DomainSpec,
    lambda: f64,
    h: f64,
    tol: f64,
) -> Result<ExhaustionReport> {
    if !(tol > 0.0) {
        return Err(Error::arg(format!("tolerance must be positive, got {tol}")));
    }
    let data = HyperballData::new(domain, lambda)?;
    let x0 = Point::origin(2);
    let slack = 10.0 * h * h;
    let mut steps = Vec::new();
    let mut prev: Option<Field2D> = None;
    let mut converged = false;
    for step in 0..MAX_STEPS {
        let radius = FIRST_RADIUS + step as f64;
        let grid = Arc::new(build_grid(domain, radius, &x0, h)?);
        let solver = DirichletSolver::new(grid.clone(), lambda)?;
        let u = solver.solve(|p| data.v0(p))?;

        let mut sandwich = 0.0f64;
        for k in 0..grid.len() {
            let p = grid.point(k);
            let v0 = data.v0(&p);
            let v1 = data.v1(&p);
            let val = u.values[k];
            sandwich = sandwich.max(v0 - val).max(val - v1);
        }
        let (boundary_trace, boundary_data_max) = boundary_trace(&grid, &u);
        let mut sup_diff = None;
        let mut mono = None;
        let mut saturated = false;
        if let Some(p) = &prev {
            let (d, m) = compare_truncations(p, &u, &x0);
            sup_diff = Some(d);
            mono = Some(m);
            saturated = p.grid.len() == grid.len() && p.grid.boundary() == grid.boundary();
        }
        let record = ExhaustionStep {
            radius,
            nodes: grid.len(),
            sup_diff,
            sandwich_violation: sandwich,
            monotonicity_violation: mono,
            boundary_trace,
            boundary_data_max,
            saturated,
        };
        steps.push(record);
        prev = Some(u);
        if sup_diff.is_some_and(|d| d < tol) {
            converged = true;
            break;
        }
    }
    Ok(ExhaustionReport {
        steps,
        converged,
        slack,
        field: prev.expect("at least one truncation was solved"),
        data,
    })
}

/// The converged exhaustion limit. Fails if the sandwich
/// `0 ≤ v₀ ≤ u_N ≤ v₁` or the monotonicity in `N` is violated beyond
/// `10 h²`, or if the truncations did not settle within the step budget.
pub fn hyperball_eigenfunction(
    domain: &DomainSpec,
    lambda: f64,
    h: f64,
    tol: f64,
) -> Result<Field2D> {
    let report = hyperball_exhaustion(domain, lambda, h, tol)?;
    if let Some(s) = report.sandwich_failure() {
        return Err(Error::invariant(format!(
            "sandwich 0 <= v0 <= u <= v1 fails by {:e} at N = {} (slack {:e})",
            s.sandwich_violation, s.radius, report.slack
        )));
    }
    if let Some(s) = report.monotonicity_failure() {
        return Err(Error::invariant(format!(
            "u_N decreased by {:e} at N = {} (slack {:e})",
            s.monotonicity_violation.unwrap_or(0.0),
            s.radius,
            report.slack
        )));
    }
    if !report.converged {
        let last = report
            .steps
            .last()
            .and_then(|s| s.sup_diff)
            .unwrap_or(f64::NAN);
        return Err(Error::numerical(format!(
            "exhaustion did not settle: last change {last:e}, tolerance {tol:e}"
        )));
    }
    Ok(report.field)
}

fn boundary_trace(grid: &Grid2D, u: &Field2D) -> (f64, f64) {
    let mut trace = 0.0f64;
    let mut data = 0.0f64;
    for k in 0..grid.len() {
        for arm in grid.arms(k) {
            if let Arm::Boundary(b) = arm {
                if grid.boundary()[*b].kind == BoundaryKind::Domain {
                    trace = trace.max(u.values[k].abs());
                    data = data.max(u.boundary_values[*b].abs());
                }
            }
        }
    }
    (trace, data)
}

/// Sup of `|new - old|` on the first truncation's compact, and the largest
/// decrease `old - new` at shared nodes.
fn compare_truncations(old: &Field2D, new: &Field2D, x0: &Point) -> (f64, f64) {
    let mut diff = 0.0f64;
    let mut drop = f64::NEG_INFINITY;
    for k in 0..old.grid.len() {
        let (i, j) = old.grid.lattice_index(k);
        let Some(kn) = new.grid.node_at(i, j) else {
            continue;
        };
        let delta = new.values[kn] - old.values[k];
        drop = drop.max(-delta);
        if dist_raw(&old.grid.coords(k), x0.coords()) < FIRST_RADIUS {
            diff = diff.max(delta.abs());
        }
    }
    (diff, drop.max(0.0))
}
