//! Barrier arguments behind the nonexistence of bounded eigenfunctions in
//! horoballs, and the behaviour of the hyperball eigenfunction at infinity.
//!
//! * [`estimate_barrier_constants`]: `C₀`, `d₀`, `d₁` from the `λ₁` exterior
//!   profile outside a unit ball.
//! * [`boundary_bound_check`]: `|u| ≤ C₀ dist(x, ∂B) sup|u|` near `∂B`.
//! * [`shrink_step`] and [`nonexistence_pipeline`]: subtracting a scaled
//!   horoball eigenfunction pulls the support of a candidate away from the
//!   deep horosphere by at least `δ`, until the support fits in an annulus
//!   too thin to carry an eigenfunction.
//! * [`parabola_barrier_check`] and [`falsify_hovering`]: an eigenfunction
//!   cannot stay near a nonzero level on a ball of fixed radius.
//! * [`nonextendability_witness`]: the exterior horoball eigenfunction
//!   oscillates near the point at infinity of the horoball.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::Float;

use crate::exhaust2d::{build_grid, BoundaryKind, DirichletSolver, Field2D, Grid2D};
use crate::horofunc::{
    exterior_horoball_eigen, exterior_peak_depth, horoannulus_lambda1, horoball_eigen,
};
use crate::hypgeom::{dist_raw, DomainSpec, IdealPoint, Point};
use crate::radialode::{
    exterior_combination, find_peak, solve_regular, solve_singular, EigenParams,
};
use crate::{Error, Result};

/// Factor by which the constant of the thin-annulus bound exceeds `C₀`.
pub const DEFAULT_C_FACTOR: f64 = 1.01;

const LIPSCHITZ_MESH: f64 = 1e-4;
/// Truncation radius of the synthetic pipeline candidates.
const CANDIDATE_RADIUS: f64 = 2.0;

/// Constants of the boundary estimate, from the `λ₁` exterior profile `w`
/// outside a unit ball normalized by `w(R₀) = 1` at its peak.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierConstants {
    pub n: u32,
    pub r0: f64,
    /// `max |w'|` on `[1, R₀]`.
    pub c: f64,
    pub c0: f64,
    pub d0: f64,
    pub d1: f64,
}

impl BarrierConstants {
    /// Largest width `min(1/C, d₀)` certified by the thin-annulus bound
    /// for `C = factor · C₀` (`factor > 1`).
    pub fn thin_annulus_limit(&self, factor: f64) -> f64 {
        (1.0 / (factor * self.c0)).min(self.d0)
    }
}

pub fn estimate_barrier_constants(n: u32) -> Result<BarrierConstants> {
    barrier_constants_with(n, 1e-12, LIPSCHITZ_MESH)
}

/// [`estimate_barrier_constants`] with explicit ODE tolerance and mesh of
/// the Lipschitz search, for refinement studies.
pub fn barrier_constants_with(n: u32, tol: f64, mesh: f64) -> Result<BarrierConstants> {
    if n < 2 {
        return Err(Error::arg(format!("dimension must be at least 2, got {n}")));
    }
    if !(mesh > 0.0 && mesh < 0.1) {
        return Err(Error::arg(format!("mesh must lie in (0, 0.1), got {mesh}")));
    }
    let params = EigenParams::new(n, crate::lambda1(n))?;
    let r_max = 30.0;
    let u = solve_regular(params, r_max, tol)?;
    let v = solve_singular(params, 0.5, r_max, tol)?;
    let w = exterior_combination(&u, &v, 1.0)?;
    let r0 = find_peak(&w)?;
    let top = w.evaluate_full(r0)?.0;
    let cells = ((r0 - 1.0) / mesh).ceil() as usize;
    let mut c = 0.0f64;
    for i in 0..=cells {
        let r = (1.0 + i as f64 * (r0 - 1.0) / cells as f64).min(r0);
        c = c.max(w.evaluate_full(r)?.1.abs());
    }
    c /= top;
    let c0 = 2.0 * c;
    let d0 = r0 - 1.0;
    Ok(BarrierConstants {
        n,
        r0,
        c,
        c0,
        d0,
        d1: 0.5 * (1.0 / c0).min(d0),
    })
}

fn horoball_parts(b: &DomainSpec) -> Result<(&IdealPoint, f64)> {
    match b {
        DomainSpec::Horoball { xi, level } => Ok((xi, *level)),
        _ => Err(Error::arg("expected a horoball")),
    }
}

fn depths(grid: &Grid2D, b: &DomainSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    horoball_parts(b)?;
    if b.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: b.dim(),
        });
    }
    let depth = |p: [f64; 2]| b.depth_raw(&p).expect("horoball has a depth");
    let nodes = (0..grid.len()).map(|k| depth(grid.coords(k))).collect();
    let cuts = grid.boundary().iter().map(|s| depth([s.x, s.y])).collect();
    Ok((nodes, cuts))
}

/// Outcome of [`boundary_bound_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub passed: bool,
    /// Nodes with `0 < dist(x, ∂B) ≤ d₀`.
    pub checked: usize,
    /// Largest `|u| - C₀ dist sup|u|` over those nodes.
    pub worst_excess: f64,
    pub slack: f64,
}

/// Checks `|u(x)| ≤ C₀ dist(x, ∂B) sup|u| + 10 h²` at every node with
/// `0 < dist(x, ∂B) ≤ d₀`.
pub fn boundary_bound_check(
    u: &Field2D,
    b: &DomainSpec,
    k: &BarrierConstants,
) -> Result<BoundCheck> {
    let (node_depth, _) = depths(&u.grid, b)?;
    let sup = u.max_abs();
    let h = u.grid.h();
    let slack = 10.0 * h * h;
    let mut checked = 0;
    let mut worst = f64::NEG_INFINITY;
    for (val, &d) in u.values.iter().zip(&node_depth) {
        if d > 0.0 && d <= k.d0 {
            checked += 1;
            worst = worst.max(val.abs() - k.c0 * d * sup);
        }
    }
    Ok(BoundCheck {
        passed: checked == 0 || worst <= slack,
        checked,
        worst_excess: if checked == 0 { 0.0 } else { worst },
        slack,
    })
}

/// One application of the support-shrinking step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShrinkReport {
    pub d_in: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta: f64,
    pub sup_u_tilde: f64,
    /// Largest depth at which `ũ > 0`, or 0 for an empty support.
    pub support_width_out: f64,
    pub passed: bool,
}

/// `ũ = (u/sup|u| - v(depth + 1)/v(d + 2))⁺` for a candidate supported in
/// `A_{0,d}` of the horoball `b`, where `v` is the horoball eigenfunction.
/// Passes when the support of `ũ` ends by depth `d - δ + 10 h²`.
pub fn shrink_step(
    u: &Field2D,
    d: f64,
    b: &DomainSpec,
    k: &BarrierConstants,
    lambda: f64,
) -> Result<(ShrinkReport, Field2D)> {
    if !(d > k.d1) {
        return Err(Error::arg(format!("width {d} is not above d1 = {}", k.d1)));
    }
    let sup = u.max_abs();
    if !(sup > 0.0) {
        return Err(Error::arg("candidate vanishes identically"));
    }
    let params = EigenParams::new(k.n, lambda)?;
    let v = |t: f64| horoball_eigen(params, t, 1.0);
    let top = v(d + 2.0)?;
    let gamma1 = v(1.0)? / top;
    let gamma2 = v(d + 1.0)? / top;
    let delta = 0.5 * k.d0.min(gamma1 / k.c0);

    let (node_depth, cut_depth) = depths(&u.grid, b)?;
    let cut = |val: f64, depth: f64| -> Result<f64> {
        let v0 = v((depth + 1.0).max(0.0))? / top;
        Ok((val / sup - v0).max(0.0))
    };
    let mut width = 0.0f64;
    let mut sup_tilde = 0.0f64;
    let mut values = Vec::with_capacity(u.values.len());
    for (&val, &depth) in u.values.iter().zip(&node_depth) {
        let t = cut(val, depth)?;
        if t > 0.0 {
            width = width.max(depth);
            sup_tilde = sup_tilde.max(t);
        }
        values.push(t);
    }
    let mut boundary_values = Vec::with_capacity(u.boundary_values.len());
    for (&val, &depth) in u.boundary_values.iter().zip(&cut_depth) {
        let t = cut(val, depth)?;
        if t > 0.0 {
            width = width.max(depth);
            sup_tilde = sup_tilde.max(t);
        }
        boundary_values.push(t);
    }
    let h = u.grid.h();
    let report = ShrinkReport {
        d_in: d,
        gamma1,
        gamma2,
        delta,
        sup_u_tilde: sup_tilde,
        support_width_out: width,
        passed: width <= d - delta + 10.0 * h * h,
    };
    let field = Field2D {
        grid: u.grid.clone(),
        values,
        boundary_values,
        lambda: u.lambda,
        residual_norm: None,
    };
    Ok((report, field))
}

/// `(C u₀ - v(depth))⁺` for the smallest power of two `C ≥ 1` that leaves a
/// nonempty positive set on the grid. Returns `C` and the cut field.
pub fn initial_cutoff(u: &Field2D, b: &DomainSpec, lambda: f64, n: u32) -> Result<(f64, Field2D)> {
    let sup = u.max_abs();
    if !(sup > 0.0) {
        return Err(Error::arg("candidate vanishes identically"));
    }
    let params = EigenParams::new(n, lambda)?;
    let (node_depth, cut_depth) = depths(&u.grid, b)?;
    let vbar = |d: f64| horoball_eigen(params, d.max(0.0), 1.0);
    let mut c = 1.0f64;
    for _ in 0..64 {
        let mut values = Vec::with_capacity(u.values.len());
        let mut any = false;
        for (&val, &d) in u.values.iter().zip(&node_depth) {
            let t = (c * val / sup - vbar(d)?).max(0.0);
            any |= t > 0.0;
            values.push(t);
        }
        if any {
            let mut boundary_values = Vec::with_capacity(cut_depth.len());
            for (&val, &d) in u.boundary_values.iter().zip(&cut_depth) {
                boundary_values.push((c * val / sup - vbar(d)?).max(0.0));
            }
            let field = Field2D {
                grid: u.grid.clone(),
                values,
                boundary_values,
                lambda: u.lambda,
                residual_norm: None,
            };
            return Ok((c, field));
        }
        c *= 2.0;
    }
    Err(Error::numerical(
        "no power of two makes C u0 exceed the horoball eigenfunction",
    ))
}

/// One row of the pipeline report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineIteration {
    pub d: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta: f64,
    pub sup_u_tilde: f64,
    pub width: f64,
    pub passed: bool,
}

/// The final thin-annulus certificate: `λ₁(A_{0,b}) > (n-1)²/4 ≥ λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThinAnnulusCertificate {
    pub width: f64,
    pub lambda1_annulus: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineReport {
    pub n: u32,
    pub lambda: f64,
    pub d_bar: f64,
    pub h: f64,
    pub constants: BarrierConstants,
    /// The power of two used in the initial cut, if a grid was needed.
    pub initial_scale: Option<f64>,
    pub iterations: Vec<PipelineIteration>,
    /// `ceil((d_bar - d₁) / δ_min) + 1`.
    pub iteration_bound: usize,
    pub certificate: ThinAnnulusCertificate,
}

/// The horoball whose depth-`d_bar/2` horosphere passes through the origin,
/// together with the candidate domain `A_{0,d_bar} ∩ B_2(0)`.
pub fn candidate_domains(d_bar: f64) -> Result<(DomainSpec, DomainSpec)> {
    let xi = IdealPoint::from_angle(0.0);
    let level = -0.5 * d_bar;
    Ok((
        DomainSpec::horoball(xi.clone(), level)?,
        DomainSpec::horoannulus(xi, level, 0.0, d_bar)?,
    ))
}

/// Discrete solution on `A_{0,d_bar} ∩ B_R(0)` with unit data on the
/// truncation sphere and zero data on both horospheres.
pub fn synthetic_candidate(lambda: f64, d_bar: f64, h: f64) -> Result<(Arc<Grid2D>, Field2D)> {
    let (_, annulus) = candidate_domains(d_bar)?;
    let grid = Arc::new(build_grid(
        &annulus,
        CANDIDATE_RADIUS,
        &Point::origin(2),
        h,
    )?);
    let data = grid
        .boundary()
        .iter()
        .map(|s| {
            if s.kind == BoundaryKind::Truncation {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    let u = DirichletSolver::new(grid.clone(), lambda)?.solve_values(data)?;
    Ok((grid, u))
}

/// Re-enacts the horoball nonexistence argument on a synthetic candidate:
/// an initial cut `(C u₀ - v)⁺`, then [`shrink_step`] until the support is
/// thinner than `d₁`, ending with the thin-annulus eigenvalue bound. Only
/// `n = 2` has a grid; wider `n` is accepted when `d_bar ≤ d₁`.
pub fn nonexistence_pipeline(n: u32, lambda: f64, d_bar: f64, h: f64) -> Result<PipelineReport> {
    let params = EigenParams::new(n, lambda)?;
    if !(d_bar > 0.0) || !d_bar.is_finite() {
        return Err(Error::arg(format!("d_bar must be positive, got {d_bar}")));
    }
    let k = estimate_barrier_constants(n)?;
    let certify = |width: f64| -> Result<ThinAnnulusCertificate> {
        let l = horoannulus_lambda1(n, width);
        if !(l > params.lambda1()) || width > k.thin_annulus_limit(DEFAULT_C_FACTOR) {
            return Err(Error::invariant(format!(
                "no thin-annulus certificate at width {width}"
            )));
        }
        Ok(ThinAnnulusCertificate {
            width,
            lambda1_annulus: l,
        })
    };
    if d_bar <= k.d1 {
        return Ok(PipelineReport {
            n,
            lambda,
            d_bar,
            h,
            constants: k,
            initial_scale: None,
            iterations: Vec::new(),
            iteration_bound: 0,
            certificate: certify(d_bar)?,
        });
    }
    if n != 2 {
        return Err(Error::arg(
            "the grid pipeline runs in the plane only (n = 2)",
        ));
    }
    let (b, _) = candidate_domains(d_bar)?;
    let (_, u) = synthetic_candidate(lambda, d_bar, h)?;
    let (scale, mut field) = initial_cutoff(&u, &b, lambda, n)?;

    let mut d = d_bar;
    let mut iterations = Vec::new();
    let mut delta_min = f64::INFINITY;
    // each passing step removes at least δ - 10h² > 0 (checked below)
    while d > k.d1 {
        let (rep, next) = shrink_step(&field, d, &b, &k, lambda)?;
        delta_min = delta_min.min(rep.delta);
        iterations.push(PipelineIteration {
            d,
            gamma1: rep.gamma1,
            gamma2: rep.gamma2,
            delta: rep.delta,
            sup_u_tilde: rep.sup_u_tilde,
            width: rep.support_width_out,
            passed: rep.passed,
        });
        if !rep.passed {
            return Err(Error::invariant(format!(
                "shrink step from width {d} left support up to {} (allowed {})",
                rep.support_width_out,
                d - rep.delta
            )));
        }
        let bound = ((d_bar - k.d1) / delta_min).ceil() as usize + 1;
        if iterations.len() > bound || !(rep.support_width_out < d) {
            return Err(Error::invariant(format!(
                "support stopped shrinking at width {} after {} steps",
                rep.support_width_out,
                iterations.len()
            )));
        }
        if rep.sup_u_tilde == 0.0 {
            d = 0.0;
            break;
        }
        d = rep.support_width_out;
        field = next;
    }
    let iteration_bound = ((d_bar - k.d1) / delta_min).ceil() as usize + 1;
    // an empty or sub-lattice support is certified at the lattice spacing
    let certificate = certify(d.max(h).min(k.d1))?;
    Ok(PipelineReport {
        n,
        lambda,
        d_bar,
        h,
        constants: k,
        initial_scale: Some(scale),
        iterations,
        iteration_bound,
        certificate,
    })
}

/// The comparison function `P(x) = (L - ε) + Cp (r₀² - dist(x, x_k)²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolaBarrier {
    pub center: Point,
    pub r0: f64,
    pub l: f64,
    pub eps: f64,
    /// Largest `Cp` with `Cp (2 + (n-1) coth(r₀) 2 r₀) ≤ λ (L - ε)`.
    pub cp: f64,
}

impl ParabolaBarrier {
    pub fn new(n: u32, lambda: f64, center: Point, r0: f64, l: f64, eps: f64) -> Result<Self> {
        if !(r0 > 0.0) || !(eps > 0.0) {
            return Err(Error::arg("r0 and eps must be positive"));
        }
        let rhs = lambda * (l - eps);
        if !(rhs > 0.0) {
            return Err(Error::arg(format!(
                "lambda (L - eps) = {rhs} must be positive for a parabola barrier"
            )));
        }
        Ok(ParabolaBarrier {
            center,
            r0,
            l,
            eps,
            cp: rhs / parabola_factor(n, r0),
        })
    }

    /// The value `P(x_k) = L - ε + Cp r₀²` forced at the center.
    pub fn center_value(&self) -> f64 {
        self.l - self.eps + self.cp * self.r0 * self.r0
    }
}

fn parabola_factor(n: u32, r0: f64) -> f64 {
    2.0 + (f64::from(n) - 1.0) * 2.0 * r0 / r0.tanh()
}

fn field_at(field: &Field2D, p: &Point) -> Result<f64> {
    if p.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    let [x, y] = [p.coords()[0], p.coords()[1]];
    field
        .interpolate(x, y)
        .or_else(|| field.nearest(x, y))
        .ok_or_else(|| Error::OutsideDomain(format!("({x}, {y}) is not covered by the grid")))
}

/// True iff `field(x_k) > L - ε + Cp r₀² - 10 h²`, which comparison with the
/// parabola forces whenever the field stays in `(L - ε, L + ε)` on
/// `B_{r₀}(x_k)`.
pub fn parabola_barrier_check(
    field: &Field2D,
    x_k: &Point,
    r0: f64,
    l: f64,
    eps: f64,
    lambda: f64,
) -> Result<bool> {
    let p = ParabolaBarrier::new(2, lambda, x_k.clone(), r0, l, eps)?;
    let h = field.grid.h();
    Ok(field_at(field, x_k)? > p.center_value() - 10.0 * h * h)
}

/// Outcome of [`falsify_hovering`].
#[derive(Debug, Clone, PartialEq)]
pub struct HoverVerdict {
    pub barrier: ParabolaBarrier,
    /// Extremes of the field over the nodes of `B_{r₀}(x_k)`.
    pub min: f64,
    pub max: f64,
    pub center_value: f64,
    /// The field leaves `(L - ε, L + ε)` on the ball.
    pub leaves_band: bool,
    /// The parabola forces `u(x_k) > L + ε`, contradicting hovering.
    pub forced_above: bool,
    pub falsified: bool,
}

/// Tests whether `field` can hover near `L ≠ 0` on `B_{r₀}(x_k)`. Picks
/// `ε = 0.45 Cp r₀²` (solved jointly with `Cp`), so that hovering would force
/// `u(x_k) ≥ L - ε + Cp r₀² > L + ε`. Negative levels are handled through
/// `-u`.
pub fn falsify_hovering(
    field: &Field2D,
    x_k: &Point,
    r0: f64,
    l: f64,
    lambda: f64,
) -> Result<HoverVerdict> {
    if l == 0.0 || !l.is_finite() {
        return Err(Error::arg("the level must be nonzero"));
    }
    let sign = l.signum();
    let la = l.abs();
    let q = 0.45 * lambda * r0 * r0 / parabola_factor(2, r0);
    let eps = q * la / (1.0 + q);
    let barrier = ParabolaBarrier::new(2, lambda, x_k.clone(), r0, la, eps)?;
    let grid = &field.grid;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for k in 0..grid.len() {
        if dist_raw(&grid.coords(k), x_k.coords()) <= r0 {
            let v = sign * field.values[k];
            min = min.min(v);
            max = max.max(v);
        }
    }
    if !min.is_finite() {
        return Err(Error::OutsideDomain(
            "the ball contains no grid node".into(),
        ));
    }
    let center = sign * field_at(field, x_k)?;
    let leaves_band = min <= la - eps || max >= la + eps;
    let forced_above = barrier.center_value() > la + eps;
    Ok(HoverVerdict {
        center_value: center,
        min,
        max,
        leaves_band,
        forced_above,
        falsified: leaves_band || (forced_above && center > barrier.center_value()),
        barrier,
    })
}

/// Values of the exterior horoball eigenfunction along a sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessReport {
    pub depths: Vec<f64>,
    pub values: Vec<f64>,
    pub oscillation: f64,
    /// `½ sup u`, the value at the peak depth when there is one.
    pub threshold: f64,
    /// Euclidean distance from the last point to the point at infinity of
    /// the horoball.
    pub final_distance: f64,
    pub passed: bool,
}

/// Evaluates `u(d) = exterior_horoball_eigen(d)` with `d` the distance
/// outside `horoball` along `points`, which must end within `1e-3` of the
/// unit sphere. Passes when the values oscillate by at least `½ sup u`
/// while the points approach the horoball's point at infinity.
pub fn nonextendability_witness(
    params: EigenParams,
    horoball: &DomainSpec,
    points: &[Point],
) -> Result<WitnessReport> {
    let (xi, _) = horoball_parts(horoball)?;
    let last = points.last().ok_or_else(|| Error::arg("empty sequence"))?;
    if last.norm_sq().sqrt() < 1.0 - 1e-3 {
        return Err(Error::arg(
            "sequence does not approach the sphere at infinity",
        ));
    }
    let mut depths = Vec::with_capacity(points.len());
    let mut values = Vec::with_capacity(points.len());
    for p in points {
        if p.dim() != horoball.dim() {
            return Err(Error::DimensionMismatch {
                expected: horoball.dim(),
                found: p.dim(),
            });
        }
        let d = -horoball
            .depth_raw(p.coords())
            .expect("horoball has a depth");
        if d < 0.0 {
            return Err(Error::OutsideDomain(
                "point lies inside the horoball".into(),
            ));
        }
        depths.push(d);
        values.push(exterior_horoball_eigen(params, d, 1.0)?);
    }
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let sup = match exterior_peak_depth(params) {
        Some(d) => exterior_horoball_eigen(params, d, 1.0)?,
        // increasing to 1 when λ = 0
        None => 1.0,
    };
    let final_distance = last
        .coords()
        .iter()
        .zip(xi.direction())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let oscillation = hi - lo;
    Ok(WitnessReport {
        depths,
        values,
        oscillation,
        threshold: 0.5 * sup,
        final_distance,
        passed: oscillation >= 0.5 * sup && final_distance < 1e-3,
    })
}

/// Points on the horospheres at distances `depths[i % len]` outside the
/// horoball `{busemann_raw > 0}` of `xi`, approaching `xi` tangentially
/// (angle `2^-(i+1)` on each horosphere). `e` is a unit vector orthogonal to
/// `xi`. Beyond about 16 points `1 - |p|²` loses most of its digits.
pub fn tangential_sequence(
    xi: &IdealPoint,
    e: &[f64],
    depths: &[f64],
    count: usize,
) -> Result<Vec<Point>> {
    if depths.is_empty() {
        return Err(Error::arg("need at least one depth"));
    }
    (0..count)
        .map(|i| {
            let phi = 0.5f64.powi(i as i32 + 1);
            crate::hypgeom::horosphere_point(xi, e, -depths[i % depths.len()], phi)
        })
        .collect()
}
