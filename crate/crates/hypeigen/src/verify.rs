//! The invariant suite behind `hypeigen verify`. Each check is small and
//! uses fixed parameters; only the random comparison pairs depend on the
//! configured seed.

use std::sync::Arc;

use hypeigen_core::barriers::{
    estimate_barrier_constants, nonexistence_pipeline, nonextendability_witness,
    tangential_sequence, ParabolaBarrier,
};
use hypeigen_core::exhaust2d::{
    build_grid, comparison_check, dirichlet_lambda1, DirichletSolver, HyperballData,
};
use hypeigen_core::horofunc::{
    busemann_ode_residual, horoannulus_lambda1, horoannulus_lambda1_numeric, HoroProfile,
    HoroSide,
};
use hypeigen_core::hypgeom::Side;
use hypeigen_core::radialode::solve_regular;
use hypeigen_core::{lambda1, DomainSpec, EigenParams, IdealPoint, Point, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, outcome: Result<(bool, String)>) -> Check {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    Check {
        name: name.into(),
        passed,
        detail,
    }
}

pub fn run_suite(cfg: &RunConfig) -> Vec<Check> {
    vec![
        check("radial-n3-closed-form", radial_closed_form()),
        check("horoball-residuals", horoball_residuals()),
        check("annulus-two-routes", annulus_two_routes()),
        check("barrier-constants", barrier_constants()),
        check("ball-spectrum-monotone", ball_spectrum()),
        check("random-comparison-pairs", comparison_pairs(cfg.seed)),
        check("nonexistence-pipeline", pipeline()),
        check("parabola-admissibility", parabola()),
        check("exterior-witness", witness()),
        check("hyperball-mirror-data", hyperball_mirror()),
    ]
}

/// For `n = 3` the regular solution is `sinh(ωr)/(ω sinh r)` with
/// `ω² = 1 - λ`, and `r/sinh r` at `λ = 1`.
fn radial_closed_form() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for lambda in [0.5, 1.0] {
        let s = solve_regular(EigenParams::new(3, lambda)?, 10.0, 1e-12)?;
        let w = (1.0 - lambda).sqrt();
        for (&r, &u) in s.grid().iter().zip(s.values()) {
            let exact = if r == 0.0 {
                1.0
            } else if w == 0.0 {
                r / r.sinh()
            } else {
                (w * r).sinh() / (w * r.sinh())
            };
            worst = worst.max((u - exact).abs() / exact.abs());
        }
    }
    Ok((worst < 1e-8, format!("max relative error {worst:e}")))
}

fn horoball_residuals() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for n in [2, 3] {
        for frac in [0.0, 0.5, 1.0] {
            let p = EigenParams::new(n, frac * lambda1(n))?;
            for side in [HoroSide::InteriorHoroball, HoroSide::ExteriorHoroball] {
                let prof = HoroProfile::new(p, side, 1.0);
                for i in 0..200 {
                    let d = 20.0 * f64::from(i) / 199.0;
                    worst = worst.max(busemann_ode_residual(&prof, d)?);
                }
            }
        }
    }
    Ok((worst < 1e-12, format!("max relative residual {worst:e}")))
}

fn annulus_two_routes() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    let mut above = true;
    for b in [0.5, 1.0, 2.0] {
        let a = horoannulus_lambda1(2, b);
        let m = horoannulus_lambda1_numeric(2, b)?;
        worst = worst.max((a - m).abs());
        above &= m > lambda1(2);
    }
    Ok((worst < 1e-6 && above, format!("max difference {worst:e}")))
}

fn barrier_constants() -> Result<(bool, String)> {
    let mut ok = true;
    let mut detail = Vec::new();
    for n in [2, 3] {
        let k = estimate_barrier_constants(n)?;
        ok &= k.r0 > 1.0 && k.c > 0.0 && k.c0 >= k.c && k.d0 > 0.0;
        ok &= k.d1 > 0.0 && k.d1 <= k.d0 && k.d1 <= 0.5 / k.c0 + 1e-15;
        detail.push(format!("n={n}: r0={:.4} C0={:.4} d1={:.4}", k.r0, k.c0, k.d1));
    }
    Ok((ok, detail.join("; ")))
}

fn ball_spectrum() -> Result<(bool, String)> {
    let o = Point::origin(2);
    let mut prev = f64::INFINITY;
    let mut ok = true;
    let mut vals = Vec::new();
    for r in [1.0, 2.0, 3.0] {
        let g = build_grid(&DomainSpec::geodesic_ball(o.clone(), r)?, f64::INFINITY, &o, 0.03)?;
        let e = dirichlet_lambda1(&g, 1e-8)?;
        ok &= e.value < prev && e.value > 0.25;
        prev = e.value;
        vals.push(format!("{:.5}", e.value));
    }
    Ok((ok, format!("lambda1(B_1, B_2, B_3) = {}", vals.join(", "))))
}

/// Random data `v` and `u = v + positive bump` on a truncated horoball must
/// give `u > v` at every node.
fn comparison_pairs(seed: u64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dom = DomainSpec::horoball(IdealPoint::from_angle(0.3), -0.5)?;
    let g = Arc::new(build_grid(&dom, 1.5, &Point::origin(2), 0.04)?);
    let solver = DirichletSolver::new(g, 0.2)?;
    let pairs = 20;
    let mut failures = 0;
    for _ in 0..pairs {
        let c: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let gap = rng.gen_range(0.01..0.5);
        let data = |p: &Point| {
            let [x, y] = [p.coords()[0], p.coords()[1]];
            c[0] + c[1] * x + c[2] * y + c[3] * (4.0 * x * y).cos()
        };
        let v = solver.solve(data)?;
        let u = solver.solve(|p| data(p) + gap * (1.5 + p.coords()[0].sin()))?;
        if !comparison_check(&u, &v, true) {
            failures += 1;
        }
    }
    Ok((failures == 0, format!("{failures} of {pairs} pairs out of order")))
}

fn pipeline() -> Result<(bool, String)> {
    let rep = nonexistence_pipeline(2, 0.25, 2.0, 0.01)?;
    let ok = rep.iterations.iter().all(|it| it.passed)
        && rep.iterations.len() <= rep.iteration_bound
        && rep.certificate.lambda1_annulus > lambda1(2);
    Ok((
        ok,
        format!(
            "{} iterations (bound {}), final width {:.4}",
            rep.iterations.len(),
            rep.iteration_bound,
            rep.certificate.width
        ),
    ))
}

fn parabola() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for (n, lambda, r0, l, eps) in [(2, 0.25, 0.5, 1.0, 0.1), (3, 0.7, 1.2, 2.0, 0.3), (4, 2.0, 0.1, 0.5, 0.05)] {
        let b = ParabolaBarrier::new(n, lambda, Point::origin(2), r0, l, eps)?;
        let lhs = b.cp * (2.0 + f64::from(n - 1) * 2.0 * r0 / r0.tanh());
        worst = worst.max((lhs - lambda * (l - eps)).abs());
    }
    Ok((worst < 1e-12, format!("max |Cp factor - lambda (L - eps)| = {worst:e}")))
}

fn witness() -> Result<(bool, String)> {
    let xi = IdealPoint::new(vec![1.0, 0.0, 0.0])?;
    let ball = DomainSpec::horoball(xi.clone(), 0.0)?;
    let pts = tangential_sequence(&xi, &[0.0, 1.0, 0.0], &[1.0, 4.0], 12)?;
    let rep = nonextendability_witness(EigenParams::new(3, 1.0)?, &ball, &pts)?;
    Ok((
        rep.passed,
        format!(
            "oscillation {:.4} vs {:.4}, last point {:e} from xi",
            rep.oscillation, rep.threshold, rep.final_distance
        ),
    ))
}

/// `v₀` vanishes on the geodesic through the foot of the hyperball that is
/// orthogonal to its normal; that geodesic is the diameter orthogonal to the
/// normal translated along the normal by the offset.
fn hyperball_mirror() -> Result<(bool, String)> {
    let (theta, offset) = (0.4, 0.5);
    let data = HyperballData::new(&DomainSpec::hyperball_2d(theta, offset, Side::Positive)?, 0.25)?;
    let nu = [-(theta.sin()), theta.cos()];
    let t = (0.5 * offset).tanh();
    let mut worst = 0.0f64;
    for i in -20..=20 {
        let s = 0.95 * f64::from(i) / 20.0;
        // z -> (z + a) / (1 + conj(a) z) with a = t nu, applied to s * iv
        let z = [-s * nu[1], s * nu[0]];
        let a = [t * nu[0], t * nu[1]];
        let num = [z[0] + a[0], z[1] + a[1]];
        let den = [1.0 + a[0] * z[0] + a[1] * z[1], a[0] * z[1] - a[1] * z[0]];
        let q = den[0] * den[0] + den[1] * den[1];
        let w = [
            (num[0] * den[0] + num[1] * den[1]) / q,
            (num[1] * den[0] - num[0] * den[1]) / q,
        ];
        let p = Point::xy(w[0], w[1])?;
        worst = worst.max(data.v0(&p).abs());
    }
    let (p1, p2) = data.mirror_points();
    let ok = worst < 1e-10 && data.v0(&p1) > 0.0 && data.v0(&p2) == 0.0;
    Ok((ok, format!("max |v0| on the mirror geodesic {worst:e}")))
}
