//! End-to-end acceptance run. Prints one `criterion N: PASS|FAIL` line per
//! criterion and exits nonzero if any failed.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use hypeigen::io;
use hypeigen_core::barriers::{
    boundary_bound_check, estimate_barrier_constants, falsify_hovering, nonexistence_pipeline,
    nonextendability_witness, tangential_sequence,
};
use hypeigen_core::exhaust2d::{
    build_grid, comparison_check, dirichlet_lambda1, hyperball_exhaustion, solve_dirichlet,
    DirichletSolver,
};
use hypeigen_core::horofunc::{
    busemann_ode_residual, exterior_horoball_eigen, horoannulus_lambda1,
    horoannulus_lambda1_numeric, horoball_eigen, HoroProfile, HoroSide,
};
use hypeigen_core::hypgeom::{busemann_depth, Side};
use hypeigen_core::radialode::{
    evaluate, exterior_combination, solve_regular, solve_singular,
};
use hypeigen_core::{lambda1, DomainSpec, EigenParams, IdealPoint, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    format!("error: {err}")
}

/// Regular, singular and exterior radial solutions for `n = 3` against
/// `w = sinh(r) u`, which solves `w'' = (1 - λ) w`.
fn radial_closed_forms() -> Outcome {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    for lambda in [0.1, 0.5, 1.0] {
        let p = EigenParams::new(3, lambda).map_err(e)?;
        let w = (1.0 - lambda).sqrt();
        let reg = |r: f64| if w == 0.0 { r / r.sinh() } else { (w * r).sinh() / (w * r.sinh()) };
        let sing = |r: f64| (-w * r).exp() / r.sinh();
        let ext_shape = |r: f64| {
            if w == 0.0 {
                (r - 1.0) / r.sinh()
            } else {
                (w * (r - 1.0)).sinh() / (w * r.sinh())
            }
        };
        let u = solve_regular(p, 12.0, 1e-12).map_err(e)?;
        let v = solve_singular(p, 1e-3, 12.0, 1e-12).map_err(e)?;
        let ext = exterior_combination(&u, &v, 1.0).map_err(e)?;
        // the exterior profile has supremum 1
        let mut peak = 0.0f64;
        for i in 0..=200_000 {
            peak = peak.max(ext_shape(1.0 + 11.0 * f64::from(i) / 200_000.0));
        }
        for i in 0..=4000 {
            let r = 1e-3 * (1e4f64).powf(f64::from(i) / 4000.0);
            let a = evaluate(&u, r).map_err(e)?;
            worst[0] = worst[0].max((a / reg(r) - 1.0).abs());
            let b = evaluate(&v, r).map_err(e)?;
            worst[1] = worst[1].max((b / sing(r) - 1.0).abs());
            if r > 1.0 {
                // relative to the supremum: the profile vanishes at r = 1
                let c = evaluate(&ext, r).map_err(e)?;
                worst[2] = worst[2].max((c - ext_shape(r) / peak).abs());
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let max = worst.iter().cloned().fold(0.0, f64::max);
    ensure(
        max < 1e-8 && secs < 2.0,
        format!(
            "max rel err regular {:.2e}, singular {:.2e}, exterior {:.2e}; {secs:.2} s",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn horoball_closed_forms() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2, 3, 4] {
        for frac in [0.0, 0.5, 1.0] {
            let p = EigenParams::new(n, frac * lambda1(n)).map_err(e)?;
            for side in [HoroSide::InteriorHoroball, HoroSide::ExteriorHoroball] {
                let prof = HoroProfile::new(p, side, 1.0);
                for i in 0..1000 {
                    let d = 20.0 * f64::from(i) / 999.0;
                    worst = worst.max(busemann_ode_residual(&prof, d).map_err(e)?);
                }
            }
        }
    }
    let p = EigenParams::new(3, 1.0).map_err(e)?;
    let growth = horoball_eigen(p, 20.0, 1.0).map_err(e)? / horoball_eigen(p, 1.0, 1.0).map_err(e)?;
    let mut sup = 0.0f64;
    for i in 0..=4000 {
        sup = sup.max(exterior_horoball_eigen(p, 60.0 * f64::from(i) / 4000.0, 1.0).map_err(e)?.abs());
    }
    let tail = exterior_horoball_eigen(p, 60.0, 1.0).map_err(e)?;
    ensure(
        worst < 1e-12 && growth > 1e6 && sup.is_finite() && sup <= 1.0 && tail.abs() < 1e-20,
        format!("max residual {worst:.2e}; v(20)/v(1) = {growth:.3e}; exterior sup {sup:.4}, value at 60 {tail:.1e}"),
    )
}

fn ball_spectrum() -> Outcome {
    let start = Instant::now();
    let o = Point::origin(2);
    let mut lines = Vec::new();
    let mut ok = true;
    for h in [0.02, 0.01] {
        let mut prev = f64::INFINITY;
        let mut vals = Vec::new();
        for r in [1.0, 2.0, 3.0, 4.0] {
            let dom = DomainSpec::geodesic_ball(o.clone(), r).map_err(e)?;
            let g = build_grid(&dom, f64::INFINITY, &o, h).map_err(e)?;
            let v = dirichlet_lambda1(&g, 1e-8).map_err(e)?.value;
            ok &= v < prev && v > 0.25;
            prev = v;
            vals.push(format!("{v:.5}"));
        }
        lines.push(format!("h={h}: [{}]", vals.join(", ")));
    }
    // Euclidean radius tanh(0.05) ≈ 0.05 resolved by 50 cells
    let small = DomainSpec::geodesic_ball(o.clone(), 0.1).map_err(e)?;
    let g = build_grid(&small, f64::INFINITY, &o, 0.001).map_err(e)?;
    let scaled = dirichlet_lambda1(&g, 1e-8).map_err(e)?.value * 0.01;
    let j01_sq = 2.404_825_557_695_773f64.powi(2);
    let rel = (scaled / j01_sq - 1.0).abs();
    let secs = start.elapsed().as_secs_f64();
    ok &= rel < 0.02 && secs < 60.0;
    ensure(ok, format!("{}; 0.01 λ1(B_0.1) = {scaled:.4} ({:.2}% off); {secs:.1} s", lines.join("; "), 100.0 * rel))
}

fn annulus_routes() -> Outcome {
    let mut worst = 0.0f64;
    let mut above = true;
    for n in [2, 3] {
        for b in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let a = horoannulus_lambda1(n, b);
            let m = horoannulus_lambda1_numeric(n, b).map_err(e)?;
            worst = worst.max((a - m).abs());
            above &= a > lambda1(n) && m > lambda1(n);
        }
    }
    ensure(worst < 1e-6 && above, format!("max |analytic - numeric| = {worst:.2e}"))
}

/// Solutions on `A_{0,b} ∩ B_R(0)` vanishing on the shallow horosphere,
/// checked near it against the horoball `{depth > 0}`.
fn boundary_bound() -> Outcome {
    let k = estimate_barrier_constants(2).map_err(e)?;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = f64::NEG_INFINITY;
    let mut failed = 0;
    let mut checked = 0;
    for i in 0..20 {
        let lambda = [0.0, 0.125, 0.25][i % 3];
        let xi = IdealPoint::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
        let b = rng.gen_range(2.2..3.5);
        let level = -rng.gen_range(0.3..0.7) * b;
        let r = rng.gen_range(1.5..2.5);
        let amp = rng.gen_range(0.5..2.0);
        let hb = DomainSpec::horoball(xi.clone(), level).map_err(e)?;
        let ann = DomainSpec::horoannulus(xi, level, 0.0, b).map_err(e)?;
        let g = Arc::new(build_grid(&ann, r, &Point::origin(2), 0.01).map_err(e)?);
        let u = solve_dirichlet(&g, lambda, |p| {
            amp * (busemann_depth(p, &hb).expect("horoball depth") - k.d0).max(0.0)
        })
        .map_err(e)?;
        let c = boundary_bound_check(&u, &hb, &k).map_err(e)?;
        worst = worst.max(c.worst_excess);
        checked += c.checked;
        failed += usize::from(!c.passed || c.checked == 0);
    }
    ensure(
        failed == 0,
        format!("{failed} of 20 failed; {checked} nodes checked; worst excess {worst:.2e} (slack 1e-3)"),
    )
}

fn pipelines() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let mut lines = Vec::new();
    let mut ok = true;
    for d_bar in [1.5, 2.0, 3.0] {
        for lambda in [0.125, 0.25] {
            let rep = match nonexistence_pipeline(2, lambda, d_bar, 0.01) {
                Ok(r) => r,
                Err(err) => {
                    ok = false;
                    lines.push(format!("d_bar={d_bar} λ={lambda}: {err}"));
                    continue;
                }
            };
            let slack = 10.0 * 0.01 * 0.01;
            let steps_ok = rep
                .iterations
                .iter()
                .all(|it| it.passed && it.width <= it.d - it.delta + slack);
            let path = dir.path().join(format!("report_{d_bar}_{lambda}.json"));
            io::write_json(&path, &io::pipeline_records(&rep)).map_err(e)?;
            let text = std::fs::read_to_string(&path).map_err(e)?;
            let schema_ok = io::parse_pipeline_report(&text)
                .map(|recs| recs.len() == rep.iterations.len() + 1)
                .unwrap_or(false);
            let case_ok = steps_ok
                && rep.iterations.len() <= rep.iteration_bound
                && rep.certificate.lambda1_annulus > lambda1(2)
                && schema_ok;
            ok &= case_ok;
            lines.push(format!(
                "d_bar={d_bar} λ={lambda}: {} steps (bound {}), final width {:.3}{}",
                rep.iterations.len(),
                rep.iteration_bound,
                rep.certificate.width,
                if case_ok { "" } else { " FAILED" }
            ));
        }
    }
    ensure(ok, lines.join("; "))
}

fn hyperball() -> Outcome {
    let h = 0.01;
    let dom = DomainSpec::hyperball_2d(0.0, 0.5, Side::Positive).map_err(e)?;
    let rep = hyperball_exhaustion(&dom, 0.25, h, 1e-6).map_err(e)?;
    let mut problems = Vec::new();
    if !rep.converged || rep.steps.len() > 12 {
        problems.push(format!("not converged in {} steps", rep.steps.len()));
    }
    if let Some(s) = rep.sandwich_failure() {
        problems.push(format!("sandwich off by {:.2e} at N={}", s.sandwich_violation, s.radius));
    }
    if let Some(s) = rep.monotonicity_failure() {
        problems.push(format!(
            "u_N drops by {:.2e} at N={}",
            s.monotonicity_violation.unwrap_or(0.0),
            s.radius
        ));
    }
    let trace = rep.steps.iter().map(|s| s.boundary_trace).fold(0.0, f64::max);
    if trace >= 10.0 * h {
        problems.push(format!("boundary trace {trace:.2e}"));
    }
    let normal = FRAC_PI_2;
    let rays = rep
        .ray_checks(&[normal - FRAC_PI_4, normal, normal + FRAC_PI_4])
        .map_err(e)?;
    let reach = rays
        .iter()
        .map(|r| r.samples.last().map_or(0.0, |s| s.0))
        .fold(0.0, f64::max);
    for r in rays.iter().filter(|r| !r.passed) {
        problems.push(format!(
            "ray {:.3}: threshold T={:.1} beyond grid reach {reach:.1}",
            r.angle, r.threshold
        ));
    }
    let detail = format!(
        "{} truncations, saturated at N={}",
        rep.steps.len(),
        rep.steps.iter().find(|s| s.saturated).map_or(f64::NAN, |s| s.radius)
    );
    if problems.is_empty() {
        Ok(detail)
    } else {
        Err(format!("{detail}; {}", problems.join("; ")))
    }
}

fn parabola() -> Outcome {
    let dom = DomainSpec::hyperball_2d(0.0, 0.5, Side::Positive).map_err(e)?;
    let rep = hyperball_exhaustion(&dom, 0.25, 0.01, 1e-6).map_err(e)?;
    let mut centers = Vec::new();
    for rho in [2.2, 2.6, 3.0, 3.4] {
        for a in [-0.6, -0.3, 0.0, 0.3, 0.6] {
            let p = Point::along_ray(&IdealPoint::from_angle(FRAC_PI_2 + a), rho);
            if dom.level_fn(&p).map_err(e)? <= -1.5 && centers.len() < 10 {
                centers.push(p);
            }
        }
    }
    if centers.len() < 10 {
        return Err(format!("only {} deep centers", centers.len()));
    }
    let levels = [0.05, 0.1, 0.2, 0.5, 1.0, 2.0, -0.05, -0.5];
    let mut survivors = 0;
    for p in &centers {
        for &l in &levels {
            let v = falsify_hovering(&rep.field, p, 1.0, l, 0.25).map_err(e)?;
            survivors += usize::from(!v.falsified);
        }
    }
    ensure(
        survivors == 0,
        format!("{} of {} (center, level) pairs falsified", centers.len() * levels.len() - survivors, centers.len() * levels.len()),
    )
}

fn witness() -> Outcome {
    let p = EigenParams::new(3, 1.0).map_err(e)?;
    let xi = IdealPoint::new(vec![0.0, 0.0, 1.0]).map_err(e)?;
    let ball = DomainSpec::horoball(xi.clone(), 0.0).map_err(e)?;
    let pts = tangential_sequence(&xi, &[1.0, 0.0, 0.0], &[1.0, 4.0], 12).map_err(e)?;
    let rep = nonextendability_witness(p, &ball, &pts).map_err(e)?;
    // toward a point at infinity other than xi
    let eta = IdealPoint::new(vec![1.0, 0.0, 0.0]).map_err(e)?;
    let mut last = f64::NAN;
    for t in [2.0, 5.0, 10.0, 15.0, 20.0] {
        let q = Point::along_ray(&eta, t);
        let d = -busemann_depth(&q, &ball).map_err(e)?;
        last = exterior_horoball_eigen(p, d, 1.0).map_err(e)?;
    }
    ensure(
        rep.passed && last < 1e-3,
        format!(
            "oscillation {:.4} vs ½ sup {:.4}, end {:.1e} from xi; radial value at t=20 {last:.2e}",
            rep.oscillation, rep.threshold, rep.final_distance
        ),
    )
}

fn comparison() -> Outcome {
    let h = 0.025;
    let o = Point::origin(2);
    let shapes = [
        ("ball", DomainSpec::geodesic_ball(Point::xy(0.1, 0.2).map_err(e)?, 1.5).map_err(e)?, f64::INFINITY),
        ("horoball", DomainSpec::horoball(IdealPoint::from_angle(0.7), -0.4).map_err(e)?, 2.0),
        ("hyperball", DomainSpec::hyperball_2d(0.3, 0.4, Side::Positive).map_err(e)?, 2.0),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures = 0;
    let mut max_violation = 0.0f64;
    let mut total = 0;
    for (_, dom, r) in &shapes {
        let g = Arc::new(build_grid(dom, *r, &o, h).map_err(e)?);
        for lambda in [0.0, 0.1, 0.24] {
            let s = DirichletSolver::new(g.clone(), lambda).map_err(e)?;
            for _ in 0..200 {
                let c: [f64; 5] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
                let gap = rng.gen_range(0.01..1.0);
                let f = rng.gen_range(1.0..5.0);
                let data = |p: &Point| {
                    let [x, y] = [p.coords()[0], p.coords()[1]];
                    c[0] + c[1] * x + c[2] * y + c[3] * (f * x * y).sin() + c[4] * (f * x).cos()
                };
                let v = s.solve(data).map_err(e)?;
                let u = s.solve(|p| data(p) + gap * (1.0 + 0.9 * (f * p.coords()[1]).sin())).map_err(e)?;
                total += 1;
                if !comparison_check(&u, &v, true) {
                    failures += 1;
                }
                if lambda == 0.0 {
                    let lo = v.boundary_values.iter().cloned().fold(f64::INFINITY, f64::min);
                    let hi = v.boundary_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    for &x in &v.values {
                        max_violation = max_violation.max(lo - x).max(x - hi);
                    }
                }
            }
        }
    }
    // the linear solve stops at relative residual 1e-11
    ensure(
        failures == 0 && max_violation <= 1e-9,
        format!("{failures} of {total} pairs out of order; max principle excess {max_violation:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 10] = [
        (1, radial_closed_forms),
        (2, horoball_closed_forms),
        (3, ball_spectrum),
        (4, annulus_routes),
        (5, boundary_bound),
        (6, pipelines),
        (7, hyperball),
        (8, parabola),
        (9, witness),
        (10, comparison),
    ];
    let filter: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = Vec::new();
    for (n, run) in criteria {
        if !filter.is_empty() && !filter.contains(&n) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {n}: PASS ({secs:.1} s) {d}"),
            Err(d) => {
                println!("criterion {n}: FAIL ({secs:.1} s) {d}");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
