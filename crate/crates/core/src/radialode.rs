//! Radial eigenfunctions: solutions of `w'' + (n-1) coth(r) w' + λ w = 0`.
//!
//! Three families are produced on sampled grids.
//!
//! * `Regular`: smooth at `r = 0`, `u(0) = 1`.
//! * `Singular`: the fastest-decaying solution, blowing up like `r^(2-n)`
//!   (or `-log r` in the plane) with leading coefficient 1.
//! * `Exterior`: the combination of the two vanishing on the sphere of
//!   radius `R`, positive outside, with supremum 1.
//!
//! Values between nodes come from quintic Hermite interpolation of the
//! stored value, slope and the curvature implied by the equation.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::ode::{self, Tolerances};
use crate::{Error, Result};

const LAUNCH_RADIUS: f64 = 1e-4;
const MIN_SINGULAR_RADIUS: f64 = 1e-8;
const GEOMETRIC_RATIO: f64 = 1.005;
const MAX_SPACING: f64 = 4e-3;
/// Largest radius at which the power series at the origin is trusted.
const SERIES_RADIUS: f64 = 0.25;

/// Dimension and eigenvalue of a radial problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenParams {
    n: u32,
    lambda: f64,
}

impl EigenParams {
    pub fn new(n: u32, lambda: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::arg(format!("dimension must be at least 2, got {n}")));
        }
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::arg(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        let l1 = crate::lambda1(n);
        if lambda > l1 {
            return Err(Error::arg(format!(
                "lambda = {lambda} exceeds the bottom of the spectrum {l1}"
            )));
        }
        Ok(EigenParams { n, lambda })
    }

    /// `λ = frac · (n-1)²/4`.
    pub fn from_fraction(n: u32, frac: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&frac) {
            return Err(Error::arg(format!(
                "lambda fraction {frac} is outside [0, 1]"
            )));
        }
        if n < 2 {
            return Err(Error::arg(format!("dimension must be at least 2, got {n}")));
        }
        EigenParams::new(n, frac * crate::lambda1(n))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda1(&self) -> f64 {
        crate::lambda1(self.n)
    }

    fn nm1(&self) -> f64 {
        f64::from(self.n) - 1.0
    }

    /// `w''` from the equation. At the origin the regular limit is used.
    pub fn second_derivative(&self, r: f64, u: f64, du: f64) -> f64 {
        if r == 0.0 {
            -self.lambda * u / f64::from(self.n)
        } else {
            -self.nm1() * du / r.tanh() - self.lambda * u
        }
    }

    /// `|w'' + (n-1) coth(r) w' + λ w|` and the sum of the magnitudes of
    /// the three terms.
    pub fn residual(&self, r: f64, u: f64, du: f64, d2u: f64) -> (f64, f64) {
        let t1 = self.nm1() * du / r.tanh();
        let t2 = self.lambda * u;
        ((d2u + t1 + t2).abs(), d2u.abs() + t1.abs() + t2.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialKind {
    Regular,
    Singular,
    Exterior { r: f64 },
}

/// A sampled radial profile.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    params: EigenParams,
    kind: RadialKind,
    grid: Vec<f64>,
    values: Vec<f64>,
    derivs: Vec<f64>,
    normalization: &'static str,
    /// For exterior profiles, the coefficients of the regular and singular
    /// solutions that reproduce it.
    coefficients: Option<(f64, f64)>,
}

impl RadialSolution {
    pub fn params(&self) -> EigenParams {
        self.params
    }

    pub fn kind(&self) -> RadialKind {
        self.kind
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivs(&self) -> &[f64] {
        &self.derivs
    }

    pub fn normalization(&self) -> &'static str {
        self.normalization
    }

    /// `(α, β)` with `ū = α u + β v` for exterior profiles.
    pub fn coefficients(&self) -> Option<(f64, f64)> {
        self.coefficients
    }

    pub fn r_min(&self) -> f64 {
        self.grid[0]
    }

    pub fn r_max(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Multiplies the profile by `c`.
    pub fn scaled(&self, c: f64) -> RadialSolution {
        let mut s = self.clone();
        s.values.iter_mut().for_each(|v| *v *= c);
        s.derivs.iter_mut().for_each(|v| *v *= c);
        s.coefficients = s.coefficients.map(|(a, b)| (a * c, b * c));
        s
    }

    fn d2(&self, i: usize) -> f64 {
        self.params
            .second_derivative(self.grid[i], self.values[i], self.derivs[i])
    }

    fn locate(&self, r: f64) -> Result<usize> {
        if !(r >= self.r_min() && r <= self.r_max()) {
            return Err(Error::arg(format!(
                "r = {r} is outside the sampled range [{}, {}]",
                self.r_min(),
                self.r_max()
            )));
        }
        let i = self.grid.partition_point(|&g| g <= r);
        Ok(i.saturating_sub(1).min(self.grid.len() - 2))
    }

    /// Interpolated value, slope and curvature at `r`.
    pub fn evaluate_full(&self, r: f64) -> Result<(f64, f64, f64)> {
        let i = self.locate(r)?;
        if r == self.grid[i] {
            return Ok((self.values[i], self.derivs[i], self.d2(i)));
        }
        if r == self.grid[i + 1] {
            return Ok((self.values[i + 1], self.derivs[i + 1], self.d2(i + 1)));
        }
        let h = self.grid[i + 1] - self.grid[i];
        let t = (r - self.grid[i]) / h;
        let left = [self.values[i], self.derivs[i], self.d2(i)];
        let right = [self.values[i + 1], self.derivs[i + 1], self.d2(i + 1)];
        Ok(quintic_hermite(left, right, h, t))
    }

    pub fn residual_at(&self, r: f64) -> Result<f64> {
        let (u, du, d2u) = self.evaluate_full(r)?;
        Ok(self.params.residual(r, u, du, d2u).0)
    }

    /// Largest equation residual at cell midpoints, relative to
    /// `max(sup|u|, local term size)`.
    pub fn max_midpoint_residual(&self) -> f64 {
        let scale = self.max_abs();
        let mut worst = 0.0f64;
        for w in self.grid.windows(2) {
            let r = 0.5 * (w[0] + w[1]);
            if let Ok((u, du, d2u)) = self.evaluate_full(r) {
                let (res, terms) = self.params.residual(r, u, du, d2u);
                let denom = match self.kind {
                    RadialKind::Singular => scale.max(terms),
                    _ => scale,
                };
                if denom > 0.0 {
                    worst = worst.max(res / denom);
                }
            }
        }
        worst
    }

    /// Checks the qualitative properties every profile of this kind must
    /// have.
    pub fn check_invariants(&self) -> Result<()> {
        let res = self.max_midpoint_residual();
        if !(res < 1e-8) {
            return Err(Error::invariant(format!(
                "interpolated residual {res:e} exceeds 1e-8"
            )));
        }
        match self.kind {
            RadialKind::Regular => {
                if self.params.lambda > 0.0 {
                    if let Some(i) = (1..self.len()).find(|&i| !(self.derivs[i] < 0.0)) {
                        return Err(Error::invariant(format!(
                            "regular profile has u' >= 0 at r = {}",
                            self.grid[i]
                        )));
                    }
                }
                if let Some(i) = (0..self.len()).find(|&i| !(self.values[i] > 0.0)) {
                    return Err(Error::invariant(format!(
                        "regular profile is not positive at r = {}",
                        self.grid[i]
                    )));
                }
            }
            RadialKind::Singular => {
                if let Some(i) = (0..self.len()).find(|&i| !(self.values[i] > 0.0)) {
                    return Err(Error::invariant(format!(
                        "singular profile is not positive at r = {}",
                        self.grid[i]
                    )));
                }
            }
            RadialKind::Exterior { .. } => {
                if self.values[0] != 0.0 {
                    return Err(Error::invariant("exterior profile does not vanish at R"));
                }
                if let Some(i) = (1..self.len()).find(|&i| !(self.values[i] > 0.0)) {
                    return Err(Error::invariant(format!(
                        "exterior profile is not positive at r = {}",
                        self.grid[i]
                    )));
                }
                find_peak(self)?;
            }
        }
        Ok(())
    }
}

/// Quintic Hermite interpolation on a cell of width `h` at relative position
/// `t`, given value, first and second derivative at both ends. Returns the
/// value and the first two derivatives.
pub(crate) fn quintic_hermite(y0: [f64; 3], y1: [f64; 3], h: f64, t: f64) -> (f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let basis = [
        1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
        t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
        0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5),
        10.0 * t3 - 15.0 * t4 + 6.0 * t5,
        -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
        0.5 * (t3 - 2.0 * t4 + t5),
    ];
    let d1 = [
        -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
        0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4),
        30.0 * t2 - 60.0 * t3 + 30.0 * t4,
        -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
        0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4),
    ];
    let d2 = [
        -60.0 * t + 180.0 * t2 - 120.0 * t3,
        -36.0 * t + 96.0 * t2 - 60.0 * t3,
        0.5 * (2.0 - 18.0 * t + 36.0 * t2 - 20.0 * t3),
        60.0 * t - 180.0 * t2 + 120.0 * t3,
        -24.0 * t + 84.0 * t2 - 60.0 * t3,
        0.5 * (6.0 * t - 24.0 * t2 + 20.0 * t3),
    ];
    let c = [
        y0[0],
        h * y0[1],
        h * h * y0[2],
        y1[0],
        h * y1[1],
        h * h * y1[2],
    ];
    let dot = |b: &[f64; 6]| b.iter().zip(&c).map(|(x, y)| x * y).sum::<f64>();
    (dot(&basis), dot(&d1) / h, dot(&d2) / (h * h))
}

/// Largest node spacing. Derivatives grow roughly like powers of `n - 1`,
/// so higher dimensions get finer grids.
fn max_spacing(params: EigenParams) -> f64 {
    MAX_SPACING * (3.0 / params.nm1()).min(1.0)
}

/// Nodes starting at `start`, spaced geometrically with ratio
/// `GEOMETRIC_RATIO` until the spacing reaches `dmax`, then uniformly,
/// ending exactly at `end`.
fn radial_nodes(start: f64, end: f64, dmax: f64) -> Vec<f64> {
    let mut nodes = alloc::vec![start];
    let mut r = start;
    loop {
        let step = (r * (GEOMETRIC_RATIO - 1.0)).min(dmax);
        if r + 1.5 * step >= end {
            nodes.push(end);
            break;
        }
        r += step;
        nodes.push(r);
    }
    nodes
}

/// Taylor coefficients of `r coth r` (even powers only).
fn r_coth_r_coeffs() -> [f64; 11] {
    // Bernoulli numbers B_0, B_2, ..., B_20
    const B: [f64; 11] = [
        1.0,
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
        7.0 / 6.0,
        -3617.0 / 510.0,
        43867.0 / 798.0,
        -174611.0 / 330.0,
    ];
    let mut g = [0.0; 11];
    let mut fact = 1.0;
    let mut pow4 = 1.0;
    for k in 0..11 {
        if k > 0 {
            fact *= (2 * k - 1) as f64 * (2 * k) as f64;
            pow4 *= 4.0;
        }
        g[k] = pow4 * B[k] / fact;
    }
    g
}

/// Regular solution and slope at small `r` from its power series at the
/// origin (`u(0) = 1`).
fn regular_series(params: EigenParams, r: f64) -> (f64, f64) {
    const TERMS: usize = 30;
    let g = r_coth_r_coeffs();
    let nm1 = params.nm1();
    let n = f64::from(params.n);
    let mut a = [0.0f64; TERMS + 1];
    a[0] = 1.0;
    for k in 1..=TERMS {
        let kk = 2 * k;
        let mut rhs = -params.lambda * a[k - 1];
        for j in 1..=k.min(10) {
            rhs -= nm1 * g[j] * (kk - 2 * j) as f64 * a[k - j];
        }
        a[k] = rhs / (kk as f64 * (kk as f64 + n - 2.0));
    }
    let r2 = r * r;
    let mut u = 0.0;
    let mut du = 0.0;
    let mut p = 1.0;
    for (k, ak) in a.iter().enumerate() {
        u += ak * p;
        if k > 0 {
            du += 2.0 * k as f64 * ak * p / r;
        }
        p *= r2;
    }
    (u, du)
}

fn validate_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::arg(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// The regular radial solution on `[0, r_max]`, normalized by `u(0) = 1`.
pub fn solve_regular(params: EigenParams, r_max: f64, tol: f64) -> Result<RadialSolution> {
    validate_tol(tol)?;
    if !(r_max > 2.0 * LAUNCH_RADIUS) || !r_max.is_finite() {
        return Err(Error::arg(format!(
            "r_max must exceed {}, got {r_max}",
            2.0 * LAUNCH_RADIUS
        )));
    }
    // Uniform nodes: the regular solution is smooth at the origin, and tiny
    // cells there would amplify rounding in the interpolated slope by coth r.
    let cells = (r_max / max_spacing(params)).ceil().max(1.0) as usize;
    let mut grid: Vec<f64> = (0..cells)
        .map(|k| k as f64 * r_max / cells as f64)
        .collect();
    grid.push(r_max);
    let (values, derivs) = if params.lambda == 0.0 {
        (alloc::vec![1.0; grid.len()], alloc::vec![0.0; grid.len()])
    } else {
        let (u0, du0) = regular_series(params, LAUNCH_RADIUS);
        let nm1 = params.nm1();
        let lambda = params.lambda;
        let states = ode::integrate(
            |r, y| [y[1], -nm1 * y[1] / r.tanh() - lambda * y[0]],
            LAUNCH_RADIUS,
            [u0, du0],
            &grid[1..],
            Tolerances::relative(tol),
        )?;
        let mut values = alloc::vec![1.0];
        let mut derivs = alloc::vec![0.0];
        for s in states {
            values.push(s[0]);
            derivs.push(s[1]);
        }
        (values, derivs)
    };
    Ok(RadialSolution {
        params,
        kind: RadialKind::Regular,
        grid,
        values,
        derivs,
        normalization: "u(0) = 1",
        coefficients: None,
    })
}

const GL8_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL8_W: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL8_X.iter().zip(&GL8_W) {
        s += w * (f(c - h * x) + f(c + h * x));
    }
    s * h
}

/// `∫_t^∞ sinh^{1-n}` for `t >= 1` by the binomial expansion of
/// `(1 - e^{-2s})^{1-n}`.
fn sinh_power_tail(n: u32, t: f64) -> f64 {
    let nm1 = f64::from(n) - 1.0;
    let q = (-2.0 * t).exp();
    let mut coeff = 1.0; // C(n-2+k, k)
    let mut qk = 1.0;
    let mut sum = 0.0;
    for k in 0..10_000u32 {
        let kf = f64::from(k);
        let term = coeff * qk / (nm1 + 2.0 * kf);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
        coeff *= (nm1 - 1.0 + kf + 1.0) / (kf + 1.0);
        qk *= q;
    }
    2.0.powf(nm1) * (-nm1 * t).exp() * sum
}

/// Constant making the singular solution's leading term exactly `r^{2-n}`
/// (or `-log r` when `n = 2`).
fn green_constant(n: u32) -> f64 {
    if n == 2 {
        1.0
    } else {
        f64::from(n) - 2.0
    }
}

/// The singular radial solution on `[r_min, r_max]`: the solution decaying
/// fastest at infinity, scaled so its blow-up at the origin has leading
/// coefficient 1.
pub fn solve_singular(
    params: EigenParams,
    r_min: f64,
    r_max: f64,
    tol: f64,
) -> Result<RadialSolution> {
    validate_tol(tol)?;
    if !(r_min >= MIN_SINGULAR_RADIUS) {
        return Err(Error::arg(format!(
            "r_min = {r_min} is below the launch limit {MIN_SINGULAR_RADIUS}"
        )));
    }
    if !(r_max > r_min) || !r_max.is_finite() {
        return Err(Error::arg(format!(
            "need r_min < r_max, got {r_min} and {r_max}"
        )));
    }
    let grid = radial_nodes(r_min, r_max, max_spacing(params));
    let n = params.n;
    let k = green_constant(n);
    let (values, derivs) = if params.lambda == 0.0 {
        let integrand = |t: f64| t.sinh().powf(1.0 - f64::from(n));
        let far = r_max.max(1.0);
        let mut acc = sinh_power_tail(n, far);
        let mut a = far;
        while a > r_max {
            let b = (a - 0.05).max(r_max);
            acc += gauss_legendre(integrand, b, a);
            a = b;
        }
        let mut values = alloc::vec![0.0; grid.len()];
        let last = grid.len() - 1;
        values[last] = k * acc;
        for i in (0..last).rev() {
            acc += gauss_legendre(integrand, grid[i], grid[i + 1]);
            values[i] = k * acc;
        }
        let derivs = grid.iter().map(|&r| -k * integrand(r)).collect();
        (values, derivs)
    } else {
        singular_by_backward_shooting(params, &grid, tol)?
    };
    Ok(RadialSolution {
        params,
        kind: RadialKind::Singular,
        grid,
        values,
        derivs,
        normalization: "leading coefficient of the blow-up at 0 equals 1",
        coefficients: None,
    })
}

/// Integrates `y = w sinh^m r` inward from far away, where the decaying
/// solution is `e^{-κ r}` to all orders that matter, then rescales using the
/// Wronskian against the regular series.
fn singular_by_backward_shooting(
    params: EigenParams,
    grid: &[f64],
    tol: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = 0.5 * params.nm1();
    let kappa = (params.lambda1() - params.lambda).max(0.0).sqrt();
    let qc = m * (m - 1.0);
    let r_max = grid[grid.len() - 1];
    let far = (r_max + 5.0).max(40.0);

    let mut targets: Vec<f64> = grid.iter().rev().copied().collect();
    let r_w = grid[0].min(SERIES_RADIUS);
    if r_w < grid[0] {
        targets.push(r_w);
    }
    let scale0 = (-kappa * (far - r_max)).exp();
    let states = ode::integrate(
        |r, y| {
            let s = r.sinh();
            [y[1], (kappa * kappa + qc / (s * s)) * y[0]]
        },
        far,
        [scale0, -kappa * scale0],
        &targets,
        Tolerances::relative(tol),
    )?;
    let to_w = |r: f64, y: &[f64; 2]| {
        let sm = r.sinh().powf(m);
        (y[0] / sm, (y[1] - m * y[0] / r.tanh()) / sm)
    };
    let (vw, dvw) = to_w(r_w, &states[states.len() - 1]);
    let (uw, duw) = regular_series(params, r_w);
    let wr = uw * dvw - duw * vw;
    let a = if params.n == 2 {
        -wr * r_w.sinh()
    } else {
        wr * r_w.sinh().powf(params.nm1()) / (2.0 - f64::from(params.n))
    };
    if !(a.is_finite() && a != 0.0) {
        return Err(Error::numerical("singular solution normalization failed"));
    }
    let mut values = alloc::vec![0.0; grid.len()];
    let mut derivs = alloc::vec![0.0; grid.len()];
    let last = grid.len() - 1;
    for (j, &r) in grid.iter().enumerate() {
        let (w, dw) = to_w(r, &states[last - j]);
        values[j] = w / a;
        derivs[j] = dw / a;
    }
    Ok((values, derivs))
}

/// The exterior profile `ū = α u + β v` vanishing at `R`, positive beyond,
/// with supremum 1. Sampled from `R` to the end of the grid of `u`.
pub fn exterior_combination(
    u: &RadialSolution,
    v: &RadialSolution,
    big_r: f64,
) -> Result<RadialSolution> {
    if u.kind != RadialKind::Regular || v.kind != RadialKind::Singular {
        return Err(Error::arg("need a regular and a singular solution"));
    }
    if u.params != v.params {
        return Err(Error::arg(
            "regular and singular solutions have different parameters",
        ));
    }
    let params = u.params;
    if params.lambda == 0.0 {
        return Err(Error::arg(
            "for lambda = 0 the exterior solution does not decay and has no peak",
        ));
    }
    if !(big_r > v.r_min() && big_r < u.r_max().min(v.r_max())) {
        return Err(Error::arg(format!("R = {big_r} is not inside both grids")));
    }
    let (u_r, du_r, _) = u.evaluate_full(big_r)?;
    let (v_r, dv_r, _) = v.evaluate_full(big_r)?;
    if u_r.abs() < 1e-300 && v_r.abs() < 1e-300 {
        return Err(Error::numerical("u(R) and v(R) both vanish"));
    }
    // slope of v(R) u - u(R) v at R is minus the Wronskian
    let slope = v_r * du_r - u_r * dv_r;

    // graded away from R, where the profile bends most sharply
    let end = u.r_max();
    let mut grid = alloc::vec![big_r];
    let dmax = max_spacing(params);
    let mut step = dmax / 16.0;
    let mut r = big_r;
    while r + 1.5 * step < end {
        r += step;
        grid.push(r);
        step = (step * 1.2).min(dmax);
    }
    grid.push(end);
    if grid.len() < 3 {
        return Err(Error::arg("R leaves too few nodes beyond it"));
    }
    let nm1 = params.nm1();
    let lambda = params.lambda;
    let states = ode::integrate(
        |r, y| [y[1], -nm1 * y[1] / r.tanh() - lambda * y[0]],
        big_r,
        [0.0, 1.0],
        &grid[1..],
        Tolerances::relative(1e-12),
    )?;
    let mut values = alloc::vec![0.0];
    let mut derivs = alloc::vec![1.0];
    for s in states {
        values.push(s[0]);
        derivs.push(s[1]);
    }
    let mut sol = RadialSolution {
        params,
        kind: RadialKind::Exterior { r: big_r },
        grid,
        values,
        derivs,
        normalization: "sup = 1",
        coefficients: None,
    };
    let peak = find_peak(&sol)?;
    let (top, _, _) = sol.evaluate_full(peak)?;
    if !(top > 0.0) {
        return Err(Error::numerical("exterior profile is not positive"));
    }
    sol = sol.scaled(1.0 / top);
    // the unit-slope profile equals (v(R) u - u(R) v) / slope
    let c = 1.0 / (slope * top);
    let (alpha, beta) = (v_r * c, -u_r * c);
    let cross_limit = v.r_max().min(sol.r_max());
    for (&r, &val) in sol.grid.iter().zip(&sol.values).step_by(25) {
        if r > cross_limit {
            break;
        }
        let combo = alpha * u.evaluate_full(r)?.0 + beta * v.evaluate_full(r)?.0;
        if (combo - val).abs() > 1e-6 {
            return Err(Error::numerical(format!(
                "exterior profile disagrees with α u + β v at r = {r} ({val} vs {combo})"
            )));
        }
    }
    sol.coefficients = Some((alpha, beta));
    Ok(sol)
}

/// The radius where an exterior profile peaks. The stored slope must change
/// sign exactly once.
pub fn find_peak(s: &RadialSolution) -> Result<f64> {
    if !matches!(s.kind, RadialKind::Exterior { .. }) {
        return Err(Error::arg("find_peak needs an exterior profile"));
    }
    let dmax = s.derivs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let floor = 1e-12 * dmax;
    let mut prev: Option<(usize, f64)> = None;
    let mut bracket = None;
    let mut changes = 0;
    for (i, &d) in s.derivs.iter().enumerate() {
        if d.abs() <= floor {
            continue;
        }
        if let Some((j, pd)) = prev {
            if pd.signum() != d.signum() {
                changes += 1;
                if bracket.is_none() {
                    bracket = Some((j, i));
                }
            }
        }
        prev = Some((i, d));
    }
    if changes != 1 {
        return Err(Error::invariant(format!(
            "exterior profile slope changes sign {changes} times, expected once"
        )));
    }
    let (i, j) = bracket.expect("one sign change was counted");
    let slope = |r: f64| s.evaluate_full(r).map(|t| t.1);
    let (mut a, mut b) = (s.grid[i], s.grid[j]);
    let mut fa = slope(a)?;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = slope(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Smallest `C` with `u(r) <= C r e^{-√λ r}` at the nodes in `[1, r_max]`,
/// and whether that bound holds throughout.
pub fn decay_fit(s: &RadialSolution) -> Result<(f64, bool)> {
    if matches!(s.kind, RadialKind::Singular) {
        return Err(Error::arg("decay_fit needs a regular or exterior profile"));
    }
    if s.params.lambda == 0.0 {
        return Err(Error::arg("no decay is claimed for lambda = 0"));
    }
    if s.r_max() < 10.0 {
        return Err(Error::arg(format!(
            "decay fit needs a grid reaching 10, this one stops at {}",
            s.r_max()
        )));
    }
    let k = s.params.lambda.sqrt();
    let envelope = |r: f64| r * (-k * r).exp();
    let mut c = evaluate(s, 1.0)? / envelope(1.0);
    for (&r, &u) in s.grid.iter().zip(&s.values) {
        if r >= 1.0 {
            c = c.max(u / envelope(r));
        }
    }
    let holds = c.is_finite()
        && s.grid
            .iter()
            .zip(&s.values)
            .filter(|(r, _)| **r >= 1.0)
            .all(|(&r, &u)| u <= c * envelope(r) * (1.0 + 1e-14));
    Ok((c, holds))
}

/// Profile value at `r` within the sampled range.
pub fn evaluate(s: &RadialSolution, r: f64) -> Result<f64> {
    s.evaluate_full(r).map(|t| t.0)
}
