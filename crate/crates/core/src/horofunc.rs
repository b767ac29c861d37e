//! Eigenfunctions that depend only on the Busemann depth `d`.
//!
//! Inside a horoball the Laplacian of `f(d)` is `f'' - (n-1) f'`, outside it
//! is `f'' + (n-1) f'`. With `μ = √((n-1)² - 4λ)` the solutions vanishing
//! at `d = 0` are
//!
//! * inside: `C e^{(n-1)d/2} (e^{μd/2} - e^{-μd/2})`, or `C d e^{(n-1)d/2}` at `λ = λ₁`,
//! * outside: the same with `e^{-(n-1)d/2}`.

use alloc::format;
use num_traits::Float;

use crate::linalg;
use crate::radialode::EigenParams;
use crate::{Error, Result};

/// Below this value of `μ d` the difference of exponentials is replaced by
/// its first-order term.
const DEGENERATE_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoroSide {
    InteriorHoroball,
    ExteriorHoroball,
}

/// `C · f(d)` for one side of a horosphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HoroProfile {
    pub params: EigenParams,
    pub side: HoroSide,
    pub amplitude: f64,
}

impl HoroProfile {
    pub fn new(params: EigenParams, side: HoroSide, amplitude: f64) -> Self {
        HoroProfile {
            params,
            side,
            amplitude,
        }
    }

    fn drift(&self) -> f64 {
        let a = f64::from(self.params.n()) - 1.0;
        match self.side {
            HoroSide::InteriorHoroball => a,
            HoroSide::ExteriorHoroball => -a,
        }
    }

    fn mu(&self) -> f64 {
        let a = f64::from(self.params.n()) - 1.0;
        (a * a - 4.0 * self.params.lambda()).max(0.0).sqrt()
    }

    pub fn value(&self, d: f64) -> Result<f64> {
        check_depth(d)?;
        let s = 0.5 * self.drift();
        let mu = self.mu();
        let c = self.amplitude;
        if self.params.lambda() == self.params.lambda1() {
            return Ok(c * d * (s * d).exp());
        }
        if mu * d < DEGENERATE_THRESHOLD {
            return Ok(c * mu * d * (s * d).exp());
        }
        // e^{μd/2} - e^{-μd/2}, written to keep full precision for small μd
        let diff = (-0.5 * mu * d).exp() * (mu * d).exp_m1();
        Ok(c * (s * d).exp() * diff)
    }

    /// First and second derivatives in `d`.
    pub fn derivatives(&self, d: f64) -> Result<(f64, f64)> {
        check_depth(d)?;
        let s = 0.5 * self.drift();
        let c = self.amplitude * (s * d).exp();
        if self.params.lambda() == self.params.lambda1() {
            return Ok((c * (1.0 + s * d), c * (2.0 * s + s * s * d)));
        }
        let mu = self.mu();
        let half = 0.5 * mu * d;
        if half > 0.5 {
            // v = A (e^{s1 d} - e^{s2 d}); the sinh form cancels when s ≈ -μ/2
            let (s1, s2) = (s + 0.5 * mu, s - 0.5 * mu);
            let (e1, e2) = ((s1 * d).exp(), (s2 * d).exp());
            let a = self.amplitude;
            return Ok((
                a * (s1 * e1 - s2 * e2),
                a * (s1 * s1 * e1 - s2 * s2 * e2),
            ));
        }
        let sh2 = 2.0 * half.sinh();
        let ch = half.cosh();
        let d1 = c * (s * sh2 + mu * ch);
        let d2 = c * ((s * s + 0.25 * mu * mu) * sh2 + 2.0 * s * mu * ch);
        Ok((d1, d2))
    }
}

fn check_depth(d: f64) -> Result<()> {
    if !(d >= 0.0) || !d.is_finite() {
        return Err(Error::arg(format!(
            "depth must be finite and >= 0, got {d}"
        )));
    }
    Ok(())
}

/// The horoball eigenfunction `v(d)`, unbounded as `d → ∞`.
pub fn horoball_eigen(params: EigenParams, d: f64, c: f64) -> Result<f64> {
    HoroProfile::new(params, HoroSide::InteriorHoroball, c).value(d)
}

/// The bounded eigenfunction of the complement of a horoball, `d` measured
/// outward from the horosphere.
pub fn exterior_horoball_eigen(params: EigenParams, d: f64, c: f64) -> Result<f64> {
    HoroProfile::new(params, HoroSide::ExteriorHoroball, c).value(d)
}

/// Where the exterior profile peaks, or `None` when it increases forever
/// (`λ = 0`).
pub fn exterior_peak_depth(params: EigenParams) -> Option<f64> {
    let a = f64::from(params.n()) - 1.0;
    let lambda = params.lambda();
    if lambda == 0.0 {
        return None;
    }
    if lambda == params.lambda1() {
        return Some(2.0 / a);
    }
    // zero of s1 e^{s1 d} - s2 e^{s2 d} with s1,2 = (-a ± μ)/2
    let mu = (a * a - 4.0 * lambda).sqrt();
    let s1 = 0.5 * (-a + mu);
    let s2 = 0.5 * (-a - mu);
    Some((s2 / s1).ln() / (s1 - s2))
}

/// Residual of the Busemann-coordinate equation at `d`, relative to the sum
/// of the magnitudes of its three terms.
pub fn busemann_ode_residual(profile: &HoroProfile, d: f64) -> Result<f64> {
    let v = profile.value(d)?;
    let (d1, d2) = profile.derivatives(d)?;
    let drift = profile.drift();
    let lambda = profile.params.lambda();
    let r = d2 - drift * d1 + lambda * v;
    let scale = d2.abs() + (drift * d1).abs() + (lambda * v).abs();
    Ok(if scale == 0.0 {
        r.abs()
    } else {
        r.abs() / scale
    })
}

/// First Dirichlet eigenvalue of `-w'' + (n-1) w'` on `[0, b]`:
/// `(n-1)²/4 + π²/b²`.
pub fn horoannulus_lambda1(n: u32, b: f64) -> f64 {
    crate::lambda1(n) + core::f64::consts::PI.powi(2) / (b * b)
}

/// The same eigenvalue from centered finite differences: the tridiagonal
/// matrix is symmetrized, its lowest eigenvalue found by Sturm bisection,
/// and three mesh sizes are combined by Richardson extrapolation.
pub fn horoannulus_lambda1_numeric(n: u32, b: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::arg(format!("dimension must be at least 2, got {n}")));
    }
    if !(b > 0.0) || !b.is_finite() {
        return Err(Error::arg(format!("width must be positive, got {b}")));
    }
    let a = f64::from(n) - 1.0;
    let base = 500usize.max((a * b).ceil() as usize * 4);
    let mut est = [0.0f64; 3];
    for (level, e) in est.iter_mut().enumerate() {
        let cells = base << level;
        let h = b / cells as f64;
        let lower = -1.0 / (h * h) - a / (2.0 * h);
        let upper = -1.0 / (h * h) + a / (2.0 * h);
        let off = -(lower * upper).sqrt();
        let m = cells - 1;
        let diag = alloc::vec![2.0 / (h * h); m];
        let offd = alloc::vec![off; m - 1];
        *e = linalg::tridiagonal_lowest_eigenvalue(&diag, &offd)?;
    }
    let r1 = [(4.0 * est[1] - est[0]) / 3.0, (4.0 * est[2] - est[1]) / 3.0];
    Ok((16.0 * r1[1] - r1[0]) / 15.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u32, l: f64) -> EigenParams {
        EigenParams::new(n, l).unwrap()
    }

    #[test]
    fn interior_examples() {
        let v = horoball_eigen(p(2, 0.25), 1.0, 1.0).unwrap();
        assert!((v - 0.5f64.exp()).abs() < 1e-15);
        assert!((v - 1.648721).abs() < 1e-6);
        let v = horoball_eigen(p(2, 0.0), 1.0, 1.0).unwrap();
        assert!((v - (1.0f64.exp() - 1.0)).abs() < 1e-14);
        assert_eq!(horoball_eigen(p(3, 0.4), 0.0, 2.0).unwrap(), 0.0);
        assert!(horoball_eigen(p(3, 0.4), -1.0, 2.0)
            .unwrap_err()
            .is_argument());
    }

    #[test]
    fn exterior_examples() {
        let u = exterior_horoball_eigen(p(3, 1.0), 2.0, 1.0).unwrap();
        assert!((u - 2.0 * (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(exterior_horoball_eigen(p(4, 1.0), 0.0, 1.0).unwrap(), 0.0);
        assert_eq!(exterior_peak_depth(p(2, 0.25)), Some(2.0));
        let par = p(3, 0.6);
        let d = exterior_peak_depth(par).unwrap();
        let prof = HoroProfile::new(par, HoroSide::ExteriorHoroball, 1.0);
        assert!(prof.derivatives(d).unwrap().0.abs() < 1e-13);
    }

    #[test]
    fn sinh_rewrite_agrees() {
        for (n, l) in [(2u32, 0.1), (3, 0.5), (4, 0.0), (3, 0.999_999)] {
            let par = p(n, l);
            let a = f64::from(n) - 1.0;
            let mu = (a * a - 4.0 * l).sqrt();
            for d in [1e-6, 0.3, 2.0, 9.0] {
                let v = horoball_eigen(par, d, 1.3).unwrap();
                let w = 1.3 * 2.0 * (a * d / 2.0).exp() * (mu * d / 2.0).sinh();
                assert!((v / w - 1.0).abs() < 1e-13, "n={n} l={l} d={d}");
            }
        }
    }

    #[test]
    fn degenerate_branch_is_continuous() {
        // largest double below 1, so μ = 2√(1 - λ) ≈ 2.1e-8
        let lambda = 1.0 - f64::EPSILON / 2.0;
        let par = p(3, lambda);
        let mu = (4.0 - 4.0 * lambda).sqrt();
        let d = 0.1;
        assert!(mu * d < DEGENERATE_THRESHOLD);
        let v = horoball_eigen(par, d, 1.0).unwrap();
        let w = 2.0 * d.exp() * (mu * d / 2.0).sinh();
        assert!((v / w - 1.0).abs() < 1e-12);
        let beyond = horoball_eigen(par, 1.0, 1.0).unwrap();
        assert!((beyond / (2.0 * 1.0f64.exp() * (mu / 2.0).sinh()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn residual_examples() {
        let cases = [
            (HoroSide::InteriorHoroball, 2, 0.25, 1.0),
            (HoroSide::ExteriorHoroball, 3, 1.0, 3.0),
            (HoroSide::InteriorHoroball, 2, 0.1, 0.5),
        ];
        for (side, n, l, d) in cases {
            let prof = HoroProfile::new(p(n, l), side, 1.0);
            assert!(busemann_ode_residual(&prof, d).unwrap() < 1e-12);
        }
    }

    #[test]
    fn annulus_formula_and_numeric() {
        let v = horoannulus_lambda1(2, 1.0);
        assert!((v - 10.119604).abs() < 1e-6);
        let num = horoannulus_lambda1_numeric(2, 1.0).unwrap();
        assert!((num - v).abs() < 1e-6, "{num} vs {v}");
        assert!(horoannulus_lambda1(3, 1e6) > 1.0);
        assert!((horoannulus_lambda1(3, 1e6) - 1.0) < 1e-10);
    }
}
