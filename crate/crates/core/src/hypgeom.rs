//! Poincaré-ball model of `H^n`: points, distances, Busemann depths and the
//! model domains.
//!
//! Everything lives in one chart, the open unit ball. Horoballs are tangent
//! Euclidean balls, hyperballs are bounded by equidistant hypersurfaces of a
//! totally geodesic hyperplane through the origin.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

/// A point of the open unit ball.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::arg("points need dimension at least 2"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::arg("non-finite coordinate"));
        }
        let ns = norm_sq(&coords);
        if ns >= 1.0 {
            return Err(Error::arg(format!(
                "Euclidean norm {} is not inside the unit ball",
                ns.sqrt()
            )));
        }
        Ok(Point { coords })
    }

    pub fn xy(x: f64, y: f64) -> Result<Self> {
        Point::new(alloc::vec![x, y])
    }

    pub fn origin(dim: usize) -> Self {
        Point {
            coords: alloc::vec![0.0; dim.max(2)],
        }
    }

    /// The point at hyperbolic distance `t >= 0` from the origin on the ray
    /// toward `direction`.
    pub fn along_ray(direction: &IdealPoint, t: f64) -> Self {
        let s = (t / 2.0).tanh();
        Point {
            coords: direction.direction.iter().map(|d| s * d).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.coords)
    }

    pub(crate) fn xy_pair(&self) -> [f64; 2] {
        [self.coords[0], self.coords[1]]
    }
}

/// A point of the sphere at infinity.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealPoint {
    direction: Vec<f64>,
}

impl IdealPoint {
    pub fn new(direction: Vec<f64>) -> Result<Self> {
        if direction.len() < 2 {
            return Err(Error::arg("ideal points need dimension at least 2"));
        }
        let n = norm_sq(&direction).sqrt();
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::arg(format!("direction has norm {n}, expected 1")));
        }
        Ok(IdealPoint { direction })
    }

    /// Normalizes `v` onto the unit sphere.
    pub fn from_vector(v: Vec<f64>) -> Result<Self> {
        let n = norm_sq(&v).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::arg("cannot normalize a zero vector"));
        }
        IdealPoint::new(v.into_iter().map(|c| c / n).collect())
    }

    pub fn from_angle(theta: f64) -> Self {
        IdealPoint {
            direction: alloc::vec![theta.cos(), theta.sin()],
        }
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }
}

/// Which side of an equidistant hypersurface a hyperball occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Signed distance to the axis hyperplane (measured along the normal)
    /// exceeds the offset.
    Positive,
    /// Signed distance is below minus the offset.
    Negative,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Positive => 1.0,
            Side::Negative => -1.0,
        }
    }
}

/// The model domains. Construct with the associated functions, which
/// validate their arguments.
#[derive(Debug, Clone, PartialEq)]
pub enum DomainSpec {
    GeodesicBall {
        center: Point,
        radius: f64,
    },
    ExteriorBall {
        center: Point,
        radius: f64,
    },
    /// `{busemann_raw(p, xi) > level}`. Level 0 passes through the origin.
    Horoball {
        xi: IdealPoint,
        level: f64,
    },
    ExteriorHoroball {
        xi: IdealPoint,
        level: f64,
    },
    /// Points whose depth below the horosphere `{busemann_raw = level}` lies
    /// strictly between `a` and `b`.
    Horoannulus {
        xi: IdealPoint,
        level: f64,
        a: f64,
        b: f64,
    },
    /// A component of the complement of the hypersurface at distance
    /// `offset` from the totally geodesic hyperplane through the origin
    /// orthogonal to `normal`. In the disk the hyperplane is a diameter.
    Hyperball {
        normal: IdealPoint,
        offset: f64,
        side: Side,
    },
}

impl DomainSpec {
    pub fn geodesic_ball(center: Point, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(DomainSpec::GeodesicBall { center, radius })
    }

    pub fn exterior_ball(center: Point, radius: f64) -> Result<Self> {
        check_radius(radius)?;
        Ok(DomainSpec::ExteriorBall { center, radius })
    }

    pub fn horoball(xi: IdealPoint, level: f64) -> Result<Self> {
        check_finite(level, "level")?;
        Ok(DomainSpec::Horoball { xi, level })
    }

    pub fn exterior_horoball(xi: IdealPoint, level: f64) -> Result<Self> {
        check_finite(level, "level")?;
        Ok(DomainSpec::ExteriorHoroball { xi, level })
    }

    pub fn horoannulus(xi: IdealPoint, level: f64, a: f64, b: f64) -> Result<Self> {
        check_finite(level, "level")?;
        check_finite(a, "a")?;
        check_finite(b, "b")?;
        if !(b - a > 0.0) {
            return Err(Error::arg(format!(
                "horoannulus needs a < b, got a={a}, b={b}"
            )));
        }
        Ok(DomainSpec::Horoannulus { xi, level, a, b })
    }

    pub fn hyperball(normal: IdealPoint, offset: f64, side: Side) -> Result<Self> {
        check_finite(offset, "offset")?;
        if offset < 0.0 {
            return Err(Error::arg("hyperball offset must be nonnegative"));
        }
        Ok(DomainSpec::Hyperball {
            normal,
            offset,
            side,
        })
    }

    /// Half-disk above (`Positive`) or below the diameter at angle `theta`
    /// in the Poincaré disk, pushed out by `offset`.
    pub fn hyperball_2d(theta: f64, offset: f64, side: Side) -> Result<Self> {
        let normal = IdealPoint::from_angle(theta + core::f64::consts::FRAC_PI_2);
        DomainSpec::hyperball(normal, offset, side)
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::GeodesicBall { center, .. } | DomainSpec::ExteriorBall { center, .. } => {
                center.dim()
            }
            DomainSpec::Horoball { xi, .. }
            | DomainSpec::ExteriorHoroball { xi, .. }
            | DomainSpec::Horoannulus { xi, .. } => xi.dim(),
            DomainSpec::Hyperball { normal, .. } => normal.dim(),
        }
    }

    /// Level-set function: negative exactly inside the domain. Its magnitude
    /// is the hyperbolic distance to the boundary for every variant.
    pub fn level_fn(&self, p: &Point) -> Result<f64> {
        check_dims(self.dim(), p.dim())?;
        Ok(self.level_raw(p.coords()))
    }

    /// `level_fn` on raw coordinates of matching dimension inside the ball.
    pub(crate) fn level_raw(&self, p: &[f64]) -> f64 {
        match self {
            DomainSpec::GeodesicBall { center, radius } => dist_raw(p, center.coords()) - radius,
            DomainSpec::ExteriorBall { center, radius } => radius - dist_raw(p, center.coords()),
            DomainSpec::Horoball { xi, level } => level - busemann_raw_slice(p, xi.direction()),
            DomainSpec::ExteriorHoroball { xi, level } => {
                busemann_raw_slice(p, xi.direction()) - level
            }
            DomainSpec::Horoannulus { xi, level, a, b } => {
                let d = busemann_raw_slice(p, xi.direction()) - level;
                (a - d).max(d - b)
            }
            DomainSpec::Hyperball {
                normal,
                offset,
                side,
            } => offset - side.sign() * signed_distance_raw(p, normal.direction()),
        }
    }

    /// Busemann depth for horoball-family domains on raw coordinates.
    pub(crate) fn depth_raw(&self, p: &[f64]) -> Option<f64> {
        match self {
            DomainSpec::Horoball { xi, level }
            | DomainSpec::ExteriorHoroball { xi, level }
            | DomainSpec::Horoannulus { xi, level, .. } => {
                Some(busemann_raw_slice(p, xi.direction()) - level)
            }
            _ => None,
        }
    }
}

fn check_radius(radius: f64) -> Result<()> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::arg(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}

fn check_finite(v: f64, name: &str) -> Result<()> {
    if !v.is_finite() {
        return Err(Error::arg(format!("{name} must be finite")));
    }
    Ok(())
}

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn norm_sq(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum()
}

fn diff_sq(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

/// `acosh(1 + x)` without cancellation for small `x`.
pub(crate) fn acosh1p(x: f64) -> f64 {
    (x + (x * (x + 2.0)).sqrt()).ln_1p()
}

/// Hyperbolic distance between two points of the same dimension.
pub fn dist(p: &Point, q: &Point) -> Result<f64> {
    check_dims(p.dim(), q.dim())?;
    Ok(dist_raw(p.coords(), q.coords()))
}

pub(crate) fn dist_raw(p: &[f64], q: &[f64]) -> f64 {
    let num = 2.0 * diff_sq(p, q);
    let den = (1.0 - norm_sq(p)) * (1.0 - norm_sq(q));
    acosh1p(num / den)
}

/// Busemann function of `xi` normalized to vanish at the origin, with the
/// sign chosen positive toward `xi`: `log((1 - |p|^2) / |p - xi|^2)`.
pub fn busemann_raw(p: &Point, xi: &IdealPoint) -> f64 {
    busemann_raw_slice(p.coords(), xi.direction())
}

pub(crate) fn busemann_raw_slice(p: &[f64], xi: &[f64]) -> f64 {
    ((1.0 - norm_sq(p)) / diff_sq(p, xi)).ln()
}

/// Signed distance from `p` to the bounding horosphere of a horoball-family
/// domain, positive inside the horoball.
pub fn busemann_depth(p: &Point, domain: &DomainSpec) -> Result<f64> {
    match domain {
        DomainSpec::Horoball { xi, level }
        | DomainSpec::ExteriorHoroball { xi, level }
        | DomainSpec::Horoannulus { xi, level, .. } => {
            check_dims(xi.dim(), p.dim())?;
            Ok(busemann_raw(p, xi) - level)
        }
        _ => Err(Error::arg("busemann_depth needs a horoball-family domain")),
    }
}

/// Signed hyperbolic distance to the totally geodesic hyperplane through the
/// origin orthogonal to `normal`, positive on the side `normal` points to.
pub fn hyperplane_signed_distance(p: &Point, normal: &IdealPoint) -> f64 {
    signed_distance_raw(p.coords(), normal.direction())
}

pub(crate) fn signed_distance_raw(p: &[f64], normal: &[f64]) -> f64 {
    let dot: f64 = p.iter().zip(normal).map(|(a, b)| a * b).sum();
    (2.0 * dot / (1.0 - norm_sq(p))).asinh()
}

/// Membership by the defining inequality; points of the wrong dimension are
/// never contained.
pub fn contains(domain: &DomainSpec, p: &Point) -> bool {
    matches!(domain.level_fn(p), Ok(v) if v < 0.0)
}

/// Hyperbolic distance from an interior point to the boundary.
pub fn dist_to_boundary(p: &Point, domain: &DomainSpec) -> Result<f64> {
    let v = domain.level_fn(p)?;
    if v >= 0.0 {
        return Err(Error::OutsideDomain(format!(
            "point {:?} is not inside the domain",
            p.coords()
        )));
    }
    Ok(-v)
}

/// Point on the horosphere `{busemann_raw = c}` of `xi`, at angle `phi`
/// around its Euclidean center measured from `xi` toward the unit vector
/// `e` (orthogonal to `xi`). `phi -> 0` approaches `xi`.
pub fn horosphere_point(xi: &IdealPoint, e: &[f64], c: f64, phi: f64) -> Result<Point> {
    check_dims(xi.dim(), e.len())?;
    let rho = 1.0 / (1.0 + c.exp());
    let coords = xi
        .direction()
        .iter()
        .zip(e)
        .map(|(x, ev)| (1.0 - rho) * x + rho * (phi.cos() * x + phi.sin() * ev))
        .collect();
    Point::new(coords)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Poincaré-disk isometry `z -> (z - a) / (1 - conj(a) z)`, moving `a` to 0.
    fn mobius_to_origin(a: [f64; 2], z: [f64; 2]) -> [f64; 2] {
        let num = [z[0] - a[0], z[1] - a[1]];
        // 1 - conj(a) z
        let den = [
            1.0 - (a[0] * z[0] + a[1] * z[1]),
            -(a[0] * z[1] - a[1] * z[0]),
        ];
        let dd = den[0] * den[0] + den[1] * den[1];
        [
            (num[0] * den[0] + num[1] * den[1]) / dd,
            (num[1] * den[0] - num[0] * den[1]) / dd,
        ]
    }
    use alloc::vec;

    #[test]
    fn distance_examples() {
        let o = Point::origin(2);
        assert_eq!(dist(&o, &o).unwrap(), 0.0);
        let p = Point::xy(0.5, 0.0).unwrap();
        let d = dist(&o, &p).unwrap();
        assert!((d - 2.0 * 0.5f64.atanh()).abs() < 1e-14);
        assert!((d - 1.098612).abs() < 1e-6);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = Point::origin(2);
        let q = Point::origin(3);
        assert_eq!(
            dist(&p, &q),
            Err(Error::DimensionMismatch {
                expected: 2,
                found: 3
            })
        );
    }

    #[test]
    fn points_outside_ball_rejected() {
        assert!(Point::xy(1.0, 0.0).is_err());
        assert!(Point::new(vec![0.1]).is_err());
        assert!(IdealPoint::new(vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn busemann_depth_on_ray_and_origin() {
        let xi = IdealPoint::from_angle(0.3);
        let b = DomainSpec::horoball(xi.clone(), 0.0).unwrap();
        assert!(busemann_depth(&Point::origin(2), &b).unwrap().abs() < 1e-15);
        for t in [0.1, 1.0, 3.7] {
            let p = Point::along_ray(&xi, t);
            let along = dist(&Point::origin(2), &p).unwrap();
            assert!((busemann_depth(&p, &b).unwrap() - along).abs() < 1e-12);
        }
    }

    #[test]
    fn busemann_constant_on_horosphere() {
        let xi = IdealPoint::from_angle(1.1);
        let e = [-(1.1f64).sin(), 1.1f64.cos()];
        let b = DomainSpec::horoball(xi.clone(), 0.4).unwrap();
        for k in 1..40 {
            let phi = k as f64 * 0.15;
            let p = horosphere_point(&xi, &e, 1.3, phi).unwrap();
            assert!((busemann_depth(&p, &b).unwrap() - 0.9).abs() < 1e-10);
        }
    }

    #[test]
    fn dist_to_boundary_examples() {
        let ball = DomainSpec::geodesic_ball(Point::origin(2), 1.0).unwrap();
        assert!((dist_to_boundary(&Point::origin(2), &ball).unwrap() - 1.0).abs() < 1e-15);

        let xi = IdealPoint::from_angle(0.0);
        let hb = DomainSpec::horoball(xi.clone(), 0.0).unwrap();
        let p = Point::along_ray(&xi, 0.7);
        assert!((dist_to_boundary(&p, &hb).unwrap() - 0.7).abs() < 1e-12);

        let half = DomainSpec::hyperball_2d(0.0, 0.0, Side::Positive).unwrap();
        let q = Point::xy(0.0, 0.5).unwrap();
        let expected = dist(&Point::origin(2), &q).unwrap();
        assert!((dist_to_boundary(&q, &half).unwrap() - expected).abs() < 1e-12);
        assert!((expected - 1.098612).abs() < 1e-6);

        let out = Point::xy(0.0, -0.5).unwrap();
        assert!(matches!(
            dist_to_boundary(&out, &half),
            Err(Error::OutsideDomain(_))
        ));
    }

    #[test]
    fn contains_examples() {
        let xi = IdealPoint::from_angle(0.0);
        let hb = DomainSpec::horoball(xi.clone(), 0.0).unwrap();
        assert!(contains(&hb, &Point::along_ray(&xi, 0.2)));
        let ann = DomainSpec::horoannulus(xi.clone(), 0.0, 0.0, 1.0).unwrap();
        assert!(contains(&ann, &Point::along_ray(&xi, 0.5)));
        assert!(!contains(&ann, &Point::along_ray(&xi, 1.5)));
        let ext = DomainSpec::exterior_ball(Point::origin(2), 1.0).unwrap();
        assert!(!contains(&ext, &Point::origin(2)));
        assert!(!contains(&ext, &Point::origin(3)));
    }

    #[test]
    fn invalid_domains_rejected() {
        let xi = IdealPoint::from_angle(0.0);
        assert!(DomainSpec::horoannulus(xi.clone(), 0.0, 1.0, 1.0).is_err());
        assert!(DomainSpec::geodesic_ball(Point::origin(2), 0.0).is_err());
        assert!(DomainSpec::hyperball(xi, -0.1, Side::Positive).is_err());
    }

    #[test]
    fn mobius_moves_point_to_origin_and_preserves_distance() {
        let a = [0.2, -0.4];
        let z = [0.5, 0.1];
        let w = [-0.3, 0.6];
        let o = mobius_to_origin(a, a);
        assert!(o[0].abs() < 1e-15 && o[1].abs() < 1e-15);
        let d0 = dist_raw(&z, &w);
        let d1 = dist_raw(&mobius_to_origin(a, z), &mobius_to_origin(a, w));
        assert!((d0 - d1).abs() < 1e-12);
    }
}
