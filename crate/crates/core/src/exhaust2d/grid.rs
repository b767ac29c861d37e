//! Masked lattices over the Poincaré disk with Shortley–Weller cut cells.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::hypgeom::{dist_raw, DomainSpec, Point};
use crate::{Error, Result};

/// Largest number of lattice nodes a grid may hold.
pub const NODE_LIMIT: usize = 20_000_000;

/// Directions of the four lattice arms, in the order used by
/// [`Grid2D::arms`].
pub const DIRECTIONS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, 1), (0, -1)];

/// Mask of a lattice point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeMask {
    Interior,
    /// A lattice point outside the domain that is the far end of at least
    /// one cut arm.
    Boundary,
    Exterior,
}

/// Which constraint produced a boundary cut point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// The boundary of the domain itself.
    Domain,
    /// The sphere of the truncation ball.
    Truncation,
    /// The Euclidean circle of radius `1 - h/2` closing off the disk.
    Cap,
}

/// A lattice arm from an interior node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Node(usize),
    /// Index into [`Grid2D::boundary`].
    Boundary(usize),
}

/// A point where a lattice arm leaves the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub x: f64,
    pub y: f64,
    /// Interior node the arm starts from.
    pub node: usize,
    /// Index into [`DIRECTIONS`].
    pub dir: usize,
    /// Cut fraction in `(0, 1]` of the lattice spacing.
    pub theta: f64,
    pub kind: BoundaryKind,
}

/// The lattice `h Z²` restricted to `Ω ∩ B_R(x0) ∩ {|x| ≤ 1 - h/2}`.
#[derive(Debug, Clone)]
pub struct Grid2D {
    h: f64,
    domain: DomainSpec,
    center: Point,
    radius: f64,
    lattice: Vec<(i32, i32)>,
    index: BTreeMap<(i32, i32), usize>,
    arms: Vec<[Arm; 4]>,
    boundary: Vec<BoundarySample>,
}

struct LevelSet<'a> {
    domain: &'a DomainSpec,
    center: [f64; 2],
    radius: f64,
    cap: f64,
}

impl LevelSet<'_> {
    /// Negative inside; also reports which constraint is the binding one.
    fn eval(&self, p: [f64; 2]) -> (f64, BoundaryKind) {
        let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
        let cap = r - self.cap;
        if cap >= 0.0 {
            return (cap, BoundaryKind::Cap);
        }
        let dom = self.domain.level_raw(&p);
        let trunc = if self.radius.is_finite() {
            dist_raw(&p, &self.center) - self.radius
        } else {
            f64::NEG_INFINITY
        };
        let mut best = (cap, BoundaryKind::Cap);
        if dom > best.0 {
            best = (dom, BoundaryKind::Domain);
        }
        if trunc > best.0 {
            best = (trunc, BoundaryKind::Truncation);
        }
        best
    }
}

impl Grid2D {
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    /// Center of the truncation ball.
    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Hyperbolic radius of the truncation ball (infinite when untruncated).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice.is_empty()
    }

    /// Lattice indices `(i, j)` of interior node `k`, at `(i h, j h)`.
    pub fn lattice_index(&self, k: usize) -> (i32, i32) {
        self.lattice[k]
    }

    pub fn coords(&self, k: usize) -> [f64; 2] {
        let (i, j) = self.lattice[k];
        [f64::from(i) * self.h, f64::from(j) * self.h]
    }

    pub fn node_at(&self, i: i32, j: i32) -> Option<usize> {
        self.index.get(&(i, j)).copied()
    }

    pub fn mask(&self, i: i32, j: i32) -> NodeMask {
        if self.index.contains_key(&(i, j)) {
            return NodeMask::Interior;
        }
        for (d, (di, dj)) in DIRECTIONS.iter().enumerate() {
            if let Some(k) = self.node_at(i - di, j - dj) {
                if matches!(self.arms[k][d], Arm::Boundary(_)) {
                    return NodeMask::Boundary;
                }
            }
        }
        NodeMask::Exterior
    }

    pub fn arms(&self, k: usize) -> &[Arm; 4] {
        &self.arms[k]
    }

    pub fn boundary(&self) -> &[BoundarySample] {
        &self.boundary
    }

    /// Arm lengths in units of `h` (1 for lattice neighbours).
    pub fn arm_fractions(&self, k: usize) -> [f64; 4] {
        let mut t = [1.0; 4];
        for (d, arm) in self.arms[k].iter().enumerate() {
            if let Arm::Boundary(b) = arm {
                t[d] = self.boundary[*b].theta;
            }
        }
        t
    }

    /// Conformal factor `4 / (1 - |x|²)²` of the disk metric at node `k`.
    pub fn conformal_factor(&self, k: usize) -> f64 {
        let [x, y] = self.coords(k);
        let s = 1.0 - x * x - y * y;
        4.0 / (s * s)
    }

    /// Interior nodes as [`Point`]s.
    pub fn point(&self, k: usize) -> Point {
        let [x, y] = self.coords(k);
        Point::xy(x, y).expect("grid nodes lie inside the disk")
    }
}

/// Builds the grid for `domain ∩ B_R(x0)` with lattice spacing `h`. Pass
/// `R = f64::INFINITY` for no truncation.
pub fn build_grid(domain: &DomainSpec, big_r: f64, x0: &Point, h: f64) -> Result<Grid2D> {
    if domain.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: domain.dim(),
        });
    }
    if x0.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: x0.dim(),
        });
    }
    if !(h > 1e-4 && h < 0.1) {
        return Err(Error::arg(format!("h must lie in (1e-4, 0.1), got {h}")));
    }
    if !(big_r > 0.0) {
        return Err(Error::arg(format!(
            "truncation radius must be positive, got {big_r}"
        )));
    }
    let cap = 1.0 - 0.5 * h;
    let (mut lo, mut hi) = ([-cap; 2], [cap; 2]);
    let mut disks = Vec::new();
    if big_r.is_finite() {
        disks.push(euclidean_disk(x0.xy_pair(), big_r));
    }
    if let DomainSpec::GeodesicBall { center, radius } = domain {
        disks.push(euclidean_disk(center.xy_pair(), *radius));
    }
    for (c, r) in disks {
        for a in 0..2 {
            lo[a] = lo[a].max(c[a] - r);
            hi[a] = hi[a].min(c[a] + r);
        }
    }
    let range = |a: usize| {
        (
            (lo[a] / h).floor() as i32 - 1,
            (hi[a] / h).ceil() as i32 + 1,
        )
    };
    let (i0, i1) = range(0);
    let (j0, j1) = range(1);
    let width = (i1 - i0).max(0) as usize + 1;
    let height = (j1 - j0).max(0) as usize + 1;
    // nodes of the inscribed region, roughly π/4 of the box
    let estimate = (width as f64 * height as f64 * core::f64::consts::FRAC_PI_4) as usize;
    if estimate > NODE_LIMIT {
        return Err(Error::Resource {
            nodes: estimate,
            limit: NODE_LIMIT,
        });
    }
    let level = LevelSet {
        domain,
        center: x0.xy_pair(),
        radius: big_r,
        cap,
    };

    let mut lattice = Vec::new();
    let mut index = BTreeMap::new();
    for j in j0..=j1 {
        for i in i0..=i1 {
            let p = [f64::from(i) * h, f64::from(j) * h];
            if level.eval(p).0 < 0.0 {
                index.insert((i, j), lattice.len());
                lattice.push((i, j));
            }
        }
    }
    if lattice.is_empty() {
        return Err(Error::OutsideDomain(format!(
            "no lattice node of spacing {h} lies inside the truncated domain"
        )));
    }

    let mut arms = Vec::with_capacity(lattice.len());
    let mut boundary = Vec::new();
    for (k, &(i, j)) in lattice.iter().enumerate() {
        let mut row = [Arm::Node(0); 4];
        for (d, (di, dj)) in DIRECTIONS.iter().enumerate() {
            if let Some(&nb) = index.get(&(i + di, j + dj)) {
                row[d] = Arm::Node(nb);
                continue;
            }
            let p = [f64::from(i) * h, f64::from(j) * h];
            let dir = [f64::from(*di), f64::from(*dj)];
            let (theta, kind) = cut_fraction(&level, p, dir, h);
            row[d] = Arm::Boundary(boundary.len());
            boundary.push(BoundarySample {
                x: p[0] + theta * h * dir[0],
                y: p[1] + theta * h * dir[1],
                node: k,
                dir: d,
                theta,
                kind,
            });
        }
        arms.push(row);
    }
    Ok(Grid2D {
        h,
        domain: domain.clone(),
        center: x0.clone(),
        radius: big_r,
        lattice,
        index,
        arms,
        boundary,
    })
}

/// Euclidean center and radius of the hyperbolic disk `B_r(c)`.
fn euclidean_disk(c: [f64; 2], r: f64) -> ([f64; 2], f64) {
    let t = (0.5 * r).tanh();
    let a2 = c[0] * c[0] + c[1] * c[1];
    let den = 1.0 - a2 * t * t;
    let k = (1.0 - t * t) / den;
    ([k * c[0], k * c[1]], t * (1.0 - a2) / den)
}

/// Fraction of the arm from `p` along `dir` where the level set crosses
/// zero, by bisection.
fn cut_fraction(level: &LevelSet<'_>, p: [f64; 2], dir: [f64; 2], h: f64) -> (f64, BoundaryKind) {
    let at = |t: f64| [p[0] + t * h * dir[0], p[1] + t * h * dir[1]];
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if level.eval(at(mid)).0 < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // the cut point itself must stay strictly inside the unit disk
    let theta = hi.max(1e-9);
    let kind = level.eval(at(theta)).1;
    (theta, kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypgeom::{IdealPoint, Side};

    #[test]
    fn ball_node_count_matches_area() {
        let dom = DomainSpec::geodesic_ball(Point::origin(2), 1.0).unwrap();
        let g = build_grid(&dom, f64::INFINITY, &Point::origin(2), 0.02).unwrap();
        let re = 0.5f64.tanh();
        let expected = core::f64::consts::PI * re * re / (0.02 * 0.02);
        assert!((g.len() as f64 / expected - 1.0).abs() < 0.02);
        assert!((re - 0.462117).abs() < 1e-6);
    }

    #[test]
    fn arms_are_consistent() {
        let xi = IdealPoint::from_angle(0.4);
        let dom = DomainSpec::horoannulus(xi, -0.5, 0.0, 1.0).unwrap();
        let g = build_grid(&dom, 3.0, &Point::origin(2), 0.02).unwrap();
        for k in 0..g.len() {
            let (i, j) = g.lattice_index(k);
            for (d, arm) in g.arms(k).iter().enumerate() {
                let (di, dj) = DIRECTIONS[d];
                match arm {
                    Arm::Node(nb) => assert_eq!(g.lattice_index(*nb), (i + di, j + dj)),
                    Arm::Boundary(b) => {
                        let s = g.boundary()[*b];
                        assert!(s.theta > 0.0 && s.theta <= 1.0);
                        assert_eq!(s.node, k);
                        assert_eq!(g.mask(i + di, j + dj), NodeMask::Boundary);
                    }
                }
            }
            let [x, y] = g.coords(k);
            assert!((x * x + y * y).sqrt() <= 1.0 - 0.01);
        }
    }

    #[test]
    fn half_disk_mask_is_mirror_symmetric() {
        // an exactly representable normal keeps the axis nodes on the boundary
        let normal = IdealPoint::new(alloc::vec![0.0, 1.0]).unwrap();
        let up = DomainSpec::hyperball(normal.clone(), 0.0, Side::Positive).unwrap();
        let g = build_grid(&up, 2.0, &Point::origin(2), 0.02).unwrap();
        let m = (1.0f64 / 0.02) as i32;
        for j in 0..m {
            for i in -m..=m {
                // reflecting y -> -y takes the half-disk to its complement
                assert!(!(g.node_at(i, j).is_some() && g.node_at(i, -j).is_some()));
            }
        }
        let down = DomainSpec::hyperball(normal, 0.0, Side::Negative).unwrap();
        let gd = build_grid(&down, 2.0, &Point::origin(2), 0.02).unwrap();
        assert_eq!(g.len(), gd.len());
        for k in 0..g.len() {
            let (i, j) = g.lattice_index(k);
            assert!(gd.node_at(i, -j).is_some());
        }
    }

    #[test]
    fn boundary_kinds_are_classified() {
        let up = DomainSpec::hyperball_2d(0.0, 0.0, Side::Positive).unwrap();
        let g = build_grid(&up, 1.0, &Point::origin(2), 0.02).unwrap();
        for s in g.boundary() {
            match s.kind {
                BoundaryKind::Domain => assert!(s.y.abs() < 1e-9),
                BoundaryKind::Truncation => {
                    let r = (s.x * s.x + s.y * s.y).sqrt();
                    assert!((r - 0.5f64.tanh()).abs() < 1e-9);
                }
                BoundaryKind::Cap => panic!("cap is far from a radius-1 ball"),
            }
        }
    }

    #[test]
    fn euclidean_disk_of_hyperbolic_ball() {
        let c = [0.3, -0.4];
        let (ec, er) = euclidean_disk(c, 1.3);
        for k in 0..8 {
            let a = k as f64 * 0.7;
            let p = [ec[0] + er * a.cos(), ec[1] + er * a.sin()];
            assert!((dist_raw(&p, &c) - 1.3).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let dom = DomainSpec::geodesic_ball(Point::origin(2), 1.0).unwrap();
        assert!(build_grid(&dom, 1.0, &Point::origin(2), 0.2)
            .unwrap_err()
            .is_argument());
        let far = DomainSpec::geodesic_ball(Point::xy(0.925, 0.0).unwrap(), 0.01).unwrap();
        assert!(matches!(
            build_grid(&far, f64::INFINITY, &Point::origin(2), 0.05),
            Err(Error::OutsideDomain(_))
        ));
        let d3 = DomainSpec::geodesic_ball(Point::origin(3), 1.0).unwrap();
        assert!(build_grid(&d3, 1.0, &Point::origin(2), 0.05).is_err());
    }
}
