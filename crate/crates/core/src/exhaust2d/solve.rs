//! Dirichlet solves, the first discrete eigenvalue and nodal comparison.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;
use num_traits::Float;

use super::grid::{Arm, Grid2D};
use crate::hypgeom::Point;
use crate::linalg::{self, Csr};
use crate::{Error, Result};

const SOLVE_TOL: f64 = 1e-11;
const MAX_ITER: usize = 50_000;

/// A grid function: values at the interior nodes and at the boundary cut
/// points of its grid.
#[derive(Debug, Clone)]
pub struct Field2D {
    pub grid: Arc<Grid2D>,
    pub values: Vec<f64>,
    pub boundary_values: Vec<f64>,
    pub lambda: f64,
    /// Relative residual `|b - M u| / |b|` of the linear solve, or `None`
    /// for fields that were not produced by a solve.
    pub residual_norm: Option<f64>,
}

impl Field2D {
    /// A field that is not the output of a solve, e.g. a sampled function.
    pub fn from_fn(grid: Arc<Grid2D>, lambda: f64, mut f: impl FnMut(&Point) -> f64) -> Self {
        let values = (0..grid.len()).map(|k| f(&grid.point(k))).collect();
        let boundary_values = grid
            .boundary()
            .iter()
            .map(|b| f(&Point::xy(b.x, b.y).expect("cut points lie inside the disk")))
            .collect();
        Field2D {
            grid,
            values,
            boundary_values,
            lambda,
            residual_norm: None,
        }
    }

    /// Largest magnitude over interior nodes and boundary samples.
    pub fn max_abs(&self) -> f64 {
        self.values
            .iter()
            .chain(&self.boundary_values)
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn scaled(&self, c: f64) -> Field2D {
        Field2D {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| c * v).collect(),
            boundary_values: self.boundary_values.iter().map(|v| c * v).collect(),
            lambda: self.lambda,
            residual_norm: self.residual_norm,
        }
    }

    /// Value of the interior node nearest to `(x, y)`, if that lattice point
    /// is an interior node.
    pub fn nearest(&self, x: f64, y: f64) -> Option<f64> {
        let h = self.grid.h();
        let k = self
            .grid
            .node_at((x / h).round() as i32, (y / h).round() as i32)?;
        Some(self.values[k])
    }

    /// Bilinear interpolation in the lattice cell containing `(x, y)`. All
    /// four corners must be interior nodes.
    pub fn interpolate(&self, x: f64, y: f64) -> Option<f64> {
        let h = self.grid.h();
        let (fx, fy) = ((x / h).floor(), (y / h).floor());
        let (tx, ty) = (x / h - fx, y / h - fy);
        let (i, j) = (fx as i32, fy as i32);
        let at = |a: i32, b: i32| self.grid.node_at(a, b).map(|k| self.values[k]);
        let v00 = at(i, j)?;
        let v10 = at(i + 1, j)?;
        let v01 = at(i, j + 1)?;
        let v11 = at(i + 1, j + 1)?;
        Some((1.0 - ty) * ((1.0 - tx) * v00 + tx * v10) + ty * ((1.0 - tx) * v01 + tx * v11))
    }
}

/// First discrete Dirichlet eigenvalue of a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenResult {
    pub value: f64,
    pub iterations: usize,
    /// `|A y - λ C y| / (λ |C y|)` for the final iterate.
    pub residual: f64,
    pub h: f64,
}

/// Shortley–Weller matrix of `-Δ` (without the conformal factor), and for
/// every boundary sample the coefficient with which its value enters the
/// right-hand side of its node's row.
fn assemble(grid: &Grid2D, lambda: f64) -> (Csr, Vec<f64>) {
    let n = grid.len();
    let h2 = grid.h() * grid.h();
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let mut cols = Vec::with_capacity(5 * n);
    let mut vals = Vec::with_capacity(5 * n);
    let mut bcoef = alloc::vec![0.0; grid.boundary().len()];
    for k in 0..n {
        let t = grid.arm_fractions(k);
        let mut diag = 0.0;
        let mut entries: [(usize, f64); 4] = [(0, 0.0); 4];
        for (p, m) in [(0usize, 1usize), (2, 3)] {
            let (tp, tm) = (t[p], t[m]);
            diag += 2.0 / (h2 * tp * tm);
            entries[p].1 = -2.0 / (h2 * tp * (tp + tm));
            entries[m].1 = -2.0 / (h2 * tm * (tp + tm));
        }
        diag -= lambda * grid.conformal_factor(k);
        cols.push(k);
        vals.push(diag);
        for (d, arm) in grid.arms(k).iter().enumerate() {
            match arm {
                Arm::Node(nb) => {
                    cols.push(*nb);
                    vals.push(entries[d].1);
                }
                Arm::Boundary(b) => bcoef[*b] = entries[d].1,
            }
        }
        row_ptr.push(cols.len());
    }
    (
        Csr {
            n,
            row_ptr,
            cols,
            vals,
        },
        bcoef,
    )
}

/// `M = -Δ - λ c` on a grid, checked to be a nonsingular M-matrix so that
/// every solve satisfies the discrete maximum principle. Reusable across
/// boundary data.
#[derive(Debug, Clone)]
pub struct DirichletSolver {
    grid: Arc<Grid2D>,
    lambda: f64,
    matrix: Csr,
    bcoef: Vec<f64>,
}

impl DirichletSolver {
    pub fn new(grid: Arc<Grid2D>, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::arg("lambda must be finite"));
        }
        let (matrix, bcoef) = assemble(&grid, lambda);
        let solver = DirichletSolver {
            grid,
            lambda,
            matrix,
            bcoef,
        };
        if lambda > 0.0 {
            solver.certify()?;
        }
        Ok(solver)
    }

    /// A Z-matrix with `x > 0` and `M x > 0` for some `x` is a nonsingular
    /// M-matrix. We try `x = M⁻¹ 1`.
    fn certify(&self) -> Result<()> {
        let n = self.matrix.n;
        let ones = alloc::vec![1.0; n];
        let mut x = alloc::vec![0.0; n];
        let solved = linalg::bicgstab(&self.matrix, &ones, &mut x, SOLVE_TOL, MAX_ITER);
        let ok = solved.is_ok() && {
            let mut mx = alloc::vec![0.0; n];
            self.matrix.mul(&x, &mut mx);
            x.iter().zip(&mx).all(|(a, b)| *a > 0.0 && *b > 0.0)
        };
        if ok {
            return Ok(());
        }
        let l1 = dirichlet_lambda1(&self.grid, 1e-8)?.value;
        if self.lambda >= l1 {
            return Err(Error::Spectral {
                lambda: self.lambda,
                lambda1_bound: l1,
            });
        }
        match solved {
            Err(e) => Err(e),
            Ok(_) => Err(Error::numerical(format!(
                "could not certify the operator at lambda = {} (discrete first eigenvalue {l1})",
                self.lambda
            ))),
        }
    }

    pub fn grid(&self) -> &Arc<Grid2D> {
        &self.grid
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Solves with the given values at the grid's boundary samples.
    pub fn solve_values(&self, boundary_values: Vec<f64>) -> Result<Field2D> {
        if boundary_values.len() != self.bcoef.len() {
            return Err(Error::DimensionMismatch {
                expected: self.bcoef.len(),
                found: boundary_values.len(),
            });
        }
        let mut rhs = alloc::vec![0.0; self.matrix.n];
        for (b, (g, c)) in boundary_values.iter().zip(&self.bcoef).enumerate() {
            rhs[self.grid.boundary()[b].node] -= c * g;
        }
        let mut values = alloc::vec![0.0; self.matrix.n];
        let stats = linalg::bicgstab(&self.matrix, &rhs, &mut values, SOLVE_TOL, MAX_ITER)?;
        Ok(Field2D {
            grid: self.grid.clone(),
            values,
            boundary_values,
            lambda: self.lambda,
            residual_norm: Some(stats.relative_residual),
        })
    }

    pub fn solve(&self, mut boundary: impl FnMut(&Point) -> f64) -> Result<Field2D> {
        let values = self
            .grid
            .boundary()
            .iter()
            .map(|b| boundary(&Point::xy(b.x, b.y).expect("cut points lie inside the disk")))
            .collect();
        self.solve_values(values)
    }
}

/// Solves `-Δ_H u = λ u` on the grid with `u = boundary` at the cut points.
/// Fails with [`Error::Spectral`] when `λ` is not below the first discrete
/// eigenvalue.
pub fn solve_dirichlet(
    grid: &Arc<Grid2D>,
    lambda: f64,
    boundary: impl FnMut(&Point) -> f64,
) -> Result<Field2D> {
    DirichletSolver::new(grid.clone(), lambda)?.solve(boundary)
}

/// Smallest eigenvalue of `A u = λ C u` by inverse iteration, where `A` is
/// the Shortley–Weller `-Δ` and `C` the conformal factor.
pub fn dirichlet_lambda1(grid: &Grid2D, tol: f64) -> Result<EigenResult> {
    if !(tol > 0.0) {
        return Err(Error::arg(format!("tolerance must be positive, got {tol}")));
    }
    if grid.is_empty() {
        return Err(Error::arg("grid has no interior nodes"));
    }
    let (a, _) = assemble(grid, 0.0);
    let n = a.n;
    let c: Vec<f64> = (0..n).map(|k| grid.conformal_factor(k)).collect();
    let mut x = alloc::vec![1.0; n];
    let mut y = alloc::vec![0.0; n];
    let mut cx = alloc::vec![0.0; n];
    // BiCGStab stalls near 1e-12 on fine grids
    let solve_tol = (1e-2 * tol).clamp(SOLVE_TOL / 4.0, SOLVE_TOL);
    let mut prev = f64::INFINITY;
    for it in 1..=500 {
        for k in 0..n {
            cx[k] = c[k] * x[k];
        }
        linalg::bicgstab(&a, &cx, &mut y, solve_tol, MAX_ITER)?;
        let mut ycx = 0.0;
        let mut ycy = 0.0;
        for k in 0..n {
            ycx += y[k] * cx[k];
            ycy += y[k] * c[k] * y[k];
        }
        let lambda = ycx / ycy;
        let mut res = 0.0;
        let mut cy = 0.0;
        for k in 0..n {
            let r = cx[k] - lambda * c[k] * y[k];
            res += r * r;
            cy += (c[k] * y[k]).powi(2);
        }
        let residual = res.sqrt() / (lambda * cy.sqrt());
        let scale = linalg::norm2(&y);
        for k in 0..n {
            x[k] = y[k] / scale;
        }
        // warm start for the next solve
        for v in y.iter_mut() {
            *v *= 1.0 / scale;
        }
        if residual < tol {
            return Ok(EigenResult {
                value: lambda,
                iterations: it,
                residual,
                h: grid.h(),
            });
        }
        if it > 50 && (lambda - prev).abs() <= 1e-15 * lambda {
            return Err(Error::numerical(format!(
                "inverse iteration stagnated at residual {residual:e}"
            )));
        }
        prev = lambda;
        // the warm start is x/λ
        for v in y.iter_mut() {
            *v /= lambda;
        }
    }
    Err(Error::numerical(
        "inverse iteration did not converge in 500 steps",
    ))
}

/// Whether `u ≥ v` (or `u > v` when `strict`) holds at the boundary samples
/// and at every interior node. Fields on different grids or with different
/// `λ` never compare. The non-strict check allows rounding at the level of
/// `1e-9` times the larger supremum.
pub fn comparison_check(u: &Field2D, v: &Field2D, strict: bool) -> bool {
    if !Arc::ptr_eq(&u.grid, &v.grid) || u.lambda != v.lambda {
        return false;
    }
    let slack = if strict {
        0.0
    } else {
        1e-9 * u.max_abs().max(v.max_abs())
    };
    let ordered = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .all(|(x, y)| if strict { x - y > 0.0 } else { x - y >= -slack })
    };
    ordered(&u.boundary_values, &v.boundary_values) && ordered(&u.values, &v.values)
}

#[cfg(test)]
mod tests {
    use super::super::grid::build_grid;
    use super::*;
    use crate::hypgeom::{dist, DomainSpec};
    use crate::radialode::{evaluate, solve_regular, EigenParams};

    fn ball_grid(r: f64, h: f64) -> Arc<Grid2D> {
        let dom = DomainSpec::geodesic_ball(Point::origin(2), r).unwrap();
        Arc::new(build_grid(&dom, f64::INFINITY, &Point::origin(2), h).unwrap())
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = ball_grid(1.0, 0.04);
        let u = solve_dirichlet(&g, 0.2, |_| 0.0).unwrap();
        assert!(u.values.iter().all(|v| *v == 0.0));
    }

    #[test]
    fn radial_solution_is_reproduced_to_second_order() {
        let par = EigenParams::new(2, 0.2).unwrap();
        let phi = solve_regular(par, 2.0, 1e-12).unwrap();
        let o = Point::origin(2);
        let mut errs = Vec::new();
        for h in [0.04, 0.02, 0.01] {
            let g = ball_grid(1.5, h);
            let u = solve_dirichlet(&g, 0.2, |p| evaluate(&phi, dist(p, &o).unwrap()).unwrap())
                .unwrap();
            assert!(u.residual_norm.unwrap() < 1e-10);
            let mut e = 0.0f64;
            for k in 0..g.len() {
                let exact = evaluate(&phi, dist(&g.point(k), &o).unwrap()).unwrap();
                e = e.max((u.values[k] - exact).abs());
            }
            errs.push(e);
        }
        let o1 = (errs[0] / errs[1]).log2();
        let o2 = (errs[1] / errs[2]).log2();
        assert!(o1 > 1.7 && o2 > 1.7, "{errs:?}");
    }

    #[test]
    fn linear_in_boundary_data() {
        let g = ball_grid(1.0, 0.04);
        let s = DirichletSolver::new(g, 0.1).unwrap();
        let u = s.solve(|p| 1.0 + p.coords()[0]).unwrap();
        let w = s.solve(|p| 3.0 * (1.0 + p.coords()[0])).unwrap();
        for (a, b) in u.values.iter().zip(&w.values) {
            assert!((3.0 * a - b).abs() < 1e-8 * b.abs().max(1.0));
        }
    }

    #[test]
    fn spectral_error_above_first_eigenvalue() {
        let g = ball_grid(1.0, 0.04);
        let l1 = dirichlet_lambda1(&g, 1e-9).unwrap();
        assert!(l1.value > 0.25);
        match DirichletSolver::new(g, l1.value * 1.05) {
            Err(Error::Spectral { lambda1_bound, .. }) => {
                assert!((lambda1_bound - l1.value).abs() < 1e-6 * l1.value)
            }
            other => panic!("expected a spectral error, got {other:?}"),
        }
    }

    #[test]
    fn comparison_basics() {
        let g = ball_grid(1.0, 0.04);
        let s = DirichletSolver::new(g, 0.2).unwrap();
        let zero = s.solve(|_| 0.0).unwrap();
        let pos = s.solve(|p| 1.0 + p.coords()[1].powi(2)).unwrap();
        assert!(comparison_check(&pos, &zero, false));
        assert!(comparison_check(&pos, &zero, true));
        assert!(comparison_check(&pos, &pos, false));
        assert!(!comparison_check(&pos, &pos, true));
        assert!(!comparison_check(&zero, &pos, false));
    }

    #[test]
    fn interpolation_is_exact_on_nodes() {
        let g = ball_grid(1.0, 0.04);
        let f = Field2D::from_fn(g.clone(), 0.0, |p| p.coords()[0] + 2.0 * p.coords()[1]);
        let [x, y] = g.coords(3);
        assert!((f.interpolate(x, y).unwrap() - f.values[3]).abs() < 1e-14);
        let v = f.interpolate(0.013, -0.021).unwrap();
        assert!((v - (0.013 - 0.042)).abs() < 1e-14);
    }
}
