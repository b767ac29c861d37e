//! Finite differences for `-Δ_H u = λ u` on the Poincaré disk.
//!
//! In the disk model `Δ_H = ((1 - |x|²)² / 4) Δ`, so the equation becomes
//! `-Δu = λ c(x) u` with `c = 4 / (1 - |x|²)²`. Grids are the lattice `h Z²`
//! masked to a truncated domain; arms that leave the domain are cut at the
//! boundary (Shortley–Weller), which keeps the matrix a Z-matrix and the
//! scheme second order.

mod grid;
mod hyperball;
mod solve;

pub use grid::{
    build_grid, Arm, BoundaryKind, BoundarySample, Grid2D, NodeMask, DIRECTIONS, NODE_LIMIT,
};
pub use hyperball::{
    hyperball_eigenfunction, hyperball_exhaustion, ExhaustionReport, ExhaustionStep, HyperballData,
    RayCheck,
};
pub use solve::{
    comparison_check, dirichlet_lambda1, solve_dirichlet, DirichletSolver, EigenResult, Field2D,
};
