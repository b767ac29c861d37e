#![no_std]
// `num_traits::Float` is shadowed by the inherent float methods whenever std
// is part of the build, e.g. through dev-dependencies
#![allow(unused_imports)]

//! Eigenfunctions of the Laplace–Beltrami operator for eigenvalues in
//! `[0, (n-1)^2/4]` on unbounded model domains of hyperbolic space.
//!
//! The crate is `no_std` (it needs `alloc`) and splits into:
//!
//! - [`hypgeom`]: Poincaré-ball points, distances, Busemann depths and the
//!   model domains (balls, horoballs, horoannuli, hyperballs).
//! - [`radialode`]: the radial equation `w'' + (n-1) coth(r) w' + λ w = 0`
//!   (regular, singular and exterior solutions).
//! - [`horofunc`]: closed-form eigenfunctions in Busemann coordinates and the
//!   first eigenvalue of thin horoannuli.
//! - [`exhaust2d`]: Shortley–Weller finite differences on the Poincaré disk,
//!   Dirichlet solves, first eigenvalues and the hyperball exhaustion.
//! - [`barriers`]: barrier constants, the support-shrinking step, the
//!   horoball nonexistence pipeline and the decay/extension witnesses.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod barriers;
pub mod error;
pub mod exhaust2d;
pub mod horofunc;
pub mod hypgeom;
pub mod linalg;
pub mod ode;
pub mod radialode;

pub use error::{Error, Result};
pub use hypgeom::{DomainSpec, IdealPoint, Point};
pub use radialode::{EigenParams, RadialKind, RadialSolution};

/// Bottom of the spectrum of `H^n`: `(n-1)^2 / 4`.
pub fn lambda1(n: u32) -> f64 {
    let m = f64::from(n) - 1.0;
    m * m / 4.0
}
