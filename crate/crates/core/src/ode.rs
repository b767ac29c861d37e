//! Dormand–Prince 5(4) for planar systems, stepping exactly onto a list of
//! output nodes.

use alloc::format;
use alloc::vec::Vec;
use num_traits::Float;

use crate::{Error, Result};

pub(crate) type State = [f64; 2];

/// Step-size control settings.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Tolerances {
    pub fn relative(rtol: f64) -> Self {
        Tolerances {
            rtol,
            atol: 0.0,
            max_steps: 2_000_000,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// difference between the fifth- and fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates `y' = f(t, y)` from `(t0, y0)` through `nodes`, which must be
/// strictly monotone in one direction away from `t0` (backward integration
/// is allowed). Returns the state at every node; steps never cross a node.
pub(crate) fn integrate<F>(
    mut f: F,
    t0: f64,
    y0: State,
    nodes: &[f64],
    tol: Tolerances,
) -> Result<Vec<State>>
where
    F: FnMut(f64, &State) -> State,
{
    let mut out = Vec::with_capacity(nodes.len());
    if nodes.is_empty() {
        return Ok(out);
    }
    let dir = if nodes[0] >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let mut h = initial_step(&y, &k1, tol, nodes[0] - t0);
    let mut steps = 0usize;

    for &target in nodes {
        if (target - t) * dir < 0.0 {
            return Err(Error::arg("integration nodes are not monotone"));
        }
        while (target - t) * dir > 0.0 {
            steps += 1;
            if steps > tol.max_steps {
                return Err(Error::numerical(format!(
                    "step budget exhausted at t = {t} (h = {h})"
                )));
            }
            let remaining = target - t;
            let last = h.abs() >= remaining.abs() * (1.0 - 1e-12);
            let step = if last { remaining } else { h };

            let k2 = f(t + C2 * step, &axpy(&y, &[(A21, &k1)], step));
            let k3 = f(t + C3 * step, &axpy(&y, &[(A31, &k1), (A32, &k2)], step));
            let k4 = f(
                t + C4 * step,
                &axpy(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], step),
            );
            let k5 = f(
                t + C5 * step,
                &axpy(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], step),
            );
            let k6 = f(
                t + step,
                &axpy(
                    &y,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                    step,
                ),
            );
            let y_new = axpy(
                &y,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
                step,
            );
            let t_new = if last { target } else { t + step };
            let k7 = f(t_new, &y_new);

            let mut err_sq = 0.0;
            for i in 0..2 {
                let e = step
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = tol.atol + tol.rtol * y[i].abs().max(y_new[i].abs());
                let r = if sc > 0.0 {
                    e / sc
                } else if e == 0.0 {
                    0.0
                } else {
                    f64::INFINITY
                };
                err_sq += r * r;
            }
            let err = (err_sq / 2.0).sqrt();
            if !err.is_finite() && !y_new.iter().all(|v| v.is_finite()) {
                return Err(Error::numerical(format!("non-finite state near t = {t}")));
            }

            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                t = t_new;
                y = y_new;
                k1 = k7;
                if !last {
                    h = step * fac;
                }
            } else {
                h = step * fac.min(1.0);
                if h.abs() < 1e-14 * t.abs().max(1.0) {
                    return Err(Error::numerical(format!("step size underflow at t = {t}")));
                }
            }
        }
        out.push(y);
    }
    Ok(out)
}

fn initial_step(y: &State, dy: &State, tol: Tolerances, span: f64) -> f64 {
    let mut d0 = 0.0f64;
    let mut d1 = 0.0f64;
    for i in 0..2 {
        let sc = tol.atol + tol.rtol * y[i].abs();
        if sc > 0.0 {
            d0 = d0.max(y[i].abs() / sc);
            d1 = d1.max(dy[i].abs() / sc);
        }
    }
    let mut h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h = h.min(span.abs()).max(1e-12);
    h.copysign(span)
}
