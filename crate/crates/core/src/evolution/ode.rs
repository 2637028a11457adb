//! Time-ordered exponentials of small Hermitian generators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Exponential midpoint rule, second order.
    Midpoint,
    /// Two-point Gauss Magnus expansion with commutator term, fourth order.
    Magnus4,
}

const MAX_STEPS: usize = 1 << 21;

/// Propagator of `i dU/dt = H(t) U` on `[t0, t1]` with a fixed number of steps.
pub fn integrate_steps(h: &dyn Fn(f64) -> CMatrix, t0: f64, t1: f64, method: Integrator, steps: usize) -> CMatrix {
    let d = h(t0).nrows();
    let dt = (t1 - t0) / steps as f64;
    let mut u = linalg::eye(d);
    let r3 = 3f64.sqrt();
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        let step = match method {
            Integrator::Midpoint => linalg::expm_hermitian(&h(t + 0.5 * dt), dt),
            Integrator::Magnus4 => {
                let h1 = h(t + dt * (0.5 - r3 / 6.0));
                let h2 = h(t + dt * (0.5 + r3 / 6.0));
                let comm = &h2 * &h1 - &h1 * &h2;
                let k = (&h1 + &h2) * c(0.5 * dt, 0.0) - comm * c(0.0, r3 * dt * dt / 12.0);
                linalg::expm_hermitian(&k, 1.0)
            }
        };
        u = step * u;
    }
    u
}

/// Like [`integrate_steps`] but doubles the step count until two successive
/// results differ by less than `tol` (max-abs entry).
pub fn integrate(h: &dyn Fn(f64) -> CMatrix, t0: f64, t1: f64, method: Integrator, tol: f64) -> Result<CMatrix> {
    let mut steps = (((t1 - t0).abs() * 4.0).ceil() as usize).max(64);
    let mut prev = integrate_steps(h, t0, t1, method, steps);
    loop {
        steps *= 2;
        let next = integrate_steps(h, t0, t1, method, steps);
        let change = linalg::max_abs(&(&next - &prev));
        if change < tol {
            return Ok(next);
        }
        if steps >= MAX_STEPS {
            return Err(Error::NotConverged { change, steps });
        }
        prev = next;
    }
}
