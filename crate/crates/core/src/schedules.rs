//! Interpolation families `H(t) = f(t) H0 + g(t) H1` and time
//! reparametrizations.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::ode::{integrate, Integrator};
use crate::linalg;

/// Time unit of the diabatic parameter: `eps = T_d / T_h` for a half-turn
/// of a unit-gap two-level Hamiltonian lasting `T_h`.
pub const DIABATIC_TIME: f64 = FRAC_PI_2;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Interpolation {
    /// `f = 1 - s`, `g = s`.
    Linear,
    /// `f = cos(pi s / 2)`, `g = sin(pi s / 2)`: unitary interpolation.
    Trig,
    /// Tabulated on a uniform grid of `s`, linearly interpolated.
    Custom { f: Vec<f64>, g: Vec<f64> },
}

impl Interpolation {
    pub fn validate(&self) -> Result<()> {
        if let Interpolation::Custom { f, g } = self {
            let ok = f.len() >= 2
                && f.len() == g.len()
                && (f[0] - 1.0).abs() < 1e-12
                && g[0].abs() < 1e-12
                && f[f.len() - 1].abs() < 1e-12
                && (g[g.len() - 1] - 1.0).abs() < 1e-12
                && f.iter().zip(g).all(|(a, b)| a.hypot(*b) > 1e-6);
            if !ok {
                return Err(Error::InvalidSchedule(
                    "custom tables need f(0)=1, g(0)=0, f(1)=0, g(1)=1 and never vanish together".into(),
                ));
            }
        }
        Ok(())
    }

    /// `(f(s), g(s))`.
    pub fn fg(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, 1.0);
        match self {
            Interpolation::Linear => (1.0 - s, s),
            Interpolation::Trig => ((FRAC_PI_2 * s).cos(), (FRAC_PI_2 * s).sin()),
            Interpolation::Custom { f, g } => {
                let x = s * (f.len() - 1) as f64;
                let k = (x.floor() as usize).min(f.len() - 2);
                let w = x - k as f64;
                (f[k] * (1.0 - w) + f[k + 1] * w, g[k] * (1.0 - w) + g[k + 1] * w)
            }
        }
    }

    /// `(df/ds, dg/ds)`.
    pub fn fg_prime(&self, s: f64) -> (f64, f64) {
        let s = s.clamp(0.0, 1.0);
        match self {
            Interpolation::Linear => (-1.0, 1.0),
            Interpolation::Trig => (-FRAC_PI_2 * (FRAC_PI_2 * s).sin(), FRAC_PI_2 * (FRAC_PI_2 * s).cos()),
            Interpolation::Custom { f, g } => {
                let m = (f.len() - 1) as f64;
                let k = ((s * m).floor() as usize).min(f.len() - 2);
                ((f[k + 1] - f[k]) * m, (g[k + 1] - g[k]) * m)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reparam {
    /// `tau(t) = t`.
    Identity,
    /// `tau(t) = (T/a) int_0^t exp(-1/sin(pi u/T)) du`, flat to all orders at both ends.
    Bump,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub interpolation: Interpolation,
    pub reparam: Reparam,
    /// Total duration `T`.
    pub duration: f64,
}

impl Schedule {
    pub fn new(interpolation: Interpolation, reparam: Reparam, duration: f64) -> Result<Self> {
        interpolation.validate()?;
        if !(duration.is_finite() && duration > 0.0) {
            return Err(Error::InvalidSchedule(format!("duration {duration}")));
        }
        Ok(Schedule {
            interpolation,
            reparam,
            duration,
        })
    }

    pub fn linear(duration: f64) -> Self {
        Schedule::new(Interpolation::Linear, Reparam::Identity, duration).expect("valid")
    }

    pub fn trig(duration: f64) -> Self {
        Schedule::new(Interpolation::Trig, Reparam::Identity, duration).expect("valid")
    }

    pub fn bump(duration: f64) -> Self {
        Schedule::new(Interpolation::Trig, Reparam::Bump, duration).expect("valid")
    }

    /// Named presets used on the command line.
    pub fn by_name(name: &str, duration: f64) -> Result<Self> {
        match name {
            "linear" => Ok(Self::linear(duration)),
            "trig" | "unitary" => Ok(Self::trig(duration)),
            "bump" => Ok(Self::bump(duration)),
            "linear-bump" => Schedule::new(Interpolation::Linear, Reparam::Bump, duration),
            other => Err(Error::InvalidSchedule(format!("unknown schedule {other:?}"))),
        }
    }

    pub fn with_duration(&self, duration: f64) -> Self {
        Schedule {
            duration,
            ..self.clone()
        }
    }

    /// Normalized path parameter `tau(t)/T`.
    pub fn s_of_t(&self, t: f64) -> f64 {
        let u = (t / self.duration).clamp(0.0, 1.0);
        match self.reparam {
            Reparam::Identity => u,
            Reparam::Bump => bump_fraction(u),
        }
    }

    /// `d s / d t`.
    pub fn s_dot(&self, t: f64) -> f64 {
        let u = (t / self.duration).clamp(0.0, 1.0);
        match self.reparam {
            Reparam::Identity => 1.0 / self.duration,
            Reparam::Bump => bump_weight(u) / (bump_table().total * self.duration),
        }
    }

    /// `tau(t)`.
    pub fn tau(&self, t: f64) -> f64 {
        self.duration * self.s_of_t(t)
    }

    pub fn fg(&self, t: f64) -> (f64, f64) {
        self.interpolation.fg(self.s_of_t(t))
    }

    pub fn fg_dot(&self, t: f64) -> (f64, f64) {
        let (fp, gp) = self.interpolation.fg_prime(self.s_of_t(t));
        let sd = self.s_dot(t);
        (fp * sd, gp * sd)
    }
}

fn bump_weight(u: f64) -> f64 {
    let s = (PI * u).sin();
    if s <= 0.0 {
        0.0
    } else {
        (-1.0 / s).exp()
    }
}

struct BumpTable {
    cumulative: Vec<f64>,
    total: f64,
}

const BUMP_INTERVALS: usize = 2048;

// Five-point Gauss-Legendre rule on [-1, 1].
const GL_NODES: [f64; 5] = [
    0.0,
    -0.538_469_310_105_683_1,
    0.538_469_310_105_683_1,
    -0.906_179_845_938_664,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.568_888_888_888_888_9,
    0.478_628_670_499_366_5,
    0.478_628_670_499_366_5,
    0.236_926_885_056_189_1,
    0.236_926_885_056_189_1,
];

pub(crate) fn gauss_legendre(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(x, w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

fn bump_table() -> &'static BumpTable {
    static TABLE: OnceLock<BumpTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let h = 1.0 / BUMP_INTERVALS as f64;
        let mut cumulative = Vec::with_capacity(BUMP_INTERVALS + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for k in 0..BUMP_INTERVALS {
            acc += gauss_legendre(bump_weight, k as f64 * h, (k + 1) as f64 * h);
            cumulative.push(acc);
        }
        BumpTable { cumulative, total: acc }
    })
}

fn bump_fraction(u: f64) -> f64 {
    let table = bump_table();
    let x = u * BUMP_INTERVALS as f64;
    let k = (x.floor() as usize).min(BUMP_INTERVALS - 1);
    let left = k as f64 / BUMP_INTERVALS as f64;
    (table.cumulative[k] + gauss_legendre(bump_weight, left, u)) / table.total
}

/// Two-level path `Z -> n_theta -> -Z` with `n_theta = (cos theta, sin theta, 0)`,
/// each leg one interpolation segment. The half-turn realizing an X gate is
/// `theta = pi/2`. The schedule's reparametrization spans the whole path.
pub fn half_turn_field(schedule: &Schedule, theta: f64, t: f64) -> [f64; 3] {
    let s = schedule.s_of_t(t);
    let mid = [theta.cos(), theta.sin(), 0.0];
    let (a, b, u) = if s < 0.5 {
        ([0.0, 0.0, 1.0], mid, 2.0 * s)
    } else {
        (mid, [0.0, 0.0, -1.0], 2.0 * s - 1.0)
    };
    let (f, g) = schedule.interpolation.fg(u);
    [f * a[0] + g * b[0], f * a[1] + g * b[1], f * a[2] + g * b[2]]
}

fn half_turn_field_dot(schedule: &Schedule, theta: f64, t: f64) -> [f64; 3] {
    let s = schedule.s_of_t(t);
    let mid = [theta.cos(), theta.sin(), 0.0];
    let (a, b, u) = if s < 0.5 {
        ([0.0, 0.0, 1.0], mid, 2.0 * s)
    } else {
        (mid, [0.0, 0.0, -1.0], 2.0 * s - 1.0)
    };
    let (fp, gp) = schedule.interpolation.fg_prime(u);
    let k = 2.0 * schedule.s_dot(t);
    [
        k * (fp * a[0] + gp * b[0]),
        k * (fp * a[1] + gp * b[1]),
        k * (fp * a[2] + gp * b[2]),
    ]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticMetrics {
    /// `max_t |<1| dH/dt |0>|`.
    pub max_coupling: f64,
    /// `min_t` of the gap between the two levels.
    pub min_gap: f64,
    /// `max_coupling / min_gap^2`.
    pub ratio: f64,
}

/// Adiabaticity figures of the half-turn path with mid-axis angle `theta`.
pub fn adiabatic_metrics(schedule: &Schedule, theta: f64) -> AdiabaticMetrics {
    let samples = 4001;
    let mut max_coupling: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for k in 0..samples {
        let t = schedule.duration * k as f64 / (samples - 1) as f64;
        let n = half_turn_field(schedule, theta, t);
        let nd = half_turn_field_dot(schedule, theta, t);
        let r = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        let along = (n[0] * nd[0] + n[1] * nd[1] + n[2] * nd[2]) / r;
        let nd2 = nd[0] * nd[0] + nd[1] * nd[1] + nd[2] * nd[2];
        // For n.sigma the off-diagonal element of dH/dt has modulus |ndot_perp|.
        max_coupling = max_coupling.max((nd2 - along * along).max(0.0).sqrt());
        min_gap = min_gap.min(2.0 * r);
    }
    AdiabaticMetrics {
        max_coupling,
        min_gap,
        ratio: max_coupling / (min_gap * min_gap),
    }
}

/// Closed-form transition probability of the constant-speed half-turn,
/// with `eps = T_d / T_h`: `eps^2/(1+eps^2) sin^2(pi sqrt(1+eps^2) / (2 eps))`.
pub fn diabatic_error_closed_form(eps: f64) -> f64 {
    let q = 1.0 + eps * eps;
    let x = PI * q.sqrt() / (2.0 * eps);
    eps * eps / q * x.sin().powi(2)
}

/// Upper envelope of the closed form, `eps^2/(1+eps^2)`.
pub fn diabatic_envelope(eps: f64) -> f64 {
    eps * eps / (1.0 + eps * eps)
}

/// Transition probability out of the instantaneous eigenstate after the
/// half-turn (`theta = pi/2`) lasting `ratio * T_d` under `schedule`.
pub fn diabatic_error_numeric(schedule: &Schedule, ratio: f64) -> Result<f64> {
    diabatic_error_numeric_with(schedule, ratio, std::f64::consts::FRAC_PI_2, 1e-11)
}

pub fn diabatic_error_numeric_with(schedule: &Schedule, ratio: f64, theta: f64, tol: f64) -> Result<f64> {
    let sched = schedule.with_duration(ratio * DIABATIC_TIME);
    let h = |t: f64| linalg::bloch_operator(half_turn_field(&sched, theta, t));
    let u = integrate(&h, 0.0, sched.duration, Integrator::Magnus4, tol)?;
    let (_, v0) = linalg::eigh(&h(0.0));
    let (_, v1) = linalg::eigh(&h(sched.duration));
    let psi = &u * v0.column(0);
    // Overlap with the excited state avoids cancellation in 1 - p.
    Ok(v1.column(1).dotc(&psi).norm_sqr())
}

/// Duration ratio at which the oscillation-averaged numeric transition
/// probability crosses `target`, found by bisection. Averaging is over a
/// window of one oscillation period (`Delta ratio = 2`) around each point.
pub fn ratio_for_delta(schedule: &Schedule, target: f64, lo: f64, hi: f64) -> Result<f64> {
    let averaged = |r: f64| -> Result<f64> {
        let k = 16;
        let mut acc = 0.0;
        for j in 0..k {
            let rr = r - 1.0 + 2.0 * (j as f64 + 0.5) / k as f64;
            acc += diabatic_error_numeric_with(schedule, rr, FRAC_PI_2, 1e-10)?;
        }
        Ok(acc / k as f64)
    };
    let (mut a, mut b) = (lo, hi);
    if averaged(a)? < target || averaged(b)? > target {
        return Err(Error::InvalidSchedule(format!(
            "target {target:e} not bracketed by ratios [{lo}, {hi}]"
        )));
    }
    for _ in 0..30 {
        let m = 0.5 * (a + b);
        if averaged(m)? > target {
            a = m;
        } else {
            b = m;
        }
        if b - a < 1e-3 {
            break;
        }
    }
    Ok(0.5 * (a + b))
}

/// One point of an adiabatic sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub schedule: String,
    #[serde(rename = "T_over_Td")]
    pub t_over_td: f64,
    pub delta: f64,
    pub gap_min: f64,
    pub ratio: f64,
}

/// Numeric diabatic error and adiabaticity figures of the half-turn at
/// each duration ratio, evaluated in parallel and returned in input order.
pub fn sweep(name: &str, ratios: &[f64]) -> Result<Vec<SweepRow>> {
    let base = Schedule::by_name(name, 1.0)?;
    ratios
        .par_iter()
        .map(|&r| {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidSchedule(format!("ratio {r}")));
            }
            let m = adiabatic_metrics(&base.with_duration(r * DIABATIC_TIME), FRAC_PI_2);
            Ok(SweepRow {
                schedule: name.to_string(),
                t_over_td: r,
                delta: diabatic_error_numeric(&base, r)?,
                gap_min: m.min_gap,
                ratio: m.ratio,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_endpoints_and_monotone() {
        let s = Schedule::bump(3.0);
        assert!(s.tau(0.0).abs() < 1e-15);
        assert!((s.tau(3.0) - 3.0).abs() < 1e-12);
        let mut prev = 0.0;
        for k in 1..=300 {
            let v = s.tau(3.0 * k as f64 / 300.0);
            assert!(v >= prev);
            prev = v;
        }
        assert!((s.tau(1.5) - 1.5).abs() < 1e-12, "symmetric about the midpoint");
    }

    #[test]
    fn bump_is_flat_at_the_ends() {
        let s = Schedule::bump(1.0);
        for (t, bound) in [(1e-3, 1e-100), (1e-2, 1e-12)] {
            assert!(s.s_dot(t) < bound);
            assert!(s.s_dot(1.0 - t) < bound);
        }
    }

    #[test]
    fn interpolation_endpoints() {
        for interp in [Interpolation::Linear, Interpolation::Trig] {
            let (f0, g0) = interp.fg(0.0);
            let (f1, g1) = interp.fg(1.0);
            assert!((f0 - 1.0).abs() < 1e-15 && g0.abs() < 1e-15);
            assert!(f1.abs() < 1e-15 && (g1 - 1.0).abs() < 1e-15);
        }
        let bad = Interpolation::Custom {
            f: vec![1.0, 0.0],
            g: vec![0.0, 0.5],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn trig_half_turn_is_constant_speed() {
        let s = Schedule::trig(10.0);
        for k in 0..=10 {
            let n = half_turn_field(&s, FRAC_PI_2, k as f64);
            let phi = PI * k as f64 / 10.0;
            assert!((n[1] - phi.sin()).abs() < 1e-12 && (n[2] - phi.cos()).abs() < 1e-12);
        }
        let m = adiabatic_metrics(&s, FRAC_PI_2);
        assert!((m.max_coupling - PI / 10.0).abs() < 1e-9);
        assert!((m.min_gap - 2.0).abs() < 1e-12);
    }
}
