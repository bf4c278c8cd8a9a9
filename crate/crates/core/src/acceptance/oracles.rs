//! Independent reference computations used by the acceptance suite.

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::dynamics::{omega, Dynamics};
use crate::fvr::{backward_chord_map, ChordMapResult};
use crate::phase_space::{symplectic_product, Chord, PhasePoint};
use crate::states::{wigner0, StateSpec};

pub(crate) fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub(crate) fn uniform(rng: &mut StdRng, a: f64, b: f64) -> f64 {
    rng.random_range(a..b)
}

/// Uniform sample of the disk `|ξ| < radius`.
pub(crate) fn chord_in_disk(rng: &mut StdRng, radius: f64) -> Chord {
    let r = radius * rng.random::<f64>().sqrt();
    let a = uniform(rng, 0.0, std::f64::consts::TAU);
    Chord::new(r * a.cos(), r * a.sin())
}

/// `∫ dy/(2π) e^{−i y·Jξ} W(y)` by the trapezoid rule on a 320² grid of
/// half-width 9 around the state's center.
pub fn numerical_chord_fn(state: &StateSpec, xi: Chord) -> Complex64 {
    let n = 320;
    let half = 9.0;
    let h = 2.0 * half / (n - 1) as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let y = PhasePoint::new(state.center.q - half + i as f64 * h, state.center.p - half + j as f64 * h);
            let w = wigner0(state, y);
            let mut weight = h * h;
            if i == 0 || i == n - 1 {
                weight *= 0.5;
            }
            if j == 0 || j == n - 1 {
                weight *= 0.5;
            }
            sum += Complex64::from_polar(w * weight, -symplectic_product(y, xi));
        }
    }
    sum / (2.0 * std::f64::consts::PI)
}

/// `det ∂ξ/∂ξ′` by fourth-order central differences of the chord map.
pub fn fd_jacobian_det(x: PhasePoint, xi: Chord, t: f64, dyn_: Dynamics) -> f64 {
    let h = 1e-4;
    let map = |c: Chord| backward_chord_map(x, c, t, dyn_).xi_init;
    let d = |e: Chord| {
        let f = |k: f64| map(xi + e.scale(k * h));
        (f(-2.0) - f(2.0) + (f(1.0) - f(-1.0)).scale(8.0)).scale(1.0 / (12.0 * h))
    };
    let dq = d(Chord::new(1.0, 0.0));
    let dp = d(Chord::new(0.0, 1.0));
    dq.xi_q * dp.xi_p - dp.xi_q * dq.xi_p
}

/// `∮ p dq` of the circuit: the two trajectory legs by RK4 on
/// `(q, p, ∫p dq)` and the two straight chords by three-point Gauss rule.
pub fn circuit_by_quadrature(r: &ChordMapResult, t: f64, dyn_: Dynamics) -> f64 {
    -leg(r.eta_minus_init, t, dyn_) + straight(r.eta_minus_init, r.eta_plus_init) + leg(r.eta_plus_init, t, dyn_)
        + straight(r.eta_plus_final, r.eta_minus_final)
}

fn leg(start: PhasePoint, t: f64, dyn_: Dynamics) -> f64 {
    let w = omega(start, dyn_).max(1.0);
    let n = ((w * t) / 2e-4).ceil().max(200.0) as usize;
    let h = t / n as f64;
    let f = |y: [f64; 3]| -> [f64; 3] {
        let (q, p) = (y[0], y[1]);
        let (hq, hp) = match dyn_ {
            Dynamics::Kerr => {
                let r2 = q * q + p * p;
                (4.0 * q * r2, 4.0 * p * r2)
            }
            Dynamics::Harmonic { omega0 } => (omega0 * q, omega0 * p),
        };
        [hp, -hq, p * hp]
    };
    let mut y = [start.q, start.p, 0.0];
    for _ in 0..n {
        let k1 = f(y);
        let k2 = f([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1], 0.0]);
        let k3 = f([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1], 0.0]);
        let k4 = f([y[0] + h * k3[0], y[1] + h * k3[1], 0.0]);
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    y[2]
}

fn straight(a: PhasePoint, b: PhasePoint) -> f64 {
    let s = 0.6f64.sqrt();
    [(-s, 5.0 / 9.0), (0.0, 8.0 / 9.0), (s, 5.0 / 9.0)]
        .iter()
        .map(|&(x, w)| {
            let p = a.p + 0.5 * (x + 1.0) * (b.p - a.p);
            0.5 * w * p * (b.q - a.q)
        })
        .sum()
}
