//! Exact classical flow of the Kerr Hamiltonian `H = (q² + p²)²`, plus a
//! harmonic variant used to check exactness of the semiclassical machinery.
//!
//! Both flows are rigid rotations about the origin at an amplitude-dependent
//! angular frequency. With `q̇ = ∂H/∂p`, `ṗ = −∂H/∂q` the motion is clockwise
//! in the `(q, p)` plane: `q + ip ↦ (q + ip)·e^{−iωt}`. All rotation angles
//! are built by [`rotation_angle`] and kept unreduced (`ω·t`), since winding
//! counts enter actions and Maslov indices.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::PhasePoint;

/// Which Hamiltonian generates the classical flow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Dynamics {
    /// `H = (q² + p²)²`, `ω = 4(q² + p²)`.
    #[default]
    Kerr,
    /// `H = ω₀(q² + p²)/2`.
    Harmonic { omega0: f64 },
}

impl Dynamics {
    pub fn harmonic(omega0: f64) -> Result<Self> {
        let d = Dynamics::Harmonic { omega0 };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Dynamics::Kerr => Ok(()),
            Dynamics::Harmonic { omega0 } if omega0 > 0.0 && omega0.is_finite() => Ok(()),
            Dynamics::Harmonic { omega0 } => {
                Err(Error::Domain(format!("harmonic frequency must be positive, got {omega0}")))
            }
        }
    }

    /// Factor `κ` with `∇ω = κ·z`: 8 for Kerr, 0 for the harmonic oscillator.
    #[inline]
    pub(crate) fn omega_slope(&self) -> f64 {
        match self {
            Dynamics::Kerr => 8.0,
            Dynamics::Harmonic { .. } => 0.0,
        }
    }
}

/// Derivative of the time-`t` flow with respect to the initial point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentMap {
    pub m_qq: f64,
    pub m_qp: f64,
    pub m_pq: f64,
    pub m_pp: f64,
}

impl TangentMap {
    pub const IDENTITY: TangentMap = TangentMap { m_qq: 1.0, m_qp: 0.0, m_pq: 0.0, m_pp: 1.0 };

    #[inline]
    pub fn det(&self) -> f64 {
        self.m_qq * self.m_pp - self.m_qp * self.m_pq
    }

    #[inline]
    pub fn average(&self, other: &TangentMap) -> TangentMap {
        TangentMap {
            m_qq: 0.5 * (self.m_qq + other.m_qq),
            m_qp: 0.5 * (self.m_qp + other.m_qp),
            m_pq: 0.5 * (self.m_pq + other.m_pq),
            m_pp: 0.5 * (self.m_pp + other.m_pp),
        }
    }
}

#[inline]
pub fn hamiltonian(z: PhasePoint, dyn_: Dynamics) -> f64 {
    match dyn_ {
        Dynamics::Kerr => {
            let r2 = z.norm_sqr();
            r2 * r2
        }
        Dynamics::Harmonic { omega0 } => 0.5 * omega0 * z.norm_sqr(),
    }
}

/// Angular frequency of the orbit through `z`; conserved by the flow.
#[inline]
pub fn omega(z: PhasePoint, dyn_: Dynamics) -> f64 {
    match dyn_ {
        Dynamics::Kerr => 4.0 * z.norm_sqr(),
        Dynamics::Harmonic { omega0 } => omega0,
    }
}

/// Clockwise rotation angle accumulated by the orbit through `z` in time `t`.
#[inline]
pub fn rotation_angle(z: PhasePoint, t: f64, dyn_: Dynamics) -> f64 {
    omega(z, dyn_) * t
}

/// Rotate `z` clockwise by `theta`.
#[inline]
pub(crate) fn rotate(z: PhasePoint, theta: f64) -> PhasePoint {
    let (s, c) = theta.sin_cos();
    PhasePoint::new(c * z.q + s * z.p, -s * z.q + c * z.p)
}

/// Exact flow: `z0` evolved for time `t` (negative `t` runs backwards).
#[inline]
pub fn flow(z0: PhasePoint, t: f64, dyn_: Dynamics) -> PhasePoint {
    rotate(z0, rotation_angle(z0, t, dyn_))
}

/// Exact tangent map of [`flow`]: `R(θ) + t·R'(θ)·z0·∇ωᵀ`, `θ = ω(z0)·t`.
pub fn flow_tangent(z0: PhasePoint, t: f64, dyn_: Dynamics) -> TangentMap {
    let theta = rotation_angle(z0, t, dyn_);
    let (s, c) = theta.sin_cos();
    // R'(θ)·z0
    let vq = -s * z0.q + c * z0.p;
    let vp = -c * z0.q - s * z0.p;
    let k = dyn_.omega_slope() * t;
    let (gq, gp) = (k * z0.q, k * z0.p);
    TangentMap { m_qq: c + vq * gq, m_qp: s + vq * gp, m_pq: -s + vp * gq, m_pp: c + vp * gp }
}

/// `∫ p dq` along the trajectory of duration `t` that ends at `z_end`,
/// traversed forward in time. Negative `t` gives the arc that starts at
/// `z_end` and runs for `|t|`, with its sign flipped.
///
/// On a circle of radius `r` this is `r²·ωt/2 + (q p)|_start^end / 2`.
pub fn arc_action(z_end: PhasePoint, t: f64, dyn_: Dynamics) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let theta = rotation_angle(z_end, t, dyn_);
    let z_start = rotate(z_end, -theta);
    0.5 * z_end.norm_sqr() * theta + 0.5 * (z_end.q * z_end.p - z_start.q * z_start.p)
}

/// `H(η₊) − H(η₋)`.
#[inline]
pub fn delta_h(eta_plus: PhasePoint, eta_minus: PhasePoint, dyn_: Dynamics) -> f64 {
    hamiltonian(eta_plus, dyn_) - hamiltonian(eta_minus, dyn_)
}

/// Period of the exact Kerr quantum revival, `π/4`.
pub const fn revival_time() -> f64 {
    PI / 4.0
}

/// Time for the orbit through `center` to complete one revolution.
pub fn ehrenfest_time(center: PhasePoint, dyn_: Dynamics) -> Result<f64> {
    let w = omega(center, dyn_);
    if w == 0.0 || !w.is_finite() {
        return Err(Error::Domain(format!(
            "orbit through ({}, {}) has zero frequency; Ehrenfest time undefined",
            center.q, center.p
        )));
    }
    Ok(2.0 * PI / w)
}
