//! Initial states in the three encodings used downstream: Wigner function,
//! chord function and truncated Fock coefficients.
//!
//! A displaced Fock state `D(α)|n⟩` with `α = (⟨q̂⟩ + i⟨p̂⟩)/√2` covers both
//! supported kinds; the coherent state is `n = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{symplectic_product, Chord, PhasePoint};
use crate::special::{laguerre, laguerre_functions};

/// Default bound on the Fock probability mass discarded by truncation.
pub const DEFAULT_TRUNCATION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateKind {
    Coherent,
    DisplacedFock { n: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    #[serde(flatten)]
    pub kind: StateKind,
    pub center: PhasePoint,
}

impl StateSpec {
    pub fn coherent(q: f64, p: f64) -> Self {
        Self { kind: StateKind::Coherent, center: PhasePoint::new(q, p) }
    }

    pub fn displaced_fock(n: u32, q: f64, p: f64) -> Self {
        Self { kind: StateKind::DisplacedFock { n }, center: PhasePoint::new(q, p) }
    }

    /// Fock excitation of the undisplaced state.
    pub fn excitation(&self) -> u32 {
        match self.kind {
            StateKind::Coherent => 0,
            StateKind::DisplacedFock { n } => n,
        }
    }

    /// `α = (⟨q̂⟩ + i⟨p̂⟩)/√2`.
    pub fn alpha(&self) -> Complex64 {
        self.center.to_complex() / std::f64::consts::SQRT_2
    }

    pub fn validate(&self) -> Result<()> {
        if !self.center.is_finite() {
            return Err(Error::InvalidState("center must be finite".into()));
        }
        Ok(())
    }
}

/// Initial Wigner function, `((−1)ⁿ/π)·e^{−|z−y₀|²}·L_n(2|z−y₀|²)`.
pub fn wigner0(spec: &StateSpec, z: PhasePoint) -> f64 {
    let r2 = (z - spec.center).norm_sqr();
    let n = spec.excitation();
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let radial = match n {
        0 => 1.0,
        1 => 1.0 - 2.0 * r2,
        _ => laguerre(n as usize, 0.0, 2.0 * r2),
    };
    sign * radial * (-r2).exp() / PI
}

/// Chord function `χ(ξ) = ∫ dy/(2π) e^{−i y·Jξ} W(y)`:
/// `(1/2π)·e^{−|ξ|²/4}·L_n(|ξ|²/2)·e^{−i y₀·Jξ}`.
pub fn chord_fn(spec: &StateSpec, xi: Chord) -> Complex64 {
    Complex64::from_polar(chord_amplitude(spec, xi.norm_sqr()), -symplectic_product(spec.center, xi))
}

/// Real, signed factor of [`chord_fn`] that depends only on `|ξ|²`.
#[inline]
pub(crate) fn chord_amplitude(spec: &StateSpec, r2: f64) -> f64 {
    chord_modulus_factor(spec.excitation(), r2) * (-0.25 * r2).exp() / (2.0 * PI)
}

#[inline]
fn chord_modulus_factor(n: u32, r2: f64) -> f64 {
    match n {
        0 => 1.0,
        1 => 1.0 - 0.5 * r2,
        _ => laguerre(n as usize, 0.0, 0.5 * r2),
    }
}

/// Truncated Fock-basis coefficients `c_0..c_N` of a state.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    coefficients: Vec<Complex64>,
    tail_mass: f64,
}

impl FockVector {
    /// Wrap raw coefficients. `tail_mass` is the probability the truncation
    /// discards.
    pub fn new(coefficients: Vec<Complex64>, tail_mass: f64) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidState("Fock vector needs at least one coefficient".into()));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidState("non-finite Fock coefficient".into()));
        }
        let v = Self { coefficients, tail_mass };
        if v.norm_sqr() > 1.0 + 1e-12 {
            return Err(Error::InvalidState(format!("Fock norm {} exceeds one", v.norm_sqr())));
        }
        Ok(v)
    }

    #[inline]
    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    /// Highest retained number state `N`.
    #[inline]
    pub fn truncation(&self) -> usize {
        self.coefficients.len() - 1
    }

    #[inline]
    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm_sqr()).sum()
    }

    pub(crate) fn with_coefficients(&self, coefficients: Vec<Complex64>) -> Self {
        Self { coefficients, tail_mass: self.tail_mass }
    }
}

/// `⟨m|D(α)|n⟩` for `m = 0..=m_max`.
fn displacement_column(alpha: Complex64, n: usize, m_max: usize) -> Vec<Complex64> {
    let x = alpha.norm_sqr();
    let unit = if x > 0.0 { alpha / x.sqrt() } else { Complex64::new(1.0, 0.0) };
    let mut out = vec![Complex64::new(0.0, 0.0); m_max + 1];
    let mut buf = Vec::new();
    // m ≥ n: e^{i(m−n)θ} ℓ_n^{(m−n)}(|α|²)
    for (m, slot) in out.iter_mut().enumerate().skip(n) {
        let k = m - n;
        laguerre_functions(k, x, n, &mut buf);
        *slot = unit.powu(k as u32) * buf[n];
    }
    // m < n: (−e^{−iθ})^{n−m} ℓ_m^{(n−m)}(|α|²)
    for (m, slot) in out.iter_mut().enumerate().take(n.min(m_max + 1)) {
        let k = n - m;
        laguerre_functions(k, x, m, &mut buf);
        *slot = (-unit.conj()).powu(k as u32) * buf[m];
    }
    out
}

/// Fock coefficients `c_0..c_N` of the state, with the discarded tail mass.
/// Fails when the tail exceeds `tolerance`.
pub fn fock_coefficients(spec: &StateSpec, truncation: usize, tolerance: f64) -> Result<FockVector> {
    spec.validate()?;
    if truncation < 1 {
        return Err(Error::InvalidState("Fock truncation must be at least 1".into()));
    }
    let n = spec.excitation() as usize;
    let alpha = spec.alpha();
    // Extend well past N to measure the discarded mass directly.
    let mean = alpha.norm_sqr() + n as f64;
    let extended = (truncation + 64).max((2.0 * mean + 12.0 * mean.sqrt() + 64.0) as usize);
    let column = displacement_column(alpha, n, extended);
    let tail: f64 = column[truncation + 1..].iter().map(|c| c.norm_sqr()).sum();
    if tail > tolerance {
        return Err(Error::Truncation { truncation, tail, tolerance });
    }
    FockVector::new(column[..=truncation].to_vec(), tail)
}
