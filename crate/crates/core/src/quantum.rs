//! Exact quantum evolution under `H = (2n̂ + 1)²` and Wigner synthesis from
//! Fock coefficients. This is the reference every semiclassical result is
//! checked against.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase_space::{Grid2D, RealField};
use crate::special::{hermite_functions, laguerre_functions};
use crate::states::FockVector;

/// Largest imaginary part tolerated in a synthesized Wigner sample.
pub const IMAGINARY_RESIDUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub fock: FockVector,
    pub time: f64,
}

/// Kerr eigenphase `(2n+1)²·t`.
#[inline]
fn kerr_phase(n: usize, t: f64) -> f64 {
    let e = (2 * n + 1) as f64;
    e * e * t
}

/// `c_n(t) = c_n(0)·e^{−i(2n+1)²t}`.
pub fn evolve(fock: &FockVector, t: f64) -> EvolvedState {
    let coefficients = fock
        .coefficients()
        .iter()
        .enumerate()
        .map(|(n, &c)| c * Complex64::from_polar(1.0, -kerr_phase(n, t)))
        .collect();
    EvolvedState { fock: fock.with_coefficients(coefficients), time: t }
}

impl EvolvedState {
    pub fn initial(fock: FockVector) -> Self {
        Self { fock, time: 0.0 }
    }
}

/// `|⟨ψ(0)|ψ(t)⟩|²` from the Fock populations.
pub fn autocorr_exact(state0: &FockVector, t: f64) -> f64 {
    let amp: Complex64 = state0
        .coefficients()
        .iter()
        .enumerate()
        .map(|(n, c)| c.norm_sqr() * Complex64::from_polar(1.0, -kerr_phase(n, t)))
        .sum();
    amp.norm_sqr()
}

/// Per-state pair weights `c_{n+k} c̄_n (−1)ⁿ/π`, indexed `[k][n]`.
struct PairWeights {
    by_offset: Vec<Vec<Complex64>>,
}

impl PairWeights {
    fn new(c: &[Complex64]) -> Self {
        let n_max = c.len() - 1;
        let by_offset = (0..=n_max)
            .map(|k| {
                (0..=n_max - k)
                    .map(|n| {
                        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                        c[n + k] * c[n].conj() * (sign / PI)
                    })
                    .collect()
            })
            .collect();
        Self { by_offset }
    }
}

/// Wigner function at `(q, p)` as the complex double sum over `|m⟩⟨n|`
/// kernels. Returns `(real part, imaginary residue)`.
///
/// For `m = n + k ≥ n` the kernel is
/// `W_{mn}(z) = ((−1)ⁿ/π)·e^{−ikφ}·ℓ_n^{(k)}(2|z|²)`, with `z = q + ip = |z|e^{iφ}`
/// and `ℓ` the normalized Laguerre function; `W_{nm} = conj(W_{mn})`.
fn wigner_at(weights: &PairWeights, q: f64, p: f64, buf: &mut Vec<f64>) -> (f64, f64) {
    let n_max = weights.by_offset.len() - 1;
    let r2 = q * q + p * p;
    let x = 2.0 * r2;
    let unit_conj = if r2 > 0.0 { Complex64::new(q, -p) / r2.sqrt() } else { Complex64::new(1.0, 0.0) };
    let mut diag = Complex64::new(0.0, 0.0);
    let mut upper = Complex64::new(0.0, 0.0);
    let mut lower = Complex64::new(0.0, 0.0);
    let mut rot = Complex64::new(1.0, 0.0);
    for (k, w) in weights.by_offset.iter().enumerate() {
        laguerre_functions(k, x, n_max - k, buf);
        let radial: Complex64 = w.iter().zip(buf.iter()).map(|(wn, l)| wn * l).sum();
        if k == 0 {
            diag = radial;
        } else {
            let kernel_sum = radial * rot;
            upper += kernel_sum;
            // c_n c̄_{n+k} conj(W_{n+k,n}), accumulated independently
            let lower_radial: Complex64 = w.iter().zip(buf.iter()).map(|(wn, l)| wn.conj() * l).sum();
            lower += lower_radial * rot.conj();
        }
        rot *= unit_conj;
    }
    let total = diag + upper + lower;
    (total.re, total.im)
}

/// Sample the Wigner function of `state` on `grid`. Nodes are independent and
/// filled in parallel.
pub fn wigner_of_state(state: &EvolvedState, grid: Grid2D) -> Result<RealField> {
    grid.validate()?;
    let weights = PairWeights::new(state.fock.coefficients());
    let samples: Vec<(f64, f64)> = (0..grid.len())
        .into_par_iter()
        .map_init(Vec::new, |buf, i| {
            let z = grid.point(i);
            wigner_at(&weights, z.q, z.p, buf)
        })
        .collect();
    let residue = samples.iter().fold(0.0f64, |m, s| m.max(s.1.abs()));
    if residue > IMAGINARY_RESIDUE_TOLERANCE {
        return Err(Error::ImaginaryResidue(residue));
    }
    RealField::from_values(grid, samples.into_iter().map(|s| s.0).collect())
}

/// Which variable a marginal keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Position,
    Momentum,
}

/// A sampled one-dimensional density.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub abscissa: Vec<f64>,
    pub density: Vec<f64>,
}

/// Trapezoidal integral of a real field over the conjugate variable:
/// `∫ W dp` per column (position) or `∫ W dq` per row (momentum).
/// Momentum abscissae are returned in ascending order.
pub fn marginal(field: &RealField, axis: Axis) -> Curve {
    let g = field.grid();
    let edge = |i: usize, n: usize| if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
    match axis {
        Axis::Position => {
            let density = (0..g.n_q)
                .map(|iq| (0..g.n_p).map(|ip| edge(ip, g.n_p) * field.at(ip, iq)).sum::<f64>() * g.dp())
                .collect();
            Curve { abscissa: g.q_values(), density }
        }
        Axis::Momentum => {
            let mut abscissa = Vec::with_capacity(g.n_p);
            let mut density = Vec::with_capacity(g.n_p);
            for ip in (0..g.n_p).rev() {
                abscissa.push(g.p_at(ip));
                density.push((0..g.n_q).map(|iq| edge(iq, g.n_q) * field.at(ip, iq)).sum::<f64>() * g.dq());
            }
            Curve { abscissa, density }
        }
    }
}

/// `|⟨q|ψ⟩|²` directly from the Fock coefficients and Hermite functions.
pub fn position_probability(state: &EvolvedState, q: f64) -> f64 {
    let c = state.fock.coefficients();
    let mut buf = Vec::new();
    hermite_functions(q, c.len() - 1, &mut buf);
    c.iter().zip(&buf).map(|(cn, h)| cn * h).sum::<Complex64>().norm_sqr()
}

/// `|⟨p|ψ⟩|²`, using `⟨p|n⟩ = (−i)ⁿ φ_n(p)`.
pub fn momentum_probability(state: &EvolvedState, p: f64) -> f64 {
    let c = state.fock.coefficients();
    let mut buf = Vec::new();
    hermite_functions(p, c.len() - 1, &mut buf);
    let phases = [Complex64::new(1.0, 0.0), Complex64::new(0.0, -1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, 1.0)];
    c.iter().zip(&buf).enumerate().map(|(n, (cn, h))| cn * phases[n % 4] * *h).sum::<Complex64>().norm_sqr()
}
