//! Semiclassical Wigner propagation by the final value representation,
//! plus classical Liouville transport and caustic maps.
//!
//! For a final center `x′` the Wigner function is an integral over final
//! chords `ξ′`. Each chord's endpoints `η′± = x′ ± ξ′/2` are propagated back
//! along exact trajectories to `η±`, forming the initial chord
//! `ξ = η₊ − η₋`. The integrand is
//!
//! ```text
//! (1/2π) |det dξ/dξ′|^{1/2} exp{i[S − o·σπ/2]} χ(ξ)
//! ```
//!
//! with `S` the action of the circuit `η′₋ → η₋ → η₊ → η′₊ → η′₋`, `σ` the
//! Maslov counter of determinant zeros met on the way (see
//! [`DetProfile::winding_count`]) and `o` the sign of `ω(η′₊) − ω(η′₋)`,
//! see [`maslov_phase`].
//!
//! Phase convention: with `a·Jb = a_q b_p − a_p b_q` and the chord function
//! `χ(ξ) = ∫ dy/(2π) e^{−i y·Jξ} W(y)`, the phase that reproduces `W` at
//! `t = 0` is
//!
//! ```text
//! S = η₋·Jη₊ − t·[H(η₊) − H(η₋)] + ∮_C p dq
//! ```
//!
//! which reduces to `x·Jξ` at `t = 0` and for any quadratic Hamiltonian.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::{arc_action, delta_h, flow, flow_tangent, hamiltonian, omega, rotate, Dynamics};
use crate::error::{Error, Result};
use crate::phase_space::{symplectic_product, Chord, Grid2D, PhasePoint, RealField};
use crate::states::{chord_amplitude, chord_fn, wigner0, StateSpec};

/// Margin added to the grid radius when the chord half-width is automatic.
pub const AUTO_HALFWIDTH_MARGIN: f64 = 6.0;

/// Below this `|det|` a sampled determinant that did not change sign is
/// reported as a possible grazing zero.
pub const GRAZING_THRESHOLD: f64 = 1e-9;

/// How determinant zeros contribute to the Maslov counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaslovConvention {
    /// Count negative windows of the determinant traversed by its phase
    /// angle, see [`DetProfile::winding_count`]. Needs no time scan.
    #[default]
    Winding,
    /// Every zero found by the time scan adds one.
    PerZero,
    /// Downward crossings add one, upward crossings subtract one.
    SignedCrossing,
}

/// Numerical settings for the chord-plane integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureSpec {
    /// Half-width `L` of the square `[−L, L]²` of final chords. `None` picks
    /// `2·(|x′|_max + 6)` from the evaluation grid.
    pub chord_halfwidth: Option<f64>,
    /// Midpoint samples per chord axis, `M`.
    pub chord_samples: usize,
    /// Minimum number of time samples in the Maslov sign-change scan.
    pub maslov_time_samples: usize,
    /// Chords with `|χ(ξ)| < chi_cutoff/(2π)` are skipped.
    pub chi_cutoff: f64,
    /// Bisection tolerance when locating determinant zeros in time.
    pub refine_bisection_tol: f64,
    pub maslov_convention: MaslovConvention,
    /// When set, every node is recomputed with `M/2` samples and flagged if
    /// the two estimates differ by more than this.
    pub convergence_tolerance: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            chord_halfwidth: None,
            chord_samples: 512,
            maslov_time_samples: 64,
            chi_cutoff: 1e-12,
            refine_bisection_tol: 1e-8,
            maslov_convention: MaslovConvention::Winding,
            convergence_tolerance: None,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidQuadrature(m));
        if let Some(l) = self.chord_halfwidth {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("chord_halfwidth must be positive, got {l}"));
            }
        }
        if self.chord_samples < 16 {
            return bad(format!("chord_samples must be at least 16, got {}", self.chord_samples));
        }
        if self.maslov_time_samples < 8 {
            return bad(format!("maslov_time_samples must be at least 8, got {}", self.maslov_time_samples));
        }
        if !(self.chi_cutoff > 0.0 && self.chi_cutoff < 1.0) {
            return bad(format!("chi_cutoff must lie in (0, 1), got {}", self.chi_cutoff));
        }
        if !(self.refine_bisection_tol > 0.0 && self.refine_bisection_tol < 1.0) {
            return bad(format!("refine_bisection_tol must lie in (0, 1), got {}", self.refine_bisection_tol));
        }
        if let Some(tol) = self.convergence_tolerance {
            if !(tol > 0.0) {
                return bad(format!("convergence_tolerance must be positive, got {tol}"));
            }
        }
        Ok(())
    }

    /// Half-width for a grid whose farthest node sits at radius `max_radius`.
    pub fn halfwidth_for(&self, max_radius: f64) -> f64 {
        self.chord_halfwidth.unwrap_or(2.0 * (max_radius + AUTO_HALFWIDTH_MARGIN))
    }

    pub fn with_samples(mut self, m: usize) -> Self {
        self.chord_samples = m;
        self
    }
}

/// Everything the backward propagation of one final chord produces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChordMapResult {
    pub eta_plus_final: PhasePoint,
    pub eta_minus_final: PhasePoint,
    pub eta_plus_init: PhasePoint,
    pub eta_minus_init: PhasePoint,
    pub xi_init: Chord,
    pub center_init: PhasePoint,
    /// `det dξ/dξ′` at fixed `x′`.
    pub jac_det: f64,
    /// Phase `S` of the circuit, see the module docs.
    pub action: f64,
    /// Maslov counter; zero until [`with_maslov`](Self::with_maslov).
    pub maslov: i64,
}

impl ChordMapResult {
    pub fn with_maslov(mut self, maslov: i64) -> Self {
        self.maslov = maslov;
        self
    }
}

/// Propagate the final chord `ξ′` centred on `x′` back by time `t`.
///
/// Fills the geometry, the determinant (from the exact tangent maps,
/// `det[(T₊ + T₋)/2]`) and the action. The Maslov counter is left at zero.
pub fn backward_chord_map(x_final: PhasePoint, xi_final: Chord, t: f64, dyn_: Dynamics) -> ChordMapResult {
    let half = xi_final.scale(0.5);
    let eta_plus_final = x_final + half;
    let eta_minus_final = x_final - half;
    let eta_plus_init = flow(eta_plus_final, -t, dyn_);
    let eta_minus_init = flow(eta_minus_final, -t, dyn_);
    let t_plus = flow_tangent(eta_plus_final, -t, dyn_);
    let t_minus = flow_tangent(eta_minus_final, -t, dyn_);
    let mut r = ChordMapResult {
        eta_plus_final,
        eta_minus_final,
        eta_plus_init,
        eta_minus_init,
        xi_init: eta_plus_init - eta_minus_init,
        center_init: eta_plus_init.midpoint(eta_minus_init),
        jac_det: t_plus.average(&t_minus).det(),
        action: 0.0,
        maslov: 0,
    };
    r.action = action(&r, t, dyn_);
    r
}

/// `∫ p dq` along the straight segment from `a` to `b`.
#[inline]
fn segment_action(a: PhasePoint, b: PhasePoint) -> f64 {
    0.5 * (a.p + b.p) * (b.q - a.q)
}

/// `∮ p dq` around `η′₋ → η₋ → η₊ → η′₊ → η′₋`: backward along the minus
/// trajectory, across the initial chord, forward along the plus trajectory
/// and back across the final chord. Windings are kept.
pub fn circuit_action(r: &ChordMapResult, t: f64, dyn_: Dynamics) -> f64 {
    -arc_action(r.eta_minus_final, t, dyn_)
        + segment_action(r.eta_minus_init, r.eta_plus_init)
        + arc_action(r.eta_plus_final, t, dyn_)
        + segment_action(r.eta_plus_final, r.eta_minus_final)
}

/// Phase `S = η₋·Jη₊ − t·ΔH(η±) + ∮_C p dq` of a propagated chord.
pub fn action(r: &ChordMapResult, t: f64, dyn_: Dynamics) -> f64 {
    symplectic_product(r.eta_minus_init, r.eta_plus_init) - t * delta_h(r.eta_plus_init, r.eta_minus_init, dyn_)
        + circuit_action(r, t, dyn_)
}

/// The reflection part `η₋·Jη₊` of [`action`]; the remainder is the
/// trajectory contribution.
pub fn reflection_phase(r: &ChordMapResult) -> f64 {
    symplectic_product(r.eta_minus_init, r.eta_plus_init)
}

/// `det dξ/dξ′` as a function of the backward propagation time `s`, for
/// fixed final endpoints.
///
/// Both tangent maps are a rotation times a shear along the orbit,
/// `T = R(θ)(I + κτ·(Kz)zᵀ)` with `∇ω = κz` and `τ = −s`, so
///
/// ```text
/// 4·det = 2 + (2 + κ²τ²w²)·cos Δ − (κτ(r₊² − r₋²) − κ²τ²w(z₊·z₋))·sin Δ
/// ```
///
/// where `w = z₊·Jz₋` and `Δ = (ω₊ − ω₋)τ`.
#[derive(Debug, Clone, Copy)]
pub struct DetProfile {
    shear_sq: f64,
    radial: f64,
    cross: f64,
    domega: f64,
}

impl DetProfile {
    pub fn new(eta_plus_final: PhasePoint, eta_minus_final: PhasePoint, dyn_: Dynamics) -> Self {
        let kappa = dyn_.omega_slope();
        let w = symplectic_product(eta_plus_final, eta_minus_final);
        Self {
            shear_sq: kappa * kappa * w * w,
            radial: kappa * (eta_plus_final.norm_sqr() - eta_minus_final.norm_sqr()),
            cross: kappa * kappa * w * eta_plus_final.dot(eta_minus_final),
            domega: omega(eta_plus_final, dyn_) - omega(eta_minus_final, dyn_),
        }
    }

    #[inline]
    fn eval_with(&self, tau: f64, cos_d: f64, sin_d: f64) -> f64 {
        let tau2 = tau * tau;
        0.25 * (2.0 + (2.0 + self.shear_sq * tau2) * cos_d - (self.radial * tau - self.cross * tau2) * sin_d)
    }

    /// Determinant after backward propagation by `s`.
    #[inline]
    pub fn at(&self, s: f64) -> f64 {
        let tau = -s;
        let (sin_d, cos_d) = (self.domega * tau).sin_cos();
        self.eval_with(tau, cos_d, sin_d)
    }

    /// Number of uniform scan intervals over `(0, t]`: at least `min_samples`
    /// and at least eight per period of the relative rotation.
    pub fn scan_intervals(&self, t: f64, min_samples: usize) -> usize {
        let per_period = (8.0 * self.domega.abs() * t / (2.0 * PI)).ceil() as usize;
        min_samples.max(per_period).max(1)
    }

    /// Maslov counter from the phase angle of the determinant.
    ///
    /// Writing `4·det = 2 + R·cos ψ` with `R ≥ 2` and
    /// `ψ(s) = Δ + atan2(B, A)` continuous in `s`, the determinant is
    /// negative on a window around every odd multiple of `π`. With
    /// `v = −sgn(Δω)·ψ` increasing along the relative rotation, the counter
    /// is twice the number of window centers `v` has passed, plus `±1` if
    /// `det(t) < 0`. Zero pairs born inside one window when `R` dips cancel,
    /// which keeps the integrand continuous in `ξ′` away from final-time
    /// caustics. Without such folds it equals the plain zero count.
    pub fn winding_count(&self, t: f64) -> i64 {
        if t <= 0.0 || self.domega == 0.0 {
            return 0;
        }
        let tau = -t;
        let a = 2.0 + self.shear_sq * tau * tau;
        let b = self.radial * tau - self.cross * tau * tau;
        let psi = self.domega * tau + b.atan2(a);
        let v = -self.domega.signum() * psi;
        let k = ((v + PI) / (2.0 * PI)).floor();
        let frac = v - 2.0 * PI * k;
        let half = if self.at(t) < 0.0 {
            if frac > 0.0 {
                1
            } else {
                -1
            }
        } else {
            0
        };
        2 * k as i64 + half
    }

    /// Sign-change scan of `s ↦ det(s)` on `(0, t]`.
    fn scan(&self, t: f64, intervals: usize, convention: MaslovConvention) -> (i64, bool) {
        let h = t / intervals as f64;
        // rotate (cos, sin) of Δ by a fixed step instead of calling sin_cos
        let (step_sin, step_cos) = (-self.domega * h).sin_cos();
        let (mut cos_d, mut sin_d) = (1.0, 0.0);
        let mut prev = 1.0f64;
        let mut count = 0i64;
        let mut grazing = false;
        for k in 1..=intervals {
            let c = cos_d * step_cos - sin_d * step_sin;
            let s = sin_d * step_cos + cos_d * step_sin;
            cos_d = c;
            sin_d = s;
            if k % 64 == 0 {
                // resynchronise against drift
                let exact = (-self.domega * h * k as f64).sin_cos();
                sin_d = exact.0;
                cos_d = exact.1;
            }
            let cur = self.eval_with(-h * k as f64, cos_d, sin_d);
            if (prev > 0.0 && cur <= 0.0) || (prev < 0.0 && cur >= 0.0) {
                if cur != 0.0 || k == intervals {
                    count += crossing_weight(prev, convention);
                } else {
                    // landed exactly on zero; decide at the next sample
                    continue;
                }
            } else if cur.abs() < GRAZING_THRESHOLD {
                grazing = true;
            }
            prev = cur;
        }
        (count, grazing)
    }
}

#[inline]
fn crossing_weight(before: f64, convention: MaslovConvention) -> i64 {
    match convention {
        MaslovConvention::PerZero | MaslovConvention::Winding => 1,
        MaslovConvention::SignedCrossing if before > 0.0 => 1,
        MaslovConvention::SignedCrossing => -1,
    }
}

/// Result of a Maslov scan.
#[derive(Debug, Clone, PartialEq)]
pub struct MaslovCount {
    pub count: i64,
    /// Refined times of each detected zero, ascending.
    pub zero_times: Vec<f64>,
    /// A sample came within [`GRAZING_THRESHOLD`] of zero without a sign
    /// change, so a tangential zero may have been missed.
    pub grazing: bool,
}

/// Locate zeros of `s ↦ det dξ/dξ′(x′, ξ′, s)` for `s ∈ (0, t]` by a
/// sign-change scan followed by bisection of every bracket. The returned
/// `count` follows `spec.maslov_convention`.
pub fn maslov_count(x_final: PhasePoint, xi_final: Chord, t: f64, spec: &QuadratureSpec, dyn_: Dynamics) -> MaslovCount {
    let half = xi_final.scale(0.5);
    let profile = DetProfile::new(x_final + half, x_final - half, dyn_);
    if t <= 0.0 {
        return MaslovCount { count: 0, zero_times: Vec::new(), grazing: false };
    }
    let n = profile.scan_intervals(t, spec.maslov_time_samples);
    let h = t / n as f64;
    let mut count = 0;
    let mut zero_times = Vec::new();
    let mut grazing = false;
    let mut s_prev = 0.0;
    let mut f_prev = 1.0;
    for k in 1..=n {
        let s = if k == n { t } else { h * k as f64 };
        let f = profile.at(s);
        if f_prev * f < 0.0 || (f == 0.0 && f_prev != 0.0) {
            let (mut lo, mut hi, mut f_lo) = (s_prev, s, f_prev);
            while hi - lo > spec.refine_bisection_tol {
                let mid = 0.5 * (lo + hi);
                let f_mid = profile.at(mid);
                if f_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (f_mid > 0.0) == (f_lo > 0.0) {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            zero_times.push(0.5 * (lo + hi));
            count += crossing_weight(f_prev, spec.maslov_convention);
        } else if f.abs() < GRAZING_THRESHOLD {
            grazing = true;
        }
        if f != 0.0 {
            f_prev = f;
        }
        s_prev = s;
    }
    if spec.maslov_convention == MaslovConvention::Winding {
        count = profile.winding_count(t);
    }
    MaslovCount { count, zero_times, grazing }
}

/// Sense of the relative rotation of the two chord endpoints: `+1` when the
/// plus endpoint turns faster, `−1` when slower, `0` when they co-rotate.
#[inline]
pub fn orientation(omega_plus: f64, omega_minus: f64) -> f64 {
    if omega_plus > omega_minus {
        1.0
    } else if omega_plus < omega_minus {
        -1.0
    } else {
        0.0
    }
}

/// Phase carried by `σ` determinant zeros, `−orientation·σπ/2`.
///
/// Swapping the endpoints maps `ξ′ → −ξ′`, leaves the zero count unchanged
/// and flips the orientation, so the integrand at `−ξ′` is the complex
/// conjugate of that at `ξ′` and the chord integral is real.
#[inline]
pub fn maslov_phase(sigma: i64, orientation: f64) -> f64 {
    -orientation * sigma as f64 * FRAC_PI_2
}

/// Integrand of the chord-plane integral at one final chord.
pub fn fvr_integrand(
    x_final: PhasePoint,
    xi_final: Chord,
    t: f64,
    state: &StateSpec,
    spec: &QuadratureSpec,
    dyn_: Dynamics,
) -> Complex64 {
    let r = backward_chord_map(x_final, xi_final, t, dyn_);
    let chi = chord_fn(state, r.xi_init);
    if chi.norm() < spec.chi_cutoff / (2.0 * PI) {
        return Complex64::new(0.0, 0.0);
    }
    let sigma = maslov_count(x_final, xi_final, t, spec, dyn_).count;
    let orient = orientation(omega(r.eta_plus_final, dyn_), omega(r.eta_minus_final, dyn_));
    let phase = r.action + maslov_phase(sigma, orient);
    Complex64::from_polar(r.jac_det.abs().sqrt() / (2.0 * PI), phase) * chi
}

/// Per-node evaluator with everything that depends only on `(x′, t)`
/// hoisted out of the chord loop.
struct NodeKernel<'a> {
    x: PhasePoint,
    t: f64,
    state: &'a StateSpec,
    spec: &'a QuadratureSpec,
    dyn_: Dynamics,
    chi_floor: f64,
}

impl NodeKernel<'_> {
    /// Same value as [`fvr_integrand`], using the telescoped action
    /// `S = (η₋·Jη₊ + η′₋·Jη′₊)/2 + t·[(r₊²ω₊ − r₋²ω₋)/2 − ΔH]`
    /// and the closed-form determinant.
    #[inline]
    fn eval(&self, xi_final: Chord) -> Complex64 {
        let half = xi_final.scale(0.5);
        let ep_f = self.x + half;
        let em_f = self.x - half;
        let wp = omega(ep_f, self.dyn_);
        let wm = omega(em_f, self.dyn_);
        let ep = rotate(ep_f, -wp * self.t);
        let em = rotate(em_f, -wm * self.t);
        let xi = ep - em;
        let amplitude = chord_amplitude(self.state, xi.norm_sqr());
        if amplitude.abs() < self.chi_floor {
            return Complex64::new(0.0, 0.0);
        }
        let chi = Complex64::from_polar(amplitude, -symplectic_product(self.state.center, xi));
        let profile = DetProfile::new(ep_f, em_f, self.dyn_);
        let det = profile.at(self.t);
        let (rp2, rm2) = (ep_f.norm_sqr(), em_f.norm_sqr());
        let trajectory = 0.5 * (rp2 * wp - rm2 * wm) - (hamiltonian(ep_f, self.dyn_) - hamiltonian(em_f, self.dyn_));
        let s = 0.5 * (symplectic_product(em, ep) + symplectic_product(em_f, ep_f)) + self.t * trajectory;
        // equal frequencies leave 4·det = 4 + κ²τ²w² > 0
        let sigma = match self.spec.maslov_convention {
            MaslovConvention::Winding => profile.winding_count(self.t),
            _ if self.t > 0.0 && profile.domega != 0.0 => {
                let n = profile.scan_intervals(self.t, self.spec.maslov_time_samples);
                profile.scan(self.t, n, self.spec.maslov_convention).0
            }
            _ => 0,
        };
        Complex64::from_polar(det.abs().sqrt() / (2.0 * PI), s + maslov_phase(sigma, orientation(wp, wm))) * chi
    }

    /// Midpoint rule over `[−L, L]²` with `m` samples per axis, summed in a
    /// fixed row-major order.
    fn integrate(&self, halfwidth: f64, m: usize) -> Complex64 {
        let h = 2.0 * halfwidth / m as f64;
        let mut total = Complex64::new(0.0, 0.0);
        for i in 0..m {
            let xi_p = -halfwidth + (i as f64 + 0.5) * h;
            let mut row = Complex64::new(0.0, 0.0);
            for j in 0..m {
                let xi_q = -halfwidth + (j as f64 + 0.5) * h;
                row += self.eval(Chord::new(xi_q, xi_p));
            }
            total += row;
        }
        total * (h * h)
    }
}

/// One semiclassical Wigner value with its quadrature diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FvrValue {
    pub value: f64,
    /// `|Im|` of the chord integral; zero for an exact integral.
    pub imaginary: f64,
    /// Estimate with `M/2` samples, when a convergence check was requested.
    pub coarse: Option<f64>,
    pub converged: bool,
}

fn fvr_node(x_final: PhasePoint, t: f64, state: &StateSpec, spec: &QuadratureSpec, dyn_: Dynamics, halfwidth: f64) -> FvrValue {
    let kernel = NodeKernel { x: x_final, t, state, spec, dyn_, chi_floor: spec.chi_cutoff / (2.0 * PI) };
    let fine = kernel.integrate(halfwidth, spec.chord_samples);
    let (coarse, converged) = match spec.convergence_tolerance {
        Some(tol) => {
            let c = kernel.integrate(halfwidth, spec.chord_samples / 2).re;
            (Some(c), (c - fine.re).abs() <= tol)
        }
        None => (None, true),
    };
    FvrValue { value: fine.re, imaginary: fine.im.abs(), coarse, converged }
}

/// Semiclassical Wigner function at `x′` after time `t`.
pub fn fvr_wigner(x_final: PhasePoint, t: f64, state: &StateSpec, spec: &QuadratureSpec, dyn_: Dynamics) -> Result<FvrValue> {
    check_inputs(t, state, spec, dyn_)?;
    Ok(fvr_node(x_final, t, state, spec, dyn_, spec.halfwidth_for(x_final.norm())))
}

fn check_inputs(t: f64, state: &StateSpec, spec: &QuadratureSpec, dyn_: Dynamics) -> Result<()> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("propagation time must be finite and non-negative, got {t}")));
    }
    state.validate()?;
    spec.validate()?;
    dyn_.validate()
}

/// A semiclassical field with per-node diagnostics.
#[derive(Debug, Clone)]
pub struct FvrField {
    pub field: RealField,
    /// `|Im|` of the chord integral at every node.
    pub imaginary: RealField,
    /// Nodes whose `M` and `M/2` estimates disagreed beyond tolerance.
    pub unconverged: usize,
    pub max_coarse_difference: Option<f64>,
    pub halfwidth: f64,
}

/// [`fvr_wigner`] at every node of `grid`, in parallel over nodes. Each node
/// sums its chord grid in a fixed order, so the output is independent of the
/// number of worker threads.
pub fn fvr_field(grid: Grid2D, t: f64, state: &StateSpec, spec: &QuadratureSpec, dyn_: Dynamics) -> Result<FvrField> {
    check_inputs(t, state, spec, dyn_)?;
    grid.validate()?;
    let halfwidth = spec.halfwidth_for(grid.max_radius());
    let nodes: Vec<FvrValue> =
        (0..grid.len()).into_par_iter().map(|i| fvr_node(grid.point(i), t, state, spec, dyn_, halfwidth)).collect();
    let unconverged = nodes.iter().filter(|v| !v.converged).count();
    let max_coarse_difference =
        spec.convergence_tolerance.map(|_| nodes.iter().filter_map(|v| v.coarse.map(|c| (c - v.value).abs())).fold(0.0, f64::max));
    Ok(FvrField {
        field: RealField::from_values(grid, nodes.iter().map(|v| v.value).collect())?,
        imaginary: RealField::from_values(grid, nodes.iter().map(|v| v.imaginary).collect())?,
        unconverged,
        max_coarse_difference,
        halfwidth,
    })
}

/// Classical transport of the initial Wigner function,
/// `W_cl(x′, t) = W₀(flow(x′, −t))`.
pub fn liouville_field(grid: Grid2D, t: f64, state: &StateSpec, dyn_: Dynamics) -> Result<RealField> {
    state.validate()?;
    dyn_.validate()?;
    RealField::from_fn_par(grid, |x| wigner0(state, flow(x, -t, dyn_)))
}

/// `det dξ/dξ′` sampled over a grid of final chords (`q` axis ↔ `ξ′_q`,
/// `p` axis ↔ `ξ′_p`). Its zero contours are the caustics.
pub fn caustic_det_map(x_final: PhasePoint, t: f64, chord_grid: Grid2D, dyn_: Dynamics) -> Result<RealField> {
    dyn_.validate()?;
    RealField::from_fn_par(chord_grid, |c| backward_chord_map(x_final, Chord::new(c.q, c.p), t, dyn_).jac_det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::revival_time;

    struct Rng(u64);
    impl Rng {
        fn next(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64
        }
        fn range(&mut self, a: f64, b: f64) -> f64 {
            a + (b - a) * self.next()
        }
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec::default().validate().is_ok());
        assert!(QuadratureSpec { chord_samples: 8, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { maslov_time_samples: 4, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { chi_cutoff: 0.0, ..Default::default() }.validate().is_err());
        assert!(QuadratureSpec { chord_halfwidth: Some(-1.0), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn zero_time_map_is_identity() {
        let x = PhasePoint::new(5.0, 2.0);
        let xi = Chord::new(0.7, -1.3);
        let r = backward_chord_map(x, xi, 0.0, Dynamics::Kerr);
        assert!((r.xi_init - xi).norm() < 1e-15);
        assert!((r.center_init - x).norm() < 1e-15);
        assert!((r.jac_det - 1.0).abs() < 1e-15);
        // degenerate circuit: only the reflection term x·Jξ survives
        assert!(circuit_action(&r, 0.0, Dynamics::Kerr).abs() < 1e-12);
        assert!((r.action - symplectic_product(x, xi)).abs() < 1e-12);
    }

    #[test]
    fn chord_map_invariants() {
        let r = backward_chord_map(PhasePoint::new(1.0, -2.0), Chord::new(3.0, 0.5), 0.2, Dynamics::Kerr);
        assert!((r.eta_plus_final.midpoint(r.eta_minus_final) - PhasePoint::new(1.0, -2.0)).norm() < 1e-15);
        assert!((r.eta_plus_final - r.eta_minus_final - Chord::new(3.0, 0.5)).norm() < 1e-15);
        assert!((r.eta_plus_init - r.eta_minus_init - r.xi_init).norm() < 1e-15);
        assert!((r.eta_plus_init.midpoint(r.eta_minus_init) - r.center_init).norm() < 1e-15);
    }

    fn fd_jacobian_det(x: PhasePoint, xi: Chord, t: f64, dyn_: Dynamics, h: f64) -> f64 {
        let map = |c: Chord| backward_chord_map(x, c, t, dyn_).xi_init;
        let dq = (map(xi + Chord::new(h, 0.0)) - map(xi + Chord::new(-h, 0.0))).scale(0.5 / h);
        let dp = (map(xi + Chord::new(0.0, h)) - map(xi + Chord::new(0.0, -h))).scale(0.5 / h);
        dq.xi_q * dp.xi_p - dp.xi_q * dq.xi_p
    }

    #[test]
    fn jac_det_matches_finite_differences() {
        let mut rng = Rng(0x9E3779B97F4A7C15);
        for _ in 0..100 {
            let x = PhasePoint::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let xi = Chord::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let t = rng.range(0.0, 0.1);
            let exact = backward_chord_map(x, xi, t, Dynamics::Kerr).jac_det;
            let fd = fd_jacobian_det(x, xi, t, Dynamics::Kerr, 1e-6);
            // the determinant is a difference of O(entries²) terms
            let r = backward_chord_map(x, xi + Chord::new(1e-6, 0.0), t, Dynamics::Kerr);
            let scale = (r.eta_plus_final.norm_sqr() + r.eta_minus_final.norm_sqr()) * t * 8.0 + 1.0;
            assert!((exact - fd).abs() <= 1e-5 * exact.abs().max(scale * scale * 1e-3).max(1.0), "{exact} vs {fd}");
        }
    }

    #[test]
    fn det_profile_matches_tangent_maps() {
        let mut rng = Rng(12345);
        for _ in 0..500 {
            let x = PhasePoint::new(rng.range(-8.0, 8.0), rng.range(-8.0, 8.0));
            let xi = Chord::new(rng.range(-20.0, 20.0), rng.range(-20.0, 20.0));
            let t = rng.range(0.0, 0.5);
            for dyn_ in [Dynamics::Kerr, Dynamics::Harmonic { omega0: 1.3 }] {
                let r = backward_chord_map(x, xi, t, dyn_);
                let p = DetProfile::new(r.eta_plus_final, r.eta_minus_final, dyn_);
                let scale = 1.0 + (8.0 * t * (r.eta_plus_final.norm_sqr() + r.eta_minus_final.norm_sqr())).powi(2);
                assert!((p.at(t) - r.jac_det).abs() < 1e-12 * scale, "{} vs {}", p.at(t), r.jac_det);
            }
        }
    }

    #[test]
    fn det_symmetric_under_chord_reversal() {
        let mut rng = Rng(777);
        for _ in 0..100 {
            let x = PhasePoint::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let xi = Chord::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
            let t = rng.range(0.0, 0.4);
            let a = backward_chord_map(x, xi, t, Dynamics::Kerr).jac_det;
            let b = backward_chord_map(x, -xi, t, Dynamics::Kerr).jac_det;
            assert!((a - b).abs() <= 1e-9 * (1.0 + a.abs()));
        }
    }

    /// `∫ p dq` along the backward/forward legs by RK4 and along the two
    /// straight chords by Gauss–Legendre; independent of `arc_action`.
    fn circuit_by_quadrature(r: &ChordMapResult, t: f64, dyn_: Dynamics) -> f64 {
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
            // p(s) dq(s) on the segment, 3-point Gauss rule (exact for linear p)
            let nodes = [(-(0.6f64).sqrt(), 5.0 / 9.0), (0.0, 8.0 / 9.0), ((0.6f64).sqrt(), 5.0 / 9.0)];
            nodes.iter().map(|&(x, w)| {
                let s = 0.5 * (x + 1.0);
                let p = a.p + s * (b.p - a.p);
                0.5 * w * p * (b.q - a.q)
            }).sum()
        }
        -leg(r.eta_minus_init, t, dyn_) + straight(r.eta_minus_init, r.eta_plus_init) + leg(r.eta_plus_init, t, dyn_)
            + straight(r.eta_plus_final, r.eta_minus_final)
    }

    #[test]
    fn action_matches_leg_quadrature() {
        let mut rng = Rng(4242);
        for _ in 0..100 {
            let x = PhasePoint::new(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
            let xi = Chord::new(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
            let t = rng.range(0.0, 0.1);
            let r = backward_chord_map(x, xi, t, Dynamics::Kerr);
            let closed = circuit_action(&r, t, Dynamics::Kerr);
            let quad = circuit_by_quadrature(&r, t, Dynamics::Kerr);
            assert!((closed - quad).abs() < 1e-8 * (1.0 + closed.abs()), "{closed} vs {quad}");
        }
    }

    #[test]
    fn hot_path_matches_public_integrand() {
        let mut rng = Rng(99);
        let spec = QuadratureSpec::default();
        for _ in 0..300 {
            let x = PhasePoint::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let xi = Chord::new(rng.range(-8.0, 8.0), rng.range(-8.0, 8.0));
            let t = rng.range(0.0, 0.4);
            let state = StateSpec::coherent(5.0, 0.0);
            let kernel = NodeKernel { x, t, state: &state, spec: &spec, dyn_: Dynamics::Kerr, chi_floor: spec.chi_cutoff / (2.0 * PI) };
            let a = kernel.eval(xi);
            let b = fvr_integrand(x, xi, t, &state, &spec, Dynamics::Kerr);
            assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn small_chord_trajectory_phase_is_cubic() {
        // t·ΔH − ∮ vanishes to third order in the chord length
        let x = PhasePoint::new(2.0, 1.0);
        let t = 0.05;
        let dir = Chord::new(0.6, -0.8);
        let traj = |eps: f64| {
            let r = backward_chord_map(x, dir.scale(eps), t, Dynamics::Kerr);
            r.action - reflection_phase(&r)
        };
        let (a, b) = (traj(1e-2), traj(2e-2));
        assert!(a.abs() < 1e-4);
        assert!((b / a - 8.0).abs() < 0.05, "ratio {}", b / a);
    }

    #[test]
    fn full_revival_action() {
        // endpoints on rings |η|² = 2j wind exactly j times in π/4
        for (jp, jm) in [(1u32, 1u32), (3, 1), (2, 5), (12, 11)] {
            let rp = (2.0 * jp as f64).sqrt();
            let rm = (2.0 * jm as f64).sqrt();
            let ep = PhasePoint::new(rp * 0.3f64.cos(), rp * 0.3f64.sin());
            let em = PhasePoint::new(rm * 2.1f64.cos(), rm * 2.1f64.sin());
            let r = backward_chord_map(ep.midpoint(em), ep - em, revival_time(), Dynamics::Kerr);
            assert!((r.eta_plus_init - ep).norm() < 1e-10);
            let excess = r.action - reflection_phase(&r);
            let expect = PI * ((jp * jp) as f64 - (jm * jm) as f64);
            assert!((excess - expect).abs() < 1e-8, "{excess} vs {expect}");
        }
    }

    #[test]
    fn harmonic_has_no_caustics() {
        let mut rng = Rng(5);
        let spec = QuadratureSpec::default();
        let h = Dynamics::Harmonic { omega0: 1.0 };
        for _ in 0..50 {
            let x = PhasePoint::new(rng.range(-5.0, 5.0), rng.range(-5.0, 5.0));
            let xi = Chord::new(rng.range(-5.0, 5.0), rng.range(-5.0, 5.0));
            let t = rng.range(0.0, 10.0);
            assert!((backward_chord_map(x, xi, t, h).jac_det - 1.0).abs() < 1e-12);
            assert_eq!(maslov_count(x, xi, t, &spec, h).count, 0);
        }
        let g = Grid2D::square(4.0, 21).unwrap();
        let m = caustic_det_map(PhasePoint::new(1.0, 2.0), 3.0, g, h).unwrap();
        assert!(m.values().iter().all(|d| (d - 1.0).abs() < 1e-12));
    }

    #[test]
    fn maslov_zero_times_are_zeros() {
        let spec = QuadratureSpec::default();
        let x = PhasePoint::new(5.0, 2.0);
        let xi = Chord::new(1.5, -0.5);
        let m = maslov_count(x, xi, 0.3, &spec, Dynamics::Kerr);
        assert!(m.count > 0);
        assert_eq!(m.zero_times.len() as i64, m.count);
        let half = xi.scale(0.5);
        let prof = DetProfile::new(x + half, x - half, Dynamics::Kerr);
        for &s in &m.zero_times {
            let r = backward_chord_map(x, xi, s, Dynamics::Kerr);
            assert!(r.jac_det.abs() < 1e-5 * (1.0 + prof.radial.abs() * s), "det {} at {s}", r.jac_det);
        }
    }

    #[test]
    fn zero_count_is_monotone_in_time() {
        let spec = QuadratureSpec { maslov_convention: MaslovConvention::PerZero, ..Default::default() };
        let mut rng = Rng(31337);
        for _ in 0..30 {
            let x = PhasePoint::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let xi = Chord::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let mut last = 0;
            for k in 1..=20 {
                let c = maslov_count(x, xi, 0.02 * k as f64, &spec, Dynamics::Kerr).count;
                assert!(c >= last);
                last = c;
            }
        }
    }

    fn ring_chord(jp: u32, jm: u32, ap: f64, am: f64) -> (PhasePoint, Chord) {
        let (rp, rm) = ((2.0 * jp as f64).sqrt(), (2.0 * jm as f64).sqrt());
        let ep = PhasePoint::new(rp * ap.cos(), rp * ap.sin());
        let em = PhasePoint::new(rm * am.cos(), rm * am.sin());
        (ep.midpoint(em), ep - em)
    }

    #[test]
    fn winding_count_at_revival() {
        let spec = QuadratureSpec::default();
        for jp in 1..=20u32 {
            for jm in 1..=20u32 {
                for k in 0..3 {
                    let (x, xi) = ring_chord(jp, jm, 0.37 * (jp * 7 + jm * 3 + k) as f64, 1.91 * (jp + 5 * jm + 2 * k) as f64);
                    let c = maslov_count(x, xi, revival_time(), &spec, Dynamics::Kerr).count;
                    assert_eq!(c, 2 * (jp as i64 - jm as i64).abs(), "j+={jp} j-={jm} k={k}");
                }
            }
        }
    }

    #[test]
    fn fold_pair_is_not_counted() {
        // this ring pair has an extra zero pair early on, where R dips
        // inside the first negative window
        let (x, xi) = ring_chord(12, 8, 0.37 * 109.0, 1.91 * 54.0);
        let per_zero = QuadratureSpec { maslov_convention: MaslovConvention::PerZero, ..Default::default() };
        let m = maslov_count(x, xi, revival_time(), &per_zero, Dynamics::Kerr);
        assert_eq!(m.count, 10);
        assert_eq!(maslov_count(x, xi, revival_time(), &QuadratureSpec::default(), Dynamics::Kerr).count, 8);
    }

    #[test]
    fn winding_agrees_with_zero_count_up_to_pairs() {
        let winding = QuadratureSpec::default();
        let per_zero = QuadratureSpec { maslov_convention: MaslovConvention::PerZero, ..Default::default() };
        let mut rng = Rng(2024);
        let mut equal = 0;
        for _ in 0..500 {
            let x = PhasePoint::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let xi = Chord::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
            let t = rng.range(0.0, 0.4);
            let a = maslov_count(x, xi, t, &winding, Dynamics::Kerr).count;
            let b = maslov_count(x, xi, t, &per_zero, Dynamics::Kerr).count;
            assert_eq!((a - b).rem_euclid(2), 0, "{a} vs {b}");
            assert!(a.abs() <= b);
            equal += usize::from(a == b);
        }
        assert!(equal > 450, "{equal}");
    }

    /// Largest jump of the integrand phase (mod 2π) between neighbouring
    /// chords on a segment, ignoring steps near final-time caustics.
    fn max_phase_jump(x: PhasePoint, from: Chord, to: Chord, t: f64, spec: &QuadratureSpec) -> f64 {
        let n = 4000;
        let phase = |xi: Chord| {
            let r = backward_chord_map(x, xi, t, Dynamics::Kerr);
            let o = orientation(omega(r.eta_plus_final, Dynamics::Kerr), omega(r.eta_minus_final, Dynamics::Kerr));
            (r.action + maslov_phase(maslov_count(x, xi, t, spec, Dynamics::Kerr).count, o), r.jac_det)
        };
        let mut worst = 0.0f64;
        let mut prev = phase(from);
        for k in 1..=n {
            let cur = phase(from + (to - from).scale(k as f64 / n as f64));
            if prev.1.signum() == cur.1.signum() && cur.1.abs() > 0.05 && prev.1.abs() > 0.05 {
                let d = (cur.0 - prev.0).rem_euclid(2.0 * PI);
                worst = worst.max(d.min(2.0 * PI - d));
            }
            prev = cur;
        }
        worst
    }

    #[test]
    fn integrand_phase_is_continuous_away_from_caustics() {
        let (x, xi) = ring_chord(12, 8, 0.37 * 109.0, 1.91 * 54.0);
        let (from, to) = (xi + Chord::new(-0.4, 0.3), xi + Chord::new(0.4, -0.3));
        let t = revival_time();
        assert!(max_phase_jump(x, from, to, t, &QuadratureSpec::default()) < 0.3);
        let per_zero = QuadratureSpec { maslov_convention: MaslovConvention::PerZero, ..Default::default() };
        assert!(max_phase_jump(x, from, to, t, &per_zero) > 3.0);
    }

    #[test]
    fn scan_and_bisection_agree() {
        let spec = QuadratureSpec::default();
        let mut rng = Rng(8);
        for _ in 0..200 {
            let x = PhasePoint::new(rng.range(-6.0, 6.0), rng.range(-6.0, 6.0));
            let xi = Chord::new(rng.range(-10.0, 10.0), rng.range(-10.0, 10.0));
            let t = rng.range(0.0, 0.4);
            let half = xi.scale(0.5);
            let p = DetProfile::new(x + half, x - half, Dynamics::Kerr);
            let n = p.scan_intervals(t, spec.maslov_time_samples);
            for conv in [MaslovConvention::PerZero, MaslovConvention::SignedCrossing] {
                let s = QuadratureSpec { maslov_convention: conv, ..spec };
                assert_eq!(p.scan(t, n, conv).0, maslov_count(x, xi, t, &s, Dynamics::Kerr).count);
            }
        }
    }

    #[test]
    fn caustics_appear_with_time() {
        let g = Grid2D::square(2.0, 101).unwrap();
        let x = PhasePoint::new(5.0, 2.0);
        let early = caustic_det_map(x, 0.013, g, Dynamics::Kerr).unwrap();
        let late = caustic_det_map(x, 0.071, g, Dynamics::Kerr).unwrap();
        assert!(early.values().iter().all(|&d| d > 0.0));
        assert!(late.values().iter().any(|&d| d < 0.0));
        let zero = caustic_det_map(x, 0.0, g, Dynamics::Kerr).unwrap();
        assert!(zero.values().iter().all(|&d| (d - 1.0).abs() < 1e-15));
    }

    #[test]
    fn integrand_edge_cases() {
        let spec = QuadratureSpec::default();
        let state = StateSpec::coherent(5.0, 0.0);
        let x = PhasePoint::new(4.0, 1.0);
        // zero chord: coincident trajectories
        let v = fvr_integrand(x, Chord::ZERO, 0.2, &state, &spec, Dynamics::Kerr);
        let r = backward_chord_map(x, Chord::ZERO, 0.2, Dynamics::Kerr);
        assert!((v.norm() - r.jac_det.abs().sqrt() / (2.0 * PI).powi(2)).abs() < 1e-15);
        // long chords are cut off
        let v = fvr_integrand(PhasePoint::ORIGIN, Chord::new(20.0, 0.0), 0.0, &state, &spec, Dynamics::Kerr);
        assert_eq!(v, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn integrand_vanishes_on_caustics() {
        let spec = QuadratureSpec::default();
        let state = StateSpec::coherent(5.0, 0.0);
        let x = PhasePoint::new(5.0, 2.0);
        let t = 0.071;
        // walk along a ray until det changes sign, then bisect onto the zero
        let dir = Chord::new(0.6, 0.8);
        let det = |s: f64| backward_chord_map(x, dir.scale(s), t, Dynamics::Kerr).jac_det;
        let mut s0 = 0.0;
        while det(s0 + 0.01) > 0.0 {
            s0 += 0.01;
            assert!(s0 < 4.0, "no caustic on the ray");
        }
        let (mut lo, mut hi) = (s0, s0 + 0.01);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if det(mid) > 0.0 { lo = mid } else { hi = mid }
        }
        let v = fvr_integrand(x, dir.scale(lo), t, &state, &spec, Dynamics::Kerr);
        assert!(v.norm().is_finite() && v.norm() < 1e-6);
    }

    #[test]
    fn zero_time_fvr_reconstructs_initial_state() {
        let state = StateSpec::coherent(5.0, 0.0);
        let spec = QuadratureSpec { chord_halfwidth: Some(12.0), chord_samples: 256, ..Default::default() };
        let v = fvr_wigner(PhasePoint::new(5.0, 0.0), 0.0, &state, &spec, Dynamics::Kerr).unwrap();
        assert!((v.value - 1.0 / PI).abs() < 1e-6, "{}", v.value);
        assert!(v.imaginary < 1e-6);
        let z = PhasePoint::new(5.6, -0.3);
        let v = fvr_wigner(z, 0.0, &state, &spec, Dynamics::Kerr).unwrap();
        assert!((v.value - wigner0(&state, z)).abs() < 1e-6);
    }

    #[test]
    fn harmonic_fvr_is_rotated_initial_state() {
        let state = StateSpec::displaced_fock(1, 2.0, 0.5);
        let h = Dynamics::Harmonic { omega0: 1.0 };
        let spec = QuadratureSpec { chord_halfwidth: Some(12.0), chord_samples: 256, ..Default::default() };
        for t in [0.4, 2.5] {
            for z in [PhasePoint::new(0.3, -1.9), PhasePoint::new(-1.0, 1.0)] {
                let v = fvr_wigner(z, t, &state, &spec, h).unwrap();
                let exact = wigner0(&state, flow(z, -t, h));
                assert!((v.value - exact).abs() < 1e-6, "t={t} {z:?}: {} vs {exact}", v.value);
            }
        }
    }

    #[test]
    fn rejects_negative_time() {
        let state = StateSpec::coherent(1.0, 0.0);
        assert!(fvr_wigner(PhasePoint::ORIGIN, -0.1, &state, &QuadratureSpec::default(), Dynamics::Kerr).is_err());
    }

    #[test]
    fn liouville_transport() {
        let state = StateSpec::coherent(5.0, 0.0);
        let g = Grid2D::square(8.0, 33).unwrap();
        let f = liouville_field(g, 0.0, &state, Dynamics::Kerr).unwrap();
        for (i, w) in f.values().iter().enumerate() {
            assert_eq!(*w, wigner0(&state, g.point(i)));
        }
        let t = 0.01;
        let f = liouville_field(g, t, &state, Dynamics::Kerr).unwrap();
        for (i, w) in f.values().iter().enumerate() {
            let z = g.point(i);
            assert!((w - wigner0(&state, flow(z, -t, Dynamics::Kerr))).abs() < 1e-15);
        }
    }
}
