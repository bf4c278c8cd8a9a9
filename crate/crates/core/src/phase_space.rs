//! Phase-space primitives: points, chords, the symplectic form, regular grids
//! and sampled fields on them.
//!
//! Units are dimensionless with ħ = 1. Every phase in the crate is built from
//! [`symplectic_product`], whose convention is `a·Jb = a_q b_p − a_p b_q`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point `(q, p)` of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PhasePoint {
    pub q: f64,
    pub p: f64,
}

/// A displacement between two phase-space points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Chord {
    pub xi_q: f64,
    pub xi_p: f64,
}

impl PhasePoint {
    pub const ORIGIN: PhasePoint = PhasePoint { q: 0.0, p: 0.0 };

    pub const fn new(q: f64, p: f64) -> Self {
        Self { q, p }
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.q * self.q + self.p * self.p
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.q.is_finite() && self.p.is_finite()
    }

    /// Chord pointing from `other` to `self`.
    #[inline]
    pub fn chord_from(self, other: PhasePoint) -> Chord {
        Chord::new(self.q - other.q, self.p - other.p)
    }

    #[inline]
    pub fn midpoint(self, other: PhasePoint) -> PhasePoint {
        PhasePoint::new(0.5 * (self.q + other.q), 0.5 * (self.p + other.p))
    }

    #[inline]
    pub fn dot(self, other: PhasePoint) -> f64 {
        self.q * other.q + self.p * other.p
    }

    /// `q + ip`.
    #[inline]
    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.q, self.p)
    }
}

impl Chord {
    pub const ZERO: Chord = Chord { xi_q: 0.0, xi_p: 0.0 };

    pub const fn new(xi_q: f64, xi_p: f64) -> Self {
        Self { xi_q, xi_p }
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.xi_q * self.xi_q + self.xi_p * self.xi_p
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.xi_q.is_finite() && self.xi_p.is_finite()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Chord {
        Chord::new(s * self.xi_q, s * self.xi_p)
    }
}

impl Add<Chord> for PhasePoint {
    type Output = PhasePoint;
    #[inline]
    fn add(self, c: Chord) -> PhasePoint {
        PhasePoint::new(self.q + c.xi_q, self.p + c.xi_p)
    }
}

impl Sub<Chord> for PhasePoint {
    type Output = PhasePoint;
    #[inline]
    fn sub(self, c: Chord) -> PhasePoint {
        PhasePoint::new(self.q - c.xi_q, self.p - c.xi_p)
    }
}

impl Sub for PhasePoint {
    type Output = Chord;
    #[inline]
    fn sub(self, other: PhasePoint) -> Chord {
        self.chord_from(other)
    }
}

impl Neg for Chord {
    type Output = Chord;
    #[inline]
    fn neg(self) -> Chord {
        Chord::new(-self.xi_q, -self.xi_p)
    }
}

impl Add for Chord {
    type Output = Chord;
    #[inline]
    fn add(self, o: Chord) -> Chord {
        Chord::new(self.xi_q + o.xi_q, self.xi_p + o.xi_p)
    }
}

impl Sub for Chord {
    type Output = Chord;
    #[inline]
    fn sub(self, o: Chord) -> Chord {
        Chord::new(self.xi_q - o.xi_q, self.xi_p - o.xi_p)
    }
}

impl Mul<Chord> for f64 {
    type Output = Chord;
    #[inline]
    fn mul(self, c: Chord) -> Chord {
        c.scale(self)
    }
}

/// Anything with two symplectic coordinates.
pub trait Symplectic: Copy {
    fn components(self) -> (f64, f64);
}

impl Symplectic for PhasePoint {
    #[inline]
    fn components(self) -> (f64, f64) {
        (self.q, self.p)
    }
}

impl Symplectic for Chord {
    #[inline]
    fn components(self) -> (f64, f64) {
        (self.xi_q, self.xi_p)
    }
}

/// `a·Jb = a_q b_p − a_p b_q`.
#[inline]
pub fn symplectic_product<A: Symplectic, B: Symplectic>(a: A, b: B) -> f64 {
    let (aq, ap) = a.components();
    let (bq, bp) = b.components();
    aq * bp - ap * bq
}

/// Regular rectangular sampling of the phase plane.
///
/// Nodes include both extents. Samples are stored row-major with `p` as the
/// outer index running downwards from `p_max`, so a raw dump reads like an
/// image with `q` to the right and `p` up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
}

impl Grid2D {
    pub fn new(q_min: f64, q_max: f64, p_min: f64, p_max: f64, n_q: usize, n_p: usize) -> Result<Self> {
        let g = Self { q_min, q_max, p_min, p_max, n_q, n_p };
        g.validate()?;
        Ok(g)
    }

    /// Square grid `[-half, half]²` with `n` nodes per axis.
    pub fn square(half: f64, n: usize) -> Result<Self> {
        Self::new(-half, half, -half, half, n, n)
    }

    /// Square grid of half-width `half` centred on `center`.
    pub fn centered(center: PhasePoint, half: f64, n: usize) -> Result<Self> {
        Self::new(center.q - half, center.q + half, center.p - half, center.p + half, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.q_min, self.q_max, self.p_min, self.p_max].iter().all(|v| v.is_finite());
        if !finite || !(self.q_min < self.q_max) || !(self.p_min < self.p_max) {
            return Err(Error::InvalidGrid(format!(
                "extents must be finite and increasing, got q [{}, {}], p [{}, {}]",
                self.q_min, self.q_max, self.p_min, self.p_max
            )));
        }
        if self.n_q < 2 || self.n_p < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 nodes per axis, got {}x{}",
                self.n_q, self.n_p
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n_q * self.n_p
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_q - 1) as f64
    }

    #[inline]
    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_p - 1) as f64
    }

    #[inline]
    pub fn q_at(&self, iq: usize) -> f64 {
        if iq + 1 == self.n_q {
            self.q_max
        } else {
            self.q_min + iq as f64 * self.dq()
        }
    }

    /// Momentum of row `ip`; row 0 is `p_max`.
    #[inline]
    pub fn p_at(&self, ip: usize) -> f64 {
        if ip + 1 == self.n_p {
            self.p_min
        } else {
            self.p_max - ip as f64 * self.dp()
        }
    }

    #[inline]
    pub fn point(&self, index: usize) -> PhasePoint {
        let (ip, iq) = (index / self.n_q, index % self.n_q);
        PhasePoint::new(self.q_at(iq), self.p_at(ip))
    }

    pub fn q_values(&self) -> Vec<f64> {
        (0..self.n_q).map(|i| self.q_at(i)).collect()
    }

    /// Row momenta, top row first (descending).
    pub fn p_values(&self) -> Vec<f64> {
        (0..self.n_p).map(|i| self.p_at(i)).collect()
    }

    /// Largest `|x|` over the four corners.
    pub fn max_radius(&self) -> f64 {
        let qm = self.q_min.abs().max(self.q_max.abs());
        let pm = self.p_min.abs().max(self.p_max.abs());
        qm.hypot(pm)
    }

    /// Same extents and node counts, compared bitwise.
    pub fn same_as(&self, other: &Grid2D) -> bool {
        self.n_q == other.n_q
            && self.n_p == other.n_p
            && self.q_min.to_bits() == other.q_min.to_bits()
            && self.q_max.to_bits() == other.q_max.to_bits()
            && self.p_min.to_bits() == other.p_min.to_bits()
            && self.p_max.to_bits() == other.p_max.to_bits()
    }
}

/// Scalar types a [`Field`] may hold.
pub trait Sample: Copy + Send + Sync + Default + Add<Output = Self> + Mul<f64, Output = Self> + 'static {
    fn is_finite_sample(self) -> bool;
}

impl Sample for f64 {
    #[inline]
    fn is_finite_sample(self) -> bool {
        self.is_finite()
    }
}

impl Sample for Complex64 {
    #[inline]
    fn is_finite_sample(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Samples of a function on a [`Grid2D`].
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T = f64> {
    grid: Grid2D,
    values: Vec<T>,
}

pub type RealField = Field<f64>;
pub type ComplexField = Field<Complex64>;

impl<T: Sample> Field<T> {
    pub fn from_values(grid: Grid2D, values: Vec<T>) -> Result<Self> {
        grid.validate()?;
        if values.len() != grid.len() {
            return Err(Error::InvalidField(format!(
                "expected {} samples for a {}x{} grid, got {}",
                grid.len(),
                grid.n_q,
                grid.n_p,
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite_sample()) {
            return Err(Error::InvalidField(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Evaluate `f` at every node, in parallel. Each node is computed
    /// independently, so the result does not depend on scheduling.
    pub fn from_fn_par<F>(grid: Grid2D, f: F) -> Result<Self>
    where
        F: Fn(PhasePoint) -> T + Sync,
    {
        grid.validate()?;
        let values: Vec<T> = (0..grid.len()).into_par_iter().map(|i| f(grid.point(i))).collect();
        Self::from_values(grid, values)
    }

    pub fn from_fn<F>(grid: Grid2D, f: F) -> Result<Self>
    where
        F: FnMut(PhasePoint) -> T,
    {
        grid.validate()?;
        let values: Vec<T> = (0..grid.len()).map(|i| grid.point(i)).map(f).collect();
        Self::from_values(grid, values)
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    #[inline]
    pub fn at(&self, ip: usize, iq: usize) -> T {
        self.values[ip * self.grid.n_q + iq]
    }

    pub fn map<U: Sample, F: Fn(T) -> U>(&self, f: F) -> Result<Field<U>> {
        Field::from_values(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }
}

/// Two-dimensional trapezoidal estimate of `∫∫ f dq dp` over the grid extents.
pub fn integrate_field<T: Sample>(f: &Field<T>) -> T {
    let g = f.grid();
    let edge = |i: usize, n: usize| if i == 0 || i + 1 == n { 0.5 } else { 1.0 };
    let mut total = T::default();
    for ip in 0..g.n_p {
        let wp = edge(ip, g.n_p);
        let mut row = T::default();
        for iq in 0..g.n_q {
            row = row + f.at(ip, iq) * edge(iq, g.n_q);
        }
        total = total + row * wp;
    }
    total * (g.dq() * g.dp())
}
