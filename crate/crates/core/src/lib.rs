//! Semiclassical propagation of Wigner functions by the phase-space final
//! value representation (FVR), applied to the Kerr oscillator.
//!
//! The crate carries three propagators for the same initial state:
//!
//! * [`quantum`]: exact Fock-basis evolution under `H = (2n̂ + 1)²` and Wigner
//!   synthesis from Laguerre kernels,
//! * [`fvr`]: the semiclassical FVR integral over final chords, together with
//!   classical Liouville transport and caustic maps,
//! * and the analytic classical flow in [`dynamics`] both of them build on.
//!
//! [`diagnostics`] compares the resulting fields and [`cli`] drives whole runs
//! from a config file.

pub mod acceptance;
pub mod cli;
pub mod diagnostics;
pub mod dynamics;
pub mod error;
pub mod fvr;
pub mod phase_space;
pub mod quantum;
pub mod special;
pub mod states;

pub use dynamics::Dynamics;
pub use error::{Error, Result};
pub use fvr::QuadratureSpec;
pub use phase_space::{Chord, Field, Grid2D, PhasePoint, RealField};
pub use states::{FockVector, StateSpec};
