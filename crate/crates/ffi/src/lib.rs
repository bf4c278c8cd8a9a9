//! C interface to `kerr_fvr`.
//!
//! Fields are returned as opaque [`KfField`] handles that the caller
//! releases with [`kf_field_free`]. Every fallible call returns a
//! [`KfStatus`]; on failure [`kf_last_error`] describes the problem. Panics
//! are caught at the boundary and reported as [`KfStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use kerr_fvr::cli::grid_io;
use kerr_fvr::fvr::{self, MaslovConvention};
use kerr_fvr::quantum::{autocorr_exact, evolve, wigner_of_state};
use kerr_fvr::states::{chord_fn, fock_coefficients, wigner0, DEFAULT_TRUNCATION_TOLERANCE};
use kerr_fvr::{Chord, Dynamics, Error, Grid2D, PhasePoint, QuadratureSpec, RealField, StateSpec};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidGrid = 3,
    Domain = 4,
    Truncation = 5,
    NotConverged = 6,
    Io = 7,
    Format = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfStateKind {
    Coherent = 0,
    DisplacedFock = 1,
}

/// Initial state: a coherent state, or a Fock state `|n⟩` displaced to
/// `(q, p)`. `n` is ignored for coherent states.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KfState {
    pub kind: KfStateKind,
    pub n: u32,
    pub q: f64,
    pub p: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfDynamicsKind {
    Kerr = 0,
    Harmonic = 1,
}

/// `omega0` is only read for the harmonic oscillator.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KfDynamics {
    pub kind: KfDynamicsKind,
    pub omega0: f64,
}

/// Node-centered grid over `[q_min, q_max] × [p_min, p_max]`.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KfGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KfMaslov {
    Winding = 0,
    PerZero = 1,
    SignedCrossing = 2,
}

/// Chord-plane quadrature settings. Non-positive `chord_halfwidth` picks
/// the half-width from the grid; non-positive `convergence_tolerance`
/// disables the `M/2` check.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct KfQuadrature {
    pub chord_halfwidth: f64,
    pub chord_samples: usize,
    pub maslov_time_samples: usize,
    pub chi_cutoff: f64,
    pub refine_bisection_tol: f64,
    pub maslov: KfMaslov,
    pub convergence_tolerance: f64,
}

/// Opaque real field on a grid.
pub struct KfField {
    field: RealField,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> KfStatus {
    match e {
        Error::InvalidGrid(_) | Error::GridMismatch => KfStatus::InvalidGrid,
        Error::Domain(_) | Error::DegenerateNormalization(_) | Error::ImaginaryResidue(_) => KfStatus::Domain,
        Error::Truncation { .. } => KfStatus::Truncation,
        Error::NotConverged(_) => KfStatus::NotConverged,
        Error::Io(_) => KfStatus::Io,
        Error::Format(_) => KfStatus::Format,
        Error::InvalidField(_) | Error::InvalidState(_) | Error::InvalidQuadrature(_) | Error::Config { .. } => {
            KfStatus::InvalidArgument
        }
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), (KfStatus, String)>) -> KfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => KfStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            KfStatus::Panic
        }
    }
}

fn lift(e: Error) -> (KfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(name: &str) -> (KfStatus, String) {
    (KfStatus::NullPointer, format!("`{name}` is null"))
}

unsafe fn read<'a, T>(p: *const T, name: &str) -> Result<&'a T, (KfStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(p: *mut T, name: &str, v: T) -> Result<(), (KfStatus, String)> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(v);
    Ok(())
}

impl KfState {
    fn spec(&self) -> StateSpec {
        match self.kind {
            KfStateKind::Coherent => StateSpec::coherent(self.q, self.p),
            KfStateKind::DisplacedFock => StateSpec::displaced_fock(self.n, self.q, self.p),
        }
    }
}

impl KfDynamics {
    fn dynamics(&self) -> Result<Dynamics, (KfStatus, String)> {
        match self.kind {
            KfDynamicsKind::Kerr => Ok(Dynamics::Kerr),
            KfDynamicsKind::Harmonic => Dynamics::harmonic(self.omega0).map_err(lift),
        }
    }
}

impl KfGrid {
    fn grid(&self) -> Result<Grid2D, (KfStatus, String)> {
        Grid2D::new(self.q_min, self.q_max, self.p_min, self.p_max, self.n_q, self.n_p).map_err(lift)
    }
}

impl From<&Grid2D> for KfGrid {
    fn from(g: &Grid2D) -> Self {
        Self { q_min: g.q_min, q_max: g.q_max, p_min: g.p_min, p_max: g.p_max, n_q: g.n_q, n_p: g.n_p }
    }
}

impl KfQuadrature {
    fn spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            chord_halfwidth: (self.chord_halfwidth > 0.0).then_some(self.chord_halfwidth),
            chord_samples: self.chord_samples,
            maslov_time_samples: self.maslov_time_samples,
            chi_cutoff: self.chi_cutoff,
            refine_bisection_tol: self.refine_bisection_tol,
            maslov_convention: match self.maslov {
                KfMaslov::Winding => MaslovConvention::Winding,
                KfMaslov::PerZero => MaslovConvention::PerZero,
                KfMaslov::SignedCrossing => MaslovConvention::SignedCrossing,
            },
            convergence_tolerance: (self.convergence_tolerance > 0.0).then_some(self.convergence_tolerance),
        }
    }
}

fn boxed(field: RealField) -> *mut KfField {
    Box::into_raw(Box::new(KfField { field }))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn kf_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn kf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Fill `out` with the default quadrature settings.
///
/// # Safety
/// `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_quadrature_default(out: *mut KfQuadrature) -> KfStatus {
    guard(|| {
        let d = QuadratureSpec::default();
        let maslov = match d.maslov_convention {
            MaslovConvention::Winding => KfMaslov::Winding,
            MaslovConvention::PerZero => KfMaslov::PerZero,
            MaslovConvention::SignedCrossing => KfMaslov::SignedCrossing,
        };
        write(
            out,
            "out",
            KfQuadrature {
                chord_halfwidth: d.chord_halfwidth.unwrap_or(0.0),
                chord_samples: d.chord_samples,
                maslov_time_samples: d.maslov_time_samples,
                chi_cutoff: d.chi_cutoff,
                refine_bisection_tol: d.refine_bisection_tol,
                maslov,
                convergence_tolerance: d.convergence_tolerance.unwrap_or(0.0),
            },
        )
    })
}

/// Initial Wigner function at `(q, p)`.
///
/// # Safety
/// `state` must be null or point to a valid `KfState`; `out` must be null
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_wigner0(state: *const KfState, q: f64, p: f64, out: *mut f64) -> KfStatus {
    guard(|| {
        let spec = read(state, "state")?.spec();
        spec.validate().map_err(lift)?;
        write(out, "out", wigner0(&spec, PhasePoint::new(q, p)))
    })
}

/// Chord function `χ(ξ)` of the initial state, as real and imaginary parts.
///
/// # Safety
/// `state` must be null or valid; `re` and `im` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn kf_chord_fn(state: *const KfState, xi_q: f64, xi_p: f64, re: *mut f64, im: *mut f64) -> KfStatus {
    guard(|| {
        let spec = read(state, "state")?.spec();
        spec.validate().map_err(lift)?;
        let c = chord_fn(&spec, Chord::new(xi_q, xi_p));
        write(re, "re", c.re)?;
        write(im, "im", c.im)
    })
}

/// Exact squared autocorrelation `|⟨ψ(0)|ψ(t)⟩|²` with `truncation` Fock
/// levels.
///
/// # Safety
/// `state` must be null or valid; `out` must be null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_autocorr_exact(state: *const KfState, truncation: usize, t: f64, out: *mut f64) -> KfStatus {
    guard(|| {
        let spec = read(state, "state")?.spec();
        let fock = fock_coefficients(&spec, truncation, DEFAULT_TRUNCATION_TOLERANCE).map_err(lift)?;
        write(out, "out", autocorr_exact(&fock, t))
    })
}

/// Exact Wigner function at time `t` under the Kerr Hamiltonian.
///
/// # Safety
/// Pointer arguments must be null or valid; on success `*out` receives a
/// handle to release with `kf_field_free`.
#[no_mangle]
pub unsafe extern "C" fn kf_quantum_field(
    state: *const KfState,
    truncation: usize,
    t: f64,
    grid: *const KfGrid,
    out: *mut *mut KfField,
) -> KfStatus {
    guard(|| {
        let spec = read(state, "state")?.spec();
        let grid = read(grid, "grid")?.grid()?;
        if out.is_null() {
            return Err(null("out"));
        }
        let fock = fock_coefficients(&spec, truncation, DEFAULT_TRUNCATION_TOLERANCE).map_err(lift)?;
        let w = wigner_of_state(&evolve(&fock, t), grid).map_err(lift)?;
        write(out, "out", boxed(w))
    })
}

/// Semiclassical Wigner function by the final value representation.
/// `imaginary` may be null; when given it receives the field of absolute
/// imaginary residues. `unconverged` may be null.
///
/// # Safety
/// Pointer arguments must be null or valid. Returned handles must be
/// released with `kf_field_free`.
#[no_mangle]
pub unsafe extern "C" fn kf_fvr_field(
    state: *const KfState,
    dynamics: *const KfDynamics,
    quadrature: *const KfQuadrature,
    t: f64,
    grid: *const KfGrid,
    out: *mut *mut KfField,
    imaginary: *mut *mut KfField,
    unconverged: *mut usize,
) -> KfStatus {
    guard(|| {
        let spec = read(state, "state")?.spec();
        let dyn_ = read(dynamics, "dynamics")?.dynamics()?;
        let quad = read(quadrature, "quadrature")?.spec();
        let grid = read(grid, "grid")?.grid()?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = fvr::fvr_field(grid, t, &spec, &quad, dyn_).map_err(lift)?;
        if !unconverged.is_null() {
            unconverged.write(f.unconverged);
        }
        if !imaginary.is_null() {
            imaginary.write(boxed(f.imaginary));
        }
        write(out, "out", boxed(f.field))
    })
}

/// Classical Liouville transport of the initial Wigner function.
///
/// # Safety
/// Pointer arguments must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn kf_liouville_field(
    state: *const KfState,
    dynamics: *const KfDynamics,
    t: f64,
    grid: *const KfGrid,
    out: *mut *mut KfField,
) -> KfStatus {
    guard(|| {
        let spec = read(state, "state")?.spec();
        let dyn_ = read(dynamics, "dynamics")?.dynamics()?;
        let grid = read(grid, "grid")?.grid()?;
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, "out", boxed(fvr::liouville_field(grid, t, &spec, dyn_).map_err(lift)?))
    })
}

/// `det ∂ξ/∂ξ′` over a grid of final chords at final center `(x_q, x_p)`.
///
/// # Safety
/// Pointer arguments must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn kf_caustic_det_map(
    x_q: f64,
    x_p: f64,
    t: f64,
    chord_grid: *const KfGrid,
    dynamics: *const KfDynamics,
    out: *mut *mut KfField,
) -> KfStatus {
    guard(|| {
        let grid = read(chord_grid, "chord_grid")?.grid()?;
        let dyn_ = read(dynamics, "dynamics")?.dynamics()?;
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, "out", boxed(fvr::caustic_det_map(PhasePoint::new(x_q, x_p), t, grid, dyn_).map_err(lift)?))
    })
}

/// Grid of a field.
///
/// # Safety
/// `field` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_grid(field: *const KfField, out: *mut KfGrid) -> KfStatus {
    guard(|| {
        let f = read(field, "field")?;
        write(out, "out", KfGrid::from(f.field.grid()))
    })
}

/// Pointer to the `n_q·n_p` values, row-major with `q` fastest. Owned by
/// the handle; null if `field` is null.
///
/// # Safety
/// `field` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn kf_field_values(field: *const KfField) -> *const f64 {
    field.as_ref().map_or(ptr::null(), |f| f.field.values().as_ptr())
}

/// Trapezoid-rule integral of a field.
///
/// # Safety
/// `field` must be null or a live handle; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_integral(field: *const KfField, out: *mut f64) -> KfStatus {
    guard(|| {
        let f = read(field, "field")?;
        write(out, "out", kerr_fvr::phase_space::integrate_field(&f.field))
    })
}

unsafe fn path_arg<'a>(path: *const c_char) -> Result<&'a Path, (KfStatus, String)> {
    if path.is_null() {
        return Err(null("path"));
    }
    let s = CStr::from_ptr(path).to_str().map_err(|_| (KfStatus::InvalidArgument, "path is not UTF-8".to_string()))?;
    Ok(Path::new(s))
}

/// Write a field in the binary grid format.
///
/// # Safety
/// `field` must be null or a live handle; `path` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn kf_field_write(field: *const KfField, path: *const c_char) -> KfStatus {
    guard(|| {
        let f = read(field, "field")?;
        grid_io::write_real(path_arg(path)?, &f.field).map_err(lift)
    })
}

/// Read a grid file; complex files yield their real part.
///
/// # Safety
/// `path` must be null or NUL-terminated; `out` null or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kf_field_read(path: *const c_char, out: *mut *mut KfField) -> KfStatus {
    guard(|| {
        let p = path_arg(path)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = grid_io::read(p).and_then(|d| d.real_part()).map_err(lift)?;
        write(out, "out", boxed(f))
    })
}

/// Release a field handle. Null is ignored.
///
/// # Safety
/// `field` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn kf_field_free(field: *mut KfField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}
