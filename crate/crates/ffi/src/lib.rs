//! C interface to the point-set construction and dispersion library.
//!
//! Every entry point is `extern "C"`, catches panics, and reports failures
//! through [`DisperseStatus`]. Library objects cross the boundary as opaque
//! pointers created and released by matching `_new`/`_build` and `_free`
//! calls; results are written through out-pointers only on success. A
//! human-readable message for the most recent failure on the calling
//! thread is available from [`disperse_last_error`].
//!
//! The matching C header is generated into `include/disperse.h` when this
//! crate is built.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use disperse::{
    best_known_upper, certificate_net, estimate_dispersion, format_points, grid_oracle,
    inverse_dispersion_upper_cube, inverse_dispersion_upper_torus, largest_empty_box_capped,
    largest_empty_torus_box_capped, parse_points, random_only, random_piercing_bound, two_phase,
    two_phase_piercing_bound, verify_net, BoxFamily, Error, ExactCaps, Net, PiecewiseBranch,
    PointSet,
};

/// Outcome of a call. Zero is success; anything else is a failure and
/// leaves a message readable via `disperse_last_error`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DisperseStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Arguments outside the supported domain.
    InvalidParams = 2,
    /// No finite grid certifies the requested (eps, delta) pair.
    NoGridResolution = 3,
    /// The net would exceed the requested cardinality cap.
    NetCapExceeded = 4,
    /// A size-formula hypothesis failed for the given net and delta.
    HypothesisFailed = 5,
    /// The exact solver's dimension or point-count cap was exceeded.
    ExactnessCap = 6,
    /// Rejection sampling could not find boxes of the requested volume.
    SamplingStalled = 7,
    /// Malformed point-set text.
    ParseError = 8,
    /// Filesystem failure.
    IoError = 9,
    /// An internal invariant failed; the operation was rolled back.
    Panic = 10,
}

/// Piecewise branch identifiers for `disperse_best_known_bound`.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DisperseBranch {
    LargeEps = 0,
    MidLoglog = 1,
    TinyEps = 2,
}

/// Flat summary of one construction run.
#[repr(C)]
pub struct DisperseReport {
    /// Root RNG seed the run used.
    pub seed: u64,
    /// Random-phase draw count.
    pub phase1_draws: u64,
    /// Net cardinality the run pierced against.
    pub net_size: u64,
    /// Net elements the random phase left unpierced.
    pub bad_count: u64,
    /// Deterministic repair points added.
    pub repair_count: u64,
    /// Final distinct point count.
    pub total: u64,
    /// Extra attempts beyond the first.
    pub retries: u32,
    /// True when the size certificate applies to this run.
    pub accepted: bool,
    /// True for the two-phase method, false for pure random piercing.
    pub two_phase: bool,
    /// Certified size bound for the method used.
    pub size_bound: f64,
}

/// Opaque handle to a point set in the unit cube.
pub struct DispersePoints(PointSet);

/// Opaque handle to a box net (approximation family).
pub struct DisperseNet(Net);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let clean: String = msg.chars().map(|c| if c == '\0' { ' ' } else { c }).collect();
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(clean).unwrap());
}

fn fail(e: &Error) -> DisperseStatus {
    set_error(&e.to_string());
    match e {
        Error::InvalidParams(_) => DisperseStatus::InvalidParams,
        Error::NoGridResolution { .. } => DisperseStatus::NoGridResolution,
        Error::NetCapExceeded { .. } => DisperseStatus::NetCapExceeded,
        Error::TwoPhaseHypothesis { .. } | Error::RandomOnlyHypothesis { .. } => {
            DisperseStatus::HypothesisFailed
        }
        Error::ExactnessCap { .. } => DisperseStatus::ExactnessCap,
        Error::SamplingStalled { .. } => DisperseStatus::SamplingStalled,
        Error::Parse { .. } => DisperseStatus::ParseError,
        Error::Io(_) => DisperseStatus::IoError,
    }
}

fn fail_with(status: DisperseStatus, msg: &str) -> DisperseStatus {
    set_error(msg);
    status
}

fn guard<F: FnOnce() -> DisperseStatus>(f: F) -> DisperseStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown internal panic".into());
            set_error(&msg);
            DisperseStatus::Panic
        }
    }
}

fn family(torus: bool) -> BoxFamily {
    if torus {
        BoxFamily::Torus
    } else {
        BoxFamily::Cube
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn disperse_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the calling thread's most recent error message into `buf`
/// (always NUL-terminated, truncated to `cap` bytes) and returns the full
/// length including the terminator. `buf` may be null to query the length.
///
/// # Safety
/// `buf` must point to at least `cap` writable bytes when non-null.
#[no_mangle]
pub unsafe extern "C" fn disperse_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}

/// Builds a point set from `count` points of `dim` coordinates each, laid
/// out row-major in `coords`. All coordinates must lie in `[0, 1]`.
///
/// # Safety
/// `coords` must point to `dim * count` readable doubles (it may be null
/// when `count` is zero), and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_new(
    dim: usize,
    coords: *const f64,
    count: usize,
    out: *mut *mut DispersePoints,
) -> DisperseStatus {
    guard(|| {
        if out.is_null() || (coords.is_null() && count > 0) {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        }
        if dim == 0 {
            return fail_with(DisperseStatus::InvalidParams, "dimension must be >= 1");
        }
        let flat = if count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(coords, dim * count)
        };
        for (i, &x) in flat.iter().enumerate() {
            if !(0.0..=1.0).contains(&x) {
                return fail_with(
                    DisperseStatus::InvalidParams,
                    &format!("coordinate {i} = {x} outside [0,1]"),
                );
            }
        }
        let ps = PointSet::from_flat(dim, flat);
        *out = Box::into_raw(Box::new(DispersePoints(ps)));
        DisperseStatus::Ok
    })
}

/// Parses point-set text (one point per line, comma-separated coordinates,
/// `#` comments allowed).
///
/// # Safety
/// `text` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_parse(
    text: *const c_char,
    out: *mut *mut DispersePoints,
) -> DisperseStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        }
        let s = match CStr::from_ptr(text).to_str() {
            Ok(s) => s,
            Err(_) => return fail_with(DisperseStatus::ParseError, "text is not valid UTF-8"),
        };
        match parse_points(s, None) {
            Ok(ps) => {
                *out = Box::into_raw(Box::new(DispersePoints(ps)));
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a point set. Null is a no-op.
///
/// # Safety
/// `p` must be null or a pointer returned by this library that has not
/// been freed already.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_free(p: *mut DispersePoints) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `p` must be null or a live point-set handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_count(p: *const DispersePoints) -> usize {
    p.as_ref().map_or(0, |p| p.0.len())
}

/// Point dimension, or 0 for null.
///
/// # Safety
/// `p` must be null or a live point-set handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_dim(p: *const DispersePoints) -> usize {
    p.as_ref().map_or(0, |p| p.0.dim())
}

/// Copies the coordinates row-major into `out` (up to `cap` doubles) and
/// returns the total number of doubles in the set, `count * dim`.
///
/// # Safety
/// `p` must be null or a live handle; `out` must point to `cap` writable
/// doubles when non-null.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_copy(
    p: *const DispersePoints,
    out: *mut f64,
    cap: usize,
) -> usize {
    let Some(p) = p.as_ref() else { return 0 };
    let needed = p.0.len() * p.0.dim();
    if !out.is_null() && cap > 0 {
        let mut written = 0;
        'outer: for pt in p.0.iter() {
            for &x in pt.coords() {
                if written == cap.min(needed) {
                    break 'outer;
                }
                *out.add(written) = x;
                written += 1;
            }
        }
    }
    needed
}

/// Formats the point set as CSV text into `buf` (always NUL-terminated,
/// truncated to `cap` bytes) and returns the full length including the
/// terminator.
///
/// # Safety
/// `p` must be null or a live handle; `buf` must point to `cap` writable
/// bytes when non-null.
#[no_mangle]
pub unsafe extern "C" fn disperse_points_format(
    p: *const DispersePoints,
    buf: *mut c_char,
    cap: usize,
) -> usize {
    let Some(p) = p.as_ref() else { return 0 };
    let text = format_points(&p.0);
    let bytes = text.as_bytes();
    if !buf.is_null() && cap > 0 {
        let n = bytes.len().min(cap - 1);
        std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
        *buf.add(n) = 0;
    }
    bytes.len() + 1
}

/// Builds the net a construction pierces against. Pass `delta <= 0` or NaN
/// for the default `eps / (4e)`; `cap` bounds the net cardinality
/// (elements), with 0 meaning the library default.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disperse_net_build(
    dim: usize,
    eps: f64,
    delta: f64,
    torus: bool,
    cap: u64,
    out: *mut *mut DisperseNet,
) -> DisperseStatus {
    guard(|| {
        if out.is_null() {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        }
        let delta = if delta.is_nan() || delta <= 0.0 {
            None
        } else {
            Some(delta)
        };
        let cap = if cap == 0 { disperse::DEFAULT_NET_CAP } else { cap };
        match certificate_net(dim, eps, delta, family(torus), cap) {
            Ok(net) => {
                *out = Box::into_raw(Box::new(DisperseNet(net)));
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Releases a net. Null is a no-op.
///
/// # Safety
/// `net` must be null or an unfreed handle from `disperse_net_build`.
#[no_mangle]
pub unsafe extern "C" fn disperse_net_free(net: *mut DisperseNet) {
    if !net.is_null() {
        drop(Box::from_raw(net));
    }
}

/// Net cardinality, or 0 for null.
///
/// # Safety
/// `net` must be null or a live net handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_net_size(net: *const DisperseNet) -> u64 {
    net.as_ref().map_or(0, |n| n.0.len() as u64)
}

/// Element volume floor delta, or NaN for null.
///
/// # Safety
/// `net` must be null or a live net handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_net_delta(net: *const DisperseNet) -> f64 {
    net.as_ref().map_or(f64::NAN, |n| n.0.delta())
}

/// Grid resolution backing the net, or 0 for null.
///
/// # Safety
/// `net` must be null or a live net handle.
#[no_mangle]
pub unsafe extern "C" fn disperse_net_grid(net: *const DisperseNet) -> u32 {
    net.as_ref().map_or(0, |n| n.0.grid_m())
}

/// Fuzzes the net's approximation property with `trials` random boxes and
/// writes the violation count (expected 0).
///
/// # Safety
/// `net` and `out_violations` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn disperse_net_verify(
    net: *const DisperseNet,
    trials: u64,
    seed: u64,
    out_violations: *mut u64,
) -> DisperseStatus {
    guard(|| {
        let (Some(net), false) = (net.as_ref(), out_violations.is_null()) else {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        };
        match verify_net(&net.0, trials, seed) {
            Ok(rep) => {
                *out_violations = rep.violations;
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Runs a construction against the net and returns the produced point set
/// through `out_points`. With `use_random_only` false this is the two-phase
/// method (random sample plus deterministic repair); true selects the pure
/// random baseline. `out_report` may be null.
///
/// # Safety
/// `net` and `out_points` must be valid pointers; `out_report` must be
/// null or valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_construct(
    net: *const DisperseNet,
    seed: u64,
    max_retries: u32,
    use_random_only: bool,
    out_points: *mut *mut DispersePoints,
    out_report: *mut DisperseReport,
) -> DisperseStatus {
    guard(|| {
        let (Some(net), false) = (net.as_ref(), out_points.is_null()) else {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        };
        let run = if use_random_only {
            random_only(&net.0, seed, max_retries)
        } else {
            two_phase(&net.0, seed, max_retries)
        };
        match run {
            Ok((ps, rep)) => {
                *out_points = Box::into_raw(Box::new(DispersePoints(ps)));
                if !out_report.is_null() {
                    *out_report = DisperseReport {
                        seed: rep.seed,
                        phase1_draws: rep.m,
                        net_size: rep.net_size as u64,
                        bad_count: rep.bad_count as u64,
                        repair_count: rep.repair_count as u64,
                        total: rep.total as u64,
                        retries: rep.retries,
                        accepted: rep.accepted,
                        two_phase: !use_random_only,
                        size_bound: rep.bound,
                    };
                }
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Exact dispersion of the point set: the volume of the largest empty
/// axis-parallel box (or wraparound box with `torus`). Caps of 0 select
/// the library defaults (dimension 3, 256 points). `out_degenerate` may be
/// null; it reports whether the supremum is only approached.
///
/// # Safety
/// `p` and `out_value` must be valid pointers; `out_degenerate` must be
/// null or valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_dispersion(
    p: *const DispersePoints,
    torus: bool,
    cap_dim: usize,
    cap_points: usize,
    out_value: *mut f64,
    out_degenerate: *mut bool,
) -> DisperseStatus {
    guard(|| {
        let (Some(p), false) = (p.as_ref(), out_value.is_null()) else {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        };
        let caps = ExactCaps {
            max_dim: if cap_dim == 0 { 3 } else { cap_dim },
            max_points: if cap_points == 0 { 256 } else { cap_points },
        };
        let res = if torus {
            largest_empty_torus_box_capped(&p.0, caps)
        } else {
            largest_empty_box_capped(&p.0, caps)
        };
        match res {
            Ok(r) => {
                *out_value = r.value;
                if !out_degenerate.is_null() {
                    *out_degenerate = r.degenerate;
                }
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Randomized lower estimate of the dispersion from `trials` grown empty
/// boxes. Deterministic in the seed.
///
/// # Safety
/// `p` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn disperse_dispersion_estimate(
    p: *const DispersePoints,
    trials: u64,
    seed: u64,
    torus: bool,
    out_value: *mut f64,
) -> DisperseStatus {
    guard(|| {
        let (Some(p), false) = (p.as_ref(), out_value.is_null()) else {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        };
        *out_value = estimate_dispersion(&p.0, trials, seed, family(torus));
        DisperseStatus::Ok
    })
}

/// Largest empty box restricted to a uniform grid of the given resolution:
/// an independent lower bound on the dispersion.
///
/// # Safety
/// `p` and `out_value` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn disperse_grid_oracle(
    p: *const DispersePoints,
    resolution: u32,
    torus: bool,
    out_value: *mut f64,
) -> DisperseStatus {
    guard(|| {
        let (Some(p), false) = (p.as_ref(), out_value.is_null()) else {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        };
        match grid_oracle(&p.0, resolution, family(torus)) {
            Ok(v) => {
                *out_value = v;
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Upper bound on how many points suffice for dispersion at most `eps` in
/// dimension `dim` (cube or torus family).
///
/// # Safety
/// `out_value` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn disperse_inverse_bound(
    eps: f64,
    dim: usize,
    torus: bool,
    out_value: *mut f64,
) -> DisperseStatus {
    guard(|| {
        if out_value.is_null() {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        }
        let res = if torus {
            inverse_dispersion_upper_torus(eps, dim)
        } else {
            inverse_dispersion_upper_cube(eps, dim)
        };
        match res {
            Ok(b) => {
                *out_value = b.value;
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

/// Size formulas for piercing a net of `net_size` elements with volume
/// floor `delta`: the pure-random bound `3 ln N / delta` and the two-phase
/// bound `ln(4 delta N) / delta`. Either out-pointer may be null.
///
/// # Safety
/// `out_random` and `out_two_phase` must each be null or valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_piercing_bounds(
    net_size: u64,
    delta: f64,
    out_random: *mut f64,
    out_two_phase: *mut f64,
) -> DisperseStatus {
    guard(|| {
        let n = net_size as usize;
        if !out_random.is_null() {
            match random_piercing_bound(n, delta) {
                Ok(v) => *out_random = v,
                Err(e) => return fail(&e),
            }
        }
        if !out_two_phase.is_null() {
            match two_phase_piercing_bound(n, delta) {
                Ok(v) => *out_two_phase = v,
                Err(e) => return fail(&e),
            }
        }
        DisperseStatus::Ok
    })
}

/// Best known upper bound on the minimal dispersion achievable with the
/// inverse function, as a piecewise formula over eps regimes. Writes the
/// bound value and, when `out_branch` is non-null, which branch applied.
///
/// # Safety
/// `out_value` must be valid; `out_branch` must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn disperse_best_known_bound(
    eps: f64,
    dim: usize,
    constant: f64,
    out_value: *mut f64,
    out_branch: *mut DisperseBranch,
) -> DisperseStatus {
    guard(|| {
        if out_value.is_null() {
            return fail_with(DisperseStatus::NullPointer, "null pointer argument");
        }
        match best_known_upper(eps, dim, constant) {
            Ok(p) => {
                *out_value = p.bound.value;
                if !out_branch.is_null() {
                    *out_branch = match p.branch {
                        PiecewiseBranch::LargeEps => DisperseBranch::LargeEps,
                        PiecewiseBranch::MidLoglog => DisperseBranch::MidLoglog,
                        PiecewiseBranch::TinyEps => DisperseBranch::TinyEps,
                    };
                }
                DisperseStatus::Ok
            }
            Err(e) => fail(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ptr;

    fn last_error_string() -> String {
        let mut buf = vec![0i8; 256];
        let n = unsafe { disperse_last_error(buf.as_mut_ptr(), buf.len()) };
        let bytes: Vec<u8> = buf[..n.min(buf.len()) - 1].iter().map(|&b| b as u8).collect();
        String::from_utf8(bytes).unwrap()
    }

    #[test]
    fn version_is_nul_terminated() {
        let v = unsafe { CStr::from_ptr(disperse_version()) };
        assert!(!v.to_str().unwrap().is_empty());
    }

    #[test]
    fn points_round_trip() {
        let coords = [0.25f64, 0.5, 0.75, 0.1];
        let mut p: *mut DispersePoints = ptr::null_mut();
        let st = unsafe { disperse_points_new(2, coords.as_ptr(), 2, &mut p) };
        assert_eq!(st, DisperseStatus::Ok);
        assert_eq!(unsafe { disperse_points_count(p) }, 2);
        assert_eq!(unsafe { disperse_points_dim(p) }, 2);
        let mut out = [0.0f64; 4];
        let n = unsafe { disperse_points_copy(p, out.as_mut_ptr(), 4) };
        assert_eq!(n, 4);
        assert_eq!(out, coords);
        let mut buf = vec![0i8; 64];
        let len = unsafe { disperse_points_format(p, buf.as_mut_ptr(), buf.len()) };
        assert!(len <= buf.len());
        let text: String = buf[..len - 1].iter().map(|&b| b as u8 as char).collect();
        let mut q: *mut DispersePoints = ptr::null_mut();
        let ctext = CString::new(text).unwrap();
        assert_eq!(
            unsafe { disperse_points_parse(ctext.as_ptr(), &mut q) },
            DisperseStatus::Ok
        );
        assert_eq!(unsafe { disperse_points_count(q) }, 2);
        unsafe {
            disperse_points_free(p);
            disperse_points_free(q);
        }
    }

    #[test]
    fn invalid_coordinates_are_rejected() {
        let coords = [0.25f64, 1.5];
        let mut p: *mut DispersePoints = ptr::null_mut();
        let st = unsafe { disperse_points_new(2, coords.as_ptr(), 1, &mut p) };
        assert_eq!(st, DisperseStatus::InvalidParams);
        assert!(p.is_null());
        assert!(last_error_string().contains("outside"));
        let st = unsafe { disperse_points_new(0, coords.as_ptr(), 1, &mut p) };
        assert_eq!(st, DisperseStatus::InvalidParams);
        let st = unsafe { disperse_points_new(2, ptr::null(), 1, &mut p) };
        assert_eq!(st, DisperseStatus::NullPointer);
    }

    #[test]
    fn parse_error_reports_line() {
        let text = CString::new("0.5,0.5\nnot,a,number\n").unwrap();
        let mut p: *mut DispersePoints = ptr::null_mut();
        let st = unsafe { disperse_points_parse(text.as_ptr(), &mut p) };
        assert_eq!(st, DisperseStatus::ParseError);
        assert!(last_error_string().contains("line 2"), "{}", last_error_string());
    }

    #[test]
    fn construct_and_evaluate() {
        let mut net: *mut DisperseNet = ptr::null_mut();
        let st = unsafe { disperse_net_build(2, 0.3, f64::NAN, false, 0, &mut net) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(unsafe { disperse_net_size(net) } > 0);
        assert!(unsafe { disperse_net_delta(net) } > 0.0);

        let mut violations = u64::MAX;
        let st = unsafe { disperse_net_verify(net, 500, 9, &mut violations) };
        assert_eq!(st, DisperseStatus::Ok);
        assert_eq!(violations, 0);

        let mut pts: *mut DispersePoints = ptr::null_mut();
        let mut rep = DisperseReport {
            seed: 0,
            phase1_draws: 0,
            net_size: 0,
            bad_count: 0,
            repair_count: 0,
            total: 0,
            retries: 0,
            accepted: false,
            two_phase: false,
            size_bound: 0.0,
        };
        let st = unsafe { disperse_construct(net, 1, 64, false, &mut pts, &mut rep) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(rep.two_phase && rep.accepted);
        assert_eq!(rep.total, unsafe { disperse_points_count(pts) } as u64);
        assert!(rep.total as f64 <= rep.size_bound);

        let mut value = f64::NAN;
        let mut degenerate = true;
        let st = unsafe { disperse_dispersion(pts, false, 0, 0, &mut value, &mut degenerate) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(value <= 0.3 + 1e-9 && !degenerate);

        let mut est = f64::NAN;
        let st = unsafe { disperse_dispersion_estimate(pts, 200, 5, false, &mut est) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(est <= value + 1e-12);

        let mut oracle = f64::NAN;
        let st = unsafe { disperse_grid_oracle(pts, 50, false, &mut oracle) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(oracle <= value + 1e-12);

        unsafe {
            disperse_points_free(pts);
            disperse_net_free(net);
        }
    }

    #[test]
    fn bad_net_parameters_map_to_statuses() {
        let mut net: *mut DisperseNet = ptr::null_mut();
        // delta = eps can never be certified by a finite grid
        let st = unsafe { disperse_net_build(2, 0.3, 0.3, false, 0, &mut net) };
        assert_eq!(st, DisperseStatus::NoGridResolution);
        // tiny cap trips the cardinality guard
        let st = unsafe { disperse_net_build(2, 0.3, f64::NAN, false, 5, &mut net) };
        assert_eq!(st, DisperseStatus::NetCapExceeded);
        let st = unsafe { disperse_net_build(2, 1.5, f64::NAN, false, 0, &mut net) };
        assert_eq!(st, DisperseStatus::InvalidParams);
        assert!(net.is_null());
    }

    #[test]
    fn exactness_cap_is_reported() {
        let coords: Vec<f64> = (0..40).map(|i| (i as f64 + 0.5) / 40.0).collect();
        let mut p: *mut DispersePoints = ptr::null_mut();
        let st = unsafe { disperse_points_new(4, coords.as_ptr(), 10, &mut p) };
        assert_eq!(st, DisperseStatus::Ok);
        let mut value = 0.0;
        let st = unsafe { disperse_dispersion(p, false, 0, 0, &mut value, ptr::null_mut()) };
        assert_eq!(st, DisperseStatus::ExactnessCap);
        // estimator still works above the exact caps
        let st = unsafe { disperse_dispersion_estimate(p, 100, 1, false, &mut value) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(value > 0.0);
        unsafe { disperse_points_free(p) };
    }

    #[test]
    fn bounds_are_exposed() {
        let mut v = f64::NAN;
        let st = unsafe { disperse_inverse_bound(0.5, 2, false, &mut v) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!((v - 177.41141496415033).abs() < 1e-6 * v);

        let (mut lemma1, mut lemma2) = (f64::NAN, f64::NAN);
        let st = unsafe { disperse_piercing_bounds(1000, 0.1, &mut lemma1, &mut lemma2) };
        assert_eq!(st, DisperseStatus::Ok);
        assert!(lemma2 < lemma1);

        let mut branch = DisperseBranch::LargeEps;
        let st = unsafe { disperse_best_known_bound(0.01, 2, 1.0, &mut v, &mut branch) };
        assert_eq!(st, DisperseStatus::Ok);
        assert_eq!(branch, DisperseBranch::TinyEps);
        // out-of-domain eps
        let st = unsafe { disperse_inverse_bound(0.0, 2, false, &mut v) };
        assert_eq!(st, DisperseStatus::InvalidParams);
    }

    #[test]
    fn header_exports_every_entry_point() {
        let header = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/include/disperse.h"
        ))
        .expect("generated header");
        for symbol in [
            "disperse_version",
            "disperse_last_error",
            "disperse_points_new",
            "disperse_points_parse",
            "disperse_points_free",
            "disperse_points_count",
            "disperse_points_dim",
            "disperse_points_copy",
            "disperse_points_format",
            "disperse_net_build",
            "disperse_net_free",
            "disperse_net_size",
            "disperse_net_delta",
            "disperse_net_grid",
            "disperse_net_verify",
            "disperse_construct",
            "disperse_dispersion",
            "disperse_dispersion_estimate",
            "disperse_grid_oracle",
            "disperse_inverse_bound",
            "disperse_piercing_bounds",
            "disperse_best_known_bound",
            "DisperseStatus",
            "DisperseReport",
        ] {
            assert!(header.contains(symbol), "header missing {symbol}");
        }
    }
}
