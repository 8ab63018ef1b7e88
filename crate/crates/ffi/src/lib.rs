//! C interface to the `rasternest` solver.
//!
//! Objects are opaque handles created by `rn_*_build`/`rn_*_from_*`/`rn_solve`
//! and released with the matching `rn_*_free`. Fallible calls return an
//! [`RnStatus`]; the message of the last failure on the calling thread is
//! available from [`rn_last_error_message`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rasternest::geometry::{Axis, Point};
use rasternest::io::instance::{parse_instance_str, InstanceError};
use rasternest::io::result::ResultFile;
use rasternest::isp::{gcdh, SolverConfig};
use rasternest::nfp::{build_nfp_from_scanlines, Nfp};
use rasternest::problem::{Problem, ProblemError};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RnStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Raster = 5,
    ExceedsWidth = 6,
    InvalidArgument = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RnAxis {
    Horizontal = 0,
    Vertical = 1,
}

/// Solver parameters. `max_cdh_calls == 0` means no cap.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RnConfig {
    pub r_dec: f64,
    pub r_inc: f64,
    pub k_max: u32,
    pub time_limit: f64,
    pub seed: u64,
    pub corner_reduction: bool,
    pub max_cdh_calls: u64,
}

/// Placement of one piece: orientation in degrees and reference point in
/// pixels.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RnPlacement {
    pub degrees: i32,
    pub x: i32,
    pub y: i32,
}

/// A rasterized instance with its NFPs.
pub struct RnProblem {
    problem: Problem,
}

/// Best layout of a solve.
pub struct RnSolution {
    result: ResultFile,
}

pub struct RnNfp {
    nfp: Nfp,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(RnStatus, String);

impl From<InstanceError> for Failure {
    fn from(e: InstanceError) -> Self {
        let status = match e {
            InstanceError::Validation(_) => RnStatus::Validation,
            _ => RnStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

impl From<ProblemError> for Failure {
    fn from(e: ProblemError) -> Self {
        let status = match e {
            ProblemError::Raster { .. } => RnStatus::Raster,
            _ => RnStatus::Validation,
        };
        Failure(status, e.to_string())
    }
}

fn fail(status: RnStatus, msg: impl Into<String>) -> Failure {
    Failure(status, msg.into())
}

/// Runs `f`, recording its error message and turning panics into
/// [`RnStatus::Panic`].
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> RnStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RnStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            RnStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(fail(RnStatus::NullPointer, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| fail(RnStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn ref_arg<'a, T>(p: *const T, name: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| fail(RnStatus::NullPointer, format!("{name} is null")))
}

unsafe fn out_arg<'a, T>(p: *mut T, name: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| fail(RnStatus::NullPointer, format!("{name} is null")))
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rn_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance document and rasterizes it at `width_px`.
///
/// # Safety
/// `json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rn_problem_from_json(
    json: *const c_char,
    width_px: i32,
    out: *mut *mut RnProblem,
) -> RnStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let text = str_arg(json, "json")?;
        if width_px < 1 {
            return Err(fail(
                RnStatus::InvalidArgument,
                format!("width_px must be positive, got {width_px}"),
            ));
        }
        let instance = parse_instance_str(text)?;
        let problem = Problem::new(&instance, width_px)?;
        *out = Box::into_raw(Box::new(RnProblem { problem }));
        Ok(())
    })
}

/// # Safety
/// `problem` must come from [`rn_problem_from_json`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn rn_problem_free(problem: *mut RnProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Number of pieces once counts are expanded; 0 for null.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rn_problem_piece_count(problem: *const RnProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.problem.piece_count())
}

/// Fills `out` with the default parameters.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rn_config_default(out: *mut RnConfig) -> RnStatus {
    guard(|| {
        let d = SolverConfig::default();
        *out_arg(out, "out")? = RnConfig {
            r_dec: d.r_dec,
            r_inc: d.r_inc,
            k_max: d.k_max,
            time_limit: d.time_limit,
            seed: d.seed,
            corner_reduction: d.corner_reduction,
            max_cdh_calls: 0,
        };
        Ok(())
    })
}

/// Runs the solver once.
///
/// # Safety
/// `problem` and `config` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rn_solve(
    problem: *const RnProblem,
    config: *const RnConfig,
    out: *mut *mut RnSolution,
) -> RnStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let problem = &ref_arg(problem, "problem")?.problem;
        let c = ref_arg(config, "config")?;
        let config = SolverConfig {
            width_px: problem.width(),
            r_dec: c.r_dec,
            r_inc: c.r_inc,
            k_max: c.k_max,
            time_limit: c.time_limit,
            seed: c.seed,
            corner_reduction: c.corner_reduction,
            max_cdh_calls: (c.max_cdh_calls > 0).then_some(c.max_cdh_calls),
        };
        config
            .validate()
            .map_err(|e| fail(RnStatus::InvalidArgument, e.to_string()))?;
        let run = gcdh(problem, &config).map_err(|e| fail(RnStatus::ExceedsWidth, e.to_string()))?;
        let result = ResultFile::from_runs(problem, &config, &[(config.seed, run)]);
        *out = Box::into_raw(Box::new(RnSolution { result }));
        Ok(())
    })
}

/// Container length of the best layout in pixels; -1 for null.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rn_solution_length(solution: *const RnSolution) -> i32 {
    solution.as_ref().map_or(-1, |s| s.result.best_length)
}

/// Density in percent; NaN for null.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rn_solution_density(solution: *const RnSolution) -> f64 {
    solution.as_ref().map_or(f64::NAN, |s| s.result.density)
}

/// Placement of piece `index`.
///
/// # Safety
/// `solution` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rn_solution_placement(
    solution: *const RnSolution,
    index: usize,
    out: *mut RnPlacement,
) -> RnStatus {
    guard(|| {
        let s = ref_arg(solution, "solution")?;
        let out = out_arg(out, "out")?;
        let p = s.result.placements.get(index).ok_or_else(|| {
            fail(
                RnStatus::InvalidArgument,
                format!("piece {index} out of range ({} pieces)", s.result.placements.len()),
            )
        })?;
        *out = RnPlacement {
            degrees: p.degrees,
            x: p.x,
            y: p.y,
        };
        Ok(())
    })
}

/// The result document as JSON. Release it with [`rn_string_free`].
///
/// # Safety
/// `solution` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rn_solution_to_json(solution: *const RnSolution, out: *mut *mut c_char) -> RnStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let s = ref_arg(solution, "solution")?;
        *out = CString::new(s.result.to_json()).expect("JSON has no nul").into_raw();
        Ok(())
    })
}

/// # Safety
/// `solution` must come from [`rn_solve`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn rn_solution_free(solution: *mut RnSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// # Safety
/// `s` must come from this library and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn rn_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn class_of(problem: &Problem, shape: &str, degrees: i32) -> Result<usize, Failure> {
    let piece = (0..problem.piece_count())
        .find(|&i| problem.shape_id(i) == shape)
        .ok_or_else(|| fail(RnStatus::InvalidArgument, format!("no shape '{shape}'")))?;
    let d = degrees.rem_euclid(360);
    let o = problem
        .piece(piece)
        .variants
        .iter()
        .position(|&(deg, _)| deg == d)
        .ok_or_else(|| {
            fail(
                RnStatus::InvalidArgument,
                format!("shape '{shape}' has no orientation {d}"),
            )
        })?;
    Ok(problem.class_of(piece, o))
}

/// NFP of shape `a` (fixed) and shape `b` (moving) at the given orientations.
///
/// # Safety
/// `problem` must be live, the shape ids nul-terminated; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rn_nfp_build(
    problem: *const RnProblem,
    shape_a: *const c_char,
    degrees_a: i32,
    shape_b: *const c_char,
    degrees_b: i32,
    out: *mut *mut RnNfp,
) -> RnStatus {
    guard(|| {
        let out = out_arg(out, "out")?;
        *out = ptr::null_mut();
        let problem = &ref_arg(problem, "problem")?.problem;
        let a = class_of(problem, str_arg(shape_a, "shape_a")?, degrees_a)?;
        let b = class_of(problem, str_arg(shape_b, "shape_b")?, degrees_b)?;
        let nfp = build_nfp_from_scanlines(&problem.class(a).scanline, &problem.class(b).scanline);
        *out = Box::into_raw(Box::new(RnNfp { nfp }));
        Ok(())
    })
}

/// Whether the shapes overlap at relative offset `(x, y)`; false for null.
///
/// # Safety
/// `nfp` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rn_nfp_contains(nfp: *const RnNfp, x: i32, y: i32) -> bool {
    nfp.as_ref().is_some_and(|n| n.nfp.contains(Point::new(x, y)))
}

/// Penetration depth at `(x, y)` along `axis` (an [`RnAxis`] value).
///
/// # Safety
/// `nfp` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rn_nfp_penetration_depth(
    nfp: *const RnNfp,
    x: i32,
    y: i32,
    axis: u32,
    out: *mut u32,
) -> RnStatus {
    guard(|| {
        let n = ref_arg(nfp, "nfp")?;
        let axis = match axis {
            x if x == RnAxis::Horizontal as u32 => Axis::Horizontal,
            x if x == RnAxis::Vertical as u32 => Axis::Vertical,
            other => return Err(fail(RnStatus::InvalidArgument, format!("unknown axis {other}"))),
        };
        *out_arg(out, "out")? = n.nfp.penetration_depth(Point::new(x, y), axis);
        Ok(())
    })
}

/// # Safety
/// `nfp` must come from [`rn_nfp_build`] and not be freed yet.
#[no_mangle]
pub unsafe extern "C" fn rn_nfp_free(nfp: *mut RnNfp) {
    if !nfp.is_null() {
        drop(Box::from_raw(nfp));
    }
}
