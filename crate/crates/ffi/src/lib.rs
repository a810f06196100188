//! C interface to `cutparam`.
//!
//! Objects are opaque handles created by `cp_*_new`/`cp_*_from_*` and
//! released with the matching `cp_*_free`. Every fallible call returns a
//! [`CpStatus`]; on failure a description is available from
//! [`cp_last_error`] on the same thread. Panics never cross the boundary.
//!
//! Handles are immutable once created and may be shared between threads.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cutparam::classify::EdgeMode;
use cutparam::curve::config::parse_curve_config;
use cutparam::error::Error;
use cutparam::mesh::{equilateral_grid_with_margin, parse_mesh, write_mesh};
use cutparam::pipeline::{analyze, Analysis};
use cutparam::topology::write_loops;
use cutparam::{report, BoundaryCurve, Triangulation, Vec2};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    /// Null pointer, bad UTF-8 or an out-of-range argument.
    InvalidArgument = 1,
    /// Malformed curve or mesh text.
    Parse = 2,
    /// Invalid mesh.
    Mesh = 3,
    /// Curve evaluation failed (no convergence, outside the tube, ...).
    Curve = 4,
    /// The curve is not immersed or two triangles claim one positive edge.
    Classify = 5,
    /// Positive edges do not form simple closed loops.
    Topology = 6,
    Io = 7,
    /// A panic was caught; the message says where.
    Internal = 8,
}

/// Report kinds for [`cp_analysis_report`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpReport {
    ClassificationJson = 0,
    CheckTable = 1,
    CheckCsv = 2,
    Loops = 3,
    SamplesCsv = 4,
    Verification = 5,
}

/// A curve point with its frame.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpCurvePoint {
    pub x: f64,
    pub y: f64,
    pub tx: f64,
    pub ty: f64,
    pub nx: f64,
    pub ny: f64,
    pub signed_curvature: f64,
    pub component: usize,
}

pub struct CpCurve(BoundaryCurve);
pub struct CpMesh(Triangulation);
pub struct CpAnalysis(Analysis);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).unwrap_or_default());
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::Curve(_) => CpStatus::Curve,
        Error::Mesh(_) => CpStatus::Mesh,
        Error::Classify(_) => CpStatus::Classify,
        Error::Topology(_) => CpStatus::Topology,
        Error::Parse(_) => CpStatus::Parse,
        Error::Io { .. } => CpStatus::Io,
    }
}

fn fail(e: impl Into<Error>) -> CpStatus {
    let e = e.into();
    set_error(e.to_string());
    status_of(&e)
}

fn invalid(msg: &str) -> CpStatus {
    set_error(msg);
    CpStatus::InvalidArgument
}

fn guard(f: impl FnOnce() -> CpStatus) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == CpStatus::Ok {
                set_error("");
            }
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal error: {msg}"));
            CpStatus::Internal
        }
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, CpStatus> {
    if s.is_null() {
        return Err(invalid("null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| invalid("string is not UTF-8"))
}

unsafe fn put<T>(out: *mut *mut T, v: T) -> CpStatus {
    *out = Box::into_raw(Box::new(v));
    CpStatus::Ok
}

macro_rules! try_arg {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! deref {
    ($p:expr) => {
        match $p.as_ref() {
            Some(v) => &v.0,
            None => return invalid("null handle"),
        }
    };
}

/// Description of the last failure on this thread; empty after a success.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a curve from the text curve description format.
#[no_mangle]
pub unsafe extern "C" fn cp_curve_from_config(config: *const c_char, out: *mut *mut CpCurve) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        let src = try_arg!(text(config));
        let shapes = match parse_curve_config(src) {
            Ok(s) => s,
            Err(e) => return fail(e),
        };
        match BoundaryCurve::new(shapes) {
            Ok(c) => put(out, CpCurve(c)),
            Err(e) => fail(e),
        }
    })
}

/// Circle of radius `r` about `(cx, cy)`.
#[no_mangle]
pub unsafe extern "C" fn cp_curve_circle(cx: f64, cy: f64, r: f64, out: *mut *mut CpCurve) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        match BoundaryCurve::circle(Vec2::new(cx, cy), r) {
            Ok(c) => put(out, CpCurve(c)),
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn cp_curve_free(c: *mut CpCurve) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

#[no_mangle]
pub unsafe extern "C" fn cp_curve_num_components(c: *const CpCurve, out: *mut usize) -> CpStatus {
    guard(|| {
        let c = deref!(c);
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = c.num_components();
        CpStatus::Ok
    })
}

/// Estimated tube radius.
#[no_mangle]
pub unsafe extern "C" fn cp_curve_reach(c: *const CpCurve, out: *mut f64) -> CpStatus {
    guard(|| {
        let c = deref!(c);
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = c.reach().r_n;
        CpStatus::Ok
    })
}

/// Signed distance, negative inside.
#[no_mangle]
pub unsafe extern "C" fn cp_curve_signed_distance(c: *const CpCurve, x: f64, y: f64, out: *mut f64) -> CpStatus {
    guard(|| {
        let c = deref!(c);
        if out.is_null() {
            return invalid("null output pointer");
        }
        match c.signed_distance(Vec2::new(x, y)) {
            Ok(d) => {
                *out = d;
                CpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Closest point; fails with `Curve` outside the tube.
#[no_mangle]
pub unsafe extern "C" fn cp_curve_closest_point(c: *const CpCurve, x: f64, y: f64, out: *mut CpCurvePoint) -> CpStatus {
    guard(|| {
        let c = deref!(c);
        if out.is_null() {
            return invalid("null output pointer");
        }
        match c.closest_point(Vec2::new(x, y)) {
            Ok(p) => {
                *out = CpCurvePoint {
                    x: p.position.x,
                    y: p.position.y,
                    tx: p.tangent.x,
                    ty: p.tangent.y,
                    nx: p.normal.x,
                    ny: p.normal.y,
                    signed_curvature: p.signed_curvature,
                    component: p.component_id,
                };
                CpStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Parses the text mesh format.
#[no_mangle]
pub unsafe extern "C" fn cp_mesh_from_text(src: *const c_char, out: *mut *mut CpMesh) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        match parse_mesh(try_arg!(text(src))) {
            Ok(m) => put(out, CpMesh(m)),
            Err(e) => fail(e),
        }
    })
}

/// Equilateral grid over `[x0, x1] × [y0, y1]` with `margin` extra cells.
#[no_mangle]
pub unsafe extern "C" fn cp_mesh_equilateral_grid(
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
    h: f64,
    margin: usize,
    out: *mut *mut CpMesh,
) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return invalid("null output pointer");
        }
        match equilateral_grid_with_margin([x0, y0, x1, y1], h, margin) {
            Ok(m) => put(out, CpMesh(m)),
            Err(e) => fail(e),
        }
    })
}

/// Builds a mesh from `nv` coordinate pairs and `nt` index triples.
#[no_mangle]
pub unsafe extern "C" fn cp_mesh_new(
    xy: *const f64,
    nv: usize,
    triangles: *const usize,
    nt: usize,
    out: *mut *mut CpMesh,
) -> CpStatus {
    guard(|| {
        if out.is_null() || (nv > 0 && xy.is_null()) || (nt > 0 && triangles.is_null()) {
            return invalid("null pointer");
        }
        let xy = if nv == 0 { &[][..] } else { std::slice::from_raw_parts(xy, 2 * nv) };
        let t = if nt == 0 { &[][..] } else { std::slice::from_raw_parts(triangles, 3 * nt) };
        let v = xy.chunks_exact(2).map(|p| Vec2::new(p[0], p[1])).collect();
        let c = t.chunks_exact(3).map(|k| [k[0], k[1], k[2]]).collect();
        match Triangulation::new(v, c) {
            Ok(m) => put(out, CpMesh(m)),
            Err(e) => fail(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn cp_mesh_free(m: *mut CpMesh) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

#[no_mangle]
pub unsafe extern "C" fn cp_mesh_num_vertices(m: *const CpMesh, out: *mut usize) -> CpStatus {
    guard(|| {
        let m = deref!(m);
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = m.num_vertices();
        CpStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn cp_mesh_num_triangles(m: *const CpMesh, out: *mut usize) -> CpStatus {
    guard(|| {
        let m = deref!(m);
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = m.num_triangles();
        CpStatus::Ok
    })
}

/// Mesh in the text format; free with [`cp_string_free`].
#[no_mangle]
pub unsafe extern "C" fn cp_mesh_to_text(m: *const CpMesh, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        let m = deref!(m);
        if out.is_null() {
            return invalid("null output pointer");
        }
        *out = CString::new(write_mesh(m)).unwrap().into_raw();
        CpStatus::Ok
    })
}

/// Runs classification, the condition report, loop construction,
/// sampling with `samples_per_edge` interior points and verification.
///
/// A handle is produced whenever the inputs are valid, even if a later
/// stage stops the run; query [`cp_analysis_exit_code`] for the outcome.
#[no_mangle]
pub unsafe extern "C" fn cp_analyze(
    curve: *const CpCurve,
    mesh: *const CpMesh,
    negative: bool,
    samples_per_edge: usize,
    out: *mut *mut CpAnalysis,
) -> CpStatus {
    guard(|| {
        let c = deref!(curve);
        let m = deref!(mesh);
        if out.is_null() {
            return invalid("null output pointer");
        }
        if samples_per_edge < 2 {
            return invalid("samples_per_edge must be at least 2");
        }
        let mode = if negative { EdgeMode::Negative } else { EdgeMode::Positive };
        let a = analyze(c, m, mode, samples_per_edge, None);
        let status = match &a.error {
            Some(e) => {
                set_error(e.to_string());
                status_of(e)
            }
            None => CpStatus::Ok,
        };
        put(out, CpAnalysis(a));
        status
    })
}

#[no_mangle]
pub unsafe extern "C" fn cp_analysis_free(a: *mut CpAnalysis) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// 0 pass, 1 hypothesis or verification failure, 2 invalid input.
#[no_mangle]
pub unsafe extern "C" fn cp_analysis_exit_code(a: *const CpAnalysis) -> i32 {
    match a.as_ref() {
        Some(a) => a.0.exit_code(),
        None => 2,
    }
}

#[no_mangle]
pub unsafe extern "C" fn cp_analysis_conditions_pass(a: *const CpAnalysis) -> bool {
    a.as_ref().and_then(|a| a.0.conditions.as_ref()).is_some_and(|r| r.all_pass)
}

#[no_mangle]
pub unsafe extern "C" fn cp_analysis_global_pass(a: *const CpAnalysis) -> bool {
    a.as_ref().and_then(|a| a.0.verification.as_ref()).is_some_and(|v| v.global_pass)
}

#[no_mangle]
pub unsafe extern "C" fn cp_analysis_num_cut_triangles(a: *const CpAnalysis) -> usize {
    a.as_ref()
        .and_then(|a| a.0.classification.as_ref())
        .map_or(0, |c| c.cut_triangles.len())
}

#[no_mangle]
pub unsafe extern "C" fn cp_analysis_num_positive_edges(a: *const CpAnalysis) -> usize {
    a.as_ref()
        .and_then(|a| a.0.classification.as_ref())
        .map_or(0, |c| c.positive_edges.len())
}

#[no_mangle]
pub unsafe extern "C" fn cp_analysis_num_loops(a: *const CpAnalysis) -> usize {
    a.as_ref().map_or(0, |a| a.0.loops().len())
}

/// Copies the vertex cycle of loop `i` into `buf` (capacity `cap`) and
/// stores its length in `len`. With `cap` too small only `len` is written.
#[no_mangle]
pub unsafe extern "C" fn cp_analysis_loop_vertices(
    a: *const CpAnalysis,
    i: usize,
    buf: *mut usize,
    cap: usize,
    len: *mut usize,
) -> CpStatus {
    guard(|| {
        let a = deref!(a);
        if len.is_null() {
            return invalid("null output pointer");
        }
        let Some(lp) = a.loops().get(i) else {
            return invalid("loop index out of range");
        };
        *len = lp.vertex_cycle.len();
        if cap >= lp.vertex_cycle.len() {
            if buf.is_null() {
                return invalid("null buffer");
            }
            ptr::copy_nonoverlapping(lp.vertex_cycle.as_ptr(), buf, lp.vertex_cycle.len());
        }
        CpStatus::Ok
    })
}

/// One of the text reports; free with [`cp_string_free`]. Fails with
/// `InvalidArgument` when the stage producing it did not run.
#[no_mangle]
pub unsafe extern "C" fn cp_analysis_report(a: *const CpAnalysis, kind: CpReport, out: *mut *mut c_char) -> CpStatus {
    guard(|| {
        let a = deref!(a);
        if out.is_null() {
            return invalid("null output pointer");
        }
        let s = match kind {
            CpReport::ClassificationJson => a.classification.as_ref().map(report::classification_json),
            CpReport::CheckTable => a.conditions.as_ref().map(report::condition_table),
            CpReport::CheckCsv => a.conditions.as_ref().map(report::condition_csv),
            CpReport::Loops => a.loops.as_deref().map(write_loops),
            CpReport::SamplesCsv => a.samples.as_deref().map(report::samples_csv),
            CpReport::Verification => a.verification.as_ref().map(|v| report::verification_text(v, a.loops())),
        };
        match s {
            Some(s) => {
                *out = CString::new(s).unwrap().into_raw();
                CpStatus::Ok
            }
            None => invalid("report not available: an earlier stage stopped the run"),
        }
    })
}
