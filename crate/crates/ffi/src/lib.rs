//! C ABI over the `tammes` crate.
//!
//! Every function returns a [`TammesStatus`]; results go through out-pointers.
//! Handles are opaque and owned by the caller once returned, and must be
//! released with the matching `*_free`. A failed call leaves out-pointers
//! untouched and records a message retrievable with [`tammes_last_error`].
//! Panics are caught at the boundary and reported as `TAMMES_STATUS_PANIC`.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tammes::geom::SphericalPoint;
use tammes::graphs::{contact_graph, isomorphic, parse_planar_code, FilterRules, GraphError, PlanarEmbeddedGraph};
use tammes::prune::{run_pipeline, PipelineOptions, PipelineReport, PruneConfig, Stage};
use tammes::relax::Level1Profile;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TammesStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    NumericalFailure = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A planar graph with its rotation system.
pub struct TammesGraph {
    inner: PlanarEmbeddedGraph,
}

/// Graphs decoded from a planar_code buffer.
pub struct TammesGraphSet {
    inner: Vec<PlanarEmbeddedGraph>,
}

/// Outcome of a filter-and-prune run.
pub struct TammesReport {
    inner: PipelineReport,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: TammesStatus, msg: impl Into<String>) -> TammesStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn graph_status(e: GraphError) -> TammesStatus {
    let s = match e {
        GraphError::Parse { .. } | GraphError::Structure(_) => TammesStatus::ParseError,
        GraphError::Degenerate(_) => TammesStatus::InvalidArgument,
        GraphError::Io(_) => TammesStatus::ParseError,
    };
    fail(s, e.to_string())
}

fn guard(f: impl FnOnce() -> TammesStatus) -> TammesStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(TammesStatus::Panic, "internal panic"),
    }
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(TammesStatus::NullPointer, concat!(stringify!($p), " is null"));
        })+
    };
}

/// Copies `bytes` plus a NUL into `buf` when it fits; `needed` gets the full size.
/// Does not touch the last-error message.
unsafe fn copy_out(bytes: &[u8], buf: *mut c_char, cap: usize, needed: *mut usize) -> TammesStatus {
    if !needed.is_null() {
        *needed = bytes.len() + 1;
    }
    if buf.is_null() || cap < bytes.len() + 1 {
        return TammesStatus::BufferTooSmall;
    }
    ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, bytes.len());
    *buf.add(bytes.len()) = 0;
    TammesStatus::Ok
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn tammes_status_message(status: TammesStatus) -> *const c_char {
    let s: &'static CStr = match status {
        TammesStatus::Ok => c"ok",
        TammesStatus::NullPointer => c"null pointer argument",
        TammesStatus::InvalidArgument => c"invalid argument",
        TammesStatus::ParseError => c"parse error",
        TammesStatus::NumericalFailure => c"numerical failure",
        TammesStatus::BufferTooSmall => c"buffer too small",
        TammesStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failed call on this thread.
#[no_mangle]
pub unsafe extern "C" fn tammes_last_error(buf: *mut c_char, cap: usize, needed: *mut usize) -> TammesStatus {
    guard(|| {
        let msg = LAST_ERROR.with(|e| e.borrow().clone());
        copy_out(msg.as_bytes(), buf, cap, needed)
    })
}

/// The optimal 13-point distance and the matching triangle angle, in radians.
#[no_mangle]
pub unsafe extern "C" fn tammes_delta13(delta13: *mut f64, a13: *mut f64) -> TammesStatus {
    nonnull!(delta13, a13);
    guard(|| {
        let (a, d) = tammes::cases::solve_delta13();
        if !(a.is_finite() && d.is_finite()) {
            return fail(TammesStatus::NumericalFailure, "closed-form optimum did not converge");
        }
        *delta13 = d;
        *a13 = a;
        TammesStatus::Ok
    })
}

/// Writes the 13 optimal points as `x y z` triples; `len` must be at least 39.
#[no_mangle]
pub unsafe extern "C" fn tammes_p13_coords(out: *mut f64, len: usize) -> TammesStatus {
    nonnull!(out);
    if len < 39 {
        return fail(TammesStatus::BufferTooSmall, "need 39 doubles");
    }
    guard(|| {
        for (i, p) in tammes::cases::build_p13().iter().enumerate() {
            let v = p.to_array();
            for k in 0..3 {
                *out.add(3 * i + k) = v[k];
            }
        }
        TammesStatus::Ok
    })
}

/// Corner angle of the equilateral triangle with side `d`.
#[no_mangle]
pub unsafe extern "C" fn tammes_alpha(d: f64, out: *mut f64) -> TammesStatus {
    nonnull!(out);
    guard(|| match tammes::geom::alpha(d) {
        Ok(a) => {
            *out = a;
            TammesStatus::Ok
        }
        Err(e) => fail(TammesStatus::InvalidArgument, e.to_string()),
    })
}

/// Opposite angle of the equilateral rhombus with side `d` and angle `u`.
#[no_mangle]
pub unsafe extern "C" fn tammes_rho(u: f64, d: f64, out: *mut f64) -> TammesStatus {
    nonnull!(out);
    guard(|| match tammes::geom::rho(u, d) {
        Ok(r) => {
            *out = r;
            TammesStatus::Ok
        }
        Err(e) => fail(TammesStatus::InvalidArgument, e.to_string()),
    })
}

/// Decodes a planar_code buffer. An empty buffer gives an empty set.
#[no_mangle]
pub unsafe extern "C" fn tammes_graphs_parse(bytes: *const u8, len: usize, out: *mut *mut TammesGraphSet) -> TammesStatus {
    nonnull!(out);
    if bytes.is_null() && len > 0 {
        return fail(TammesStatus::NullPointer, "bytes is null");
    }
    guard(|| {
        let data: &[u8] = if len == 0 { &[] } else { std::slice::from_raw_parts(bytes, len) };
        match parse_planar_code(data) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TammesGraphSet { inner }));
                TammesStatus::Ok
            }
            Err(e) => graph_status(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn tammes_graphs_len(set: *const TammesGraphSet, out: *mut usize) -> TammesStatus {
    nonnull!(set, out);
    *out = (*set).inner.len();
    TammesStatus::Ok
}

/// A copy of graph `index`, owned by the caller.
#[no_mangle]
pub unsafe extern "C" fn tammes_graphs_get(set: *const TammesGraphSet, index: usize, out: *mut *mut TammesGraph) -> TammesStatus {
    nonnull!(set, out);
    match (&(*set).inner).get(index) {
        Some(g) => {
            *out = Box::into_raw(Box::new(TammesGraph { inner: g.clone() }));
            TammesStatus::Ok
        }
        None => fail(TammesStatus::InvalidArgument, format!("index {index} out of range")),
    }
}

#[no_mangle]
pub unsafe extern "C" fn tammes_graphs_free(set: *mut TammesGraphSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Contact graph of `n` points given as `x y z` triples (`3 n` doubles),
/// joining pairs within `tol` of the minimal distance.
#[no_mangle]
pub unsafe extern "C" fn tammes_contact_graph(coords: *const f64, n: usize, tol: f64, out: *mut *mut TammesGraph) -> TammesStatus {
    nonnull!(coords, out);
    guard(|| {
        let c = std::slice::from_raw_parts(coords, 3 * n);
        let mut pts = Vec::with_capacity(n);
        for v in c.chunks_exact(3) {
            match SphericalPoint::new(v[0], v[1], v[2]) {
                Ok(p) => pts.push(p),
                Err(e) => return fail(TammesStatus::InvalidArgument, e.to_string()),
            }
        }
        match contact_graph(&pts, tol) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TammesGraph { inner }));
                TammesStatus::Ok
            }
            Err(e) => graph_status(e),
        }
    })
}

#[no_mangle]
pub unsafe extern "C" fn tammes_graph_counts(g: *const TammesGraph, vertices: *mut usize, edges: *mut usize) -> TammesStatus {
    nonnull!(g, vertices, edges);
    *vertices = (*g).inner.n();
    *edges = (*g).inner.num_edges();
    TammesStatus::Ok
}

#[no_mangle]
pub unsafe extern "C" fn tammes_graph_isomorphic(a: *const TammesGraph, b: *const TammesGraph, out: *mut bool) -> TammesStatus {
    nonnull!(a, b, out);
    guard(|| {
        *out = isomorphic(&(*a).inner, &(*b).inner);
        TammesStatus::Ok
    })
}

#[no_mangle]
pub unsafe extern "C" fn tammes_graph_free(g: *mut TammesGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Filters and prunes a planar_code buffer. `depth == 0` keeps the default
/// depth; a window with `d_lo >= d_hi` (for instance both zero) keeps the
/// 13-point window, otherwise the filter and relaxations use `[d_lo, d_hi]`.
#[no_mangle]
pub unsafe extern "C" fn tammes_prune(
    bytes: *const u8,
    len: usize,
    depth: usize,
    d_lo: f64,
    d_hi: f64,
    out: *mut *mut TammesReport,
) -> TammesStatus {
    nonnull!(out);
    if bytes.is_null() && len > 0 {
        return fail(TammesStatus::NullPointer, "bytes is null");
    }
    guard(|| {
        let data: &[u8] = if len == 0 { &[] } else { std::slice::from_raw_parts(bytes, len) };
        let mut cfg = PruneConfig::default();
        let mut rules = FilterRules::TAMMES13;
        if depth > 0 {
            cfg.max_depth = depth;
        }
        if d_lo < d_hi {
            if !(d_lo > 0.0 && d_hi < std::f64::consts::PI) {
                return fail(TammesStatus::InvalidArgument, "window must lie in (0, pi)");
            }
            cfg.profile = Level1Profile::for_window(d_lo, d_hi);
            rules = FilterRules::for_distance(d_lo);
        }
        match run_pipeline(data, &rules, &cfg, &PipelineOptions::default(), |_| {}) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(TammesReport { inner }));
                TammesStatus::Ok
            }
            Err(e) => graph_status(e),
        }
    })
}

/// Counts of parsed graphs and survivors.
#[no_mangle]
pub unsafe extern "C" fn tammes_report_counts(r: *const TammesReport, parsed: *mut usize, survived: *mut usize) -> TammesStatus {
    nonnull!(r, parsed, survived);
    *parsed = (*r).inner.summary.parsed;
    *survived = (*r).inner.summary.survived;
    TammesStatus::Ok
}

/// Whether graph `index` (0-based input order) survived pruning.
#[no_mangle]
pub unsafe extern "C" fn tammes_report_survived(r: *const TammesReport, index: usize, out: *mut bool) -> TammesStatus {
    nonnull!(r, out);
    match (&(*r).inner.records).get(index) {
        Some(rec) => {
            *out = rec.stage == Stage::Survived;
            TammesStatus::Ok
        }
        None => fail(TammesStatus::InvalidArgument, format!("index {index} out of range")),
    }
}

/// The JSON-lines report as a NUL-terminated string. With a null or short
/// buffer, `needed` receives the required size and `BUFFER_TOO_SMALL` is returned.
#[no_mangle]
pub unsafe extern "C" fn tammes_report_json(r: *const TammesReport, buf: *mut c_char, cap: usize, needed: *mut usize) -> TammesStatus {
    nonnull!(r);
    guard(|| {
        let mut s = Vec::new();
        if let Err(e) = (*r).inner.write_jsonl(&mut s) {
            return fail(TammesStatus::NumericalFailure, e.to_string());
        }
        copy_out(&s, buf, cap, needed)
    })
}

#[no_mangle]
pub unsafe extern "C" fn tammes_report_free(r: *mut TammesReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn status_messages_are_static_c_strings() {
        let s = unsafe { CStr::from_ptr(tammes_status_message(TammesStatus::ParseError)) };
        assert_eq!(s.to_str().unwrap(), "parse error");
    }
}
