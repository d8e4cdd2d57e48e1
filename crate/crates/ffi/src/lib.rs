//! C interface to the `wclique` solver.
//!
//! Objects are opaque handles created by `wc_*_new`/`wc_*_from_*` functions
//! and released with the matching `wc_*_free`. Every fallible call returns a
//! [`WcStatus`]; on failure a description is available from
//! [`wc_last_error_message`] on the same thread. Vertices are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use wclique::config::{preset, Configuration};
use wclique::harness::{load_graph, LoadError, WeightMode};
use wclique::search::{solve, SolveOptions, SolveOutcome};
use wclique::{exact_oracle, parse_dimacs_str, VertexWeightedGraph};

/// Result codes returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidConfig = 4,
    Io = 5,
    TooLarge = 6,
    InvalidArgument = 7,
    Panic = 8,
}

/// Vertex-weighted undirected graph.
pub struct WcGraph(VertexWeightedGraph);

/// Solver configuration.
pub struct WcConfig(Configuration);

/// Outcome of one solver run.
pub struct WcResult(SolveOutcome);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: WcStatus, msg: impl Into<String>) -> WcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> WcStatus) -> WcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(WcStatus::Panic, "internal panic"),
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, WcStatus> {
    if s.is_null() {
        return Err(fail(WcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(WcStatus::InvalidUtf8, "string is not valid UTF-8"))
}

fn weight_mode(explicit_weights: bool) -> WeightMode {
    if explicit_weights {
        WeightMode::Explicit
    } else {
        WeightMode::Default
    }
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> WcStatus {
    *out = Box::into_raw(Box::new(value));
    WcStatus::Ok
}

macro_rules! check_out {
    ($out:expr) => {
        if $out.is_null() {
            return fail(WcStatus::NullPointer, "null output pointer");
        }
        *$out = ptr::null_mut();
    };
}

/// Message describing the last failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn wc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses DIMACS text. With `explicit_weights` false every vertex i gets
/// weight (i mod 200) + 1; otherwise `v` lines are honored.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_from_dimacs(
    text: *const c_char,
    explicit_weights: bool,
    out: *mut *mut WcGraph,
) -> WcStatus {
    guard(|| {
        check_out!(out);
        let text = match read_str(text) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_dimacs_str(text) {
            Ok(g) => {
                let g = if explicit_weights { g } else { g.with_modular_weights() };
                emit(out, WcGraph(g))
            }
            Err(e) => fail(WcStatus::Parse, e.to_string()),
        }
    })
}

/// Reads a DIMACS file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_from_file(
    path: *const c_char,
    explicit_weights: bool,
    out: *mut *mut WcGraph,
) -> WcStatus {
    guard(|| {
        check_out!(out);
        let path = match read_str(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match load_graph(Path::new(path), weight_mode(explicit_weights)) {
            Ok(g) => emit(out, WcGraph(g)),
            Err(e @ LoadError::Io { .. }) => fail(WcStatus::Io, e.to_string()),
            Err(e @ LoadError::Parse { .. }) => fail(WcStatus::Parse, e.to_string()),
        }
    })
}

/// Builds a graph from `num_edges` 0-based vertex pairs stored flat in
/// `edges`. `weights` may be NULL for the modular default weights.
///
/// # Safety
/// `edges` must point to `2 * num_edges` values (or be NULL when
/// `num_edges` is 0); `weights`, if non-NULL, to `n` values.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_from_edges(
    n: usize,
    edges: *const u32,
    num_edges: usize,
    weights: *const i64,
    out: *mut *mut WcGraph,
) -> WcStatus {
    guard(|| {
        check_out!(out);
        if edges.is_null() && num_edges > 0 {
            return fail(WcStatus::NullPointer, "null edge array");
        }
        let flat = if num_edges == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * num_edges) };
        let pairs: Vec<(usize, usize)> = flat.chunks_exact(2).map(|p| (p[0] as usize, p[1] as usize)).collect();
        let weights = (!weights.is_null()).then(|| std::slice::from_raw_parts(weights, n).to_vec());
        match VertexWeightedGraph::from_edges(n, &pairs, weights) {
            Ok(g) => emit(out, WcGraph(g)),
            Err(e) => fail(WcStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// # Safety
/// `graph` must be NULL or a handle from a `wc_graph_*` constructor that
/// has not been freed.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_free(graph: *mut WcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Number of vertices, 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_num_vertices(graph: *const WcGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.num_vertices())
}

/// Number of edges, 0 for NULL.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_num_edges(graph: *const WcGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.num_edges())
}

/// Weight of vertex `v`, or 0 when out of range.
///
/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_graph_weight(graph: *const WcGraph, v: u32) -> i64 {
    match graph.as_ref() {
        Some(g) if (v as usize) < g.0.num_vertices() => g.0.weight(v),
        _ => 0,
    }
}

/// Named parameter preset: default, bhoslib, dimacs_mann, dimacs_other,
/// kes or ref.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_config_preset(name: *const c_char, out: *mut *mut WcConfig) -> WcStatus {
    guard(|| {
        check_out!(out);
        let name = match read_str(name) {
            Ok(n) => n,
            Err(s) => return s,
        };
        match preset(name) {
            Ok(c) => emit(out, WcConfig(c)),
            Err(e) => fail(WcStatus::InvalidConfig, e.to_string()),
        }
    })
}

/// Parses and validates a JSON configuration.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn wc_config_from_json(json: *const c_char, out: *mut *mut WcConfig) -> WcStatus {
    guard(|| {
        check_out!(out);
        let json = match read_str(json) {
            Ok(j) => j,
            Err(s) => return s,
        };
        let config = match Configuration::from_json(json) {
            Ok(c) => c,
            Err(e) => return fail(WcStatus::InvalidConfig, e.to_string()),
        };
        match config.validate() {
            Ok(()) => emit(out, WcConfig(config)),
            Err(e) => fail(WcStatus::InvalidConfig, e.to_string()),
        }
    })
}

/// Sets one parameter from its textual value, e.g. ("tabu_tenure", "9").
/// The configuration is validated when it is used by [`wc_solve`].
///
/// # Safety
/// `config` must be a live handle; `name` and `value` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn wc_config_set(config: *mut WcConfig, name: *const c_char, value: *const c_char) -> WcStatus {
    guard(|| {
        let Some(config) = config.as_mut() else {
            return fail(WcStatus::NullPointer, "null configuration");
        };
        let (name, value) = match (read_str(name), read_str(value)) {
            (Ok(n), Ok(v)) => (n, v),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match config.0.set(name, value) {
            Ok(()) => WcStatus::Ok,
            Err(e) => fail(WcStatus::InvalidConfig, e),
        }
    })
}

/// JSON form of the configuration; release with [`wc_string_free`].
/// Returns NULL for a NULL handle.
///
/// # Safety
/// `config` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_config_to_json(config: *const WcConfig) -> *mut c_char {
    match config.as_ref() {
        Some(c) => CString::new(c.0.to_json()).map_or(ptr::null_mut(), CString::into_raw),
        None => ptr::null_mut(),
    }
}

/// # Safety
/// `config` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_config_free(config: *mut WcConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn wc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Runs the local search. `max_steps` > 0 bounds the run by steps (and is
/// reproducible); otherwise `cutoff_seconds` of thread CPU time applies.
/// `target` > 0 stops the run as soon as that weight is reached.
/// `config` may be NULL for the default configuration.
///
/// # Safety
/// `graph` must be a live handle, `config` NULL or live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn wc_solve(
    graph: *const WcGraph,
    config: *const WcConfig,
    seed: u64,
    cutoff_seconds: f64,
    max_steps: u64,
    target: i64,
    out: *mut *mut WcResult,
) -> WcStatus {
    guard(|| {
        check_out!(out);
        let Some(graph) = graph.as_ref() else {
            return fail(WcStatus::NullPointer, "null graph");
        };
        let default = Configuration::default();
        let config = config.as_ref().map_or(&default, |c| &c.0);
        let mut options = if max_steps > 0 {
            SolveOptions::steps(max_steps)
        } else if cutoff_seconds.is_finite() && cutoff_seconds > 0.0 {
            SolveOptions::seconds(cutoff_seconds)
        } else {
            return fail(WcStatus::InvalidArgument, "need max_steps > 0 or a positive cutoff_seconds");
        };
        if target > 0 {
            options = options.with_target(Some(target));
        }
        match solve(&graph.0, config, seed, &options) {
            Ok(outcome) => emit(out, WcResult(outcome)),
            Err(e) => fail(WcStatus::InvalidConfig, e.to_string()),
        }
    })
}

/// Exact optimum for graphs of at most 64 vertices. The optimal clique is
/// written to `clique` (capacity `cap`, may be NULL when `cap` is 0) and its
/// size to `clique_len`.
///
/// # Safety
/// `graph` must be a live handle, `weight` and `clique_len` valid pointers,
/// `clique` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn wc_oracle(
    graph: *const WcGraph,
    weight: *mut i64,
    clique: *mut u32,
    cap: usize,
    clique_len: *mut usize,
) -> WcStatus {
    guard(|| {
        let Some(graph) = graph.as_ref() else {
            return fail(WcStatus::NullPointer, "null graph");
        };
        if weight.is_null() || clique_len.is_null() || (clique.is_null() && cap > 0) {
            return fail(WcStatus::NullPointer, "null output pointer");
        }
        match exact_oracle(&graph.0) {
            Ok((w, c)) => {
                *weight = w;
                *clique_len = c.len();
                copy_out(&c, clique, cap);
                WcStatus::Ok
            }
            Err(e) => fail(WcStatus::TooLarge, e.to_string()),
        }
    })
}

unsafe fn copy_out(src: &[u32], dst: *mut u32, cap: usize) -> usize {
    let k = src.len().min(cap);
    if k > 0 {
        ptr::copy_nonoverlapping(src.as_ptr(), dst, k);
    }
    k
}

/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_best_weight(result: *const WcResult) -> i64 {
    result.as_ref().map_or(0, |r| r.0.best_weight)
}

/// Time until the best clique was first found: thread CPU seconds, or
/// moves when the run used `max_steps`.
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_time_to_best(result: *const WcResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.0.time_to_best)
}

/// Run length in the same unit as [`wc_result_time_to_best`].
///
/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_elapsed(result: *const WcResult) -> f64 {
    result.as_ref().map_or(0.0, |r| r.0.elapsed)
}

/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_steps(result: *const WcResult) -> u64 {
    result.as_ref().map_or(0, |r| r.0.steps)
}

/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_restarts(result: *const WcResult) -> u64 {
    result.as_ref().map_or(0, |r| r.0.restarts)
}

/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_clique_size(result: *const WcResult) -> usize {
    result.as_ref().map_or(0, |r| r.0.best_clique.len())
}

/// Copies up to `cap` vertices of the best clique (sorted) into `buf` and
/// returns the number copied.
///
/// # Safety
/// `result` must be NULL or a live handle; `buf` valid for `cap` writes.
#[no_mangle]
pub unsafe extern "C" fn wc_result_clique(result: *const WcResult, buf: *mut u32, cap: usize) -> usize {
    match result.as_ref() {
        Some(r) if !buf.is_null() => copy_out(&r.0.best_clique, buf, cap),
        _ => 0,
    }
}

/// # Safety
/// `result` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn wc_result_free(result: *mut WcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}
