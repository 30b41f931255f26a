//! C ABI over `rayoracle`.
//!
//! Scenes and circuits cross the boundary as opaque handles. Every fallible
//! call returns an [`RoStatus`]; on failure the message is kept per thread
//! and can be read with [`ro_last_error_message`]. Strings handed out by the
//! library are owned by the caller and released with [`ro_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use rayoracle::circuit::{export_qasm, lower, Circuit, GateBasis};
use rayoracle::minimizer::minimize;
use rayoracle::oracle::{synthesize, verify_oracle, Mode, OracleLayout, ParamSelector, Scene};
use rayoracle::sim::{run, sample, Initial};
use rayoracle::{boolean::TruthTable, Error};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Validation = 4,
    Capacity = 5,
    Domain = 6,
    Verification = 7,
    Unsupported = 8,
    Inconsistent = 9,
    Panic = 10,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoMode {
    Naive = 0,
    Optimized = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoBasis {
    Logical = 0,
    Toffoli = 1,
    Elementary = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RoMetrics {
    pub depth: usize,
    pub gates: usize,
    pub qubits: usize,
}

/// Opaque scene handle.
pub struct RoScene(Scene);

/// Opaque circuit handle.
pub struct RoCircuit(Circuit);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> RoStatus {
    match e {
        Error::Parse { .. } => RoStatus::Parse,
        Error::Validation(_) => RoStatus::Validation,
        Error::Capacity(_) => RoStatus::Capacity,
        Error::Domain(_) => RoStatus::Domain,
        Error::Verification(_) => RoStatus::Verification,
        Error::Unsupported(_) => RoStatus::Unsupported,
        Error::Inconsistent(_) => RoStatus::Inconsistent,
    }
}

struct Fail(RoStatus);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        set_error(e.to_string());
        Fail(status_of(&e))
    }
}

fn null(what: &str) -> Fail {
    set_error(format!("{what} is null"));
    Fail(RoStatus::NullPointer)
}

/// Runs `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> RoStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RoStatus::Ok,
        Ok(Err(Fail(s))) => s,
        Err(_) => {
            set_error("internal panic");
            RoStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(format!("{what} is not valid UTF-8"));
        Fail(RoStatus::InvalidUtf8)
    })
}

/// A null selector means all four parameters.
unsafe fn read_selector(p: *const c_char) -> Result<ParamSelector, Fail> {
    if p.is_null() {
        return Ok(ParamSelector::all());
    }
    Ok(read_str(p, "params")?.parse()?)
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|_| {
        set_error("output contains a NUL byte");
        Fail(RoStatus::Domain)
    })
}

/// Message for the most recent failure on this thread, or null. The pointer
/// stays valid until the next call into the library from the same thread.
#[no_mangle]
pub extern "C" fn ro_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses scene text (`bounds`/`rect` lines).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ro_scene_parse(text: *const c_char, out: *mut *mut RoScene) -> RoStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let scene = Scene::parse(text)?;
        write_out(out, Box::into_raw(Box::new(RoScene(scene))), "out")
    })
}

/// Number of primitives in the scene; 0 for a null handle.
///
/// # Safety
/// `scene` must be null or a live handle from [`ro_scene_parse`].
#[no_mangle]
pub unsafe extern "C" fn ro_scene_len(scene: *const RoScene) -> usize {
    scene.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `scene` must be null or a handle from [`ro_scene_parse`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ro_scene_free(scene: *mut RoScene) {
    if !scene.is_null() {
        drop(Box::from_raw(scene));
    }
}

/// Builds the lookup oracle for `scene`. `params` is a comma-separated list
/// such as `"mx,Mx"`, or null for all four.
///
/// # Safety
/// `scene` must be a live handle, `params` null or NUL-terminated, and `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn ro_synthesize(
    scene: *const RoScene,
    mode: RoMode,
    params: *const c_char,
    out: *mut *mut RoCircuit,
) -> RoStatus {
    guard(|| {
        let scene = deref(scene, "scene")?;
        let sel = read_selector(params)?;
        let mode = match mode {
            RoMode::Naive => Mode::Naive,
            RoMode::Optimized => Mode::Optimized,
        };
        let c = synthesize(&scene.0, mode, &sel)?;
        write_out(out, Box::into_raw(Box::new(RoCircuit(c))), "out")
    })
}

/// Rewrites the circuit into `basis`, producing a new handle.
///
/// # Safety
/// `circuit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ro_circuit_lower(
    circuit: *const RoCircuit,
    basis: RoBasis,
    out: *mut *mut RoCircuit,
) -> RoStatus {
    guard(|| {
        let c = deref(circuit, "circuit")?;
        let basis = match basis {
            RoBasis::Logical => GateBasis::Logical,
            RoBasis::Toffoli => GateBasis::Toffoli,
            RoBasis::Elementary => GateBasis::Elementary,
        };
        let lowered = lower(&c.0, basis)?;
        write_out(out, Box::into_raw(Box::new(RoCircuit(lowered))), "out")
    })
}

/// # Safety
/// `circuit` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ro_circuit_metrics(
    circuit: *const RoCircuit,
    out: *mut RoMetrics,
) -> RoStatus {
    guard(|| {
        let m = deref(circuit, "circuit")?.0.metrics();
        let m = RoMetrics {
            depth: m.depth,
            gates: m.gates,
            qubits: m.qubits,
        };
        write_out(out, m, "out")
    })
}

/// OpenQASM 2.0 text. Circuits with MCX gates of more than two controls
/// must be lowered first.
///
/// # Safety
/// `circuit` must be a live handle and `out` writable. The string written
/// to `out` must be released with [`ro_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ro_circuit_qasm(
    circuit: *const RoCircuit,
    out: *mut *mut c_char,
) -> RoStatus {
    guard(|| {
        let text = export_qasm(&deref(circuit, "circuit")?.0)?;
        write_out(out, into_c_string(text)?, "out")
    })
}

/// # Safety
/// `circuit` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ro_circuit_free(circuit: *mut RoCircuit) {
    if !circuit.is_null() {
        drop(Box::from_raw(circuit));
    }
}

/// Checks every index of `scene` against the circuit. Returns
/// [`RoStatus::Verification`] with a per-index report in the error message
/// on mismatch.
///
/// # Safety
/// Both handles must be live and `params` null or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn ro_verify(
    circuit: *const RoCircuit,
    scene: *const RoScene,
    params: *const c_char,
) -> RoStatus {
    guard(|| {
        let c = deref(circuit, "circuit")?;
        let scene = deref(scene, "scene")?;
        let sel = read_selector(params)?;
        let report = verify_oracle(&c.0, &scene.0, &sel);
        if report.passed() {
            Ok(())
        } else {
            Err(Error::Verification(report.to_string()).into())
        }
    })
}

/// Samples the circuit from |0...0> and writes the histogram as CSV with
/// rows labelled by index and parameter tuple.
///
/// # Safety
/// Both handles must be live, `params` null or NUL-terminated, and `out`
/// writable. Release the string with [`ro_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ro_sample_csv(
    circuit: *const RoCircuit,
    scene: *const RoScene,
    params: *const c_char,
    shots: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> RoStatus {
    guard(|| {
        let c = deref(circuit, "circuit")?;
        let scene = deref(scene, "scene")?;
        let layout = OracleLayout::new(&scene.0, &read_selector(params)?);
        let sv = run(&c.0, Initial::Zero)?;
        let csv = sample(&sv, shots, seed).to_csv(|b| layout.label(b))?;
        write_out(out, into_c_string(csv)?, "out")
    })
}

/// Minimum sum of products for the function of `arity` inputs that is true
/// exactly on `onset[0..len]`, written as `m(..) + m(..)`.
///
/// # Safety
/// `onset` must point to `len` readable values (it may be null when `len`
/// is 0) and `out` must be writable. Release the string with
/// [`ro_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ro_minimize(
    arity: u32,
    onset: *const u32,
    len: usize,
    out: *mut *mut c_char,
) -> RoStatus {
    guard(|| {
        let values: &[u32] = if len == 0 {
            &[]
        } else if onset.is_null() {
            return Err(null("onset"));
        } else {
            std::slice::from_raw_parts(onset, len)
        };
        let table = TruthTable::new(arity, values.iter().copied())?;
        let sol = minimize(&table)?;
        write_out(out, into_c_string(sol.cover.to_string())?, "out")
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ro_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
