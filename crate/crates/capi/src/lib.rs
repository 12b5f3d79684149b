//! C ABI over the core library: opaque handles, integer error codes, and
//! UTF-8 strings owned by the library. Every function returns an
//! [`FwStatus`]; on any failure the thread-local message behind
//! [`fw_last_error`] describes what went wrong. Strings returned through
//! out-pointers are released with [`fw_string_release`], handles with their
//! `_release` functions. All handles are immutable after construction and
//! safe to share across threads.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::sync::Arc;

use forestwalk::forest::{build_forest, export_dot};
use forestwalk::group::GroupModel;
use forestwalk::ladder::{check_ladder, scale_from_text, scale_to_text, Scale};
use forestwalk::preset::{build_preset_scale, walk_alpha, PresetName};
use forestwalk::records::StepLaw;
use forestwalk::walk::{
    sample_path, verify_spike_structure, verify_trunk, SpikeOptions, StartPoint,
    StepDistribution,
};

/// Status codes returned by every entry point.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FwStatus {
    Ok = 0,
    /// A null pointer or otherwise invalid argument.
    InvalidArgument = 1,
    /// Text failed to parse (element syntax, scale file, preset name).
    ParseError = 2,
    /// A ball or search exceeded its resource budget.
    Capacity = 3,
    /// A structural invariant failed (non-ladder scale, failed check).
    Invariant = 4,
    /// Any other internal error; see `fw_last_error`.
    Internal = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message).unwrap_or_default();
    });
}

/// The message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn fw_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by the library.
///
/// # Safety
/// `text` must have been returned by this library and not released before.
#[no_mangle]
pub unsafe extern "C" fn fw_string_release(text: *mut c_char) {
    if !text.is_null() {
        drop(unsafe { CString::from_raw(text) });
    }
}

unsafe fn read_str<'a>(text: *const c_char) -> Result<&'a str, FwStatus> {
    if text.is_null() {
        set_error("null string argument");
        return Err(FwStatus::InvalidArgument);
    }
    unsafe { CStr::from_ptr(text) }.to_str().map_err(|_| {
        set_error("string argument is not valid UTF-8");
        FwStatus::InvalidArgument
    })
}

fn give_string(out: *mut *mut c_char, text: String) -> FwStatus {
    let Ok(c) = CString::new(text) else {
        set_error("output contained an interior NUL byte");
        return FwStatus::Internal;
    };
    unsafe { *out = c.into_raw() };
    FwStatus::Ok
}

/// Opaque group-model handle.
pub struct FwModel {
    inner: GroupModel,
}

/// Opaque scale (ladder) handle.
pub struct FwScale {
    inner: Arc<Scale>,
}

/// Opaque step-distribution handle.
pub struct FwDistribution {
    inner: Arc<StepDistribution>,
}

/// Creates a free-group model of the given rank (2..=26).
#[no_mangle]
pub extern "C" fn fw_model_free_group(rank: usize, out: *mut *mut FwModel) -> FwStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FwStatus::InvalidArgument;
    }
    match GroupModel::free(rank) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(FwModel { inner })) };
            FwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            FwStatus::InvalidArgument
        }
    }
}

/// Creates a lamplighter model over `Z_modulus`.
#[no_mangle]
pub extern "C" fn fw_model_lamplighter(modulus: u32, out: *mut *mut FwModel) -> FwStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FwStatus::InvalidArgument;
    }
    match GroupModel::lamplighter(modulus) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(FwModel { inner })) };
            FwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            FwStatus::InvalidArgument
        }
    }
}

/// # Safety
/// `model` must be a live handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn fw_model_release(model: *mut FwModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Multiplies two elements given in the model's text syntax; the canonical
/// product is returned as text.
///
/// # Safety
/// `model` must be live; `left`, `right` must be NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn fw_element_multiply(
    model: *const FwModel,
    left: *const c_char,
    right: *const c_char,
    out: *mut *mut c_char,
) -> FwStatus {
    if model.is_null() || out.is_null() {
        set_error("null argument");
        return FwStatus::InvalidArgument;
    }
    let model = unsafe { &(*model).inner };
    let (left, right) = match (unsafe { read_str(left) }, unsafe { read_str(right) }) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    let compute = || -> Result<String, forestwalk::GroupError> {
        let a = model.parse(left)?;
        let b = model.parse(right)?;
        Ok(model.display(&model.multiply(&a, &b)?))
    };
    match compute() {
        Ok(text) => give_string(out, text),
        Err(e) => {
            set_error(e.to_string());
            FwStatus::ParseError
        }
    }
}

/// Builds one of the named preset scales (`f2-small`, `lamplighter-small`,
/// `f2-markov`, `f2-walk`, `lamplighter-walk`).
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_scale_preset(
    name: *const c_char,
    out: *mut *mut FwScale,
) -> FwStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FwStatus::InvalidArgument;
    }
    let name = match unsafe { read_str(name) } {
        Ok(n) => n,
        Err(s) => return s,
    };
    let Some(preset) = PresetName::parse(name) else {
        set_error(format!("unknown preset `{name}`"));
        return FwStatus::ParseError;
    };
    match build_preset_scale(preset) {
        Ok(inner) => {
            unsafe { *out = Box::into_raw(Box::new(FwScale { inner })) };
            FwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            FwStatus::Internal
        }
    }
}

/// Parses a scale from its text serialization.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_scale_from_text(
    text: *const c_char,
    out: *mut *mut FwScale,
) -> FwStatus {
    if out.is_null() {
        set_error("null out pointer");
        return FwStatus::InvalidArgument;
    }
    let text = match unsafe { read_str(text) } {
        Ok(t) => t,
        Err(s) => return s,
    };
    match scale_from_text(text) {
        Ok(scale) => {
            unsafe {
                *out = Box::into_raw(Box::new(FwScale {
                    inner: Arc::new(scale),
                }))
            };
            FwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            FwStatus::ParseError
        }
    }
}

/// Serializes a scale to its round-tripping text form.
///
/// # Safety
/// `scale` must be live; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_scale_to_text(
    scale: *const FwScale,
    out: *mut *mut c_char,
) -> FwStatus {
    if scale.is_null() || out.is_null() {
        set_error("null argument");
        return FwStatus::InvalidArgument;
    }
    let scale = unsafe { &(*scale).inner };
    give_string(out, scale_to_text(scale))
}

/// Number of spiking levels.
///
/// # Safety
/// `scale` must be live.
#[no_mangle]
pub unsafe extern "C" fn fw_scale_levels(scale: *const FwScale) -> usize {
    if scale.is_null() {
        return 0;
    }
    unsafe { &(*scale).inner }.horizon()
}

/// # Safety
/// `scale` must be a live handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn fw_scale_release(scale: *mut FwScale) {
    if !scale.is_null() {
        drop(unsafe { Box::from_raw(scale) });
    }
}

/// Exhaustively checks the ladder axioms on a ball of the given radius.
/// `axioms_hold` receives 1 or 0.
///
/// # Safety
/// `scale` must be live; `axioms_hold` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_scale_check_ladder(
    scale: *const FwScale,
    ball_radius: u64,
    ball_budget: usize,
    axioms_hold: *mut i32,
) -> FwStatus {
    if scale.is_null() || axioms_hold.is_null() {
        set_error("null argument");
        return FwStatus::InvalidArgument;
    }
    let scale = unsafe { &(*scale).inner };
    match check_ladder(scale, ball_radius, ball_budget) {
        Ok(report) => {
            unsafe { *axioms_hold = report.direct_axioms_hold() as i32 };
            FwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            FwStatus::Capacity
        }
    }
}

/// Renders the despiking forest on a ball as DOT text.
///
/// # Safety
/// `scale` must be live; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_forest_dot(
    scale: *const FwScale,
    ball_radius: u64,
    ball_budget: usize,
    out: *mut *mut c_char,
) -> FwStatus {
    if scale.is_null() || out.is_null() {
        set_error("null argument");
        return FwStatus::InvalidArgument;
    }
    let scale = unsafe { &(*scale).inner };
    match build_forest(Arc::clone(scale), ball_radius, ball_budget) {
        Ok(forest) => give_string(out, export_dot(&forest, None)),
        Err(e) => {
            set_error(e.to_string());
            FwStatus::Invariant
        }
    }
}

/// Builds the walk step distribution over a scale: weights realize the
/// power-law `p_j ∝ (j+1)^{-s}` with the preset α-sequence.
///
/// # Safety
/// `scale` must be live; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_distribution_power(
    scale: *const FwScale,
    s: f64,
    out: *mut *mut FwDistribution,
) -> FwStatus {
    if scale.is_null() || out.is_null() {
        set_error("null argument");
        return FwStatus::InvalidArgument;
    }
    let scale = unsafe { &(*scale).inner };
    let law = match StepLaw::power(s, 4096) {
        Ok(law) => law,
        Err(e) => {
            set_error(e.to_string());
            return FwStatus::InvalidArgument;
        }
    };
    match StepDistribution::build(Arc::clone(scale), law, &walk_alpha) {
        Ok(dist) => {
            unsafe {
                *out = Box::into_raw(Box::new(FwDistribution {
                    inner: Arc::new(dist),
                }))
            };
            FwStatus::Ok
        }
        Err(e) => {
            set_error(e.to_string());
            FwStatus::Invariant
        }
    }
}

/// # Safety
/// `dist` must be a live handle from this library, released once.
#[no_mangle]
pub unsafe extern "C" fn fw_distribution_release(dist: *mut FwDistribution) {
    if !dist.is_null() {
        drop(unsafe { Box::from_raw(dist) });
    }
}

/// Simulates one path and verifies its record/spike structure; a JSON
/// summary (epoch counts, burn-in, exceptions) is returned as text.
///
/// # Safety
/// `dist` must be live; `out` non-null.
#[no_mangle]
pub unsafe extern "C" fn fw_walk_verify_json(
    dist: *const FwDistribution,
    length: usize,
    seed: u64,
    stream: u64,
    out: *mut *mut c_char,
) -> FwStatus {
    if dist.is_null() || out.is_null() {
        set_error("null argument");
        return FwStatus::InvalidArgument;
    }
    let dist = unsafe { &(*dist).inner };
    let run = || -> Result<String, forestwalk::walk::WalkError> {
        let trace = sample_path(
            dist,
            length,
            StartPoint::identity(dist.scale()),
            seed,
            stream,
        )?;
        let report = verify_spike_structure(dist, &trace, &SpikeOptions::default())?;
        let trunk = verify_trunk(&report);
        Ok(serde_json::json!({
            "length": length,
            "epochs": report.epochs.len(),
            "verified_epochs": report.verified_epochs,
            "exceptions": report.exceptions,
            "burn_in": trunk.k0,
            "chain_pairs": trunk.chain_pairs,
            "chain_exceptions": trunk.chain_exceptions,
        })
        .to_string())
    };
    match run() {
        Ok(json) => give_string(out, json),
        Err(e) => {
            set_error(e.to_string());
            FwStatus::Invariant
        }
    }
}
