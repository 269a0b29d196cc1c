//! C ABI over the vpec library.
//!
//! Codes are opaque handles created by the constructors below and released
//! with [`vpec_code_free`]. Every fallible call returns a [`VpecStatus`];
//! on failure a human-readable message is stored per thread and can be
//! copied out with [`vpec_last_error`]. Buffers are caller-allocated and
//! sized from the handle's dimensions, with symbols flattened packet by
//! packet in layout order.

use std::cell::RefCell;
use std::ffi::CString;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use num::ToPrimitive;
use vpec::adversary::{worst_case_distortion, Strategy};
use vpec::code::VpecCode;
use vpec::gf::{field_build, Symbol};
use vpec::lincode::{grs_build, search_l_mds};
use vpec::lmds_vpec::LmdsVpecCode;
use vpec::packet::PacketSet;
use vpec::ratio::{Distortion, Rational};
use vpec::rep_vpec::RepVpecCode;
use vpec::serial::{CodeFile, SearchFile};
use vpec::{Budget, Error};

/// Status code returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VpecStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// Parameters violate a precondition of the construction.
    Infeasible = 2,
    /// A buffer length does not match the handle's dimensions.
    LengthMismatch = 3,
    /// The requested enumeration exceeds the work budget.
    Budget = 4,
    /// Malformed JSON or text input.
    Parse = 5,
    Io = 6,
    /// The seeded search ran out of iterations without a witness.
    SearchExhausted = 7,
    /// A soundness property failed during the run.
    PropertyViolation = 8,
    /// A panic was caught at the boundary; state may be stale.
    Panic = 9,
}

/// Adversary placement strategy for [`vpec_worst_distortion`].
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum VpecStrategy {
    /// Every message against every corruption pattern.
    Exhaustive = 0,
    /// Seeded uniform corruptions.
    Random = 1,
    /// Seeded corruptions that rewrite packets toward other codewords.
    SwapToCodeword = 2,
}

/// Outcome of a distortion survey.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct VpecSurvey {
    pub worst_num: u64,
    pub worst_den: u64,
    /// 1 when some case produced a wrong symbol (infinite distortion);
    /// the rational fields are then meaningless.
    pub worst_infinite: u8,
    /// 1 when every message and corruption pattern was enumerated.
    pub exhaustive: u8,
    pub wrong_symbol_events: u64,
    pub max_erasures: u64,
    pub cases: u64,
}

/// An encoder/decoder pair behind the ABI.
pub struct VpecCodeHandle {
    code: Box<dyn VpecCode>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let owned = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = owned);
}

fn fail(status: VpecStatus, msg: &str) -> VpecStatus {
    set_error(msg);
    status
}

fn from_error(err: Error) -> VpecStatus {
    let status = match &err {
        Error::Infeasible(_) => VpecStatus::Infeasible,
        Error::LengthMismatch { .. } => VpecStatus::LengthMismatch,
        Error::Budget { .. } => VpecStatus::Budget,
        Error::Parse(_) => VpecStatus::Parse,
        Error::Io(_) => VpecStatus::Io,
        Error::SearchExhausted { .. } => VpecStatus::SearchExhausted,
        Error::PropertyViolation(_) | Error::ZeroInverse => VpecStatus::PropertyViolation,
    };
    fail(status, &err.to_string())
}

/// Runs a closure with panics converted to [`VpecStatus::Panic`].
fn guarded<F: FnOnce() -> VpecStatus>(f: F) -> VpecStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(VpecStatus::Panic, "internal panic caught at the ABI boundary"),
    }
}

fn budget_or_default(budget: u64) -> Budget {
    if budget == 0 {
        Budget::default()
    } else {
        Budget { enumeration: budget }
    }
}

unsafe fn handle_ref<'a>(h: *const VpecCodeHandle) -> Option<&'a VpecCodeHandle> {
    h.as_ref()
}

fn emit(out: *mut *mut VpecCodeHandle, code: Box<dyn VpecCode>) -> VpecStatus {
    if out.is_null() {
        return fail(VpecStatus::NullArgument, "out handle pointer is null");
    }
    let handle = Box::new(VpecCodeHandle { code });
    unsafe { *out = Box::into_raw(handle) };
    VpecStatus::Ok
}

fn rational_parts(r: &Rational) -> Option<(u64, u64)> {
    Some((r.numer().to_u64()?, r.denom().to_u64()?))
}

/// Copies the last error message of this thread into `buf` (truncated,
/// always nul-terminated when `cap > 0`) and returns the full message
/// length in bytes, excluding the terminator.
#[no_mangle]
pub unsafe extern "C" fn vpec_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && cap > 0 {
            let n = bytes.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Builds a window-replication code with `t` tolerated packet errors,
/// window width `s`, and the given alphabet size. `rounds > 1` batches
/// that many messages per packet set.
#[no_mangle]
pub unsafe extern "C" fn vpec_rep_code_new(
    t: usize,
    s: usize,
    alphabet: u32,
    rounds: usize,
    out: *mut *mut VpecCodeHandle,
) -> VpecStatus {
    guarded(|| {
        let plain = match RepVpecCode::new(t, s, alphabet) {
            Ok(c) => c,
            Err(e) => return from_error(e),
        };
        if rounds <= 1 {
            return emit(out, Box::new(plain));
        }
        match plain.batched(rounds) {
            Ok(c) => emit(out, Box::new(c)),
            Err(e) => from_error(e),
        }
    })
}

/// Searches a prime field of the given order for a base code with the
/// strong list-decoding properties the interleaved construction needs,
/// then builds that construction. Deterministic per seed.
#[no_mangle]
pub unsafe extern "C" fn vpec_lmds_code_search(
    order: u32,
    n: usize,
    t: usize,
    l: usize,
    seed: u64,
    max_iters: u64,
    budget: u64,
    out: *mut *mut VpecCodeHandle,
) -> VpecStatus {
    guarded(|| {
        let budget = budget_or_default(budget);
        let field = match field_build(order, 1) {
            Ok(f) => f,
            Err(e) => return from_error(e),
        };
        let k = match vpec::lmds_vpec::window_params(n, t, l) {
            Ok((_, row_k, _, _)) => row_k,
            Err(e) => return from_error(e),
        };
        let found = match search_l_mds(&field, n, k, l, seed, max_iters, budget) {
            Ok(o) => o,
            Err(e) => return from_error(e),
        };
        match LmdsVpecCode::build(found.code, t, l, budget) {
            Ok(c) => emit(out, Box::new(c)),
            Err(e) => from_error(e),
        }
    })
}

/// Builds the interleaved construction from a JSON code dump: either a
/// generator-matrix file or a search output with evaluation points and
/// multipliers. The JSON must be nul-terminated UTF-8.
#[no_mangle]
pub unsafe extern "C" fn vpec_lmds_code_from_json(
    json: *const c_char,
    t: usize,
    l: usize,
    budget: u64,
    out: *mut *mut VpecCodeHandle,
) -> VpecStatus {
    guarded(|| {
        if json.is_null() {
            return fail(VpecStatus::NullArgument, "json pointer is null");
        }
        let text = match std::ffi::CStr::from_ptr(json).to_str() {
            Ok(s) => s,
            Err(_) => return fail(VpecStatus::Parse, "json is not valid UTF-8"),
        };
        let base = if let Ok(file) = CodeFile::from_json(text) {
            match file.to_code() {
                Ok(c) => c,
                Err(e) => return from_error(e),
            }
        } else {
            let file = match SearchFile::from_json(text) {
                Ok(f) => f,
                Err(e) => return from_error(e),
            };
            let field = match field_build(file.p, file.m) {
                Ok(f) => f,
                Err(e) => return from_error(e),
            };
            match grs_build(&field, file.n, file.k, &file.params()) {
                Ok(c) => c,
                Err(e) => return from_error(e),
            }
        };
        match LmdsVpecCode::build(base, t, l, budget_or_default(budget)) {
            Ok(c) => emit(out, Box::new(c)),
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_free(h: *mut VpecCodeHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of packets per codeword, or 0 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_packets(h: *const VpecCodeHandle) -> usize {
    handle_ref(h).map_or(0, |h| h.code.params().packets)
}

/// Symbols per packet, or 0 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_packet_len(h: *const VpecCodeHandle) -> usize {
    handle_ref(h).map_or(0, |h| {
        h.code.layout().lens.first().copied().unwrap_or(0)
    })
}

/// Source message length in symbols, or 0 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_message_len(h: *const VpecCodeHandle) -> usize {
    handle_ref(h).map_or(0, |h| h.code.params().message_len)
}

/// Packet errors the code is declared against, or 0 on a null handle.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_errors(h: *const VpecCodeHandle) -> usize {
    handle_ref(h).map_or(0, |h| h.code.params().errors)
}

/// Per-packet rate as an exact fraction.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_rate(
    h: *const VpecCodeHandle,
    num: *mut u64,
    den: *mut u64,
) -> VpecStatus {
    guarded(|| {
        let (Some(handle), false) = (handle_ref(h), num.is_null() || den.is_null()) else {
            return fail(VpecStatus::NullArgument, "handle or out pointer is null");
        };
        match rational_parts(&handle.code.params().rate) {
            Some((n, d)) => {
                *num = n;
                *den = d;
                VpecStatus::Ok
            }
            None => fail(VpecStatus::Infeasible, "rate does not fit in u64"),
        }
    })
}

/// Declared distortion budget as an exact fraction.
#[no_mangle]
pub unsafe extern "C" fn vpec_code_distortion(
    h: *const VpecCodeHandle,
    num: *mut u64,
    den: *mut u64,
) -> VpecStatus {
    guarded(|| {
        let (Some(handle), false) = (handle_ref(h), num.is_null() || den.is_null()) else {
            return fail(VpecStatus::NullArgument, "handle or out pointer is null");
        };
        match rational_parts(&handle.code.params().distortion) {
            Some((n, d)) => {
                *num = n;
                *den = d;
                VpecStatus::Ok
            }
            None => fail(VpecStatus::Infeasible, "distortion does not fit in u64"),
        }
    })
}

/// Encodes `msg` (message_len symbols) into `out`, which must hold
/// exactly packets * packet_len symbols; packets are written back to
/// back in layout order.
#[no_mangle]
pub unsafe extern "C" fn vpec_encode(
    h: *const VpecCodeHandle,
    msg: *const Symbol,
    msg_len: usize,
    out: *mut Symbol,
    out_len: usize,
) -> VpecStatus {
    guarded(|| {
        let Some(handle) = handle_ref(h) else {
            return fail(VpecStatus::NullArgument, "handle is null");
        };
        if msg.is_null() || out.is_null() {
            return fail(VpecStatus::NullArgument, "msg or out pointer is null");
        }
        let params = handle.code.params();
        if msg_len != params.message_len {
            return fail(
                VpecStatus::LengthMismatch,
                &format!("message length {msg_len}, code wants {}", params.message_len),
            );
        }
        let message = slice::from_raw_parts(msg, msg_len);
        let sent = match handle.code.encode(message) {
            Ok(p) => p,
            Err(e) => return from_error(e),
        };
        let total: usize = sent.packets.iter().map(Vec::len).sum();
        if out_len != total {
            return fail(
                VpecStatus::LengthMismatch,
                &format!("out buffer holds {out_len} symbols, encoding needs {total}"),
            );
        }
        let out = slice::from_raw_parts_mut(out, out_len);
        let mut at = 0;
        for packet in &sent.packets {
            out[at..at + packet.len()].copy_from_slice(packet);
            at += packet.len();
        }
        VpecStatus::Ok
    })
}

/// Decodes a flattened packet buffer (packets * packet_len symbols).
/// Writes message_len entries to both `out` and `known`: `known[i]` is 1
/// where `out[i]` is a recovered symbol and 0 where the position is
/// erased (then `out[i]` is 0). A wrong-symbol event is impossible by
/// construction; the decoder erases instead.
#[no_mangle]
pub unsafe extern "C" fn vpec_decode(
    h: *const VpecCodeHandle,
    packets: *const Symbol,
    packets_len: usize,
    out: *mut Symbol,
    known: *mut u8,
    out_len: usize,
) -> VpecStatus {
    guarded(|| {
        let Some(handle) = handle_ref(h) else {
            return fail(VpecStatus::NullArgument, "handle is null");
        };
        if packets.is_null() || out.is_null() || known.is_null() {
            return fail(VpecStatus::NullArgument, "packets, out, or known pointer is null");
        }
        let layout = handle.code.layout();
        let lens = &layout.lens;
        let total: usize = lens.iter().sum();
        if packets_len != total {
            return fail(
                VpecStatus::LengthMismatch,
                &format!("packet buffer holds {packets_len} symbols, layout needs {total}"),
            );
        }
        let params = handle.code.params();
        if out_len != params.message_len {
            return fail(
                VpecStatus::LengthMismatch,
                &format!("out buffers hold {out_len} symbols, message has {}", params.message_len),
            );
        }
        let flat = slice::from_raw_parts(packets, packets_len);
        let mut split = Vec::with_capacity(lens.len());
        let mut at = 0;
        for &len in lens.iter() {
            split.push(flat[at..at + len].to_vec());
            at += len;
        }
        let word = match handle.code.decode(&PacketSet::new(split)) {
            Ok(w) => w,
            Err(e) => return from_error(e),
        };
        let out = slice::from_raw_parts_mut(out, out_len);
        let known = slice::from_raw_parts_mut(known, out_len);
        for (i, entry) in word.iter().enumerate() {
            match entry {
                Some(v) => {
                    out[i] = *v;
                    known[i] = 1;
                }
                None => {
                    out[i] = 0;
                    known[i] = 0;
                }
            }
        }
        VpecStatus::Ok
    })
}

/// Surveys decoding distortion under up to `t` corrupted packets.
/// `seed` and `trials` only apply to the seeded strategies; `budget`
/// bounds exhaustive enumeration (0 uses the default).
#[no_mangle]
pub unsafe extern "C" fn vpec_worst_distortion(
    h: *const VpecCodeHandle,
    t: usize,
    strategy: VpecStrategy,
    seed: u64,
    trials: u64,
    budget: u64,
    out: *mut VpecSurvey,
) -> VpecStatus {
    guarded(|| {
        let Some(handle) = handle_ref(h) else {
            return fail(VpecStatus::NullArgument, "handle is null");
        };
        if out.is_null() {
            return fail(VpecStatus::NullArgument, "out pointer is null");
        }
        let strategy = match strategy {
            VpecStrategy::Exhaustive => Strategy::Exhaustive,
            VpecStrategy::Random => Strategy::Random { seed, trials },
            VpecStrategy::SwapToCodeword => Strategy::SwapToCodeword { seed, trials },
        };
        let report = match worst_case_distortion(
            handle.code.as_ref(),
            t,
            &strategy,
            budget_or_default(budget),
            None,
        ) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        let survey = match &report.worst {
            Distortion::Finite(r) => {
                let Some((num, den)) = rational_parts(r) else {
                    return fail(VpecStatus::Infeasible, "distortion does not fit in u64");
                };
                VpecSurvey {
                    worst_num: num,
                    worst_den: den,
                    worst_infinite: 0,
                    exhaustive: report.exhaustive as u8,
                    wrong_symbol_events: report.wrong_symbol_events,
                    max_erasures: report.max_erasures as u64,
                    cases: report.cases,
                }
            }
            Distortion::Infinite => VpecSurvey {
                worst_num: 0,
                worst_den: 1,
                worst_infinite: 1,
                exhaustive: report.exhaustive as u8,
                wrong_symbol_events: report.wrong_symbol_events,
                max_erasures: report.max_erasures as u64,
                cases: report.cases,
            },
        };
        *out = survey;
        VpecStatus::Ok
    })
}
