//! Exercises the C ABI from the Rust side: handle lifecycle, flat-buffer
//! encode/decode, error reporting, and the generated header.

use std::ffi::{CString, c_char};
use std::ptr;

use vpec::gf::{field_build, Symbol};
use vpec::lincode::search_l_mds;
use vpec::serial::{CodeFile, SearchFile};

use vpec_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0u8; 256];
    let n = unsafe { vpec_last_error(buf.as_mut_ptr() as *mut c_char, buf.len()) };
    buf.truncate(n.min(buf.len() - 1));
    String::from_utf8(buf).unwrap()
}

fn rep_handle(t: usize, s: usize, q: u32, rounds: usize) -> *mut VpecCodeHandle {
    let mut h: *mut VpecCodeHandle = ptr::null_mut();
    let status = unsafe { vpec_rep_code_new(t, s, q, rounds, &mut h) };
    assert_eq!(status, VpecStatus::Ok, "{}", last_error());
    assert!(!h.is_null());
    h
}

#[test]
fn rep_roundtrip_through_flat_buffers() {
    let h = rep_handle(1, 1, 3, 1);
    unsafe {
        assert_eq!(vpec_code_packets(h), 3);
        assert_eq!(vpec_code_packet_len(h), 2);
        assert_eq!(vpec_code_message_len(h), 3);
        assert_eq!(vpec_code_errors(h), 1);

        let (mut num, mut den) = (0u64, 0u64);
        assert_eq!(vpec_code_rate(h, &mut num, &mut den), VpecStatus::Ok);
        assert_eq!((num, den), (2, 3));
        assert_eq!(vpec_code_distortion(h, &mut num, &mut den), VpecStatus::Ok);
        assert_eq!((num, den), (1, 3));

        let msg: [Symbol; 3] = [1, 2, 0];
        let mut wire = [0 as Symbol; 6];
        let status = vpec_encode(h, msg.as_ptr(), 3, wire.as_mut_ptr(), 6);
        assert_eq!(status, VpecStatus::Ok, "{}", last_error());

        // Clean delivery reproduces the message with nothing erased.
        let mut out = [9 as Symbol; 3];
        let mut known = [7u8; 3];
        let status = vpec_decode(h, wire.as_ptr(), 6, out.as_mut_ptr(), known.as_mut_ptr(), 3);
        assert_eq!(status, VpecStatus::Ok, "{}", last_error());
        assert_eq!(known, [1, 1, 1]);
        assert_eq!(out, msg);

        // A corrupted packet can erase symbols but never fake one.
        let mut hit = wire;
        hit[0] = (hit[0] + 1) % 3;
        hit[1] = (hit[1] + 2) % 3;
        let status = vpec_decode(h, hit.as_ptr(), 6, out.as_mut_ptr(), known.as_mut_ptr(), 3);
        assert_eq!(status, VpecStatus::Ok, "{}", last_error());
        for i in 0..3 {
            if known[i] == 1 {
                assert_eq!(out[i], msg[i], "wrong symbol at {i}");
            }
        }
        vpec_code_free(h);
    }
}

#[test]
fn batched_handles_expose_the_round_dimensions() {
    let h = rep_handle(1, 1, 3, 4);
    unsafe {
        assert_eq!(vpec_code_packets(h), 3);
        assert_eq!(vpec_code_message_len(h), 12);
        assert_eq!(vpec_code_packet_len(h), 8);
        vpec_code_free(h);
    }
}

#[test]
fn length_and_null_errors_are_reported() {
    let h = rep_handle(1, 1, 3, 1);
    unsafe {
        let msg: [Symbol; 2] = [1, 2];
        let mut wire = [0 as Symbol; 6];
        let status = vpec_encode(h, msg.as_ptr(), 2, wire.as_mut_ptr(), 6);
        assert_eq!(status, VpecStatus::LengthMismatch);
        assert!(last_error().contains("length"), "{}", last_error());

        let mut out = [0 as Symbol; 3];
        let mut known = [0u8; 3];
        let status = vpec_decode(h, wire.as_ptr(), 5, out.as_mut_ptr(), known.as_mut_ptr(), 3);
        assert_eq!(status, VpecStatus::LengthMismatch);

        let status = vpec_encode(ptr::null(), msg.as_ptr(), 2, wire.as_mut_ptr(), 6);
        assert_eq!(status, VpecStatus::NullArgument);
        assert_eq!(vpec_code_packets(ptr::null()), 0);
        assert_eq!(vpec_code_message_len(ptr::null()), 0);

        let mut h2: *mut VpecCodeHandle = ptr::null_mut();
        let status = vpec_rep_code_new(1, 1, 1, 1, &mut h2);
        assert_eq!(status, VpecStatus::Infeasible);
        assert!(h2.is_null());
        assert!(!last_error().is_empty());

        vpec_code_free(h);
        vpec_code_free(ptr::null_mut());
    }
}

#[test]
fn search_constructor_builds_the_interleaved_code() {
    let mut h: *mut VpecCodeHandle = ptr::null_mut();
    let status = unsafe { vpec_lmds_code_search(7, 5, 2, 2, 1, 10_000, 0, &mut h) };
    assert_eq!(status, VpecStatus::Ok, "{}", last_error());
    unsafe {
        assert_eq!(vpec_code_packets(h), 5);
        // Five interleaved [5,2] rows: packets are columns of height 5.
        assert_eq!(vpec_code_packet_len(h), 5);
        assert_eq!(vpec_code_message_len(h), 10);
        assert_eq!(vpec_code_errors(h), 2);
        let (mut num, mut den) = (0u64, 0u64);
        assert_eq!(vpec_code_rate(h, &mut num, &mut den), VpecStatus::Ok);
        assert_eq!((num, den), (1, 2));
        assert_eq!(vpec_code_distortion(h, &mut num, &mut den), VpecStatus::Ok);
        assert_eq!((num, den), (4, 5));

        let mut survey = VpecSurvey {
            worst_num: 0,
            worst_den: 1,
            worst_infinite: 1,
            exhaustive: 0,
            wrong_symbol_events: 99,
            max_erasures: 99,
            cases: 0,
        };
        let status =
            vpec_worst_distortion(h, 2, VpecStrategy::Random, 5, 200, 0, &mut survey);
        assert_eq!(status, VpecStatus::Ok, "{}", last_error());
        assert_eq!(survey.wrong_symbol_events, 0);
        assert_eq!(survey.worst_infinite, 0);
        assert_eq!(survey.cases, 200);
        assert!(survey.max_erasures <= 8);

        // Full enumeration of 7^10 messages cannot fit a budget of 1000.
        let status =
            vpec_worst_distortion(h, 2, VpecStrategy::Exhaustive, 0, 0, 1000, &mut survey);
        assert_eq!(status, VpecStatus::Budget);

        vpec_code_free(h);
    }
}

#[test]
fn json_loader_accepts_both_dump_formats() {
    let field = field_build(7, 1).unwrap();
    let outcome = search_l_mds(&field, 5, 2, 2, 1, 10_000, Default::default()).unwrap();

    let search_json = SearchFile::new(7, 1, 5, 2, &outcome.params, &outcome.report, 1)
        .unwrap()
        .to_json();
    let generator_json = CodeFile::from_code(&outcome.code).to_json();

    for json in [search_json, generator_json] {
        let c = CString::new(json).unwrap();
        let mut h: *mut VpecCodeHandle = ptr::null_mut();
        let status = unsafe { vpec_lmds_code_from_json(c.as_ptr(), 2, 2, 0, &mut h) };
        assert_eq!(status, VpecStatus::Ok, "{}", last_error());
        unsafe {
            assert_eq!(vpec_code_message_len(h), 10);
            vpec_code_free(h);
        }
    }

    let bad = CString::new("{ not json").unwrap();
    let mut h: *mut VpecCodeHandle = ptr::null_mut();
    let status = unsafe { vpec_lmds_code_from_json(bad.as_ptr(), 2, 2, 0, &mut h) };
    assert_eq!(status, VpecStatus::Parse);
    assert!(h.is_null());
}

#[test]
fn generated_header_covers_the_surface() {
    let header = std::fs::read_to_string(
        concat!(env!("CARGO_MANIFEST_DIR"), "/include/vpec.h"),
    )
    .expect("header generated at build time");
    for needle in [
        "typedef struct VpecCodeHandle VpecCodeHandle;",
        "VPEC_STATUS_OK",
        "VPEC_STRATEGY_SWAP_TO_CODEWORD",
        "vpec_rep_code_new",
        "vpec_lmds_code_search",
        "vpec_lmds_code_from_json",
        "vpec_encode",
        "vpec_decode",
        "vpec_worst_distortion",
        "vpec_last_error",
        "vpec_code_free",
    ] {
        assert!(header.contains(needle), "header is missing {needle}");
    }
}
