//! Exercises the C ABI exactly as a foreign caller would: raw pointers,
//! status codes, caller-owned buffers.

use disco_ffi::*;
use std::ffi::CString;
use std::ptr;

fn token(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn sample(tok: &str, order: usize, seed: u64, stream: u64) -> *mut DiscoMatrix {
    let mut m: *mut DiscoMatrix = ptr::null_mut();
    let st = disco_matrix_sample(token(tok).as_ptr(), order, seed, stream, &mut m);
    assert_eq!(st, DiscoStatus::Ok);
    assert!(!m.is_null());
    m
}

unsafe fn entries(m: *const DiscoMatrix) -> Vec<f64> {
    let n = disco_matrix_order(m);
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut v = 0.0;
            assert_eq!(disco_matrix_entry(m, i, j, &mut v), DiscoStatus::Ok);
            out.push(v);
        }
    }
    out
}

#[test]
fn sample_roundtrip_and_symmetry() {
    unsafe {
        let m = sample("wigner", 12, 5, 0);
        assert_eq!(disco_matrix_order(m), 12);
        for i in 0..12 {
            for j in 0..12 {
                let (mut a, mut b) = (0.0, 0.0);
                disco_matrix_entry(m, i, j, &mut a);
                disco_matrix_entry(m, j, i, &mut b);
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        disco_matrix_free(m);
    }
}

#[test]
fn sampling_is_deterministic_per_stream() {
    unsafe {
        let m1 = sample("pst", 16, 42, 7);
        let m2 = sample("pst", 16, 42, 7);
        let m3 = sample("pst", 16, 42, 8);
        assert_eq!(entries(m1), entries(m2));
        assert_ne!(entries(m1), entries(m3));
        disco_matrix_free(m1);
        disco_matrix_free(m2);
        disco_matrix_free(m3);
    }
}

#[test]
fn trace_power_and_moment_agree_with_spectrum() {
    unsafe {
        let m = sample("wigner", 24, 9, 0);
        let n = disco_matrix_order(m);
        let mut eigs = vec![0.0f64; n];
        assert_eq!(
            disco_matrix_eigenvalues(m, eigs.as_mut_ptr(), n),
            DiscoStatus::Ok
        );
        assert!(eigs.windows(2).all(|w| w[0] <= w[1]), "ascending spectrum");
        let mut t2 = 0.0;
        assert_eq!(disco_matrix_trace_power(m, 2, &mut t2), DiscoStatus::Ok);
        let from_eigs: f64 = eigs.iter().map(|l| l * l).sum();
        assert!((t2 - from_eigs).abs() <= 1e-8 * from_eigs.abs().max(1.0));

        let norm = (n as f64).sqrt();
        let mut m2 = 0.0;
        assert_eq!(disco_matrix_moment(m, 2, norm, &mut m2), DiscoStatus::Ok);
        assert!((m2 - t2 / (n as f64 * norm * norm)).abs() <= 1e-12);

        // undersized buffer is rejected without writing
        assert_eq!(
            disco_matrix_eigenvalues(m, eigs.as_mut_ptr(), n - 1),
            DiscoStatus::InvalidArgument
        );
        disco_matrix_free(m);
    }
}

#[test]
fn build_stacks_doubling_blocks() {
    unsafe {
        let mut m: *mut DiscoMatrix = ptr::null_mut();
        let st = disco_matrix_build(token("pst").as_ptr(), 8, 3, 2, 0, &mut m);
        assert_eq!(st, DiscoStatus::Ok);
        assert_eq!(disco_matrix_order(m), 32);
        // top-left quadrant repeats in the bottom-right at every level
        for i in 0..16 {
            for j in 0..16 {
                let (mut a, mut b) = (0.0, 0.0);
                disco_matrix_entry(m, i, j, &mut a);
                disco_matrix_entry(m, 16 + i, 16 + j, &mut b);
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
        disco_matrix_free(m);
    }
}

#[test]
fn limit_moments_match_known_values() {
    unsafe {
        let mut v = 0.0;
        assert_eq!(disco_limit_moment(1, 4, &mut v), DiscoStatus::Ok);
        assert_eq!(v, 2.25);
        let (mut num, mut den) = (0i64, 0i64);
        assert_eq!(
            disco_limit_moment_rational(1, 8, &mut num, &mut den),
            DiscoStatus::Ok
        );
        assert_eq!((num, den), (431, 16));
        // beyond the enumeration budget
        assert_eq!(
            disco_limit_moment(1, 99, &mut v),
            DiscoStatus::InvalidArgument
        );
        // exact value exists but cannot fit a 64-bit fraction
        assert_eq!(
            disco_limit_moment_rational(40, 8, &mut num, &mut den),
            DiscoStatus::InvalidArgument
        );
    }
}

#[test]
fn counterexample_traces_are_exact() {
    unsafe {
        let (mut a4, mut b4, mut mid) = (0i64, 0i64, 0i64);
        assert_eq!(
            disco_counterexample_traces(&mut a4, &mut b4, &mut mid),
            DiscoStatus::Ok
        );
        assert_eq!(a4, 886_801_750);
        assert_eq!(b4, 869_734_090);
        assert_eq!(mid, 1_336_343_790);
        assert!(mid > a4.max(b4));
    }
}

#[test]
fn degrees_of_freedom_counts() {
    unsafe {
        let mut dof = 0usize;
        assert_eq!(
            disco_degrees_of_freedom(token("pst").as_ptr(), 64, &mut dof),
            DiscoStatus::Ok
        );
        assert_eq!(dof, 32);
        assert_eq!(
            disco_degrees_of_freedom(token("wigner").as_ptr(), 8, &mut dof),
            DiscoStatus::Ok
        );
        assert_eq!(dof, 36);
    }
}

#[test]
fn errors_surface_status_and_message() {
    unsafe {
        let mut m: *mut DiscoMatrix = ptr::null_mut();
        assert_eq!(
            disco_matrix_sample(token("nonsense").as_ptr(), 8, 1, 0, &mut m),
            DiscoStatus::InvalidArgument
        );
        assert!(m.is_null());
        let needed = disco_last_error(ptr::null_mut(), 0);
        assert!(needed > 0);
        let mut buf = vec![0i8; needed + 1];
        let written = disco_last_error(buf.as_mut_ptr(), buf.len());
        assert_eq!(written, needed);
        let msg = std::ffi::CStr::from_ptr(buf.as_ptr()).to_str().unwrap();
        assert!(msg.contains("nonsense"), "{msg}");

        // pst needs an even order
        assert_eq!(
            disco_matrix_sample(token("pst").as_ptr(), 7, 1, 0, &mut m),
            DiscoStatus::InvalidArgument
        );
        // null out-pointers are caught, not dereferenced
        assert_eq!(
            disco_matrix_sample(token("pst").as_ptr(), 8, 1, 0, ptr::null_mut()),
            DiscoStatus::NullPointer
        );
        assert_eq!(disco_matrix_order(ptr::null()), 0);
        let mut v = 0.0;
        assert_eq!(
            disco_matrix_trace_power(ptr::null(), 2, &mut v),
            DiscoStatus::NullPointer
        );
        disco_matrix_free(ptr::null_mut()); // tolerated no-op
    }
}

#[test]
fn header_is_generated_with_the_full_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("include/disco.h");
    let text = std::fs::read_to_string(header).expect("cbindgen header exists");
    for symbol in [
        "DiscoStatus",
        "DiscoMatrix",
        "disco_matrix_sample",
        "disco_matrix_build",
        "disco_matrix_order",
        "disco_matrix_entry",
        "disco_matrix_trace_power",
        "disco_matrix_moment",
        "disco_matrix_eigenvalues",
        "disco_matrix_free",
        "disco_limit_moment",
        "disco_limit_moment_rational",
        "disco_counterexample_traces",
        "disco_degrees_of_freedom",
        "disco_last_error",
    ] {
        assert!(text.contains(symbol), "header is missing {symbol}");
    }
}
