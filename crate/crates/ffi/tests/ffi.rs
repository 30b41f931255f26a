use std::ffi::{c_char, CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use rayoracle_ffi::*;

const CONFIG1: &str = "bounds 4 4\nrect 0 1 0 1\nrect 0 3 2 2\nrect 1 1 3 3\nrect 3 3 3 3\n";

fn parse(text: &str) -> (RoStatus, *mut RoScene) {
    let text = CString::new(text).unwrap();
    let mut scene = ptr::null_mut();
    let status = unsafe { ro_scene_parse(text.as_ptr(), &mut scene) };
    (status, scene)
}

fn take_string(p: *mut c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { ro_string_free(p) };
    s
}

fn last_error() -> String {
    let p = ro_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn synthesize_lower_and_measure() {
    let (status, scene) = parse(CONFIG1);
    assert_eq!(status, RoStatus::Ok);
    assert_eq!(unsafe { ro_scene_len(scene) }, 4);

    let mut metrics = [RoMetrics::default(); 2];
    for (i, mode) in [RoMode::Optimized, RoMode::Naive].into_iter().enumerate() {
        let mut logical = ptr::null_mut();
        let mut toffoli = ptr::null_mut();
        unsafe {
            assert_eq!(
                ro_synthesize(scene, mode, ptr::null(), &mut logical),
                RoStatus::Ok
            );
            assert_eq!(
                ro_circuit_lower(logical, RoBasis::Toffoli, &mut toffoli),
                RoStatus::Ok
            );
            assert_eq!(ro_circuit_metrics(toffoli, &mut metrics[i]), RoStatus::Ok);
            assert_eq!(ro_verify(toffoli, scene, ptr::null()), RoStatus::Ok);
            ro_circuit_free(toffoli);
            ro_circuit_free(logical);
        }
    }
    assert_eq!((metrics[0].qubits, metrics[1].qubits), (12, 14));
    assert!(metrics[0].gates < metrics[1].gates && metrics[0].depth < metrics[1].depth);
    unsafe { ro_scene_free(scene) };
}

#[test]
fn qasm_and_samples() {
    let (_, scene) = parse(CONFIG1);
    let params = CString::new("mx,Mx").unwrap();
    let mut c = ptr::null_mut();
    let mut out = ptr::null_mut();
    unsafe {
        assert_eq!(
            ro_synthesize(scene, RoMode::Optimized, params.as_ptr(), &mut c),
            RoStatus::Ok
        );
        assert_eq!(ro_circuit_qasm(c, &mut out), RoStatus::Ok);
        assert!(take_string(out).contains("qreg Mx[2];"));
        assert_eq!(
            ro_sample_csv(c, scene, params.as_ptr(), 400, 3, &mut out),
            RoStatus::Ok
        );
        let csv = take_string(out);
        assert!(
            csv.starts_with("# shots=400 seed=3\nlabel,count\n"),
            "{csv}"
        );
        assert!(csv.contains("\"2 : (1,1)\""), "{csv}");
        ro_circuit_free(c);
        ro_scene_free(scene);
    }
}

#[test]
fn minimize_worked_example() {
    let onset = [0u32, 1, 2, 5, 6, 7];
    let mut out = ptr::null_mut();
    let status = unsafe { ro_minimize(3, onset.as_ptr(), onset.len(), &mut out) };
    assert_eq!(status, RoStatus::Ok);
    assert_eq!(take_string(out).matches("m(").count(), 3);

    let status = unsafe { ro_minimize(3, ptr::null(), 0, &mut out) };
    assert_eq!(status, RoStatus::Ok);
    assert_eq!(take_string(out), "0");
}

#[test]
fn errors_map_to_status_codes() {
    let (status, scene) = parse("bounds 4 4\nrect 0 4 0 0\n");
    assert_eq!(status, RoStatus::Validation);
    assert!(scene.is_null());
    assert!(last_error().contains("M_x"));

    assert_eq!(parse("bounds 4 4\nrect 0 1\n").0, RoStatus::Parse);

    let mut s = ptr::null_mut();
    assert_eq!(
        unsafe { ro_scene_parse(ptr::null(), &mut s) },
        RoStatus::NullPointer
    );

    let bad = [b'b', 0xff, 0];
    assert_eq!(
        unsafe { ro_scene_parse(bad.as_ptr().cast(), &mut s) },
        RoStatus::InvalidUtf8
    );

    let mut out = ptr::null_mut();
    let onset = [9u32];
    assert_eq!(
        unsafe { ro_minimize(3, onset.as_ptr(), 1, &mut out) },
        RoStatus::Domain
    );

    let (_, scene) = parse(CONFIG1);
    let zz = CString::new("mx,zz").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(
        unsafe { ro_synthesize(scene, RoMode::Naive, zz.as_ptr(), &mut c) },
        RoStatus::Domain
    );
    unsafe { ro_scene_free(scene) };
}

#[test]
fn verification_failure_is_reported() {
    let (_, c1) = parse(CONFIG1);
    let (_, other) = parse("bounds 4 4\nrect 0 0 0 0\nrect 0 0 0 0\nrect 0 0 0 0\nrect 0 0 0 0\n");
    let mut c = ptr::null_mut();
    unsafe {
        assert_eq!(
            ro_synthesize(c1, RoMode::Optimized, ptr::null(), &mut c),
            RoStatus::Ok
        );
        assert_eq!(ro_verify(c, other, ptr::null()), RoStatus::Verification);
        assert!(last_error().contains("FAIL"));
        assert_eq!(ro_verify(c, c1, ptr::null()), RoStatus::Ok);
        assert!(ro_last_error_message().is_null());
        ro_circuit_free(c);
        ro_scene_free(c1);
        ro_scene_free(other);
    }
}

#[test]
fn free_functions_accept_null() {
    unsafe {
        ro_scene_free(ptr::null_mut());
        ro_circuit_free(ptr::null_mut());
        ro_string_free(ptr::null_mut());
        assert_eq!(ro_scene_len(ptr::null()), 0);
    }
}

/// Directory holding the library artifacts next to this test binary.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_static_library() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = ["", "deps"]
        .iter()
        .map(|d| artifact_dir().join(d).join("librayoracle_ffi.a"))
        .find(|p| p.exists())
        .expect("static library is built alongside the tests");
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests").join("smoke.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap_or_else(|e| panic!("running {cc}: {e}"));
    assert!(status.success(), "compiling smoke.c failed");
    let run = Command::new(&exe).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), "ok\n");
}
