use std::path::{Path, PathBuf};
use std::process::Command;

fn manifest() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Directory holding the library artifacts of the current build.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(manifest().join("include/cutparam.h")).unwrap();
    for name in [
        "cp_last_error",
        "cp_curve_from_config",
        "cp_curve_closest_point",
        "cp_mesh_equilateral_grid",
        "cp_analyze",
        "cp_analysis_report",
        "cp_analysis_free",
        "typedef struct CpCurve CpCurve",
        "CP_STATUS_INTERNAL = 8",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    let lib = artifact_dir().join("libcutparam_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let tmp = tempfile::tempdir().unwrap();
    let exe = tmp.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest().join("tests/c_smoke.c"))
        .arg("-I")
        .arg(manifest().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("a C compiler named cc");
    assert!(status.success());
    let out = Command::new(Path::new(&exe)).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout), "exit=0 loops=1\n");
    assert!(out.status.success());
}
