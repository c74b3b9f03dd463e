//! The generated header declares the ABI and compiles as C.

use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include").join("r2sort.h")
}

#[test]
fn header_declares_every_entry_point() {
    let text = std::fs::read_to_string(header()).expect("header generated by build.rs");
    for name in [
        "r2s_last_error_message",
        "r2s_dag_new",
        "r2s_dag_sample_er",
        "r2s_dag_sample_sf",
        "r2s_dag_free",
        "r2s_dataset_read_csv",
        "r2s_dataset_simulate",
        "r2s_r2_criterion",
        "r2s_sortability",
        "r2s_r2_sort_n_regress",
        "r2s_estimate_free",
        "r2s_sid",
        "r2s_shd",
        "typedef struct R2sDag R2sDag",
        "R2S_STATUS_OK = 0",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "r2sort.h"

int main(void) {
    size_t edges[] = {0, 1, 1, 2};
    R2sDag *g = NULL;
    if (r2s_dag_new(3, edges, 2, &g) != R2S_STATUS_OK) return 1;
    double tau[] = {0.1, 0.5, 0.9};
    double v = -1.0;
    if (r2s_sortability(tau, 3, g, R2S_WEIGHTING_PATH_COUNT, 0.0, &v) != R2S_STATUS_OK) return 2;
    size_t cyclic[] = {0, 1, 1, 0};
    R2sDag *bad = NULL;
    if (r2s_dag_new(2, cyclic, 2, &bad) != R2S_STATUS_INVALID_ARGUMENT || bad != NULL) return 3;
    if (r2s_last_error_message() == NULL) return 4;
    r2s_dag_free(g);
    printf("%.3f\n", v);
    return 0;
}
"#;

/// `target/<profile>`, where cargo leaves the static library.
fn artifact_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(|deps| deps.parent()).unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler found; skipping");
        return;
    }
    let lib = artifact_dir().join("libr2sort_ffi.a");
    if !lib.exists() {
        eprintln!("{} not built; skipping", lib.display());
        return;
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("probe.c");
    let bin = dir.path().join("probe");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "compile or link failed");
    let run = Command::new(&bin).output().unwrap();
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(String::from_utf8_lossy(&run.stdout).trim(), "1.000");
}
