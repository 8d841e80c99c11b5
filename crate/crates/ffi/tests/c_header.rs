//! Compiles and runs a small C program against the generated header and the
//! static library. Skipped when no C compiler is on the PATH.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "ppxfer.h"

int main(void) {
    PpxChain *c = NULL;
    if (ppx_chain_new(2, 41, 0.01, 0.0, PPX_STATISTICS_FERMION, &c) != PPX_STATUS_OK) return 10;
    PpxPeak peak;
    if (ppx_find_peak(c, 0.0, &peak) != PPX_STATUS_OK) return 11;
    double occ = 0.0;
    if (ppx_occupation(c, 0.0, 99, &occ) != PPX_STATUS_OUT_OF_RANGE) return 12;
    printf("%.4f %s\n", peak.p_fermion, ppx_last_error_message());
    ppx_chain_free(c);
    return peak.p_fermion > 0.99 ? 0 : 13;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // the static library is emitted next to the test executable
    let lib = std::env::current_exe().unwrap().with_file_name("libppxfer_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compilation failed");
    let out = Command::new(&exe).output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "exit {:?}: {text}", out.status.code());
    assert!(text.contains("out of range"), "{text}");
}
