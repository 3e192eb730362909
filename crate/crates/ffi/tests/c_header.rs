//! Compiles a small C program against `include/tre.h` and the static
//! library, then runs it. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include "tre.h"

int main(void) {
    double d1[3] = {0.37, 0.0, 0.63}, d2[3] = {0.0, 0.37, 0.63};
    TreState *rho = NULL, *sigma = NULL;
    if (tre_state_from_diagonal(3, d1, &rho) != TRE_STATUS_OK) return 1;
    if (tre_state_from_diagonal(3, d2, &sigma) != TRE_STATUS_OK) return 2;
    double s = 0.0;
    if (tre_telescopic_relative_entropy(rho, sigma, 0.3, &s) != TRE_STATUS_OK) return 3;
    if (fabs(s - 0.37) > 1e-9) return 4;
    if (tre_telescopic_relative_entropy(rho, sigma, 2.0, &s) != TRE_STATUS_INVALID_ARGUMENT) return 5;
    const char *msg = tre_last_error_message();
    if (msg == NULL) return 6;
    char *json = NULL;
    if (tre_state_to_json(rho, &json) != TRE_STATUS_OK) return 7;
    printf("%s\n%s\n", msg, json);
    tre_string_free(json);
    tre_state_free(rho);
    tre_state_free(sigma);
    return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from <target>/<profile>/deps
    let exe = std::env::current_exe().unwrap();
    exe.parent().unwrap().parent().unwrap().to_path_buf()
}

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        eprintln!("no C compiler; skipping");
        return;
    }
    let lib = target_dir().join("libtre_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let dir = tempfile::TempDir::new().unwrap();
    let src = dir.path().join("smoke.c");
    let exe = dir.path().join("smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let status = Command::new("cc")
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(&include)
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "cc failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("parameter a = 2"), "{text}");
    assert!(text.contains("\"matrix\""), "{text}");
}
