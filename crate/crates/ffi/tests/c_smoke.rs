//! Compiles a small C program against the generated header and the static
//! library. Skipped when no C compiler is on the path.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "kerr_fvr.h"

int main(void) {
    KfState s = { KF_STATE_KIND_COHERENT, 0, 5.0, 0.0 };
    double a = 0.0;
    if (kf_autocorr_exact(&s, 64, 0.7853981633974483, &a) != KF_STATUS_OK) return 1;
    KfGrid g = { -8.0, 8.0, -8.0, 8.0, 33, 33 };
    KfField *f = NULL;
    if (kf_quantum_field(&s, 64, 0.0, &g, &f) != KF_STATUS_OK) return 2;
    double integral = 0.0;
    kf_field_integral(f, &integral);
    kf_field_free(f);
    if (kf_wigner0(NULL, 0.0, 0.0, &a) != KF_STATUS_NULL_POINTER) return 3;
    printf("%.12f %.6f %s\n", a, integral, kf_last_error());
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(|d| d.parent()).unwrap();
    let lib = profile_dir.join("libkerr_fvr_ffi.a");
    assert!(lib.exists(), "static library not found at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let bin = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&bin).output().unwrap();
    assert!(out.status.success(), "C program exited with {:?}", out.status);
    let text = String::from_utf8(out.stdout).unwrap();
    let fields: Vec<&str> = text.split_whitespace().collect();
    assert!((fields[0].parse::<f64>().unwrap() - 1.0).abs() < 1e-10, "{text}");
    assert!((fields[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-3, "{text}");
    assert!(text.contains("state"), "{text}");
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if Command::new(cc).arg("--version").output().map(|o| o.status.success()).unwrap_or(false) {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
