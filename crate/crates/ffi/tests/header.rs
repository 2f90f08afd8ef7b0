use std::path::Path;
use std::process::Command;

const EXPORTS: &[&str] = &[
    "vrd_last_error",
    "vrd_status_name",
    "vrd_state_noisy",
    "vrd_state_target",
    "vrd_state_from_matrix",
    "vrd_state_dim",
    "vrd_state_free",
    "vrd_overhead",
    "vrd_virtual_rate",
    "vrd_conventional_rate",
    "vrd_teleport_new",
    "vrd_vop_coefficients",
    "vrd_vop_free",
    "vrd_estimate_projector",
    "vrd_required_samples",
];

fn header() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/vrd.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("typedef struct VrdState VrdState;"));
    assert!(text.contains("VRD_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"vrd.h\"\nint main(void) { VrdState *s = 0; VrdStatus st = vrd_state_noisy(VRD_THEORY_MAGIC, 0.5, &s); vrd_state_free(s); return (int)st; }\n",
    )
    .unwrap();
    let include = header().parent().unwrap().to_path_buf();
    for (compiler, extra) in [("cc", &["-std=c99"][..]), ("c++", &["-x", "c++"][..])] {
        let Ok(out) = Command::new(compiler)
            .args(extra)
            .args(["-fsyntax-only", "-Wall", "-Wextra", "-Werror", "-I"])
            .arg(&include)
            .arg(&src)
            .output()
        else {
            eprintln!("{compiler} not available; skipping");
            continue;
        };
        assert!(out.status.success(), "{compiler}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
