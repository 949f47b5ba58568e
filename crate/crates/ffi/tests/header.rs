use std::path::Path;
use std::process::Command;

const PROGRAM: &str = r#"
#include "pipfract.h"
int main(void) {
    PfEngine *e = 0;
    uint64_t q[5];
    int64_t d[3];
    char *meta = 0;
    if (pf_engine_new(0, 1, &e) != PF_STATUS_OK) return 1;
    pf_pip_range(e, 2, 1, 1, 5, q, 5);
    pf_daleth_range(e, 1, 2, 0, 1, 1, 3, PF_FILTER_SIGN, d, 3);
    pf_render_ppm(e, 1, 2, 0, 1, 2, 1, 5, PF_STYLE_JET256, 1, 40, 8, "x.ppm", &meta);
    pf_string_free(meta);
    (void)pf_last_error();
    pf_engine_free(e);
    return 0;
}
"#;

#[test]
fn header_is_valid_c() {
    let include = Path::new(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include.join("pipfract.h").exists(), "header not generated");
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = match Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(&include)
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(_) => {
            eprintln!("no C compiler available; skipping");
            return;
        }
    };
    assert!(status.success());
}
