#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").canonicalize().unwrap()
}

/// The bundled fixture config with every path made absolute and output
/// redirected to `out`.
pub fn fixture_config_text(out: &Path) -> String {
    let fx = fixtures();
    let text = std::fs::read_to_string(fx.join("pipeline.toml")).unwrap();
    let mut lines = Vec::new();
    for line in text.lines() {
        if line.starts_with("out_dir") {
            lines.push(format!("out_dir = {:?}", out.display().to_string()));
            continue;
        }
        let mut l = line.to_string();
        for key in ["osm", "file", "dir", "path"] {
            let prefix = format!("{key} = \"");
            if let Some(rest) = line.strip_prefix(&prefix) {
                l = format!("{key} = {:?}", fx.join(rest.trim_end_matches('"')).display().to_string());
            }
        }
        lines.push(l);
    }
    lines.join("\n") + "\n"
}

pub fn write_fixture_config(dir: &Path, out: &Path) -> PathBuf {
    let p = dir.join("pipeline.toml");
    std::fs::write(&p, fixture_config_text(out)).unwrap();
    p
}

/// Every file under `dir`, as (relative path, bytes), sorted.
pub fn tree(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(dir).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}
