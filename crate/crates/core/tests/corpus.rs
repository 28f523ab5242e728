use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use liesolv::frontend::parse_presentation;

fn data(sub: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(sub)
}

fn files(sub: &str, ext: &str) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(data(sub))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    v.sort();
    v
}

#[test]
fn golden_classification_output() {
    let lies = files("golden", "lie");
    assert!(lies.len() >= 15);
    for lie in lies {
        let expected = fs::read_to_string(lie.with_extension("json")).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_liesolv"))
            .args(["classify", "--json"])
            .arg(&lie)
            .output()
            .unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{}", lie.display());
    }
}

#[test]
fn round_trip_corpus() {
    let lies = files("roundtrip", "lie");
    assert_eq!(lies.len(), 30);
    for lie in lies {
        let text = fs::read_to_string(&lie).unwrap();
        let p = parse_presentation(&text).unwrap();
        let rendered = p.render();
        assert_eq!(rendered, text, "{} is not in rendered form", lie.display());
        assert_eq!(parse_presentation(&rendered).unwrap(), p);
    }
}

#[test]
fn malformed_corpus_reports_positions() {
    let lies = files("malformed", "lie");
    assert!(lies.len() >= 20);
    for lie in lies {
        let expect = fs::read_to_string(lie.with_extension("expect")).unwrap();
        let out = Command::new(env!("CARGO_BIN_EXE_liesolv"))
            .arg("verify")
            .arg(&lie)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(2), "{}", lie.display());
        let stderr = String::from_utf8(out.stderr).unwrap();
        let needle = match expect.trim().strip_prefix("jacobi ") {
            Some(triple) => triple.to_string(),
            None => format!("{}:{}:", lie.display(), expect.trim()),
        };
        assert!(
            stderr.contains(&needle),
            "{}: `{stderr}` lacks `{needle}`",
            lie.display()
        );
    }
}
