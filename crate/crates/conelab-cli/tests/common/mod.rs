//! Helpers for driving the `conelab` binary in tests.

use std::path::{Path, PathBuf};
use std::process::Command;

pub const M2: &str = r#"{"elements": ["bot","a","b","top"],
    "covers": [["bot","a"],["bot","b"],["a","top"],["b","top"]]}"#;

pub const C3: &str = r#"{"elements": ["0","1","2"], "covers": [["0","1"],["1","2"]]}"#;

pub const ANTICHAIN2: &str = r#"{"elements": ["x","y"], "covers": []}"#;

pub const CYCLIC: &str = r#"{"elements": ["a","b"], "covers": [["a","b"],["b","a"]]}"#;

pub struct Sandbox {
    dir: tempfile::TempDir,
}

impl Sandbox {
    pub fn new() -> Self {
        Sandbox {
            dir: tempfile::tempdir().expect("temp dir"),
        }
    }

    pub fn write(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, contents).expect("write fixture");
        path
    }

    pub fn path(&self) -> &Path {
        self.dir.path()
    }
}

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the binary with the given arguments inside the sandbox directory.
pub fn conelab(sandbox: &Sandbox, args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_conelab"))
        .args(args)
        .current_dir(sandbox.path())
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}
