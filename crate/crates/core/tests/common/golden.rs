//! Golden transcripts of the command line tool. Each case in
//! `tests/golden/cases.txt` runs the built binary from the `specs/` directory
//! and is compared byte for byte with `tests/golden/<name>.txt`.

use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: String,
    pub env: Vec<(String, String)>,
    pub args: Vec<String>,
}

fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn golden_dir() -> PathBuf {
    manifest_dir().join("tests/golden")
}

pub fn specs_dir() -> PathBuf {
    manifest_dir().join("../../specs")
}

/// Lines `name | [VAR=value |]... spec | arg | ...`; `#` starts a comment.
pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.txt")).expect("cases.txt");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let mut fields = l.split('|').map(str::trim);
            let name = fields.next().unwrap().to_string();
            let mut env = Vec::new();
            let mut args = Vec::new();
            for f in fields {
                match f.split_once('=') {
                    Some((k, v)) if args.is_empty() && k.starts_with("SELFSIM_") => env.push((k.into(), v.into())),
                    _ => args.push(f.to_string()),
                }
            }
            Case { name, env, args }
        })
        .collect()
}

/// Runs the binary and renders the command, exit code, stdout and stderr.
pub fn transcript(case: &Case) -> String {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_selfsim"));
    cmd.current_dir(specs_dir()).env_remove("SELFSIM_DEPTH").env_remove("SELFSIM_WINDOW").args(&case.args);
    for (k, v) in &case.env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("run selfsim");
    let mut s = String::from("$");
    for (k, v) in &case.env {
        s.push_str(&format!(" {k}={v}"));
    }
    s.push_str(" selfsim");
    for a in &case.args {
        if a.contains([' ', '(', ')', '*', '[', ';']) {
            s.push_str(&format!(" '{a}'"));
        } else {
            s.push_str(&format!(" {a}"));
        }
    }
    s.push_str(&format!("\nexit: {}\n--- stdout\n", out.status.code().unwrap_or(-1)));
    s.push_str(&String::from_utf8_lossy(&out.stdout));
    s.push_str("--- stderr\n");
    s.push_str(&String::from_utf8_lossy(&out.stderr));
    s
}

pub fn expected(case: &Case) -> Option<String> {
    std::fs::read_to_string(golden_dir().join(format!("{}.txt", case.name))).ok()
}
