//! Error classification, input reading and report emission.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;
use torus_core::Error;

/// A failed run. `Input` exits with 1, `Math` with 2.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Math(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Math(_) => 2,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Math(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } | Error::DimensionMismatch(_) | Error::UnknownFamily(_) => {
                Failure::Input(e.to_string())
            }
            _ => Failure::Math(e.to_string()),
        }
    }
}

pub type Outcome<T> = std::result::Result<T, Failure>;

/// Reads a file, or stdin for `-`.
pub fn read_source(path: &str) -> Outcome<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    }
    Ok(s)
}

/// Expression arguments: literal text, or stdin for `-`.
pub fn expression(arg: &str) -> Outcome<String> {
    if arg == "-" {
        read_source("-")
    } else {
        Ok(arg.to_string())
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<T> {
    let name = path.display().to_string();
    let text = read_source(&name)?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = strip_position(&e.to_string()).to_string();
        Failure::Input(match e.line() {
            0 => format!("{name}: {msg}"),
            l => format!("{name}:{l}:{}: {msg}", e.column()),
        })
    })
}

fn strip_position(msg: &str) -> &str {
    msg.find(" at line ").map_or(msg, |i| &msg[..i])
}

/// A rendered report in one of the three output formats.
pub enum Report {
    Json(Value),
    Text(String),
    Csv(String),
}

impl Report {
    pub fn bytes(&self) -> String {
        let mut s = match self {
            Report::Json(v) => serde_json::to_string_pretty(v).expect("values serialize"),
            Report::Text(t) | Report::Csv(t) => t.clone(),
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

pub fn emit(report: &Report, out: Option<&Path>) -> Outcome<()> {
    let bytes = report.bytes();
    match out {
        Some(p) => {
            std::fs::write(p, bytes).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))
        }
        None => {
            let mut h = std::io::stdout().lock();
            h.write_all(bytes.as_bytes())
                .and_then(|_| h.flush())
                .map_err(|e| Failure::Input(format!("stdout: {e}")))
        }
    }
}

/// Simple table used by the sector subcommands.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| csv_cell(c)).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn text(&self) -> String {
        let widths: Vec<usize> = (0..self.header.len())
            .map(|i| {
                self.rows
                    .iter()
                    .map(|r| r[i].chars().count())
                    .chain([self.header[i].len()])
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut s = String::new();
        let line = |cells: Vec<&str>, s: &mut String| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect();
            let _ = writeln!(s, "{}", padded.join("  ").trim_end());
        };
        line(self.header.clone(), &mut s);
        for r in &self.rows {
            line(r.iter().map(String::as_str).collect(), &mut s);
        }
        s
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// `(a, b, c)` rendering of a vector; `;`-joined in CSV-friendly form.
pub fn vector<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join("; "))
}
