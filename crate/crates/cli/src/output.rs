use std::io::{self, Read, Write};
use std::path::Path;

use serde::Serialize;
use spgallai::{parse_edge_list, Graph};

use crate::args::{Format, Input};
use crate::Failure;

/// Reads and parses the edge list named by `input`, or standard input.
pub fn read_graph(input: &Input) -> Result<Graph, Failure> {
    let (text, source) = match input.input.as_deref() {
        None => (read_stdin()?, "standard input".to_string()),
        Some(p) if p == Path::new("-") => (read_stdin()?, "standard input".to_string()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("cannot read {}: {e}", p.display())))?;
            (text, p.display().to_string())
        }
    };
    parse_edge_list(&text).map_err(|e| Failure::Input(format!("{source}: {e}")))
}

fn read_stdin() -> Result<String, Failure> {
    let mut text = String::new();
    io::stdin()
        .read_to_string(&mut text)
        .map_err(|e| Failure::Input(format!("cannot read standard input: {e}")))?;
    Ok(text)
}

/// Writes to stdout; a closed pipe is not an error.
pub fn write_out(s: &str) {
    let mut out = io::stdout().lock();
    let _ = out.write_all(s.as_bytes()).and_then(|_| out.flush());
}

/// Prints `value` as pretty JSON, or the text rendering.
pub fn emit<T: Serialize>(format: Format, value: &T, text: impl FnOnce() -> String) {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("outputs serialize");
            s.push('\n');
            write_out(&s);
        }
        Format::Text => write_out(&text()),
    }
}

pub fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn braces<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    format!("{{{}}}", items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}
