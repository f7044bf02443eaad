// SPDX-License-Identifier: MIT OR Apache-2.0

//! Config documents: JSON, or TOML when the file ends in `.toml`.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::error::{Error, Result};

/// 1-based line and column of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |p| offset - p - 1) + 1;
    (line, col)
}

pub fn parse_config<T: DeserializeOwned>(text: &str, origin: &str, toml_syntax: bool) -> Result<T> {
    if toml_syntax {
        toml::from_str(text).map_err(|e| {
            let (line, col) = e.span().map_or((1, 1), |s| line_col(text, s.start));
            Error::config(format!("{origin}:{line}:{col}: {}", e.message().trim_end()))
        })
    } else {
        serde_json::from_str(text).map_err(|e| {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let msg = full.strip_suffix(&suffix).unwrap_or(&full);
            Error::config(format!("{origin}:{}:{}: {msg}", e.line(), e.column()))
        })
    }
}

pub fn load_config<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::config(format!("cannot read config {}: {e}", path.display())))?;
    let toml_syntax = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    parse_config(&text, &path.display().to_string(), toml_syntax)
}
