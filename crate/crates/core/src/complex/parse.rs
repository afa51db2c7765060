use std::collections::HashMap;

use super::Complex;
use crate::error::{Error, Result};

/// Parses a facet list: one facet per line, whitespace-separated vertex labels,
/// `#` starts a comment. Vertex ids follow first appearance.
pub fn parse_complex(text: &str) -> Result<Complex> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut facets = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let mut facet = Vec::new();
        for tok in line.split_whitespace() {
            if tok.chars().any(|c| c.is_control()) {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("unreadable token {tok:?}"),
                });
            }
            let id = *ids.entry(tok).or_insert_with(|| {
                labels.push(tok.to_string());
                labels.len() - 1
            });
            if facet.contains(&id) {
                return Err(Error::Parse {
                    line: lineno + 1,
                    msg: format!("vertex {tok:?} repeated in facet"),
                });
            }
            facet.push(id);
        }
        facets.push(facet);
    }
    if facets.is_empty() {
        return Err(Error::Parse { line: 0, msg: "no facets".into() });
    }
    Complex::from_facets(&facets, labels)
}

/// Like [`parse_complex`], for raw bytes that must be UTF-8.
pub fn parse_complex_bytes(bytes: &[u8]) -> Result<Complex> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let line = bytes[..e.valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        Error::Parse { line, msg: "input is not valid UTF-8".into() }
    })?;
    parse_complex(text)
}
