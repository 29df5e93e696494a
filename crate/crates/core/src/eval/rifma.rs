//! Stress-annotated fragments in JSON Lines: one object per line with `text` (array of
//! lines, U+0301 after each stressed vowel), `scheme` and an optional `meta` object.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::rhyme::RhymeScheme;
use crate::text::{is_vowel, STRESS_MARK};

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedFragment {
    pub lines: Vec<String>,
    pub scheme: RhymeScheme,
    pub meta: Map<String, Value>,
}

#[derive(Deserialize, Serialize)]
struct Record {
    text: Vec<String>,
    scheme: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    meta: Map<String, Value>,
}

impl AnnotatedFragment {
    fn from_record(r: Record) -> std::result::Result<Self, String> {
        let scheme: RhymeScheme = r.scheme.parse().map_err(|e: Error| e.to_string())?;
        if scheme.len() != r.text.len() {
            return Err(format!(
                "scheme {:?} has {} labels for {} lines",
                r.scheme,
                scheme.len(),
                r.text.len()
            ));
        }
        for line in &r.text {
            let mut prev = None;
            for c in line.chars() {
                if c == STRESS_MARK && !prev.is_some_and(is_vowel) {
                    return Err(format!("stress mark not after a vowel in {line:?}"));
                }
                prev = Some(c);
            }
        }
        Ok(AnnotatedFragment {
            lines: r.text,
            scheme,
            meta: r.meta,
        })
    }
}

/// Parses fragments from JSONL text. Blank lines are ignored. In strict mode the first
/// bad record is returned as the error; otherwise bad records are skipped and reported.
pub fn parse_rifma_str(
    text: &str,
    file: &str,
    strict: bool,
) -> Result<(Vec<AnnotatedFragment>, Vec<Error>)> {
    let mut fragments = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let parsed = serde_json::from_str::<Record>(line)
            .map_err(|e| Error::Record {
                file: file.to_string(),
                line: i + 1,
                message: e.to_string(),
            })
            .and_then(|r| {
                AnnotatedFragment::from_record(r)
                    .map_err(|m| Error::Validation(format!("{file}:{}: {m}", i + 1)))
            });
        match parsed {
            Ok(f) => fragments.push(f),
            Err(e) if strict => return Err(e),
            Err(e) => errors.push(e),
        }
    }
    Ok((fragments, errors))
}

/// Reads a fragment file, failing on the first bad record.
pub fn parse_rifma(path: &Path) -> Result<Vec<AnnotatedFragment>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_rifma_str(&text, &path.display().to_string(), true)?.0)
}

/// Writes fragments in the format [`parse_rifma_str`] reads.
pub fn serialize(fragments: &[AnnotatedFragment]) -> String {
    let mut out = String::new();
    for f in fragments {
        let r = Record {
            text: f.lines.clone(),
            scheme: f.scheme.to_string(),
            meta: f.meta.clone(),
        };
        out.push_str(&serde_json::to_string(&r).expect("plain data serializes"));
        out.push('\n');
    }
    out
}
