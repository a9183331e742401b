//! JSON code files.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::code::TableCode;
use crate::state::MemoryState;

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CodeDocument {
    q: u8,
    n: usize,
    t: usize,
    generations: Vec<Vec<Vec<StateField>>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum StateField {
    Digits(String),
    Cells(Vec<u32>),
}

pub fn parse_code_json(text: &str) -> Result<TableCode, FileError> {
    let doc: CodeDocument = serde_json::from_str(text).map_err(|e| FileError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.q < 2 {
        return Err(FileError::Schema(format!("q = {} is below 2", doc.q)));
    }
    if doc.t != doc.generations.len() {
        return Err(FileError::Schema(format!(
            "t = {} but {} generations are listed",
            doc.t,
            doc.generations.len()
        )));
    }
    let mut gens = Vec::with_capacity(doc.t);
    for (gi, generation) in doc.generations.iter().enumerate() {
        let mut classes = Vec::with_capacity(generation.len());
        for (ci, class) in generation.iter().enumerate() {
            let mut states = Vec::with_capacity(class.len());
            for field in class {
                let at = || format!("generation {}, class {}", gi + 1, ci + 1);
                let state = match field {
                    StateField::Digits(s) => {
                        if doc.q > 10 {
                            return Err(FileError::Schema(format!("{}: digit string {s:?} needs q <= 10", at())));
                        }
                        if s.contains(',') {
                            return Err(FileError::Schema(format!("{}: {s:?} is not a digit string", at())));
                        }
                        MemoryState::parse(doc.q, s)
                    }
                    StateField::Cells(v) => {
                        let cells: Result<Vec<u8>, _> = v.iter().map(|&c| u8::try_from(c)).collect();
                        match cells {
                            Ok(c) => MemoryState::new(doc.q, c),
                            Err(_) => return Err(FileError::Schema(format!("{}: level out of range", at()))),
                        }
                    }
                }
                .map_err(|e| FileError::Schema(format!("{}: {e}", at())))?;
                states.push(state);
            }
            classes.push(states);
        }
        gens.push(classes);
    }
    TableCode::new(doc.q, doc.n, gens).map_err(|e| FileError::Schema(e.to_string()))
}

pub fn code_to_json(code: &TableCode) -> String {
    let field = |s: &MemoryState| {
        if code.q() <= 10 {
            StateField::Digits(s.to_text())
        } else {
            StateField::Cells(s.cells().iter().map(|&c| c as u32).collect())
        }
    };
    let doc = CodeDocument {
        q: code.q(),
        n: code.n(),
        t: code.t(),
        generations: code
            .generations()
            .iter()
            .map(|g| g.iter().map(|c| c.iter().map(field).collect()).collect())
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data");
    text.push('\n');
    text
}

pub fn read_code_file(path: impl AsRef<Path>) -> Result<TableCode, FileError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_code_json(&text)
}

pub fn write_code_file(code: &TableCode, path: impl AsRef<Path>) -> Result<(), FileError> {
    let path = path.as_ref();
    fs::write(path, code_to_json(code)).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}
