//! Python source loading and parsing.

pub mod ast;
mod lower;
pub mod source;

use std::fmt;
use std::io;
use std::path::Path;

use rustpython_parser::lexer::lex;
use rustpython_parser::{Mode, Tok};

pub use ast::{Module, NodeId, Span};
pub use lower::MAX_DEPTH;
pub use source::{CommentTable, LineIndex};

/// Stack size for the parse thread. The parser's own tree is dropped
/// recursively, so pathological nesting needs headroom.
const PARSE_STACK: usize = 256 * 1024 * 1024;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseFailure {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

impl fmt::Display for ParseFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// One source file. Immutable after construction.
#[derive(Debug, Clone)]
pub struct SourceUnit {
    pub path: String,
    pub text: String,
    /// Absent when the file failed to parse.
    pub ast: Option<Module>,
    pub lines: LineIndex,
    pub comments: CommentTable,
    pub failure: Option<ParseFailure>,
}

impl SourceUnit {
    /// 1-based (line, character column) of the start of `span`.
    pub fn span_to_location(&self, span: Span) -> (u32, u32) {
        self.lines.location(&self.text, span.start)
    }

    pub fn slice(&self, span: Span) -> &str {
        span.slice(&self.text)
    }

    pub fn is_parsed(&self) -> bool {
        self.ast.is_some()
    }
}

/// Reads and parses a file. Only I/O problems are errors; undecodable or
/// unparsable content yields a unit carrying a [`ParseFailure`].
pub fn load(path: &Path, display: impl Into<String>) -> io::Result<SourceUnit> {
    let bytes = std::fs::read(path)?;
    Ok(parse_bytes(display, bytes))
}

/// Like [`parse`], for raw bytes that may not be UTF-8.
pub fn parse_bytes(path: impl Into<String>, bytes: Vec<u8>) -> SourceUnit {
    let path = path.into();
    match String::from_utf8(bytes) {
        Ok(text) => parse(path, text),
        Err(e) => {
            let valid = e.utf8_error().valid_up_to();
            let bytes = e.into_bytes();
            let line = bytes[..valid].iter().filter(|b| **b == b'\n').count() as u32 + 1;
            failed(
                path,
                String::new(),
                ParseFailure {
                    line,
                    column: 1,
                    message: "file is not valid UTF-8".into(),
                },
            )
        }
    }
}

fn failed(path: String, text: String, failure: ParseFailure) -> SourceUnit {
    SourceUnit {
        lines: LineIndex::new(&text),
        path,
        text,
        ast: None,
        comments: CommentTable::default(),
        failure: Some(failure),
    }
}

enum Outcome {
    Parsed(Module, CommentTable),
    Failed { offset: u32, message: String },
}

/// Parses `text`. Never panics; internal parser faults become failures.
pub fn parse(path: impl Into<String>, text: impl Into<String>) -> SourceUnit {
    let path = path.into();
    let text = text.into();
    let lines = LineIndex::new(&text);
    let owned = text.clone();
    let outcome = std::thread::Builder::new()
        .name("mlint-parse".into())
        .stack_size(PARSE_STACK)
        .spawn(move || parse_in_thread(&owned))
        .ok()
        .and_then(|h| h.join().ok());
    match outcome {
        Some(Outcome::Parsed(module, comments)) => SourceUnit {
            path,
            text,
            ast: Some(module),
            lines,
            comments,
            failure: None,
        },
        Some(Outcome::Failed { offset, message }) => {
            let (line, column) = lines.location(&text, clamp(&text, offset));
            failed(
                path,
                text,
                ParseFailure {
                    line,
                    column,
                    message,
                },
            )
        }
        None => failed(
            path,
            text,
            ParseFailure {
                line: 1,
                column: 1,
                message: "internal parser fault".into(),
            },
        ),
    }
}

fn clamp(text: &str, offset: u32) -> u32 {
    let mut o = (offset as usize).min(text.len());
    while !text.is_char_boundary(o) {
        o -= 1;
    }
    o as u32
}

fn parse_in_thread(text: &str) -> Outcome {
    let parsed = match rustpython_parser::parse(text, Mode::Module, "<mlint>") {
        Ok(m) => m,
        Err(e) => {
            return Outcome::Failed {
                offset: e.offset.into(),
                message: e.error.to_string(),
            }
        }
    };
    let body = match parsed {
        rustpython_parser::ast::Mod::Module(m) => m.body,
        _ => Vec::new(),
    };
    let module = match lower::lower_module(&body) {
        Ok(m) => m,
        Err(deep) => {
            return Outcome::Failed {
                offset: deep.offset,
                message: format!("nesting deeper than {MAX_DEPTH} levels"),
            }
        }
    };
    drop(body);
    Outcome::Parsed(module, collect_comments(text))
}

fn collect_comments(text: &str) -> CommentTable {
    let lines = LineIndex::new(text);
    let mut table = CommentTable::default();
    for item in lex(text, Mode::Module) {
        // The lexer keeps yielding after an error; stop at the first one.
        let Ok((tok, range)) = item else { break };
        if let Tok::Comment(c) = tok {
            table.insert(lines.line_of(range.start().into()), c);
        }
    }
    table
}
