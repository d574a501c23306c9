//! The map-definition language.
//!
//! ```text
//! map "henon" {
//!   kind: scalar
//!   param alpha: const 1
//!   param beta: const 1
//!   forward: alpha + beta*x^2 - y
//! }
//! ```
//!
//! Scalar rules use `x` (= x_n) and `y` (= x_{n-1}); pair rules use `X`, `Y`
//! and are written `(e1, e2)`. Parameters are `const e`, `list [..]` with an
//! optional `from=N` start index, `linrec coeffs=[..] init=[..]` or
//! `mulrec exponents=[..] init=[..]`. `#` starts a comment.

use std::fmt;

mod lexer;
mod parser;
mod print;

pub use lexer::{tokenize, Token, TokenKind, KEYWORDS};
pub use parser::{parse_expr, parse_mapfile, MAX_DEPTH, MAX_EXPONENT};
pub use print::{print_expr, print_map, print_mapfile};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub col: usize,
    /// The offending source line.
    pub snippet: String,
}

impl ParseError {
    pub fn at(input: &str, line: usize, col: usize, message: &str) -> Self {
        let snippet = input.lines().nth(line.saturating_sub(1)).unwrap_or("").to_string();
        ParseError { message: message.to_string(), line, col, snippet }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:{}: {}", self.line, self.col, self.message)?;
        writeln!(f, "  {}", self.snippet)?;
        write!(f, "  {}^", " ".repeat(self.col.saturating_sub(1)))
    }
}

impl std::error::Error for ParseError {}
