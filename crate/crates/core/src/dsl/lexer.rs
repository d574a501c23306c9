use super::ParseError;

pub const KEYWORDS: &[&str] =
    &["map", "kind", "forward", "backward", "param", "scalar", "pair", "const", "linrec", "mulrec", "list"];

const SYMBOLS: &str = "+-*/^()=,[]{}:;";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Ident,
    Integer,
    Str,
    Symbol(char),
    Keyword,
    Eof,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Source text; for strings, the unescaped contents.
    pub lexeme: String,
    pub line: usize,
    pub col: usize,
    /// Byte offset into the input.
    pub offset: usize,
}

impl Token {
    pub fn is_sym(&self, c: char) -> bool {
        self.kind == TokenKind::Symbol(c)
    }

    pub fn is_kw(&self, k: &str) -> bool {
        self.kind == TokenKind::Keyword && self.lexeme == k
    }

    pub fn describe(&self) -> String {
        match self.kind {
            TokenKind::Eof => "end of input".into(),
            TokenKind::Str => format!("string \"{}\"", self.lexeme),
            TokenKind::Integer => format!("integer {}", self.lexeme),
            _ => format!("`{}`", self.lexeme),
        }
    }
}

/// Split `input` into tokens, ending with an `Eof` token. Whitespace and
/// `#` comments are skipped.
pub fn tokenize(input: &str) -> Result<Vec<Token>, ParseError> {
    let mut cur = Cursor { chars: input.char_indices().peekable(), line: 1, col: 1 };
    let mut out = Vec::new();
    while let Some((off, c)) = cur.peek() {
        let (tl, tc) = (cur.line, cur.col);
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '#' {
            while cur.peek().is_some_and(|(_, c)| c != '\n') {
                cur.bump();
            }
            continue;
        }
        let tok = |kind, lexeme: String| Token { kind, lexeme, line: tl, col: tc, offset: off };
        if c.is_ascii_digit() {
            let s = cur.take_while(|d| d.is_ascii_digit());
            out.push(tok(TokenKind::Integer, s));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let s = cur.take_while(|d| d.is_ascii_alphanumeric() || d == '_');
            let kind = if KEYWORDS.contains(&s.as_str()) { TokenKind::Keyword } else { TokenKind::Ident };
            out.push(tok(kind, s));
        } else if c == '"' {
            cur.bump();
            let mut s = String::new();
            loop {
                match cur.peek().map(|(_, d)| d) {
                    None | Some('\n') => return Err(ParseError::at(input, tl, tc, "unterminated string")),
                    Some('"') => {
                        cur.bump();
                        break;
                    }
                    Some('\\') => {
                        let (el, ec) = (cur.line, cur.col);
                        cur.bump();
                        match cur.peek().map(|(_, d)| d) {
                            Some(e @ ('"' | '\\')) => {
                                cur.bump();
                                s.push(e);
                            }
                            _ => return Err(ParseError::at(input, el, ec, "invalid escape in string")),
                        }
                    }
                    Some(_) => s.push(cur.bump()),
                }
            }
            out.push(tok(TokenKind::Str, s));
        } else if SYMBOLS.contains(c) {
            cur.bump();
            out.push(tok(TokenKind::Symbol(c), c.to_string()));
        } else {
            return Err(ParseError::at(input, tl, tc, &format!("illegal character {c:?}")));
        }
    }
    out.push(Token { kind: TokenKind::Eof, lexeme: String::new(), line: cur.line, col: cur.col, offset: input.len() });
    Ok(out)
}

struct Cursor<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl Cursor<'_> {
    fn peek(&mut self) -> Option<(usize, char)> {
        self.chars.peek().copied()
    }

    fn bump(&mut self) -> char {
        let (_, c) = self.chars.next().expect("peeked");
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        c
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> String {
        let mut s = String::new();
        while self.peek().is_some_and(|(_, c)| f(c)) {
            s.push(self.bump());
        }
        s
    }
}
