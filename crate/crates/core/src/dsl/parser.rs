use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::exact::Rational;
use crate::map::{BinOp, Expr, Kind, MapError, MapInstance, ParamSeq, Rule, Var};

use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

/// Nesting limit for parentheses and unary minus.
pub const MAX_DEPTH: usize = 256;
/// Largest accepted `|e|` in `base^e`.
pub const MAX_EXPONENT: i64 = 1024;
/// Largest folded literal power, in bits.
const MAX_LITERAL_BITS: u64 = 1 << 16;

struct Parser<'a> {
    input: &'a str,
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    /// Token index of every state variable and parameter reference in the
    /// rule being parsed.
    vars: Vec<usize>,
    params: Vec<usize>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> PResult<Self> {
        Ok(Parser { input, toks: tokenize(input)?, pos: 0, depth: 0, vars: Vec::new(), params: Vec::new() })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn err_at(&self, idx: usize, msg: &str) -> ParseError {
        let t = &self.toks[idx];
        ParseError::at(self.input, t.line, t.col, msg)
    }

    fn err_here(&self, expected: &str) -> ParseError {
        self.err_at(self.pos, &format!("expected {expected}, found {}", self.peek().describe()))
    }

    fn expect_sym(&mut self, c: char) -> PResult<Token> {
        if self.peek().is_sym(c) {
            Ok(self.next())
        } else {
            Err(self.err_here(&format!("`{c}`")))
        }
    }

    fn expect_kw(&mut self, k: &str) -> PResult<Token> {
        if self.peek().is_kw(k) {
            Ok(self.next())
        } else {
            Err(self.err_here(&format!("`{k}`")))
        }
    }

    fn expect_ident(&mut self, name: &str) -> PResult<Token> {
        if self.peek().kind == TokenKind::Ident && self.peek().lexeme == name {
            Ok(self.next())
        } else {
            Err(self.err_here(&format!("`{name}`")))
        }
    }

    fn enter(&mut self) -> PResult<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err_at(self.pos, "expression nested too deeply"));
        }
        Ok(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    // expr := term (('+' | '-') term)*
    fn additive(&mut self, first: Option<Expr>) -> PResult<Expr> {
        let mut lhs = self.term(first)?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Symbol('+') => BinOp::Add,
                TokenKind::Symbol('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term(None)?;
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    // term := unary (('*' | '/') unary)*
    fn term(&mut self, first: Option<Expr>) -> PResult<Expr> {
        let mut lhs = self.unary(first)?;
        loop {
            let op = match self.peek().kind {
                TokenKind::Symbol('*') => BinOp::Mul,
                TokenKind::Symbol('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            let op_idx = self.pos;
            self.next();
            let rhs = self.unary(None)?;
            if op == BinOp::Div && rhs.as_lit().is_some_and(|r| r.is_zero()) {
                return Err(self.err_at(op_idx, "division by zero"));
            }
            lhs = Expr::binary(op, lhs, rhs);
        }
    }

    // unary := '-' unary | power
    fn unary(&mut self, first: Option<Expr>) -> PResult<Expr> {
        if first.is_none() && self.peek().is_sym('-') {
            self.enter()?;
            self.next();
            let e = self.unary(None)?;
            self.leave();
            return Ok(Expr::negate(e));
        }
        self.power(first)
    }

    // power := primary ('^' exponent)?, exponent := '-' exponent | power
    fn power(&mut self, first: Option<Expr>) -> PResult<Expr> {
        let base = match first {
            Some(e) => e,
            None => self.primary()?,
        };
        if !self.peek().is_sym('^') {
            return Ok(base);
        }
        let caret = self.pos;
        self.next();
        let exp_idx = self.pos;
        let e = self.exponent()?;
        let Some(r) = e.as_lit() else {
            return Err(self.err_at(exp_idx, "exponent must be an integer constant"));
        };
        if !r.is_integer() {
            return Err(self.err_at(exp_idx, "non-integer exponent"));
        }
        let n = match r.to_integer().to_i64() {
            Some(n) if n.abs() <= MAX_EXPONENT => n,
            _ => return Err(self.err_at(exp_idx, &format!("exponent exceeds {MAX_EXPONENT} in magnitude"))),
        };
        if let Some(b) = base.as_lit() {
            if b.is_zero() && n < 0 {
                return Err(self.err_at(caret, "division by zero"));
            }
            let bits = b.numer().bits().max(b.denom().bits());
            if bits.saturating_mul(n.unsigned_abs()) > MAX_LITERAL_BITS {
                return Err(self.err_at(caret, "literal power too large"));
            }
        }
        Ok(Expr::power(base, n))
    }

    fn exponent(&mut self) -> PResult<Expr> {
        if self.peek().is_sym('-') {
            self.enter()?;
            self.next();
            let e = self.exponent()?;
            self.leave();
            return Ok(Expr::negate(e));
        }
        self.power(None)
    }

    // primary := INTEGER | IDENT | '(' expr ')'
    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match t.kind {
            TokenKind::Integer => {
                self.next();
                let n: BigInt = t.lexeme.parse().expect("digits");
                Ok(Expr::Lit(Rational::from_integer(n)))
            }
            TokenKind::Ident => {
                let idx = self.pos;
                self.next();
                Ok(match t.lexeme.as_str() {
                    "x" | "X" => {
                        self.vars.push(idx);
                        Expr::Var(Var::X)
                    }
                    "y" | "Y" => {
                        self.vars.push(idx);
                        Expr::Var(Var::Y)
                    }
                    name => {
                        self.params.push(idx);
                        Expr::Param(name.to_string())
                    }
                })
            }
            TokenKind::Symbol('(') => {
                self.enter()?;
                self.next();
                let e = self.additive(None)?;
                self.expect_sym(')')?;
                self.leave();
                Ok(e)
            }
            _ => Err(self.err_here("an expression")),
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        self.additive(None)
    }

    /// `expr` or `(expr, expr)`.
    fn exprspec(&mut self) -> PResult<Rule> {
        if !self.peek().is_sym('(') {
            return Ok(Rule::Scalar(self.expr()?));
        }
        self.enter()?;
        self.next();
        let first = self.additive(None)?;
        if self.peek().is_sym(',') {
            self.next();
            let second = self.additive(None)?;
            self.expect_sym(')')?;
            self.leave();
            return Ok(Rule::Pair(first, second));
        }
        self.expect_sym(')')?;
        self.leave();
        Ok(Rule::Scalar(self.additive(Some(first))?))
    }

    fn constant(&mut self) -> PResult<Rational> {
        let idx = self.pos;
        let before = self.vars.len() + self.params.len();
        let e = self.expr()?;
        match e.as_lit() {
            Some(r) if self.vars.len() + self.params.len() == before => Ok(r.clone()),
            _ => Err(self.err_at(idx, "expected a constant")),
        }
    }

    fn constant_list(&mut self) -> PResult<Vec<Rational>> {
        self.expect_sym('[')?;
        let mut out = vec![self.constant()?];
        while self.peek().is_sym(',') {
            self.next();
            out.push(self.constant()?);
        }
        self.expect_sym(']')?;
        Ok(out)
    }

    fn integer_list(&mut self) -> PResult<Vec<i64>> {
        self.expect_sym('[')?;
        let mut out = Vec::new();
        loop {
            let idx = self.pos;
            let r = self.constant()?;
            match r.is_integer().then(|| r.to_integer().to_i64()).flatten() {
                Some(n) if n.abs() <= MAX_EXPONENT => out.push(n),
                _ => return Err(self.err_at(idx, "expected a small integer")),
            }
            if !self.peek().is_sym(',') {
                break;
            }
            self.next();
        }
        self.expect_sym(']')?;
        Ok(out)
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let idx = self.pos;
        let neg = self.peek().is_sym('-');
        if neg {
            self.next();
        }
        let t = self.peek().clone();
        if t.kind != TokenKind::Integer {
            return Err(self.err_here("an integer"));
        }
        self.next();
        match t.lexeme.parse::<i64>() {
            Ok(n) if n <= 1 << 40 => Ok(if neg { -n } else { n }),
            _ => Err(self.err_at(idx, "index out of range")),
        }
    }

    fn paramspec(&mut self) -> PResult<ParamSeq> {
        let t = self.peek().clone();
        if t.kind != TokenKind::Keyword {
            return Err(self.err_here("`const`, `list`, `linrec` or `mulrec`"));
        }
        let seq = match t.lexeme.as_str() {
            "const" => {
                self.next();
                ParamSeq::Constant(self.constant()?)
            }
            "list" => {
                self.next();
                let values = self.constant_list()?;
                let from = if self.peek().kind == TokenKind::Ident && self.peek().lexeme == "from" {
                    self.next();
                    self.expect_sym('=')?;
                    self.signed_int()?
                } else {
                    0
                };
                ParamSeq::Explicit { from, values }
            }
            "linrec" => {
                self.next();
                self.expect_ident("coeffs")?;
                self.expect_sym('=')?;
                let coeffs = self.constant_list()?;
                self.expect_ident("init")?;
                self.expect_sym('=')?;
                let init = self.constant_list()?;
                ParamSeq::LinRec { coeffs, init }
            }
            "mulrec" => {
                self.next();
                self.expect_ident("exponents")?;
                self.expect_sym('=')?;
                let exponents = self.integer_list()?;
                self.expect_ident("init")?;
                self.expect_sym('=')?;
                let init = self.constant_list()?;
                ParamSeq::MulRec { exponents, init }
            }
            _ => return Err(self.err_here("`const`, `list`, `linrec` or `mulrec`")),
        };
        seq.validate().map_err(|e| self.err_at(self.pos - 1, &e.to_string()))?;
        Ok(seq)
    }

    fn block(&mut self) -> PResult<MapInstance> {
        let map_idx = self.pos;
        self.expect_kw("map")?;
        if self.peek().kind != TokenKind::Str {
            return Err(self.err_here("a map name string"));
        }
        let name = self.next().lexeme;
        self.expect_sym('{')?;
        let mut kind: Option<Kind> = None;
        let mut forward: Option<(Rule, usize, Vec<usize>, Vec<usize>)> = None;
        let mut backward: Option<(Rule, usize, Vec<usize>, Vec<usize>)> = None;
        let mut params: Vec<(String, ParamSeq)> = Vec::new();
        loop {
            let field_idx = self.pos;
            let t = self.peek().clone();
            if t.is_sym('}') {
                break;
            }
            if t.kind != TokenKind::Keyword {
                return Err(self.err_here("a field (`kind`, `forward`, `backward`, `param`) or `}`"));
            }
            match t.lexeme.as_str() {
                "kind" => {
                    self.next();
                    self.expect_sym(':')?;
                    let k = match self.peek() {
                        t if t.is_kw("scalar") => Kind::Scalar,
                        t if t.is_kw("pair") => Kind::Pair,
                        _ => return Err(self.err_here("`scalar` or `pair`")),
                    };
                    self.next();
                    if kind.replace(k).is_some() {
                        return Err(self.err_at(field_idx, "duplicate `kind` field"));
                    }
                }
                "forward" | "backward" => {
                    self.next();
                    self.expect_sym(':')?;
                    self.vars.clear();
                    self.params.clear();
                    let spec_idx = self.pos;
                    let rule = self.exprspec()?;
                    let entry = (rule, spec_idx, std::mem::take(&mut self.vars), std::mem::take(&mut self.params));
                    let slot = if t.lexeme == "forward" { &mut forward } else { &mut backward };
                    if slot.replace(entry).is_some() {
                        return Err(self.err_at(field_idx, &format!("duplicate `{}` field", t.lexeme)));
                    }
                }
                "param" => {
                    self.next();
                    let name_idx = self.pos;
                    if self.peek().kind != TokenKind::Ident {
                        return Err(self.err_here("a parameter name"));
                    }
                    let pname = self.next().lexeme;
                    if matches!(pname.as_str(), "x" | "y" | "X" | "Y") {
                        return Err(self.err_at(name_idx, "state variables cannot be parameters"));
                    }
                    if params.iter().any(|(p, _)| *p == pname) {
                        return Err(self.err_at(name_idx, &format!("parameter `{pname}` declared twice")));
                    }
                    self.expect_sym(':')?;
                    let seq = self.paramspec()?;
                    params.push((pname, seq));
                }
                _ => return Err(self.err_here("a field (`kind`, `forward`, `backward`, `param`) or `}`")),
            }
            if self.peek().is_sym(';') {
                self.next();
            }
        }
        let close_idx = self.pos;
        self.expect_sym('}')?;
        let Some(kind) = kind else {
            return Err(self.err_at(close_idx, &format!("map \"{name}\" has no `kind` field")));
        };
        let Some((fwd, fwd_idx, fwd_vars, fwd_params)) = forward else {
            return Err(self.err_at(close_idx, &format!("map \"{name}\" has no `forward` rule")));
        };
        let upper = kind == Kind::Pair;
        let mut rules = vec![(&fwd, fwd_idx, &fwd_vars, &fwd_params, "forward")];
        if let Some((b, i, v, p)) = &backward {
            rules.push((b, *i, v, p, "backward"));
        }
        for (rule, idx, vars, ps, which) in &rules {
            let shape_ok = matches!((rule, kind), (Rule::Scalar(_), Kind::Scalar) | (Rule::Pair(..), Kind::Pair));
            if !shape_ok {
                let want = if upper { "a pair `(e1, e2)`" } else { "a single expression" };
                return Err(self.err_at(*idx, &format!("{which} rule of a {} map must be {want}", kind.as_str())));
            }
            for &v in vars.iter() {
                let is_upper = self.toks[v].lexeme.chars().all(|c| c.is_ascii_uppercase());
                if is_upper != upper {
                    let msg = if upper { "pair rules use `X` and `Y`" } else { "scalar rules use `x` and `y`" };
                    return Err(self.err_at(v, msg));
                }
            }
            for &p in ps.iter() {
                let pname = &self.toks[p].lexeme;
                if !params.iter().any(|(q, _)| q == pname) {
                    return Err(self.err_at(p, &format!("undeclared parameter `{pname}`")));
                }
            }
        }
        let bwd = backward.map(|(r, ..)| r);
        let had_backward = bwd.is_some();
        MapInstance::new(&name, kind, fwd, bwd, params).map_err(|e| {
            let at = match e {
                MapError::MissingBackward(_) => close_idx,
                MapError::NotMobius(_) | MapError::TooLarge(_) | MapError::Degenerate(_) if !had_backward => fwd_idx,
                _ => map_idx,
            };
            let msg = match &e {
                MapError::MissingBackward(n) => format!("pair map \"{n}\" is missing its `backward:` rule"),
                other => other.to_string(),
            };
            self.err_at(at, &msg)
        })
    }

    fn file(&mut self) -> PResult<Vec<MapInstance>> {
        let mut out: Vec<MapInstance> = Vec::new();
        loop {
            let name_idx = self.pos + 1;
            let m = self.block()?;
            if out.iter().any(|o| o.name == m.name) {
                return Err(self.err_at(name_idx, &format!("duplicate map name \"{}\"", m.name)));
            }
            out.push(m);
            if self.peek().kind == TokenKind::Eof {
                return Ok(out);
            }
        }
    }
}

/// Parse a single rule expression (using `x`, `y`, `X`, `Y` and parameter
/// names freely).
pub fn parse_expr(input: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(input)?;
    let e = p.expr()?;
    if p.peek().kind != TokenKind::Eof {
        return Err(p.err_here("end of expression"));
    }
    Ok(e)
}

/// Parse a map file into validated map instances.
pub fn parse_mapfile(input: &str) -> Result<Vec<MapInstance>, ParseError> {
    Parser::new(input)?.file()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat_i;

    fn x() -> Expr {
        Expr::var(Var::X)
    }
    fn y() -> Expr {
        Expr::var(Var::Y)
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_expr("-x^2").unwrap(), Expr::negate(Expr::power(x(), 2)));
        assert_eq!(parse_expr("x^2^2").unwrap(), Expr::power(x(), 4));
        assert_eq!(parse_expr("x - y - 1").unwrap(), Expr::sub(Expr::sub(x(), y()), Expr::int(1)));
        assert_eq!(parse_expr("x^-1").unwrap(), Expr::power(x(), -1));
        assert_eq!(parse_expr("3/2").unwrap(), Expr::Lit(crate::exact::rat(3, 2)));
        let e = parse_expr("2*a*y/(y^2-1) - x").unwrap();
        let want = Expr::sub(
            Expr::div(
                Expr::mul(Expr::mul(Expr::int(2), Expr::param("a")), y()),
                Expr::sub(Expr::power(y(), 2), Expr::int(1)),
            ),
            x(),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn expression_errors() {
        let e = parse_expr("x^(1/2)").unwrap_err();
        assert!(e.message.contains("non-integer"), "{e}");
        assert_eq!(e.col, 3);
        assert!(parse_expr("(x + y").unwrap_err().message.contains("`)`"));
        assert!(parse_expr("x / (1 - 1)").is_err());
        assert!(parse_expr("x ^ y").is_err());
        let deep = format!("{}x{}", "(".repeat(300), ")".repeat(300));
        assert!(parse_expr(&deep).unwrap_err().message.contains("deeply"));
    }

    #[test]
    fn henon_block() {
        let src = "map \"henon\" {\n kind: scalar\n forward: alpha + beta*x^2 - y\n param alpha: const 1\n param beta: const 1\n}\n";
        let maps = parse_mapfile(src).unwrap();
        assert_eq!(maps.len(), 1);
        assert!(maps[0].backward_derived);
        assert_eq!(maps[0].params[0], ("alpha".to_string(), ParamSeq::Constant(rat_i(1))));
    }

    #[test]
    fn dp2_params() {
        let src = "map \"dp2\" { kind: pair; forward: (Y, 2*a*Y/(Y^2-1) - X); \
                   backward: (2*a*X/(X^2-1) - Y, X); param a: linrec coeffs=[2,-1] init=[1, 2] }";
        let m = parse_mapfile(src).unwrap().remove(0);
        assert_eq!(m.params[0].1.value(5).unwrap(), rat_i(6));
    }

    #[test]
    fn semantic_errors() {
        let e = parse_mapfile("map \"p\" { kind: pair\n forward: (Y, X) }").unwrap_err();
        assert!(e.message.contains("backward"), "{e}");
        let e = parse_mapfile("map \"s\" { kind: scalar\n forward: b*x - y }").unwrap_err();
        assert_eq!((e.line, e.col), (2, 11));
        let e = parse_mapfile("map \"s\" { kind: scalar\n forward: X - y }").unwrap_err();
        assert_eq!((e.line, e.col), (2, 11));
        let e = parse_mapfile("map \"s\" { kind: scalar forward: x - y^2 }").unwrap_err();
        assert!(e.message.contains("Möbius"), "{e}");
        assert!(parse_mapfile("").is_err());
    }
}
