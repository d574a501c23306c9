use num_traits::Signed;

use crate::exact::Rational;
use crate::map::{Expr, Kind, MapInstance, ParamSeq, Rule, Var};

const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Bin(op, ..) => op.precedence(),
        Expr::Neg(_) => PREC_NEG,
        Expr::Pow(..) => PREC_POW,
        Expr::Lit(_) | Expr::Var(_) | Expr::Param(_) => PREC_ATOM,
    }
}

fn literal(r: &Rational) -> String {
    if r.is_integer() && !r.is_negative() {
        r.to_string()
    } else {
        format!("({r})")
    }
}

fn write_expr(e: &Expr, kind: Kind, out: &mut String) {
    let var = |v: Var| match (v, kind) {
        (Var::X, Kind::Scalar) => "x",
        (Var::Y, Kind::Scalar) => "y",
        (Var::X, Kind::Pair) => "X",
        (Var::Y, Kind::Pair) => "Y",
    };
    let wrapped = |e: &Expr, paren: bool, out: &mut String| {
        if paren {
            out.push('(');
            write_expr(e, kind, out);
            out.push(')');
        } else {
            write_expr(e, kind, out);
        }
    };
    match e {
        Expr::Lit(r) => out.push_str(&literal(r)),
        Expr::Var(v) => out.push_str(var(*v)),
        Expr::Param(p) => out.push_str(p),
        Expr::Neg(inner) => {
            out.push('-');
            let p = precedence(inner);
            wrapped(inner, p < PREC_POW, out);
        }
        Expr::Bin(op, l, r) => {
            let p = op.precedence();
            wrapped(l, precedence(l) < p, out);
            out.push(' ');
            out.push(op.symbol());
            out.push(' ');
            let rp = precedence(r);
            wrapped(r, rp <= p || matches!(**r, Expr::Neg(_)), out);
        }
        Expr::Pow(b, n) => {
            wrapped(b, precedence(b) < PREC_ATOM, out);
            out.push('^');
            if *n < 0 {
                out.push_str(&format!("({n})"));
            } else {
                out.push_str(&n.to_string());
            }
        }
    }
}

/// Render an expression in map-file syntax; re-parses to the same tree.
pub fn print_expr(e: &Expr, kind: Kind) -> String {
    let mut s = String::new();
    write_expr(e, kind, &mut s);
    s
}

fn print_rule(r: &Rule, kind: Kind) -> String {
    match r {
        Rule::Scalar(e) => print_expr(e, kind),
        Rule::Pair(a, b) => format!("({}, {})", print_expr(a, kind), print_expr(b, kind)),
    }
}

fn list(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(literal).collect();
    format!("[{}]", parts.join(", "))
}

fn print_param(p: &ParamSeq) -> String {
    match p {
        ParamSeq::Constant(c) => format!("const {}", literal(c)),
        ParamSeq::Explicit { from, values } if *from == 0 => format!("list {}", list(values)),
        ParamSeq::Explicit { from, values } => format!("list {} from={from}", list(values)),
        ParamSeq::LinRec { coeffs, init } => format!("linrec coeffs={} init={}", list(coeffs), list(init)),
        ParamSeq::MulRec { exponents, init } => {
            let e: Vec<String> = exponents.iter().map(|n| if *n < 0 { format!("({n})") } else { n.to_string() }).collect();
            format!("mulrec exponents=[{}] init={}", e.join(", "), list(init))
        }
    }
}

/// One `map` block. Derived backward rules are omitted (they are derived
/// again on parsing).
pub fn print_map(m: &MapInstance) -> String {
    let name = m.name.replace('\\', "\\\\").replace('"', "\\\"");
    let mut s = format!("map \"{name}\" {{\n  kind: {}\n", m.kind.as_str());
    for (p, seq) in &m.params {
        s.push_str(&format!("  param {p}: {}\n", print_param(seq)));
    }
    s.push_str(&format!("  forward: {}\n", print_rule(&m.forward, m.kind)));
    if !m.backward_derived {
        s.push_str(&format!("  backward: {}\n", print_rule(&m.backward, m.kind)));
    }
    s.push_str("}\n");
    s
}

pub fn print_mapfile(maps: &[MapInstance]) -> String {
    maps.iter().map(print_map).collect::<Vec<_>>().join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{parse_expr, parse_mapfile};

    #[test]
    fn expr_roundtrip() {
        for src in [
            "-x^2",
            "(-x)^2",
            "x - (y - 1)",
            "x - -y",
            "2*a*y/(y^2 - 1) - x",
            "x^(-3) * (3/2) + (-2)",
            "a/(b/c)",
            "(x + y)^2^2",
            "-(x + y)",
            "--x",
        ] {
            let e = parse_expr(src).unwrap();
            let printed = print_expr(&e, Kind::Scalar);
            assert_eq!(parse_expr(&printed).unwrap(), e, "{src} -> {printed}");
        }
        assert_eq!(print_expr(&parse_expr("x - (y - 1)").unwrap(), Kind::Scalar), "x - (y - 1)");
        assert_eq!(print_expr(&parse_expr("-x^2").unwrap(), Kind::Scalar), "-x^2");
    }

    #[test]
    fn map_roundtrip() {
        let src = "map \"m\" { kind: scalar param a: list [1, 3/2, -2] from=-1 \
                   param b: mulrec exponents=[0, 2, 1] init=[2, 2, 2] forward: y*(x - b^2/x) + a }";
        let maps = parse_mapfile(src).unwrap();
        let again = parse_mapfile(&print_mapfile(&maps)).unwrap();
        assert_eq!(maps, again);
    }
}
