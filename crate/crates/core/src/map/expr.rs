use std::collections::BTreeSet;

use num_traits::Signed;

use crate::exact::{Field, Laurent, LaurentError, Multi, Poly, Rational};

/// State slot referenced by a rule. Scalar rules spell these `x` (= x_n) and
/// `y` (= x_{n-1}); pair rules spell them `X` and `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    pub(crate) fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

/// Rule expression tree. Literal-only subtrees are folded by the smart
/// constructors, so a `Bin` or `Pow` never has only literal operands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Lit(Rational),
    Var(Var),
    Param(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("unknown parameter `{0}`")]
    UnknownParam(String),
    #[error("parameter `{name}` at index {index}: {reason}")]
    Param { name: String, index: i64, reason: String },
    #[error("value not representable in the evaluation field")]
    Unrepresentable,
}

impl From<LaurentError> for EvalError {
    fn from(e: LaurentError) -> Self {
        match e {
            LaurentError::DivisionByZero => EvalError::DivisionByZero,
            LaurentError::PrecisionExhausted | LaurentError::TruncationMismatch => EvalError::PrecisionExhausted,
        }
    }
}

/// A value type rule expressions can be evaluated in.
pub trait Domain: Clone {
    type Ctx;
    fn constant(r: &Rational, ctx: &Self::Ctx) -> Result<Self, EvalError>;
    fn add(&self, rhs: &Self) -> Result<Self, EvalError>;
    fn sub(&self, rhs: &Self) -> Result<Self, EvalError>;
    fn mul(&self, rhs: &Self) -> Result<Self, EvalError>;
    fn div(&self, rhs: &Self) -> Result<Self, EvalError>;
    fn neg(&self) -> Result<Self, EvalError>;
    fn pow(&self, e: i64) -> Result<Self, EvalError>;
}

impl<F: Field> Domain for F {
    type Ctx = ();
    fn constant(r: &Rational, _: &()) -> Result<Self, EvalError> {
        F::from_rational(r).ok_or(EvalError::Unrepresentable)
    }
    fn add(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Field::add(self, rhs))
    }
    fn sub(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Field::sub(self, rhs))
    }
    fn mul(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Field::mul(self, rhs))
    }
    fn div(&self, rhs: &Self) -> Result<Self, EvalError> {
        Field::div(self, rhs).ok_or(EvalError::DivisionByZero)
    }
    fn neg(&self) -> Result<Self, EvalError> {
        Ok(Field::neg(self))
    }
    fn pow(&self, e: i64) -> Result<Self, EvalError> {
        if e >= 0 {
            Ok(Field::pow(self, e as u64))
        } else {
            Ok(Field::pow(&Field::inv(self).ok_or(EvalError::DivisionByZero)?, e.unsigned_abs()))
        }
    }
}

impl<F: Field> Domain for Laurent<F> {
    /// Truncation order.
    type Ctx = usize;
    fn constant(r: &Rational, trunc: &usize) -> Result<Self, EvalError> {
        Ok(Laurent::constant(F::from_rational(r).ok_or(EvalError::Unrepresentable)?, *trunc))
    }
    fn add(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Laurent::add(self, rhs)?)
    }
    fn sub(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Laurent::sub(self, rhs)?)
    }
    fn mul(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Laurent::mul(self, rhs)?)
    }
    fn div(&self, rhs: &Self) -> Result<Self, EvalError> {
        Ok(Laurent::div(self, rhs)?)
    }
    fn neg(&self) -> Result<Self, EvalError> {
        Ok(Laurent::neg(self))
    }
    fn pow(&self, e: i64) -> Result<Self, EvalError> {
        Ok(Laurent::pow(self, e)?)
    }
}

impl Expr {
    pub fn lit(r: Rational) -> Self {
        Expr::Lit(r)
    }

    pub fn int(n: i64) -> Self {
        Expr::Lit(crate::exact::rat_i(n))
    }

    pub fn var(v: Var) -> Self {
        Expr::Var(v)
    }

    pub fn param(name: &str) -> Self {
        Expr::Param(name.to_string())
    }

    pub fn as_lit(&self) -> Option<&Rational> {
        match self {
            Expr::Lit(r) => Some(r),
            _ => None,
        }
    }

    pub fn negate(e: Expr) -> Self {
        match e {
            Expr::Lit(r) => Expr::Lit(-r),
            other => Expr::Neg(Box::new(other)),
        }
    }

    /// Binary node, folded when both operands are literals. A literal zero
    /// divisor is kept unfolded (evaluation reports it).
    pub fn binary(op: BinOp, l: Expr, r: Expr) -> Self {
        if let (Expr::Lit(a), Expr::Lit(b)) = (&l, &r) {
            let v = match op {
                BinOp::Add => Some(a + b),
                BinOp::Sub => Some(a - b),
                BinOp::Mul => Some(a * b),
                BinOp::Div => (!Field::is_zero(b)).then(|| a / b),
            };
            if let Some(v) = v {
                return Expr::Lit(v);
            }
        }
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    /// Power node, folded for a literal base when the result is defined.
    pub fn power(base: Expr, e: i64) -> Self {
        if let Expr::Lit(b) = &base {
            if e >= 0 || !Field::is_zero(b) {
                return Expr::Lit(<Rational as Domain>::pow(b, e).expect("nonzero base"));
            }
        }
        Expr::Pow(Box::new(base), e)
    }

    pub fn add(l: Expr, r: Expr) -> Self {
        Self::binary(BinOp::Add, l, r)
    }

    pub fn sub(l: Expr, r: Expr) -> Self {
        Self::binary(BinOp::Sub, l, r)
    }

    pub fn mul(l: Expr, r: Expr) -> Self {
        Self::binary(BinOp::Mul, l, r)
    }

    pub fn div(l: Expr, r: Expr) -> Self {
        Self::binary(BinOp::Div, l, r)
    }

    pub fn eval<D: Domain>(
        &self,
        ctx: &D::Ctx,
        x: &D,
        y: &D,
        param: &dyn Fn(&str) -> Result<D, EvalError>,
    ) -> Result<D, EvalError> {
        match self {
            Expr::Lit(r) => D::constant(r, ctx),
            Expr::Var(Var::X) => Ok(x.clone()),
            Expr::Var(Var::Y) => Ok(y.clone()),
            Expr::Param(p) => param(p),
            Expr::Neg(e) => e.eval(ctx, x, y, param)?.neg(),
            Expr::Bin(op, l, r) => {
                let a = l.eval(ctx, x, y, param)?;
                let b = r.eval(ctx, x, y, param)?;
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => a.div(&b),
                }
            }
            Expr::Pow(b, e) => b.eval(ctx, x, y, param)?.pow(*e),
        }
    }

    /// Parameter names referenced.
    pub fn params(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |e| {
            if let Expr::Param(p) = e {
                out.insert(p.clone());
            }
        });
        out
    }

    pub fn uses_var(&self, v: Var) -> bool {
        let mut found = false;
        self.walk(&mut |e| found |= *e == Expr::Var(v));
        found
    }

    fn walk(&self, f: &mut dyn FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(e) | Expr::Pow(e, _) => e.walk(f),
            Expr::Bin(_, l, r) => {
                l.walk(f);
                r.walk(f);
            }
            _ => {}
        }
    }

    /// Replace the state slots by the given expressions.
    pub fn substitute(&self, x: &Expr, y: &Expr) -> Expr {
        match self {
            Expr::Var(Var::X) => x.clone(),
            Expr::Var(Var::Y) => y.clone(),
            Expr::Lit(_) | Expr::Param(_) => self.clone(),
            Expr::Neg(e) => Expr::negate(e.substitute(x, y)),
            Expr::Bin(op, l, r) => Expr::binary(*op, l.substitute(x, y), r.substitute(x, y)),
            Expr::Pow(b, e) => Expr::power(b.substitute(x, y), *e),
        }
    }

    /// Crude upper bound on the total degree of the rational function the
    /// expression denotes (numerator plus denominator), saturating.
    pub fn degree_bound(&self) -> u64 {
        match self {
            Expr::Lit(_) => 0,
            Expr::Var(_) | Expr::Param(_) => 1,
            Expr::Neg(e) => e.degree_bound(),
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.degree_bound(), r.degree_bound());
                match op {
                    BinOp::Mul => a.saturating_add(b),
                    _ => a.saturating_add(b).max(a.max(b)),
                }
            }
            Expr::Pow(b, e) => b.degree_bound().saturating_mul(e.unsigned_abs()),
        }
    }

    pub fn node_count(&self) -> usize {
        let mut n = 0;
        self.walk(&mut |_| n += 1);
        n
    }

    /// Expression for a tower element; `gen(l)` names generator `g_l`.
    /// Numerators and denominators are written as sums of monomials, highest
    /// power first.
    pub fn from_multi(m: &Multi, gen: &dyn Fn(usize) -> Expr) -> Expr {
        match m {
            Multi::Const(r) => Expr::Lit(r.clone()),
            Multi::Tower(l, r) => {
                let g = gen(*l);
                let num = poly_expr(r.num(), &g, gen);
                if r.den().is_constant() {
                    return num;
                }
                let den = poly_expr(r.den(), &g, gen);
                Expr::div(num, den)
            }
        }
    }
}

fn poly_expr(p: &Poly<Multi>, g: &Expr, gen: &dyn Fn(usize) -> Expr) -> Expr {
    let mut acc: Option<Expr> = None;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if Field::is_zero(c) {
            continue;
        }
        let mono = match i {
            0 => None,
            1 => Some(g.clone()),
            _ => Some(Expr::power(g.clone(), i as i64)),
        };
        let (negative, mag) = match c {
            Multi::Const(r) if r.is_negative() => (true, Multi::Const(-r)),
            other => (false, other.clone()),
        };
        let term = match mono {
            None => Expr::from_multi(&mag, gen),
            Some(m) if mag.is_one() => m,
            Some(m) => Expr::mul(Expr::from_multi(&mag, gen), m),
        };
        acc = Some(match acc {
            None if negative => Expr::negate(term),
            None => term,
            Some(a) if negative => Expr::sub(a, term),
            Some(a) => Expr::add(a, term),
        });
    }
    acc.unwrap_or_else(|| Expr::int(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rat_i};

    fn no_params(_: &str) -> Result<Rational, EvalError> {
        Err(EvalError::UnknownParam(String::new()))
    }

    #[test]
    fn folding() {
        let e = Expr::div(Expr::int(3), Expr::int(2));
        assert_eq!(e, Expr::Lit(rat(3, 2)));
        assert_eq!(Expr::negate(Expr::int(2)), Expr::Lit(rat_i(-2)));
        assert_eq!(Expr::power(Expr::int(2), -2), Expr::Lit(rat(1, 4)));
        assert!(matches!(Expr::div(Expr::int(1), Expr::int(0)), Expr::Bin(..)));
    }

    #[test]
    fn evaluate_rational() {
        // alpha + beta*x^2 - y with alpha = 1, beta = 1
        let e = Expr::sub(
            Expr::add(Expr::param("alpha"), Expr::mul(Expr::param("beta"), Expr::power(Expr::var(Var::X), 2))),
            Expr::var(Var::Y),
        );
        let p = |_: &str| Ok(rat_i(1));
        assert_eq!(e.eval(&(), &rat_i(0), &rat_i(0), &p).unwrap(), rat_i(1));
        assert_eq!(e.params().len(), 2);
        let z = Expr::div(Expr::int(1), Expr::var(Var::X));
        assert_eq!(z.eval(&(), &rat_i(0), &rat_i(1), &no_params), Err(EvalError::DivisionByZero));
    }

    #[test]
    fn multi_roundtrip() {
        let x = Multi::generator(1);
        let y = Multi::generator(2);
        let m = Field::div(&Field::sub(&Field::mul(&x, &x), &y), &Field::add(&x, &Multi::one())).unwrap();
        let gen = |l: usize| Expr::var(if l == 1 { Var::X } else { Var::Y });
        let e = Expr::from_multi(&m, &gen);
        let back = e.eval(&(), &x, &y, &|_: &str| Err(EvalError::UnknownParam(String::new()))).unwrap();
        assert_eq!(back, m);
    }
}
