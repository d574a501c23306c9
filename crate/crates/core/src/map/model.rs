use crate::exact::{Field, Multi, RatFunc};

use super::expr::{Domain, EvalError, Expr, Var};
use super::param::{ParamEnv, ParamError, ParamSeq};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Scalar,
    Pair,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Scalar => "scalar",
            Kind::Pair => "pair",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    Scalar(Expr),
    Pair(Expr, Expr),
}

impl Rule {
    pub fn exprs(&self) -> Vec<&Expr> {
        match self {
            Rule::Scalar(e) => vec![e],
            Rule::Pair(a, b) => vec![a, b],
        }
    }

    fn kind(&self) -> Kind {
        match self {
            Rule::Scalar(_) => Kind::Scalar,
            Rule::Pair(..) => Kind::Pair,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("undeclared parameter `{0}`")]
    UndeclaredParam(String),
    #[error("parameter `{0}` declared twice")]
    DuplicateParam(String),
    #[error("{0} rule: {1}")]
    Shape(&'static str, String),
    #[error("pair map `{0}` needs an explicit backward rule")]
    MissingBackward(String),
    #[error("forward rule is not a Möbius function of y (degree {0} in y); an explicit backward rule is required")]
    NotMobius(usize),
    #[error("expression too large for symbolic manipulation (degree bound {0})")]
    TooLarge(u64),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// A second-order birational mapping.
///
/// Scalar maps are stored as `x_{n+1} = f(x_n, x_{n-1})` with `x` = x_n and
/// `y` = x_{n-1}; the state at time `n` is `(x_{n-1}, x_n)`. The backward
/// rule gives `x_{n-1}` from `x` = x_n and `y` = x_{n+1}, with parameters
/// taken at `n`. Pair maps act on `(X_n, Y_n)` with parameters at `n`
/// forward and at `n-1` backward.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapInstance {
    pub name: String,
    pub kind: Kind,
    pub forward: Rule,
    pub backward: Rule,
    pub backward_derived: bool,
    pub params: Vec<(String, ParamSeq)>,
}

/// Upper limit on [`Expr::degree_bound`] for symbolic work.
pub const SYMBOLIC_DEGREE_LIMIT: u64 = 64;

impl MapInstance {
    /// Validate and, for scalar maps without a backward rule, derive one.
    pub fn new(
        name: &str,
        kind: Kind,
        forward: Rule,
        backward: Option<Rule>,
        params: Vec<(String, ParamSeq)>,
    ) -> Result<Self, MapError> {
        for (i, (p, seq)) in params.iter().enumerate() {
            if params[..i].iter().any(|(q, _)| q == p) {
                return Err(MapError::DuplicateParam(p.clone()));
            }
            seq.validate()?;
        }
        let check = |r: &Rule, which: &'static str| -> Result<(), MapError> {
            if r.kind() != kind {
                return Err(MapError::Shape(which, format!("{} map needs a {} rule", kind.as_str(), kind.as_str())));
            }
            for e in r.exprs() {
                for p in e.params() {
                    if !params.iter().any(|(q, _)| *q == p) {
                        return Err(MapError::UndeclaredParam(p));
                    }
                }
            }
            Ok(())
        };
        check(&forward, "forward")?;
        let (backward, derived) = match backward {
            Some(b) => {
                check(&b, "backward")?;
                (b, false)
            }
            None => match (&forward, kind) {
                (Rule::Scalar(f), Kind::Scalar) => (Rule::Scalar(auto_invert_expr(f, &params)?), true),
                _ => return Err(MapError::MissingBackward(name.to_string())),
            },
        };
        Ok(MapInstance { name: name.to_string(), kind, forward, backward, backward_derived: derived, params })
    }

    pub fn env(&self) -> ParamEnv {
        ParamEnv::new(&self.params)
    }

    fn rule(&self, dir: Direction) -> &Rule {
        match dir {
            Direction::Forward => &self.forward,
            Direction::Backward => &self.backward,
        }
    }

    /// One step from the state at time `n`.
    pub fn step<D: Domain>(
        &self,
        env: &ParamEnv,
        ctx: &D::Ctx,
        state: &(D, D),
        n: i64,
        dir: Direction,
    ) -> Result<(D, D), EvalError> {
        let idx = match dir {
            Direction::Forward => n,
            Direction::Backward => n - 1,
        };
        let param = |name: &str| -> Result<D, EvalError> {
            let v = env.value(name, idx).map_err(|e| EvalError::Param {
                name: name.to_string(),
                index: idx,
                reason: e.to_string(),
            })?;
            D::constant(&v, ctx)
        };
        let (a, b) = state;
        match (self.rule(dir), dir) {
            (Rule::Scalar(f), Direction::Forward) => Ok((b.clone(), f.eval(ctx, b, a, &param)?)),
            (Rule::Scalar(g), Direction::Backward) => Ok((g.eval(ctx, a, b, &param)?, a.clone())),
            (Rule::Pair(f, g), _) => Ok((f.eval(ctx, a, b, &param)?, g.eval(ctx, a, b, &param)?)),
        }
    }

    /// The same dynamics as a pair map on `(X, Y) = (x_{n-1}, x_n)`.
    pub fn pair_view(&self) -> MapInstance {
        match (&self.forward, &self.backward) {
            (Rule::Scalar(f), Rule::Scalar(g)) => {
                let (xv, yv) = (Expr::var(Var::X), Expr::var(Var::Y));
                MapInstance {
                    name: self.name.clone(),
                    kind: Kind::Pair,
                    forward: Rule::Pair(yv.clone(), f.substitute(&yv, &xv)),
                    backward: Rule::Pair(g.clone(), xv),
                    backward_derived: self.backward_derived,
                    params: self.params.clone(),
                }
            }
            _ => self.clone(),
        }
    }

    pub fn param_names(&self) -> Vec<String> {
        self.params.iter().map(|(n, _)| n.clone()).collect()
    }
}

/// Symbolic evaluation in the tower `Q(params)(x)(y)`: parameter `i` is
/// generator `i+1`, then `x`, then `y` as the top level.
pub fn to_multi(e: &Expr, param_names: &[String]) -> Result<Multi, MapError> {
    let bound = e.degree_bound();
    if bound > SYMBOLIC_DEGREE_LIMIT {
        return Err(MapError::TooLarge(bound));
    }
    let p = param_names.len();
    let x = Multi::generator(p + 1);
    let y = Multi::generator(p + 2);
    let lookup = |name: &str| -> Result<Multi, EvalError> {
        param_names
            .iter()
            .position(|q| q == name)
            .map(|i| Multi::generator(i + 1))
            .ok_or_else(|| EvalError::UnknownParam(name.to_string()))
    };
    e.eval(&(), &x, &y, &lookup).map_err(|err| match err {
        EvalError::UnknownParam(n) => MapError::UndeclaredParam(n),
        other => MapError::Degenerate(other.to_string()),
    })
}

/// Inverse of [`to_multi`] with the given names for the state slots.
pub fn from_multi(m: &Multi, param_names: &[String], x: Expr, y: Expr) -> Expr {
    let p = param_names.len();
    let gen = |l: usize| -> Expr {
        if l <= p {
            Expr::Param(param_names[l - 1].clone())
        } else if l == p + 1 {
            x.clone()
        } else {
            y.clone()
        }
    };
    Expr::from_multi(m, &gen)
}

/// Solve `r = f(x, y)` for `y` when `f` is a Möbius function of `y`.
pub fn auto_invert_expr(f: &Expr, params: &[(String, ParamSeq)]) -> Result<Expr, MapError> {
    let names: Vec<String> = params.iter().map(|(n, _)| n.clone()).collect();
    let top = names.len() + 2;
    let fm = to_multi(f, &names)?;
    let rf: RatFunc<Multi> = fm.as_ratfunc_in(top);
    let deg_y = rf.num().degree().unwrap_or(0).max(rf.den().degree().unwrap_or(0));
    if deg_y > 1 {
        return Err(MapError::NotMobius(deg_y));
    }
    if deg_y == 0 {
        return Err(MapError::Degenerate("forward rule does not depend on y".into()));
    }
    // f = (a y + b)/(c y + d)  =>  y = (b - d r)/(c r - a), r in the y slot
    let (a, b) = (rf.num().coeff(1), rf.num().coeff(0));
    let (c, d) = (rf.den().coeff(1), rf.den().coeff(0));
    let r = Multi::generator(top);
    let num = Field::sub(&b, &Field::mul(&d, &r));
    let den = Field::sub(&Field::mul(&c, &r), &a);
    let g = Field::div(&num, &den).ok_or_else(|| MapError::Degenerate("rule is not invertible in y".into()))?;
    Ok(from_multi(&g, &names, Expr::var(Var::X), Expr::var(Var::Y)))
}

/// Solve the scalar rule of a map for `x_{n-1}`.
pub fn auto_invert(m: &MapInstance) -> Result<Expr, MapError> {
    match &m.forward {
        Rule::Scalar(f) => auto_invert_expr(f, &m.params),
        Rule::Pair(..) => Err(MapError::Shape("forward", "auto inversion needs a scalar rule".into())),
    }
}
