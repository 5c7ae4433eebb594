use std::fmt;
use std::ops;

/// A model (logical) variable, bound to an FD term on first use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModelVar(pub(crate) u32);

impl ModelVar {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ModelVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(ModelVar),
    Int(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    /// At least one side must fold to a constant.
    Mul(Box<Expr>, Box<Expr>),
    Sum(Vec<Expr>),
}

impl Expr {
    pub fn sum(items: impl IntoIterator<Item = Expr>) -> Expr {
        Expr::Sum(items.into_iter().collect())
    }

    pub fn eq(self, rhs: impl Into<Expr>) -> Rel {
        Rel::new(RelOp::Eq, self, rhs)
    }

    pub fn ne(self, rhs: impl Into<Expr>) -> Rel {
        Rel::new(RelOp::Ne, self, rhs)
    }

    pub fn lt(self, rhs: impl Into<Expr>) -> Rel {
        Rel::new(RelOp::Lt, self, rhs)
    }

    pub fn le(self, rhs: impl Into<Expr>) -> Rel {
        Rel::new(RelOp::Le, self, rhs)
    }

    pub fn gt(self, rhs: impl Into<Expr>) -> Rel {
        Rel::new(RelOp::Gt, self, rhs)
    }

    pub fn ge(self, rhs: impl Into<Expr>) -> Rel {
        Rel::new(RelOp::Ge, self, rhs)
    }

    /// Every variable in the expression, in order of occurrence.
    pub fn vars(&self, out: &mut Vec<ModelVar>) {
        match self {
            Expr::Var(v) => out.push(*v),
            Expr::Int(_) => {}
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.vars(out);
                b.vars(out);
            }
            Expr::Sum(items) => items.iter().for_each(|e| e.vars(out)),
        }
    }

    /// Value under an assignment of the variables.
    pub fn eval(&self, value: &impl Fn(ModelVar) -> i64) -> i64 {
        match self {
            Expr::Var(v) => value(*v),
            Expr::Int(n) => *n,
            Expr::Add(a, b) => a.eval(value) + b.eval(value),
            Expr::Sub(a, b) => a.eval(value) - b.eval(value),
            Expr::Mul(a, b) => a.eval(value) * b.eval(value),
            Expr::Sum(items) => items.iter().map(|e| e.eval(value)).sum(),
        }
    }
}

impl From<ModelVar> for Expr {
    fn from(v: ModelVar) -> Expr {
        Expr::Var(v)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::Int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl<R: Into<Expr>> ops::$trait<R> for Expr {
            type Output = Expr;
            fn $method(self, rhs: R) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs.into()))
            }
        }

        impl<R: Into<Expr>> ops::$trait<R> for ModelVar {
            type Output = Expr;
            fn $method(self, rhs: R) -> Expr {
                Expr::$variant(Box::new(Expr::Var(self)), Box::new(rhs.into()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Int(n) => write!(f, "{n}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Sum(items) => {
                f.write_str("sum(")?;
                for (i, e) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl RelOp {
    pub const ALL: [RelOp; 6] = [RelOp::Eq, RelOp::Ne, RelOp::Lt, RelOp::Le, RelOp::Gt, RelOp::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Eq => "#=",
            RelOp::Ne => "#\\=",
            RelOp::Lt => "#<",
            RelOp::Le => "#=<",
            RelOp::Gt => "#>",
            RelOp::Ge => "#>=",
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            RelOp::Eq => a == b,
            RelOp::Ne => a != b,
            RelOp::Lt => a < b,
            RelOp::Le => a <= b,
            RelOp::Gt => a > b,
            RelOp::Ge => a >= b,
        }
    }
}

/// `lhs op rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rel {
    pub op: RelOp,
    pub lhs: Expr,
    pub rhs: Expr,
}

impl Rel {
    pub fn new(op: RelOp, lhs: impl Into<Expr>, rhs: impl Into<Expr>) -> Rel {
        Rel {
            op,
            lhs: lhs.into(),
            rhs: rhs.into(),
        }
    }

    pub fn holds(&self, value: &impl Fn(ModelVar) -> i64) -> bool {
        self.op.holds(self.lhs.eval(value), self.rhs.eval(value))
    }

    pub fn vars(&self) -> Vec<ModelVar> {
        let mut out = Vec::new();
        self.lhs.vars(&mut out);
        self.rhs.vars(&mut out);
        out
    }
}

impl fmt::Display for Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op.symbol(), self.rhs)
    }
}
