use std::fmt;

use crate::ranges::BoundConst;

/// Index of a parameter in the head of a definition.
pub type ParamIndex = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermExpr {
    Min(ParamIndex),
    Max(ParamIndex),
    Val(ParamIndex),
    /// `c(I)`: a parameter that is an integer when the constraint is posted.
    Const(ParamIndex),
    Int(i64),
    Named(BoundConst),
    Add(Box<TermExpr>, Box<TermExpr>),
    Sub(Box<TermExpr>, Box<TermExpr>),
    Mul(Box<TermExpr>, Box<TermExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RangeExpr {
    Interval(TermExpr, TermExpr),
    Singleton(TermExpr),
    Union(Box<RangeExpr>, Box<RangeExpr>),
    Intersect(Box<RangeExpr>, Box<RangeExpr>),
    Complement(Box<RangeExpr>),
    PointwiseAdd(Box<RangeExpr>, TermExpr),
    PointwiseSub(Box<RangeExpr>, TermExpr),
    PointwiseMul(Box<RangeExpr>, TermExpr),
    Dom(ParamIndex),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamKind {
    Var,
    Const,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Param {
    pub name: String,
    pub kind: ParamKind,
}

/// `target in expr`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub target: ParamIndex,
    pub expr: RangeExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexicalDef {
    pub name: String,
    pub params: Vec<Param>,
    pub rules: Vec<Rule>,
}

impl IndexicalDef {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn param_index(&self, name: &str) -> Option<ParamIndex> {
        self.params.iter().position(|p| p.name == name)
    }
}

struct Named<'a, T> {
    params: &'a [Param],
    node: &'a T,
}

impl<'a> fmt::Display for Named<'a, TermExpr> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |i: &ParamIndex| &self.params[*i].name;
        let sub = |node: &'a TermExpr| Named {
            params: self.params,
            node,
        };
        match self.node {
            TermExpr::Min(i) => write!(f, "min({})", p(i)),
            TermExpr::Max(i) => write!(f, "max({})", p(i)),
            TermExpr::Val(i) => write!(f, "val({})", p(i)),
            TermExpr::Const(i) => write!(f, "c({})", p(i)),
            TermExpr::Int(n) if *n < 0 => write!(f, "({n})"),
            TermExpr::Int(n) => write!(f, "{n}"),
            TermExpr::Named(BoundConst::Inf) => f.write_str("inf"),
            TermExpr::Named(BoundConst::Sup) => f.write_str("sup"),
            TermExpr::Add(a, b) => write!(f, "{}+{}", sub(a), sub(b)),
            TermExpr::Sub(a, b) => match **b {
                TermExpr::Add(..) | TermExpr::Sub(..) => write!(f, "{}-({})", sub(a), sub(b)),
                _ => write!(f, "{}-{}", sub(a), sub(b)),
            },
            TermExpr::Mul(a, b) => {
                let wrap = |t: &TermExpr| matches!(t, TermExpr::Add(..) | TermExpr::Sub(..));
                match (wrap(a), wrap(b)) {
                    (false, false) => write!(f, "{}*{}", sub(a), sub(b)),
                    (true, false) => write!(f, "({})*{}", sub(a), sub(b)),
                    (false, true) => write!(f, "{}*({})", sub(a), sub(b)),
                    (true, true) => write!(f, "({})*({})", sub(a), sub(b)),
                }
            }
        }
    }
}

impl<'a> fmt::Display for Named<'a, RangeExpr> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |node: &'a TermExpr| Named {
            params: self.params,
            node,
        };
        let r = |node: &'a RangeExpr| Named {
            params: self.params,
            node,
        };
        // operand of a pointwise operation must be atomic to re-parse
        let atomic = |term: &'a TermExpr| match term {
            TermExpr::Add(..) | TermExpr::Sub(..) | TermExpr::Mul(..) => {
                format!("({})", t(term))
            }
            _ => t(term).to_string(),
        };
        match self.node {
            RangeExpr::Interval(lo, hi) => write!(f, "{}..{}", t(lo), t(hi)),
            RangeExpr::Singleton(v) => write!(f, "{{{}}}", t(v)),
            RangeExpr::Union(a, b) => write!(f, "({} \\/ {})", r(a), r(b)),
            RangeExpr::Intersect(a, b) => write!(f, "({} /\\ {})", r(a), r(b)),
            RangeExpr::Complement(a) => write!(f, "-({})", r(a)),
            RangeExpr::PointwiseAdd(a, n) => write!(f, "({})+{}", r(a), atomic(n)),
            RangeExpr::PointwiseSub(a, n) => write!(f, "({})-{}", r(a), atomic(n)),
            RangeExpr::PointwiseMul(a, n) => write!(f, "({})*{}", r(a), atomic(n)),
            RangeExpr::Dom(i) => write!(f, "dom({})", self.params[*i].name),
        }
    }
}

impl fmt::Display for IndexicalDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let simple = self
            .name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
            && self.name.starts_with(|c: char| c.is_ascii_lowercase());
        if simple {
            write!(f, "{}(", self.name)?;
        } else {
            write!(f, "'{}'(", self.name)?;
        }
        for (i, p) in self.params.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&p.name)?;
        }
        f.write_str(") +:")?;
        for (i, rule) in self.rules.iter().enumerate() {
            let sep = if i + 1 == self.rules.len() { "." } else { "," };
            write!(
                f,
                "\n    {} in {}{sep}",
                self.params[rule.target].name,
                Named {
                    params: &self.params,
                    node: &rule.expr
                }
            )?;
        }
        Ok(())
    }
}
