//! Concrete syntax of indexical definitions.
//!
//! ```text
//! file   ::= def*
//! def    ::= name '(' Param {',' Param} ')' '+:' rule {',' rule} ['.']
//! rule   ::= Param 'in' range
//! range  ::= inter {'\/' inter}
//! inter  ::= point {'/\' point}
//! point  ::= unary {('+' | '-' | '*') atom}
//! unary  ::= '-' unary | primary
//! primary::= '{' term {',' term} '}' | 'dom(' Param ')' | term '..' term | '(' range ')'
//! term   ::= factor {('+' | '-') factor}
//! factor ::= neg {'*' neg}
//! neg    ::= '-' neg | atom
//! atom   ::= integer | 'inf' | 'sup' | min(P) | max(P) | val(P) | c(P) | '(' term ')'
//! ```
//!
//! A leading `-` on a range is complementation; write `(-3)..5` for a
//! negative lower bound. `%` starts a comment that runs to the end of line.

use thiserror::Error;

use super::ast::{IndexicalDef, Param, ParamIndex, ParamKind, RangeExpr, Rule, TermExpr};
use crate::ranges::BoundConst;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown parameter {name}")]
    UnknownParam { line: usize, col: usize, name: String },
    #[error("{line}:{col}: parameter {name} is used both as a variable and as c({name})")]
    ParamKindClash { line: usize, col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Quoted(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    DotDot,
    Dot,
    Plus,
    Minus,
    Star,
    Union,
    Inter,
    Define,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".into(),
            other => format!("`{}`", match other {
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBrace => "{",
                Tok::RBrace => "}",
                Tok::Comma => ",",
                Tok::DotDot => "..",
                Tok::Dot => ".",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Star => "*",
                Tok::Union => "\\/",
                Tok::Inter => "/\\",
                Tok::Define => "+:",
                _ => unreachable!(),
            }),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let err = |line, col, msg: String| ParseError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut adv = |n: usize, i: &mut usize| {
            for _ in 0..n {
                if chars[*i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                *i += 1;
            }
        };
        let next = chars.get(i + 1).copied();
        let tok = match c {
            _ if c.is_whitespace() => {
                adv(1, &mut i);
                continue;
            }
            '%' => {
                while i < chars.len() && chars[i] != '\n' {
                    adv(1, &mut i);
                }
                continue;
            }
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '{' => (Tok::LBrace, 1),
            '}' => (Tok::RBrace, 1),
            ',' => (Tok::Comma, 1),
            '.' if next == Some('.') => (Tok::DotDot, 2),
            '.' => (Tok::Dot, 1),
            '+' if next == Some(':') => (Tok::Define, 2),
            '+' => (Tok::Plus, 1),
            '-' => (Tok::Minus, 1),
            '*' => (Tok::Star, 1),
            '\\' if next == Some('/') => (Tok::Union, 2),
            '/' if next == Some('\\') => (Tok::Inter, 2),
            '\'' => {
                let start = i + 1;
                let end = chars[start..]
                    .iter()
                    .position(|&ch| ch == '\'' || ch == '\n')
                    .map(|p| start + p)
                    .filter(|&p| chars[p] == '\'')
                    .ok_or_else(|| err(tl, tc, "unterminated quoted name".into()))?;
                let name: String = chars[start..end].iter().collect();
                (Tok::Quoted(name), end + 1 - i)
            }
            _ if c.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|ch| ch.is_ascii_digit()).count();
                let text: String = chars[i..i + len].iter().collect();
                let n = text
                    .parse::<i64>()
                    .map_err(|_| err(tl, tc, format!("integer {text} out of range")))?;
                (Tok::Int(n), len)
            }
            _ if c.is_alphabetic() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|ch| ch.is_alphanumeric() || **ch == '_')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
        };
        adv(tok.1, &mut i);
        out.push(Token {
            tok: tok.0,
            line: tl,
            col: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    params: Vec<Param>,
    /// Parameters seen inside `c(..)` / in variable positions.
    used_const: Vec<bool>,
    used_var: Vec<bool>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let t = &self.toks[self.pos];
        Err(ParseError::Syntax {
            line: t.line,
            col: t.col,
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", tok.describe(), self.peek().describe()))
        }
    }

    fn definition(&mut self) -> PResult<IndexicalDef> {
        let name = match self.bump().tok {
            Tok::Ident(s) | Tok::Quoted(s) => s,
            other => {
                self.pos -= 1;
                return self.error(format!("expected a definition name, found {}", other.describe()));
            }
        };
        self.expect(Tok::LParen)?;
        self.params.clear();
        loop {
            match self.bump().tok {
                Tok::Ident(p) => {
                    if self.params.iter().any(|q| q.name == p) {
                        self.pos -= 1;
                        return self.error(format!("duplicate parameter {p}"));
                    }
                    self.params.push(Param {
                        name: p,
                        kind: ParamKind::Var,
                    });
                }
                other => {
                    self.pos -= 1;
                    return self.error(format!("expected a parameter name, found {}", other.describe()));
                }
            }
            match self.bump().tok {
                Tok::Comma => continue,
                Tok::RParen => break,
                other => {
                    self.pos -= 1;
                    return self.error(format!("expected `,` or `)`, found {}", other.describe()));
                }
            }
        }
        self.used_const = vec![false; self.params.len()];
        self.used_var = vec![false; self.params.len()];
        self.expect(Tok::Define)?;
        let mut rules = vec![self.rule()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            rules.push(self.rule()?);
        }
        match self.peek() {
            Tok::Dot => {
                self.bump();
            }
            Tok::Eof => {}
            other => {
                let d = other.describe();
                return self.error(format!("expected `,` or `.` after a rule, found {d}"));
            }
        }
        let mut params = std::mem::take(&mut self.params);
        for (i, p) in params.iter_mut().enumerate() {
            if self.used_const[i] {
                p.kind = ParamKind::Const;
            }
        }
        Ok(IndexicalDef {
            name,
            params,
            rules,
        })
    }

    fn param_ref(&mut self, as_const: bool) -> PResult<ParamIndex> {
        let t = self.bump();
        let Tok::Ident(name) = t.tok else {
            self.pos -= 1;
            return self.error("expected a parameter name");
        };
        let i = self
            .params
            .iter()
            .position(|p| p.name == name)
            .ok_or_else(|| ParseError::UnknownParam {
                line: t.line,
                col: t.col,
                name: name.clone(),
            })?;
        let clash = if as_const {
            self.used_const[i] = true;
            self.used_var[i]
        } else {
            self.used_var[i] = true;
            self.used_const[i]
        };
        if clash {
            return Err(ParseError::ParamKindClash {
                line: t.line,
                col: t.col,
                name,
            });
        }
        Ok(i)
    }

    fn rule(&mut self) -> PResult<Rule> {
        let target = self.param_ref(false)?;
        match self.peek() {
            Tok::Ident(s) if s == "in" => {
                self.bump();
            }
            other => {
                let d = other.describe();
                return self.error(format!("expected `in`, found {d}"));
            }
        }
        let expr = self.range()?;
        Ok(Rule { target, expr })
    }

    fn range(&mut self) -> PResult<RangeExpr> {
        let mut r = self.inter()?;
        while *self.peek() == Tok::Union {
            self.bump();
            r = RangeExpr::Union(Box::new(r), Box::new(self.inter()?));
        }
        Ok(r)
    }

    fn inter(&mut self) -> PResult<RangeExpr> {
        let mut r = self.pointwise()?;
        while *self.peek() == Tok::Inter {
            self.bump();
            r = RangeExpr::Intersect(Box::new(r), Box::new(self.pointwise()?));
        }
        Ok(r)
    }

    fn pointwise(&mut self) -> PResult<RangeExpr> {
        let mut r = self.unary_range()?;
        loop {
            let op = self.peek().clone();
            match op {
                Tok::Plus | Tok::Minus | Tok::Star => {
                    self.bump();
                    let n = self.neg()?;
                    r = match op {
                        Tok::Plus => RangeExpr::PointwiseAdd(Box::new(r), n),
                        Tok::Minus => RangeExpr::PointwiseSub(Box::new(r), n),
                        _ => RangeExpr::PointwiseMul(Box::new(r), n),
                    };
                }
                _ => return Ok(r),
            }
        }
    }

    fn unary_range(&mut self) -> PResult<RangeExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(RangeExpr::Complement(Box::new(self.unary_range()?)));
        }
        self.primary_range()
    }

    fn primary_range(&mut self) -> PResult<RangeExpr> {
        match self.peek().clone() {
            Tok::LBrace => {
                self.bump();
                let mut r = RangeExpr::Singleton(self.term()?);
                while *self.peek() == Tok::Comma {
                    self.bump();
                    r = RangeExpr::Union(Box::new(r), Box::new(RangeExpr::Singleton(self.term()?)));
                }
                self.expect(Tok::RBrace)?;
                Ok(r)
            }
            Tok::Ident(f) if f == "dom" && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let p = self.param_ref(false)?;
                self.expect(Tok::RParen)?;
                Ok(RangeExpr::Dom(p))
            }
            Tok::LParen => {
                // `(term)..term` or `(range)`
                let save = (self.pos, self.used_const.clone(), self.used_var.clone());
                if let Ok(lo) = self.term() {
                    if *self.peek() == Tok::DotDot {
                        self.bump();
                        let hi = self.term()?;
                        return Ok(RangeExpr::Interval(lo, hi));
                    }
                }
                (self.pos, self.used_const, self.used_var) = save;
                self.bump();
                let r = self.range()?;
                self.expect(Tok::RParen)?;
                Ok(r)
            }
            _ => {
                let lo = self.term()?;
                if *self.peek() != Tok::DotDot {
                    return self.error(format!("expected `..`, found {}", self.peek().describe()));
                }
                self.bump();
                let hi = self.term()?;
                Ok(RangeExpr::Interval(lo, hi))
            }
        }
    }

    fn term(&mut self) -> PResult<TermExpr> {
        let mut t = self.factor()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    t = TermExpr::Add(Box::new(t), Box::new(self.factor()?));
                }
                Tok::Minus => {
                    self.bump();
                    t = TermExpr::Sub(Box::new(t), Box::new(self.factor()?));
                }
                _ => return Ok(t),
            }
        }
    }

    fn factor(&mut self) -> PResult<TermExpr> {
        let mut t = self.neg()?;
        while *self.peek() == Tok::Star {
            self.bump();
            t = TermExpr::Mul(Box::new(t), Box::new(self.neg()?));
        }
        Ok(t)
    }

    fn neg(&mut self) -> PResult<TermExpr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(match self.neg()? {
                TermExpr::Int(n) => TermExpr::Int(-n),
                t => TermExpr::Sub(Box::new(TermExpr::Int(0)), Box::new(t)),
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<TermExpr> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(TermExpr::Int(n))
            }
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "inf" => {
                self.bump();
                Ok(TermExpr::Named(BoundConst::Inf))
            }
            Tok::Ident(s) if s == "sup" => {
                self.bump();
                Ok(TermExpr::Named(BoundConst::Sup))
            }
            Tok::Ident(f) if *self.peek_at(1) == Tok::LParen => {
                let ctor: fn(ParamIndex) -> TermExpr = match f.as_str() {
                    "min" => TermExpr::Min,
                    "max" => TermExpr::Max,
                    "val" => TermExpr::Val,
                    "c" => TermExpr::Const,
                    _ => return self.error(format!("unknown term function {f}")),
                };
                self.bump();
                self.bump();
                let p = self.param_ref(f == "c")?;
                self.expect(Tok::RParen)?;
                Ok(ctor(p))
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }
}

/// Parses every definition in `src`.
pub fn parse_indexicals(src: &str) -> Result<Vec<IndexicalDef>, ParseError> {
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        params: Vec::new(),
        used_const: Vec::new(),
        used_var: Vec::new(),
    };
    let mut defs = Vec::new();
    while *p.peek() != Tok::Eof {
        defs.push(p.definition()?);
    }
    Ok(defs)
}

/// Parses exactly one definition.
pub fn parse_indexical(src: &str) -> Result<IndexicalDef, ParseError> {
    let mut defs = parse_indexicals(src)?;
    match defs.len() {
        1 => Ok(defs.pop().expect("one definition")),
        n => Err(ParseError::Syntax {
            line: 1,
            col: 1,
            msg: format!("expected exactly one definition, found {n}"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const IDX_DIFF: &str = "idx_diff(X, Y, I) +:
    X in -{val(Y), val(Y)+c(I), val(Y)-c(I)},
    Y in -{val(X), val(X)-c(I), val(X)+c(I)}.";

    #[test]
    fn parses_the_queens_diff() {
        let def = parse_indexical(IDX_DIFF).unwrap();
        assert_eq!(def.name, "idx_diff");
        assert_eq!(def.rules.len(), 2);
        let kinds: Vec<_> = def.params.iter().map(|p| p.kind).collect();
        assert_eq!(kinds, vec![ParamKind::Var, ParamKind::Var, ParamKind::Const]);
        let RangeExpr::Complement(inner) = &def.rules[0].expr else {
            panic!("expected a complement");
        };
        let expected = RangeExpr::Union(
            Box::new(RangeExpr::Union(
                Box::new(RangeExpr::Singleton(TermExpr::Val(1))),
                Box::new(RangeExpr::Singleton(TermExpr::Add(
                    Box::new(TermExpr::Val(1)),
                    Box::new(TermExpr::Const(2)),
                ))),
            )),
            Box::new(RangeExpr::Singleton(TermExpr::Sub(
                Box::new(TermExpr::Val(1)),
                Box::new(TermExpr::Const(2)),
            ))),
        );
        assert_eq!(**inner, expected);
    }

    #[test]
    fn parses_an_interval_literal() {
        let def = parse_indexical("p(X) +: X in 1..10").unwrap();
        assert_eq!(def.rules.len(), 1);
        assert_eq!(
            def.rules[0].expr,
            RangeExpr::Interval(TermExpr::Int(1), TermExpr::Int(10))
        );
    }

    #[test]
    fn unknown_parameter_is_reported() {
        let err = parse_indexical("p(X,Y) +: X in dom(Z)").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownParam {
                line: 1,
                col: 20,
                name: "Z".into()
            }
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse_indexical("p(X) +:\n  X in 1..").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }), "{err}");
        let err = parse_indexical("p(X) +: X on 1..2").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, col: 11, .. }), "{err}");
    }

    #[test]
    fn const_and_var_use_clash() {
        let err = parse_indexical("p(X,I) +: X in min(I)..c(I)").unwrap_err();
        assert!(matches!(err, ParseError::ParamKindClash { .. }));
    }

    #[test]
    fn precedence_and_parentheses() {
        let def = parse_indexical(
            "p(X,Y,Z) +: X in dom(Y) /\\ 0..max(Z) \\/ (min(Y)+1)..sup, Y in (dom(X) + 1) * 2.",
        )
        .unwrap();
        assert!(matches!(def.rules[0].expr, RangeExpr::Union(..)));
        let RangeExpr::Union(a, _) = &def.rules[0].expr else { unreachable!() };
        assert!(matches!(**a, RangeExpr::Intersect(..)));
        assert!(matches!(def.rules[1].expr, RangeExpr::PointwiseMul(..)));
    }

    #[test]
    fn quoted_names_and_comments() {
        let src = "% library member\n'a<>b+t'(A, B, T) +: A in -{val(B)+c(T)}, B in -{val(A)-c(T)}.\n";
        let def = parse_indexical(src).unwrap();
        assert_eq!(def.name, "a<>b+t");
    }

    #[test]
    fn printing_reparses_to_the_same_definition() {
        for src in [
            IDX_DIFF,
            "p(X,Y,Z) +: X in dom(Y) /\\ 0..max(Z), Y in -(min(X)..max(X)) \\/ {3}.",
            "q(A,B,C,K) +: A in min(B)+min(C)..max(B)+max(C), B in (dom(A) - c(K)) * (-2).",
            "r(X) +: X in (-3)..(2*(4-1)).",
        ] {
            let def = parse_indexical(src).unwrap();
            let printed = def.to_string();
            let again = parse_indexical(&printed).unwrap();
            assert_eq!(again.to_string(), printed);
        }
    }
}
