//! Text format for models.
//!
//! ```text
//! % comment
//! var x in 1..3;
//! var y in 1..3;
//! x #\= y;
//! x + 2*y #=< 7;
//! solve minimize x + y;
//! ```
//!
//! Relations use `#=`, `#\=`, `#<`, `#=<`, `#>`, `#>=`; expressions use
//! integers, declared names, `+`, `-`, `*` and parentheses. The `solve`
//! line is optional and defaults to `solve satisfy;`.

use std::path::Path;

use thiserror::Error;

use crate::model::{Expr, ModelVar, Rel, RelOp};

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: undeclared variable {name}")]
    Undeclared { line: usize, col: usize, name: String },
    #[error("{line}:{col}: variable {name} declared twice")]
    Redeclared { line: usize, col: usize, name: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Objective {
    #[default]
    Satisfy,
    Minimize(Expr),
    Maximize(Expr),
}

/// A parsed model. Variable `i` of the expressions is `decls[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModelFile {
    pub decls: Vec<Decl>,
    pub rels: Vec<Rel>,
    pub objective: Objective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    DotDot,
    Semi,
    LParen,
    RParen,
    Plus,
    Minus,
    Star,
    Rel(RelOp),
    Eof,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn err(&self, msg: impl Into<String>) -> ModelError {
        ModelError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn peek_byte(&self, k: usize) -> Option<u8> {
        self.src.get(self.pos + k).copied()
    }

    fn bump(&mut self) {
        if self.src[self.pos] == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        self.pos += 1;
    }

    fn skip_blank(&mut self) {
        while let Some(c) = self.peek_byte(0) {
            if c.is_ascii_whitespace() {
                self.bump();
            } else if c == b'%' {
                while self.peek_byte(0).is_some_and(|c| c != b'\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    /// Next token with its position.
    fn next(&mut self) -> Result<(Tok, usize, usize), ModelError> {
        self.skip_blank();
        let (line, col) = (self.line, self.col);
        let Some(c) = self.peek_byte(0) else {
            return Ok((Tok::Eof, line, col));
        };
        let tok = if c.is_ascii_alphabetic() || c == b'_' {
            let start = self.pos;
            while self.peek_byte(0).is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_') {
                self.bump();
            }
            Tok::Ident(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
        } else if c.is_ascii_digit() {
            let start = self.pos;
            while self.peek_byte(0).is_some_and(|c| c.is_ascii_digit()) {
                self.bump();
            }
            let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
            Tok::Int(text.parse().map_err(|_| self.err(format!("integer {text} is too large")))?)
        } else {
            let ops: [(&str, Tok); 13] = [
                ("#\\=", Tok::Rel(RelOp::Ne)),
                ("#=<", Tok::Rel(RelOp::Le)),
                ("#>=", Tok::Rel(RelOp::Ge)),
                ("#=", Tok::Rel(RelOp::Eq)),
                ("#<", Tok::Rel(RelOp::Lt)),
                ("#>", Tok::Rel(RelOp::Gt)),
                ("..", Tok::DotDot),
                (";", Tok::Semi),
                ("(", Tok::LParen),
                (")", Tok::RParen),
                ("+", Tok::Plus),
                ("-", Tok::Minus),
                ("*", Tok::Star),
            ];
            let rest = &self.src[self.pos..];
            let Some((text, tok)) = ops.into_iter().find(|(t, _)| rest.starts_with(t.as_bytes())) else {
                return Err(self.err(format!("unexpected character {:?}", c as char)));
            };
            for _ in 0..text.len() {
                self.bump();
            }
            tok
        };
        Ok((tok, line, col))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    line: usize,
    col: usize,
    decls: Vec<Decl>,
}

impl<'a> Parser<'a> {
    fn advance(&mut self) -> Result<(), ModelError> {
        let (tok, line, col) = self.lex.next()?;
        self.tok = tok;
        self.line = line;
        self.col = col;
        Ok(())
    }

    fn err(&self, msg: impl Into<String>) -> ModelError {
        ModelError::Syntax {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ModelError> {
        if self.tok != t {
            return Err(self.err(format!("expected {what}")));
        }
        self.advance()
    }

    fn signed_int(&mut self) -> Result<i64, ModelError> {
        let neg = self.tok == Tok::Minus;
        if neg {
            self.advance()?;
        }
        let Tok::Int(n) = self.tok else {
            return Err(self.err("expected an integer"));
        };
        self.advance()?;
        Ok(if neg { -n } else { n })
    }

    fn var_decl(&mut self) -> Result<(), ModelError> {
        let (line, col) = (self.line, self.col);
        let Tok::Ident(name) = self.tok.clone() else {
            return Err(self.err("expected a variable name"));
        };
        if self.decls.iter().any(|d| d.name == name) {
            return Err(ModelError::Redeclared { line, col, name });
        }
        self.advance()?;
        self.expect(Tok::Ident("in".into()), "'in'")?;
        let lo = self.signed_int()?;
        self.expect(Tok::DotDot, "'..'")?;
        let hi = self.signed_int()?;
        self.expect(Tok::Semi, "';'")?;
        self.decls.push(Decl { name, lo, hi });
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ModelError> {
        let mut e = self.product()?;
        loop {
            match self.tok {
                Tok::Plus => {
                    self.advance()?;
                    e = e + self.product()?;
                }
                Tok::Minus => {
                    self.advance()?;
                    e = e - self.product()?;
                }
                _ => return Ok(e),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ModelError> {
        let mut e = self.unary()?;
        while self.tok == Tok::Star {
            self.advance()?;
            e = e * self.unary()?;
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<Expr, ModelError> {
        if self.tok == Tok::Minus {
            self.advance()?;
            return Ok(match self.unary()? {
                Expr::Int(n) => Expr::Int(-n),
                e => Expr::Int(0) - e,
            });
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Expr, ModelError> {
        match self.tok.clone() {
            Tok::Int(n) => {
                self.advance()?;
                Ok(Expr::Int(n))
            }
            Tok::Ident(name) => {
                let Some(i) = self.decls.iter().position(|d| d.name == name) else {
                    return Err(ModelError::Undeclared {
                        line: self.line,
                        col: self.col,
                        name,
                    });
                };
                self.advance()?;
                Ok(Expr::Var(ModelVar(i as u32)))
            }
            Tok::LParen => {
                self.advance()?;
                let e = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(e)
            }
            _ => Err(self.err("expected an expression")),
        }
    }

    fn file(mut self) -> Result<ModelFile, ModelError> {
        let mut rels = Vec::new();
        let mut objective = None;
        loop {
            match &self.tok {
                Tok::Eof => break,
                _ if objective.is_some() => return Err(self.err("nothing may follow the solve line")),
                Tok::Ident(k) if k == "var" => {
                    self.advance()?;
                    self.var_decl()?;
                }
                Tok::Ident(k) if k == "solve" => {
                    self.advance()?;
                    let Tok::Ident(kind) = self.tok.clone() else {
                        return Err(self.err("expected satisfy, minimize or maximize"));
                    };
                    self.advance()?;
                    objective = Some(match kind.as_str() {
                        "satisfy" => Objective::Satisfy,
                        "minimize" => Objective::Minimize(self.expr()?),
                        "maximize" => Objective::Maximize(self.expr()?),
                        _ => return Err(self.err("expected satisfy, minimize or maximize")),
                    });
                    self.expect(Tok::Semi, "';'")?;
                }
                _ => {
                    let lhs = self.expr()?;
                    let Tok::Rel(op) = self.tok else {
                        return Err(self.err("expected a relation operator"));
                    };
                    self.advance()?;
                    let rhs = self.expr()?;
                    self.expect(Tok::Semi, "';'")?;
                    rels.push(Rel { op, lhs, rhs });
                }
            }
        }
        Ok(ModelFile {
            decls: self.decls,
            rels,
            objective: objective.unwrap_or_default(),
        })
    }
}

/// Parses model text.
pub fn parse_model_str(src: &str) -> Result<ModelFile, ModelError> {
    let mut p = Parser {
        lex: Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        },
        tok: Tok::Eof,
        line: 1,
        col: 1,
        decls: Vec::new(),
    };
    p.advance()?;
    p.file()
}

/// Reads and parses a model file.
pub fn parse_model(path: impl AsRef<Path>) -> Result<ModelFile, ModelError> {
    let path = path.as_ref();
    let src = std::fs::read_to_string(path).map_err(|source| ModelError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_model_str(&src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_and_relations() {
        let m = parse_model_str("var x in 1..3; var y in 1..3; x #\\= y; solve satisfy;").unwrap();
        assert_eq!(m.decls.len(), 2);
        assert_eq!(m.rels.len(), 1);
        assert_eq!(m.rels[0].op, RelOp::Ne);
        assert_eq!(m.objective, Objective::Satisfy);
    }

    #[test]
    fn undeclared_name() {
        let e = parse_model_str("var x in 1..3;\nx #< z;").unwrap_err();
        assert!(matches!(e, ModelError::Undeclared { line: 2, col: 6, ref name } if name == "z"));
    }

    #[test]
    fn objective_expression() {
        let m = parse_model_str("var x in 1..3; var y in 1..3; solve minimize x+y;").unwrap();
        let x = ModelVar(0);
        let y = ModelVar(1);
        assert_eq!(m.objective, Objective::Minimize(x + y));
    }

    #[test]
    fn operators_and_comments() {
        let src = "% two vars\nvar a in -2..5; var b in 0..9;\n a*2 - (b+1) #>= -3; a #=< b; a #> 0; a #= 1; b #< 9;";
        let m = parse_model_str(src).unwrap();
        assert_eq!(m.decls[0], Decl { name: "a".into(), lo: -2, hi: 5 });
        let ops: Vec<_> = m.rels.iter().map(|r| r.op).collect();
        assert_eq!(ops, vec![RelOp::Ge, RelOp::Le, RelOp::Gt, RelOp::Eq, RelOp::Lt]);
    }

    #[test]
    fn syntax_errors_have_positions() {
        let e = parse_model_str("var x in 1..3;\nx #= ;").unwrap_err();
        assert!(matches!(e, ModelError::Syntax { line: 2, col: 6, .. }), "{e}");
        assert!(matches!(
            parse_model_str("var x in 1..3; var x in 1..2;").unwrap_err(),
            ModelError::Redeclared { .. }
        ));
        assert!(parse_model_str("solve satisfy; var x in 1..2;").is_err());
    }
}
