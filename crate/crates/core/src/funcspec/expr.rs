//! A small expression language for piecewise functions.
//!
//! ```text
//! expr    := or
//! or      := and ("||" and)*
//! and     := cmp ("&&" cmp)*
//! cmp     := sum (("==" | "!=" | "<" | "<=" | ">" | ">=") sum)?
//! sum     := product (("+" | "-") product)*
//! product := unary (("*" | "/") unary)*
//! unary   := "-" unary | power
//! power   := atom ("^" ["-"] integer)?
//! atom    := number | x1..xd | "(" expr ")"
//!          | exp(e) | abs(e) | sqrt(e) | min(e, e, ...) | max(e, e, ...)
//!          | piecewise(cond, branch, branch)
//! branch  := expr | inf
//! ```
//!
//! Positions in error messages are 1-based character offsets.

use std::fmt;

use crate::error::{Error, Result};

use super::FunctionSpec;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Tok {
    Num(f64),
    Ident,
    LParen,
    RParen,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
    End,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    text: String,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v: f64 = text
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::Syntax { pos, msg: format!("malformed number `{text}`") })?;
            out.push(Token { tok: Tok::Num(v), text, pos });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident, text: chars[start..i].iter().collect(), pos });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match two.as_str() {
            "==" => (Tok::Eq, 2),
            "!=" => (Tok::Ne, 2),
            "<=" => (Tok::Le, 2),
            ">=" => (Tok::Ge, 2),
            "&&" => (Tok::And, 2),
            "||" => (Tok::Or, 2),
            _ => match c {
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                ',' => (Tok::Comma, 1),
                '+' => (Tok::Plus, 1),
                '-' => (Tok::Minus, 1),
                '*' => (Tok::Star, 1),
                '/' => (Tok::Slash, 1),
                '^' => (Tok::Caret, 1),
                '<' => (Tok::Lt, 1),
                '>' => (Tok::Gt, 1),
                _ => return Err(Error::Syntax { pos, msg: format!("unexpected character `{c}`") }),
            },
        };
        out.push(Token { tok, text: chars[i..i + len].iter().collect(), pos });
        i += len;
    }
    out.push(Token { tok: Tok::End, text: String::new(), pos: chars.len() + 1 });
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Exp,
    Abs,
    Sqrt,
    Min,
    Max,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(f64),
    Inf,
    Var(usize),
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Pow(Box<Node>, i32),
    Call(Func, Vec<Node>),
    Piecewise(Box<Node>, Box<Node>, Box<Node>),
    Cmp(CmpOp, Box<Node>, Box<Node>),
    And(Box<Node>, Box<Node>),
    Or(Box<Node>, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ty {
    Num,
    Bool,
}

/// A parsed, type-checked expression over `x1..xd`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    dim: usize,
}

struct Parser {
    toks: Vec<Token>,
    at: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.at]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.at].clone();
        if t.tok != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected<T>(&self) -> Result<T> {
        let t = self.peek();
        let msg =
            if t.tok == Tok::End { "unexpected end of input".to_string() } else { format!("unexpected `{}`", t.text) };
        Err(Error::Syntax { pos: t.pos, msg })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek().tok == tok {
            self.next();
            Ok(())
        } else {
            let t = self.peek();
            Err(Error::Syntax { pos: t.pos, msg: format!("expected {what}") })
        }
    }

    fn want(&self, got: (Node, Ty, usize), ty: Ty) -> Result<Node> {
        if got.1 == ty {
            Ok(got.0)
        } else {
            let msg = match ty {
                Ty::Num => "expected a numeric expression, found a condition",
                Ty::Bool => "expected a condition, found a numeric expression",
            };
            Err(Error::Syntax { pos: got.2, msg: msg.to_string() })
        }
    }

    fn or(&mut self) -> Result<(Node, Ty, usize)> {
        let mut lhs = self.and()?;
        while self.peek().tok == Tok::Or {
            self.next();
            let pos = lhs.2;
            let a = self.want(lhs, Ty::Bool)?;
            let rhs = self.and()?;
            let b = self.want(rhs, Ty::Bool)?;
            lhs = (Node::Or(Box::new(a), Box::new(b)), Ty::Bool, pos);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<(Node, Ty, usize)> {
        let mut lhs = self.cmp()?;
        while self.peek().tok == Tok::And {
            self.next();
            let pos = lhs.2;
            let a = self.want(lhs, Ty::Bool)?;
            let rhs = self.cmp()?;
            let b = self.want(rhs, Ty::Bool)?;
            lhs = (Node::And(Box::new(a), Box::new(b)), Ty::Bool, pos);
        }
        Ok(lhs)
    }

    fn cmp(&mut self) -> Result<(Node, Ty, usize)> {
        let lhs = self.sum()?;
        let op = match self.peek().tok {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Ok(lhs),
        };
        self.next();
        let pos = lhs.2;
        let a = self.want(lhs, Ty::Num)?;
        let rhs = self.sum()?;
        let b = self.want(rhs, Ty::Num)?;
        if matches!(self.peek().tok, Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge) {
            return Err(Error::Syntax { pos: self.peek().pos, msg: "comparisons cannot be chained".into() });
        }
        Ok((Node::Cmp(op, Box::new(a), Box::new(b)), Ty::Bool, pos))
    }

    fn sum(&mut self) -> Result<(Node, Ty, usize)> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let pos = lhs.2;
            let a = self.want(lhs, Ty::Num)?;
            let rhs = self.product()?;
            let b = self.want(rhs, Ty::Num)?;
            lhs = (Node::Bin(op, Box::new(a), Box::new(b)), Ty::Num, pos);
        }
    }

    fn product(&mut self) -> Result<(Node, Ty, usize)> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let pos = lhs.2;
            let a = self.want(lhs, Ty::Num)?;
            let rhs = self.unary()?;
            let b = self.want(rhs, Ty::Num)?;
            lhs = (Node::Bin(op, Box::new(a), Box::new(b)), Ty::Num, pos);
        }
    }

    fn unary(&mut self) -> Result<(Node, Ty, usize)> {
        if self.peek().tok == Tok::Minus {
            let pos = self.next().pos;
            let inner = self.unary()?;
            let a = self.want(inner, Ty::Num)?;
            return Ok((Node::Neg(Box::new(a)), Ty::Num, pos));
        }
        self.power()
    }

    fn power(&mut self) -> Result<(Node, Ty, usize)> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.next();
        let pos = base.2;
        let b = self.want(base, Ty::Num)?;
        let negative = if self.peek().tok == Tok::Minus {
            self.next();
            true
        } else {
            false
        };
        let t = self.next();
        let k: i32 = match t.tok {
            Tok::Num(_) => t
                .text
                .parse()
                .map_err(|_| Error::Syntax { pos: t.pos, msg: "exponent must be an integer literal".into() })?,
            _ => return Err(Error::Syntax { pos: t.pos, msg: "exponent must be an integer literal".into() }),
        };
        if self.peek().tok == Tok::Caret {
            return Err(Error::Syntax {
                pos: self.peek().pos,
                msg: "chained `^` is ambiguous; add parentheses".into(),
            });
        }
        Ok((Node::Pow(Box::new(b), if negative { -k } else { k }), Ty::Num, pos))
    }

    fn args(&mut self, allow_inf_branches: bool) -> Result<Vec<(Node, Ty, usize)>> {
        self.expect(Tok::LParen, "`(`")?;
        let mut out = Vec::new();
        loop {
            let branch_slot = allow_inf_branches && !out.is_empty();
            let t = self.peek().clone();
            let next_tok = self.toks.get(self.at + 1).map(|t| t.tok);
            if branch_slot
                && t.tok == Tok::Ident
                && t.text == "inf"
                && matches!(next_tok, Some(Tok::Comma | Tok::RParen))
            {
                self.next();
                out.push((Node::Inf, Ty::Num, t.pos));
            } else {
                out.push(self.or()?);
            }
            match self.peek().tok {
                Tok::Comma => {
                    self.next();
                }
                Tok::RParen => {
                    self.next();
                    return Ok(out);
                }
                _ => return Err(Error::Syntax { pos: self.peek().pos, msg: "expected `,` or `)`".into() }),
            }
        }
    }

    fn atom(&mut self) -> Result<(Node, Ty, usize)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(v) => {
                self.next();
                Ok((Node::Num(v), Ty::Num, t.pos))
            }
            Tok::LParen => {
                self.next();
                let inner = self.or()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok((inner.0, inner.1, t.pos))
            }
            Tok::Ident => {
                self.next();
                let name = t.text.as_str();
                if let Some(idx) = name.strip_prefix('x').and_then(|s| s.parse::<usize>().ok()) {
                    if idx == 0 || name[1..].starts_with('0') {
                        return Err(Error::UnknownIdentifier { name: name.to_string(), pos: t.pos });
                    }
                    if idx > self.dim {
                        return Err(Error::VariableOutOfRange { index: idx, dim: self.dim, pos: t.pos });
                    }
                    return Ok((Node::Var(idx - 1), Ty::Num, t.pos));
                }
                if name == "inf" {
                    return Err(Error::Syntax {
                        pos: t.pos,
                        msg: "`inf` is only allowed as a piecewise branch".into(),
                    });
                }
                let func = match name {
                    "exp" => Some(Func::Exp),
                    "abs" => Some(Func::Abs),
                    "sqrt" => Some(Func::Sqrt),
                    "min" => Some(Func::Min),
                    "max" => Some(Func::Max),
                    "piecewise" => None,
                    _ => return Err(Error::UnknownIdentifier { name: name.to_string(), pos: t.pos }),
                };
                if self.peek().tok != Tok::LParen {
                    return Err(Error::Syntax { pos: self.peek().pos, msg: format!("expected `(` after `{name}`") });
                }
                let args = self.args(func.is_none())?;
                let arity_err = |msg: &str| Err(Error::Syntax { pos: t.pos, msg: format!("`{name}` {msg}") });
                match func {
                    None => {
                        if args.len() != 3 {
                            return arity_err("takes exactly 3 arguments");
                        }
                        let mut it = args.into_iter();
                        let c = self.want(it.next().unwrap(), Ty::Bool)?;
                        let a = self.want(it.next().unwrap(), Ty::Num)?;
                        let b = self.want(it.next().unwrap(), Ty::Num)?;
                        Ok((Node::Piecewise(Box::new(c), Box::new(a), Box::new(b)), Ty::Num, t.pos))
                    }
                    Some(f) => {
                        let variadic = matches!(f, Func::Min | Func::Max);
                        if variadic && args.len() < 2 {
                            return arity_err("takes at least 2 arguments");
                        }
                        if !variadic && args.len() != 1 {
                            return arity_err("takes exactly 1 argument");
                        }
                        let nodes = args.into_iter().map(|a| self.want(a, Ty::Num)).collect::<Result<Vec<_>>>()?;
                        Ok((Node::Call(f, nodes), Ty::Num, t.pos))
                    }
                }
            }
            _ => self.unexpected(),
        }
    }
}

fn ipow(x: f64, k: i32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k.unsigned_abs() {
        acc *= x;
    }
    acc
}

fn checked(v: f64, inputs_finite: bool, what: &str) -> Result<f64> {
    if v.is_nan() {
        return Err(Error::Eval(format!("{what} is undefined")));
    }
    if !v.is_finite() && inputs_finite {
        return Err(Error::Eval(format!("{what} overflowed")));
    }
    Ok(v)
}

impl Node {
    fn eval(&self, x: &[f64]) -> Result<f64> {
        match self {
            Node::Num(v) => Ok(*v),
            Node::Inf => Ok(f64::INFINITY),
            Node::Var(i) => Ok(x[*i]),
            Node::Neg(a) => Ok(-a.eval(x)?),
            Node::Bin(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                let fin = a.is_finite() && b.is_finite();
                match op {
                    BinOp::Add => checked(a + b, fin, "sum"),
                    BinOp::Sub => checked(a - b, fin, "difference"),
                    BinOp::Mul => checked(a * b, fin, "product"),
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Eval("division by zero".into()));
                        }
                        checked(a / b, fin, "quotient")
                    }
                }
            }
            Node::Pow(a, k) => {
                let base = a.eval(x)?;
                if *k < 0 {
                    if base == 0.0 {
                        return Err(Error::Eval("division by zero".into()));
                    }
                    checked(1.0 / ipow(base, *k), base.is_finite(), "power")
                } else {
                    checked(ipow(base, *k), base.is_finite(), "power")
                }
            }
            Node::Call(f, args) => {
                let vals = args.iter().map(|a| a.eval(x)).collect::<Result<Vec<_>>>()?;
                let fin = vals.iter().all(|v| v.is_finite());
                match f {
                    Func::Exp => checked(vals[0].exp(), fin, "exp"),
                    Func::Abs => Ok(vals[0].abs()),
                    Func::Sqrt => {
                        if vals[0] < 0.0 {
                            return Err(Error::Eval("sqrt of a negative number".into()));
                        }
                        Ok(vals[0].sqrt())
                    }
                    Func::Min => Ok(vals.iter().copied().fold(f64::INFINITY, f64::min)),
                    Func::Max => Ok(vals.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
                }
            }
            Node::Piecewise(c, a, b) => {
                if c.test(x)? {
                    a.eval(x)
                } else {
                    b.eval(x)
                }
            }
            Node::Cmp(..) | Node::And(..) | Node::Or(..) => unreachable!("type-checked"),
        }
    }

    fn test(&self, x: &[f64]) -> Result<bool> {
        match self {
            Node::Cmp(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                Ok(match op {
                    CmpOp::Eq => a == b,
                    CmpOp::Ne => a != b,
                    CmpOp::Lt => a < b,
                    CmpOp::Le => a <= b,
                    CmpOp::Gt => a > b,
                    CmpOp::Ge => a >= b,
                })
            }
            Node::And(a, b) => Ok(a.test(x)? && b.test(x)?),
            Node::Or(a, b) => Ok(a.test(x)? || b.test(x)?),
            _ => unreachable!("type-checked"),
        }
    }

    fn render(&self, out: &mut String) {
        let bin = |out: &mut String, a: &Node, op: &str, b: &Node| {
            out.push('(');
            a.render(out);
            out.push_str(op);
            b.render(out);
            out.push(')');
        };
        match self {
            Node::Num(v) => out.push_str(&format!("{v:?}")),
            Node::Inf => out.push_str("inf"),
            Node::Var(i) => out.push_str(&format!("x{}", i + 1)),
            Node::Neg(a) => {
                out.push_str("(-");
                a.render(out);
                out.push(')');
            }
            Node::Bin(op, a, b) => {
                let s = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => " * ",
                    BinOp::Div => " / ",
                };
                bin(out, a, s, b)
            }
            Node::Pow(a, k) => {
                out.push('(');
                a.render(out);
                out.push_str(&format!("^{k})"));
            }
            Node::Call(f, args) => {
                out.push_str(match f {
                    Func::Exp => "exp(",
                    Func::Abs => "abs(",
                    Func::Sqrt => "sqrt(",
                    Func::Min => "min(",
                    Func::Max => "max(",
                });
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    a.render(out);
                }
                out.push(')');
            }
            Node::Piecewise(c, a, b) => {
                out.push_str("piecewise(");
                c.render(out);
                out.push_str(", ");
                a.render(out);
                out.push_str(", ");
                b.render(out);
                out.push(')');
            }
            Node::Cmp(op, a, b) => {
                let s = match op {
                    CmpOp::Eq => " == ",
                    CmpOp::Ne => " != ",
                    CmpOp::Lt => " < ",
                    CmpOp::Le => " <= ",
                    CmpOp::Gt => " > ",
                    CmpOp::Ge => " >= ",
                };
                bin(out, a, s, b)
            }
            Node::And(a, b) => bin(out, a, " && ", b),
            Node::Or(a, b) => bin(out, a, " || ", b),
        }
    }
}

impl Expr {
    pub fn parse(source: &str, dim: usize) -> Result<Self> {
        if source.trim().is_empty() {
            return Err(Error::Syntax { pos: 1, msg: "empty expression".into() });
        }
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        let mut p = Parser { toks: lex(source)?, at: 0, dim };
        let top = p.or()?;
        if p.peek().tok != Tok::End {
            return p.unexpected();
        }
        let root = p.want(top, Ty::Num)?;
        Ok(Expr { root, dim })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Raw value; `+inf` only arises from an `inf` branch.
    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.len() });
        }
        let v = self.root.eval(x)?;
        if v == f64::NEG_INFINITY {
            return Err(Error::NegInfFunctionValue);
        }
        Ok(v)
    }
}

impl fmt::Display for Expr {
    /// Fully parenthesised source that parses back to the same expression.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        self.root.render(&mut s);
        f.write_str(&s)
    }
}

/// Parses `source` into a function of `dim` variables.
pub fn parse_function(source: &str, dim: usize) -> Result<FunctionSpec> {
    let expr = Expr::parse(source, dim)?;
    let e = expr.clone();
    Ok(FunctionSpec::new(dim, move |x| e.eval(x))?.with_source(expr))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extreal::ExtReal;

    fn val(src: &str, dim: usize, x: &[f64]) -> Result<f64> {
        Expr::parse(src, dim)?.eval(x)
    }

    #[test]
    fn spec_examples() {
        let f = parse_function("piecewise(x2 == x1^2, -(x2^4), 0)", 2).unwrap();
        assert_eq!(f.evaluate(&[1.0, 1.0]).unwrap(), ExtReal::Finite(-1.0));
        assert_eq!(f.evaluate(&[1.0, 0.0]).unwrap(), ExtReal::Finite(0.0));
        let g = parse_function("x1^2 + x2^2", 2).unwrap();
        assert_eq!(g.evaluate(&[3.0, 4.0]).unwrap(), ExtReal::Finite(25.0));
        assert!(matches!(parse_function("x1 +* 2", 1), Err(Error::Syntax { pos: 5, .. })));
    }

    #[test]
    fn precedence() {
        assert_eq!(val("-x1^2", 1, &[3.0]).unwrap(), -9.0);
        assert_eq!(val("2 + 3 * x1 - 4 / 2", 1, &[2.0]).unwrap(), 6.0);
        assert_eq!(val("x1^-2", 1, &[2.0]).unwrap(), 0.25);
        assert_eq!(val("min(x1, 3, -1) + max(x1, 0)", 1, &[2.0]).unwrap(), 1.0);
        assert_eq!(val("piecewise(x1 > 0 && x1 < 1 || x1 == 5, 1, 0)", 1, &[5.0]).unwrap(), 1.0);
        assert_eq!(val("1.5e-1 * 2", 1, &[0.0]).unwrap(), 0.3);
    }

    #[test]
    fn identifier_errors() {
        assert!(matches!(Expr::parse("x3", 2), Err(Error::VariableOutOfRange { index: 3, dim: 2, pos: 1 })));
        assert!(matches!(Expr::parse("1 + y", 1), Err(Error::UnknownIdentifier { pos: 5, .. })));
        assert!(matches!(Expr::parse("x0", 1), Err(Error::UnknownIdentifier { .. })));
        assert!(matches!(Expr::parse("foo(1)", 1), Err(Error::UnknownIdentifier { .. })));
    }

    #[test]
    fn type_and_shape_errors() {
        assert!(Expr::parse("x1 < 2", 1).is_err());
        assert!(Expr::parse("piecewise(x1, 1, 2)", 1).is_err());
        assert!(Expr::parse("x1 + inf", 1).is_err());
        assert!(Expr::parse("piecewise(inf > 0, 1, 2)", 1).is_err());
        assert!(Expr::parse("x1^2^2", 1).is_err());
        assert!(Expr::parse("x1^1.5", 1).is_err());
        assert!(Expr::parse("min(x1)", 1).is_err());
        assert!(Expr::parse("exp(x1, 2)", 1).is_err());
        assert!(Expr::parse("(x1 + 1", 1).is_err());
        assert!(Expr::parse("1 < x1 < 2", 1).is_err());
        assert!(Expr::parse("   ", 1).is_err());
    }

    #[test]
    fn inf_branches_and_evaluation_errors() {
        let ind = Expr::parse("piecewise(x1 >= 0, 0, inf)", 1).unwrap();
        assert_eq!(ind.eval(&[-1.0]).unwrap(), f64::INFINITY);
        assert_eq!(ind.eval(&[2.0]).unwrap(), 0.0);
        assert!(val("1 / x1", 1, &[0.0]).is_err());
        assert!(val("exp(x1)", 1, &[1000.0]).is_err());
        assert!(val("sqrt(x1)", 1, &[-1.0]).is_err());
        assert!(val("-piecewise(x1 > 0, inf, 0)", 1, &[1.0]).is_err());
        assert!(val("0 * piecewise(x1 > 0, inf, 0)", 1, &[1.0]).is_err());
    }

    #[test]
    fn render_round_trip() {
        for src in [
            "piecewise(x2 == x1^2, -(x2^4), 0)",
            "-exp(-1/x1^2) + abs(x1 - 0.1) * sqrt(x1^2 + 1e-3)",
            "piecewise(x1 >= 0 && x1 != 3 || x1 < -2, min(x1, 2, x1^-1), inf)",
        ] {
            let e = Expr::parse(src, 2).unwrap();
            let back = Expr::parse(&e.to_string(), 2).unwrap();
            assert_eq!(e, back, "{src} -> {e}");
        }
    }
}
