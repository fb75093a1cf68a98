//! Germ expressions: the textual input language and its AST.
//!
//! Grammar (whitespace insensitive):
//!
//! ```text
//! expr     := term (('+'|'-') term)*
//! term     := factor ('*' factor)*
//! factor   := base ('^' posint)?
//! base     := 'x' | 'lambda' | rational | '(' expr ')' | func '(' expr ')'
//! func     := 'exp' | 'sin' | 'cos' | 'ln1p'
//! rational := int ('/' posint)?
//! ```
//!
//! `int` may carry a sign, so `-3+sin(lambda)` parses while a leading unary
//! minus on a variable (`-x`) does not; write `0-x` or `-1*x` instead.
//! Decimal literals are rejected: every coefficient is an exact rational.
//!
//! The unfolding dialect ([`parse_unfolding`]) additionally accepts the
//! parameters `alpha1 ... alpha9`.

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::vars::{Var, VarList};
use crate::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

/// Analytic building blocks allowed in germ expressions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    /// `ln1p(u) = ln(1 + u)`, defined near the origin.
    Ln1p,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Ln1p => "ln1p",
        }
    }
}

/// Abstract syntax tree of a germ expression.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GermExpression {
    Var(Var),
    Const(Rat),
    Add(Box<GermExpression>, Box<GermExpression>),
    Sub(Box<GermExpression>, Box<GermExpression>),
    Mul(Box<GermExpression>, Box<GermExpression>),
    Pow(Box<GermExpression>, u32),
    Apply(Func, Box<GermExpression>),
}

impl GermExpression {
    pub fn var(v: Var) -> Self {
        GermExpression::Var(v)
    }

    pub fn constant(c: Rat) -> Self {
        GermExpression::Const(c)
    }

    pub fn mul(a: GermExpression, b: GermExpression) -> Self {
        GermExpression::Mul(Box::new(a), Box::new(b))
    }

    pub fn add(a: GermExpression, b: GermExpression) -> Self {
        GermExpression::Add(Box::new(a), Box::new(b))
    }

    /// Whether the expression is free of transcendental function nodes.
    pub fn is_polynomial(&self) -> bool {
        match self {
            GermExpression::Var(_) | GermExpression::Const(_) => true,
            GermExpression::Add(a, b)
            | GermExpression::Sub(a, b)
            | GermExpression::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
            GermExpression::Pow(a, _) => a.is_polynomial(),
            GermExpression::Apply(..) => false,
        }
    }

    /// Expand a function-free expression into a polynomial over `vars`.
    pub fn to_polynomial(&self, vars: &VarList) -> Result<Polynomial> {
        match self {
            GermExpression::Var(v) => {
                if !vars.contains(*v) {
                    return Err(Error::VariableMismatch(format!("{v} not in {vars}")));
                }
                Ok(Polynomial::var_pow(vars.clone(), *v, 1))
            }
            GermExpression::Const(c) => Ok(Polynomial::constant(vars.clone(), c.clone())),
            GermExpression::Add(a, b) => Ok(a.to_polynomial(vars)?.add(&b.to_polynomial(vars)?)),
            GermExpression::Sub(a, b) => Ok(a.to_polynomial(vars)?.sub(&b.to_polynomial(vars)?)),
            GermExpression::Mul(a, b) => Ok(a.to_polynomial(vars)?.mul(&b.to_polynomial(vars)?)),
            GermExpression::Pow(a, k) => {
                if *k > 512 {
                    return Err(Error::Budget(format!(
                        "polynomial exponent {k} exceeds expansion limit"
                    )));
                }
                Ok(a.to_polynomial(vars)?.pow(*k))
            }
            GermExpression::Apply(f, _) => Err(Error::invalid(format!(
                "expression is not polynomial: contains {}",
                f.name()
            ))),
        }
    }

    /// Re-express an exact polynomial as an expression tree, so polynomial
    /// germs can enter every pipeline stage that expects an expression.
    pub fn from_polynomial(p: &Polynomial) -> GermExpression {
        let vars = p.vars();
        let mut acc: Option<GermExpression> = None;
        for t in p.terms() {
            let mut factor = GermExpression::Const(t.coef.clone());
            for (i, &e) in t.mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = GermExpression::Var(vars.0[i]);
                let powed = if e == 1 {
                    base
                } else {
                    GermExpression::Pow(Box::new(base), e)
                };
                factor = GermExpression::mul(factor, powed);
            }
            acc = Some(match acc {
                None => factor,
                Some(prev) => GermExpression::add(prev, factor),
            });
        }
        acc.unwrap_or(GermExpression::Const(Rat::zero()))
    }

    /// Variables that actually occur.
    pub fn variables(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            GermExpression::Var(v) => out.push(*v),
            GermExpression::Const(_) => {}
            GermExpression::Add(a, b)
            | GermExpression::Sub(a, b)
            | GermExpression::Mul(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            GermExpression::Pow(a, _) => a.collect_vars(out),
            GermExpression::Apply(_, a) => a.collect_vars(out),
        }
    }
}

impl fmt::Display for GermExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GermExpression::Var(v) => write!(f, "{v}"),
            GermExpression::Const(c) => {
                if c.denom().is_one() {
                    write!(f, "{}", c.numer())
                } else {
                    write!(f, "{}/{}", c.numer(), c.denom())
                }
            }
            GermExpression::Add(a, b) => write!(f, "{a}+{b}"),
            GermExpression::Sub(a, b) => write!(f, "{a}-{wrapped}", wrapped = WrapSum(b)),
            GermExpression::Mul(a, b) => write!(f, "{}*{}", WrapSum(a), WrapSum(b)),
            GermExpression::Pow(a, k) => match a.as_ref() {
                GermExpression::Var(_) | GermExpression::Const(_) => write!(f, "{a}^{k}"),
                _ => write!(f, "({a})^{k}"),
            },
            GermExpression::Apply(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

/// Parenthesize sums/differences when rendered inside a product.
struct WrapSum<'a>(&'a GermExpression);

impl fmt::Display for WrapSum<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            GermExpression::Add(..) | GermExpression::Sub(..) => write!(f, "({})", self.0),
            other => write!(f, "{other}"),
        }
    }
}

/// Parse a germ expression in the variables `x` and `lambda`.
pub fn parse_germ(input: &str) -> Result<GermExpression> {
    Parser::new(input, false).parse()
}

/// Parse an expression that may also mention `alpha1 ... alpha9`.
pub fn parse_unfolding(input: &str) -> Result<GermExpression> {
    Parser::new(input, true).parse()
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    allow_alpha: bool,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, allow_alpha: bool) -> Self {
        Parser {
            bytes: input.as_bytes(),
            pos: 0,
            allow_alpha,
        }
    }

    fn parse(mut self) -> Result<GermExpression> {
        let e = self.expr()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(e)
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<GermExpression> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = GermExpression::Add(Box::new(acc), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = GermExpression::Sub(Box::new(acc), Box::new(rhs));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<GermExpression> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = GermExpression::Mul(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<GermExpression> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let k = self.posint()?;
            return Ok(GermExpression::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<GermExpression> {
        match self.peek() {
            None => Err(self.err("expected expression")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'-' => self.rational(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(),
            Some(c) => Err(self.err(format!("unexpected character '{}'", c as char))),
        }
    }

    fn ident(&mut self) -> Result<GermExpression> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match word {
            "x" => return Ok(GermExpression::Var(Var::X)),
            "lambda" => return Ok(GermExpression::Var(Var::Lambda)),
            "exp" | "sin" | "cos" | "ln1p" => {
                let func = match word {
                    "exp" => Func::Exp,
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    _ => Func::Ln1p,
                };
                if self.peek() != Some(b'(') {
                    return Err(self.err(format!("expected '(' after {word}")));
                }
                self.pos += 1;
                let arg = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                return Ok(GermExpression::Apply(func, Box::new(arg)));
            }
            _ => {}
        }
        if self.allow_alpha {
            if let Some(rest) = word.strip_prefix("alpha") {
                if let Ok(k) = rest.parse::<u8>() {
                    if (1..=9).contains(&k) {
                        return Ok(GermExpression::Var(Var::Alpha(k)));
                    }
                }
                self.pos = start;
                return Err(self.err(format!(
                    "unfolding parameter out of range in '{word}' (alpha1..alpha9)"
                )));
            }
        }
        self.pos = start;
        Err(self.err(format!("unknown identifier '{word}'")))
    }

    fn posint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected positive integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let value: u32 = text
            .parse()
            .map_err(|_| self.err(format!("integer '{text}' out of range")))?;
        if value == 0 {
            self.pos = start;
            return Err(self.err("exponent must be a positive integer"));
        }
        Ok(value)
    }

    fn rational(&mut self) -> Result<GermExpression> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if digits_start == self.pos {
            self.pos = start;
            return Err(self.err("expected integer"));
        }
        if self.bytes.get(self.pos) == Some(&b'.') {
            return Err(Error::NonRationalLiteral {
                pos: self.pos,
                msg: "decimal literals are not exact; write a fraction like 3/2".into(),
            });
        }
        let numer_text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let numer = BigInt::from_str(numer_text).map_err(|e| self.err(e.to_string()))?;
        let mut denom = BigInt::one();
        // A '/' directly after an integer is part of the rational literal.
        let save = self.pos;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let dstart = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if dstart == self.pos {
                self.pos = save;
                return Err(self.err("expected positive integer denominator"));
            }
            if self.bytes.get(self.pos) == Some(&b'.') {
                return Err(Error::NonRationalLiteral {
                    pos: self.pos,
                    msg: "decimal literals are not exact; write a fraction like 3/2".into(),
                });
            }
            let denom_text = std::str::from_utf8(&self.bytes[dstart..self.pos]).unwrap();
            denom = BigInt::from_str(denom_text).map_err(|e| self.err(e.to_string()))?;
            if denom.is_zero() {
                self.pos = dstart;
                return Err(self.err("denominator must be positive"));
            }
        }
        Ok(GermExpression::Const(Rat::new(numer, denom)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, rat};

    #[test]
    fn parses_paper_germ() {
        let e = parse_germ("exp(x^2)+2*cos(x)-3+sin(lambda)").unwrap();
        let shown = e.to_string();
        // Round-trip through the printer.
        assert_eq!(parse_germ(&shown).unwrap(), e);
    }

    #[test]
    fn rational_literals() {
        assert_eq!(
            parse_germ("7/12").unwrap(),
            GermExpression::Const(rat(7, 12))
        );
        assert_eq!(parse_germ("-3").unwrap(), GermExpression::Const(int(-3)));
        // '/' binds only to integer literals: x/2 is a syntax error.
        assert!(parse_germ("x/2").is_err());
    }

    #[test]
    fn rejects_non_rational_literals() {
        match parse_germ("1.5*x") {
            Err(Error::NonRationalLiteral { .. }) => {}
            other => panic!("expected NonRationalLiteral, got {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_identifiers_with_position() {
        match parse_germ("x + y") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
        // Unfolding parameters are rejected by the strict germ dialect...
        assert!(parse_germ("x + alpha1").is_err());
        // ...but accepted by the unfolding dialect.
        assert_eq!(
            parse_unfolding("alpha2").unwrap(),
            GermExpression::Var(Var::Alpha(2))
        );
        assert!(parse_unfolding("alpha0").is_err());
    }

    #[test]
    fn no_unary_minus_on_variables() {
        assert!(parse_germ("-x").is_err());
        assert!(parse_germ("0-x").is_ok());
        assert!(parse_germ("-1*x").is_ok());
    }

    #[test]
    fn polynomial_expansion() {
        let vars = VarList::xl();
        let e = parse_germ("(x+lambda)^2 - x^2 - 2*x*lambda").unwrap();
        let p = e.to_polynomial(&vars).unwrap();
        assert_eq!(p, Polynomial::var_pow(vars.clone(), Var::Lambda, 2));
        assert!(parse_germ("sin(x)").unwrap().to_polynomial(&vars).is_err());
    }

    #[test]
    fn exponent_edge_cases() {
        assert!(parse_germ("x^0").is_err());
        assert!(parse_germ("x^").is_err());
        assert!(parse_germ("x^-2").is_err());
        assert!(parse_germ("((x)").is_err());
        assert!(parse_germ("").is_err());
    }
}
