//! Expression syntax for scalar literals, point maps and polynomials.
//!
//! Grammar: sums and products of numbers (`3`, `1/2`, `0.25`), the imaginary
//! unit `i`, roots of unity `zeta(N)`, named variables, parentheses and integer
//! powers (`x^-1`, `q^2`).

use crate::scalars::{Field, Scalar, ScalarError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(BigRational),
    /// Decimal literal, kept for the approximate backend.
    Dec(String),
    Var(String),
    Zeta(u32),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr, ExprError> {
        let toks = lex(src)?;
        let mut p = Parser { toks, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn int(v: i64) -> Expr {
        Expr::Num(BigRational::from_integer(BigInt::from(v)))
    }

    /// Variables referenced (including `i` when used as the imaginary unit).
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.collect_vars(out),
            _ => {}
        }
    }

    /// Smallest conductor containing every root of unity mentioned, assuming
    /// `i` is the imaginary unit unless it is a bound variable.
    pub fn required_conductor(&self, bound: &dyn Fn(&str) -> bool) -> u32 {
        match self {
            Expr::Zeta(n) => *n,
            Expr::Var(v) if v == "i" && !bound(v) => 4,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.required_conductor(bound).lcm(&b.required_conductor(bound))
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.required_conductor(bound),
            _ => 1,
        }
    }

    /// Evaluate with variables looked up in `env`.
    pub fn eval(&self, field: &Field, env: &dyn Fn(&str) -> Option<Scalar>) -> Result<Scalar, ExprError> {
        Ok(match self {
            Expr::Num(r) => field.rational(r),
            Expr::Dec(s) => decimal(field, s)?,
            Expr::Var(v) => match env(v) {
                Some(x) => field.adopt(&x)?,
                None if v == "i" => field.imag_unit()?,
                None => return Err(ExprError::UnknownVariable(v.clone())),
            },
            Expr::Zeta(n) => field.root_of_unity(*n, 1)?,
            Expr::Add(a, b) => a.eval(field, env)? + b.eval(field, env)?,
            Expr::Sub(a, b) => a.eval(field, env)? - b.eval(field, env)?,
            Expr::Mul(a, b) => a.eval(field, env)? * b.eval(field, env)?,
            Expr::Div(a, b) => a.eval(field, env)?.div(&b.eval(field, env)?)?,
            Expr::Neg(a) => -a.eval(field, env)?,
            Expr::Pow(a, k) => a.eval(field, env)?.pow(*k)?,
        })
    }

    /// Evaluate a closed expression.
    pub fn eval_const(&self, field: &Field) -> Result<Scalar, ExprError> {
        self.eval(field, &|_| None)
    }
}

/// Parse and evaluate a scalar literal.
pub fn parse_scalar(field: &Field, src: &str) -> Result<Scalar, ExprError> {
    Expr::parse(src)?.eval_const(field)
}

fn decimal(field: &Field, s: &str) -> Result<Scalar, ExprError> {
    if field.is_exact() {
        let r = parse_decimal_exact(s).ok_or_else(|| ExprError::Parse { pos: 0, msg: format!("bad number {s}") })?;
        Ok(field.rational(&r))
    } else {
        let v: f64 = s.parse().map_err(|_| ExprError::Parse { pos: 0, msg: format!("bad number {s}") })?;
        Ok(field.complex(v, 0.0)?)
    }
}

fn parse_decimal_exact(s: &str) -> Option<BigRational> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = match mant.find('.') {
        Some(k) => (&mant[..k], &mant[k + 1..]),
        None => (mant, ""),
    };
    let digits: BigInt = format!("{}{}", if int.is_empty() { "0" } else { int }, frac).parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    })
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "({}/{})", r.numer(), r.denom())
                }
            }
            Expr::Dec(s) => write!(f, "{s}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Zeta(n) => write!(f, "zeta({n})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, k) => write!(f, "{a}^({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Dec(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() || (c == '.' && k + 1 < chars.len() && chars[k + 1].is_ascii_digit()) {
            let start = k;
            while k < chars.len() && (chars[k].is_ascii_digit() || chars[k] == '.') {
                k += 1;
            }
            if k < chars.len()
                && (chars[k] == 'e' || chars[k] == 'E')
                && k + 1 < chars.len()
                && (chars[k + 1].is_ascii_digit() || chars[k + 1] == '-' || chars[k + 1] == '+')
            {
                k += 2;
                while k < chars.len() && chars[k].is_ascii_digit() {
                    k += 1;
                }
            }
            let s: String = chars[start..k].iter().collect();
            if s.contains(['.', 'e', 'E']) {
                out.push((start, Tok::Dec(s)));
            } else {
                out.push((start, Tok::Int(s.parse().unwrap())));
            }
        } else if c.is_alphabetic() || c == '_' {
            let start = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((start, Tok::Ident(chars[start..k].iter().collect())));
        } else if "+-*/^(),".contains(c) {
            out.push((k, Tok::Op(c)));
            k += 1;
        } else {
            return Err(ExprError::Parse { pos: k, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn err(&self, msg: &str) -> ExprError {
        let pos = self.toks.get(self.pos).map(|t| t.0).unwrap_or(usize::MAX);
        ExprError::Parse { pos, msg: msg.to_string() }
    }

    fn peek_op(&self, c: char) -> bool {
        matches!(self.toks.get(self.pos), Some((_, Tok::Op(o))) if *o == c)
    }

    fn expect_op(&mut self, c: char) -> Result<(), ExprError> {
        if self.peek_op(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{c}`")))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.peek_op('+') {
                self.pos += 1;
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.peek_op('-') {
                self.pos += 1;
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.peek_op('*') {
                self.pos += 1;
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek_op('/') {
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek_op('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.peek_op('+') {
            self.pos += 1;
            return self.unary();
        }
        let base = self.atom()?;
        if self.peek_op('^') {
            self.pos += 1;
            let k = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        let paren = self.peek_op('(');
        if paren {
            self.pos += 1;
        }
        let mut sign = 1;
        if self.peek_op('-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek_op('+') {
            self.pos += 1;
        }
        let k = match self.toks.get(self.pos) {
            Some((_, Tok::Int(v))) => v.to_i64().ok_or_else(|| self.err("exponent too large"))?,
            _ => return Err(self.err("expected integer exponent")),
        };
        self.pos += 1;
        if paren {
            self.expect_op(')')?;
        }
        Ok(sign * k)
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let tok = self.toks.get(self.pos).cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.pos += 1;
        match tok.1 {
            Tok::Int(v) => Ok(Expr::Num(BigRational::from_integer(v))),
            Tok::Dec(s) => Ok(Expr::Dec(s)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                if name == "zeta" && self.peek_op('(') {
                    self.pos += 1;
                    let n = match self.toks.get(self.pos) {
                        Some((_, Tok::Int(v))) => v.to_u32().filter(|n| !n.is_zero()),
                        _ => None,
                    }
                    .ok_or_else(|| self.err("zeta expects a positive integer"))?;
                    self.pos += 1;
                    self.expect_op(')')?;
                    Ok(Expr::Zeta(n))
                } else {
                    Ok(Expr::Var(name))
                }
            }
            Tok::Op(c) => {
                self.pos -= 1;
                Err(self.err(&format!("unexpected `{c}`")))
            }
        }
    }
}

/// Is the expression free of the given variable?
pub fn is_free_of(e: &Expr, var: &str) -> bool {
    !e.variables().contains(var)
}

/// Rational constant 1, handy for building expressions programmatically.
pub fn one() -> Expr {
    Expr::Num(BigRational::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literals() {
        let k = Field::cyclotomic(8);
        let z = k.root_of_unity(8, 1).unwrap();
        assert_eq!(parse_scalar(&k, "1/2").unwrap(), k.ratio(1, 2));
        assert_eq!(parse_scalar(&k, "zeta(8)^3").unwrap(), z.pow(3).unwrap());
        assert_eq!(parse_scalar(&k, "2*i - 1").unwrap(), &k.int(2) * &k.imag_unit().unwrap() - k.one());
        assert_eq!(parse_scalar(&k, "0.25").unwrap(), k.ratio(1, 4));
        assert_eq!(parse_scalar(&k, "zeta(4)^-1").unwrap(), -k.imag_unit().unwrap());
        assert_eq!(parse_scalar(&k, "-(1+i)^2").unwrap(), -(&k.int(2) * &k.imag_unit().unwrap()));
    }

    #[test]
    fn display_round_trip() {
        let k = Field::cyclotomic(12);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(1);
        for _ in 0..50 {
            let a = k.random(&mut rng, 7);
            assert_eq!(parse_scalar(&k, &a.to_string()).unwrap(), a);
        }
        let ap = Field::approx(1e-12);
        let a = ap.complex(0.5, -0.25).unwrap();
        assert_eq!(parse_scalar(&ap, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn errors() {
        let k = Field::cyclotomic(3);
        assert!(matches!(parse_scalar(&k, "i"), Err(ExprError::Scalar(_))));
        assert!(matches!(parse_scalar(&k, "1 +"), Err(ExprError::Parse { .. })));
        assert!(matches!(parse_scalar(&k, "h"), Err(ExprError::UnknownVariable(_))));
        assert!(matches!(parse_scalar(&k, "1/0"), Err(ExprError::Scalar(ScalarError::DivisionByZero))));
    }

    #[test]
    fn conductor_hint() {
        let e = Expr::parse("zeta(3) + i*h").unwrap();
        assert_eq!(e.required_conductor(&|_| false), 12);
        assert_eq!(e.variables().into_iter().collect::<Vec<_>>(), vec!["h", "i"]);
    }
}
