//! Parsing initial states from text and choosing a backend for them.
//!
//! Accepted syntax is ordinary complex arithmetic over `i` and `√2`:
//! `"1,0"`, `"1/sqrt2,i/sqrt2"`, `"0.6,0.8i"`, `"(1+i)/2, (1-i)/2"`.
//! Decimals are read as exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::{Backend, ComplexF, ComplexSqrt2, DyadicGaussian, RealSqrt2, Scalar};
use crate::engine::QubitState;
use crate::error::{Result, WalkError};

/// Normalization tolerance for states entered as text and run in floats.
pub const FLOAT_INPUT_TOL: f64 = 1e-9;

struct Parser<'a> {
    input: &'a str,
    chars: Vec<char>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Self { input, chars: input.chars().filter(|c| !c.is_whitespace()).collect(), pos: 0 }
    }

    fn fail<T>(&self, reason: impl Into<String>) -> Result<T> {
        Err(WalkError::Parse { input: self.input.to_string(), reason: reason.into() })
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, word: &str) -> bool {
        let len = word.chars().count();
        if self.chars.len() >= self.pos + len && self.chars[self.pos..self.pos + len].iter().copied().eq(word.chars()) {
            self.pos += len;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<ComplexSqrt2> {
        let mut acc = self.term()?;
        loop {
            if self.eat("+") {
                acc = acc + self.term()?;
            } else if self.eat("-") {
                acc = acc - self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ComplexSqrt2> {
        let mut acc = self.unary()?;
        loop {
            if self.eat("*") {
                acc = acc * self.unary()?;
            } else if self.eat("/") {
                let d = self.unary()?;
                match d.inverse() {
                    Some(inv) => acc = acc * inv,
                    None => return self.fail("division by zero"),
                }
            } else if self.starts_atom() {
                acc = acc * self.atom()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<ComplexSqrt2> {
        if self.eat("-") {
            Ok(-self.unary()?)
        } else if self.eat("+") {
            self.unary()
        } else {
            self.atom()
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || matches!(c, '.' | 'i' | 's' | '√' | '('))
    }

    fn atom(&mut self) -> Result<ComplexSqrt2> {
        if self.eat("(") {
            let v = self.expr()?;
            if !self.eat(")") {
                return self.fail("missing `)`");
            }
            Ok(v)
        } else if self.eat("sqrt(2)") || self.eat("sqrt2") || self.eat("√2") {
            Ok(ComplexSqrt2::from_real(RealSqrt2::sqrt2()))
        } else if self.eat("i") {
            Ok(ComplexSqrt2::imag_unit())
        } else if matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.number()
        } else {
            match self.peek() {
                Some(c) => self.fail(format!("unexpected `{c}`")),
                None => self.fail("unexpected end of input"),
            }
        }
    }

    fn number(&mut self) -> Result<ComplexSqrt2> {
        let start = self.pos;
        let mut digits = String::new();
        let mut frac_len = 0usize;
        let mut seen_dot = false;
        while let Some(c) = self.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                frac_len += usize::from(seen_dot);
            } else if c == '.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if digits.is_empty() {
            self.pos = start;
            return self.fail("lone `.`");
        }
        let mut exp: i64 = 0;
        if matches!(self.peek(), Some('e' | 'E')) {
            self.pos += 1;
            let neg = self.eat("-");
            if !neg {
                self.eat("+");
            }
            let mut e = String::new();
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                e.push(c);
                self.pos += 1;
            }
            exp = match e.parse::<i64>() {
                Ok(v) if v <= 4096 => if neg { -v } else { v },
                _ => return self.fail("bad exponent"),
            };
        }
        let mantissa: BigInt = digits.parse().expect("ascii digits");
        let shift = exp - frac_len as i64;
        let ten = BigInt::from(10);
        let q = if shift >= 0 {
            BigRational::from_integer(mantissa * ten.pow(shift as u32))
        } else {
            BigRational::new(mantissa, ten.pow((-shift) as u32))
        };
        Ok(ComplexSqrt2::from_real(RealSqrt2::rational(q)))
    }
}

/// Parses one scalar expression into Q(√2, i).
pub fn parse_scalar(text: &str) -> Result<ComplexSqrt2> {
    let mut p = Parser::new(text);
    if p.chars.is_empty() {
        return p.fail("empty expression");
    }
    let v = p.expr()?;
    if p.pos != p.chars.len() {
        return p.fail(format!("trailing input at `{}`", p.chars[p.pos..].iter().collect::<String>()));
    }
    Ok(v)
}

/// Parses `"alpha,beta"` without checking normalization.
pub fn parse_pair(text: &str) -> Result<(ComplexSqrt2, ComplexSqrt2)> {
    let mut depth = 0i32;
    let mut split = None;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                if split.is_some() {
                    return Err(WalkError::Parse { input: text.into(), reason: "expected exactly two components".into() });
                }
                split = Some(i);
            }
            _ => {}
        }
    }
    let Some(i) = split else {
        return Err(WalkError::Parse { input: text.into(), reason: "expected `alpha,beta`".into() });
    };
    Ok((parse_scalar(&text[..i])?, parse_scalar(&text[i + 1..])?))
}

/// An initial state in whichever backend holds it.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyQubit {
    Exact(QubitState<DyadicGaussian>),
    Field(QubitState<ComplexSqrt2>),
    Float(QubitState<ComplexF>),
}

impl AnyQubit {
    pub fn backend(&self) -> Backend {
        match self {
            AnyQubit::Exact(_) => Backend::Exact,
            AnyQubit::Field(_) => Backend::Field,
            AnyQubit::Float(_) => Backend::Float,
        }
    }

    pub fn render(&self) -> String {
        match self {
            AnyQubit::Exact(s) => s.render(),
            AnyQubit::Field(s) => s.render(),
            AnyQubit::Float(s) => s.render(),
        }
    }
}

fn exact_state(alpha: &ComplexSqrt2, beta: &ComplexSqrt2) -> Result<QubitState<DyadicGaussian>> {
    let not_rep = || WalkError::NotRepresentable(format!("({alpha}, {beta})"));
    let (a, b) = (alpha.to_dyadic().ok_or_else(not_rep)?, beta.to_dyadic().ok_or_else(not_rep)?);
    QubitState::new(a, b)
}

fn float_state(alpha: &ComplexSqrt2, beta: &ComplexSqrt2) -> Result<QubitState<ComplexF>> {
    let (a, b) = (alpha.to_complex(), beta.to_complex());
    let norm = a.norm_sqr() + b.norm_sqr();
    if (norm - 1.0).abs() > FLOAT_INPUT_TOL {
        return Err(WalkError::NotNormalized(crate::arith::render_f64(norm)));
    }
    let r = norm.sqrt();
    QubitState::new(a / r, b / r)
}

/// Builds a state in the requested backend. With no request the exact
/// backend is used when the amplitudes allow it, and floats otherwise.
pub fn qubit(alpha: &ComplexSqrt2, beta: &ComplexSqrt2, backend: Option<Backend>) -> Result<AnyQubit> {
    match backend {
        Some(Backend::Exact) => exact_state(alpha, beta).map(AnyQubit::Exact),
        Some(Backend::Field) => QubitState::new(alpha.clone(), beta.clone()).map(AnyQubit::Field),
        Some(Backend::Float) => float_state(alpha, beta).map(AnyQubit::Float),
        None => match exact_state(alpha, beta) {
            Ok(s) => Ok(AnyQubit::Exact(s)),
            Err(_) => float_state(alpha, beta).map(AnyQubit::Float),
        },
    }
}

pub fn parse_qubit(text: &str, backend: Option<Backend>) -> Result<AnyQubit> {
    let (alpha, beta) = parse_pair(text)?;
    qubit(&alpha, &beta, backend)
}
