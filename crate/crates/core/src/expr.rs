//! Text form of algebra elements.
//!
//! ```text
//! expr     := ['-'] term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := rational | name
//! rational := integer | integer '/' positive-integer
//! ```
//!
//! Names are generator identifiers or presentation aliases (e.g. `k` for
//! quaternions). Whitespace is insignificant. Example: `1/2 + 3*i*j - 2*k`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{normal_form, Algebra, AlgebraElement, AlgebraError};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
}

fn parse_error(offset: usize, message: impl Into<String>) -> AlgebraError {
    AlgebraError::Parse {
        offset,
        message: message.into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>, AlgebraError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut p = 0;
    while p < chars.len() {
        let (off, c) = chars[p];
        match c {
            c if c.is_whitespace() => p += 1,
            '+' => {
                out.push((off, Token::Plus));
                p += 1;
            }
            '-' => {
                out.push((off, Token::Minus));
                p += 1;
            }
            '*' => {
                out.push((off, Token::Star));
                p += 1;
            }
            '/' => {
                out.push((off, Token::Slash));
                p += 1;
            }
            c if c.is_ascii_digit() => {
                let start = p;
                while p < chars.len() && chars[p].1.is_ascii_digit() {
                    p += 1;
                }
                let digits: String = chars[start..p].iter().map(|(_, c)| c).collect();
                out.push((off, Token::Int(digits.parse().expect("ascii digits"))));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = p;
                while p < chars.len() && (chars[p].1.is_ascii_alphanumeric() || chars[p].1 == '_') {
                    p += 1;
                }
                let name: String = chars[start..p].iter().map(|(_, c)| c).collect();
                out.push((off, Token::Name(name)));
            }
            other => return Err(parse_error(off, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

struct Parser<'a, C> {
    alg: &'a Arc<Algebra<C>>,
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl<C: Scalar> Parser<'_, C> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn expr(&mut self) -> Result<AlgebraElement<C>, AlgebraError> {
        let mut acc = AlgebraElement::zero(self.alg);
        let mut negate = false;
        if self.peek() == Some(&Token::Minus) {
            negate = true;
            self.pos += 1;
        } else if self.peek() == Some(&Token::Plus) {
            self.pos += 1;
        }
        loop {
            let term = self.term()?;
            acc = if negate { &acc - &term } else { &acc + &term };
            match self.peek() {
                None => return Ok(acc),
                Some(Token::Plus) => negate = false,
                Some(Token::Minus) => negate = true,
                Some(_) => return Err(parse_error(self.offset(), "expected `+` or `-`")),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<AlgebraElement<C>, AlgebraError> {
        let mut coeff = Rational::from_integer(1.into());
        let mut word = Vec::new();
        loop {
            let offset = self.offset();
            match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
                Some(Token::Int(num)) => {
                    self.pos += 1;
                    let mut value = Rational::from_integer(num);
                    if self.peek() == Some(&Token::Slash) {
                        self.pos += 1;
                        let den_offset = self.offset();
                        match self.tokens.get(self.pos).map(|(_, t)| t.clone()) {
                            Some(Token::Int(den)) if !den.is_zero() => {
                                self.pos += 1;
                                value /= Rational::from_integer(den);
                            }
                            _ => return Err(parse_error(den_offset, "expected a positive denominator")),
                        }
                    }
                    coeff *= value;
                }
                Some(Token::Name(name)) => {
                    self.pos += 1;
                    let w = self
                        .alg
                        .presentation()
                        .lookup(&name)
                        .ok_or(AlgebraError::UnknownGenerator(name))?;
                    word.extend(w);
                }
                _ => return Err(parse_error(offset, "expected a number or generator name")),
            }
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(normal_form(self.alg, &word, C::from_rational(&coeff)))
    }
}

/// Parses an element in the expression grammar.
pub fn parse_element<C: Scalar>(alg: &Arc<Algebra<C>>, src: &str) -> Result<AlgebraElement<C>, AlgebraError> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(parse_error(0, "empty expression"));
    }
    let mut parser = Parser {
        alg,
        tokens,
        pos: 0,
        end: src.len(),
    };
    parser.expr()
}

fn is_negative<C: Scalar>(c: &C) -> bool {
    match c.to_rational() {
        Some(q) => q.is_negative(),
        None => c.to_f64() < 0.0,
    }
}

pub(crate) fn write_element<C: Scalar>(e: &AlgebraElement<C>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_zero() {
        return write!(f, "0");
    }
    let p = e.algebra().presentation();
    for (idx, (&m, c)) in e.terms().iter().enumerate() {
        let neg = is_negative(c);
        let magnitude = if neg { -c.clone() } else { c.clone() };
        match (idx, neg) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        if m == 0 {
            write!(f, "{magnitude}")?;
        } else if magnitude.is_one() {
            write!(f, "{}", p.monomial_name(m))?;
        } else {
            write!(f, "{magnitude}*{}", p.monomial_name(m))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Presentation;
    use proptest::prelude::*;

    fn quat() -> Arc<Algebra<Rational>> {
        Algebra::new(Presentation::quaternion())
    }

    #[test]
    fn parses_spec_example() {
        let h = quat();
        let e = parse_element(&h, "1/2 + 3*i*j - 2*k").unwrap();
        assert_eq!(e.to_string(), "1/2 + i*j");
        let i = parse_element(&h, "i").unwrap();
        let j = parse_element(&h, " j ").unwrap();
        assert_eq!(parse_element(&h, "j*i").unwrap(), -(&i * &j));
        assert_eq!(parse_element(&h, "-i").unwrap(), -&i);
        assert_eq!(parse_element(&h, "0").unwrap().to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        let h = quat();
        assert_eq!(
            parse_element(&h, "2*z"),
            Err(AlgebraError::UnknownGenerator("z".into()))
        );
        assert!(matches!(parse_element(&h, "1/0"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(parse_element(&h, "i +"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(
            parse_element(&h, "i $ j"),
            Err(AlgebraError::Parse { offset: 2, .. })
        ));
        assert!(matches!(parse_element(&h, ""), Err(AlgebraError::Parse { .. })));
    }

    proptest! {
        #[test]
        fn display_round_trips(coeffs in proptest::collection::vec((-20i64..20, 1i64..6), 4)) {
            let h = quat();
            let mut e = AlgebraElement::zero(&h);
            for (m, (num, den)) in coeffs.into_iter().enumerate() {
                let c = Rational::new(num.into(), den.into());
                e = e + AlgebraElement::monomial(&h, m as u32, c);
            }
            let back = parse_element(&h, &e.to_string()).unwrap();
            prop_assert_eq!(back, e);
        }
    }
}
