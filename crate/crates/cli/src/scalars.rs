//! Text form of exact scalars: rationals, decimals, `i`, and `sqrt(d)`
//! combined with `+ - * /`. This is the grammar used by newform files,
//! character tables and report output.

use e7lift_core::scalar::{Int, Rational, Scalar};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseScalarError {
    #[error("unexpected character {0:?} at offset {1}")]
    Unexpected(char, usize),
    #[error("unexpected end of input")]
    Eof,
    #[error("malformed number {0:?}")]
    BadNumber(String),
    #[error("sqrt argument must be a rational")]
    SqrtOfIrrational,
    #[error("division by zero")]
    DivisionByZero,
    #[error("trailing input at offset {0}")]
    Trailing(usize),
}

/// Parses an exact-scalar expression such as `-3/4`, `1.25`, `i`,
/// `sqrt(-3)/2`, or `(1 + sqrt(5))/2`.
pub fn parse_scalar(input: &str) -> Result<Scalar, ParseScalarError> {
    let mut p = Parser {
        chars: input.char_indices().collect(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(ParseScalarError::Trailing(p.chars[p.pos].0));
    }
    Ok(v)
}

/// Parses a plain rational (integer, `p/q`, or decimal) — the coefficient
/// format of newform files.
pub fn parse_rational(input: &str) -> Result<Rational, ParseScalarError> {
    let s = parse_scalar(input)?;
    s.as_rational()
        .ok_or_else(|| ParseScalarError::BadNumber(input.to_string()))
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, want: char) -> Result<(), ParseScalarError> {
        match self.bump() {
            Some(c) if c == want => Ok(()),
            Some(c) => Err(ParseScalarError::Unexpected(c, self.offset())),
            None => Err(ParseScalarError::Eof),
        }
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos.saturating_sub(1))
            .map(|&(i, _)| i)
            .unwrap_or(0)
    }

    fn expr(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ParseScalarError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some('/') => {
                    self.bump();
                    let d = self.factor()?;
                    if d.is_zero() {
                        return Err(ParseScalarError::DivisionByZero);
                    }
                    acc = &acc * &d.inv();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Scalar, ParseScalarError> {
        match self.peek() {
            Some('-') => {
                self.bump();
                Ok(-self.factor()?)
            }
            Some('+') => {
                self.bump();
                self.factor()
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Scalar, ParseScalarError> {
        match self.peek() {
            Some('(') => {
                self.bump();
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some('i') | Some('s') => {
                let word = self.ident();
                match word.as_str() {
                    "i" => Ok(Scalar::i()),
                    "sqrt" => {
                        self.expect('(')?;
                        let arg = self.expr()?;
                        self.expect(')')?;
                        let q = arg
                            .as_rational()
                            .ok_or(ParseScalarError::SqrtOfIrrational)?;
                        Ok(Scalar::sqrt_rational(&q))
                    }
                    other => Err(ParseScalarError::BadNumber(other.to_string())),
                }
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) => Err(ParseScalarError::Unexpected(c, self.offset())),
            None => Err(ParseScalarError::Eof),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let mut out = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_ascii_alphabetic() {
                out.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        out
    }

    fn number(&mut self) -> Result<Scalar, ParseScalarError> {
        self.skip_ws();
        let mut digits = String::new();
        let mut frac = String::new();
        let mut seen_dot = false;
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if c.is_ascii_digit() {
                if seen_dot {
                    frac.push(c);
                } else {
                    digits.push(c);
                }
                self.pos += 1;
            } else if c == '.' && !seen_dot {
                seen_dot = true;
                self.pos += 1;
            } else {
                break;
            }
        }
        if digits.is_empty() && frac.is_empty() {
            return Err(ParseScalarError::BadNumber("empty".into()));
        }
        let int_part: Int = if digits.is_empty() {
            Int::zero()
        } else {
            digits
                .parse()
                .map_err(|_| ParseScalarError::BadNumber(digits.clone()))?
        };
        let mut value = Rational::from_integer(int_part);
        if !frac.is_empty() {
            let num: Int = frac
                .parse()
                .map_err(|_| ParseScalarError::BadNumber(frac.clone()))?;
            let den = Int::from(10u32).pow(frac.len() as u32);
            value += Rational::new(num, den);
        }
        Ok(Scalar::from_rational(value))
    }
}

/// Rational to the `p/q` string form used in JSON output.
pub fn rational_string(q: &Rational) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use e7lift_core::scalar::rat;

    #[test]
    fn parses_rationals_and_decimals() {
        assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_rational("1.25").unwrap(), rat(5, 4));
        assert_eq!(parse_rational("17").unwrap(), rat(17, 1));
        assert_eq!(parse_rational("0.5").unwrap(), rat(1, 2));
    }

    #[test]
    fn parses_radicals() {
        let v = parse_scalar("sqrt(-3)/2").unwrap();
        assert_eq!(v, Scalar::sqrt_int(-3) * Scalar::from_rational(rat(1, 2)));
        let golden = parse_scalar("(1 + sqrt(5))/2").unwrap();
        assert_eq!(
            golden,
            (Scalar::one() + Scalar::sqrt_int(5)) * Scalar::from_rational(rat(1, 2))
        );
        assert_eq!(parse_scalar("i*i").unwrap(), Scalar::from_int(-1));
    }

    #[test]
    fn round_trips_display() {
        for s in ["1/2 + 3*sqrt(2)", "sqrt(-1)", "-7/3", "2 - sqrt(5)"] {
            let v = parse_scalar(s).unwrap();
            let again = parse_scalar(&v.to_string()).unwrap();
            assert_eq!(v, again, "string {}", s);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_scalar("sqrt(i)").is_err());
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("3..4").is_err());
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("2 2").is_err());
    }
}
