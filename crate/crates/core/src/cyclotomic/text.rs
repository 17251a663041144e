//! Textual form `c0 + c1*z + c2*z^2 ... @n`.
//!
//! `z` stands for `ζ_n`. Coefficients are integers or `p/q` fractions.
//! Without an `@n` suffix the conductor is 1, which only admits rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Cyclotomic, Rational};
use crate::error::{Error, Result};

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        f.write_str("z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, "@{}", self.conductor())
    }
}

impl FromStr for Cyclotomic {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_cyclotomic(s)
    }
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.s[start..self.pos]).ok()?.parse().ok()
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at byte {} of cyclotomic literal", self.pos))
    }
}

/// Parses the textual form produced by `Display`.
pub fn parse_cyclotomic(input: &str) -> Result<Cyclotomic> {
    let (body, conductor) = match input.rsplit_once('@') {
        Some((b, n)) => {
            let n: u32 = n.trim().parse().map_err(|_| Error::Parse(format!("bad conductor in {input:?}")))?;
            (b, n)
        }
        None => (input, 1),
    };
    let mut cur = Cursor { s: body.as_bytes(), pos: 0 };
    let mut terms: Vec<(i64, Rational)> = Vec::new();
    let mut first = true;
    loop {
        if cur.peek().is_none() {
            if first {
                return Err(Error::Parse("empty cyclotomic literal".into()));
            }
            break;
        }
        let mut sign = BigInt::one();
        let mut saw_sign = false;
        while let Some(b @ (b'+' | b'-')) = cur.peek() {
            cur.pos += 1;
            saw_sign = true;
            if b == b'-' {
                sign = -sign;
            }
        }
        if !first && !saw_sign {
            return Err(cur.err("expected '+' or '-'"));
        }
        first = false;

        let coef = match cur.digits() {
            Some(numer) => {
                let denom = if cur.eat(b'/') {
                    cur.digits().ok_or_else(|| cur.err("expected denominator"))?
                } else {
                    BigInt::one()
                };
                if denom.is_zero() {
                    return Err(cur.err("zero denominator"));
                }
                Some(Rational::new(numer, denom))
            }
            None => None,
        };
        let has_star = coef.is_some() && cur.eat(b'*');
        let exponent = if cur.eat(b'z') {
            if cur.eat(b'^') {
                let neg = cur.eat(b'-');
                let e = cur.digits().ok_or_else(|| cur.err("expected exponent"))?;
                let e: i64 = e.try_into().map_err(|_| cur.err("exponent too large"))?;
                if neg {
                    -e
                } else {
                    e
                }
            } else {
                1
            }
        } else {
            if has_star || coef.is_none() {
                return Err(cur.err("expected 'z'"));
            }
            0
        };
        if exponent != 0 && conductor == 1 && input.rfind('@').is_none() {
            return Err(Error::Parse(format!("literal {input:?} uses z without an @n conductor")));
        }
        let c = coef.unwrap_or_else(Rational::one) * Rational::from_integer(sign);
        terms.push((exponent, c));
    }
    Cyclotomic::from_terms(conductor, &terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_examples() {
        let z8 = |k| Cyclotomic::root_of_unity(8, k).unwrap();
        assert_eq!(z8(0).to_string(), "1@8");
        assert_eq!(z8(4).to_string(), "-1@8");
        assert_eq!(Cyclotomic::zero(5).unwrap().to_string(), "0@5");
        let half = Rational::new(1.into(), 2.into());
        let s = (&z8(1) - &z8(3)).scale(&half);
        assert_eq!(s.to_string(), "1/2*z - 1/2*z^3@8");
        assert_eq!(z8(7).to_string(), "-z^3@8");
    }

    #[test]
    fn parse_examples() {
        let a: Cyclotomic = "1/2*z - 1/2*z^3 @8".parse().unwrap();
        assert_eq!(a.to_string(), "1/2*z - 1/2*z^3@8");
        let b: Cyclotomic = "z^-1@8".parse().unwrap();
        assert_eq!(b, Cyclotomic::root_of_unity(8, 7).unwrap());
        let c: Cyclotomic = "3/4".parse().unwrap();
        assert_eq!(c.conductor(), 1);
        let d: Cyclotomic = "-z + -2*z^2@5".parse().unwrap();
        assert_eq!(d.to_string(), "-z - 2*z^2@5");
        let e: Cyclotomic = "z^4@4".parse().unwrap();
        assert!(e.is_one());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "z", "1/0", "1 2", "2*@8", "z^@8", "1@x", "1@0"] {
            assert!(bad.parse::<Cyclotomic>().is_err(), "{bad:?} should fail");
        }
        assert!(matches!("1 2".parse::<Cyclotomic>(), Err(Error::Parse(_))));
    }
}
