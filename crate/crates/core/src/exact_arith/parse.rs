use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{ArithError, Frac, Poly};

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

type PFrac = Frac<Poly>;

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> ArithError {
        ArithError::Parse { input: self.src.to_string(), pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<PFrac, ArithError> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<PFrac, ArithError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == b'*' { acc * rhs } else { acc.div(&rhs).ok_or_else(|| self.err("division by zero"))? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<PFrac, ArithError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<PFrac, ArithError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let digits = self.digits();
            if digits.is_empty() {
                return Err(self.err("expected exponent"));
            }
            let e: u32 = digits.parse().map_err(|_| self.err("exponent too large"))?;
            let mut out = PFrac::one();
            for _ in 0..e {
                out = out * base.clone();
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<PFrac, ArithError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits();
                let n: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok(PFrac::from(BigRational::from_integer(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let b = self.src.as_bytes()[self.pos];
                    if b.is_ascii_alphanumeric() || b == b'_' {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                Ok(PFrac::from_num(Poly::var(&self.src[start..self.pos])))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses a literal that may divide by non-constant polynomials.
pub fn parse_frac(src: &str) -> Result<Frac<Poly>, ArithError> {
    let mut p = Parser { src, pos: 0 };
    let v = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

/// Parses a polynomial literal; division only by nonzero constants.
pub fn parse_poly(src: &str) -> Result<Poly, ArithError> {
    let f = parse_frac(src)?;
    let den = f.den().as_constant().ok_or_else(|| ArithError::Parse {
        input: src.to_string(),
        pos: 0,
        msg: "division by a non-constant polynomial".into(),
    })?;
    Ok(f.num().scale(&den.recip()))
}

/// Parses a rational constant such as `-3/4`.
pub fn parse_rational(src: &str) -> Result<BigRational, ArithError> {
    parse_poly(src)?.as_constant().ok_or_else(|| ArithError::Parse {
        input: src.to_string(),
        pos: 0,
        msg: "expected a constant".into(),
    })
}

impl std::str::FromStr for Poly {
    type Err = ArithError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

/// Normalizes a fraction literal whose denominator is constant into a Poly.
pub fn frac_to_poly(f: &Frac<Poly>) -> Option<Poly> {
    let d = f.den().as_constant()?;
    if d.is_zero() {
        return None;
    }
    Some(f.num().scale(&d.recip()))
}
