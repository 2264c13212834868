//! Text syntax for binary forms.
//!
//! Sums, differences, products (explicit `*` or juxtaposition), integer
//! powers and rational constants in `x` and `y`, e.g. `(x-2y)^3*(x+y)`,
//! `x^2 - 3/2*x*y` or `2x^3y + y^4`. The result must be homogeneous.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::poly::BinaryForm;
use crate::rat::Rat;
use crate::{Error, Result};

/// Sparse polynomial: `(deg_x, deg_y) -> coefficient`.
#[derive(Clone, Debug, PartialEq)]
struct Sparse(BTreeMap<(usize, usize), Rat>);

impl Sparse {
    fn constant(c: Rat) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((0, 0), c);
        }
        Sparse(m)
    }

    fn var(x: bool) -> Self {
        let mut m = BTreeMap::new();
        m.insert(if x { (1, 0) } else { (0, 1) }, Rat::one());
        Sparse(m)
    }

    fn add(mut self, other: Sparse, sign: i32) -> Self {
        for (k, v) in other.0 {
            let e = self.0.entry(k).or_insert_with(Rat::zero);
            if sign < 0 {
                *e -= v;
            } else {
                *e += v;
            }
        }
        self.0.retain(|_, v| !v.is_zero());
        self
    }

    fn mul(&self, other: &Sparse) -> Self {
        let mut out: BTreeMap<(usize, usize), Rat> = BTreeMap::new();
        for ((a, b), u) in &self.0 {
            for ((c, d), v) in &other.0 {
                *out.entry((a + c, b + d)).or_insert_with(Rat::zero) += u * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Sparse(out)
    }

    fn pow(&self, e: usize) -> Self {
        (0..e).fold(Sparse::constant(Rat::one()), |acc, _| acc.mul(self))
    }

    fn as_constant(&self) -> Option<Rat> {
        match self.0.len() {
            0 => Some(Rat::zero()),
            1 => self.0.get(&(0, 0)).cloned(),
            _ => None,
        }
    }
}

struct Parser<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} in {:?}", self.src))
    }

    fn skip_ws(&mut self) {
        while self.chars.peek().is_some_and(|(_, c)| c.is_whitespace()) {
            self.chars.next();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.peek().map(|&(_, c)| c)
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let mut digits = String::new();
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                self.chars.next();
            } else {
                break;
            }
        }
        digits.parse().map_err(|_| self.err("expected a number"))
    }

    fn expr(&mut self) -> Result<Sparse> {
        let mut acc = match self.peek() {
            Some('-') => {
                self.chars.next();
                Sparse::constant(Rat::zero()).add(self.term()?, -1)
            }
            Some('+') => {
                self.chars.next();
                self.term()?
            }
            _ => self.term()?,
        };
        while let Some(c @ ('+' | '-')) = self.peek() {
            self.chars.next();
            let t = self.term()?;
            acc = acc.add(t, if c == '-' { -1 } else { 1 });
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.chars.next();
                    acc = acc.mul(&self.power()?);
                }
                Some('/') => {
                    self.chars.next();
                    let d = self.power()?;
                    let d = d
                        .as_constant()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                    acc = acc.mul(&Sparse::constant(d.recip()));
                }
                Some(c) if c == 'x' || c == 'y' || c == '(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Sparse> {
        let base = self.primary()?;
        if self.peek() == Some('^') {
            self.chars.next();
            let e = self.integer()?;
            let e: usize = e.try_into().map_err(|_| self.err("exponent too large"))?;
            if e > 4096 {
                return Err(self.err("exponent too large"));
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Sparse> {
        match self.peek() {
            Some('x') => {
                self.chars.next();
                Ok(Sparse::var(true))
            }
            Some('y') => {
                self.chars.next();
                Ok(Sparse::var(false))
            }
            Some('(') => {
                self.chars.next();
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.err("missing ')'"));
                }
                self.chars.next();
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Sparse::constant(Rat::from_integer(self.integer()?))),
            Some(c) => Err(self.err(&format!("unexpected {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses and expands a homogeneous expression in `x` and `y`.
pub fn parse_form(src: &str) -> Result<BinaryForm> {
    let mut p = Parser {
        chars: src.char_indices().peekable(),
        src,
    };
    let poly = p.expr()?;
    if let Some(c) = p.peek() {
        return Err(p.err(&format!("trailing {c:?}")));
    }
    let mut degrees = poly.0.keys().map(|(a, b)| a + b);
    let Some(d) = degrees.next() else {
        return Err(Error::ZeroForm);
    };
    if degrees.any(|e| e != d) {
        return Err(Error::Parse(format!("{src:?} is not homogeneous")));
    }
    let mut coeffs = vec![Rat::zero(); d + 1];
    for ((a, _), c) in poly.0 {
        coeffs[a] = c;
    }
    Ok(BinaryForm::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, ratio};

    #[test]
    fn factored_input() {
        let f = parse_form("(x-2y)^3*(x+y)").unwrap();
        let expect = &BinaryForm::linear(int(1), int(-2)).pow(3) * &BinaryForm::linear(int(1), int(1));
        assert_eq!(f, expect);
    }

    #[test]
    fn expanded_input() {
        assert_eq!(parse_form("x*y").unwrap(), BinaryForm::from_ints(&[0, 1, 0]));
        assert_eq!(parse_form("x^2y^2").unwrap(), BinaryForm::from_ints(&[0, 0, 1, 0, 0]));
        assert_eq!(
            parse_form("x^2 - 3/2*x*y").unwrap(),
            BinaryForm::new(vec![int(0), ratio(-3, 2), int(1)])
        );
        assert_eq!(parse_form(" -y + 2 x ").unwrap(), BinaryForm::from_ints(&[-1, 2]));
        assert_eq!(parse_form("2xy(x+y)").unwrap(), BinaryForm::from_ints(&[0, 2, 2, 0]));
    }

    #[test]
    fn round_trip_through_display() {
        let f = BinaryForm::new(vec![ratio(1, 3), int(0), ratio(-7, 2), int(5)]);
        assert_eq!(parse_form(&f.to_expr()).unwrap(), f);
    }

    #[test]
    fn rejects() {
        assert!(matches!(parse_form("x + 1"), Err(Error::Parse(_))));
        assert!(matches!(parse_form("x/y"), Err(Error::Parse(_))));
        assert!(matches!(parse_form("(x+y"), Err(Error::Parse(_))));
        assert!(matches!(parse_form("x - x"), Err(Error::ZeroForm)));
        assert!(matches!(parse_form("x $ y"), Err(Error::Parse(_))));
    }
}
