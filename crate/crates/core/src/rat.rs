//! Exact rational scalars.
//!
//! Every coefficient in the crate is a [`Rat`]; `BigRational` already keeps
//! values reduced with a positive denominator, so the helpers here only cover
//! construction, the `"p/q"` text format and content normalization of vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

pub type Rat = BigRational;

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`. Rejects zero denominators and non-reduced input is
/// accepted and reduced.
pub fn parse_rat(s: &str) -> Result<Rat, Error> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(num, den))
}

/// Like [`parse_rat`], but the text must already be in lowest terms with a
/// positive denominator.
pub fn parse_reduced_rat(s: &str) -> Result<Rat, Error> {
    let r = parse_rat(s)?;
    let written_den = s.split_once('/').map(|(_, d)| d.trim());
    let reduced = match written_den {
        None => true,
        Some(d) => d.parse::<BigInt>().is_ok_and(|d| &d == r.denom())
            && s.split_once('/').unwrap().0.trim().parse::<BigInt>().is_ok_and(|n| &n == r.numer()),
    };
    if !reduced {
        return Err(Error::Parse(format!("{s:?} is not a reduced rational")));
    }
    Ok(r)
}

/// Canonical `"p/q"` text, always with an explicit denominator.
pub fn format_rat(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Scales `v` by a positive rational so that all entries become coprime
/// integers. The zero vector is returned unchanged.
pub fn primitive_positive_scale(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::one();
    for c in v {
        lcm = lcm.lcm(c.denom());
    }
    let mut gcd = BigInt::zero();
    for c in v {
        let n = c.numer() * (&lcm / c.denom());
        gcd = gcd.gcd(&n);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    let scale = Rat::new(lcm, gcd.abs());
    v.iter().map(|c| c * &scale).collect()
}

/// Largest absolute value in `v`.
pub fn max_abs(v: &[Rat]) -> Rat {
    v.iter().map(|c| c.abs()).max().unwrap_or_else(Rat::zero)
}

/// `floor(log2 |r|)` for nonzero `r`, computed exactly.
pub fn floor_log2(r: &Rat) -> i64 {
    let r = r.abs();
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let mut e = n - d;
    // 2^e <= r < 2^(e+1) after at most one correction
    if pow2(e) > r {
        e -= 1;
    }
    e
}

pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << (e as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rat("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rat("-7").unwrap(), int(-7));
        assert_eq!(format_rat(&ratio(-3, 6)), "-1/2");
        assert_eq!(format_rat(&int(5)), "5/1");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("a/2").is_err());
        assert_eq!(parse_reduced_rat("-3/4").unwrap(), ratio(-3, 4));
        assert_eq!(parse_reduced_rat("5").unwrap(), int(5));
        assert!(parse_reduced_rat("6/4").is_err());
        assert!(parse_reduced_rat("3/-4").is_err());
    }

    #[test]
    fn inverse_is_exact() {
        let a = ratio(17, 23);
        assert_eq!(&a * a.recip(), Rat::one());
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![ratio(1, 2), ratio(-3, 4), int(0)];
        assert_eq!(primitive_positive_scale(&v), vec![int(2), int(-3), int(0)]);
    }

    #[test]
    fn log2_floor() {
        assert_eq!(floor_log2(&int(1)), 0);
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&int(9)), 3);
        assert_eq!(floor_log2(&ratio(1, 3)), -2);
        assert_eq!(floor_log2(&ratio(1, 4)), -2);
    }
}

/// Serde adapter storing a [`Rat`] as its `"p/q"` string.
pub mod serde_rat {
    use super::{format_rat, parse_reduced_rat, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_reduced_rat(&s).map_err(D::Error::custom)
    }
}

/// Serde adapter for `Option<Rat>`.
pub mod serde_opt_rat {
    use super::{format_rat, parse_reduced_rat, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
        r.as_ref().map(format_rat).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
        Option::<String>::deserialize(d)?
            .map(|s| parse_reduced_rat(&s).map_err(D::Error::custom))
            .transpose()
    }
}

/// Serde adapter for `Vec<Rat>`.
pub mod serde_rat_vec {
    use super::{format_rat, parse_reduced_rat, Rat};
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rat).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_reduced_rat(s).map_err(D::Error::custom))
            .collect()
    }
}
