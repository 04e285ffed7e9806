//! Exact rationals and their `"p/q"` string encoding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serializer};

pub type Rational = BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Lowest terms with a positive denominator, always including the
/// denominator (`"3/1"`).
pub fn format(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `"p/q"` or a bare integer `"p"`.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(Rational::new(p, q))
            }
        }
        None => Some(Rational::from_integer(text.parse().ok()?)),
    }
}

pub fn is_probability(r: &Rational) -> bool {
    *r >= Rational::zero() && *r <= Rational::one()
}

/// `#[serde(with = "cpgame::rational::serde_str")]`
pub mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse(&text).ok_or_else(|| serde::de::Error::custom(format!("invalid rational {text:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_in_lowest_terms() {
        assert_eq!(format(&ratio(10, 6)), "5/3");
        assert_eq!(format(&ratio(3, -6)), "-1/2");
        assert_eq!(format(&int(3)), "3/1");
    }

    #[test]
    fn parses_both_forms() {
        assert_eq!(parse("5/3"), Some(ratio(5, 3)));
        assert_eq!(parse(" 4 "), Some(int(4)));
        assert_eq!(parse("2/4"), Some(ratio(1, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
