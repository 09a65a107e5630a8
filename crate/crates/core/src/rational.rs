//! Exact rational helpers: parsing `p/q` strings and rendering decimals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational used on every computation path.
pub type Rational = num_rational::BigRational;

/// Error returned when a token is not an exact rational literal.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal `{token}`: {reason}")]
pub struct RationalParseError {
    pub token: String,
    pub reason: &'static str,
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `p`, `-p` or `p/q` with decimal integers. Decimal points are
/// rejected so that no value ever passes through a float.
pub fn parse_rational(token: &str) -> Result<Rational, RationalParseError> {
    let err = |reason| RationalParseError {
        token: token.to_string(),
        reason,
    };
    let parse_int = |s: &str| -> Result<BigInt, RationalParseError> {
        let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err("expected decimal integer"));
        }
        s.parse::<BigInt>().map_err(|_| err("expected decimal integer"))
    };
    match token.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(token)?)),
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(err("zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
    }
}

/// Renders `value` with `digits` significant digits, rounding half to even.
///
/// Trailing fractional zeros are dropped, so `1/2` renders as `0.5`.
pub fn to_decimal(value: &Rational, digits: usize) -> String {
    assert!(digits > 0, "at least one significant digit");
    if value.is_zero() {
        return "0".to_string();
    }
    let negative = value.is_negative();
    let abs = value.abs();
    let ten = BigInt::from(10);

    // exponent e with 10^e <= abs < 10^(e+1)
    let mut exp = abs.numer().to_string().len() as i64 - abs.denom().to_string().len() as i64;
    let pow10 = |e: i64| -> Rational {
        if e >= 0 {
            Rational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            Rational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while abs < pow10(exp) {
        exp -= 1;
    }
    while abs >= pow10(exp + 1) {
        exp += 1;
    }

    let shift = digits as i64 - 1 - exp;
    let scaled = &abs * pow10(shift);
    let (mut mantissa, rem) = scaled.numer().div_rem(scaled.denom());
    let twice: BigInt = rem * 2;
    match twice.cmp(scaled.denom()) {
        std::cmp::Ordering::Greater => mantissa += 1,
        std::cmp::Ordering::Equal if mantissa.is_odd() => mantissa += 1,
        _ => {}
    }
    let mut shift = shift;
    if mantissa.to_string().len() > digits {
        mantissa /= &ten;
        shift -= 1;
    }

    let text = mantissa.to_string();
    let mut out = if shift <= 0 {
        let mut s = text;
        s.extend(std::iter::repeat_n('0', (-shift) as usize));
        s
    } else {
        let shift = shift as usize;
        let (int_part, frac_part) = if text.len() > shift {
            let (a, b) = text.split_at(text.len() - shift);
            (a.to_string(), b.to_string())
        } else {
            ("0".to_string(), format!("{}{}", "0".repeat(shift - text.len()), text))
        };
        let frac = frac_part.trim_end_matches('0');
        if frac.is_empty() {
            int_part
        } else {
            format!("{int_part}.{frac}")
        }
    };
    if negative {
        out.insert(0, '-');
    }
    out
}

/// Lossy conversion for display and log fits only.
pub fn to_f64(value: &Rational) -> f64 {
    to_decimal(value, 20).parse().unwrap_or(f64::NAN)
}

/// `Display` adapter printing a rational as `p/q` (or `p` for integers).
pub struct Exact<'a>(pub &'a Rational);

impl fmt::Display for Exact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

pub fn exact_string(value: &Rational) -> String {
    Exact(value).to_string()
}

/// Serde adapter storing rationals as exact `p/q` strings.
pub mod serde_exact {
    use super::*;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(&Exact(value))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(D::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(values: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(values.len()))?;
            for v in values {
                seq.serialize_element(&exact_string(v))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let texts = Vec::<String>::deserialize(d)?;
            texts
                .iter()
                .map(|t| parse_rational(t).map_err(D::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(value: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match value {
                Some(v) => s.collect_str(&Exact(v)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|t| parse_rational(&t).map_err(D::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_integers_and_fractions() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-1/10").unwrap(), ratio(-1, 10));
        assert_eq!(parse_rational("+7/1").unwrap(), int(7));
    }

    #[test]
    fn rejects_floats_and_garbage() {
        for bad in ["0.5", "1e3", "", "/3", "1/", "1/0", "a/b", "1//2", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_display() {
        assert_eq!(exact_string(&ratio(20, 33)), "20/33");
        assert_eq!(exact_string(&int(4)), "4");
        assert_eq!(exact_string(&ratio(-3, 6)), "-1/2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&ratio(1, 2), 20), "0.5");
        assert_eq!(to_decimal(&ratio(1, 3), 20), "0.33333333333333333333");
        assert_eq!(to_decimal(&ratio(2, 3), 20), "0.66666666666666666667");
        assert_eq!(to_decimal(&ratio(17, 20), 20), "0.85");
        assert_eq!(to_decimal(&int(123), 2), "120");
        assert_eq!(to_decimal(&ratio(-1, 8), 20), "-0.125");
        assert_eq!(to_decimal(&ratio(1, 1_000_000), 3), "0.000001");
        assert_eq!(to_decimal(&int(0), 5), "0");
    }

    #[test]
    fn decimal_round_half_even() {
        assert_eq!(to_decimal(&ratio(125, 100), 2), "1.2");
        assert_eq!(to_decimal(&ratio(135, 100), 2), "1.4");
        assert_eq!(to_decimal(&ratio(9995, 1000), 3), "10");
        assert_eq!(to_decimal(&ratio(99, 10), 1), "10");
    }
}
