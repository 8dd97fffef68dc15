//! Exact scalars: arbitrary-precision rationals, stored in lowest terms with
//! positive denominator (the normal form `BigRational` maintains).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    BigRational::zero()
}

pub fn one() -> Rational {
    BigRational::one()
}

/// The sign (-1)^e as a rational.
pub fn neg_one_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        one()
    } else {
        -one()
    }
}

/// Canonical text form `p/q`, lowest terms, `q > 0`.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::parse(format!("bad rational numerator {:?}", s)))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::parse(format!("bad rational denominator {:?}", s)))?;
    if d.is_zero() {
        return Err(Error::parse(format!("zero denominator in {:?}", s)));
    }
    if d.is_negative() {
        return Err(Error::parse(format!(
            "denominator must be positive in {:?}",
            s
        )));
    }
    Ok(BigRational::new(n, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_lowest_terms() {
        let r = rat(6, -4);
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(parse_rational("-3/2").unwrap(), r);
        assert_eq!(parse_rational("7").unwrap(), int(7));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("x").is_err());
    }
}
