//! Exact rational scalars and their `"p/q"` string form used by the
//! interchange format.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::Error;

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Renders a rational as `"p"` or `"p/q"` with a reduced positive denominator.
pub fn rat_to_string(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `"p"` or `"p/q"`.
pub fn rat_from_str(s: &str) -> Result<Rat, Error> {
    let parse_int = |t: &str| -> Result<BigInt, Error> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::input(format!("invalid rational: {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(Rat::from_integer(parse_int(s)?)),
        Some((n, d)) => {
            let denom = parse_int(d)?;
            if denom.is_zero() {
                return Err(Error::input(format!("zero denominator in {s:?}")));
            }
            Ok(Rat::new(parse_int(n)?, denom))
        }
    }
}

/// Accepts either a JSON string `"p/q"` or a JSON integer.
pub fn rat_from_json(v: &serde_json::Value) -> Result<Rat, Error> {
    match v {
        serde_json::Value::String(s) => rat_from_str(s),
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| Error::input(format!("non-integer numeric rational: {n}"))),
        _ => Err(Error::input(format!("expected rational, got {v}"))),
    }
}

/// Sign as -1, 0, +1.
pub fn sign(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Integer power with negative exponents allowed (base must be nonzero then).
pub fn pow_i64(base: &Rat, exp: i64) -> Rat {
    if exp >= 0 {
        num::pow::pow(base.clone(), exp as usize)
    } else {
        num::pow::pow(base.clone(), (-exp) as usize).recip()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_strings() {
        for s in ["-7/4", "0", "3", "22/7"] {
            let r = rat_from_str(s).unwrap();
            assert_eq!(rat_to_string(&r), s);
        }
        assert_eq!(rat_to_string(&rat_from_str("4/2").unwrap()), "2");
        assert!(rat_from_str("1/0").is_err());
    }
}
