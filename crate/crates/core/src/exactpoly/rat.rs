//! The coefficient field: arbitrary-precision rationals.

use alloc::string::{String, ToString};

use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Exact rational scalar. Always stored reduced with a positive denominator.
pub type Rat = num_rational::BigRational;

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Integer as an exact rational.
pub fn rat_i(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Round-to-nearest conversion to `f64`.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Canonical string form: `"p"` for integers, `"p/q"` otherwise.
pub fn rat_string(r: &Rat) -> String {
    r.to_string()
}

/// Parses `"p"`, `"p/q"` or a plain decimal like `"-0.25"` into an exact
/// rational. Returns `None` on malformed input or a zero denominator.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n: BigInt = num.trim().parse().ok()?;
        let d: BigInt = den.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        return Some(Rat::new(n, d));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" || int_part == "+" {
            BigInt::from(0)
        } else {
            int_part.parse().ok()?
        };
        let frac: BigInt = frac_part.parse().ok()?;
        let scale = BigInt::from(10).pow(frac_part.len() as u32);
        let mag = int.magnitude().clone() * scale.magnitude().clone() + frac.magnitude().clone();
        let mut value = Rat::new(BigInt::from(mag), scale);
        if negative {
            value = -value;
        }
        return Some(value);
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rat::from_integer(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rat("-6/8").unwrap(), rat(-3, 4));
        assert_eq!(parse_rat("5").unwrap(), rat_i(5));
        assert_eq!(parse_rat("-0.25").unwrap(), rat(-1, 4));
        assert_eq!(parse_rat("1.5").unwrap(), rat(3, 2));
        assert!(parse_rat("1/0").is_none());
        assert!(parse_rat("x").is_none());
    }

    #[test]
    fn string_roundtrip() {
        assert_eq!(rat_string(&rat(1, 2)), "1/2");
        assert_eq!(rat_string(&rat_i(-7)), "-7");
        assert_eq!(parse_rat(&rat_string(&rat(-22, 6))).unwrap(), rat(-11, 3));
    }
}
