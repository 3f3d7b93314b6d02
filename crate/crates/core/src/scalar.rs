//! Exact rational scalars with arbitrary-precision numerator and denominator.

use num::{BigInt, BigRational, One, Signed, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn is_zero(q: &Scalar) -> bool {
    q.is_zero()
}

/// Canonical text form: `p` for integers, `p/q` otherwise, reduced, with the
/// sign on the numerator.
pub fn format_scalar(q: &Scalar) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` with an optional leading minus.
pub fn parse_scalar(s: &str) -> Option<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Formats a coefficient for element/expression printing: magnitude 1 prints
/// as nothing, otherwise `c*` with `c` in canonical form.
pub fn coeff_prefix(q: &Scalar) -> String {
    let mag = q.abs();
    if mag.is_one() {
        String::new()
    } else {
        format!("{}*", format_scalar(&mag))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        for s in ["0", "7", "-3", "2/3", "-11/4"] {
            let q = parse_scalar(s).unwrap();
            assert_eq!(format_scalar(&q), s);
        }
        // non-canonical inputs normalise
        assert_eq!(format_scalar(&parse_scalar("4/2").unwrap()), "2");
        assert_eq!(format_scalar(&parse_scalar("2/-4").unwrap()), "-1/2");
        assert!(parse_scalar("1/0").is_none());
    }
}
