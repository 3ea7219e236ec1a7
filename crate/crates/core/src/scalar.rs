//! Exact rational coefficients.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

/// Coefficient type of the whole engine: an arbitrary-precision rational,
/// kept in lowest terms by construction.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    assert!(den != 0, "zero denominator");
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Renders a scalar as `n` or `n/d` with `d > 0`.
pub fn fmt(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `n` or `n/d` (optionally signed).
pub fn parse(s: &str) -> Option<Scalar> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(Scalar::from_integer),
        Some((n, d)) => {
            let n = n.trim().parse::<BigInt>().ok()?;
            let d = d.trim().parse::<BigInt>().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Scalar::new(n, d))
            }
        }
    }
}

/// The class of a nonzero rational in ℚ*/(ℚ*)², represented by its unique
/// squarefree integer representative (sign included).  Returns 0 for 0.
pub fn square_class(x: &Scalar) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    // n/d ~ n*d modulo squares.
    let mut m = x.numer() * x.denom();
    let negative = m.is_negative();
    m = m.abs();
    let mut rep = BigInt::one();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        let mut e = 0u32;
        while (&m % &p).is_zero() {
            m /= &p;
            e += 1;
        }
        if e % 2 == 1 {
            rep *= &p;
        }
        p += 1;
    }
    rep *= m; // leftover prime (or 1)
    if negative {
        rep = -rep;
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["3", "-7", "3/4", "-9/12"] {
            let x = parse(s).unwrap();
            let y = parse(&fmt(&x)).unwrap();
            assert_eq!(x, y);
        }
        assert_eq!(fmt(&parse("-9/12").unwrap()), "-3/4");
        assert!(parse("1/0").is_none());
    }

    #[test]
    fn square_classes() {
        assert_eq!(square_class(&int(4)), BigInt::from(1));
        assert_eq!(square_class(&int(16)), BigInt::from(1));
        assert_eq!(square_class(&int(18)), BigInt::from(2));
        assert_eq!(square_class(&ratio(-8, 3)), BigInt::from(-6));
        assert_eq!(square_class(&zero()), BigInt::from(0));
    }
}
