//! Arbitrary-precision integers and eagerly normalized rationals.
//!
//! Everything downstream (conic triples, levels, multipliers) is a [`Nat`];
//! every energy difference is an [`ExactRational`]. Nothing here ever wraps.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
pub type Nat = BigUint;

/// Greatest common divisor of two naturals. `gcd(0, 0)` is rejected.
pub fn gcd(a: &Nat, b: &Nat) -> Result<Nat> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    Ok(gcd_nat(a, b))
}

/// `gcd` with `gcd(0, 0) = 0`. Word-sized operands take a machine-integer
/// path; larger ones use remainder-based Euclid, which allocates far less
/// than the binary algorithm on `BigUint`.
pub(crate) fn gcd_nat(a: &Nat, b: &Nat) -> Nat {
    if let (Some(x), Some(y)) = (a.to_u64(), b.to_u64()) {
        return Nat::from(x.gcd(&y));
    }
    if let (Some(x), Some(y)) = (a.to_u128(), b.to_u128()) {
        return Nat::from(x.gcd(&y));
    }
    let (mut x, mut y) = if a >= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    while !y.is_zero() {
        if let (Some(p), Some(q)) = (x.to_u128(), y.to_u128()) {
            return Nat::from(p.gcd(&q));
        }
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

/// Least common multiple; `lcm(0, b) = 0`.
pub fn lcm(a: &Nat, b: &Nat) -> Nat {
    if a.is_zero() || b.is_zero() {
        return Nat::zero();
    }
    a / gcd_nat(a, b) * b
}

/// Exact quotient `a / b`, failing loudly if `b` does not divide `a`.
pub(crate) fn exact_div(a: &Nat, b: &Nat) -> Result<Nat> {
    if b.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let (q, r) = a.div_rem(b);
    if !r.is_zero() {
        return Err(Error::Internal(format!("{a} is not divisible by {b}")));
    }
    Ok(q)
}

/// A fraction kept in lowest terms with a positive denominator.
///
/// Equality, ordering and hashing are structural on the normalized fields,
/// which makes values usable as exact map keys.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactRational(BigRational);

/// Builds the canonical fraction `num / den`.
pub fn normalize(num: BigInt, den: BigInt) -> Result<ExactRational> {
    if den.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let negative = num.is_negative() != den.is_negative();
    let (num, den) = (num.into_parts().1, den.into_parts().1);
    let g = gcd_nat(&num, &den);
    let sign = if negative && !num.is_zero() { Sign::Minus } else { Sign::Plus };
    Ok(ExactRational(BigRational::new_raw(
        BigInt::from_biguint(sign, num / &g),
        BigInt::from_biguint(Sign::Plus, den / &g),
    )))
}

impl ExactRational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        normalize(num.into(), den.into())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    /// Wraps a fraction already in lowest terms; `den` must be positive.
    pub(crate) fn from_reduced(num: Nat, den: Nat) -> Self {
        ExactRational(BigRational::new_raw(
            BigInt::from_biguint(Sign::Plus, num),
            BigInt::from_biguint(Sign::Plus, den),
        ))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    /// `1 / n^2` for a positive level `n`.
    pub fn inverse_square(n: &Nat) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroLevel);
        }
        let den = BigInt::from_biguint(Sign::Plus, n * n);
        Ok(ExactRational(BigRational::new_raw(BigInt::one(), den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    /// Always strictly positive.
    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Rounds to the nearest `f64` (ties to even), using a single rounding
    /// step from the exact value.
    pub fn to_f64(&self) -> f64 {
        let num = self.numer();
        let den = self.denom();
        if num.is_zero() {
            return 0.0;
        }
        let negative = num.is_negative();
        let num = num.magnitude();
        let den = den.magnitude();
        // Scale so the integer quotient carries at least 66 significant bits,
        // then fold the remainder into a sticky bit. The final BigUint -> f64
        // conversion rounds to nearest-even on those bits.
        let shift = 66i64 - (num.bits() as i64 - den.bits() as i64);
        let (scaled_num, scaled_den) = if shift >= 0 {
            (num << shift as u64, den.clone())
        } else {
            (num.clone(), den << (-shift) as u64)
        };
        let (mut q, r) = scaled_num.div_rem(&scaled_den);
        if !r.is_zero() {
            q |= BigUint::one();
        }
        let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
        let value = scale_by_power_of_two(mantissa, -shift);
        if negative {
            -value
        } else {
            value
        }
    }
}

fn scale_by_power_of_two(x: f64, exp: i64) -> f64 {
    // Split the exponent so each factor stays a normal power of two.
    let mut x = x;
    let mut exp = exp;
    while exp > 1000 {
        x *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        x *= 2f64.powi(-1000);
        exp += 1000;
    }
    x * 2f64.powi(exp as i32)
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `n` or `n/d`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("rational {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
                normalize(n, d)
            }
            None => Ok(Self::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?)),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: ExactRational) -> ExactRational {
                ExactRational($trait::$method(self.0, rhs.0))
            }
        }

        impl<'a> $trait<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $method(self, rhs: &'a ExactRational) -> ExactRational {
                ExactRational($trait::$method(&self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Div for &ExactRational {
    type Output = Result<ExactRational>;

    fn div(self, rhs: &ExactRational) -> Result<ExactRational> {
        if rhs.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(ExactRational(&self.0 / &rhs.0))
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

/// Converts a natural to a signed big integer.
pub(crate) fn to_int(n: &Nat) -> BigInt {
    BigInt::from_biguint(Sign::Plus, n.clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(n: u64) -> Nat {
        Nat::from(n)
    }

    /// Largest divisor common to both, by scanning every candidate.
    fn brute_gcd(a: u64, b: u64) -> u64 {
        (1..=a.max(b)).rev().find(|d| a.is_multiple_of(*d) && b.is_multiple_of(*d)).unwrap()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&nat(8), &nat(143)).unwrap(), nat(brute_gcd(8, 143)));
        assert_eq!(gcd(&nat(8), &nat(143)).unwrap(), nat(1));
        assert_eq!(gcd(&nat(7), &nat(7)).unwrap(), nat(7));
        assert_eq!(gcd(&nat(7034650), &nat(600250)).unwrap(), nat(350));
        assert_eq!(gcd(&nat(0), &nat(9)).unwrap(), nat(9));
        assert_eq!(gcd(&nat(0), &nat(0)), Err(Error::ZeroGcd));
    }

    #[test]
    fn gcd_matches_divisor_scan() {
        for a in 1..60 {
            for b in 1..60 {
                assert_eq!(gcd(&nat(a), &nat(b)).unwrap(), nat(brute_gcd(a, b)));
            }
        }
    }

    #[test]
    fn gcd_fast_path_agrees_with_binary_gcd() {
        let big = |s: &str| s.parse::<Nat>().unwrap();
        let cases = [
            (big("340282366920938463463374607431768211455"), big("18446744073709551615")),
            (
                big("123456789012345678901234567890123456789012"),
                big("987654321098765432109876543210"),
            ),
            (Nat::from(2u8).pow(200) * 3u8, Nat::from(2u8).pow(150) * 9u8),
            (Nat::from(0u8), big("98765432109876543210987654321098765")),
        ];
        for (a, b) in cases {
            assert_eq!(gcd_nat(&a, &b), a.gcd(&b));
            assert_eq!(lcm(&a, &b), a.lcm(&b));
        }
    }

    #[test]
    fn normalize_examples() {
        let r = normalize(286.into(), 1144.into()).unwrap();
        assert_eq!((r.numer(), r.denom()), (&BigInt::from(1), &BigInt::from(4)));
        let r = normalize(0.into(), 5.into()).unwrap();
        assert_eq!((r.numer(), r.denom()), (&BigInt::from(0), &BigInt::from(1)));
        let r = normalize((-24).into(), (-1225).into()).unwrap();
        assert_eq!(r.to_string(), "24/1225");
        let r = normalize(3.into(), (-6).into()).unwrap();
        assert_eq!(r.to_string(), "-1/2");
        assert_eq!(normalize(1.into(), 0.into()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn beyond_u64() {
        let big = Nat::from(10u64).pow(15);
        let sq = &big * &big;
        assert_eq!(sq.to_string(), format!("1{}", "0".repeat(30)));
        let r = ExactRational::inverse_square(&big).unwrap();
        assert_eq!(r.denom().to_string(), sq.to_string());
    }

    #[test]
    fn parse_and_display() {
        let r: ExactRational = "6/-8".parse().unwrap();
        assert_eq!(r.to_string(), "-3/4");
        let r: ExactRational = "5".parse().unwrap();
        assert_eq!(r.to_string(), "5/1");
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("x".parse::<ExactRational>().is_err());
    }

    #[test]
    fn to_f64_rounds_correctly() {
        let cases: &[(i64, i64)] = &[(3, 4), (1, 3), (2, 3), (24, 1225), (-7, 10), (51, 5), (1, 1)];
        for &(n, d) in cases {
            let r = ExactRational::new(n, d).unwrap();
            // For small operands the IEEE quotient of two exact doubles is
            // itself correctly rounded.
            assert_eq!(r.to_f64(), n as f64 / d as f64, "{n}/{d}");
        }
        let tiny = ExactRational::new(1, BigInt::from(10).pow(40)).unwrap();
        assert_eq!(tiny.to_f64(), 1e-40);
        let huge = ExactRational::new(BigInt::from(10).pow(300), 1).unwrap();
        assert_eq!(huge.to_f64(), 1e300);
    }
}
