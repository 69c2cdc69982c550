//! Exact rational scalar used for every coordinate in the crate.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number, always kept in reduced form.
///
/// Values whose numerator and denominator fit in `i64` are stored inline and
/// combined with `i128` intermediates; anything larger spills to a
/// [`BigRational`]. The representation is canonical, so derived equality and
/// hashing are value-based.
///
/// Serializes as the string `"num/den"` (or `"num"` when the denominator is 1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator > 0.
    Small(i64, i64),
    /// Never holds a value representable as `Small`.
    Big(Box<BigRational>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseScalarError(pub String);

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    if a == 0 {
        return b;
    }
    if b == 0 {
        return a;
    }
    let shift = (a | b).trailing_zeros();
    a >>= a.trailing_zeros();
    loop {
        b >>= b.trailing_zeros();
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        b -= a;
        if b == 0 {
            return a << shift;
        }
    }
}

/// Reduces `n/d` (d != 0) computed in i128.
fn from_i128(n: i128, d: i128) -> Scalar {
    debug_assert!(d != 0);
    let (mut n, mut d) = if d < 0 { (-n, -d) } else { (n, d) };
    if n == 0 {
        return Scalar(Repr::Small(0, 1));
    }
    let g = gcd_u128(n.unsigned_abs(), d as u128);
    if g > 1 {
        n /= g as i128;
        d /= g as i128;
    }
    match (i64::try_from(n), i64::try_from(d)) {
        (Ok(n), Ok(d)) => Scalar(Repr::Small(n, d)),
        _ => Scalar(Repr::Big(Box::new(BigRational::new_raw(
            BigInt::from(n),
            BigInt::from(d),
        )))),
    }
}

fn from_big(r: BigRational) -> Scalar {
    if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
        return Scalar(Repr::Small(n, d));
    }
    Scalar(Repr::Big(Box::new(r)))
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Small(0, 1))
    }

    pub fn one() -> Self {
        Scalar(Repr::Small(1, 1))
    }

    pub fn from_int(v: i64) -> Self {
        Scalar(Repr::Small(v, 1))
    }

    /// `num / den`; panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        from_i128(num as i128, den as i128)
    }

    pub fn from_bigs(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        from_big(BigRational::new(num, den))
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i8,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                from_i128(*d as i128, *n as i128)
            }
            Repr::Big(b) => from_big(b.recip()),
        }
    }

    pub fn ceil_int(&self) -> BigInt {
        self.to_big().ceil().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(b) => b.to_f64().unwrap_or(f64::NAN),
        }
    }

    pub fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }

    pub fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    /// Decimal rendering rounded half away from zero to `digits` fractional digits.
    /// Trailing zeros (and a trailing point) are trimmed.
    pub fn to_decimal(&self, digits: u32) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let num = self.numer() * &scale;
        let den = self.denom();
        let (q, r) = num.abs().div_rem(&den);
        let q = if (r * 2u32) >= den { q + 1u32 } else { q };
        let negative = self.is_negative() && !q.is_zero();
        let (int_part, frac_part) = q.div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 && !frac_part.is_zero() {
            let frac = format!("{:0>width$}", frac_part.to_string(), width = digits as usize);
            out.push('.');
            out.push_str(frac.trim_end_matches('0'));
        }
        out
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128)),
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            // BigRational prints "n" for integers and "n/d" otherwise.
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let err = || ParseScalarError(s.to_string());
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(from_big(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = t.parse().map_err(|_| err())?;
                Ok(from_big(BigRational::from_integer(n)))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_int(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        from_big(v)
    }
}

fn add_ref(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            if ad == bd {
                from_i128(*an as i128 + *bn as i128, *ad as i128)
            } else {
                let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
                // |an*bd| + |bn*ad| < 2^127 since every factor is below 2^63.
                from_i128(an * bd + bn * ad, ad * bd)
            }
        }
        _ => from_big(a.to_big() + b.to_big()),
    }
}

fn neg_ref(a: &Scalar) -> Scalar {
    match &a.0 {
        Repr::Small(n, d) => from_i128(-(*n as i128), *d as i128),
        Repr::Big(b) => from_big(-(**b).clone()),
    }
}

fn sub_ref(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => {
            if ad == bd {
                from_i128(*an as i128 - *bn as i128, *ad as i128)
            } else {
                let (an, ad, bn, bd) = (*an as i128, *ad as i128, *bn as i128, *bd as i128);
                from_i128(an * bd - bn * ad, ad * bd)
            }
        }
        _ => from_big(a.to_big() - b.to_big()),
    }
}

fn mul_ref(a: &Scalar, b: &Scalar) -> Scalar {
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => from_i128(*an as i128 * *bn as i128, *ad as i128 * *bd as i128),
        _ => from_big(a.to_big() * b.to_big()),
    }
}

fn div_ref(a: &Scalar, b: &Scalar) -> Scalar {
    assert!(!b.is_zero(), "division by zero");
    match (&a.0, &b.0) {
        (Repr::Small(an, ad), Repr::Small(bn, bd)) => from_i128(*an as i128 * *bd as i128, *ad as i128 * *bn as i128),
        _ => from_big(a.to_big() / b.to_big()),
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            #[inline]
            fn $method(self, rhs: &Scalar) -> Scalar {
                $f(self, rhs)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            #[inline]
            fn $method(self, rhs: Scalar) -> Scalar {
                $f(&self, &rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            #[inline]
            fn $method(self, rhs: &Scalar) -> Scalar {
                $f(&self, rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            #[inline]
            fn $method(self, rhs: Scalar) -> Scalar {
                $f(self, &rhs)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);
binop!(Div, div, div_ref);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = add_ref(self, rhs);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = sub_ref(self, rhs);
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_ref(&self)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        neg_ref(self)
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

/// Sign of a scalar as an [`Ordering`] against zero.
pub fn sign(s: &Scalar) -> Ordering {
    s.signum().cmp(&0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_prints_canonical_forms() {
        let a: Scalar = "6/4".parse().unwrap();
        assert_eq!(a.to_string(), "3/2");
        let b: Scalar = "-7".parse().unwrap();
        assert_eq!(b.to_string(), "-7");
        let c: Scalar = "4/2".parse().unwrap();
        assert_eq!(c.to_string(), "2");
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(Scalar::ratio(1, 3).to_decimal(9), "0.333333333");
        assert_eq!(Scalar::ratio(2, 3).to_decimal(9), "0.666666667");
        assert_eq!(Scalar::ratio(-3, 2).to_decimal(9), "-1.5");
        assert_eq!(Scalar::from_int(5).to_decimal(9), "5");
        assert_eq!(Scalar::ratio(-1, 10_000_000_000).to_decimal(9), "0");
    }

    #[test]
    fn spills_to_big_and_back() {
        let big = Scalar::from_int(i64::MAX) * Scalar::from_int(i64::MAX);
        assert!(big > Scalar::from_int(i64::MAX));
        let back = &big / &Scalar::from_int(i64::MAX);
        assert_eq!(back, Scalar::from_int(i64::MAX));
        assert_eq!(format!("{back}"), i64::MAX.to_string());
        let tiny = Scalar::ratio(1, i64::MAX) * Scalar::ratio(1, 3);
        assert!(tiny.is_positive());
        assert_eq!(tiny * Scalar::from_int(3), Scalar::ratio(1, i64::MAX));
        assert_eq!(Scalar::ratio(i64::MIN, -1).to_string(), "9223372036854775808");
    }

    #[test]
    fn ordering_matches_real_order() {
        let vals = [
            Scalar::ratio(-7, 3),
            Scalar::ratio(-1, 2),
            Scalar::zero(),
            Scalar::ratio(1, 3),
            Scalar::ratio(1, 2),
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
        assert_eq!(Scalar::ratio(2, 4), Scalar::ratio(-1, -2));
    }

    #[test]
    fn serde_is_string_based() {
        let s = Scalar::ratio(-3, 2);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "\"-3/2\"");
        let back: Scalar = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
    }
}
