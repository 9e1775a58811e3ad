//! Exact rational helpers shared by the solvers.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

/// Arbitrary-precision rational used for every weight and objective value.
pub type Rational = num_rational::BigRational;

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a, I>(values: I) -> BigInt
where
    I: IntoIterator<Item = &'a Rational>,
{
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Scales every value by the least common denominator and returns the
/// resulting integers, or `None` if one of them does not fit in an `i64`.
pub fn scale_to_i64(values: &[Rational]) -> Option<(Vec<i64>, BigInt)> {
    let lcd = common_denominator(values.iter());
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let scaled = v.numer() * (&lcd / v.denom());
        out.push(scaled.to_i64()?);
    }
    Some((out, lcd))
}

pub fn unscale(total: i128, lcd: &BigInt) -> Rational {
    Rational::new(BigInt::from(total), lcd.clone())
}

pub fn sum<'a, I>(values: I) -> Rational
where
    I: IntoIterator<Item = &'a Rational>,
{
    values.into_iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// `base^exp` for a non-negative exponent.
pub fn pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_uses_least_common_denominator() {
        let vals = [ratio(1, 2), ratio(1, 3), int(2)];
        let (scaled, lcd) = scale_to_i64(&vals).unwrap();
        assert_eq!(lcd, BigInt::from(6));
        assert_eq!(scaled, [3, 2, 12]);
        assert_eq!(unscale(17, &lcd), ratio(17, 6));
    }

    #[test]
    fn pow_of_zero_exponent_is_one() {
        assert_eq!(pow(&ratio(2, 3), 0), int(1));
        assert_eq!(pow(&ratio(2, 3), 3), ratio(8, 27));
    }
}
