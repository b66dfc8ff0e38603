//! Exact rationals. Values are always kept in lowest terms with a positive
//! denominator, which `num-rational` guarantees on construction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

pub fn half() -> Rational {
    frac(1, 2)
}

/// Formats as `N/D`, omitting `/D` when the denominator is one.
pub fn to_text(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector by a positive factor so that every entry is an
/// integer, then divides by the gcd. The zero vector maps to itself.
pub fn primitive_integer_vector(xs: &[Rational]) -> Vec<BigInt> {
    let den = common_denominator(xs);
    let ints: Vec<BigInt> = xs
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    divide_by_gcd(ints)
}

pub fn divide_by_gcd(mut xs: Vec<BigInt>) -> Vec<BigInt> {
    let g = xs.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in &mut xs {
            *x /= &g;
        }
    }
    xs
}

pub fn is_nonnegative(x: &Rational) -> bool {
    !x.is_negative()
}
