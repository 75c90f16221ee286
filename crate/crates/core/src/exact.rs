//! Exact integer and rational combinatorics.
//!
//! Everything here works on arbitrary-size integers so that factorial
//! ratios stay exact for a few hundred particles. Conversion to `f64`
//! happens once, at the very end, through [`to_f64`].

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn factorial(n: usize) -> BigUint {
    (2..=n as u64).fold(BigUint::one(), |acc, i| acc * i)
}

/// Binomial coefficient `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc * (n - i) is always divisible by (i + 1) at this point
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `(Σ c_i)! / Π c_i!`, the number of distinct orderings of a multiset.
pub fn multinomial(counts: &[usize]) -> BigUint {
    let mut total = 0usize;
    let mut acc = BigUint::one();
    for &c in counts {
        total += c;
        acc *= binomial(total, c);
    }
    acc
}

pub fn ratio(num: BigUint, den: BigUint) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn from_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Renders a rational as `p/q` (denominator always printed).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn to_usize(n: &BigUint) -> Option<usize> {
    n.to_usize()
}
