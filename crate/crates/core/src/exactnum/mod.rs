//! Exact arithmetic: rationals, cyclotomic numbers, integer Smith normal form.

pub mod arith;
mod cyclotomic;
pub mod poly;
mod snf;

pub use cyclotomic::{cyclotomic_polynomial, cyclotomic_root_of_unity, rational_from_cyclotomic, CyclotomicNumber};
pub use snf::{det, mat_mul, smith_normal_form, transpose, IntMatrix, SmithDecomposition};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number; num-rational keeps it normalized with positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int<T: Into<BigInt>>(n: T) -> Rational {
    Rational::from_integer(n.into())
}

/// "num/den", with the denominator omitted when it is 1.
pub fn rational_to_string(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

/// l-adic valuation of a nonzero rational.
pub fn rational_val(q: &Rational, l: u64) -> i64 {
    let (vn, _) = arith::val_big(q.numer(), l);
    let (vd, _) = arith::val_big(q.denom(), l);
    vn as i64 - vd as i64
}

/// Exact power of a rational with signed exponent.
pub fn rational_pow(q: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(q.clone(), e as usize)
    } else {
        num_traits::pow(q.recip(), (-e) as usize)
    }
}

pub fn rational_is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn rational_abs(q: &Rational) -> Rational {
    q.abs()
}
