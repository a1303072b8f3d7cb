//! Dense univariate polynomials, constant term first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{CyclotomicNumber, Rational};

pub type IntPoly = Vec<BigInt>;
pub type RatPoly = Vec<Rational>;

pub fn trim<T: Zero>(mut a: Vec<T>) -> Vec<T> {
    while a.len() > 1 && a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    if a.is_empty() {
        a.push(T::zero());
    }
    a
}

pub fn degree<T: Zero>(a: &[T]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub fn from_i64(c: &[i64]) -> IntPoly {
    trim(c.iter().map(|&x| BigInt::from(x)).collect())
}

pub fn add<T: Zero + Clone + for<'a> std::ops::Add<&'a T, Output = T>>(a: &[T], b: &[T]) -> Vec<T> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            match b.get(i) {
                Some(y) => x + y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

pub fn sub<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Zero + Clone + for<'a> std::ops::Sub<&'a T, Output = T>,
{
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(T::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trim(out)
}

pub fn mul<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Zero + Clone,
    for<'a> &'a T: std::ops::Mul<&'a T, Output = T>,
{
    if a.is_empty() || b.is_empty() {
        return vec![T::zero()];
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x * y;
            }
        }
    }
    trim(out)
}

pub fn scale_int(a: &[BigInt], c: &BigInt) -> IntPoly {
    trim(a.iter().map(|x| x * c).collect())
}

/// 1 - c X^k
pub fn one_minus_monomial(c: BigInt, k: usize) -> IntPoly {
    let mut p = vec![BigInt::zero(); k + 1];
    p[0] = BigInt::one();
    p[k] -= c;
    trim(p)
}

/// Exact division in Z[X]; None if the quotient is not integral or a remainder is left.
pub fn div_exact_int(a: &[BigInt], b: &[BigInt]) -> Option<IntPoly> {
    let db = degree(b)?;
    let Some(da) = degree(a) else {
        return Some(vec![BigInt::zero()]);
    };
    if da < db {
        return None;
    }
    let lead = &b[db];
    let mut rem: Vec<BigInt> = a[..=da].to_vec();
    let mut q = vec![BigInt::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        let c = &rem[i + db];
        if c.is_zero() {
            continue;
        }
        let (qc, r) = c.div_rem(lead);
        if !r.is_zero() {
            return None;
        }
        for (j, bj) in b[..=db].iter().enumerate() {
            rem[i + j] -= &qc * bj;
        }
        q[i] = qc;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(trim(q))
    } else {
        None
    }
}

/// Exact division in Q[X]; None if a remainder is left.
pub fn div_exact_rat(a: &[Rational], b: &[Rational]) -> Option<RatPoly> {
    let db = degree(b)?;
    let Some(da) = degree(a) else {
        return Some(vec![Rational::zero()]);
    };
    if da < db {
        return None;
    }
    let lead_inv = b[db].recip();
    let mut rem: Vec<Rational> = a[..=da].to_vec();
    let mut q = vec![Rational::zero(); da - db + 1];
    for i in (0..=da - db).rev() {
        if rem[i + db].is_zero() {
            continue;
        }
        let qc = &rem[i + db] * &lead_inv;
        for (j, bj) in b[..=db].iter().enumerate() {
            rem[i + j] -= &qc * bj;
        }
        q[i] = qc;
    }
    if rem.iter().all(|x| x.is_zero()) {
        Some(trim(q))
    } else {
        None
    }
}

/// Power series quotient a / b to `len` terms; b must have constant term +-1.
pub fn series_div_int(a: &[BigInt], b: &[BigInt], len: usize) -> IntPoly {
    let b0 = &b[0];
    assert!(b0.is_one() || (-b0).is_one(), "series divisor needs unit constant term");
    let mut q: Vec<BigInt> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = a.get(k).cloned().unwrap_or_else(BigInt::zero);
        for j in 1..=k.min(b.len().saturating_sub(1)) {
            acc -= &b[j] * &q[k - j];
        }
        q.push(acc * b0);
    }
    q
}

pub fn to_rat(a: &[BigInt]) -> RatPoly {
    a.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

pub fn eval_int_at_rat(a: &[BigInt], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in a.iter().rev() {
        acc = acc * x + Rational::from_integer(c.clone());
    }
    acc
}

pub fn eval_int_at_cyc(a: &[BigInt], x: &CyclotomicNumber) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::zero();
    for c in a.iter().rev() {
        acc = &(&acc * x) + &CyclotomicNumber::from_rational(Rational::from_integer(c.clone()));
    }
    acc
}

/// Substitutes X -> c X.
pub fn scale_var_int(a: &[BigInt], c: &BigInt) -> IntPoly {
    let mut pw = BigInt::one();
    let mut out = Vec::with_capacity(a.len());
    for x in a {
        out.push(x * &pw);
        pw *= c;
    }
    trim(out)
}

pub fn to_strings(a: &[BigInt]) -> Vec<String> {
    a.iter().map(|x| x.to_string()).collect()
}
