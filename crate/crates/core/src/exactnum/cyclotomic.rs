use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::arith::{euler_phi, lcm};
use super::{rational_to_string, Rational};
use crate::error::{Error, Result};

fn cyclo_cache() -> &'static Mutex<HashMap<u64, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of the N-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_polynomial(n: u64) -> Arc<Vec<BigInt>> {
    assert!(n >= 1);
    if let Some(p) = cyclo_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Phi_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = div_monic_exact(&num, &phi_d);
        }
    }
    let arc = Arc::new(num);
    cyclo_cache().lock().unwrap().insert(n, arc.clone());
    arc
}

fn div_monic_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let dq = a.len() - 1 - db;
    let mut q = vec![BigInt::zero(); dq + 1];
    for i in (0..=dq).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(rem.iter().all(|x| x.is_zero()));
    q
}

/// Element of Q(zeta_N) in the power basis modulo Phi_N.
#[derive(Clone, Debug)]
pub struct CyclotomicNumber {
    conductor: u64,
    coeffs: Vec<Rational>,
}

fn reduce_mod_cyclo(mut a: Vec<Rational>, n: u64) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    if a.len() > d {
        for i in (d..a.len()).rev() {
            if a[i].is_zero() {
                continue;
            }
            let c = a[i].clone();
            for (j, pj) in phi.iter().enumerate() {
                if !pj.is_zero() {
                    a[i - d + j] -= &c * Rational::from_integer(pj.clone());
                }
            }
        }
    }
    a.resize(d, Rational::zero());
    a
}

impl CyclotomicNumber {
    /// Builds from an arbitrary polynomial in zeta_N, reducing it.
    pub fn from_poly(conductor: u64, poly: Vec<Rational>) -> Self {
        assert!(conductor >= 1);
        CyclotomicNumber {
            conductor,
            coeffs: reduce_mod_cyclo(poly, conductor),
        }
    }

    /// Builds from already reduced coefficients (length phi(N)).
    pub fn from_coeffs(conductor: u64, coeffs: Vec<Rational>) -> Self {
        assert_eq!(coeffs.len() as u64, euler_phi(conductor));
        CyclotomicNumber { conductor, coeffs }
    }

    pub fn from_rational(q: Rational) -> Self {
        CyclotomicNumber {
            conductor: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Result<Rational> {
        if self.is_rational() {
            Ok(self.coeffs[0].clone())
        } else {
            Err(Error::NotRational)
        }
    }

    /// Re-expresses the element in Q(zeta_M) for a multiple M of the conductor.
    pub fn lift(&self, m: u64) -> Self {
        assert!(m % self.conductor == 0, "lift target must be a multiple");
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut poly = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[i * step] = c.clone();
        }
        Self::from_poly(m, poly)
    }

    /// Re-expresses the element over the smallest cyclotomic subfield containing it.
    pub fn simplify(&self) -> Self {
        if self.is_rational() {
            return Self::from_rational(self.coeffs[0].clone());
        }
        let n = self.conductor;
        for d in 2..n {
            if n % d != 0 {
                continue;
            }
            let basis: Vec<Vec<Rational>> = (0..euler_phi(d) as i64)
                .map(|j| cyclotomic_root_of_unity(d, j).lift(n).coeffs)
                .collect();
            if let Some(c) = solve_in_span(&basis, &self.coeffs) {
                return CyclotomicNumber::from_coeffs(d, c);
            }
        }
        self.clone()
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = lcm(self.conductor, other.conductor);
        (self.lift(m), other.lift(m))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| c * q).collect(),
        }
    }

    /// Complex conjugation zeta -> zeta^{-1}.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut poly = vec![Rational::zero(); n.max(1)];
        for (i, c) in self.coeffs.iter().enumerate() {
            poly[(n - i) % n] += c;
        }
        Self::from_poly(self.conductor, poly)
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse, by solving the multiplication-matrix system over Q.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_rational() {
            return Some(Self::from_rational(self.coeffs[0].recip()));
        }
        let n = self.conductor;
        let d = self.coeffs.len();
        // column j = self * zeta^j
        let mut cols: Vec<Vec<Rational>> = Vec::with_capacity(d);
        for j in 0..d {
            let z = cyclotomic_root_of_unity(n, j as i64);
            cols.push((self * &z).coeffs);
        }
        // augmented matrix rows
        let mut m: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                let mut row: Vec<Rational> = (0..d).map(|j| cols[j][i].clone()).collect();
                row.push(if i == 0 { Rational::one() } else { Rational::zero() });
                row
            })
            .collect();
        for c in 0..d {
            let piv = (c..d).find(|&r| !m[r][c].is_zero())?;
            m.swap(c, piv);
            let inv = m[c][c].recip();
            for x in m[c].iter_mut() {
                *x *= &inv;
            }
            for r in 0..d {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    let pivot_row = m[c].clone();
                    for (x, y) in m[r].iter_mut().zip(pivot_row.iter()) {
                        *x -= &f * y;
                    }
                }
            }
        }
        let sol: Vec<Rational> = m.into_iter().map(|row| row[d].clone()).collect();
        Some(CyclotomicNumber::from_coeffs(n, sol))
    }

    /// JSON value: a string for rationals, otherwise {"conductor", "coeffs"}.
    pub fn to_json(&self) -> serde_json::Value {
        let s = self.simplify();
        if s.is_rational() {
            serde_json::Value::String(rational_to_string(&s.coeffs[0]))
        } else {
            serde_json::to_value(&s).expect("serializable")
        }
    }
}

/// zeta_N^j in canonical form.
pub fn cyclotomic_root_of_unity(n: u64, j: i64) -> CyclotomicNumber {
    assert!(n >= 1);
    let e = j.rem_euclid(n as i64) as usize;
    let mut poly = vec![Rational::zero(); e + 1];
    poly[e] = Rational::one();
    CyclotomicNumber::from_poly(n, poly)
}

pub fn rational_from_cyclotomic(z: &CyclotomicNumber) -> Result<Rational> {
    z.to_rational()
}

impl PartialEq for CyclotomicNumber {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.common(other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CyclotomicNumber {}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(rhs);
        CyclotomicNumber {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(rhs);
        CyclotomicNumber {
            conductor: a.conductor,
            coeffs: a.coeffs.iter().zip(b.coeffs.iter()).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        if self.conductor == 1 {
            return rhs.scale(&self.coeffs[0]);
        }
        if rhs.conductor == 1 {
            return self.scale(&rhs.coeffs[0]);
        }
        let (a, b) = self.common(rhs);
        let mut prod = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CyclotomicNumber::from_poly(a.conductor, prod)
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CyclotomicNumber {
            type Output = CyclotomicNumber;
            fn $f(self, rhs: CyclotomicNumber) -> CyclotomicNumber {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", rational_to_string(&self.coeffs[0]));
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", rational_to_string(c))?,
                1 => write!(f, "({})*z{}", rational_to_string(c), self.conductor)?,
                _ => write!(f, "({})*z{}^{}", rational_to_string(c), self.conductor, i)?,
            }
        }
        Ok(())
    }
}

impl Serialize for CyclotomicNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("CyclotomicNumber", 2)?;
        st.serialize_field("conductor", &self.conductor)?;
        let coeffs: Vec<String> = self.coeffs.iter().map(rational_to_string).collect();
        st.serialize_field("coeffs", &coeffs)?;
        st.end()
    }
}

/// Solves sum_j c_j * basis_j = target over Q, if possible.
fn solve_in_span(basis: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let k = basis.len();
    let rows = target.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(piv) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pr = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(pr.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][k].clone();
    }
    Some(sol)
}
