//! Local Siegel series b_l(S; X) and their polynomial parts F_l(S; X).
//!
//! Two independent routes compute b. The naive route enumerates the classes R in
//! Sym_r(l^-m Z)/Sym_r(Z) directly and is only usable for tiny cases. The lattice route
//! groups the classes R by the lattice L = Z^r + Z^r R and applies Moebius inversion over
//! superlattices of Z^r:
//!
//!   b(X) = G(X) * prod_{i=0}^{r-1} (1 - l^i X),  G_j = sum_{[L : Z^r] = l^j} g(L),
//!
//! where g(L) is the size of {R : Z^r R in L} if the additive character tr(SR) is trivial on
//! that group and 0 otherwise. Lattices with g(L) != 0 are closed under passing to
//! sublattices, so a breadth-first search by index enumerates them level by level. G is
//! an infinite series in general; F is read off from a prefix one term longer than its
//! expected degree.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::eisenstein::StabilizationPolys;
use crate::error::{Error, Result};
use crate::exactnum::arith::{big_pow, val_i128};
use crate::exactnum::poly::{self, IntPoly};
use crate::exactnum::{smith_normal_form, CyclotomicNumber, Rational};
use crate::quadforms::{det_data, eta, scale, xi, HalfIntegralMatrix};

mod lattice;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SiegelSeriesPoly {
    #[serde(serialize_with = "ser_big_vec")]
    pub coeffs: Vec<BigInt>,
    pub prime: u64,
    pub rank: usize,
}

fn ser_big_vec<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

impl SiegelSeriesPoly {
    pub fn one(prime: u64, rank: usize) -> Self {
        SiegelSeriesPoly {
            coeffs: vec![BigInt::one()],
            prime,
            rank,
        }
    }

    pub fn degree(&self) -> usize {
        poly::degree(&self.coeffs).unwrap_or(0)
    }

    pub fn eval_rat(&self, x: &Rational) -> Rational {
        poly::eval_int_at_rat(&self.coeffs, x)
    }

    pub fn eval_cyc(&self, x: &CyclotomicNumber) -> CyclotomicNumber {
        poly::eval_int_at_cyc(&self.coeffs, x)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Leading coefficients of b_l(S; X).
#[derive(Clone, Debug, PartialEq)]
pub struct BSeriesPrefix {
    pub coeffs: Vec<Rational>,
}

impl BSeriesPrefix {
    pub fn length(&self) -> usize {
        self.coeffs.len()
    }
}

/// Degree of F_l(T; X) predicted by the functional equation.
pub fn expected_degree(t: &HalfIntegralMatrix, l: u64) -> Result<usize> {
    let dd = det_data(t)?;
    let v = if t.size() % 2 == 0 {
        2 * val_i128(dd.cond.expect("even rank"), l)
    } else {
        val_i128(dd.big_d, l)
    };
    Ok(v as usize)
}

/// One class R = A / l^nu: returns (val_l(mu_R), exponent of e_l(tr(TR)) in Z / l^nu).
/// `a` lists the upper-triangular entries of A row by row.
pub fn bruteforce_class(t: &HalfIntegralMatrix, l: u64, nu: u32, a: &[i128]) -> (u32, u64) {
    let r = t.size();
    let modulus = i128::from(l).pow(nu);
    let g = t.doubled();
    let mut mat = vec![vec![0i128; r]; r];
    let mut e: i128 = 0;
    let mut k = 0;
    for i in 0..r {
        for j in i..r {
            mat[i][j] = a[k];
            mat[j][i] = a[k];
            if i == j {
                e += i128::from(g[i][i] / 2) * a[k];
            } else {
                e += i128::from(g[i][j]) * a[k];
            }
            k += 1;
        }
    }
    let snf = smith_normal_form(&mat);
    let capped: u32 = snf
        .diag
        .iter()
        .map(|&d| if d == 0 { nu } else { val_i128(d, l).min(nu) })
        .sum();
    let m = nu * r as u32 - capped;
    (m, e.rem_euclid(modulus) as u64)
}

/// Coefficients 0..=m_max of b_l(T; X) by enumerating Sym_r(l^-m_max Z) / Sym_r(Z).
pub fn b_series_bruteforce(t: &HalfIntegralMatrix, l: u64, m_max: u32) -> Result<BSeriesPrefix> {
    if t.size() > 0 && t.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    let r = t.size();
    let slots = r * (r + 1) / 2;
    let base = l.pow(m_max);
    let total = (base as u128).pow(slots as u32);
    let total = u64::try_from(total).map_err(|_| Error::InvalidParams("enumeration too large".into()))?;
    let width = m_max as usize + 1;
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![vec![0i64; base as usize]; width],
            |mut acc, idx| {
                let mut rest = idx;
                let a: Vec<i128> = (0..slots)
                    .map(|_| {
                        let d = rest % base;
                        rest /= base;
                        i128::from(d)
                    })
                    .collect();
                let (m, e) = bruteforce_class(t, l, m_max, &a);
                if (m as usize) < width {
                    acc[m as usize][e as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![vec![0i64; base as usize]; width],
            |mut x, y| {
                for (rx, ry) in x.iter_mut().zip(y) {
                    for (a, b) in rx.iter_mut().zip(ry) {
                        *a += b;
                    }
                }
                x
            },
        );
    let mut coeffs = Vec::with_capacity(width);
    for row in counts {
        let z = CyclotomicNumber::from_poly(
            base,
            row.into_iter().map(|c| Rational::from_integer(BigInt::from(c))).collect(),
        );
        coeffs.push(z.to_rational()?);
    }
    Ok(BSeriesPrefix { coeffs })
}

/// Coefficients 0..=levels of G(X) in the lattice decomposition.
pub fn lattice_generating_prefix(t: &HalfIntegralMatrix, l: u64, levels: usize) -> Result<IntPoly> {
    let r = t.size();
    if r == 0 {
        return Ok(vec![BigInt::one()]);
    }
    if t.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    if r > lattice::MAX_RANK {
        return Err(Error::InvalidParams(format!("lattice route supports rank <= {}", lattice::MAX_RANK)));
    }
    let weights = lattice::good_lattice_weights(&t.doubled_i128(), l, levels);
    Ok(weights
        .iter()
        .map(|lv| lv.iter().map(|(&w, &c)| big_pow(l, w) * BigInt::from(c)).sum())
        .collect())
}

/// Coefficients 0..len of b_l(T; X) through the lattice decomposition.
pub fn b_series_lattice(t: &HalfIntegralMatrix, l: u64, len: usize) -> Result<IntPoly> {
    let mut b = lattice_generating_prefix(t, l, len.saturating_sub(1))?;
    for i in 0..t.size() {
        b = poly::mul(&b, &poly::one_minus_monomial(big_pow(l, i as u32), 1));
    }
    b.resize(len.max(1), BigInt::zero());
    b.truncate(len.max(1));
    Ok(b)
}

/// (numerator, denominator) of the rational cofactor relating b and F.
fn cofactor(t: &HalfIntegralMatrix, l: u64) -> Result<(IntPoly, IntPoly)> {
    let r = t.size();
    let mut den = poly::one_minus_monomial(BigInt::one(), 1);
    for i in 1..=r / 2 {
        den = poly::mul(&den, &poly::one_minus_monomial(big_pow(l, 2 * i as u32), 2));
    }
    let num = if r % 2 == 0 {
        let x = xi(t, l)?;
        poly::one_minus_monomial(BigInt::from(x) * big_pow(l, (r / 2) as u32), 1)
    } else {
        vec![BigInt::one()]
    };
    Ok((num, den))
}

fn f_cache() -> &'static Mutex<HashMap<(String, u64), SiegelSeriesPoly>> {
    static CACHE: OnceLock<Mutex<HashMap<(String, u64), SiegelSeriesPoly>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Power series b * num / den up to X^{len-1}; the tail past the expected degree must vanish.
fn f_from_prefix(t: &HalfIntegralMatrix, l: u64, b: &[BigInt], degree: usize) -> Result<SiegelSeriesPoly> {
    let (num, den) = cofactor(t, l)?;
    let series = poly::series_div_int(&poly::mul(b, &num), &den, b.len());
    if series[degree + 1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::NonIntegralQuotient(format!(
            "F_{l} of {} does not terminate at degree {degree}",
            t.key()
        )));
    }
    let coeffs = poly::trim(series[..=degree].to_vec());
    if !coeffs[0].is_one() {
        return Err(Error::NonIntegralQuotient(format!("constant term of F_{l} of {}", t.key())));
    }
    Ok(SiegelSeriesPoly {
        coeffs,
        prime: l,
        rank: t.size(),
    })
}

/// F_l(T; X) from the lattice route. The search runs one level past the expected degree
/// so that the vanishing of the next coefficient is actually tested.
#[allow(non_snake_case)]
pub fn F_from_b(t: &HalfIntegralMatrix, l: u64) -> Result<SiegelSeriesPoly> {
    let r = t.size();
    if r == 0 {
        return Ok(SiegelSeriesPoly::one(l, 0));
    }
    if t.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    let key = (t.key(), l);
    if let Some(f) = f_cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let d = expected_degree(t, l)?;
    let b = b_series_lattice(t, l, d + 2)?;
    let f = f_from_prefix(t, l, &b, d)?;
    f_cache().lock().unwrap().insert(key, f.clone());
    Ok(f)
}

/// Coefficient of X^{D-i} predicted from f_i by the functional equation, as
/// (sign, power of l): f_{D-i} = sign * l^e * f_i.
fn mirror_factor(t: &HalfIntegralMatrix, l: u64, d: usize, i: usize) -> Result<(i32, u32)> {
    let r = t.size();
    if r % 2 == 0 {
        Ok((1, ((r + 1) * (d / 2 - i)) as u32))
    } else {
        Ok((eta(t, l)?, (((r + 1) / 2) * (d - 2 * i)) as u32))
    }
}

/// F_l(T; X) from the lower half of its coefficients. The lattice search stops at level
/// floor(D/2) + 1; the upper half comes from the functional equation, and the overlap with
/// the computed coefficients is checked.
#[allow(non_snake_case)]
pub fn F_from_b_fe(t: &HalfIntegralMatrix, l: u64) -> Result<SiegelSeriesPoly> {
    let r = t.size();
    if r == 0 {
        return Ok(SiegelSeriesPoly::one(l, 0));
    }
    if t.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    let key = (format!("fe:{}", t.key()), l);
    if let Some(f) = f_cache().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let d = expected_degree(t, l)?;
    let h = d / 2;
    let top = (h + 1).min(d);
    let b = b_series_lattice(t, l, top + 1)?;
    let (num, den) = cofactor(t, l)?;
    let low = poly::series_div_int(&poly::mul(&b, &num), &den, top + 1);
    let mut coeffs = vec![BigInt::zero(); d + 1];
    for (i, c) in low.iter().enumerate() {
        coeffs[i] = c.clone();
    }
    for i in 0..=h {
        let (sign, e) = mirror_factor(t, l, d, i)?;
        let predicted = &low[i] * big_pow(l, e) * BigInt::from(sign);
        let j = d - i;
        if j <= top && low[j] != predicted {
            return Err(Error::NonIntegralQuotient(format!(
                "F_{l} of {} violates the functional equation at X^{j}",
                t.key()
            )));
        }
        coeffs[j] = predicted;
    }
    if !coeffs[0].is_one() {
        return Err(Error::NonIntegralQuotient(format!("constant term of F_{l} of {}", t.key())));
    }
    let f = SiegelSeriesPoly {
        coeffs: poly::trim(coeffs),
        prime: l,
        rank: r,
    };
    f_cache().lock().unwrap().insert(key, f.clone());
    Ok(f)
}

/// F_l(T; X) as used by the coefficient formulas: the elementary closed form in rank 1,
/// the half-depth lattice route otherwise.
pub fn local_siegel_poly(t: &HalfIntegralMatrix, l: u64) -> Result<SiegelSeriesPoly> {
    match t.size() {
        0 => Ok(SiegelSeriesPoly::one(l, 0)),
        1 => {
            let v = t.doubled()[0][0] / 2;
            if v == 0 {
                return Err(Error::Degenerate);
            }
            Ok(F_closed_rank1(&BigInt::from(v), l))
        }
        _ => F_from_b_fe(t, l),
    }
}

/// F_l(T; X) from the naive b prefix, truncated at the expected degree.
#[allow(non_snake_case)]
pub fn F_from_b_prefix(t: &HalfIntegralMatrix, l: u64) -> Result<SiegelSeriesPoly> {
    let d = expected_degree(t, l)?;
    let prefix = b_series_bruteforce(t, l, d as u32 + 1)?;
    let mut b: IntPoly = Vec::with_capacity(d + 2);
    for c in &prefix.coeffs {
        if !c.is_integer() {
            return Err(Error::NonIntegralQuotient(format!("b coefficient {c}")));
        }
        b.push(c.to_integer());
    }
    f_from_prefix(t, l, &b, d)
}

#[allow(non_snake_case)]
pub fn F_closed_rank1(t: &BigInt, l: u64) -> SiegelSeriesPoly {
    assert!(!t.is_zero());
    let (v, _) = crate::exactnum::arith::val_big(t, l);
    SiegelSeriesPoly {
        coeffs: (0..=v).map(|i| big_pow(l, i)).collect(),
        prime: l,
        rank: 1,
    }
}

/// Largest m with l^-m T integral at the odd prime l.
pub fn content_exponent(t: &HalfIntegralMatrix, l: u64) -> Result<u32> {
    if t.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    Ok(t.doubled_i128()
        .iter()
        .flatten()
        .filter(|&&x| x != 0)
        .map(|&x| val_i128(x, l))
        .min()
        .unwrap_or(0))
}

#[allow(non_snake_case)]
pub fn F_closed_rank2(t: &HalfIntegralMatrix, l: u64) -> Result<SiegelSeriesPoly> {
    if t.size() != 2 {
        return Err(Error::InvalidParams("rank-2 closed form needs a 2x2 matrix".into()));
    }
    if l == 2 {
        return Err(Error::EvenPrime);
    }
    let dd = det_data(t)?;
    let vf = val_i128(dd.cond.expect("even rank"), l) as i64;
    let x = i64::from(xi(t, l)?);
    let big_i = i64::from(content_exponent(t, l)?);
    let l2x = poly::scale_var_int(&[BigInt::zero(), BigInt::one()], &big_pow(l, 2));
    let geo = |top: i64| -> IntPoly {
        // sum_{j=0}^{top} (l^3 X^2)^j, empty when top < 0
        let mut out = vec![BigInt::zero(); 1];
        for j in 0..=top {
            let mut m = vec![BigInt::zero(); 2 * j as usize + 1];
            m[2 * j as usize] = big_pow(l, 3 * j as u32);
            out = poly::add(&out, &m);
        }
        out
    };
    let lx = vec![BigInt::zero(), BigInt::from(x) * BigInt::from(l)];
    let mut total: IntPoly = vec![BigInt::zero()];
    let mut pw: IntPoly = vec![BigInt::one()];
    for i in 0..=big_i {
        let inner = poly::sub(&geo(vf - i), &poly::mul(&lx, &geo(vf - i - 1)));
        total = poly::add(&total, &poly::mul(&pw, &inner));
        pw = poly::mul(&pw, &l2x);
    }
    Ok(SiegelSeriesPoly {
        coeffs: total,
        prime: l,
        rank: 2,
    })
}

/// Checks F(l^{-r-1} X^{-1}) against F(X) times the predicted monomial.
pub fn functional_equation_check(t: &HalfIntegralMatrix, l: u64, f: &SiegelSeriesPoly) -> bool {
    let r = t.size();
    let Ok(dd) = det_data(t) else {
        return false;
    };
    let c = &f.coeffs;
    let get = |i: i64| -> BigInt {
        if i < 0 {
            BigInt::zero()
        } else {
            c.get(i as usize).cloned().unwrap_or_else(BigInt::zero)
        }
    };
    let lr = Rational::from_integer(BigInt::from(l));
    let lp = |e: i64| crate::exactnum::rational_pow(&lr, e);
    if r % 2 == 0 {
        // f_i l^{(r+1)(v-i)} = f_{2v-i}
        let v = val_i128(dd.cond.expect("even rank"), l) as i64;
        let top = (c.len() as i64).max(2 * v + 1);
        (0..top).all(|i| {
            Rational::from_integer(get(i)) * lp((r as i64 + 1) * (v - i))
                == Rational::from_integer(get(2 * v - i))
        })
    } else {
        // f_i l^{((r+1)/2)(v-2i)} = eta f_{v-i}
        let Ok(e) = eta(t, l) else {
            return false;
        };
        let v = val_i128(dd.big_d, l) as i64;
        let h = (r as i64 + 1) / 2;
        let top = (c.len() as i64).max(v + 1);
        (0..top).all(|i| {
            Rational::from_integer(get(i)) * lp(h * (v - 2 * i))
                == Rational::from_integer(BigInt::from(e) * get(v - i))
        })
    }
}

/// Elementary symmetric polynomials s_0..s_r of {p^{j(2r-j+1)/2} X^j : 1 <= j <= r}.
pub fn elementary_symmetric_monomials(r: usize, p: u64) -> Vec<IntPoly> {
    let mut s: Vec<IntPoly> = vec![vec![BigInt::one()]];
    for j in 1..=r {
        let mut mono = vec![BigInt::zero(); j + 1];
        mono[j] = big_pow(p, (j * (2 * r - j + 1) / 2) as u32);
        let mut next: Vec<IntPoly> = vec![vec![BigInt::zero()]; s.len() + 1];
        for (m, sm) in s.iter().enumerate() {
            next[m] = poly::add(&next[m], sm);
            next[m + 1] = poly::add(&next[m + 1], &poly::mul(sm, &mono));
        }
        s = next;
    }
    s
}

/// Verifies the rank-reduction identity for the Siegel series of T' at p as an exact
/// polynomial identity, clearing the denominator P(X, 1).
pub fn spoly_identity_check(tp: &HalfIntegralMatrix, p: u64) -> Result<bool> {
    let r = tp.size();
    if r == 0 || tp.det_doubled() == 0 {
        return Err(Error::Degenerate);
    }
    let lhs = spoly_lhs(tp, p)?;
    let sp = StabilizationPolys::new(r, p);
    let mut rhs = sp.r_at_one();
    if r % 2 == 0 {
        let x = xi(tp, p)?;
        rhs = poly::mul(
            &rhs,
            &poly::one_minus_monomial(BigInt::from(x) * big_pow(p, (r / 2) as u32), 1),
        );
    }
    Ok(poly::mul(&lhs, &sp.p_at_one()) == rhs)
}

/// The combination on the left of the rank-reduction identity, for reporting.
pub fn spoly_lhs(tp: &HalfIntegralMatrix, p: u64) -> Result<IntPoly> {
    let r = tp.size();
    let s = elementary_symmetric_monomials(r, p);
    let mut lhs: IntPoly = vec![BigInt::zero()];
    for (m, sm) in s.iter().enumerate() {
        let f = F_from_b_fe(&scale(tp, (p as i64).pow((r - m) as u32)), p)?;
        let term = poly::mul(sm, &f.coeffs);
        lhs = if m % 2 == 0 {
            poly::add(&lhs, &term)
        } else {
            poly::sub(&lhs, &term)
        };
    }
    Ok(lhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hm(g: Vec<Vec<i64>>) -> HalfIntegralMatrix {
        HalfIntegralMatrix::from_doubled(g).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_one_convention() {
        // T = [1], l = 2: only R = 1/2 has mu = 2, and e(1/2) = -1
        let b = b_series_bruteforce(&HalfIntegralMatrix::diag(&[1]), 2, 2).unwrap();
        assert_eq!(b.coeffs, vec![Rational::one(), -Rational::one(), Rational::zero()]);
        // T = [1], l = 3: e(1/3) + e(2/3) = -1
        let b = b_series_bruteforce(&HalfIntegralMatrix::diag(&[1]), 3, 1).unwrap();
        assert_eq!(b.coeffs[1], -Rational::one());
    }

    #[test]
    fn rank_one_closed_form() {
        assert_eq!(F_closed_rank1(&BigInt::from(25), 5).coeffs, ints(&[1, 5, 25]));
        assert_eq!(F_closed_rank1(&BigInt::from(6), 5).coeffs, ints(&[1]));
        for (t, l) in [(1, 2), (2, 2), (12, 2), (9, 3), (54, 3), (50, 5)] {
            let m = HalfIntegralMatrix::diag(&[t]);
            let f = F_from_b(&m, l).unwrap();
            assert_eq!(f, F_closed_rank1(&BigInt::from(t), l), "t = {t}, l = {l}");
            assert_eq!(F_from_b_prefix(&m, l).unwrap(), f);
        }
    }

    #[test]
    fn naive_and_lattice_b_agree() {
        let cases = vec![
            (hm(vec![vec![2, 1], vec![1, 2]]), 2, 3),
            (hm(vec![vec![2, 0], vec![0, 4]]), 2, 3),
            (hm(vec![vec![2, 0], vec![0, 6]]), 3, 2),
            (hm(vec![vec![2, 1], vec![1, 8]]), 3, 2),
            (HalfIntegralMatrix::diag(&[1, 1, 1]), 2, 2),
            (HalfIntegralMatrix::diag(&[1, 1, 3]), 3, 1),
        ];
        for (t, l, m) in cases {
            let naive = b_series_bruteforce(&t, l, m).unwrap();
            let lat = b_series_lattice(&t, l, m as usize + 1).unwrap();
            for (i, c) in naive.coeffs.iter().enumerate() {
                let e = lat.get(i).cloned().unwrap_or_else(BigInt::zero);
                assert_eq!(*c, Rational::from_integer(e), "{t} at {l}, coefficient {i}");
            }
        }
    }

    #[test]
    fn unimodular_rank_two_is_one() {
        let t = hm(vec![vec![2, 1], vec![1, 2]]);
        for l in [2, 5, 7] {
            assert_eq!(F_from_b(&t, l).unwrap().coeffs, ints(&[1]));
        }
    }

    #[test]
    fn rank_three_degree_and_functional_equation() {
        for l in [2u64, 3] {
            let t = HalfIntegralMatrix::diag(&[1, 1, l as i64]);
            let f = F_from_b(&t, l).unwrap();
            assert_eq!(f.degree(), expected_degree(&t, l).unwrap());
            assert!(functional_equation_check(&t, l, &f));
        }
    }

    #[test]
    fn functional_equation_rank1() {
        let t = HalfIntegralMatrix::diag(&[9]);
        assert!(functional_equation_check(&t, 3, &F_closed_rank1(&BigInt::from(9), 3)));
        let bad = SiegelSeriesPoly {
            coeffs: ints(&[1, 3, 10]),
            prime: 3,
            rank: 1,
        };
        assert!(!functional_equation_check(&t, 3, &bad));
    }

    #[test]
    fn symmetric_functions() {
        // r = 2: s_1 = p^2 X + p^3 X^2, s_2 = p^5 X^3
        let s = elementary_symmetric_monomials(2, 3);
        assert_eq!(s[1], ints(&[0, 9, 27]));
        assert_eq!(s[2], ints(&[0, 0, 0, 243]));
    }

    #[test]
    fn identity_low_rank() {
        // r = 1: F(pt) - pX F(t) = 1
        let lhs = spoly_lhs(&HalfIntegralMatrix::diag(&[3]), 3).unwrap();
        assert_eq!(lhs, ints(&[1]));
        // r = 2: combination equals 1 - xi p X
        let t = hm(vec![vec![2, 1], vec![1, 2]]);
        let lhs = spoly_lhs(&t, 5).unwrap();
        let x = xi(&t, 5).unwrap() as i64;
        assert_eq!(lhs, ints(&[1, -5 * x]));
        assert!(spoly_identity_check(&HalfIntegralMatrix::identity(3), 3).unwrap());
    }
}
