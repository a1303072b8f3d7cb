//! Dirichlet L-values at non-positive integers through generalized Bernoulli numbers.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::exactnum::arith::binomial_big;
use crate::exactnum::{cyclotomic_root_of_unity, CyclotomicNumber, Rational};

fn bernoulli_memo() -> &'static Mutex<Vec<Rational>> {
    static MEMO: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(vec![Rational::one()]))
}

/// k-th Bernoulli number, B_1 = -1/2.
pub fn bernoulli(k: usize) -> Rational {
    let mut memo = bernoulli_memo().lock().unwrap();
    while memo.len() <= k {
        // sum_{j=0}^{m} C(m+1, j) B_j = 0
        let m = memo.len();
        let mut acc = Rational::zero();
        for (j, b) in memo.iter().enumerate() {
            acc += Rational::from_integer(binomial_big(m as u64 + 1, j as u64)) * b;
        }
        let next = -acc / Rational::from_integer(BigInt::from(m + 1));
        memo.push(next);
    }
    memo[k].clone()
}

type GenBernoulliKey = (usize, u64, Vec<u64>);

fn gen_bernoulli_memo() -> &'static Mutex<HashMap<GenBernoulliKey, CyclotomicNumber>> {
    static MEMO: OnceLock<Mutex<HashMap<GenBernoulliKey, CyclotomicNumber>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// B_{k,chi} = M^{k-1} sum_{a=1}^{M} chi(a) B_k(a/M).
pub fn gen_bernoulli(k: usize, chi: &DirichletCharacter) -> CyclotomicNumber {
    assert!(k >= 1);
    let key = (k, chi.modulus(), chi.exponents());
    if let Some(v) = gen_bernoulli_memo().lock().unwrap().get(&key) {
        return v.clone();
    }
    let m = chi.modulus();
    let d = chi.order() as usize;
    // M^{k-1} B_k(a/M) = sum_j C(k, j) B_j a^{k-j} M^{j-1}
    let bs: Vec<Rational> = (0..=k).map(bernoulli).collect();
    let mb = BigInt::from(m);
    let weights: Vec<Rational> = (0..=k)
        .map(|j| {
            let c = Rational::from_integer(binomial_big(k as u64, j as u64)) * &bs[j];
            if j == 0 {
                c / Rational::from_integer(mb.clone())
            } else {
                c * Rational::from_integer(num_traits::pow(mb.clone(), j - 1))
            }
        })
        .collect();
    // integer power sums sum_{chi(a) = zeta^e} a^i, i <= k
    let mut psums: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); k + 1]; d];
    for a in 1..=m {
        let Some(e) = chi.value_exp(a as i64) else {
            continue;
        };
        let ab = BigInt::from(a);
        let mut apow = BigInt::one();
        for slot in psums[e as usize].iter_mut() {
            *slot += &apow;
            apow *= &ab;
        }
    }
    let by_exp: Vec<Rational> = psums
        .iter()
        .map(|ps| {
            (0..=k)
                .filter(|&j| !weights[j].is_zero())
                .map(|j| &weights[j] * Rational::from_integer(ps[k - j].clone()))
                .fold(Rational::zero(), |acc, x| acc + x)
        })
        .collect();
    let mut out = CyclotomicNumber::zero();
    for (e, c) in by_exp.into_iter().enumerate() {
        if !c.is_zero() {
            out = &out + &cyclotomic_root_of_unity(d as u64, e as i64).scale(&c);
        }
    }
    gen_bernoulli_memo().lock().unwrap().insert(key, out.clone());
    out
}

/// L(1 - k, chi) = -B_{k,chi} / k.
pub fn l_at_negative(k: usize, chi: &DirichletCharacter) -> Result<CyclotomicNumber> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    if k == 1 && chi.modulus() == 1 {
        return Err(Error::PoleAtOne);
    }
    let b = gen_bernoulli(k, chi);
    Ok(b.scale(&-Rational::new(BigInt::one(), BigInt::from(k))))
}

/// (1 - chi(p) p^{k-1}) L(1 - k, chi).
pub fn l_depleted(k: usize, chi: &DirichletCharacter, p: u64) -> Result<CyclotomicNumber> {
    let l = l_at_negative(k, chi)?;
    let pk = Rational::from_integer(num_traits::pow(BigInt::from(p), k - 1));
    let factor = &CyclotomicNumber::one() - &chi.evaluate(p as i64).scale(&pk);
    Ok(&factor * &l)
}
