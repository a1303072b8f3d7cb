//! Fourier coefficients of Siegel Eisenstein series of level M and their semi-ordinary
//! p-stabilization.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::exactnum::arith::{big_pow, prime_divisors};
use crate::exactnum::poly::{self, IntPoly};
use crate::exactnum::{rational_pow, CyclotomicNumber, Rational};
use crate::lvalues::{l_at_negative, l_depleted};
use crate::quadforms::{det_data, enumerate_indices, scale, HalfIntegralMatrix};
use crate::siegelseries::{elementary_symmetric_monomials, local_siegel_poly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinParams {
    pub genus: usize,
    pub weight: i64,
    pub character: DirichletCharacter,
}

impl EisensteinParams {
    pub fn new(genus: usize, weight: i64, character: DirichletCharacter) -> Result<Self> {
        if genus == 0 {
            return Err(Error::InvalidParams("genus must be positive".into()));
        }
        if weight <= genus as i64 + 1 {
            return Err(Error::InvalidParams(format!("weight {weight} must exceed genus + 1")));
        }
        let m = character.modulus();
        if m % 2 == 0 {
            return Err(Error::InvalidParams(format!("modulus {m} must be odd")));
        }
        if character.sign() != if weight % 2 == 0 { 1 } else { -1 } {
            return Err(Error::InvalidParams(format!(
                "parity of {character} does not match weight {weight}"
            )));
        }
        if m > 1 && !(character.is_primitive() && character.square_locally_nontrivial()) {
            return Err(Error::InvalidParams(format!(
                "{character} must be primitive with locally nontrivial square"
            )));
        }
        Ok(EisensteinParams {
            genus,
            weight,
            character,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "genus": self.genus,
            "weight": self.weight,
            "character": self.character.to_json(),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    pub params: EisensteinParams,
    /// Stabilization prime, if the table is p-stabilized.
    pub prime: Option<u64>,
    pub entries: BTreeMap<HalfIntegralMatrix, CyclotomicNumber>,
}

impl FourierTable {
    pub fn get(&self, t: &HalfIntegralMatrix) -> Option<&CyclotomicNumber> {
        self.entries.get(t)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut params = self.params.to_json();
        if let Some(p) = self.prime {
            params["prime"] = serde_json::json!(p);
        }
        let entries: serde_json::Map<String, serde_json::Value> =
            self.entries.iter().map(|(k, v)| (k.key(), v.to_json())).collect();
        serde_json::json!({ "params": params, "entries": entries })
    }
}

/// Bivariate integer polynomial stored by powers of Y, each an IntPoly in X.
pub type BiPoly = Vec<IntPoly>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationPolys {
    pub genus: usize,
    pub prime: u64,
    pub p: BiPoly,
    pub r: BiPoly,
    pub rtilde: BiPoly,
}

/// f * (1 - c X^a Y)
fn times_factor(f: &BiPoly, c: BigInt, a: usize) -> BiPoly {
    let mut out: BiPoly = vec![vec![BigInt::zero()]; f.len() + 1];
    let mut mono = vec![BigInt::zero(); a + 1];
    mono[a] = c;
    for (k, fk) in f.iter().enumerate() {
        out[k] = poly::add(&out[k], fk);
        out[k + 1] = poly::sub(&out[k + 1], &poly::mul(fk, &mono));
    }
    out
}

fn at_y_one(f: &BiPoly) -> IntPoly {
    f.iter().fold(vec![BigInt::zero()], |acc, c| poly::add(&acc, c))
}

impl StabilizationPolys {
    pub fn new(n: usize, p: u64) -> Self {
        let mut pp: BiPoly = vec![vec![BigInt::one()]];
        pp = times_factor(&pp, big_pow(p, n as u32), 1);
        for i in 1..=n / 2 {
            pp = times_factor(&pp, big_pow(p, (2 * n - 2 * i + 1) as u32), 2);
        }
        let mut rr: BiPoly = vec![vec![BigInt::one()]];
        for j in 1..=n {
            rr = times_factor(&rr, big_pow(p, (j * (2 * n - j + 1) / 2) as u32), j);
        }
        let mut rtilde = rr.clone();
        rtilde.reverse();
        StabilizationPolys {
            genus: n,
            prime: p,
            p: pp,
            r: rr,
            rtilde,
        }
    }

    pub fn p_at_one(&self) -> IntPoly {
        at_y_one(&self.p)
    }

    pub fn r_at_one(&self) -> IntPoly {
        at_y_one(&self.r)
    }

    /// P(X, 1) divides R(X, 1) in Z[X].
    pub fn p_divides_r(&self) -> bool {
        poly::div_exact_int(&self.r_at_one(), &self.p_at_one()).is_some()
    }
}

pub fn stabilization_polys(n: usize, p: u64) -> StabilizationPolys {
    StabilizationPolys::new(n, p)
}

/// x = chi(p) p^{kappa - n - 1}
fn stabilization_point(params: &EisensteinParams, p: u64) -> CyclotomicNumber {
    let e = params.weight - params.genus as i64 - 1;
    params
        .character
        .evaluate(p as i64)
        .scale(&rational_pow(&Rational::from_integer(BigInt::from(p)), e))
}

/// Checks P(chi(p) p^{kappa-n-1}, 1) against the product of the two Euler factors.
pub fn local_factor_check(params: &EisensteinParams, p: u64) -> bool {
    let n = params.genus;
    let k = params.weight;
    let x = stabilization_point(params, p);
    let lhs = poly::eval_int_at_cyc(&StabilizationPolys::new(n, p).p_at_one(), &x);
    let chi_p = params.character.evaluate(p as i64);
    let chi2_p = &chi_p * &chi_p;
    let pr = Rational::from_integer(BigInt::from(p));
    let mut rhs = &CyclotomicNumber::one() - &chi_p.scale(&rational_pow(&pr, k - 1));
    for i in 1..=(n / 2) as i64 {
        let f = &CyclotomicNumber::one() - &chi2_p.scale(&rational_pow(&pr, 2 * k - 2 * i - 1));
        rhs = &rhs * &f;
    }
    lhs == rhs
}

fn lvalue(k: i64, psi: &DirichletCharacter, p: Option<u64>) -> Result<CyclotomicNumber> {
    let k = usize::try_from(k).map_err(|_| Error::InvalidParams(format!("L-value at {}", 1 - k)))?;
    match p {
        Some(p) => l_depleted(k, psi, p),
        None => l_at_negative(k, psi),
    }
}

fn coefficient(params: &EisensteinParams, t: &HalfIntegralMatrix, p: Option<u64>) -> Result<CyclotomicNumber> {
    let n = params.genus;
    if t.size() != n {
        return Err(Error::InvalidParams(format!("index {t} is not of size {n}")));
    }
    if !t.is_psd() {
        return Err(Error::InvalidParams(format!("index {t} is not positive semidefinite")));
    }
    if let Some(p) = p {
        if params.character.modulus() % p == 0 {
            return Err(Error::InvalidParams(format!("p = {p} divides the level")));
        }
    }
    let (tp, _) = t.block_reduce();
    let r = tp.size();
    let kappa = params.weight;
    let chi = &params.character;
    let two_exp = ((r + 1) / 2) as i64 - ((n + 1) / 2) as i64;
    let mut out = CyclotomicNumber::from_rational(rational_pow(&Rational::from_integer(BigInt::from(2)), two_exp));
    let chi2 = chi.power(2);
    for i in (r / 2 + 1)..=(n / 2) {
        out = &out * &lvalue(2 * kappa - 2 * i as i64, &chi2, p)?;
    }
    let dd = det_data(&tp)?;
    let primes = if r % 2 == 0 {
        let d = i64::try_from(dd.fund.expect("even rank")).map_err(|_| Error::InvalidParams("discriminant".into()))?;
        let psi = DirichletCharacter::kronecker_character(d).twist(chi);
        out = &out * &lvalue(kappa - (r / 2) as i64, &psi, p)?;
        prime_divisors(dd.cond.expect("even rank").unsigned_abs() as u64)
    } else {
        prime_divisors(dd.big_d.unsigned_abs() as u64)
    };
    for l in primes {
        if Some(l) == p {
            continue;
        }
        let chi_l = chi.evaluate(l as i64);
        if chi_l.is_zero() {
            continue;
        }
        let x = chi_l.scale(&rational_pow(
            &Rational::from_integer(BigInt::from(l)),
            kappa - r as i64 - 1,
        ));
        out = &out * &local_siegel_poly(&tp, l)?.eval_cyc(&x);
    }
    Ok(out)
}

pub fn classical_coefficient(params: &EisensteinParams, t: &HalfIntegralMatrix) -> Result<CyclotomicNumber> {
    coefficient(params, t, None)
}

pub fn stabilized_coefficient(params: &EisensteinParams, p: u64, t: &HalfIntegralMatrix) -> Result<CyclotomicNumber> {
    coefficient(params, t, Some(p))
}

/// Re-indexes A(T) -> A(pT) on the given indices.
pub fn u_pn_apply(table: &FourierTable, p: u64, indices: &[HalfIntegralMatrix]) -> Result<FourierTable> {
    let mut entries = BTreeMap::new();
    for t in indices {
        let pt = scale(t, p as i64);
        let v = table.entries.get(&pt).ok_or_else(|| Error::MissingIndex(pt.key()))?;
        entries.insert(t.clone(), v.clone());
    }
    Ok(FourierTable {
        params: table.params.clone(),
        prime: table.prime,
        entries,
    })
}

/// Indices T of the table for which pT is also present.
pub fn u_pn_domain(table: &FourierTable, p: u64) -> Vec<HalfIntegralMatrix> {
    table
        .entries
        .keys()
        .filter(|t| table.entries.contains_key(&scale(t, p as i64)))
        .cloned()
        .collect()
}

/// Stabilized coefficient at T through the operator expansion of the stabilization.
pub fn stabilized_via_operator_at(params: &EisensteinParams, p: u64, t: &HalfIntegralMatrix) -> Result<CyclotomicNumber> {
    let n = params.genus;
    let x = stabilization_point(params, p);
    let sp = StabilizationPolys::new(n, p);
    let ratio = &poly::eval_int_at_cyc(&sp.p_at_one(), &x)
        * &poly::eval_int_at_cyc(&sp.r_at_one(), &x)
            .inverse()
            .ok_or_else(|| Error::InvalidParams("R(x, 1) vanishes".into()))?;
    let s = elementary_symmetric_monomials(n, p);
    let mut acc = CyclotomicNumber::zero();
    for (m, sm) in s.iter().enumerate() {
        let c = poly::eval_int_at_cyc(sm, &x);
        let a = classical_coefficient(params, &scale(t, (p as i64).pow((n - m) as u32)))?;
        let term = &c * &a;
        acc = if m % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    Ok(&ratio * &acc)
}

fn fill(
    params: &EisensteinParams,
    prime: Option<u64>,
    indices: Vec<HalfIntegralMatrix>,
    f: impl Fn(&HalfIntegralMatrix) -> Result<CyclotomicNumber> + Sync,
) -> Result<FourierTable> {
    let values: Vec<(HalfIntegralMatrix, CyclotomicNumber)> = indices
        .into_par_iter()
        .map(|t| f(&t).map(|v| (t, v)))
        .collect::<Result<_>>()?;
    Ok(FourierTable {
        params: params.clone(),
        prime,
        entries: values.into_iter().collect(),
    })
}

pub fn stabilize_via_operator(params: &EisensteinParams, p: u64, trace_bound: i64) -> Result<FourierTable> {
    let idx = enumerate_indices(params.genus, trace_bound);
    fill(params, Some(p), idx, |t| stabilized_via_operator_at(params, p, t))
}

/// Classical table (p = None) or stabilized table, for all indices with trace <= bound.
pub fn build_table(params: &EisensteinParams, p: Option<u64>, trace_bound: i64) -> Result<FourierTable> {
    let idx = enumerate_indices(params.genus, trace_bound);
    build_table_on(params, p, idx)
}

pub fn build_table_on(
    params: &EisensteinParams,
    p: Option<u64>,
    indices: Vec<HalfIntegralMatrix>,
) -> Result<FourierTable> {
    fill(params, p, indices, |t| coefficient(params, t, p))
}
