//! p-adic interpolation of the stabilized coefficients in the weight variable.
//!
//! Elements of Lambda = Z_p[[X]] are stored modulo (p^M, X^N). Values of characters of order
//! d | p - 1 are embedded into Z_p by sending the canonical root of unity zeta_d to the
//! Teichmueller lift of g^{(p-1)/d}, g the least primitive root mod p.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::characters::DirichletCharacter;
use crate::eisenstein::EisensteinParams;
use crate::error::{Error, Result};
use crate::exactnum::arith::{big_pow, prime_divisors, val_big};
use crate::exactnum::poly::{self, RatPoly};
use crate::exactnum::{rational_pow, CyclotomicNumber, Rational};
use crate::lvalues::l_depleted;
use crate::quadforms::{det_data, HalfIntegralMatrix};
use crate::siegelseries::local_siegel_poly;

/// An element of Z_p known modulo p^precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicInt {
    residue: BigInt,
    p: u64,
    precision: u32,
}

impl PadicInt {
    pub fn new(x: BigInt, p: u64, precision: u32) -> Self {
        let m = big_pow(p, precision);
        PadicInt {
            residue: x.mod_floor(&m),
            p,
            precision,
        }
    }

    pub fn from_int(x: i64, p: u64, precision: u32) -> Self {
        Self::new(BigInt::from(x), p, precision)
    }

    /// Image of a p-integral rational.
    pub fn from_rational(q: &Rational, p: u64, precision: u32) -> Result<Self> {
        let m = big_pow(p, precision);
        let den = q.denom();
        if (den % BigInt::from(p)).is_zero() {
            return Err(Error::NotAUnit(format!("denominator of {q}")));
        }
        let inv = den.modinv(&m).expect("unit denominator");
        Ok(Self::new(q.numer() * inv, p, precision))
    }

    pub fn residue(&self) -> &BigInt {
        &self.residue
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn modulus(&self) -> BigInt {
        big_pow(self.p, self.precision)
    }

    pub fn is_zero(&self) -> bool {
        self.residue.is_zero()
    }

    /// Valuation, capped at the precision.
    pub fn val(&self) -> u32 {
        if self.residue.is_zero() {
            return self.precision;
        }
        val_big(&self.residue, self.p).0
    }

    pub fn reduce(&self, precision: u32) -> Self {
        Self::new(self.residue.clone(), self.p, precision.min(self.precision))
    }

    /// Equality modulo p^k (k capped by both precisions).
    pub fn eq_mod(&self, other: &Self, k: u32) -> bool {
        let k = k.min(self.precision).min(other.precision);
        let m = big_pow(self.p, k);
        (&self.residue - &other.residue).mod_floor(&m).is_zero()
    }

    fn binop(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.p, other.p, "p-adic primes differ");
        let prec = self.precision.min(other.precision);
        Self::new(f(&self.residue, &other.residue), self.p, prec)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a * b)
    }

    pub fn neg(&self) -> Self {
        Self::new(-&self.residue, self.p, self.precision)
    }

    pub fn scale(&self, c: i64) -> Self {
        Self::new(&self.residue * c, self.p, self.precision)
    }

    pub fn inverse(&self) -> Result<Self> {
        let m = self.modulus();
        self.residue
            .modinv(&m)
            .map(|r| Self::new(r, self.p, self.precision))
            .ok_or_else(|| Error::NotAUnit(self.residue.to_string()))
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = self.modulus();
        Self::new(self.residue.modpow(&BigInt::from(e), &m), self.p, self.precision)
    }
}

impl fmt::Display for PadicInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}^{}", self.residue, self.p, self.precision)
    }
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !crate::exactnum::arith::is_prime(p) {
        return Err(Error::InvalidParams(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// omega(x): the (p-1)-th root of unity congruent to x mod p.
pub fn teichmuller(x: i64, p: u64, precision: u32) -> Result<PadicInt> {
    check_odd_prime(p)?;
    if x.rem_euclid(p as i64) == 0 {
        return Err(Error::NotAUnit(x.to_string()));
    }
    let mut y = PadicInt::from_int(x, p, precision);
    loop {
        let next = y.pow(p);
        if next == y {
            return Ok(y);
        }
        y = next;
    }
}

/// <x> = omega(x)^-1 x.
pub fn angle_part(x: i64, p: u64, precision: u32) -> Result<PadicInt> {
    let w = teichmuller(x, p, precision)?;
    Ok(w.inverse()?.mul(&PadicInt::from_int(x, p, precision)))
}

/// log_p(x) for x = 1 mod p, to the precision of x.
pub fn padic_log(x: &PadicInt) -> Result<PadicInt> {
    let p = x.p;
    let prec = x.precision;
    let z = &x.residue - BigInt::one();
    if !(&z % BigInt::from(p)).is_zero() {
        return Err(Error::NotOnePlusP(x.residue.to_string()));
    }
    let m = x.modulus();
    let mut acc = BigInt::zero();
    let mut k: u64 = 1;
    loop {
        let v = val_big(&BigInt::from(k), p).0;
        // the term z^k / k has valuation at least k - v
        if k >= u64::from(prec) + u64::from(v) {
            // k - log_p(k) is increasing, so all later terms vanish mod p^prec
            if k > 2 * u64::from(prec) + 8 {
                break;
            }
            k += 1;
            continue;
        }
        let mv = big_pow(p, prec + v);
        let zk = z.modpow(&BigInt::from(k), &mv);
        let pv = big_pow(p, v);
        debug_assert!((&zk % &pv).is_zero());
        let u = BigInt::from(k) / &pv;
        let term = (zk / pv) * u.modinv(&m).expect("unit");
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
        k += 1;
    }
    Ok(PadicInt::new(acc, p, prec))
}

/// s(x) = log_p(x) / log_p(1 + p), losing one digit of precision.
pub fn s_of(x: &PadicInt) -> Result<PadicInt> {
    let p = x.p;
    let prec = x.precision;
    if prec < 2 {
        return Err(Error::PrecisionExhausted("s(x) needs at least two digits".into()));
    }
    let lx = padic_log(x)?;
    let lq = padic_log(&PadicInt::from_int(1 + p as i64, p, prec))?;
    let pb = BigInt::from(p);
    let (num, den) = (lx.residue / &pb, lq.residue / &pb);
    let den = PadicInt::new(den, p, prec - 1).inverse()?;
    Ok(PadicInt::new(num, p, prec - 1).mul(&den))
}

/// s(<l>) modulo p^precision.
pub fn s_of_angle(l: i64, p: u64, precision: u32) -> Result<PadicInt> {
    s_of(&angle_part(l, p, precision + 1)?)
}

/// A class of Z_p[[X]] modulo (p^pprec, X^xprec).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaElement {
    p: u64,
    pprec: u32,
    coeffs: Vec<BigInt>,
}

impl LambdaElement {
    pub fn from_residues(p: u64, pprec: u32, coeffs: Vec<BigInt>) -> Self {
        let m = big_pow(p, pprec);
        LambdaElement {
            p,
            pprec,
            coeffs: coeffs.into_iter().map(|c| c.mod_floor(&m)).collect(),
        }
    }

    pub fn zero(p: u64, pprec: u32, xprec: usize) -> Self {
        Self::from_residues(p, pprec, vec![BigInt::zero(); xprec])
    }

    pub fn constant(c: &PadicInt, xprec: usize) -> Self {
        let mut v = vec![BigInt::zero(); xprec];
        if xprec > 0 {
            v[0] = c.residue.clone();
        }
        Self::from_residues(c.p, c.precision, v)
    }

    /// Embeds a polynomial with p-integral rational coefficients.
    pub fn from_rat_poly(f: &[Rational], p: u64, pprec: u32, xprec: usize) -> Result<Self> {
        let mut v = vec![BigInt::zero(); xprec];
        for (i, c) in f.iter().enumerate().take(xprec) {
            v[i] = PadicInt::from_rational(c, p, pprec)?.residue;
        }
        Ok(Self::from_residues(p, pprec, v))
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn pprec(&self) -> u32 {
        self.pprec
    }

    pub fn xprec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> PadicInt {
        PadicInt::new(self.coeffs[k].clone(), self.p, self.pprec)
    }

    pub fn residues(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn truncate(&self, pprec: u32, xprec: usize) -> Self {
        let mut v = self.coeffs.clone();
        v.resize(xprec.min(v.len()), BigInt::zero());
        Self::from_residues(self.p, pprec.min(self.pprec), v)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.xprec().min(other.xprec());
        let v = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Self::from_residues(self.p, self.pprec.min(other.pprec), v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.xprec().min(other.xprec());
        let v = (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect();
        Self::from_residues(self.p, self.pprec.min(other.pprec), v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.xprec().min(other.xprec());
        let pprec = self.pprec.min(other.pprec);
        let m = big_pow(self.p, pprec);
        let mut v = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate().take(n) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n - i) {
                v[i + j] += a * b;
            }
        }
        for c in v.iter_mut() {
            *c = c.mod_floor(&m);
        }
        Self::from_residues(self.p, pprec, v)
    }

    pub fn scale(&self, c: &PadicInt) -> Self {
        let v = self.coeffs.iter().map(|x| x * &c.residue).collect();
        Self::from_residues(self.p, self.pprec.min(c.precision), v)
    }

    /// f(Y(X)) truncated to `xprec` terms; Y must have constant term divisible by p.
    /// Coefficients f_k with k >= xprec + pprec do not affect the result.
    pub fn compose(&self, y: &Self, xprec: usize) -> Result<Self> {
        if !(&y.coeffs[0] % BigInt::from(self.p)).is_zero() {
            return Err(Error::InvalidParams("substituted series must vanish mod p at 0".into()));
        }
        let pprec = self.pprec.min(y.pprec);
        let y = y.truncate(pprec, xprec);
        let mut acc = Self::zero(self.p, pprec, xprec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&y);
            acc.coeffs[0] += c;
            acc = Self::from_residues(self.p, pprec, acc.coeffs);
        }
        Ok(acc)
    }

    /// f(x) for an integer x divisible by p, known modulo p^min(pprec, xprec * val(x)).
    pub fn evaluate(&self, x: &BigInt) -> PadicInt {
        let v = val_big(x, self.p).0.max(1);
        let prec = self
            .pprec
            .min(u32::try_from(self.xprec()).unwrap_or(u32::MAX).saturating_mul(v));
        let m = big_pow(self.p, prec);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = (acc * x + c).mod_floor(&m);
        }
        PadicInt::new(acc, self.p, prec)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

/// Sum_{k < xprec} C(s, k) X^k, i.e. (1 + X)^s.
pub fn binomial_series(s: &PadicInt, xprec: usize, pprec: u32) -> Result<LambdaElement> {
    let p = s.p;
    let m = big_pow(p, pprec);
    let mut out = Vec::with_capacity(xprec);
    let mut fact_val = 0u32;
    let mut fact_unit = BigInt::one();
    for k in 0..xprec {
        if k > 0 {
            let (v, u) = val_big(&BigInt::from(k), p);
            fact_val += v;
            fact_unit *= u;
        }
        let need = pprec + fact_val;
        if s.precision < need {
            return Err(Error::PrecisionExhausted(format!(
                "binomial coefficient {k} needs s to p^{need}, have p^{}",
                s.precision
            )));
        }
        let mk = big_pow(p, need);
        let mut num = BigInt::one();
        for i in 0..k {
            num = (num * (&s.residue - BigInt::from(i))).mod_floor(&mk);
        }
        let pv = big_pow(p, fact_val);
        if !(&num % &pv).is_zero() {
            return Err(Error::PrecisionExhausted(format!("binomial coefficient {k} is not integral")));
        }
        let c = (num / pv) * fact_unit.modinv(&m).expect("unit part of k!");
        out.push(c);
    }
    Ok(LambdaElement::from_residues(p, pprec, out))
}

/// Precision of s needed by binomial_series with these sizes.
pub fn binomial_precision(p: u64, xprec: usize, pprec: u32) -> u32 {
    let v: u32 = (1..xprec.max(1)).map(|k| val_big(&BigInt::from(k), p).0).sum();
    pprec + v
}

/// Image of zeta_d for d | p - 1.
fn root_image(d: u64, p: u64, precision: u32) -> Result<PadicInt> {
    if (p - 1) % d != 0 {
        return Err(Error::InvalidCharacter(format!(
            "values of order {d} do not embed into Z_{p}"
        )));
    }
    let g = DirichletCharacter::teichmuller(p).generators()[0].residue;
    Ok(teichmuller(g as i64, p, precision)?.pow((p - 1) / d))
}

/// Image of a p-integral cyclotomic number under the fixed embedding.
pub fn embed_cyclotomic(z: &CyclotomicNumber, p: u64, precision: u32) -> Result<PadicInt> {
    let z = if (p - 1) % z.conductor() == 0 { z.clone() } else { z.simplify() };
    let d = z.conductor();
    let w = root_image(d, p, precision)?;
    let mut acc = PadicInt::from_int(0, p, precision);
    let mut wp = PadicInt::from_int(1, p, precision);
    for c in z.coeffs() {
        if !c.is_zero() {
            acc = acc.add(&PadicInt::from_rational(c, p, precision)?.mul(&wp));
        }
        wp = wp.mul(&w);
    }
    Ok(acc)
}

/// Image of p^shift * z, for z with bounded p-power denominators.
pub fn embed_scaled(z: &CyclotomicNumber, shift: u32, p: u64, precision: u32) -> Result<PadicInt> {
    let pr = Rational::from_integer(BigInt::from(p));
    embed_cyclotomic(&z.scale(&rational_pow(&pr, i64::from(shift))), p, precision)
}

/// Y_k = (1 + p)^k - 1.
fn node(p: u64, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(p + 1), k as usize) - BigInt::one()
}

/// Weights k >= 2 with k = b mod (p - 1), in increasing order.
fn node_weights(p: u64, b: u64, count: usize) -> Vec<u64> {
    let step = p - 1;
    let mut k0 = b % step;
    while k0 < 2 {
        k0 += step;
    }
    (0..count as u64).map(|t| k0 + t * step).collect()
}

/// Whether psi * omega^b is the trivial character.
fn trivial_branch(psi: &DirichletCharacter, b: u64, p: u64) -> bool {
    psi.is_trivial() && b % (p - 1) == 0
}

/// The interpolated value at weight k = b mod (p - 1).
fn lbar_sample(psi: &DirichletCharacter, b: u64, p: u64, k: u64) -> Result<CyclotomicNumber> {
    let l = l_depleted(k as usize, psi, p)?;
    if trivial_branch(psi, b, p) {
        Ok(l.scale(&Rational::from_integer(node(p, k))))
    } else {
        Ok(l)
    }
}

type LbarKey = (String, u64, u64, usize, u32);

fn lbar_cache() -> &'static Mutex<HashMap<LbarKey, LambdaElement>> {
    static CACHE: OnceLock<Mutex<HashMap<LbarKey, LambdaElement>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Lambda element interpolating psi omega^b, modulo (p^pprec, X^xprec).
///
/// Values at X = Y_k for k = b mod (p - 1) are exact. The Newton interpolating polynomial
/// through xprec + pprec nodes agrees with the power series modulo (p^pprec, X^xprec),
/// because the node polynomial prod (X - Y_k) is congruent to X^{#nodes} with the j-th
/// coefficient divisible by p^{#nodes - j}. Two further weights are checked against the
/// truncated series.
#[allow(non_snake_case)]
pub fn dirichlet_Lbar_series(
    psi: &DirichletCharacter,
    b: u64,
    p: u64,
    xprec: usize,
    pprec: u32,
) -> Result<LambdaElement> {
    check_odd_prime(p)?;
    if psi.modulus() % p == 0 {
        return Err(Error::InvalidCharacter(format!("{psi} is ramified at {p}")));
    }
    let psi = psi.primitive();
    let key = (psi.spec(), b % (p - 1), p, xprec, pprec);
    if let Some(v) = lbar_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let count = xprec + pprec as usize;
    let weights = node_weights(p, b, count + 2);
    let (nodes_k, held) = weights.split_at(count);
    let ys: Vec<Rational> = nodes_k.iter().map(|&k| Rational::from_integer(node(p, k))).collect();
    let mut dd: Vec<CyclotomicNumber> = nodes_k
        .iter()
        .map(|&k| lbar_sample(&psi, b, p, k))
        .collect::<Result<_>>()?;
    // Newton divided differences, in place
    for j in 1..count {
        for i in (j..count).rev() {
            let inv = (&ys[i] - &ys[i - j]).recip();
            dd[i] = (&dd[i] - &dd[i - 1]).scale(&inv);
        }
    }
    // Newton form to monomials
    let mut mono: Vec<CyclotomicNumber> = vec![CyclotomicNumber::zero(); count];
    for j in (0..count).rev() {
        // mono <- mono * (X - y_j) + dd_j
        let mut next = vec![CyclotomicNumber::zero(); count];
        for i in 0..count {
            if mono[i].is_zero() {
                continue;
            }
            if i + 1 < count {
                next[i + 1] = &next[i + 1] + &mono[i];
            }
            next[i] = &next[i] - &mono[i].scale(&ys[j]);
        }
        next[0] = &next[0] + &dd[j];
        mono = next;
    }
    let mut coeffs = Vec::with_capacity(xprec);
    for c in mono.iter().take(xprec) {
        let e = embed_cyclotomic(c, p, pprec).map_err(|e| match e {
            Error::NotAUnit(_) => Error::PrecisionExhausted(format!(
                "interpolated coefficient of {psi} omega^{b} is not p-integral"
            )),
            other => other,
        })?;
        coeffs.push(e.residue);
    }
    let out = LambdaElement::from_residues(p, pprec, coeffs);
    for &k in held {
        let want = embed_cyclotomic(&lbar_sample(&psi, b, p, k)?, p, pprec)?;
        let got = out.evaluate(&node(p, k));
        if !got.eq_mod(&want, pprec) {
            return Err(Error::ValidationFailed(format!(
                "{psi} omega^{b} at weight {k}: {got} vs {want}"
            )));
        }
    }
    lbar_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// Denominator factor (1 + p)^{-j} (1 + X)^e - 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PoleFactor {
    pub shift: u32,
    pub power: u32,
}

impl PoleFactor {
    pub fn exact_poly(&self, p: u64) -> RatPoly {
        let c = rational_pow(&Rational::from_integer(BigInt::from(1 + p)), -i64::from(self.shift));
        let e = self.power as u64;
        let mut out: RatPoly = (0..=e)
            .map(|i| &c * Rational::from_integer(crate::exactnum::arith::binomial_big(e, i)))
            .collect();
        out[0] -= Rational::one();
        poly::trim(out)
    }

    /// Exact value at X = (1 + p)^kappa - 1.
    pub fn value_at_weight(&self, p: u64, kappa: i64) -> Rational {
        let q = Rational::from_integer(BigInt::from(1 + p));
        rational_pow(&q, i64::from(self.power) * kappa - i64::from(self.shift)) - Rational::one()
    }
}

/// numerator / prod(pole factors).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaFraction {
    pub numerator: LambdaElement,
    pub poles: Vec<PoleFactor>,
}

/// A p-adic number p^-shift * residue.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicValue {
    pub residue: PadicInt,
    pub shift: u32,
}

impl PadicValue {
    /// Absolute precision of the represented number.
    pub fn effective_precision(&self) -> i64 {
        i64::from(self.residue.precision) - i64::from(self.shift)
    }

    /// Compares with an exact cyclotomic number at the tracked precision.
    pub fn matches(&self, z: &CyclotomicNumber) -> Result<bool> {
        let e = embed_scaled(z, self.shift, self.residue.p, self.residue.precision)?;
        Ok(e.eq_mod(&self.residue, self.residue.precision))
    }
}

impl LambdaFraction {
    pub fn pole_order(&self) -> usize {
        self.poles.len()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut poles = self.poles.clone();
        poles.extend(other.poles.iter().copied());
        poles.sort();
        LambdaFraction {
            numerator: self.numerator.mul(&other.numerator),
            poles,
        }
    }

    pub fn specialize(&self, kappa: i64) -> Result<PadicValue> {
        let p = self.numerator.p;
        let x = node(p, kappa as u64);
        let num = self.numerator.evaluate(&x);
        let mut shift = 0;
        let mut unit = PadicInt::from_int(1, p, num.precision);
        for f in &self.poles {
            let v = f.value_at_weight(p, kappa);
            if v.is_zero() {
                return Err(Error::InvalidParams(format!("weight {kappa} hits a pole")));
            }
            let (a, u) = val_big(v.numer(), p);
            shift += a;
            unit = unit.mul(&PadicInt::from_rational(&(Rational::from_integer(u) / v.denom()), p, num.precision)?);
        }
        Ok(PadicValue {
            residue: num.mul(&unit.inverse()?),
            shift,
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pole_order": self.pole_order(),
            "poles": self.poles.iter().map(|f| serde_json::json!({"shift": f.shift, "power": f.power})).collect::<Vec<_>>(),
            "coeffs": self.numerator.to_strings(),
        })
    }
}

/// L(psi omega^b; (1 + p)^{-j} (1 + X)^e - 1) as a fraction.
fn l_factor(psi: &DirichletCharacter, b: u64, p: u64, shift: u32, power: u32, xprec: usize, pprec: u32) -> Result<LambdaFraction> {
    let lbar = dirichlet_Lbar_series(psi, b, p, xprec + pprec as usize, pprec)?;
    let f = PoleFactor { shift, power };
    let y = LambdaElement::from_rat_poly(&f.exact_poly(p), p, pprec, xprec)?;
    let numerator = lbar.compose(&y, xprec)?;
    let poles = if trivial_branch(&psi.primitive(), b, p) { vec![f] } else { Vec::new() };
    Ok(LambdaFraction { numerator, poles })
}

#[allow(non_snake_case)]
pub fn calL_series(psi: &DirichletCharacter, b: u64, p: u64, xprec: usize, pprec: u32) -> Result<LambdaFraction> {
    l_factor(psi, b, p, 0, 1, xprec, pprec)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaParams {
    pub genus: usize,
    pub character: DirichletCharacter,
    pub a: u64,
    pub p: u64,
    pub xprec: usize,
    pub pprec: u32,
}

impl LambdaParams {
    pub fn new(genus: usize, character: DirichletCharacter, a: u64, p: u64, xprec: usize, pprec: u32) -> Result<Self> {
        check_odd_prime(p)?;
        if genus == 0 {
            return Err(Error::InvalidParams("genus must be positive".into()));
        }
        if a >= p - 1 {
            return Err(Error::InvalidParams(format!("a = {a} must be below p - 1")));
        }
        if character.modulus() % p == 0 {
            return Err(Error::InvalidParams(format!("p = {p} divides the level")));
        }
        if (p - 1) % character.order() != 0 {
            return Err(Error::InvalidCharacter(format!(
                "order of {character} does not divide p - 1"
            )));
        }
        if xprec == 0 || pprec < 2 {
            return Err(Error::InvalidParams("precision too small".into()));
        }
        Ok(LambdaParams {
            genus,
            character,
            a,
            p,
            xprec,
            pprec,
        })
    }

    /// Classical parameters at a weight kappa = a mod (p - 1).
    pub fn classical_at(&self, kappa: i64) -> Result<EisensteinParams> {
        if kappa.rem_euclid(self.p as i64 - 1) as u64 != self.a {
            return Err(Error::InvalidParams(format!("weight {kappa} is not {} mod {}", self.a, self.p - 1)));
        }
        EisensteinParams::new(self.genus, kappa, self.character.clone())
    }
}

fn modp1(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64 - 1) as u64
}

/// The F_l factor with argument chi omega^a(l) l^{-r-1} (1 + X)^{s(<l>)}.
fn f_factor(params: &LambdaParams, tp: &HalfIntegralMatrix, l: u64) -> Result<Option<LambdaElement>> {
    let (p, n, m) = (params.p, params.xprec, params.pprec);
    let chi_l = params.character.evaluate(l as i64);
    if chi_l.is_zero() {
        return Ok(None);
    }
    let r = tp.size() as i64;
    let lr = Rational::from_integer(BigInt::from(l));
    let c = embed_cyclotomic(&chi_l, p, m)?
        .mul(&teichmuller(l as i64, p, m)?.pow(params.a))
        .mul(&PadicInt::from_rational(&rational_pow(&lr, -r - 1), p, m)?);
    let s = s_of_angle(l as i64, p, binomial_precision(p, n, m))?;
    let f = local_siegel_poly(tp, l)?;
    let mut acc = LambdaElement::zero(p, m, n);
    let mut ci = PadicInt::from_int(1, p, m);
    for (i, fi) in f.coeffs.iter().enumerate() {
        if !fi.is_zero() {
            let z = binomial_series(&s.scale(i as i64), n, m)?;
            let coef = ci.mul(&PadicInt::new(fi.clone(), p, m));
            acc = acc.add(&z.scale(&coef));
        }
        ci = ci.mul(&c);
    }
    Ok(Some(acc))
}

/// The Lambda-adic coefficient at T as an element of the fraction field.
pub fn lambda_coefficient(params: &LambdaParams, t: &HalfIntegralMatrix) -> Result<LambdaFraction> {
    let n = params.genus;
    if t.size() != n || !t.is_psd() {
        return Err(Error::InvalidParams(format!("index {t} is not a PSD matrix of size {n}")));
    }
    let (p, xn, m) = (params.p, params.xprec, params.pprec);
    let a = params.a as i64;
    let chi = &params.character;
    let (tp, _) = t.block_reduce();
    let r = tp.size();
    let two_exp = ((r + 1) / 2) as i64 - ((n + 1) / 2) as i64;
    let two = PadicInt::from_rational(&rational_pow(&Rational::from_integer(BigInt::from(2)), two_exp), p, m)?;
    let mut out = LambdaFraction {
        numerator: LambdaElement::constant(&two, xn),
        poles: Vec::new(),
    };
    let chi2 = chi.power(2);
    for i in (r / 2 + 1)..=(n / 2) {
        let f = l_factor(&chi2, modp1(2 * a - 2 * i as i64, p), p, 2 * i as u32, 2, xn, m)?;
        out = out.mul(&f);
    }
    let dd = det_data(&tp)?;
    let primes = if r % 2 == 0 {
        let d = i64::try_from(dd.fund.expect("even rank")).map_err(|_| Error::InvalidParams("discriminant".into()))?;
        let psi = DirichletCharacter::kronecker_character(d).twist(chi);
        let f = l_factor(&psi, modp1(a - (r / 2) as i64, p), p, (r / 2) as u32, 1, xn, m)?;
        out = out.mul(&f);
        prime_divisors(dd.cond.expect("even rank").unsigned_abs() as u64)
    } else {
        prime_divisors(dd.big_d.unsigned_abs() as u64)
    };
    for l in primes {
        if l == p {
            continue;
        }
        if let Some(f) = f_factor(params, &tp, l)? {
            out.numerator = out.numerator.mul(&f);
        }
    }
    Ok(out)
}

/// First display: prod_{i=1}^{[n/2]} {(1+p)^{-2i}(1+X)^2 - 1} prod_{j=0}^{[n/2]} {(1+p)^{-j}(1+X) - 1}.
pub fn b_poly_factors(n: usize) -> Vec<PoleFactor> {
    let mut out: Vec<PoleFactor> = (1..=n / 2)
        .map(|i| PoleFactor {
            shift: 2 * i as u32,
            power: 2,
        })
        .collect();
    out.extend((0..=n / 2).map(|j| PoleFactor {
        shift: j as u32,
        power: 1,
    }));
    out.sort();
    out
}

pub fn b_poly_exact(n: usize, p: u64) -> RatPoly {
    b_poly_factors(n)
        .iter()
        .fold(vec![Rational::one()], |acc, f| poly::mul(&acc, &f.exact_poly(p)))
}

/// Second display: X prod_{i=1}^{[n/2]} {(1+p)^{-i}(1+X) - 1}^2 {(1+p)^{-i}(1+X) + 1}.
pub fn b_poly_second_display(n: usize, p: u64) -> RatPoly {
    let mut out: RatPoly = vec![Rational::zero(), Rational::one()];
    for i in 1..=n / 2 {
        let lin = PoleFactor {
            shift: i as u32,
            power: 1,
        }
        .exact_poly(p);
        let mut plus = lin.clone();
        plus[0] += Rational::from_integer(BigInt::from(2));
        out = poly::mul(&out, &poly::mul(&poly::mul(&lin, &lin), &plus));
    }
    out
}

pub fn b_displays_agree(n: usize, p: u64) -> bool {
    b_poly_exact(n, p) == b_poly_second_display(n, p)
}

#[allow(non_snake_case)]
pub fn B_poly(n: usize, p: u64, xprec: usize, pprec: u32) -> Result<LambdaElement> {
    if !b_displays_agree(n, p) {
        return Err(Error::ValidationFailed(format!("the two forms of B for n = {n} differ")));
    }
    LambdaElement::from_rat_poly(&b_poly_exact(n, p), p, pprec, xprec)
}

/// B(X) times the Lambda-adic coefficient, with every pole cancelled against a factor of B.
pub fn integral_lambda_coefficient(params: &LambdaParams, t: &HalfIntegralMatrix) -> Result<LambdaFraction> {
    let frac = lambda_coefficient(params, t)?;
    let (p, n, m) = (params.p, params.xprec, params.pprec);
    let mut remaining = b_poly_factors(params.genus);
    for f in &frac.poles {
        let pos = remaining
            .iter()
            .position(|g| g == f)
            .ok_or_else(|| Error::PoleNotCancelled(format!("{f:?} at {t}")))?;
        remaining.remove(pos);
    }
    let mut numerator = frac.numerator;
    for g in remaining {
        numerator = numerator.mul(&LambdaElement::from_rat_poly(&g.exact_poly(p), p, m, n)?);
    }
    Ok(LambdaFraction {
        numerator,
        poles: Vec::new(),
    })
}

/// B(X_kappa) as an exact rational.
pub fn b_value_at_weight(n: usize, p: u64, kappa: i64) -> Rational {
    b_poly_factors(n)
        .iter()
        .fold(Rational::one(), |acc, f| acc * f.value_at_weight(p, kappa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eisenstein::stabilized_coefficient;
    use crate::exactnum::rat;

    #[test]
    fn teichmuller_values() {
        assert_eq!(teichmuller(1, 7, 5).unwrap().residue().to_string(), "1");
        assert_eq!(teichmuller(-1, 5, 4).unwrap().residue(), &BigInt::from(624));
        assert_eq!(teichmuller(2, 5, 3).unwrap().residue(), &BigInt::from(57));
        assert!(teichmuller(10, 5, 3).is_err());
        let w = teichmuller(3, 7, 6).unwrap();
        assert_eq!(w.pow(6), PadicInt::from_int(1, 7, 6));
    }

    #[test]
    fn s_normalization() {
        let p = 5;
        assert!(s_of(&PadicInt::from_int(1, p, 6)).unwrap().is_zero());
        assert_eq!(s_of(&PadicInt::from_int(6, p, 6)).unwrap(), PadicInt::from_int(1, p, 5));
        assert_eq!(s_of(&PadicInt::from_int(36, p, 6)).unwrap(), PadicInt::from_int(2, p, 5));
        assert!(matches!(s_of(&PadicInt::from_int(2, p, 6)), Err(Error::NotOnePlusP(_))));
    }

    #[test]
    fn binomial_reproduces_powers() {
        // (1 + X)^{s(<2>)} at X = (1+p)^3 - 1 is <2>^3
        let (p, n, m) = (5u64, 8usize, 6u32);
        let s = s_of_angle(2, p, binomial_precision(p, n, m)).unwrap();
        let z = binomial_series(&s, n, m).unwrap();
        let got = z.evaluate(&node(p, 3));
        let want = angle_part(2, p, m).unwrap().pow(3);
        assert!(got.eq_mod(&want, got.precision()));
        let one = binomial_series(&PadicInt::from_int(1, p, 20), 4, 5).unwrap();
        assert_eq!(one.to_strings(), vec!["1", "1", "0", "0"]);
    }

    #[test]
    fn lbar_trivial_branch_matches_zeta() {
        let p = 5;
        let triv = DirichletCharacter::trivial(1);
        let frac = calL_series(&triv, 0, p, 6, 8).unwrap();
        assert_eq!(frac.pole_order(), 1);
        for k in [8i64, 12] {
            let v = frac.specialize(k).unwrap();
            let exact = l_depleted(k as usize, &triv, p).unwrap();
            assert!(v.matches(&exact).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn lbar_kronecker_branch() {
        let p = 5;
        let xi = DirichletCharacter::kronecker_character(-4);
        let frac = calL_series(&xi, 1, p, 6, 8).unwrap();
        assert_eq!(frac.pole_order(), 0);
        let k = 1 + 3 * 4;
        let v = frac.specialize(k).unwrap();
        assert!(v.matches(&l_depleted(k as usize, &xi, p).unwrap()).unwrap());
        // wrong parity: every sample vanishes
        let zero = dirichlet_Lbar_series(&xi, 2, p, 6, 8).unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn b_polynomial() {
        assert_eq!(b_poly_exact(1, 5), vec![Rational::zero(), Rational::one()]);
        for n in 1..=5 {
            assert!(b_displays_agree(n, 5));
            assert!(b_poly_exact(n, 3)[0].is_zero());
        }
        assert_eq!(b_value_at_weight(1, 5, 2), rat(35, 1));
    }

    #[test]
    fn genus_one_constant_term_with_pole() {
        let params = LambdaParams::new(1, DirichletCharacter::trivial(1), 0, 5, 6, 8).unwrap();
        let z = HalfIntegralMatrix::zero(1);
        let frac = lambda_coefficient(&params, &z).unwrap();
        assert_eq!(frac.pole_order(), 1);
        let integral = integral_lambda_coefficient(&params, &z).unwrap();
        assert_eq!(integral.pole_order(), 0);
        for k in [8i64, 12] {
            let exact = stabilized_coefficient(&params.classical_at(k).unwrap(), 5, &z).unwrap();
            assert!(frac.specialize(k).unwrap().matches(&exact).unwrap());
        }
    }

    #[test]
    fn specialization_genus_one() {
        let params = LambdaParams::new(1, DirichletCharacter::trivial(1), 2, 5, 6, 8).unwrap();
        for t in crate::quadforms::enumerate_indices(1, 6) {
            let frac = lambda_coefficient(&params, &t).unwrap();
            for k in [6i64, 10] {
                let exact = stabilized_coefficient(&params.classical_at(k).unwrap(), 5, &t).unwrap();
                let v = frac.specialize(k).unwrap();
                assert!(v.effective_precision() >= 4);
                assert!(v.matches(&exact).unwrap(), "T = {t}, k = {k}");
            }
        }
    }
}
