//! Dirichlet characters with exact cyclotomic values.
//!
//! A character mod M is fixed by the images of canonical generators of (Z/MZ)^x:
//! for each odd prime power q^e the smallest primitive root, and for 2^e the pair
//! (-1, 5) (only -1 when e = 2, nothing when e = 1). The image of a generator g of
//! order o is written zeta_o^x. The spec string "M:g1^x1,g2^x2" lists those exponents
//! by generator residue; "#i^x" addresses the i-th generator when residues collide.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::arith::{factorize, gcd, lcm, mult_order, euler_phi};
use crate::exactnum::{cyclotomic_root_of_unity, CyclotomicNumber};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Generator {
    /// Prime power of the cyclic factor.
    pub prime_power: u64,
    /// Representative in the prime-power component (may be -1).
    pub local: i64,
    /// Lift to Z/MZ, congruent to 1 at the other components.
    pub residue: u64,
    pub order: u64,
    /// chi(g) = zeta_order^exponent.
    pub exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    generators: Vec<Generator>,
    /// Exponent of zeta_order at each residue, None off the units.
    table: Vec<Option<u64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

fn crt(a1: u64, m1: u64, a2: u64, m2: u64) -> u64 {
    // m1, m2 coprime
    let (m1i, m2i) = (m1 as i128, m2 as i128);
    let mut t = 0i128;
    while (a1 as i128 + m1i * t - a2 as i128).rem_euclid(m2i) != 0 {
        t += 1;
    }
    ((a1 as i128 + m1i * t).rem_euclid(m1i * m2i)) as u64
}

fn canonical_generators(m: u64) -> Vec<Generator> {
    let mut gens = Vec::new();
    for (q, e) in factorize(m) {
        let qe = q.pow(e);
        let rest = m / qe;
        let lift = |g: u64| if rest == 1 { g % qe } else { crt(g % qe, qe, 1, rest) };
        if q == 2 {
            if e >= 2 {
                gens.push(Generator {
                    prime_power: qe,
                    local: -1,
                    residue: lift(qe - 1),
                    order: 2,
                    exponent: 0,
                });
            }
            if e >= 3 {
                gens.push(Generator {
                    prime_power: qe,
                    local: 5,
                    residue: lift(5),
                    order: qe / 4,
                    exponent: 0,
                });
            }
        } else {
            let phi = euler_phi(qe);
            let g = (2..qe)
                .find(|&g| gcd(g, q) == 1 && mult_order(g, qe) == phi)
                .expect("odd prime powers have primitive roots");
            gens.push(Generator {
                prime_power: qe,
                local: g as i64,
                residue: lift(g),
                order: phi,
                exponent: 0,
            });
        }
    }
    gens
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        Self::from_exponents(modulus, &[]).expect("trivial character is valid")
    }

    /// Builds from generator exponents (missing trailing exponents are 0).
    pub fn from_exponents(modulus: u64, exps: &[u64]) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidCharacter("modulus must be positive".into()));
        }
        let mut gens = canonical_generators(modulus);
        if exps.len() > gens.len() {
            return Err(Error::InvalidCharacter(format!(
                "{} exponents given but (Z/{}Z)^x has {} generators",
                exps.len(),
                modulus,
                gens.len()
            )));
        }
        for (g, &x) in gens.iter_mut().zip(exps.iter()) {
            g.exponent = x % g.order;
        }
        let big = gens.iter().fold(1, |acc, g| lcm(acc, g.order));
        let m = modulus as usize;
        let mut table: Vec<Option<u64>> = vec![None; m];
        // walk the product of cyclic factors
        let powers: Vec<Vec<u64>> = gens
            .iter()
            .map(|g| {
                let mut v = Vec::with_capacity(g.order as usize);
                let mut x = 1 % modulus;
                for _ in 0..g.order {
                    v.push(x);
                    x = x * g.residue % modulus;
                }
                v
            })
            .collect();
        let mut idx = vec![0u64; gens.len()];
        loop {
            let mut res: u64 = 1 % modulus;
            let mut ex: u64 = 0;
            for ((g, &k), pw) in gens.iter().zip(idx.iter()).zip(powers.iter()) {
                res = res * pw[k as usize] % modulus;
                ex = (ex + k * g.exponent * (big / g.order)) % big;
            }
            table[res as usize] = Some(ex);
            let mut i = 0;
            loop {
                if i == gens.len() {
                    return Ok(Self::normalize(modulus, big, gens, table));
                }
                idx[i] += 1;
                if idx[i] < gens[i].order {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }

    /// Builds from a value table of exponents of zeta_big.
    pub fn from_table(modulus: u64, big: u64, table: Vec<Option<u64>>) -> Result<Self> {
        if table.len() as u64 != modulus {
            return Err(Error::InvalidCharacter("table length differs from modulus".into()));
        }
        let mut gens = canonical_generators(modulus);
        for g in gens.iter_mut() {
            let x = table[g.residue as usize]
                .ok_or_else(|| Error::InvalidCharacter("generator outside units".into()))?;
            // zeta_big^x = zeta_order^(x * order / big)
            if (x * g.order) % big != 0 {
                return Err(Error::InvalidCharacter("table is not a character".into()));
            }
            g.exponent = x * g.order / big;
        }
        let chi = Self::normalize(modulus, big, gens, table);
        let rebuilt = Self::from_exponents(modulus, &chi.exponents())?;
        if rebuilt != chi {
            return Err(Error::InvalidCharacter("table is not multiplicative".into()));
        }
        Ok(chi)
    }

    fn normalize(modulus: u64, big: u64, gens: Vec<Generator>, mut table: Vec<Option<u64>>) -> Self {
        let g = table
            .iter()
            .flatten()
            .fold(big, |acc, &x| gcd(acc, x));
        let order = big / g;
        for x in table.iter_mut().flatten() {
            *x /= g;
        }
        DirichletCharacter {
            modulus,
            order,
            generators: gens,
            table,
        }
    }

    /// Parses "M:g1^x1,g2^x2,..." (see module docs).
    pub fn parse(spec: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidCharacter(format!("{spec:?}: {why}"));
        let (m, rest) = match spec.split_once(':') {
            Some((m, r)) => (m, r),
            None => (spec, ""),
        };
        let modulus: u64 = m.trim().parse().map_err(|_| bad("modulus"))?;
        if modulus == 0 {
            return Err(bad("modulus must be positive"));
        }
        let gens = canonical_generators(modulus);
        let mut exps = vec![0u64; gens.len()];
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (g, x) = tok.split_once('^').ok_or_else(|| bad("expected g^x"))?;
            let x: i64 = x.trim().parse().map_err(|_| bad("exponent"))?;
            let g = g.trim();
            let i = if let Some(ix) = g.strip_prefix('#') {
                let i: usize = ix.parse().map_err(|_| bad("generator index"))?;
                if i >= gens.len() {
                    return Err(bad("generator index out of range"));
                }
                i
            } else {
                let gv: i64 = g.parse().map_err(|_| bad("generator"))?;
                let hits: Vec<usize> = gens
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| {
                        let q = c.prime_power as i64;
                        gv.rem_euclid(q) == c.local.rem_euclid(q)
                            && (c.local != -1 || gv.rem_euclid(q) == q - 1)
                    })
                    .map(|(i, _)| i)
                    .collect();
                match hits.as_slice() {
                    [i] => *i,
                    [] => return Err(bad(&format!("{gv} is not a canonical generator"))),
                    _ => return Err(bad(&format!("{gv} is ambiguous; use #index"))),
                }
            };
            exps[i] = x.rem_euclid(gens[i].order as i64) as u64;
        }
        Self::from_exponents(modulus, &exps)
    }

    /// Spec string; generators with exponent 0 are omitted.
    pub fn spec(&self) -> String {
        let toks: Vec<String> = self
            .generators
            .iter()
            .enumerate()
            .filter(|(_, g)| g.exponent != 0)
            .map(|(i, g)| {
                let collide = self.generators.iter().enumerate().any(|(j, h)| {
                    j != i && (g.local).rem_euclid(h.prime_power as i64) == h.local.rem_euclid(h.prime_power as i64)
                });
                if collide {
                    format!("#{}^{}", i, g.exponent)
                } else {
                    format!("{}^{}", g.local, g.exponent)
                }
            })
            .collect();
        format!("{}:{}", self.modulus, toks.join(","))
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn exponents(&self) -> Vec<u64> {
        self.generators.iter().map(|g| g.exponent).collect()
    }

    /// Exponent e with chi(a) = zeta_order^e, or None when gcd(a, M) > 1.
    pub fn value_exp(&self, a: i64) -> Option<u64> {
        self.table[a.rem_euclid(self.modulus as i64) as usize]
    }

    pub fn evaluate(&self, a: i64) -> CyclotomicNumber {
        match self.value_exp(a) {
            None => CyclotomicNumber::zero(),
            Some(e) => cyclotomic_root_of_unity(self.order, e as i64),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn parity(&self) -> Parity {
        match self.value_exp(-1) {
            Some(0) => Parity::Even,
            _ => Parity::Odd,
        }
    }

    /// chi(-1) as +-1.
    pub fn sign(&self) -> i64 {
        match self.parity() {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }

    pub fn conductor(&self) -> u64 {
        let m = self.modulus;
        for f in 1..=m {
            if m % f != 0 {
                continue;
            }
            let ok = (0..m)
                .filter(|&a| a % f == 1 % f)
                .all(|a| matches!(self.table[a as usize], None | Some(0)));
            if ok {
                return f;
            }
        }
        m
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor() == self.modulus
    }

    /// The primitive character inducing this one.
    pub fn primitive(&self) -> Self {
        let f = self.conductor();
        if f == self.modulus {
            return self.clone();
        }
        let mut table: Vec<Option<u64>> = vec![None; f as usize];
        for b in 0..f {
            if gcd(b, f) != 1 {
                continue;
            }
            let mut a = b;
            while gcd(a, self.modulus) != 1 {
                a += f;
            }
            table[b as usize] = self.table[a as usize];
        }
        Self::from_table(f, self.order, table).expect("restriction of a character is a character")
    }

    /// Product character modulo lcm of the moduli (not reduced).
    pub fn product_raw(&self, other: &Self) -> Self {
        let m = lcm(self.modulus, other.modulus);
        let big = lcm(self.order, other.order);
        let (s1, s2) = (big / self.order, big / other.order);
        let table: Vec<Option<u64>> = (0..m)
            .map(|a| {
                let x = self.table[(a % self.modulus) as usize]?;
                let y = other.table[(a % other.modulus) as usize]?;
                Some((x * s1 + y * s2) % big)
            })
            .collect();
        Self::from_table(m, big, table).expect("product of characters is a character")
    }

    /// Product character reduced to its primitive inducing character.
    pub fn twist(&self, other: &Self) -> Self {
        self.product_raw(other).primitive()
    }

    /// chi^k, reduced to primitive.
    pub fn power(&self, k: i64) -> Self {
        let ord = self.order as i64;
        let table: Vec<Option<u64>> = self
            .table
            .iter()
            .map(|x| x.map(|e| ((e as i64 * k).rem_euclid(ord)) as u64))
            .collect();
        Self::from_table(self.modulus, self.order, table)
            .expect("power of a character is a character")
            .primitive()
    }

    /// The l-component of chi, as a character mod l^e (l^e || M).
    pub fn local_component(&self, l: u64) -> Self {
        let (_, e) = factorize(self.modulus)
            .into_iter()
            .find(|&(q, _)| q == l)
            .unwrap_or((l, 0));
        let qe = l.pow(e);
        let rest = self.modulus / qe;
        let table: Vec<Option<u64>> = (0..qe)
            .map(|b| {
                if gcd(b, qe) != 1 {
                    return None;
                }
                let a = if rest == 1 { b % qe } else { crt(b, qe, 1, rest) };
                self.table[a as usize]
            })
            .collect();
        Self::from_table(qe, self.order, table).expect("local component is a character")
    }

    /// True iff no l-component (l | M) is quadratic or trivial, i.e. chi_l^2 is nontrivial.
    pub fn square_locally_nontrivial(&self) -> bool {
        factorize(self.modulus)
            .into_iter()
            .all(|(l, _)| self.local_component(l).order > 2)
    }

    /// Kronecker character a -> (d / a) for a discriminant-like d (d = 0, 1 mod 4).
    pub fn kronecker_character(d: i64) -> Self {
        if d == 1 {
            return Self::trivial(1);
        }
        let m = if d.rem_euclid(4) == 2 || d.rem_euclid(4) == 3 {
            4 * d.unsigned_abs()
        } else {
            d.unsigned_abs()
        };
        let table: Vec<Option<u64>> = (0..m)
            .map(|a| match kronecker(d, a as i64) {
                0 => None,
                1 => Some(0),
                _ => Some(1),
            })
            .collect();
        Self::from_table(m, 2, table).expect("Kronecker symbol is a character")
    }

    /// The Teichmueller character mod p realized with the canonical primitive root.
    pub fn teichmuller(p: u64) -> Self {
        Self::from_exponents(p, &[1]).expect("prime modulus")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "modulus": self.modulus,
            "order": self.order,
            "spec": self.spec(),
            "generators": self.generators,
        })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::InvalidCharacter("malformed character JSON".into());
        let modulus = v.get("modulus").and_then(|m| m.as_u64()).ok_or_else(bad)?;
        let gens: Vec<Generator> =
            serde_json::from_value(v.get("generators").cloned().ok_or_else(bad)?).map_err(|_| bad())?;
        let exps: Vec<u64> = gens.iter().map(|g| g.exponent).collect();
        Self::from_exponents(modulus, &exps)
    }
}

impl fmt::Display for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.spec())
    }
}

/// Kronecker symbol (d / m).
pub fn kronecker(d: i64, m: i64) -> i32 {
    let mut d = d as i128;
    let mut m = m as i128;
    if m == 0 {
        return i32::from(d == 1 || d == -1);
    }
    let mut result = 1i32;
    if m < 0 {
        m = -m;
        if d < 0 {
            result = -result;
        }
    }
    let mut v = 0;
    while m % 2 == 0 {
        m /= 2;
        v += 1;
    }
    if v > 0 {
        if d % 2 == 0 {
            return 0;
        }
        let r = d.rem_euclid(8);
        if v % 2 == 1 && (r == 3 || r == 5) {
            result = -result;
        }
    }
    // Jacobi symbol (d / m), m odd positive
    d = d.rem_euclid(m);
    while d != 0 {
        while d % 2 == 0 {
            d /= 2;
            let r = m % 8;
            if r == 3 || r == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut d, &mut m);
        if d % 4 == 3 && m % 4 == 3 {
            result = -result;
        }
        d %= m;
    }
    if m == 1 {
        result
    } else {
        0
    }
}
