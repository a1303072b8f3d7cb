//! Verification suites behind `siegel verify`.

use serde_json::{json, Value};

use siegel_core::eisenstein::{build_table, stabilize_via_operator, u_pn_domain, EisensteinParams, FourierTable};
use siegel_core::exactnum::arith::val_i128;
use siegel_core::exactnum::{rat_int, rational_pow, CyclotomicNumber};
use siegel_core::lambda_adic::{
    b_value_at_weight, embed_cyclotomic, integral_lambda_coefficient, lambda_coefficient, LambdaParams,
};
use siegel_core::lvalues::{l_at_negative, l_depleted};
use siegel_core::quadforms::{enumerate_indices, random_positive_form, random_unimodular_conjugate, scale, HalfIntegralMatrix};
use siegel_core::siegelseries::{
    expected_degree, functional_equation_check, F_closed_rank1, F_closed_rank2, F_from_b, F_from_b_fe,
};
use siegel_core::{Error, Result};

use crate::{lambda_params, parse_character, Common, Suite};

/// Outcome of one property: how many cases were checked and the first failure.
struct Property {
    name: &'static str,
    checked: usize,
    counterexample: Option<Value>,
    detail: Option<Value>,
}

impl Property {
    fn new(name: &'static str) -> Self {
        Property {
            name,
            checked: 0,
            counterexample: None,
            detail: None,
        }
    }

    fn record(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(case());
        }
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "pass": self.counterexample.is_none(),
            "checked": self.checked,
        });
        if let Some(c) = &self.counterexample {
            v["counterexample"] = c.clone();
        }
        if let Some(d) = &self.detail {
            v["detail"] = d.clone();
        }
        v
    }
}

fn report(suite: &str, params: Value, props: &[Property]) -> Value {
    json!({
        "suite": suite,
        "params": params,
        "properties": props.iter().map(Property::to_json).collect::<Vec<_>>(),
        "pass": props.iter().all(|p| p.counterexample.is_none()),
    })
}

pub fn run_suite(suite: Suite, c: &Common) -> Result<Value> {
    match suite {
        Suite::Genus1 => genus1(c),
        Suite::Operator => operator(c),
        Suite::SiegelSeries => siegel_series(c),
        Suite::Kummer => kummer(c),
        Suite::LambdaSpecialize => lambda_specialize(c),
    }
}

fn eis(c: &Common, genus: usize) -> Result<EisensteinParams> {
    EisensteinParams::new(genus, c.weight, parse_character(&c.character)?)
}

/// sum over d | m (optionally prime to p) of chi(d) d^{k-1}.
fn divisor_sum(params: &EisensteinParams, m: i64, p: Option<u64>) -> CyclotomicNumber {
    let mut acc = CyclotomicNumber::zero();
    for d in 1..=m {
        if m % d != 0 || p.is_some_and(|p| d % p as i64 == 0) {
            continue;
        }
        let term = params
            .character
            .evaluate(d)
            .scale(&rational_pow(&rat_int(d), params.weight - 1));
        acc = &acc + &term;
    }
    acc
}

fn genus1(c: &Common) -> Result<Value> {
    let params = eis(c, 1)?;
    let p = c.prime;
    let bound = c.trace_bound.unwrap_or(50);
    let classical = build_table(&params, None, bound)?;
    let stabilized = build_table(&params, Some(p), bound)?;
    let k = params.weight as usize;
    let half = rat_int(1) / rat_int(2);
    let mut pc = Property::new("classical-divisor-sums");
    let mut ps = Property::new("stabilized-divisor-sums");
    for m in 0..=bound {
        let t = HalfIntegralMatrix::diag(&[m]);
        let (want_c, want_s) = if m == 0 {
            (
                l_at_negative(k, &params.character)?.scale(&half),
                l_depleted(k, &params.character, p)?.scale(&half),
            )
        } else {
            (divisor_sum(&params, m, None), divisor_sum(&params, m, Some(p)))
        };
        let got_c = classical.get(&t);
        let got_s = stabilized.get(&t);
        pc.record(got_c == Some(&want_c), || json!({"m": m, "got": got_c.map(|g| g.to_string()), "want": want_c.to_string()}));
        ps.record(got_s == Some(&want_s), || json!({"m": m, "got": got_s.map(|g| g.to_string()), "want": want_s.to_string()}));
    }
    Ok(report("genus1", json!({"weight": c.weight, "prime": p, "character": c.character, "bound": bound}), &[pc, ps]))
}

fn compare_tables(prop: &mut Property, a: &FourierTable, b: &FourierTable) {
    for (t, v) in &a.entries {
        let w = b.get(t);
        prop.record(w == Some(v), || {
            json!({"index": t.key(), "left": v.to_string(), "right": w.map(|w| w.to_string())})
        });
    }
}

fn operator(c: &Common) -> Result<Value> {
    let params = eis(c, c.genus)?;
    let p = c.prime;
    if params.character.modulus() % p == 0 {
        return Err(Error::InvalidParams(format!("{p} divides the level")));
    }
    let bound = c.trace_bound.unwrap_or(if c.genus >= 3 { 2 } else { 3 });
    let closed = build_table(&params, Some(p), bound)?;
    let via_op = stabilize_via_operator(&params, p, bound)?;
    let mut eq = Property::new("operator-equals-closed-form");
    compare_tables(&mut eq, &via_op, &closed);

    let mut fixed = Property::new("u_p-fixed-point");
    for t in u_pn_domain(&closed, p) {
        let a = closed.get(&t);
        let b = closed.get(&scale(&t, p as i64));
        fixed.record(a == b, || json!({"index": t.key()}));
    }

    let mut inv = Property::new("gl-invariance");
    for (name, table) in [("classical", build_table(&params, None, bound)?), ("stabilized", closed)] {
        for trial in 0..50u64 {
            let seed = c.seed.wrapping_mul(1_000_003).wrapping_add(trial);
            for (t, v) in &table.entries {
                let u = random_unimodular_conjugate(t, seed ^ t.trace() as u64);
                let w = match table.prime {
                    Some(q) => siegel_core::eisenstein::stabilized_coefficient(&params, q, &u)?,
                    None => siegel_core::eisenstein::classical_coefficient(&params, &u)?,
                };
                inv.record(&w == v, || json!({"table": name, "index": t.key(), "conjugate": u.key()}));
            }
        }
    }
    Ok(report(
        "operator",
        json!({"genus": c.genus, "weight": c.weight, "prime": p, "character": c.character, "bound": bound}),
        &[eq, fixed, inv],
    ))
}

fn big_d(t: &HalfIntegralMatrix) -> i128 {
    let d = t.det_doubled();
    if t.size() % 2 == 1 {
        d / 2
    } else {
        d
    }
}

/// Among 64 seeded candidates, the form whose discriminant is most divisible by l.
pub fn sample_form(n: usize, l: u64, seed: u64) -> HalfIntegralMatrix {
    (0..64u64)
        .map(|k| random_positive_form(n, 2000, seed.wrapping_mul(64).wrapping_add(k)))
        .max_by_key(|t| (val_i128(big_d(t), l), std::cmp::Reverse(t.key())))
        .expect("nonempty")
}

fn siegel_series(c: &Common) -> Result<Value> {
    let mut one = Property::new("constant-term-one");
    let mut fe = Property::new("functional-equation");
    let mut deg = Property::new("degree-formula");
    let mut routes = Property::new("half-depth-route-agrees");
    let mut rank1 = Property::new("rank-one-closed-form");
    let mut rank2 = Property::new("rank-two-closed-form");
    for i in 0..50u64 {
        let n = 1 + (i % 3) as usize;
        let l = [2u64, 3, 5][(i / 3 % 3) as usize];
        let t = sample_form(n, l, c.seed.wrapping_add(i));
        let f = F_from_b(&t, l)?;
        let case = || json!({"matrix": t.key(), "prime": l, "F": f.to_json()});
        one.record(f.coeffs[0] == 1.into(), case);
        fe.record(functional_equation_check(&t, l, &f), case);
        deg.record(f.degree() == expected_degree(&t, l)?, case);
        routes.record(F_from_b_fe(&t, l)? == f, case);
        if n == 1 {
            let g = t.doubled()[0][0] / 2;
            rank1.record(F_closed_rank1(&g.into(), l) == f, case);
        }
        if n == 2 && l != 2 {
            rank2.record(F_closed_rank2(&t, l)? == f, case);
        }
    }
    Ok(report("siegel-series", json!({"seed": c.seed, "count": 50}), &[one, fe, deg, routes, rank1, rank2]))
}

fn kummer(c: &Common) -> Result<Value> {
    let params = lambda_params(c)?;
    let p = params.p;
    let k1 = c.weight;
    let k2 = k1 + (p as i64 - 1) * p as i64;
    let (e1, e2) = (params.classical_at(k1)?, params.classical_at(k2)?);
    let bound = c.trace_bound.unwrap_or(2);
    let mut poles = Property::new("pole-order-zero");
    let mut exact = Property::new("kummer-exact");
    let mut lam = Property::new("kummer-lambda");
    let mut spec = Property::new("integral-specializes");
    for t in enumerate_indices(c.genus, bound) {
        let integral = integral_lambda_coefficient(&params, &t)?;
        poles.record(integral.pole_order() == 0, || json!({"index": t.key()}));
        let mut sides = Vec::new();
        for (k, e) in [(k1, &e1), (k2, &e2)] {
            let a = siegel_core::eisenstein::stabilized_coefficient(e, p, &t)?;
            let z = a.scale(&b_value_at_weight(c.genus, p, k));
            sides.push(embed_cyclotomic(&z, p, 2)?);
            let v = integral.specialize(k)?;
            spec.record(v.matches(&z)?, || json!({"index": t.key(), "weight": k}));
        }
        exact.record(sides[0].eq_mod(&sides[1], 2), || {
            json!({"index": t.key(), "left": sides[0].to_string(), "right": sides[1].to_string()})
        });
        let (v1, v2) = (integral.specialize(k1)?, integral.specialize(k2)?);
        lam.record(v1.residue.eq_mod(&v2.residue, 2), || json!({"index": t.key()}));
    }
    Ok(report(
        "kummer",
        json!({"genus": c.genus, "prime": p, "a": params.a, "weights": [k1, k2], "character": c.character}),
        &[poles, exact, lam, spec],
    ))
}

fn lambda_specialize(c: &Common) -> Result<Value> {
    let params: LambdaParams = lambda_params(c)?;
    let p = params.p;
    let weights: Vec<i64> = (0..3).map(|i| c.weight + i * (p as i64 - 1)).collect();
    let classical: Vec<EisensteinParams> = weights.iter().map(|&k| params.classical_at(k)).collect::<Result<_>>()?;
    let bound = c.trace_bound.unwrap_or(2);
    let mut prop = Property::new("specialization");
    let mut min_prec = i64::MAX;
    for t in enumerate_indices(c.genus, bound) {
        let frac = lambda_coefficient(&params, &t)?;
        for (k, e) in weights.iter().zip(&classical) {
            let exact = siegel_core::eisenstein::stabilized_coefficient(e, p, &t)?;
            let v = frac.specialize(*k)?;
            min_prec = min_prec.min(v.effective_precision());
            let ok = v.effective_precision() >= 1 && v.matches(&exact)?;
            prop.record(ok, || {
                json!({"index": t.key(), "weight": k, "lambda": v.residue.to_string(), "shift": v.shift, "exact": exact.to_string()})
            });
        }
    }
    prop.detail = Some(json!({"min_effective_precision": min_prec}));
    Ok(report(
        "lambda-specialize",
        json!({"genus": c.genus, "prime": p, "a": params.a, "weights": weights, "xprec": params.xprec, "pprec": params.pprec}),
        &[prop],
    ))
}
