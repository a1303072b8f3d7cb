//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Tolerances are pinned here. Rational and cyclotomic comparisons are exact.
//! Lambda-adic comparisons use the precision stated on each line.

use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use siegel_core::characters::DirichletCharacter;
use siegel_core::eisenstein::{
    build_table, build_table_on, classical_coefficient, stabilization_polys, stabilize_via_operator, stabilized_coefficient,
    u_pn_apply, u_pn_domain, EisensteinParams, FourierTable,
};
use siegel_core::exactnum::arith::val_i128;
use siegel_core::exactnum::{rat, rat_int, rational_pow, CyclotomicNumber, Rational};
use siegel_core::lambda_adic::{
    b_displays_agree, b_value_at_weight, embed_cyclotomic, integral_lambda_coefficient, lambda_coefficient,
    LambdaParams,
};
use siegel_core::quadforms::{enumerate_indices, random_positive_form, random_unimodular_conjugate, scale, HalfIntegralMatrix};
use siegel_core::siegelseries::{
    expected_degree, functional_equation_check, F_closed_rank1, F_closed_rank2, F_from_b,
};

struct Outcome {
    id: u32,
    label: &'static str,
    tolerance: &'static str,
    failures: Vec<String>,
    elapsed: Duration,
    budget: Duration,
}

impl Outcome {
    fn pass(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.budget
    }

    fn line(&self) -> String {
        let status = if self.pass() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {} {status} {} [tolerance: {}] [{:.2?} of {:?}]",
            self.id, self.label, self.tolerance, self.elapsed, self.budget
        );
        if self.elapsed > self.budget {
            s.push_str(" over time budget");
        }
        if let Some(f) = self.failures.first() {
            s.push_str(&format!(" first failure: {f} ({} total)", self.failures.len()));
        }
        s
    }
}

fn run(
    id: u32,
    label: &'static str,
    tolerance: &'static str,
    budget: Duration,
    body: impl FnOnce(&mut Vec<String>),
) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    body(&mut failures);
    let out = Outcome {
        id,
        label,
        tolerance,
        failures,
        elapsed: start.elapsed(),
        budget,
    };
    // direct handle write, so the line survives libtest output capture
    writeln!(std::io::stdout().lock(), "{}", out.line()).unwrap();
    out
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

fn cyc(q: Rational) -> CyclotomicNumber {
    CyclotomicNumber::from_rational(q)
}

/// sigma_{k-1}(m), optionally restricted to divisors prime to p. Plain integer arithmetic.
fn sigma(m: i64, k: u32, p: Option<i64>) -> BigInt {
    (1..=m)
        .filter(|d| m % d == 0 && p.map_or(true, |p| d % p != 0))
        .map(|d| num_traits::pow(BigInt::from(d), (k - 1) as usize))
        .sum()
}

fn genus_one(failures: &mut Vec<String>) {
    let p = 5i64;
    // zeta(-3) = 1/120 and zeta(-5) = -1/252
    for (k, zeta) in [(4i64, rat(1, 120)), (6, rat(-1, 252))] {
        let params = EisensteinParams::new(1, k, DirichletCharacter::trivial(1)).unwrap();
        let classical = build_table(&params, None, 50).unwrap();
        let stabilized = build_table(&params, Some(p as u64), 50).unwrap();
        let euler = rat(1, 1) - rational_pow(&rat(p, 1), k - 1);
        for m in 0..=50i64 {
            let t = HalfIntegralMatrix::diag(&[m]);
            let (want_c, want_s) = if m == 0 {
                (cyc(&zeta / rat(2, 1)), cyc(&zeta * &euler / rat(2, 1)))
            } else {
                (
                    cyc(Rational::from_integer(sigma(m, k as u32, None))),
                    cyc(Rational::from_integer(sigma(m, k as u32, Some(p)))),
                )
            };
            check(failures, classical.get(&t) == Some(&want_c), || format!("classical k={k} m={m}"));
            check(failures, stabilized.get(&t) == Some(&want_s), || format!("stabilized k={k} m={m}"));
        }
    }
}

fn big_d(t: &HalfIntegralMatrix) -> i128 {
    let d = t.det_doubled();
    if t.size() % 2 == 1 {
        d / 2
    } else {
        d
    }
}

/// The seeded candidate whose discriminant is most divisible by l, so that the local series is nontrivial.
fn sample(n: usize, l: u64, seed: u64) -> HalfIntegralMatrix {
    (0..64u64)
        .map(|k| random_positive_form(n, 2000, seed * 64 + k))
        .max_by_key(|t| (val_i128(big_d(t), l), std::cmp::Reverse(t.key())))
        .unwrap()
}

fn siegel_series(failures: &mut Vec<String>) {
    let mut nontrivial = 0;
    for i in 0..50u64 {
        let n = 1 + (i % 3) as usize;
        let l = [2u64, 3, 5][(i / 3 % 3) as usize];
        let t = sample(n, l, i);
        check(failures, big_d(&t).abs() <= 2000, || format!("{t}: discriminant out of range"));
        let f = F_from_b(&t, l).unwrap();
        if f.degree() > 0 {
            nontrivial += 1;
        }
        check(failures, f.coeffs[0] == BigInt::from(1), || format!("{t} at {l}: constant term"));
        check(failures, functional_equation_check(&t, l, &f), || format!("{t} at {l}: functional equation"));
        check(failures, f.degree() == expected_degree(&t, l).unwrap(), || format!("{t} at {l}: degree"));
        if n == 1 {
            let g = BigInt::from(t.doubled()[0][0] / 2);
            check(failures, F_closed_rank1(&g, l) == f, || format!("{t} at {l}: rank-one closed form"));
        }
        if n == 2 && l != 2 {
            check(failures, F_closed_rank2(&t, l).unwrap() == f, || format!("{t} at {l}: rank-two closed form"));
        }
    }
    // guard against a sample of unramified forms, where every check is trivial
    check(failures, nontrivial >= 25, || format!("only {nontrivial} nontrivial series"));
}

/// (genus, prime, character spec, weight, trace bound) for the operator grid.
fn operator_grid() -> Vec<(usize, u64, &'static str, i64, i64)> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for (n, kt, kc) in [(1usize, 4i64, 3i64), (2, 4, 5), (3, 6, 5)] {
            let bound = if n == 3 { 2 } else { 3 };
            out.push((n, p, "1", kt, bound));
            out.push((n, p, "7:3^1", kc, bound));
        }
    }
    out
}

fn grid_tables() -> Vec<(String, EisensteinParams, u64, i64, FourierTable)> {
    operator_grid()
        .into_iter()
        .map(|(n, p, spec, k, bound)| {
            let params = EisensteinParams::new(n, k, DirichletCharacter::parse(spec).unwrap()).unwrap();
            let table = build_table(&params, Some(p), bound).unwrap();
            (format!("n={n} p={p} chi={spec} k={k}"), params, p, bound, table)
        })
        .collect()
}

fn operator_route(failures: &mut Vec<String>, tables: &[(String, EisensteinParams, u64, i64, FourierTable)]) {
    for (name, params, p, bound, closed) in tables {
        let via = stabilize_via_operator(params, *p, *bound).unwrap();
        check(failures, via.entries.len() == closed.entries.len(), || format!("{name}: table sizes"));
        for (t, v) in &closed.entries {
            check(failures, via.get(t) == Some(v), || format!("{name}: T = {t}"));
        }
    }
}

fn fixed_point(failures: &mut Vec<String>, tables: &[(String, EisensteinParams, u64, i64, FourierTable)]) {
    for (name, params, p, _, table) in tables {
        // extend each table by the indices pT so every entry lies in the domain of U_p
        let mut idx: Vec<HalfIntegralMatrix> = table.entries.keys().cloned().collect();
        idx.extend(table.entries.keys().map(|t| scale(t, *p as i64)));
        idx.sort();
        idx.dedup();
        let extended = build_table_on(params, Some(*p), idx).unwrap();
        let dom = u_pn_domain(&extended, *p);
        check(failures, dom.len() == table.entries.len(), || format!("{name}: U_p domain"));
        let image = u_pn_apply(&extended, *p, &dom).unwrap();
        for (t, v) in &table.entries {
            check(failures, image.get(t) == Some(v), || format!("{name}: T = {t}"));
        }
    }
}

fn gl_invariance(failures: &mut Vec<String>, tables: &[(String, EisensteinParams, u64, i64, FourierTable)]) {
    for (name, params, p, bound, stabilized) in tables {
        let classical = build_table(params, None, *bound).unwrap();
        for trial in 0..50u64 {
            for (t, v) in &classical.entries {
                let u = random_unimodular_conjugate(t, trial * 7919 + t.trace() as u64);
                check(failures, &classical_coefficient(params, &u).unwrap() == v, || format!("{name} classical: {t} vs {u}"));
            }
            for (t, v) in &stabilized.entries {
                let u = random_unimodular_conjugate(t, trial * 7919 + 1 + t.trace() as u64);
                check(failures, &stabilized_coefficient(params, *p, &u).unwrap() == v, || format!("{name} stabilized: {t} vs {u}"));
            }
        }
    }
}

fn lambda_specialization(failures: &mut Vec<String>) {
    let p = 5u64;
    for n in [1usize, 2] {
        let params = LambdaParams::new(n, DirichletCharacter::trivial(1), 2, p, 6, 8).unwrap();
        // 6 and 10 are interpolation weights, 14 is held out
        let weights = [6i64, 10, 14];
        let exact: Vec<EisensteinParams> = weights.iter().map(|&k| params.classical_at(k).unwrap()).collect();
        for t in enumerate_indices(n, 2) {
            let frac = lambda_coefficient(&params, &t).unwrap();
            for (k, e) in weights.iter().zip(&exact) {
                let want = stabilized_coefficient(e, p, &t).unwrap();
                let v = frac.specialize(*k).unwrap();
                check(failures, v.effective_precision() >= 4, || {
                    format!("n={n} T={t} k={k}: precision {}", v.effective_precision())
                });
                check(failures, v.matches(&want).unwrap(), || format!("n={n} T={t} k={k}: value"));
            }
        }
    }
}

fn kummer(failures: &mut Vec<String>) {
    let p = 5u64;
    // a = 2 is the stated case; a = 0 adds genuine poles that B must cancel
    for (a, k1) in [(2u64, 6i64), (0, 8)] {
        let k2 = k1 + 20;
        for n in [1usize, 2] {
            let params = LambdaParams::new(n, DirichletCharacter::trivial(1), a, p, 6, 8).unwrap();
            let (e1, e2) = (params.classical_at(k1).unwrap(), params.classical_at(k2).unwrap());
            for t in enumerate_indices(n, 2) {
                let integral = integral_lambda_coefficient(&params, &t).unwrap();
                check(failures, integral.pole_order() == 0, || format!("a={a} n={n} T={t}: pole order"));
                let mut sides = Vec::new();
                for (k, e) in [(k1, &e1), (k2, &e2)] {
                    let z = stabilized_coefficient(e, p, &t).unwrap().scale(&b_value_at_weight(n, p, k));
                    sides.push(embed_cyclotomic(&z, p, 2).unwrap());
                    let v = integral.specialize(k).unwrap();
                    check(failures, v.shift == 0 && v.matches(&z).unwrap(), || format!("a={a} n={n} T={t} k={k}: B A* value"));
                }
                check(failures, sides[0].eq_mod(&sides[1], 2), || format!("a={a} n={n} T={t}: exact congruence"));
                let (v1, v2) = (integral.specialize(k1).unwrap(), integral.specialize(k2).unwrap());
                check(failures, v1.residue.eq_mod(&v2.residue, 2), || format!("a={a} n={n} T={t}: lambda congruence"));
            }
        }
    }
}

fn polynomials(failures: &mut Vec<String>) {
    for p in [2u64, 3, 5, 7] {
        for n in 1..=6usize {
            let sp = stabilization_polys(n, p);
            if n <= 2 {
                check(failures, sp.p == sp.r, || format!("P != R for n={n} p={p}"));
            }
            check(failures, sp.p_divides_r(), || format!("P does not divide R for n={n} p={p}"));
        }
        for n in 1..=5usize {
            check(failures, b_displays_agree(n, p), || format!("B displays differ for n={n} p={p}"));
        }
    }
    // the unstabilized weight sample stays a nonzero rational
    check(failures, b_value_at_weight(1, 5, 6) != rat_int(0), || "B(X_6) vanishes".into());
}

#[test]
fn acceptance() {
    let secs = Duration::from_secs;
    let tables = grid_tables();
    let outcomes = vec![
        run(1, "genus-1 divisor sums, k in {4,6}, p=5, m<=50", "exact", secs(1), genus_one),
        run(2, "local Siegel series on 50 sampled forms", "exact", secs(120), siegel_series),
        run(3, "operator route equals closed form", "exact", secs(600), |f| operator_route(f, &tables)),
        run(4, "U_p fixed point", "exact", secs(60), |f| fixed_point(f, &tables)),
        run(5, "GL_n(Z) invariance, 50 conjugations per table", "exact", secs(600), |f| gl_invariance(f, &tables)),
        run(6, "Lambda-adic specialization at 6, 10 and held-out 14", "mod 5^4 or better", secs(600), lambda_specialization),
        run(7, "integrality and Kummer congruence", "mod 5^2", secs(600), kummer),
        run(8, "stabilization and B polynomial identities", "exact", secs(60), polynomials),
    ];
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.pass()).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
