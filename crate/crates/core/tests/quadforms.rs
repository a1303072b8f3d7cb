use num_bigint::BigInt;
use proptest::prelude::*;

use siegel_core::characters::kronecker;
use siegel_core::exactnum::arith::prime_divisors;
use siegel_core::exactnum::{rat, Rational};
use siegel_core::quadforms::*;

fn hm(g: &[&[i64]]) -> HalfIntegralMatrix {
    HalfIntegralMatrix::from_doubled(g.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn is_fundamental(d: i128) -> bool {
    let squarefree = |m: i128| (2..).take_while(|k: &i128| k * k <= m.abs()).all(|k| m % (k * k) != 0);
    if d == 1 {
        return true;
    }
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && squarefree(m)
        }
        _ => false,
    }
}

#[test]
fn discriminant_examples() {
    assert_eq!(det_data(&HalfIntegralMatrix::diag(&[2])).unwrap().big_d, 2);
    let id = det_data(&HalfIntegralMatrix::identity(2)).unwrap();
    assert_eq!((id.big_d, id.fund, id.cond), (4, Some(-4), Some(1)));
    let d = det_data(&HalfIntegralMatrix::diag(&[1, 4])).unwrap();
    assert_eq!((d.big_d, d.fund, d.cond), (16, Some(-4), Some(2)));
}

#[test]
fn xi_examples() {
    assert_eq!(xi_of_integer(&BigInt::from(-1), 5), 1);
    assert_eq!(xi_of_integer(&BigInt::from(3), 3), 0);
    assert_eq!(xi_of_integer(&BigInt::from(2), 3), -1);
    assert_eq!(xi_of_integer(&BigInt::from(17), 2), 1);
    assert_eq!(xi_of_integer(&BigInt::from(-3), 2), -1);
}

#[test]
fn hilbert_examples() {
    for b in [-7i64, -1, 2, 3, 10] {
        for l in [2, 3, 5] {
            assert_eq!(hilbert_symbol(&rat(1, 1), &rat(b, 1), l), 1);
        }
    }
    assert_eq!(hilbert_symbol(&rat(-1, 1), &rat(-1, 1), 2), -1);
    assert_eq!(hilbert_symbol(&rat(2, 1), &rat(5, 1), 5), -1);
}

#[test]
fn hasse_and_eta_examples() {
    for r in 1..=4 {
        for l in [2, 3, 5] {
            assert_eq!(hasse_invariant(&HalfIntegralMatrix::identity(r), l).unwrap(), 1);
        }
    }
    for t in [3i64, 5, 6, 10] {
        for l in [2u64, 3, 5] {
            let want = hilbert_symbol(&rat(t, 1), &rat(t, 1), l);
            assert_eq!(hasse_invariant(&HalfIntegralMatrix::diag(&[t]), l).unwrap(), want);
        }
    }
    assert_eq!(eta(&HalfIntegralMatrix::diag(&[1]), 3).unwrap(), 1);
    assert_eq!(eta(&HalfIntegralMatrix::diag(&[5]), 5).unwrap(), 1);
    assert_eq!(eta(&HalfIntegralMatrix::identity(3), 2).unwrap(), -1);
}

#[test]
fn embedding_scaling_enumeration() {
    assert_eq!(block_embed(&HalfIntegralMatrix::diag(&[2]), 2), HalfIntegralMatrix::diag(&[2, 0]));
    assert_eq!(block_embed(&HalfIntegralMatrix::zero(0), 2), HalfIntegralMatrix::zero(2));
    assert_eq!(block_embed(&HalfIntegralMatrix::identity(2), 3), HalfIntegralMatrix::diag(&[1, 1, 0]));
    assert_eq!(scale(&HalfIntegralMatrix::diag(&[1]), 5), HalfIntegralMatrix::diag(&[5]));
    assert_eq!(scale(&HalfIntegralMatrix::zero(2), 3), HalfIntegralMatrix::zero(2));
    assert_eq!(scale(&hm(&[&[2, 1], &[1, 2]]), 2), hm(&[&[4, 2], &[2, 4]]));

    let e = enumerate_indices(1, 2);
    assert_eq!(e, vec![HalfIntegralMatrix::diag(&[0]), HalfIntegralMatrix::diag(&[1]), HalfIntegralMatrix::diag(&[2])]);
    assert_eq!(enumerate_indices(2, 0), vec![HalfIntegralMatrix::zero(2)]);
    let mut e = enumerate_indices(2, 1);
    e.sort();
    let mut want = vec![HalfIntegralMatrix::zero(2), HalfIntegralMatrix::diag(&[1, 0]), HalfIntegralMatrix::diag(&[0, 1])];
    want.sort();
    assert_eq!(e, want);
}

#[test]
fn enumeration_matches_brute_force_and_is_closed() {
    for (n, bound) in [(2usize, 4i64), (3, 3)] {
        let e = enumerate_indices(n, bound);
        // brute force over bounded doubled entries
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let mut count = 0;
        let mut idx = vec![0i64; pairs.len()];
        let range: Vec<Vec<i64>> = pairs
            .iter()
            .map(|&(i, j)| if i == j { (0..=2 * bound).step_by(2).collect() } else { (-2 * bound..=2 * bound).collect() })
            .collect();
        loop {
            let mut g = vec![vec![0i64; n]; n];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                g[i][j] = range[k][idx[k] as usize];
                g[j][i] = g[i][j];
            }
            let t = HalfIntegralMatrix::from_doubled(g).unwrap();
            if t.trace() <= bound && t.is_psd() {
                count += 1;
                assert!(e.binary_search(&t).is_ok() || e.contains(&t), "{t} missing");
            }
            let mut k = 0;
            while k < idx.len() {
                idx[k] += 1;
                if (idx[k] as usize) < range[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == idx.len() {
                break;
            }
        }
        assert_eq!(count, e.len());
        // conjugates inside the bound are present
        for (s, t) in e.iter().enumerate() {
            let u = random_unimodular_conjugate(t, s as u64);
            if u.trace() <= bound {
                assert!(e.contains(&u));
            }
        }
    }
}

/// Even-rank nondegenerate forms with small entries.
fn even_form() -> impl Strategy<Value = HalfIntegralMatrix> {
    prop_oneof![Just(2usize), Just(4usize)].prop_flat_map(|n| {
        proptest::collection::vec(-4i64..=4, n * n).prop_filter_map("degenerate", move |v| {
            let mut g = vec![vec![0i64; n]; n];
            for i in 0..n {
                for j in i..n {
                    let x = v[i * n + j];
                    g[i][j] = if i == j { 2 * x } else { x };
                    g[j][i] = g[i][j];
                }
            }
            let t = HalfIntegralMatrix::from_doubled(g).ok()?;
            (t.det_doubled() != 0).then_some(t)
        })
    })
}

fn nonzero() -> impl Strategy<Value = i64> {
    prop_oneof![-60i64..=-1, 1i64..=60]
}

proptest! {
    #[test]
    fn det_data_fundamental(t in even_form()) {
        let d = det_data(&t).unwrap();
        let (fund, cond) = (d.fund.unwrap(), d.cond.unwrap());
        prop_assert!(is_fundamental(fund));
        let sign = if (t.size() / 2) % 2 == 0 { 1 } else { -1 };
        prop_assert_eq!(fund * cond * cond, sign * d.big_d);
    }

    #[test]
    fn xi_is_kronecker(t in even_form(), l in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let fund = det_data(&t).unwrap().fund.unwrap();
        prop_assert_eq!(xi(&t, l).unwrap(), kronecker(fund as i64, l as i64));
    }

    #[test]
    fn hilbert_symmetric_bimultiplicative(a in nonzero(), b in nonzero(), c in nonzero(), l in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let (a, b, c) = (rat(a, 1), rat(b, 1), rat(c, 1));
        prop_assert_eq!(hilbert_symbol(&a, &b, l), hilbert_symbol(&b, &a, l));
        prop_assert_eq!(
            hilbert_symbol(&(&a * &b), &c, l),
            hilbert_symbol(&a, &c, l) * hilbert_symbol(&b, &c, l)
        );
        prop_assert_eq!(hilbert_symbol(&a, &-a.clone(), l), 1);
    }

    #[test]
    fn hilbert_product_formula(a in nonzero(), b in nonzero()) {
        // product over all places is 1; only 2, infinity and primes dividing ab contribute
        let mut primes = prime_divisors((2 * a * b).unsigned_abs());
        primes.sort();
        let finite: i32 = primes.iter().map(|&l| hilbert_symbol(&rat(a, 1), &rat(b, 1), l)).product();
        let real = if a < 0 && b < 0 { -1 } else { 1 };
        prop_assert_eq!(finite * real, 1);
    }
}

#[test]
fn hasse_gl_invariant() {
    let forms = [
        hm(&[&[2, 1, 0], &[1, 4, 1], &[0, 1, 6]]),
        HalfIntegralMatrix::diag(&[1, 3, 5]),
        hm(&[&[2, 1], &[1, 6]]),
        HalfIntegralMatrix::diag(&[2, 3, 7, 1]),
    ];
    for t in &forms {
        for trial in 0..50 {
            let u = random_unimodular_conjugate(t, trial);
            assert_eq!(u.det_doubled(), t.det_doubled());
            for l in [2, 3, 5, 7] {
                assert_eq!(hasse_invariant(&u, l).unwrap(), hasse_invariant(t, l).unwrap(), "{t} vs {u} at {l}");
            }
        }
    }
}

#[test]
fn random_conjugation_contract() {
    let t = hm(&[&[2, 1, 0], &[1, 4, 1], &[0, 1, 6]]);
    let id: Vec<Vec<i128>> = (0..3).map(|i| (0..3).map(|j| i128::from(i == j)).collect()).collect();
    assert_eq!(t.conjugate(&id), t);
    assert_eq!(random_unimodular_conjugate(&t, 9), random_unimodular_conjugate(&t, 9));
    let u = random_unimodular(3, 4);
    assert_eq!(siegel_core::exactnum::det(&u).abs(), 1);
}

#[test]
fn keys_round_trip() {
    for t in enumerate_indices(3, 2) {
        assert_eq!(HalfIntegralMatrix::parse_key(&t.key()).unwrap(), t);
    }
    assert!(HalfIntegralMatrix::parse_key("2:1,0,2").is_err());
    let _: Rational = HalfIntegralMatrix::identity(2).det();
}

#[test]
fn block_reduction() {
    let t = hm(&[&[2, 2], &[2, 2]]);
    let (tp, u) = t.block_reduce();
    assert_eq!(tp.size(), 1);
    // T = [[1,1],[1,1]] is the form (x + y)^2
    assert_eq!(tp, HalfIntegralMatrix::diag(&[1]));
    assert_eq!(siegel_core::exactnum::det(&u).abs(), 1);
    let (tz, _) = HalfIntegralMatrix::zero(2).block_reduce();
    assert_eq!(tz.size(), 0);
}
