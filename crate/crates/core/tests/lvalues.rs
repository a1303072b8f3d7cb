use num_bigint::BigInt;
use proptest::prelude::*;

use siegel_core::characters::DirichletCharacter;
use siegel_core::exactnum::arith::{is_prime, prime_divisors};
use siegel_core::exactnum::{rat, rational_pow, CyclotomicNumber, Rational};
use siegel_core::lvalues::{bernoulli, gen_bernoulli, l_at_negative, l_depleted};
use siegel_core::Error;

fn q(z: CyclotomicNumber) -> Rational {
    z.to_rational().unwrap()
}

#[test]
fn bernoulli_examples() {
    assert_eq!(bernoulli(0), rat(1, 1));
    assert_eq!(bernoulli(1), rat(-1, 2));
    assert_eq!(bernoulli(3), rat(0, 1));
    assert_eq!(bernoulli(4), rat(-1, 30));
    assert_eq!(bernoulli(12), rat(-691, 2730));
}

#[test]
fn generalized_examples() {
    let triv = DirichletCharacter::trivial(1);
    assert_eq!(q(gen_bernoulli(4, &triv)), rat(-1, 30));
    let k4 = DirichletCharacter::kronecker_character(-4);
    assert_eq!(q(gen_bernoulli(1, &k4)), rat(-1, 2));
    assert_eq!(q(l_at_negative(1, &k4).unwrap()), rat(1, 2));
    // even character, odd k
    let k5 = DirichletCharacter::kronecker_character(5);
    assert!(gen_bernoulli(3, &k5).is_zero());
}

#[test]
fn l_value_examples() {
    let triv = DirichletCharacter::trivial(1);
    assert_eq!(q(l_at_negative(4, &triv).unwrap()), rat(1, 120));
    assert_eq!(q(l_at_negative(2, &triv).unwrap()), rat(-1, 12));
    assert!(matches!(l_at_negative(1, &triv), Err(Error::PoleAtOne)));
    assert_eq!(q(l_depleted(4, &triv, 5).unwrap()), rat(-31, 30));
    assert_eq!(q(l_depleted(2, &triv, 2).unwrap()), rat(1, 12));
    let k4 = DirichletCharacter::kronecker_character(-4);
    assert_eq!(l_depleted(3, &k4, 2).unwrap(), l_at_negative(3, &k4).unwrap());
}

#[test]
fn von_staudt_clausen() {
    for k in (2..=60).step_by(2) {
        // denominator of B_k is the product of primes l with (l - 1) | k
        let want: i64 = (2..=k as i64 + 1).filter(|&l| is_prime(l as u64) && k as i64 % (l - 1) == 0).product();
        assert_eq!(bernoulli(k).denom(), &BigInt::from(want), "k = {k}");
        let two_zeta = q(l_at_negative(k, &DirichletCharacter::trivial(1)).unwrap()) * rat(2, 1);
        assert_eq!((BigInt::from(want) * BigInt::from(k)) % two_zeta.denom(), BigInt::from(0));
    }
}

fn small_characters() -> Vec<DirichletCharacter> {
    let mut out: Vec<DirichletCharacter> = [-3i64, -4, 5, -7, 8, -8, 12, 13]
        .iter()
        .map(|&d| DirichletCharacter::kronecker_character(d))
        .collect();
    for s in ["7:3^1", "7:3^2", "9:2^1", "13:2^1", "5:2^1"] {
        out.push(DirichletCharacter::parse(s).unwrap());
    }
    out
}

proptest! {
    #[test]
    fn parity_vanishing(i in 0usize..13, k in 2usize..14) {
        let chi = &small_characters()[i];
        let vanishes = l_at_negative(k, chi).unwrap().is_zero();
        let mismatch = chi.sign() != if k % 2 == 0 { 1 } else { -1 };
        if mismatch {
            prop_assert!(vanishes);
        } else {
            prop_assert!(!vanishes);
        }
    }

    #[test]
    fn imprimitive_euler_product(i in 0usize..13, extra in prop::sample::select(vec![3u64, 5, 7, 11, 15]), k in 1usize..10) {
        let chi = small_characters()[i].clone();
        let induced = chi.product_raw(&DirichletCharacter::trivial(extra));
        prop_assume!(!(k == 1 && chi.is_trivial()));
        // B_{k, induced} = B_{k, chi} prod_{l | M', l not dividing the conductor} (1 - chi(l) l^{k-1})
        let mut want = gen_bernoulli(k, &chi);
        for l in prime_divisors(induced.modulus()) {
            if chi.conductor() % l != 0 {
                let lk = rational_pow(&rat(l as i64, 1), k as i64 - 1);
                let factor = &CyclotomicNumber::one() - &chi.evaluate(l as i64).scale(&lk);
                want = &want * &factor;
            }
        }
        prop_assert_eq!(gen_bernoulli(k, &induced), want);
    }
}
