mod common;

use common::*;
use keypoly_core::{compose_x, q_expand, Poly, XPoly};
use proptest::prelude::*;

const CASES_PER_FIELD: usize = 60;

#[test]
fn hasse_composition_matches_binomial_rule() {
    let mut r = rng(11);
    let mut n = 0;
    for field in identity_fields() {
        for _ in 0..CASES_PER_FIELD {
            let f = random_poly(&mut r, field, 7);
            let (i, k) = (rand::Rng::random_range(&mut r, 0..4), rand::Rng::random_range(&mut r, 0..4));
            let lhs = f.hasse(i).unwrap().hasse(k).unwrap();
            let rhs = f.hasse(i + k).unwrap().scale(&binom(field, i + k, i)).unwrap();
            assert_eq!(lhs, rhs, "{field}: f = {f}, i = {i}, k = {k}");
            assert_eq!(f.hasse(i).unwrap(), hasse_oracle(&f, i));
            n += 1;
        }
    }
    assert!(n >= 200);
}

#[test]
fn taylor_reconstruction() {
    let mut r = rng(12);
    let mut n = 0;
    for field in identity_fields() {
        for _ in 0..CASES_PER_FIELD {
            let deg_q = rand::Rng::random_range(&mut r, 1..=2);
            let l = random_xpoly(&mut r, field, deg_q, 4);
            let a = random_poly(&mut r, field, deg_q - 1);
            let b = random_poly(&mut r, field, 3);
            let derivs = l.taylor_expand(&a).unwrap();
            for (i, d) in derivs.iter().enumerate() {
                assert_eq!(*d, l.hasse(i).unwrap().eval(&a).unwrap());
            }
            let diff = b.sub(&a).unwrap();
            assert_eq!(eval_oracle(&derivs, &diff), eval_oracle(l.coeffs(), &b), "{field}");
            n += 1;
        }
    }
    assert!(n >= 200);
}

#[test]
fn euclid_round_trip() {
    let mut r = rng(13);
    let mut n = 0;
    for field in identity_fields() {
        for _ in 0..CASES_PER_FIELD {
            let f = random_poly(&mut r, field, 8);
            let g = random_nonzero_poly(&mut r, field, 4);
            let (q, rem) = f.euclid_div(&g).unwrap();
            assert_eq!(q.mul(&g).unwrap().add(&rem).unwrap(), f);
            assert!(rem.is_zero() || rem.degree() < g.degree());
            n += 1;
        }
    }
    assert!(n >= 200);
}

#[test]
fn expansion_round_trip() {
    let mut r = rng(14);
    let mut n = 0;
    for field in identity_fields() {
        for _ in 0..CASES_PER_FIELD {
            let f = random_poly(&mut r, field, 9);
            let q = random_monic(&mut r, field, 3);
            let e = q_expand(&f, &q).unwrap();
            let deg_q = q.degree().unwrap();
            assert!(e.coeffs().iter().all(|a| a.degree().is_none_or(|d| d < deg_q)));
            assert!(e.coeffs().last().is_none_or(|a| !a.is_zero()));
            assert_eq!(compose_x(&e.to_xpoly(), &q).unwrap(), f);
            assert_eq!(eval_oracle(e.coeffs(), &q), f);
            n += 1;
        }
    }
    assert!(n >= 200);
}

#[test]
fn expansion_example() {
    let field = "Q".parse().unwrap();
    let f = keypoly_core::parse_poly(field, "x^2 + 2x + 4").unwrap();
    let q = keypoly_core::parse_poly(field, "x - 1").unwrap();
    let digits: Vec<String> = q_expand(&f, &q).unwrap().coeffs().iter().map(Poly::to_string).collect();
    assert_eq!(digits, ["7", "4", "1"]);
}

#[test]
fn xpoly_rejects_oversized_digits() {
    let field = "F3".parse().unwrap();
    let x = Poly::x(field);
    assert!(XPoly::new(field, 1, vec![x]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn frobenius_is_additive_in_char_p(seed in any::<u64>(), which in 0usize..3) {
        let field = identity_fields()[which + 1];
        let mut r = rng(seed);
        let f = random_poly(&mut r, field, 4);
        let g = random_poly(&mut r, field, 4);
        let p = field.characteristic() as u32;
        let lhs = f.add(&g).unwrap().pow(p).unwrap();
        let rhs = f.pow(p).unwrap().add(&g.pow(p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_parse_round_trip(seed in any::<u64>(), which in 0usize..4) {
        let field = identity_fields()[which];
        let mut r = rng(seed);
        let f = random_poly(&mut r, field, 5);
        let back = keypoly_core::parse_poly(field, &f.to_string()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn composition_is_multiplicative(seed in any::<u64>(), which in 0usize..4) {
        let field = identity_fields()[which];
        let mut r = rng(seed);
        let f = random_poly(&mut r, field, 3);
        let g = random_poly(&mut r, field, 3);
        let h = random_poly(&mut r, field, 2);
        let lhs = f.mul(&g).unwrap().compose(&h).unwrap();
        let rhs = f.compose(&h).unwrap().mul(&g.compose(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
