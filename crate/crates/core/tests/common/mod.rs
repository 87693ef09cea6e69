//! Seeded generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use keypoly_core::field::RatFunc;
use keypoly_core::{
    rat, FieldDescriptor, FieldElem, GammaSeq, HahnSeries, LimitScenario, Minimizer, MinimizerInput, Poly, Rat,
    XPoly,
};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn scenario(name: &str) -> LimitScenario {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name].iter().collect();
    LimitScenario::load(p).expect("shipped scenario loads")
}

/// The four coefficient fields exercised by the algebraic identities.
pub fn identity_fields() -> Vec<FieldDescriptor> {
    vec![
        FieldDescriptor::rationals(3).unwrap(),
        FieldDescriptor::prime_field(2).unwrap(),
        FieldDescriptor::prime_field(3).unwrap(),
        FieldDescriptor::ratfunc(2).unwrap(),
    ]
}

fn small_tpoly(r: &mut ChaCha8Rng, p: u64, max_deg: usize) -> Vec<u64> {
    (0..=r.random_range(0..=max_deg)).map(|_| r.random_range(0..p)).collect()
}

pub fn random_elem(r: &mut ChaCha8Rng, field: FieldDescriptor) -> FieldElem {
    use keypoly_core::FieldKind;
    match field.kind() {
        FieldKind::Prime => FieldElem::from_i64(field, r.random_range(0..field.p() as i64)),
        FieldKind::Rationals => {
            let num = FieldElem::from_i64(field, r.random_range(-30..=30));
            let den = FieldElem::from_i64(field, r.random_range(1..=12));
            num.div(&den).unwrap()
        }
        FieldKind::RatFunc => {
            let p = field.p();
            let num = small_tpoly(r, p, 3);
            let mut den = small_tpoly(r, p, 2);
            if den.iter().all(|&c| c == 0) {
                den = vec![1];
            }
            FieldElem::RatFunc(RatFunc::from_parts(p, &num, &den).unwrap())
        }
        FieldKind::Puiseux => {
            let p = field.p();
            let terms: Vec<(Rat, u64)> = (0..r.random_range(0..4))
                .map(|_| (rat(r.random_range(-8..=8), 1 << r.random_range(0..4)), r.random_range(1..p)))
                .collect();
            FieldElem::Puiseux(HahnSeries::exact(p, terms))
        }
    }
}

pub fn random_poly(r: &mut ChaCha8Rng, field: FieldDescriptor, max_deg: usize) -> Poly {
    let deg = r.random_range(0..=max_deg);
    Poly::new(field, (0..=deg).map(|_| random_elem(r, field)).collect()).unwrap()
}

pub fn random_nonzero_poly(r: &mut ChaCha8Rng, field: FieldDescriptor, max_deg: usize) -> Poly {
    loop {
        let f = random_poly(r, field, max_deg);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random monic polynomial of degree in `1..=max_deg`.
pub fn random_monic(r: &mut ChaCha8Rng, field: FieldDescriptor, max_deg: usize) -> Poly {
    let deg = r.random_range(1..=max_deg);
    let mut coeffs: Vec<FieldElem> = (0..deg).map(|_| random_elem(r, field)).collect();
    coeffs.push(FieldElem::one(field));
    Poly::new(field, coeffs).unwrap()
}

pub fn random_xpoly(r: &mut ChaCha8Rng, field: FieldDescriptor, n: usize, max_deg_x: usize) -> XPoly {
    let coeffs = (0..=r.random_range(0..=max_deg_x))
        .map(|_| random_poly(r, field, n - 1))
        .collect();
    XPoly::new(field, n, coeffs).unwrap()
}

/// `C(n, k)` in the field, computed independently of the library.
pub fn binom(field: FieldDescriptor, n: usize, k: usize) -> FieldElem {
    let c: BigUint = num_integer::binomial(BigUint::from(n), BigUint::from(k));
    FieldElem::from_biguint(field, &c)
}

/// Hasse derivative straight from the definition on monomials.
pub fn hasse_oracle(f: &Poly, b: usize) -> Poly {
    let field = f.field();
    let mut acc = Poly::zero(field);
    for (k, c) in f.coeffs().iter().enumerate() {
        if k >= b {
            let term = Poly::monomial(c.mul(&binom(field, k, b)).unwrap(), k - b);
            acc = acc.add(&term).unwrap();
        }
    }
    acc
}

/// Evaluates `Σ c_i g^i` by repeated multiplication.
pub fn eval_oracle(coeffs: &[Poly], g: &Poly) -> Poly {
    let field = g.field();
    let mut acc = Poly::zero(field);
    let mut power = Poly::one(field);
    for c in coeffs {
        acc = acc.add(&c.mul(&power).unwrap()).unwrap();
        power = power.mul(g).unwrap();
    }
    acc
}

pub fn affine(pair: (Rat, u64), gamma: Rat) -> Rat {
    pair.0 + gamma * Rat::from_integer(pair.1 as i64)
}

/// Whether `pairs[b]` is strictly below every other function at `gamma`.
pub fn strictly_wins(pairs: &[(Rat, u64)], b: usize, gamma: Rat) -> bool {
    let vb = affine(pairs[b], gamma);
    pairs.iter().enumerate().all(|(i, &p)| i == b || affine(p, gamma) > vb)
}

/// Random minimizer input with distinct multipliers and a strictly
/// increasing sequence: an explicit list, or a closed form below a supremum.
pub fn random_minimizer_input(r: &mut ChaCha8Rng, closed: bool) -> MinimizerInput {
    let n = r.random_range(1..=4);
    let mut ts: Vec<u64> = Vec::new();
    while ts.len() < n {
        let t = r.random_range(1..=6);
        if !ts.contains(&t) {
            ts.push(t);
        }
    }
    let pairs: Vec<(Rat, u64)> = ts
        .iter()
        .map(|&t| (rat(r.random_range(-20..=20), r.random_range(1..=4)), t))
        .collect();
    let start = r.random_range(0..4);
    let gammas = if closed {
        let c = rat(r.random_range(-4..=4), r.random_range(1..=3));
        let scale = rat(r.random_range(1..=8), 1);
        GammaSeq::closed_form(start, Some(c), move |s| c - scale / Rat::from_integer(s as i64 + 1))
    } else {
        let mut g = rat(r.random_range(-10..=0), 1);
        let mut values = Vec::new();
        for _ in 0..r.random_range(2..=10) {
            values.push(g);
            g += rat(r.random_range(1..=6), r.random_range(1..=4));
        }
        GammaSeq::Explicit { start, values }
    };
    MinimizerInput { pairs, gammas }
}

/// `γ_σ` for `σ` from the start of the sequence up to `last` (capped at the
/// end of an explicit list).
pub fn gamma_grid(gammas: &GammaSeq, last: u64) -> Vec<Rat> {
    match gammas {
        GammaSeq::Explicit { values, .. } => values.clone(),
        GammaSeq::ClosedForm { start, gamma, .. } => (*start..=last).map(|s| gamma(s)).collect(),
    }
}

/// Checks a minimizer claim against grid evaluation: `b` wins strictly at
/// every grid index past `rho`, and (when `rho` is past the start) loses at
/// `rho` itself.
pub fn grid_confirms(input: &MinimizerInput, m: &Minimizer) -> bool {
    let start = input.gammas.start();
    let grid = gamma_grid(&input.gammas, m.rho + 300);
    let b = m.b - 1;
    let past = grid
        .iter()
        .enumerate()
        .filter(|(k, _)| start + *k as u64 > m.rho)
        .all(|(_, &g)| strictly_wins(&input.pairs, b, g));
    let tight = m.rho == start || !strictly_wins(&input.pairs, b, grid[(m.rho - start) as usize]);
    past && tight
}

/// Grid verdict when no eventual minimizer is reported for an explicit list:
/// no single index wins strictly at both of the last two entries.
pub fn grid_has_no_tail_winner(input: &MinimizerInput) -> bool {
    let grid = gamma_grid(&input.gammas, 0);
    let tail = &grid[grid.len().saturating_sub(2)..];
    (0..input.pairs.len()).all(|b| !tail.iter().all(|&g| strictly_wins(&input.pairs, b, g)))
}
