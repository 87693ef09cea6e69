//! Coefficient fields with their base valuations.
//!
//! * `Fp`: the prime field with the trivial valuation.
//! * `Q_p`: the rationals with the p-adic valuation.
//! * `Fp(t)`: rational functions with the t-adic valuation.
//! * `Fp(t^Q)`: exact finite sums `Σ c_e t^e` with rational exponents and
//!   the t-adic valuation. These hold the coefficients of key polynomials
//!   that approach a pseudo-limit; only monomials are invertible.

mod hahn;
mod ratfunc;

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use hahn::HahnSeries;
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};
use crate::valgroup::{Rat, Value};

pub(crate) fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn mod_inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    mod_pow(a, p - 2, p)
}

pub(crate) fn write_t_power(f: &mut fmt::Formatter<'_>, e: Rat) -> fmt::Result {
    if e == Rat::one() {
        f.write_str("t")
    } else if e.is_integer() {
        write!(f, "t^{}", e.to_integer())
    } else {
        write!(f, "t^({e})")
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime,
    Rationals,
    RatFunc,
    Puiseux,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Prime => "Fp",
            FieldKind::Rationals => "Q",
            FieldKind::RatFunc => "Fp(t)",
            FieldKind::Puiseux => "Fp(t^Q)",
        })
    }
}

/// A coefficient field together with the prime that fixes its valuation
/// (the residue characteristic).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldDescriptor {
    kind: FieldKind,
    p: u64,
}

impl FieldDescriptor {
    pub fn new(kind: FieldKind, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if kind != FieldKind::Rationals && p > u32::MAX as u64 {
            return Err(Error::InvalidField(format!("prime {p} too large for residue arithmetic")));
        }
        Ok(FieldDescriptor { kind, p })
    }

    pub fn prime_field(p: u64) -> Result<Self> {
        Self::new(FieldKind::Prime, p)
    }

    pub fn rationals(p: u64) -> Result<Self> {
        Self::new(FieldKind::Rationals, p)
    }

    pub fn ratfunc(p: u64) -> Result<Self> {
        Self::new(FieldKind::RatFunc, p)
    }

    pub fn puiseux(p: u64) -> Result<Self> {
        Self::new(FieldKind::Puiseux, p)
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    /// The residue characteristic of the base valuation.
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Characteristic of the field itself (0 for `Q`).
    pub fn characteristic(&self) -> u64 {
        match self.kind {
            FieldKind::Rationals => 0,
            _ => self.p,
        }
    }

    pub fn has_t(&self) -> bool {
        matches!(self.kind, FieldKind::RatFunc | FieldKind::Puiseux)
    }

    /// Parses `F2`, `F3(t)`, `F2(t^Q)`, `Q_5`, or `Q` (which takes
    /// `default_prime` as its valuation prime).
    pub fn parse(s: &str, default_prime: u64) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidField(format!("unknown field {s:?}"));
        if s == "Q" {
            return Self::rationals(default_prime);
        }
        if let Some(rest) = s.strip_prefix("Q_") {
            return Self::rationals(rest.parse().map_err(|_| bad())?);
        }
        let rest = s.strip_prefix('F').ok_or_else(bad)?;
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let p: u64 = digits.parse().map_err(|_| bad())?;
        match &rest[digits.len()..] {
            "" => Self::prime_field(p),
            "(t)" => Self::ratfunc(p),
            "(t^Q)" => Self::puiseux(p),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p;
        match self.kind {
            FieldKind::Prime => write!(f, "F{p}"),
            FieldKind::Rationals => write!(f, "Q_{p}"),
            FieldKind::RatFunc => write!(f, "F{p}(t)"),
            FieldKind::Puiseux => write!(f, "F{p}(t^Q)"),
        }
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s, 2)
    }
}

/// An element of one of the fields of [`FieldDescriptor`], in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Prime { p: u64, v: u64 },
    Rational { p: u64, q: BigRational },
    RatFunc(RatFunc),
    Puiseux(HahnSeries),
}

impl FieldElem {
    pub fn field(&self) -> FieldDescriptor {
        let (kind, p) = match self {
            FieldElem::Prime { p, .. } => (FieldKind::Prime, *p),
            FieldElem::Rational { p, .. } => (FieldKind::Rationals, *p),
            FieldElem::RatFunc(r) => (FieldKind::RatFunc, r.p()),
            FieldElem::Puiseux(s) => (FieldKind::Puiseux, s.p()),
        };
        FieldDescriptor { kind, p }
    }

    pub fn from_i64(field: FieldDescriptor, n: i64) -> Self {
        let p = field.p;
        let residue = n.rem_euclid(p as i64) as u64;
        match field.kind {
            FieldKind::Prime => FieldElem::Prime { p, v: residue },
            FieldKind::Rationals => FieldElem::Rational {
                p,
                q: BigRational::from_integer(BigInt::from(n)),
            },
            FieldKind::RatFunc => FieldElem::RatFunc(RatFunc::constant(p, residue)),
            FieldKind::Puiseux => FieldElem::Puiseux(HahnSeries::constant(p, residue)),
        }
    }

    /// Image of a nonnegative integer (binomial coefficients in particular).
    pub fn from_biguint(field: FieldDescriptor, n: &BigUint) -> Self {
        match field.kind {
            FieldKind::Rationals => FieldElem::Rational {
                p: field.p,
                q: BigRational::from_integer(BigInt::from(n.clone())),
            },
            _ => {
                let r = (n % BigUint::from(field.p)).to_u64().expect("residue fits");
                Self::from_i64(field, r as i64)
            }
        }
    }

    pub fn zero(field: FieldDescriptor) -> Self {
        Self::from_i64(field, 0)
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::from_i64(field, 1)
    }

    /// `t^e`. Rational exponents need `Fp(t^Q)`; integer ones also work in `Fp(t)`.
    pub fn t_pow(field: FieldDescriptor, e: Rat) -> Result<Self> {
        match field.kind {
            FieldKind::Puiseux => Ok(FieldElem::Puiseux(HahnSeries::monomial(field.p, 1, e))),
            FieldKind::RatFunc if e.is_integer() => {
                Ok(FieldElem::RatFunc(RatFunc::t_pow(field.p, e.to_integer())))
            }
            FieldKind::RatFunc => Err(Error::InvalidField(format!(
                "exponent {e} is not an integer; fractional powers of t need Fp(t^Q)"
            ))),
            _ => Err(Error::InvalidField(format!("{field} has no variable t"))),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Prime { v, .. } => *v == 0,
            FieldElem::Rational { q, .. } => q.is_zero(),
            FieldElem::RatFunc(r) => r.is_zero(),
            FieldElem::Puiseux(s) => s.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Prime { v, .. } => *v == 1,
            FieldElem::Rational { q, .. } => q.is_one(),
            FieldElem::RatFunc(r) => r.is_one(),
            FieldElem::Puiseux(s) => s.is_one(),
        }
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.field(), other.field());
        if a != b {
            return Err(Error::FieldMismatch(a, b));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Prime { p, v }, FieldElem::Prime { v: w, .. }) => FieldElem::Prime {
                p: *p,
                v: (v + w) % p,
            },
            (FieldElem::Rational { p, q }, FieldElem::Rational { q: r, .. }) => {
                FieldElem::Rational { p: *p, q: q + r }
            }
            (FieldElem::RatFunc(a), FieldElem::RatFunc(b)) => FieldElem::RatFunc(a.add(b)?),
            (FieldElem::Puiseux(a), FieldElem::Puiseux(b)) => FieldElem::Puiseux(a.add(b)?),
            _ => unreachable!("checked by same_field"),
        })
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldElem::Prime { p, v } => FieldElem::Prime { p: *p, v: (p - v) % p },
            FieldElem::Rational { p, q } => FieldElem::Rational { p: *p, q: -q },
            FieldElem::RatFunc(a) => FieldElem::RatFunc(a.neg()),
            FieldElem::Puiseux(a) => FieldElem::Puiseux(a.neg()),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        Ok(match (self, other) {
            (FieldElem::Prime { p, v }, FieldElem::Prime { v: w, .. }) => FieldElem::Prime {
                p: *p,
                v: mod_mul(*v, *w, *p),
            },
            (FieldElem::Rational { p, q }, FieldElem::Rational { q: r, .. }) => {
                FieldElem::Rational { p: *p, q: q * r }
            }
            (FieldElem::RatFunc(a), FieldElem::RatFunc(b)) => FieldElem::RatFunc(a.mul(b)?),
            (FieldElem::Puiseux(a), FieldElem::Puiseux(b)) => FieldElem::Puiseux(a.mul(b)?),
            _ => unreachable!("checked by same_field"),
        })
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldElem::Prime { p, v } => FieldElem::Prime {
                p: *p,
                v: mod_inv(*v, *p),
            },
            FieldElem::Rational { p, q } => FieldElem::Rational { p: *p, q: q.recip() },
            FieldElem::RatFunc(a) => FieldElem::RatFunc(a.inv()?),
            FieldElem::Puiseux(a) => {
                if a.terms().len() != 1 {
                    return Err(Error::NotInvertible(format!(
                        "{a} is not a monomial; only monomials of Fp(t^Q) are inverted exactly"
                    )));
                }
                FieldElem::Puiseux(a.inverse(Rat::one())?)
            }
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.field());
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The base valuation: trivial on `Fp`, p-adic on `Q`, t-adic otherwise.
    pub fn valuation(&self) -> Value {
        match self {
            FieldElem::Prime { v, .. } => {
                if *v == 0 {
                    Value::Infinity
                } else {
                    Value::zero()
                }
            }
            FieldElem::Rational { p, q } => {
                if q.is_zero() {
                    return Value::Infinity;
                }
                let p = BigInt::from(*p);
                let count = |mut n: BigInt| {
                    let mut k = 0i64;
                    loop {
                        let (d, r) = n.div_rem(&p);
                        if !r.is_zero() {
                            return k;
                        }
                        n = d;
                        k += 1;
                    }
                };
                Value::from_int(count(q.numer().clone()) - count(q.denom().clone()))
            }
            FieldElem::RatFunc(r) => r.valuation(),
            FieldElem::Puiseux(s) => s.valuation().expect("exact series"),
        }
    }

    /// The element as a series in `t` over `F_p`. Exact for `Fp` and `Fp(t^Q)`;
    /// rational functions with non-monomial denominators are expanded to
    /// `rel_precision` beyond their leading exponent.
    pub fn to_series(&self, rel_precision: Rat) -> Result<HahnSeries> {
        match self {
            FieldElem::Prime { p, v } => Ok(HahnSeries::constant(*p, *v)),
            FieldElem::RatFunc(r) => r.to_series(rel_precision),
            FieldElem::Puiseux(s) => Ok(s.clone()),
            FieldElem::Rational { p, .. } => Err(Error::InvalidField(format!(
                "Q_{p} has characteristic 0 and cannot be mapped into series over F{p}"
            ))),
        }
    }

    /// Rendering is a single token (no spaces), safe to juxtapose with `*x^k`.
    pub(crate) fn is_atomic(&self) -> bool {
        !self.to_string().contains(' ')
    }

    pub(crate) fn is_negative_rational(&self) -> bool {
        matches!(self, FieldElem::Rational { q, .. } if q.is_negative())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Prime { v, .. } => write!(f, "{v}"),
            FieldElem::Rational { q, .. } => write!(f, "{q}"),
            FieldElem::RatFunc(r) => write!(f, "{r}"),
            FieldElem::Puiseux(s) => write!(f, "{s}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valgroup::rat;

    #[test]
    fn characteristic_two_addition() {
        let f2 = FieldDescriptor::prime_field(2).unwrap();
        let one = FieldElem::one(f2);
        assert!(one.add(&one).unwrap().is_zero());
    }

    #[test]
    fn rational_division() {
        let q = FieldDescriptor::rationals(2).unwrap();
        let third = FieldElem::one(q).div(&FieldElem::from_i64(q, 3)).unwrap();
        assert_eq!(third.to_string(), "1/3");
        assert_eq!(FieldElem::one(q).div(&FieldElem::zero(q)), Err(Error::DivisionByZero));
    }

    #[test]
    fn base_valuations() {
        let q2 = FieldDescriptor::rationals(2).unwrap();
        assert_eq!(FieldElem::from_i64(q2, 12).valuation(), Value::from_int(2));
        let half = FieldElem::one(q2).div(&FieldElem::from_i64(q2, 8)).unwrap();
        assert_eq!(half.valuation(), Value::from_int(-3));
        let f2t = FieldDescriptor::ratfunc(2).unwrap();
        let inv_t = FieldElem::t_pow(f2t, rat(-1, 1)).unwrap();
        assert_eq!(inv_t.valuation(), Value::from_int(-1));
        assert_eq!(FieldElem::zero(f2t).valuation(), Value::Infinity);
        let f5 = FieldDescriptor::prime_field(5).unwrap();
        assert_eq!(FieldElem::from_i64(f5, 3).valuation(), Value::zero());
    }

    #[test]
    fn mismatch_and_fractional_exponent_rejected() {
        let f2 = FieldDescriptor::prime_field(2).unwrap();
        let f3 = FieldDescriptor::prime_field(3).unwrap();
        assert!(matches!(
            FieldElem::one(f2).add(&FieldElem::one(f3)),
            Err(Error::FieldMismatch(_, _))
        ));
        let f2t = FieldDescriptor::ratfunc(2).unwrap();
        assert!(FieldElem::t_pow(f2t, rat(-1, 2)).is_err());
        let pu = FieldDescriptor::puiseux(2).unwrap();
        assert!(FieldElem::t_pow(pu, rat(-1, 2)).is_ok());
    }

    #[test]
    fn puiseux_inverse_only_for_monomials() {
        let pu = FieldDescriptor::puiseux(2).unwrap();
        let a = FieldElem::t_pow(pu, rat(-1, 2)).unwrap();
        let b = a.add(&FieldElem::one(pu)).unwrap();
        assert!(a.inv().unwrap().mul(&a).unwrap().is_one());
        assert!(matches!(b.inv(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn descriptor_parsing() {
        assert_eq!("F2(t^Q)".parse::<FieldDescriptor>().unwrap(), FieldDescriptor::puiseux(2).unwrap());
        assert_eq!(FieldDescriptor::parse("Q", 3).unwrap(), FieldDescriptor::rationals(3).unwrap());
        assert_eq!("Q_5".parse::<FieldDescriptor>().unwrap().to_string(), "Q_5");
        assert_eq!("F3(t)".parse::<FieldDescriptor>().unwrap().to_string(), "F3(t)");
        assert!("F4".parse::<FieldDescriptor>().is_err());
        assert!("R".parse::<FieldDescriptor>().is_err());
    }
}
