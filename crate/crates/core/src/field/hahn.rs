//! Truncated generalized power series over a prime field with rational
//! exponents: `Σ c_e t^e + O(t^precision)`.
//!
//! All terms with exponent below `precision` are known exactly; nothing is
//! known at or above it. A precision of `∞` makes the series an exact finite
//! sum.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};

use super::{mod_inv, mod_mul, write_t_power};
use crate::error::{Error, Result};
use crate::valgroup::{rat_add, rat_div_int, rat_sub, Rat, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HahnSeries {
    p: u64,
    terms: Vec<(Rat, u64)>,
    precision: Value,
}

impl HahnSeries {
    /// Builds a series, merging repeated exponents and discarding zero
    /// coefficients and terms at or above `precision`.
    pub fn new(p: u64, terms: impl IntoIterator<Item = (Rat, u64)>, precision: Value) -> Self {
        let mut acc: BTreeMap<Rat, u64> = BTreeMap::new();
        for (e, c) in terms {
            let slot = acc.entry(e).or_insert(0);
            *slot = (*slot + c % p) % p;
        }
        let terms = acc
            .into_iter()
            .filter(|&(e, c)| c != 0 && Value::Finite(e) < precision)
            .collect();
        HahnSeries { p, terms, precision }
    }

    pub fn exact(p: u64, terms: impl IntoIterator<Item = (Rat, u64)>) -> Self {
        Self::new(p, terms, Value::Infinity)
    }

    pub fn zero(p: u64) -> Self {
        HahnSeries {
            p,
            terms: Vec::new(),
            precision: Value::Infinity,
        }
    }

    pub fn monomial(p: u64, coeff: u64, exponent: Rat) -> Self {
        Self::exact(p, [(exponent, coeff)])
    }

    pub fn constant(p: u64, coeff: u64) -> Self {
        Self::monomial(p, coeff, Rat::zero())
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(Rat, u64)] {
        &self.terms
    }

    pub fn precision(&self) -> Value {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_infinite()
    }

    /// Exact zero (no terms and infinite precision).
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    pub fn is_one(&self) -> bool {
        self.is_exact() && self.terms == [(Rat::zero(), 1)]
    }

    /// Least exponent; `∞` when no term is known.
    pub fn lead(&self) -> Value {
        self.terms.first().map_or(Value::Infinity, |t| Value::Finite(t.0))
    }

    /// Drops every term at or above `precision` (which only ever lowers).
    pub fn truncate(&self, precision: Value) -> Self {
        let precision = precision.min(self.precision);
        Self::new(self.p, self.terms.iter().copied(), precision)
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::InvalidField(format!(
                "series over F{} and F{} cannot be combined",
                self.p, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let precision = self.precision.min(other.precision);
        Ok(Self::new(
            self.p,
            self.terms.iter().chain(other.terms.iter()).copied(),
            precision,
        ))
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        Self::new(p, self.terms.iter().map(|&(e, c)| (e, (p - c) % p)), self.precision)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, c: u64) -> Self {
        let p = self.p;
        let c = c % p;
        Self::new(p, self.terms.iter().map(|&(e, x)| (e, mod_mul(x, c, p))), self.precision)
    }

    /// Lower bound for the order of the true series: an unknown tail can
    /// only start at the precision.
    fn order_bound(&self) -> Value {
        self.lead().min(self.precision)
    }

    /// Product with precision `min(prec(a) + ord(b), prec(b) + ord(a))`,
    /// where `ord` is the certified lower bound on the order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.p;
        let precision = self
            .precision
            .add(other.order_bound())?
            .min(other.precision.add(self.order_bound())?);
        let mut acc: BTreeMap<Rat, u64> = BTreeMap::new();
        for &(ea, ca) in &self.terms {
            for &(eb, cb) in &other.terms {
                let e = rat_add(ea, eb)?;
                if Value::Finite(e) >= precision {
                    continue;
                }
                let slot = acc.entry(e).or_insert(0);
                *slot = (*slot + mod_mul(ca, cb, p)) % p;
            }
        }
        Ok(Self::new(p, acc, precision))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::constant(self.p, 1);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The t-adic valuation: the least exponent.
    ///
    /// A series with no known term and finite precision cannot be told apart
    /// from zero, so it yields `InsufficientPrecision` rather than `∞`.
    pub fn valuation(&self) -> Result<Value> {
        match self.terms.first() {
            Some(&(e, _)) => Ok(Value::Finite(e)),
            None if self.is_exact() => Ok(Value::Infinity),
            None => Err(Error::InsufficientPrecision(self.precision)),
        }
    }

    /// Multiplicative inverse, computed to relative precision at most
    /// `rel_precision` beyond the leading exponent. Exact monomials invert
    /// exactly.
    pub fn inverse(&self, rel_precision: Rat) -> Result<Self> {
        let p = self.p;
        let &(a, c) = match self.terms.first() {
            Some(t) => t,
            None if self.is_exact() => return Err(Error::DivisionByZero),
            None => return Err(Error::InsufficientPrecision(self.precision)),
        };
        let c_inv = mod_inv(c, p);
        let neg_a = rat_sub(Rat::zero(), a)?;
        if self.is_exact() && self.terms.len() == 1 {
            return Ok(Self::monomial(p, c_inv, neg_a));
        }
        if !rel_precision.is_positive() {
            return Err(Error::Precondition("relative precision must be positive".into()));
        }
        // self = c t^a (1 + g) with every exponent of g positive.
        let rel_in = match self.precision {
            Value::Finite(pr) => rat_sub(pr, a)?.min(rel_precision),
            Value::Infinity => rel_precision,
        };
        let mut g_terms = Vec::with_capacity(self.terms.len() - 1);
        for &(e, x) in &self.terms[1..] {
            g_terms.push((rat_sub(e, a)?, mod_mul(x, c_inv, p)));
        }
        let minus_g = Self::new(p, g_terms, Value::Finite(rel_in)).neg();
        let mut sum = Self::new(p, [(Rat::zero(), 1)], Value::Finite(rel_in));
        let mut power = sum.clone();
        loop {
            power = power.mul(&minus_g)?.truncate(Value::Finite(rel_in));
            if power.terms.is_empty() {
                break;
            }
            sum = sum.add(&power)?;
        }
        let shifted: Vec<(Rat, u64)> = sum
            .terms
            .iter()
            .map(|&(e, x)| Ok((rat_add(e, neg_a)?, mod_mul(x, c_inv, p))))
            .collect::<Result<_>>()?;
        Ok(Self::new(p, shifted, Value::Finite(rat_add(rel_in, neg_a)?)))
    }

    /// Exponents scaled by `1/k`; used to build `t^(e/k)` families.
    pub fn exponents_divided(&self, k: i64) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|&(e, c)| Ok((rat_div_int(e, k)?, c)))
            .collect::<Result<Vec<_>>>()?;
        let precision = self.precision.div_int(k.unsigned_abs())?;
        Ok(Self::new(self.p, terms, precision))
    }
}

impl fmt::Display for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(e, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{c}")?;
            } else {
                if c != 1 {
                    write!(f, "{c}*")?;
                }
                write_t_power(f, e)?;
            }
        }
        if let Value::Finite(pr) = self.precision {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "O(t^({pr}))")?;
        } else if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::valgroup::rat;

    fn s(p: u64, terms: &[(i64, i64)], prec: Value) -> HahnSeries {
        HahnSeries::new(p, terms.iter().map(|&(n, d)| (rat(n, d), 1)), prec)
    }

    #[test]
    fn characteristic_two_cancellation() {
        let a = s(2, &[(-1, 2), (-1, 4)], Value::zero());
        let b = s(2, &[(-1, 4)], Value::zero());
        assert_eq!(a.add(&b).unwrap(), s(2, &[(-1, 2)], Value::zero()));
    }

    #[test]
    fn square_follows_precision_rule() {
        let a = s(2, &[(-1, 2), (-1, 4)], Value::zero());
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq.precision(), Value::new(-1, 2));
        assert_eq!(sq.terms(), &[(rat(-1, 1), 1)]);
        assert_eq!(sq.to_string(), "t^-1 + O(t^(-1/2))");
    }

    #[test]
    fn identity_and_valuation() {
        let a = s(2, &[(-1, 8), (3, 1)], Value::Infinity);
        assert_eq!(a.add(&HahnSeries::zero(2)).unwrap(), a);
        assert_eq!(a.valuation().unwrap(), Value::new(-1, 8));
        assert_eq!(
            HahnSeries::new(2, [], Value::from_int(5)).valuation(),
            Err(Error::InsufficientPrecision(Value::from_int(5)))
        );
        assert_eq!(HahnSeries::zero(2).valuation().unwrap(), Value::Infinity);
    }

    #[test]
    fn telescoping_artin_schreier_value() {
        // s = Σ_{i=1..6} t^(-1/2^i): s² + s + t⁻¹ = t^(-1/64).
        let s_n = s(2, &(1..=6).map(|i| (-1, 1 << i)).collect::<Vec<_>>(), Value::from_int(16));
        let f = s_n
            .mul(&s_n)
            .unwrap()
            .add(&s_n)
            .unwrap()
            .add(&HahnSeries::monomial(2, 1, rat(-1, 1)))
            .unwrap();
        assert_eq!(f.valuation().unwrap(), Value::new(-1, 64));
        assert_eq!(f.terms().len(), 1);
    }

    #[test]
    fn inverse_of_one_plus_t() {
        let x = HahnSeries::exact(3, [(rat(0, 1), 1), (rat(1, 1), 1)]);
        let inv = x.inverse(rat(5, 1)).unwrap();
        // 1 - t + t² - t³ + t⁴ + O(t^5) over F3.
        assert_eq!(inv.precision(), Value::from_int(5));
        let coeffs: Vec<u64> = inv.terms().iter().map(|t| t.1).collect();
        assert_eq!(coeffs, vec![1, 2, 1, 2, 1]);
        let one = inv.mul(&x).unwrap();
        assert!(one.terms() == [(rat(0, 1), 1)]);
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let x = HahnSeries::monomial(5, 2, rat(-3, 4));
        let inv = x.inverse(rat(1, 1)).unwrap();
        assert!(inv.is_exact());
        assert!(inv.mul(&x).unwrap().is_one());
    }
}
