//! Rational functions `F_p(t)` as reduced fractions of dense coefficient
//! lists, with the t-adic valuation.

use std::fmt;


use super::hahn::HahnSeries;
use super::{mod_inv, mod_mul, write_t_power};
use crate::error::{Error, Result};
use crate::valgroup::{Rat, Value};

type Dense = Vec<u64>;

fn trim(mut a: Dense) -> Dense {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn dense_add(a: &[u64], b: &[u64], p: u64) -> Dense {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

fn dense_neg(a: &[u64], p: u64) -> Dense {
    a.iter().map(|&c| (p - c) % p).collect()
}

fn dense_mul(a: &[u64], b: &[u64], p: u64) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mod_mul(x, y, p)) % p;
        }
    }
    trim(out)
}

fn dense_scale(a: &[u64], c: u64, p: u64) -> Dense {
    trim(a.iter().map(|&x| mod_mul(x, c, p)).collect())
}

fn dense_divrem(a: &[u64], b: &[u64], p: u64) -> (Dense, Dense) {
    let mut rem = a.to_vec();
    if b.len() > a.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = mod_inv(*b.last().expect("nonzero divisor"), p);
    let mut quot = vec![0; a.len() - b.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = mod_mul(rem[k + b.len() - 1], lead_inv, p);
        quot[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let sub = mod_mul(c, y, p);
            rem[k + j] = (rem[k + j] + p - sub) % p;
        }
    }
    (trim(quot), trim(rem))
}

fn dense_monic_gcd(a: &[u64], b: &[u64], p: u64) -> Dense {
    let (mut x, mut y) = (trim(a.to_vec()), trim(b.to_vec()));
    while !y.is_empty() {
        let (_, r) = dense_divrem(&x, &y, p);
        x = y;
        y = r;
    }
    match x.last() {
        Some(&l) => dense_scale(&x, mod_inv(l, p), p),
        None => x,
    }
}

fn dense_ord(a: &[u64]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

fn write_dense(f: &mut fmt::Formatter<'_>, a: &[u64]) -> fmt::Result {
    if a.is_empty() {
        return f.write_str("0");
    }
    let mut first = true;
    for (k, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        if k == 0 {
            write!(f, "{c}")?;
        } else {
            if c != 1 {
                write!(f, "{c}*")?;
            }
            write_t_power(f, Rat::from_integer(k as i64))?;
        }
    }
    Ok(())
}

/// An element `num/den` of `F_p(t)`; `den` is monic and coprime to `num`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    p: u64,
    num: Dense,
    den: Dense,
}

impl RatFunc {
    fn reduce(p: u64, num: Dense, den: Dense) -> Result<Self> {
        let num = trim(num);
        let den = trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(Self::zero(p));
        }
        let g = dense_monic_gcd(&num, &den, p);
        let (mut num, _) = dense_divrem(&num, &g, p);
        let (mut den, _) = dense_divrem(&den, &g, p);
        let l_inv = mod_inv(*den.last().expect("nonzero"), p);
        num = dense_scale(&num, l_inv, p);
        den = dense_scale(&den, l_inv, p);
        Ok(RatFunc { p, num, den })
    }

    pub fn zero(p: u64) -> Self {
        RatFunc {
            p,
            num: Vec::new(),
            den: vec![1],
        }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        RatFunc {
            p,
            num: trim(vec![c % p]),
            den: vec![1],
        }
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(p: u64, k: i64) -> Self {
        let mut mono = vec![0; k.unsigned_abs() as usize];
        mono.push(1);
        if k >= 0 {
            RatFunc { p, num: mono, den: vec![1] }
        } else {
            RatFunc { p, num: vec![1], den: mono }
        }
    }

    /// Builds `num/den` from coefficient lists (lowest degree first).
    pub fn from_parts(p: u64, num: &[u64], den: &[u64]) -> Result<Self> {
        let num = num.iter().map(|c| c % p).collect();
        let den = den.iter().map(|c| c % p).collect();
        Self::reduce(p, num, den)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn numerator(&self) -> &[u64] {
        &self.num
    }

    pub fn denominator(&self) -> &[u64] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.num == [1] && self.den == [1]
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let p = self.p;
        let num = dense_add(
            &dense_mul(&self.num, &other.den, p),
            &dense_mul(&other.num, &self.den, p),
            p,
        );
        Self::reduce(p, num, dense_mul(&self.den, &other.den, p))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            p: self.p,
            num: dense_neg(&self.num, self.p),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let p = self.p;
        Self::reduce(p, dense_mul(&self.num, &other.num, p), dense_mul(&self.den, &other.den, p))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::reduce(self.p, self.den.clone(), self.num.clone())
    }

    /// `ord_t(num) - ord_t(den)`.
    pub fn valuation(&self) -> Value {
        match (dense_ord(&self.num), dense_ord(&self.den)) {
            (Some(a), Some(b)) => Value::from_int(a as i64 - b as i64),
            _ => Value::Infinity,
        }
    }

    /// Laurent expansion in `t`, exact when the denominator is a monomial and
    /// otherwise carried to `rel_precision` past the leading term.
    pub fn to_series(&self, rel_precision: Rat) -> Result<HahnSeries> {
        let p = self.p;
        let as_series = |d: &[u64]| {
            HahnSeries::exact(
                p,
                d.iter()
                    .enumerate()
                    .map(|(k, &c)| (Rat::from_integer(k as i64), c)),
            )
        };
        let num = as_series(&self.num);
        if self.den.len() == 1 {
            return Ok(num);
        }
        let den_inv = as_series(&self.den).inverse(rel_precision)?;
        num.mul(&den_inv)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == [1] {
            return write_dense(f, &self.num);
        }
        // A monomial denominator prints as a negative power.
        if dense_ord(&self.den) == Some(self.den.len() - 1) && self.num.len() == 1 {
            let k = -((self.den.len() - 1) as i64);
            if self.num[0] != 1 {
                write!(f, "{}*", self.num[0])?;
            }
            return write_t_power(f, Rat::from_integer(k));
        }
        f.write_str("(")?;
        write_dense(f, &self.num)?;
        f.write_str(")/(")?;
        write_dense(f, &self.den)?;
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_over_f2t() {
        // t/(1+t) + 1/(1+t) = 1
        let a = RatFunc::from_parts(2, &[0, 1], &[1, 1]).unwrap();
        let b = RatFunc::from_parts(2, &[1], &[1, 1]).unwrap();
        assert!(a.add(&b).unwrap().is_one());
    }

    #[test]
    fn valuation_and_display() {
        let inv_t = RatFunc::t_pow(2, -1);
        assert_eq!(inv_t.valuation(), Value::from_int(-1));
        assert_eq!(inv_t.to_string(), "t^-1");
        assert_eq!(RatFunc::zero(2).valuation(), Value::Infinity);
        let a = RatFunc::from_parts(2, &[0, 1], &[1, 1]).unwrap();
        assert_eq!(a.to_string(), "(t)/(t + 1)");
        assert_eq!(a.valuation(), Value::from_int(1));
    }

    #[test]
    fn reduction_is_canonical() {
        // (t² - 1)/(2t - 2) over F3 = (t + 1)/2 = 2t + 2
        let a = RatFunc::from_parts(3, &[2, 0, 1], &[1, 2]).unwrap();
        assert_eq!(a, RatFunc::from_parts(3, &[2, 2], &[1]).unwrap());
        assert_eq!(RatFunc::from_parts(3, &[1], &[0]), Err(Error::DivisionByZero));
    }

    #[test]
    fn series_expansion_round_trip() {
        let a = RatFunc::from_parts(2, &[0, 1], &[1, 1]).unwrap();
        let s = a.to_series(Rat::from_integer(6)).unwrap();
        // t/(1+t) = t + t² + ... over F2
        assert_eq!(s.valuation().unwrap(), Value::from_int(1));
        assert!(s.terms().iter().all(|t| t.1 == 1));
    }
}
