//! Dense univariate polynomials over a coefficient field, Hasse derivatives,
//! and polynomials in an auxiliary variable `X` with coefficients in
//! `K[x]_n` (degree below `n`).

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{FieldDescriptor, FieldElem};

/// `C(n, k)` mapped into the field.
pub(crate) fn binomial_in(field: FieldDescriptor, n: usize, k: usize) -> FieldElem {
    let c: BigUint = num_integer::binomial(BigUint::from(n), BigUint::from(k));
    FieldElem::from_biguint(field, &c)
}

/// Polynomial in `x`; `coeffs[k]` multiplies `x^k`. The zero polynomial has
/// no coefficients and degree `None` (standing for `-∞`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldDescriptor,
    coeffs: Vec<FieldElem>,
}

impl Poly {
    pub fn new(field: FieldDescriptor, mut coeffs: Vec<FieldElem>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch(field, c.field()));
        }
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        Ok(Poly { field, coeffs })
    }

    fn from_trusted(field: FieldDescriptor, mut coeffs: Vec<FieldElem>) -> Self {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: FieldDescriptor) -> Self {
        Poly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: FieldDescriptor) -> Self {
        Self::constant(FieldElem::one(field))
    }

    pub fn x(field: FieldDescriptor) -> Self {
        Self::monomial(FieldElem::one(field), 1)
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: FieldElem, k: usize) -> Self {
        let field = c.field();
        let mut coeffs = vec![FieldElem::zero(field); k];
        coeffs.push(c);
        Self::from_trusted(field, coeffs)
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> FieldElem {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| FieldElem::zero(self.field))
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&FieldElem> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FieldElem::is_one)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| self.coeff(k).add(&other.coeff(k)))
            .collect::<Result<_>>()?;
        Ok(Self::from_trusted(self.field, coeffs))
    }

    pub fn neg(&self) -> Self {
        Self::from_trusted(self.field, self.coeffs.iter().map(FieldElem::neg).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let mut out = vec![FieldElem::zero(self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Self::from_trusted(self.field, out))
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|a| a.mul(c)).collect::<Result<_>>()?;
        Ok(Self::from_trusted(self.field, coeffs))
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut out = Self::one(self.field);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// `f = q·g + r` with `deg r < deg g`.
    pub fn euclid_div(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g)?;
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let lead = g.leading().expect("nonzero");
        let lead_inv = if lead.is_one() { None } else { Some(lead.inv()?) };
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(self.field), self.clone()));
        }
        let mut quot = vec![FieldElem::zero(self.field); rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dg];
            if top.is_zero() {
                continue;
            }
            let c = match &lead_inv {
                Some(li) => top.mul(li)?,
                None => top.clone(),
            };
            for (j, gj) in g.coeffs.iter().enumerate() {
                if !gj.is_zero() {
                    rem[k + j] = rem[k + j].sub(&c.mul(gj)?)?;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dg);
        Ok((Self::from_trusted(self.field, quot), Self::from_trusted(self.field, rem)))
    }

    pub fn rem(&self, g: &Self) -> Result<Self> {
        Ok(self.euclid_div(g)?.1)
    }

    /// Hasse derivative `∂_b(Σ c_k x^k) = Σ C(k, b) c_k x^(k-b)`; `∂_0` is the identity.
    pub fn hasse(&self, b: usize) -> Result<Self> {
        if b == 0 {
            return Ok(self.clone());
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(b)
            .map(|(k, c)| c.mul(&binomial_in(self.field, k, b)))
            .collect::<Result<_>>()?;
        Ok(Self::from_trusted(self.field, coeffs))
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check(g)?;
        let mut acc = Self::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g)?.add(&Self::constant(c.clone()))?;
        }
        Ok(acc)
    }
}

fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, &'a FieldElem)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative_rational();
        let c = if negative { c.neg() } else { c.clone() };
        if first {
            if negative {
                f.write_str("-")?;
            }
        } else {
            f.write_str(if negative { " - " } else { " + " })?;
        }
        first = false;
        if k == 0 {
            write!(f, "{c}")?;
            continue;
        }
        if !c.is_one() {
            if c.is_atomic() {
                write!(f, "{c}*")?;
            } else {
                write!(f, "({c})*")?;
            }
        }
        if k == 1 {
            f.write_str(var)?;
        } else {
            write!(f, "{var}^{k}")?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.coeffs.iter().enumerate().rev(), "x")
    }
}

/// `l(X) = Σ l_i X^i` with every `l_i ∈ K[x]` of degree below `n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XPoly {
    field: FieldDescriptor,
    n: usize,
    coeffs: Vec<Poly>,
}

impl XPoly {
    pub fn new(field: FieldDescriptor, n: usize, mut coeffs: Vec<Poly>) -> Result<Self> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
            if let Some(d) = c.degree() {
                if d >= n {
                    return Err(Error::DegreeBound { degree: d, bound: n });
                }
            }
        }
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        Ok(XPoly { field, n, coeffs })
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Poly::zero(self.field))
    }

    /// `deg_X`; `None` for the zero polynomial.
    pub fn deg_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Hasse derivative in `X`.
    pub fn hasse(&self, b: usize) -> Result<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(b)
            .map(|(i, c)| c.scale(&binomial_in(self.field, i, b)))
            .collect::<Result<_>>()?;
        Self::new(self.field, self.n, coeffs)
    }

    /// `l(g)` collected into a polynomial in `x`.
    pub fn eval(&self, g: &Poly) -> Result<Poly> {
        let mut acc = Poly::zero(self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g)?.add(c)?;
        }
        Ok(acc)
    }

    /// `[(∂_i l)(a)]` for `i = 0..=deg_X l`, so that
    /// `l(b) = Σ_i (∂_i l)(a)·(b - a)^i` for every `b`. The center `a` must
    /// have degree below the digit bound, as differences of keys do.
    pub fn taylor_expand(&self, a: &Poly) -> Result<Vec<Poly>> {
        if let Some(d) = a.degree() {
            if d >= self.n {
                return Err(Error::DegreeBound { degree: d, bound: self.n });
            }
        }
        (0..self.coeffs.len())
            .map(|i| self.hasse(i)?.eval(a))
            .collect()
    }
}

/// `l(g)`; recovers `f` from its `g`-expansion.
pub fn compose_x(l: &XPoly, g: &Poly) -> Result<Poly> {
    l.eval(g)
}

impl fmt::Display for XPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let text = c.to_string();
            if i == 0 {
                write!(f, "{text}")?;
                continue;
            }
            if text != "1" {
                if text.contains(' ') {
                    write!(f, "({text})*")?;
                } else {
                    write!(f, "{text}*")?;
                }
            }
            if i == 1 {
                f.write_str("X")?;
            } else {
                write!(f, "X^{i}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}
