//! `Q`-expansions and the truncation `ν_Q`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Poly, XPoly};
use crate::valgroup::Value;
use crate::valuation::{fmt_set, PxValuation};

/// `f = Σ a_i Q^i` with `deg a_i < deg Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    q: Poly,
    coeffs: Vec<Poly>,
    f: Poly,
}

impl QExpansion {
    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    /// `a_i`, zero past the end.
    pub fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| Poly::zero(self.f.field()))
    }

    /// `deg_X`; `None` for `f = 0`.
    pub fn deg_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// The polynomial `l(X) = Σ a_i X^i` with `l(Q) = f`.
    pub fn to_xpoly(&self) -> XPoly {
        let n = self.q.degree().expect("nonconstant Q");
        XPoly::new(self.f.field(), n, self.coeffs.clone()).expect("digits have degree below deg Q")
    }
}

/// Expands `f` in base `Q` by repeated division.
pub fn q_expand(f: &Poly, q: &Poly) -> Result<QExpansion> {
    if !q.is_monic() || q.degree() == Some(0) {
        return Err(Error::Precondition(format!("expansion base {q} must be monic of positive degree")));
    }
    let mut coeffs = Vec::new();
    let mut rest = f.clone();
    while !rest.is_zero() {
        let (quot, rem) = rest.euclid_div(q)?;
        coeffs.push(rem);
        rest = quot;
    }
    Ok(QExpansion {
        q: q.clone(),
        coeffs,
        f: f.clone(),
    })
}

/// `a_{ρ0}(f)`: the constant digit of the `Q_ρ`-expansion.
pub fn a_rho0(f: &Poly, q: &Poly) -> Result<Poly> {
    if !q.is_monic() || q.degree() == Some(0) {
        return Err(Error::Precondition(format!("expansion base {q} must be monic of positive degree")));
    }
    f.rem(q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncationReport {
    /// `ν_Q(f)`.
    pub value: Value,
    /// `ν(a_i Q^i)`, `∞` where `a_i = 0`.
    pub terms: Vec<Value>,
    pub s_q: BTreeSet<usize>,
    /// `max S_Q(f)`; `None` for `f = 0`.
    pub delta_q: Option<usize>,
}

impl fmt::Display for TruncationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "nu_Q = {}; S_Q = {}; delta_Q = ", self.value, fmt_set(&self.s_q))?;
        match self.delta_q {
            Some(d) => write!(f, "{d}"),
            None => f.write_str("none"),
        }
    }
}

/// Truncation report for an existing expansion.
pub fn truncate_expansion(v: &PxValuation, exp: &QExpansion) -> Result<TruncationReport> {
    let nu_q = v.nu(exp.q())?;
    let mut terms = Vec::with_capacity(exp.coeffs.len());
    for (i, a) in exp.coeffs.iter().enumerate() {
        terms.push(if a.is_zero() {
            Value::Infinity
        } else {
            v.nu(a)?.add(nu_q.scale(i as i64)?)?
        });
    }
    let value = terms.iter().copied().min().unwrap_or(Value::Infinity);
    let s_q: BTreeSet<usize> = if value.is_infinite() {
        BTreeSet::new()
    } else {
        terms
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == value)
            .map(|(i, _)| i)
            .collect()
    };
    let delta_q = s_q.iter().next_back().copied();
    Ok(TruncationReport {
        value,
        terms,
        s_q,
        delta_q,
    })
}

/// `ν_Q(f) = min_i ν(a_i) + iν(Q)` with its attaining set.
pub fn truncate(v: &PxValuation, f: &Poly, q: &Poly) -> Result<TruncationReport> {
    truncate_expansion(v, &q_expand(f, q)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldDescriptor;
    use crate::parse::parse_poly;
    use crate::valuation::partial_sum_series;

    fn fd(s: &str) -> FieldDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn expansion_examples() {
        let q = fd("Q");
        let f = parse_poly(q, "x^2 + 2x + 4").unwrap();
        let e = q_expand(&f, &parse_poly(q, "x - 1").unwrap()).unwrap();
        let digits: Vec<String> = e.coeffs().iter().map(Poly::to_string).collect();
        assert_eq!(digits, ["7", "4", "1"]);
        let short = q_expand(&parse_poly(q, "x + 1").unwrap(), &parse_poly(q, "x^2").unwrap()).unwrap();
        assert_eq!(short.coeffs(), &[parse_poly(q, "x + 1").unwrap()]);
        let f2t = fd("F2(t)");
        let e = q_expand(&parse_poly(f2t, "x^2 + x + t^-1").unwrap(), &parse_poly(f2t, "x").unwrap()).unwrap();
        let digits: Vec<String> = e.coeffs().iter().map(Poly::to_string).collect();
        assert_eq!(digits, ["t^-1", "1", "1"]);
        assert_eq!(a_rho0(&f, &parse_poly(q, "x - 1").unwrap()).unwrap(), parse_poly(q, "7").unwrap());
    }

    #[test]
    fn truncation_examples() {
        let q = fd("Q");
        let v = PxValuation::gauss(q, Value::zero()).unwrap();
        let f = parse_poly(q, "4x^3 + 2x + 3").unwrap();
        let r = truncate(&v, &f, &parse_poly(q, "x").unwrap()).unwrap();
        assert_eq!(r.value, Value::zero());
        assert_eq!(r.s_q, BTreeSet::from([0]));
        assert_eq!(r.delta_q, Some(0));
        assert_eq!(r.terms[2], Value::Infinity);

        let pu = fd("F2(t^Q)");
        let v = PxValuation::series_eval(pu, partial_sum_series(2, 12, Value::from_int(16)).unwrap()).unwrap();
        let big_f = parse_poly(pu, "x^2 + x + t^-1").unwrap();
        let q4 = parse_poly(pu, "x + t^(-1/2) + t^(-1/4) + t^(-1/8) + t^(-1/16)").unwrap();
        let r = truncate(&v, &big_f, &q4).unwrap();
        assert_eq!(r.to_string(), "nu_Q = -1/16; S_Q = {0,2}; delta_Q = 2");
        assert_eq!(r.terms, vec![Value::new(-1, 16), Value::new(-1, 32), Value::new(-1, 16)]);
        let r = truncate(&v, &q4, &q4).unwrap();
        assert_eq!((r.value, r.s_q), (Value::new(-1, 32), BTreeSet::from([1])));
    }
}
