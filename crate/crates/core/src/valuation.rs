//! Computable valuations on `K[x]`, the ε-invariant, and a sampled refuter
//! for key polynomials.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::expansion::q_expand;
use crate::field::{FieldDescriptor, FieldElem, FieldKind, HahnSeries};
use crate::poly::Poly;
use crate::valgroup::{rat, Rat, Value};

/// Relative precision used when expanding `F_p(t)` coefficients into series.
pub const RATFUNC_SERIES_PRECISION: i64 = 32;

/// One augmentation step `ν_{i+1} = [ν_i; Q_{i+1} ↦ γ_{i+1}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub key: Poly,
    pub gamma: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PxValuation {
    /// `ν(Σ c_k x^k) = min_k ν(c_k) + kμ`.
    Gauss { field: FieldDescriptor, mu: Value },
    /// Iterated augmentation of a Gauss valuation.
    Chain {
        field: FieldDescriptor,
        mu: Value,
        steps: Vec<ChainStep>,
    },
    /// `ν(f) = v_t(f(s))` for a truncated series `s`.
    SeriesEval { field: FieldDescriptor, s: HahnSeries },
}

impl PxValuation {
    pub fn gauss(field: FieldDescriptor, mu: Value) -> Result<Self> {
        if mu.is_infinite() {
            return Err(Error::Precondition("Gauss parameter must be finite".into()));
        }
        Ok(PxValuation::Gauss { field, mu })
    }

    /// Builds an augmented chain, rejecting improper steps
    /// (`γ_{i+1} ≤ ν_i(Q_{i+1})`), non-monic keys and constant keys.
    pub fn chain(field: FieldDescriptor, mu: Value, steps: Vec<ChainStep>) -> Result<Self> {
        let mut v = Self::gauss(field, mu)?;
        for (i, step) in steps.into_iter().enumerate() {
            if step.key.field() != field {
                return Err(Error::FieldMismatch(field, step.key.field()));
            }
            if !step.key.is_monic() || step.key.degree() == Some(0) {
                return Err(Error::InvalidChain(format!(
                    "key {} ({}) must be monic of positive degree",
                    i + 1,
                    step.key
                )));
            }
            let prev = v.nu(&step.key)?;
            if step.gamma.is_infinite() || step.gamma <= prev {
                return Err(Error::InvalidChain(format!(
                    "step {}: gamma {} does not exceed {} = value of {}",
                    i + 1,
                    step.gamma,
                    prev,
                    step.key
                )));
            }
            let steps = match v {
                PxValuation::Chain { mut steps, .. } => {
                    steps.push(step);
                    steps
                }
                _ => vec![step],
            };
            v = PxValuation::Chain { field, mu, steps };
        }
        Ok(v)
    }

    /// Evaluation at a series over `F_p`; the field must carry a `t` (or be
    /// `F_p` itself) with the same prime as `s`.
    pub fn series_eval(field: FieldDescriptor, s: HahnSeries) -> Result<Self> {
        if field.kind() == FieldKind::Rationals || field.p() != s.p() {
            return Err(Error::InvalidField(format!(
                "series evaluation needs an F{} coefficient field, got {field}",
                s.p()
            )));
        }
        Ok(PxValuation::SeriesEval { field, s })
    }

    pub fn field(&self) -> FieldDescriptor {
        match self {
            PxValuation::Gauss { field, .. }
            | PxValuation::Chain { field, .. }
            | PxValuation::SeriesEval { field, .. } => *field,
        }
    }

    fn gauss_nu(mu: Value, f: &Poly) -> Result<Value> {
        let mut best = Value::Infinity;
        for (k, c) in f.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = c.valuation().add(mu.scale(k as i64)?)?;
            best = best.min(term);
        }
        Ok(best)
    }

    fn chain_nu(mu: Value, steps: &[ChainStep], f: &Poly) -> Result<Value> {
        let Some((last, rest)) = steps.split_last() else {
            return Self::gauss_nu(mu, f);
        };
        let exp = q_expand(f, &last.key)?;
        let mut best = Value::Infinity;
        for (j, a) in exp.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = Self::chain_nu(mu, rest, a)?.add(last.gamma.scale(j as i64)?)?;
            best = best.min(term);
        }
        Ok(best)
    }

    fn series_nu(s: &HahnSeries, f: &Poly) -> Result<Value> {
        let mut acc = HahnSeries::zero(s.p());
        for c in f.coeffs().iter().rev() {
            let c = c.to_series(rat(RATFUNC_SERIES_PRECISION, 1))?;
            acc = acc.mul(s)?.add(&c)?;
        }
        acc.valuation()
    }

    /// `ν(f)`; `∞` for the zero polynomial.
    pub fn nu(&self, f: &Poly) -> Result<Value> {
        if f.field() != self.field() {
            return Err(Error::FieldMismatch(self.field(), f.field()));
        }
        if f.is_zero() {
            return Ok(Value::Infinity);
        }
        match self {
            PxValuation::Gauss { mu, .. } => Self::gauss_nu(*mu, f),
            PxValuation::Chain { mu, steps, .. } => Self::chain_nu(*mu, steps, f),
            PxValuation::SeriesEval { s, .. } => Self::series_nu(s, f),
        }
    }

    /// Value of a constant.
    pub fn nu_elem(&self, c: &FieldElem) -> Result<Value> {
        self.nu(&Poly::constant(c.clone()))
    }

    /// `ε(f) = max_b (ν(f) - ν(∂_b f))/b` over the nonvanishing derivatives,
    /// together with the attaining set `I(f)`.
    pub fn epsilon(&self, f: &Poly) -> Result<EpsilonReport> {
        let deg = match f.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::Precondition(format!("epsilon needs deg f >= 1, got {f}"))),
        };
        let nu_f = self.nu(f)?;
        let mut rows = Vec::with_capacity(deg);
        let mut best: Option<Value> = None;
        for b in 1..=deg {
            let d = f.hasse(b)?;
            if d.is_zero() {
                rows.push(EpsilonRow {
                    b,
                    nu_derivative: Value::Infinity,
                    quotient: None,
                });
                continue;
            }
            let nd = self.nu(&d)?;
            let q = nu_f.sub(nd)?.div_int(b as u64)?;
            best = Some(best.map_or(q, |m| m.max(q)));
            rows.push(EpsilonRow {
                b,
                nu_derivative: nd,
                quotient: Some(q),
            });
        }
        let epsilon = best.expect("the leading Hasse derivative never vanishes");
        let attaining = rows
            .iter()
            .filter(|r| r.quotient == Some(epsilon))
            .map(|r| r.b)
            .collect();
        Ok(EpsilonReport {
            epsilon,
            attaining,
            rows,
        })
    }

    /// Scans `corpus` and `probes` for an `f` with `deg f < deg Q` and
    /// `ε(f) ≥ ε(Q)`. Finding none is not a proof that `Q` is key.
    pub fn is_key_sampled(&self, q: &Poly, corpus: &[Poly], probes: &[Poly]) -> Result<KeyVerdict> {
        let eq = self.epsilon(q)?.epsilon;
        let dq = q.degree().unwrap_or(0);
        for f in corpus.iter().chain(probes) {
            match f.degree() {
                Some(d) if d >= 1 && d < dq => {}
                _ => continue,
            }
            if self.epsilon(f)?.epsilon >= eq {
                return Ok(KeyVerdict::Counterexample(f.clone()));
            }
        }
        Ok(KeyVerdict::NoCounterexampleFound)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonRow {
    pub b: usize,
    pub nu_derivative: Value,
    /// `None` when `∂_b f = 0`.
    pub quotient: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonReport {
    pub epsilon: Value,
    pub attaining: BTreeSet<usize>,
    pub rows: Vec<EpsilonRow>,
}

pub(crate) fn fmt_set(set: &BTreeSet<usize>) -> String {
    let items: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(","))
}

impl fmt::Display for EpsilonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "epsilon = {}; I = {}", self.epsilon, fmt_set(&self.attaining))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyVerdict {
    Counterexample(Poly),
    NoCounterexampleFound,
}

/// Helper for tests and scenarios: `Σ_{i=1..n} t^(-1/p^i)` over `F_p`.
pub fn partial_sum_series(p: u64, n: u32, precision: Value) -> Result<HahnSeries> {
    let mut terms = Vec::with_capacity(n as usize);
    let mut den: i64 = 1;
    for _ in 0..n {
        den = den
            .checked_mul(p as i64)
            .ok_or(Error::Overflow("partial sum exponent"))?;
        terms.push((Rat::new(-1, den), 1));
    }
    Ok(HahnSeries::new(p, terms, precision))
}
