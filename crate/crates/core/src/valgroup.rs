//! The value group `Q ∪ {∞}` and eventual strict minimizers for families of
//! affine functions `γ ↦ β_i + t_i γ` along an increasing sequence.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedMul, CheckedSub, Zero};

use crate::error::{Error, Result};

/// Exact rational with overflow-checked arithmetic helpers below.
pub type Rat = Ratio<i64>;

/// Shorthand constructor; panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num, den)
}

pub(crate) fn rat_add(a: Rat, b: Rat) -> Result<Rat> {
    a.checked_add(&b).ok_or(Error::Overflow("rational addition"))
}

pub(crate) fn rat_sub(a: Rat, b: Rat) -> Result<Rat> {
    a.checked_sub(&b).ok_or(Error::Overflow("rational subtraction"))
}

pub(crate) fn rat_mul(a: Rat, b: Rat) -> Result<Rat> {
    a.checked_mul(&b).ok_or(Error::Overflow("rational multiplication"))
}

pub(crate) fn rat_scale(a: Rat, k: i64) -> Result<Rat> {
    rat_mul(a, Rat::from_integer(k))
}

pub(crate) fn rat_div_int(a: Rat, k: i64) -> Result<Rat> {
    if k == 0 {
        return Err(Error::DivisionByZero);
    }
    let den = k
        .checked_abs()
        .and_then(|k| i64::checked_mul(*a.denom(), k))
        .ok_or(Error::Overflow("rational division"))?;
    let num = if k < 0 {
        a.numer().checked_neg().ok_or(Error::Overflow("rational division"))?
    } else {
        *a.numer()
    };
    Ok(Rat::new(num, den))
}

/// An element of the value group: a finite exact rational or `+∞`.
///
/// The derived order places every finite value below `Infinity`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Finite(Rat),
    Infinity,
}

impl Value {
    pub fn zero() -> Self {
        Value::Finite(Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Value::Finite(Rat::from_integer(n))
    }

    pub fn new(num: i64, den: i64) -> Self {
        Value::Finite(Rat::new(num, den))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Value::Infinity)
    }

    pub fn finite(&self) -> Option<Rat> {
        match self {
            Value::Finite(r) => Some(*r),
            Value::Infinity => None,
        }
    }

    // Fallible, so the operator traits do not fit.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Value) -> Result<Value> {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Ok(Value::Finite(rat_add(a, b)?)),
            _ => Ok(Value::Infinity),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Value) -> Result<Value> {
        match (self, other) {
            (Value::Finite(a), Value::Finite(b)) => Ok(Value::Finite(rat_sub(a, b)?)),
            (Value::Infinity, Value::Finite(_)) => Ok(Value::Infinity),
            (_, Value::Infinity) => Err(Error::UndefinedDifference),
        }
    }

    /// Additive inverse; `-∞` is not an element of the group.
    pub fn negate(self) -> Result<Value> {
        Value::zero().sub(self)
    }

    /// `k · self`. `0 · ∞` is undefined and so is a negative multiple of `∞`.
    pub fn scale(self, k: i64) -> Result<Value> {
        match self {
            Value::Finite(a) => Ok(Value::Finite(rat_scale(a, k)?)),
            Value::Infinity if k > 0 => Ok(Value::Infinity),
            Value::Infinity => Err(Error::UndefinedProduct),
        }
    }

    /// Exact division by a positive integer.
    pub fn div_int(self, k: u64) -> Result<Value> {
        let k = i64::try_from(k).map_err(|_| Error::Overflow("integer conversion"))?;
        match self {
            Value::Finite(a) => Ok(Value::Finite(rat_div_int(a, k)?)),
            Value::Infinity if k > 0 => Ok(Value::Infinity),
            Value::Infinity => Err(Error::UndefinedProduct),
        }
    }
}

impl From<Rat> for Value {
    fn from(r: Rat) -> Self {
        Value::Finite(r)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Finite(r) => write!(f, "{r}"),
            Value::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Value {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "inf" || s == "∞" {
            return Ok(Value::Infinity);
        }
        s.parse::<Rat>()
            .map(Value::Finite)
            .map_err(|e| Error::parse(format!("bad value {s:?}: {e}")))
    }
}

/// The sequence `{γ_σ}` fed to [`kaplansky_minimizer`].
#[derive(Clone)]
pub enum GammaSeq {
    /// `values[k]` is `γ_{start + k}`.
    Explicit { start: u64, values: Vec<Rat> },
    /// `γ_σ = gamma(σ)` for `σ ≥ start`. When `sup` is given it is taken to be
    /// the supremum of the sequence; otherwise the sequence is unbounded.
    ClosedForm {
        start: u64,
        gamma: Arc<dyn Fn(u64) -> Rat + Send + Sync>,
        sup: Option<Rat>,
        max_scan: u64,
    },
}

impl fmt::Debug for GammaSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaSeq::Explicit { start, values } => f
                .debug_struct("Explicit")
                .field("start", start)
                .field("values", values)
                .finish(),
            GammaSeq::ClosedForm {
                start, sup, max_scan, ..
            } => f
                .debug_struct("ClosedForm")
                .field("start", start)
                .field("sup", sup)
                .field("max_scan", max_scan)
                .finish_non_exhaustive(),
        }
    }
}

impl GammaSeq {
    pub fn closed_form(
        start: u64,
        sup: Option<Rat>,
        gamma: impl Fn(u64) -> Rat + Send + Sync + 'static,
    ) -> Self {
        GammaSeq::ClosedForm {
            start,
            gamma: Arc::new(gamma),
            sup,
            max_scan: 1 << 20,
        }
    }

    pub fn start(&self) -> u64 {
        match self {
            GammaSeq::Explicit { start, .. } | GammaSeq::ClosedForm { start, .. } => *start,
        }
    }
}

/// Pairs `(β_i, t_i)` with pairwise distinct positive `t_i`, and the sequence
/// along which the affine functions `β_i + t_i γ` are compared.
#[derive(Clone, Debug)]
pub struct MinimizerInput {
    pub pairs: Vec<(Rat, u64)>,
    pub gammas: GammaSeq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certification {
    /// Derived from the declared supremum; holds for every later index.
    Analytic,
    /// Verified only on the finite list supplied.
    Horizon,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Minimizer {
    /// 1-based position in `pairs` of the eventual strict minimizer.
    pub b: usize,
    /// Every `σ > rho` satisfies strict domination by `b`.
    pub rho: u64,
    pub certification: Certification,
}

fn affine(beta: Rat, t: u64, gamma: Rat) -> Result<Rat> {
    let t = i64::try_from(t).map_err(|_| Error::Overflow("integer conversion"))?;
    rat_add(beta, rat_scale(gamma, t)?)
}

/// Index of the unique strict minimum of `β_i + t_i γ`, if there is one.
fn strict_argmin(pairs: &[(Rat, u64)], gamma: Rat) -> Result<Option<usize>> {
    let mut best: Option<(usize, Rat)> = None;
    let mut tied = false;
    for (i, &(beta, t)) in pairs.iter().enumerate() {
        let v = affine(beta, t, gamma)?;
        match best {
            None => best = Some((i, v)),
            Some((_, bv)) => match v.cmp(&bv) {
                Ordering::Less => {
                    best = Some((i, v));
                    tied = false;
                }
                Ordering::Equal => tied = true,
                Ordering::Greater => {}
            },
        }
    }
    Ok(if tied { None } else { best.map(|(i, _)| i) })
}

fn dominates(pairs: &[(Rat, u64)], b: usize, gamma: Rat) -> Result<bool> {
    let vb = affine(pairs[b].0, pairs[b].1, gamma)?;
    for (i, &(beta, t)) in pairs.iter().enumerate() {
        if i != b && affine(beta, t, gamma)? <= vb {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_pairs(pairs: &[(Rat, u64)]) -> Result<()> {
    if pairs.is_empty() {
        return Err(Error::Precondition("minimizer needs at least one pair".into()));
    }
    let mut ts: Vec<u64> = pairs.iter().map(|p| p.1).collect();
    if ts.contains(&0) {
        return Err(Error::Precondition("multipliers t_i must be positive".into()));
    }
    ts.sort_unstable();
    if ts.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("multipliers t_i must be distinct".into()));
    }
    Ok(())
}

/// Finds the eventual strict minimizer `b` of `i ↦ β_i + t_i γ_σ` and a
/// threshold `ρ` past which it dominates every other index strictly.
///
/// For closed-form sequences `b` is read off at the supremum (ties broken
/// towards the steeper function, which wins just below it) or, for unbounded
/// sequences, is the smallest multiplier; `ρ` is found by scanning. For
/// explicit lists the answer must be strict at the last two entries and is
/// flagged [`Certification::Horizon`].
pub fn kaplansky_minimizer(input: &MinimizerInput) -> Result<Minimizer> {
    let pairs = &input.pairs;
    check_pairs(pairs)?;
    match &input.gammas {
        GammaSeq::Explicit { start, values } => {
            if values.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::Precondition("gamma sequence must be strictly increasing".into()));
            }
            if pairs.len() == 1 {
                return Ok(Minimizer {
                    b: 1,
                    rho: *start,
                    certification: Certification::Horizon,
                });
            }
            if values.len() < 2 {
                return Err(Error::NoEventualMinimizer(
                    "need at least two gamma values to certify".into(),
                ));
            }
            let last = values[values.len() - 1];
            let b = strict_argmin(pairs, last)?.ok_or_else(|| {
                Error::NoEventualMinimizer("tie at the last gamma value".into())
            })?;
            if !dominates(pairs, b, values[values.len() - 2])? {
                return Err(Error::NoEventualMinimizer(
                    "minimizer not strict at the last two gamma values".into(),
                ));
            }
            let mut rho = *start;
            for (k, &g) in values.iter().enumerate() {
                if !dominates(pairs, b, g)? {
                    rho = *start + k as u64;
                }
            }
            Ok(Minimizer {
                b: b + 1,
                rho,
                certification: Certification::Horizon,
            })
        }
        GammaSeq::ClosedForm {
            start,
            gamma,
            sup,
            max_scan,
        } => {
            let b = match sup {
                Some(c) => {
                    let mut best: Option<(usize, Rat, u64)> = None;
                    for (i, &(beta, t)) in pairs.iter().enumerate() {
                        let v = affine(beta, t, *c)?;
                        let better = match best {
                            None => true,
                            Some((_, bv, bt)) => v < bv || (v == bv && t > bt),
                        };
                        if better {
                            best = Some((i, v, t));
                        }
                    }
                    best.map(|x| x.0).unwrap_or(0)
                }
                None => pairs
                    .iter()
                    .enumerate()
                    .min_by_key(|(_, p)| p.1)
                    .map(|(i, _)| i)
                    .unwrap_or(0),
            };
            let (beta_b, t_b) = pairs[b];
            // Domination over a steeper function needs γ above its crossing point;
            // shallower functions stay above b everywhere below the supremum.
            let mut lower: Option<Rat> = None;
            for (i, &(beta, t)) in pairs.iter().enumerate() {
                if i == b || t < t_b {
                    continue;
                }
                let dt = i64::try_from(t - t_b).map_err(|_| Error::Overflow("integer conversion"))?;
                let cross = rat_div_int(rat_sub(beta_b, beta)?, dt)?;
                lower = Some(lower.map_or(cross, |l: Rat| l.max(cross)));
            }
            if let (Some(l), Some(c)) = (lower, sup) {
                if l >= *c {
                    return Err(Error::NoEventualMinimizer(
                        "crossing point not below the declared supremum".into(),
                    ));
                }
            }
            let mut rho = *start;
            let mut prev: Option<Rat> = None;
            for sigma in *start..start.saturating_add(*max_scan) {
                let g = gamma(sigma);
                if prev.is_some_and(|p| p >= g) {
                    return Err(Error::Precondition("gamma sequence must be strictly increasing".into()));
                }
                if sup.is_some_and(|c| g >= c) {
                    return Err(Error::Precondition("gamma sequence reaches its declared bound".into()));
                }
                prev = Some(g);
                match lower {
                    Some(l) if g <= l => rho = sigma,
                    _ => {
                        return Ok(Minimizer {
                            b: b + 1,
                            rho,
                            certification: Certification::Analytic,
                        })
                    }
                }
            }
            Err(Error::NoEventualMinimizer(format!(
                "gamma did not pass the crossing point within {max_scan} steps"
            )))
        }
    }
}
