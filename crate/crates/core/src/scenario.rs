//! Finite-horizon scenarios: a chain of degree-`n` key polynomials with
//! strictly increasing values, declared limits `B` and `B̄`, and a limit key
//! polynomial `F`, evaluated with a series-evaluation valuation.

use std::fmt;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expansion::{q_expand, truncate};
use crate::field::{FieldDescriptor, FieldElem, FieldKind, HahnSeries};
use crate::parse::parse_poly;
use crate::poly::{Poly, XPoly};
use crate::valgroup::{Rat, Value};
use crate::valuation::{partial_sum_series, PxValuation};

/// On-disk scenario description (TOML).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    /// Field descriptor such as `F2(t^Q)`.
    pub field: String,
    pub prime: u64,
    /// Degree `n` of the chain keys.
    pub degree: usize,
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "declared_B")]
    pub declared_b: String,
    #[serde(rename = "declared_Bbar")]
    pub declared_bbar: String,
    pub q0_index: usize,
    pub q_index: usize,
    pub theta: usize,
    pub usable_horizon: usize,
    pub corpus_seed: u64,
    pub corpus_size: usize,
    pub series: SeriesSpec,
    pub chain: ChainSpec,
}

/// The evaluation point `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SeriesSpec {
    /// `Σ_{i=1..terms} t^(-1/p^i)`.
    PartialSums { terms: u32, precision: String },
    Explicit {
        precision: String,
        terms: Vec<SeriesTerm>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesTerm {
    pub exponent: String,
    pub coeff: u64,
}

/// The keys `Q_1..Q_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChainSpec {
    /// `Q_k = x - (first k terms of s)`.
    PartialSums { length: usize },
    Explicit { keys: Vec<String> },
}

impl ScenarioFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::parse(format!("scenario: {}", e.message())))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::parse(format!("scenario: {e}")))
    }
}

/// A named corpus member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub key: String,
    pub poly: Poly,
}

/// A validated-on-demand scenario ready for computation. Chain indices are
/// 1-based throughout.
#[derive(Clone, Debug)]
pub struct LimitScenario {
    file: ScenarioFile,
    field: FieldDescriptor,
    s: HahnSeries,
    valuation: PxValuation,
    chain: Vec<Poly>,
    f: Poly,
    b: Value,
    bbar: Value,
}

fn parse_value(s: &str, what: &str) -> Result<Value> {
    s.parse::<Value>().map_err(|_| Error::parse(format!("{what}: '{s}' is not a value")))
}

fn parse_finite(s: &str, what: &str) -> Result<Rat> {
    parse_value(s, what)?
        .finite()
        .ok_or_else(|| Error::parse(format!("{what} must be finite")))
}

impl LimitScenario {
    pub fn from_file(file: ScenarioFile) -> Result<Self> {
        let field = FieldDescriptor::parse(&file.field, file.prime)?;
        if field.p() != file.prime {
            return Err(Error::parse(format!(
                "field {} does not match prime = {}",
                file.field, file.prime
            )));
        }
        if field.kind() == FieldKind::Rationals {
            return Err(Error::InvalidField("scenarios need a field of characteristic p".into()));
        }
        let p = field.p();
        let (s, sum_terms) = match &file.series {
            SeriesSpec::PartialSums { terms, precision } => {
                let prec = parse_value(precision, "series precision")?;
                (partial_sum_series(p, *terms, prec)?, *terms as usize)
            }
            SeriesSpec::Explicit { precision, terms } => {
                let prec = parse_value(precision, "series precision")?;
                let parsed = terms
                    .iter()
                    .map(|t| Ok((parse_finite(&t.exponent, "series exponent")?, t.coeff)))
                    .collect::<Result<Vec<_>>>()?;
                let s = HahnSeries::new(p, parsed, prec);
                let n = s.terms().len();
                (s, n)
            }
        };
        let chain = match &file.chain {
            ChainSpec::PartialSums { length } => {
                if *length > sum_terms {
                    return Err(Error::parse(format!(
                        "chain length {length} exceeds the {sum_terms} series terms"
                    )));
                }
                let x = Poly::x(field);
                let mut acc = FieldElem::zero(field);
                let mut keys = Vec::with_capacity(*length);
                for &(e, c) in s.terms().iter().take(*length) {
                    let term = FieldElem::t_pow(field, e)?.mul(&FieldElem::from_i64(field, c as i64))?;
                    acc = acc.add(&term)?;
                    keys.push(x.sub(&Poly::constant(acc.clone()))?);
                }
                keys
            }
            ChainSpec::Explicit { keys } => keys
                .iter()
                .map(|k| parse_poly(field, k))
                .collect::<Result<Vec<_>>>()?,
        };
        let f = parse_poly(field, &file.f)?;
        let b = parse_value(&file.declared_b, "declared_B")?;
        let bbar = parse_value(&file.declared_bbar, "declared_Bbar")?;
        let valuation = PxValuation::series_eval(field, s.clone())?;
        Ok(LimitScenario {
            file,
            field,
            s,
            valuation,
            chain,
            f,
            b,
            bbar,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Self::from_file(ScenarioFile::from_toml(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn file(&self) -> &ScenarioFile {
        &self.file
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn degree(&self) -> usize {
        self.file.degree
    }

    pub fn series(&self) -> &HahnSeries {
        &self.s
    }

    pub fn valuation(&self) -> &PxValuation {
        &self.valuation
    }

    pub fn chain_len(&self) -> usize {
        self.chain.len()
    }

    pub fn horizon(&self) -> usize {
        self.file.usable_horizon
    }

    pub fn q0_index(&self) -> usize {
        self.file.q0_index
    }

    pub fn q_index(&self) -> usize {
        self.file.q_index
    }

    pub fn theta(&self) -> usize {
        self.file.theta
    }

    pub fn declared_b(&self) -> Value {
        self.b
    }

    pub fn declared_bbar(&self) -> Value {
        self.bbar
    }

    /// The limit key polynomial `F`.
    pub fn big_f(&self) -> &Poly {
        &self.f
    }

    /// `Q_k`, 1-based.
    pub fn key(&self, k: usize) -> Result<&Poly> {
        k.checked_sub(1)
            .and_then(|i| self.chain.get(i))
            .ok_or_else(|| Error::InvalidScenario {
                reason: format!("chain index out of range 1..={}", self.chain.len()),
                index: k,
            })
    }

    pub fn keys(&self) -> &[Poly] {
        &self.chain
    }

    /// The base `Q = Q_{q_index}`.
    pub fn base_q(&self) -> Result<&Poly> {
        self.key(self.q_index())
    }

    pub fn nu(&self, f: &Poly) -> Result<Value> {
        self.valuation.nu(f)
    }

    /// `γ_k = ν(Q_k)`.
    pub fn gamma(&self, k: usize) -> Result<Value> {
        self.nu(self.key(k)?)
    }

    /// `h_ρ = Q - Q_ρ` for the base `Q`.
    pub fn h(&self, rho: usize) -> Result<Poly> {
        self.base_q()?.sub(self.key(rho)?)
    }

    /// `l(X)` with `l(Q) = f` for the base `Q`.
    pub fn l_of(&self, f: &Poly) -> Result<XPoly> {
        Ok(q_expand(f, self.base_q()?)?.to_xpoly())
    }

    /// `L(X)` with `L(Q) = F`.
    pub fn big_l(&self) -> Result<XPoly> {
        self.l_of(&self.f)
    }

    /// `d = deg_X(F)`, read from the expansion in `Q_0`.
    pub fn d(&self) -> Result<usize> {
        let exp = q_expand(&self.f, self.key(self.q0_index())?)?;
        exp.deg_x().ok_or_else(|| Error::InvalidScenario {
            reason: "F is zero".into(),
            index: 0,
        })
    }

    /// Checks every standing assumption and reports each failure with its
    /// witness index (0 for scenario-level problems).
    pub fn validate(&self) -> ValidationReport {
        let mut issues = Vec::new();
        let mut push = |reason: String, index: usize| issues.push(ScenarioIssue { reason, index });
        let m = self.chain.len();
        let n = self.degree();
        let h = self.horizon();
        if m == 0 {
            push("chain is empty".into(), 0);
        }
        if h == 0 || h > m {
            push(format!("usable_horizon {h} outside 1..={m}"), 0);
        }
        if self.q0_index() == 0 || self.q0_index() >= self.q_index() || self.q_index() > h {
            push(
                format!(
                    "indices must satisfy 1 <= q0_index ({}) < q_index ({}) <= usable_horizon ({h})",
                    self.q0_index(),
                    self.q_index()
                ),
                0,
            );
        }
        if !self.f.is_monic() {
            push(format!("F = {} is not monic", self.f), 0);
        }
        if self.f.degree().is_none_or(|d| d < n) {
            push(format!("deg F must be at least n = {n}"), 0);
        }
        for (i, q) in self.chain.iter().enumerate() {
            if !q.is_monic() || q.degree() != Some(n) {
                push(format!("Q_{} = {q} is not monic of degree {n}", i + 1), i + 1);
            }
        }
        let mut gammas = Vec::with_capacity(m);
        for k in 1..=m {
            match self.gamma(k) {
                Ok(g) => gammas.push(g),
                Err(e) => {
                    push(format!("gamma_{k} not computable: {e}"), k);
                    return ValidationReport { issues, gammas };
                }
            }
        }
        for k in 2..=m {
            if gammas[k - 1] <= gammas[k - 2] {
                push(
                    format!("gamma not increasing: gamma_{k} = {} <= gamma_{} = {}", gammas[k - 1], k - 1, gammas[k - 2]),
                    k,
                );
                break;
            }
        }
        if let Some(k) = (1..=m).find(|&k| gammas[k - 1] >= self.b) {
            push(format!("gamma_{k} = {} >= declared_B = {}", gammas[k - 1], self.b), k);
        }
        'pc: for sigma in 2..=m {
            for rho in 1..sigma {
                let diff = match self.chain[sigma - 1].sub(&self.chain[rho - 1]) {
                    Ok(d) => d,
                    Err(e) => {
                        push(format!("Q_{sigma} - Q_{rho}: {e}"), sigma);
                        break 'pc;
                    }
                };
                match self.nu(&diff) {
                    Ok(v) if v == gammas[rho - 1] => {}
                    Ok(v) => {
                        push(
                            format!("pseudo-convergence: nu(Q_{sigma} - Q_{rho}) = {v} != gamma_{rho} = {}", gammas[rho - 1]),
                            sigma,
                        );
                        break 'pc;
                    }
                    Err(e) => {
                        push(format!("nu(Q_{sigma} - Q_{rho}): {e}"), sigma);
                        break 'pc;
                    }
                }
            }
        }
        match self.nu(&self.f) {
            Ok(nu_f) => {
                for k in 1..=h.min(m) {
                    match truncate(&self.valuation, &self.f, &self.chain[k - 1]) {
                        Ok(r) if r.value < nu_f => {}
                        Ok(r) => {
                            push(format!("F is stable at Q_{k}: nu_Q(F) = {} = nu(F)", r.value), k);
                            break;
                        }
                        Err(e) => {
                            push(format!("nu_Q_{k}(F): {e}"), k);
                            break;
                        }
                    }
                }
            }
            Err(e) => push(format!("nu(F): {e}"), 0),
        }
        ValidationReport { issues, gammas }
    }

    /// `Ok(())` or the first validation failure as `InvalidScenario`.
    pub fn ensure_valid(&self) -> Result<()> {
        match self.validate().issues.into_iter().next() {
            None => Ok(()),
            Some(i) => Err(Error::InvalidScenario {
                reason: i.reason,
                index: i.index,
            }),
        }
    }

    /// Monomials `x^k` for `k < deg F`, the chain keys, `F`, and a seeded
    /// sample of polynomials with small supports.
    pub fn corpus(&self) -> Vec<CorpusEntry> {
        let field = self.field;
        let deg_f = self.f.degree().unwrap_or(0);
        let mut out = Vec::new();
        for k in 0..deg_f {
            out.push(CorpusEntry {
                key: format!("m{k}"),
                poly: Poly::monomial(FieldElem::one(field), k),
            });
        }
        for (i, q) in self.chain.iter().enumerate() {
            out.push(CorpusEntry {
                key: format!("Q{}", i + 1),
                poly: q.clone(),
            });
        }
        out.push(CorpusEntry {
            key: "F".into(),
            poly: self.f.clone(),
        });
        let mut rng = ChaCha8Rng::seed_from_u64(self.file.corpus_seed);
        let palette = exponent_palette(field);
        let width = self.file.corpus_size.to_string().len().max(2);
        for i in 0..self.file.corpus_size {
            let poly = random_poly(&mut rng, field, deg_f, &palette);
            out.push(CorpusEntry {
                key: format!("r{i:0width$}"),
                poly,
            });
        }
        out
    }

    /// Uncertified estimates of `B` and `B̄`: the last observed values inside
    /// the horizon.
    pub fn estimate_limits(&self) -> Result<EstimatedLimits> {
        let h = self.horizon();
        let b = self.gamma(h)?;
        let bbar = truncate(&self.valuation, &self.f, self.key(h)?)?.value;
        Ok(EstimatedLimits {
            b_lower: b,
            bbar_lower: bbar,
            certified: false,
        })
    }
}

fn exponent_palette(field: FieldDescriptor) -> Vec<Rat> {
    let p = field.p() as i64;
    match field.kind() {
        FieldKind::Puiseux => vec![
            Rat::from_integer(-1),
            Rat::new(-1, p),
            Rat::new(-1, p * p),
            Rat::new(-1, p * p * p),
            Rat::from_integer(0),
            Rat::new(1, p),
            Rat::from_integer(1),
        ],
        FieldKind::RatFunc => vec![-1, 0, 1, 2].into_iter().map(Rat::from_integer).collect(),
        FieldKind::Prime | FieldKind::Rationals => vec![Rat::from_integer(0)],
    }
}

fn random_elem(rng: &mut ChaCha8Rng, field: FieldDescriptor, palette: &[Rat]) -> FieldElem {
    let p = field.p() as u32;
    loop {
        let mut acc = FieldElem::zero(field);
        for _ in 0..rng.random_range(1..=2u32) {
            let e = palette[rng.random_range(0..palette.len() as u32) as usize];
            let c = FieldElem::from_i64(field, rng.random_range(1..p.max(2)) as i64);
            let term = FieldElem::t_pow(field, e)
                .and_then(|t| t.mul(&c))
                .unwrap_or(c);
            acc = acc.add(&term).expect("same field");
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

fn random_poly(rng: &mut ChaCha8Rng, field: FieldDescriptor, max_deg: usize, palette: &[Rat]) -> Poly {
    let deg = rng.random_range(0..=max_deg as u32) as usize;
    let mut coeffs = vec![FieldElem::zero(field); deg + 1];
    coeffs[deg] = if rng.random_bool(0.5) {
        FieldElem::one(field)
    } else {
        random_elem(rng, field, palette)
    };
    for c in coeffs.iter_mut().take(deg) {
        if rng.random_bool(0.6) {
            *c = random_elem(rng, field, palette);
        }
    }
    Poly::new(field, coeffs).expect("same field")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioIssue {
    pub reason: String,
    /// Witness chain index, 0 for scenario-level issues.
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub issues: Vec<ScenarioIssue>,
    /// `γ_k` for every index that could be evaluated.
    pub gammas: Vec<Value>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            write!(f, "valid")?;
        } else {
            write!(f, "invalid")?;
        }
        for i in &self.issues {
            write!(f, "\n  [{}] {}", i.index, i.reason)?;
        }
        Ok(())
    }
}

/// Lower estimates for the declared limits. Never certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EstimatedLimits {
    pub b_lower: Value,
    pub bbar_lower: Value,
    pub certified: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const AS2: &str = include_str!("../../../scenarios/as2.scn");

    #[test]
    fn round_trip_is_identity() {
        let file = ScenarioFile::from_toml(AS2).unwrap();
        let text = file.to_toml().unwrap();
        assert_eq!(ScenarioFile::from_toml(&text).unwrap(), file);
        assert_eq!(ScenarioFile::from_toml(&text).unwrap().to_toml().unwrap(), text);
    }

    #[test]
    fn shipped_scenario_is_valid() {
        let s = LimitScenario::from_toml(AS2).unwrap();
        let r = s.validate();
        assert!(r.is_valid(), "{r}");
        assert_eq!(r.gammas[0], Value::new(-1, 4));
        assert_eq!(s.d().unwrap(), 2);
    }

    #[test]
    fn reordered_chain_is_rejected() {
        let mut file = ScenarioFile::from_toml(AS2).unwrap();
        let s = LimitScenario::from_file(file.clone()).unwrap();
        let mut keys: Vec<String> = s.keys().iter().map(Poly::to_string).collect();
        keys.swap(1, 2);
        file.chain = ChainSpec::Explicit { keys };
        let err = LimitScenario::from_file(file).unwrap().ensure_valid().unwrap_err();
        match err {
            Error::InvalidScenario { reason, index } => {
                assert!(reason.starts_with("gamma not increasing"), "{reason}");
                assert_eq!(index, 3);
            }
            other => panic!("{other}"),
        }
    }

    #[test]
    fn low_declared_bound_is_rejected() {
        let mut file = ScenarioFile::from_toml(AS2).unwrap();
        file.declared_b = "-1/4".into();
        let report = LimitScenario::from_file(file).unwrap().validate();
        let issue = &report.issues[0];
        assert_eq!(issue.index, 1);
        assert!(issue.reason.contains(">= declared_B"));
        // γ_4 = -1/32 is one of the violating indices as well.
        assert!(report.gammas[3] >= Value::new(-1, 4));
    }

    #[test]
    fn corpus_is_seeded() {
        let s = LimitScenario::from_toml(AS2).unwrap();
        let a = s.corpus();
        let b = s.corpus();
        assert_eq!(a, b);
        assert_eq!(a.len(), 2 + 8 + 1 + 50);
        assert!(a.iter().all(|e| e.poly.degree().unwrap_or(0) <= 2));
    }
}
