//! Brute-force checks of the structural statements over a scenario corpus.
//!
//! Every case records both sides of the statement as exact values together
//! with a verdict. Vacuous passes (an infinite side, an empty index set) and
//! eventual statements that the finite horizon cannot certify are kept apart
//! from substantive passes.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{a_rho0, q_expand, truncate, truncate_expansion};
use crate::limit::{j_gaps, constant_gap_rows};
use crate::poly::{compose_x, Poly};
use crate::scenario::{CorpusEntry, LimitScenario};
use crate::valgroup::{kaplansky_minimizer, GammaSeq, MinimizerInput, Rat, Value};
use crate::valuation::PxValuation;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Vax,
    Trc,
    L21,
    L22,
    L23,
    P24,
    C25,
    K31,
    P32,
    L41,
    L42,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::Vax,
        CheckId::Trc,
        CheckId::L21,
        CheckId::L22,
        CheckId::L23,
        CheckId::P24,
        CheckId::C25,
        CheckId::K31,
        CheckId::P32,
        CheckId::L41,
        CheckId::L42,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::Vax => "VAX",
            CheckId::Trc => "TRC",
            CheckId::L21 => "L21",
            CheckId::L22 => "L22",
            CheckId::L23 => "L23",
            CheckId::P24 => "P24",
            CheckId::C25 => "C25",
            CheckId::K31 => "K31",
            CheckId::P32 => "P32",
            CheckId::L41 => "L41",
            CheckId::L42 => "L42",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::parse(format!("unknown check id '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Pass,
    /// Holds only because a side is infinite or the index set is empty.
    Vacuous,
    /// An eventual statement not yet visible inside the horizon.
    Horizon,
    Fail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Vacuous => "vacuous",
            Verdict::Horizon => "horizon",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseRecord {
    pub key: String,
    pub lhs: Value,
    pub rhs: Value,
    pub verdict: Verdict,
}

impl CaseRecord {
    fn new(key: String, lhs: Value, rhs: Value, holds: bool) -> Self {
        let verdict = match (holds, lhs.is_infinite() || rhs.is_infinite()) {
            (false, _) => Verdict::Fail,
            (true, true) => Verdict::Vacuous,
            (true, false) => Verdict::Pass,
        };
        CaseRecord { key, lhs, rhs, verdict }
    }

    fn with(key: String, lhs: Value, rhs: Value, verdict: Verdict) -> Self {
        CaseRecord { key, lhs, rhs, verdict }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counts {
    pub pass: usize,
    pub vacuous: usize,
    pub horizon: usize,
    pub fail: usize,
}

impl Counts {
    pub fn total(&self) -> usize {
        self.pass + self.vacuous + self.horizon + self.fail
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub id: CheckId,
    pub cases: Vec<CaseRecord>,
}

impl CheckReport {
    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for r in &self.cases {
            match r.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Vacuous => c.vacuous += 1,
                Verdict::Horizon => c.horizon += 1,
                Verdict::Fail => c.fail += 1,
            }
        }
        c
    }

    pub fn passed(&self) -> bool {
        self.counts().fail == 0
    }

    /// True when nothing substantive was checked.
    pub fn is_vacuous(&self) -> bool {
        let c = self.counts();
        c.pass == 0 && c.fail == 0 && c.vacuous > 0
    }

    pub fn summary_line(&self) -> String {
        let c = self.counts();
        let status = if c.fail > 0 {
            "FAIL"
        } else if self.is_vacuous() {
            "VACUOUS"
        } else {
            "OK"
        };
        format!(
            "{} summary total={} pass={} vacuous={} horizon={} fail={} {}",
            self.id,
            c.total(),
            c.pass,
            c.vacuous,
            c.horizon,
            c.fail,
            status
        )
    }

    /// One `check_id case_key lhs rhs verdict` line per case.
    pub fn case_lines(&self) -> impl Iterator<Item = String> + '_ {
        self.cases
            .iter()
            .map(move |r| format!("{} {} {} {} {}", self.id, r.key, r.lhs, r.rhs, r.verdict))
    }
}

type CaseResult = Result<Option<CaseRecord>, (String, Error)>;

fn collect(id: CheckId, results: Vec<CaseResult>) -> Result<CheckReport> {
    let mut cases = Vec::with_capacity(results.len());
    let mut uncertified = Vec::new();
    for r in results {
        match r {
            Ok(Some(c)) => cases.push(c),
            Ok(None) => {}
            Err((key, e)) if e.is_precision() => uncertified.push(key),
            Err((key, e)) => {
                return Err(Error::Precondition(format!("{id} case {key}: {e}")));
            }
        }
    }
    if !uncertified.is_empty() {
        return Err(Error::PrecisionExhausted {
            check: id.to_string(),
            cases: uncertified,
        });
    }
    Ok(CheckReport { id, cases })
}

fn tag<T>(key: &str, r: Result<T>) -> Result<T, (String, Error)> {
    r.map_err(|e| (key.to_string(), e))
}

/// Valuation functions checked by VAX: `ν` and each `ν_{Q_k}`.
fn vax_valuations(s: &LimitScenario) -> Vec<(String, Option<Poly>)> {
    let mut out = vec![("nu".to_string(), None)];
    for k in 1..=s.horizon() {
        out.push((format!("nuQ{k}"), Some(s.keys()[k - 1].clone())));
    }
    out
}

fn eval_with(v: &PxValuation, q: &Option<Poly>, f: &Poly) -> Result<Value> {
    match q {
        None => v.nu(f),
        Some(q) => Ok(truncate(v, f, q)?.value),
    }
}

fn x_degree_ok(s: &LimitScenario, f: &Poly, d: usize) -> Result<bool> {
    Ok(q_expand(f, s.base_q()?)?.deg_x().is_none_or(|dx| dx <= d))
}

fn check_vax(s: &LimitScenario, corpus: &[CorpusEntry]) -> Vec<CaseResult> {
    let vals = vax_valuations(s);
    let mut work = Vec::new();
    for (name, q) in &vals {
        for a in 0..corpus.len() {
            for b in a..corpus.len() {
                work.push((name, q, a, b));
            }
        }
    }
    let v = s.valuation();
    work.par_iter()
        .flat_map_iter(|&(name, q, a, b)| {
            let (fa, fb) = (&corpus[a], &corpus[b]);
            let base = format!("{}*{}@{name}", fa.key, fb.key);
            let mul = (|| {
                let lhs = eval_with(v, q, &fa.poly.mul(&fb.poly)?)?;
                let rhs = eval_with(v, q, &fa.poly)?.add(eval_with(v, q, &fb.poly)?)?;
                Ok(Some(CaseRecord::new(format!("mul:{base}"), lhs, rhs, lhs == rhs)))
            })();
            let add_key = format!("add:{}+{}@{name}", fa.key, fb.key);
            let add = (|| {
                let lhs = eval_with(v, q, &fa.poly.add(&fb.poly)?)?;
                let rhs = eval_with(v, q, &fa.poly)?.min(eval_with(v, q, &fb.poly)?);
                Ok(Some(CaseRecord::new(add_key.clone(), lhs, rhs, lhs >= rhs)))
            })();
            [tag(&format!("mul:{base}"), mul), tag(&add_key, add)]
        })
        .collect()
}

fn check_trc(s: &LimitScenario, corpus: &[CorpusEntry]) -> Vec<CaseResult> {
    let work: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|i| (1..=s.horizon()).map(move |k| (i, k)))
        .collect();
    work.par_iter()
        .map(|&(i, k)| {
            let e = &corpus[i];
            let key = format!("{}@Q{k}", e.key);
            tag(&key, (|| {
                let lhs = truncate(s.valuation(), &e.poly, s.key(k)?)?.value;
                let rhs = s.nu(&e.poly)?;
                Ok(Some(CaseRecord::new(key.clone(), lhs, rhs, lhs <= rhs)))
            })())
        })
        .collect()
}

/// `ε(f)`, or `None` for constants (an empty maximum).
fn eps_opt(v: &PxValuation, f: &Poly) -> Result<Option<Value>> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(None);
    }
    Ok(Some(v.epsilon(f)?.epsilon))
}

fn check_l21(s: &LimitScenario, corpus: &[CorpusEntry]) -> Vec<CaseResult> {
    let work: Vec<(usize, usize)> = (1..=s.horizon())
        .flat_map(|k| (0..corpus.len()).map(move |i| (k, i)))
        .collect();
    let v = s.valuation();
    work.par_iter()
        .map(|&(k, i)| {
            let e = &corpus[i];
            let key = format!("{}@Q{k}", e.key);
            tag(&key, (|| {
                let q = s.key(k)?;
                let (quot, rem) = e.poly.euclid_div(q)?;
                let gamma = match (eps_opt(v, &e.poly)?, eps_opt(v, &rem)?) {
                    (None, None) => return Ok(None),
                    (a, b) => a.max(b).expect("one side is defined"),
                };
                let eq = v.epsilon(q)?.epsilon;
                if gamma >= eq {
                    return Ok(None);
                }
                let qq = quot.mul(q)?;
                let lhs = truncate(v, &qq, q)?.value.sub(eq.sub(gamma)?)?;
                let nu_f = v.nu(&e.poly)?;
                let holds = lhs >= nu_f && nu_f == v.nu(&rem)?;
                Ok(Some(CaseRecord::new(key.clone(), lhs, nu_f, holds)))
            })())
        })
        .collect()
}

fn check_l22(s: &LimitScenario, corpus: &[CorpusEntry]) -> Vec<CaseResult> {
    let h = s.horizon();
    let work: Vec<(usize, usize, usize)> = (1..=h)
        .flat_map(|j| (j + 1..=h).flat_map(move |k| (0..corpus.len()).map(move |i| (j, k, i))))
        .collect();
    let v = s.valuation();
    work.par_iter()
        .map(|&(j, k, i)| {
            let e = &corpus[i];
            let key = format!("{}@Q{j},Q{k}", e.key);
            tag(&key, (|| {
                let (q, q2) = (s.key(j)?, s.key(k)?);
                let lhs = truncate(v, &e.poly, q)?.value;
                let exp = q_expand(&e.poly, q2)?;
                let mut rhs = Value::Infinity;
                for (idx, c) in exp.coeffs().iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let term = c.mul(&q2.pow(idx as u32)?)?;
                    rhs = rhs.min(truncate(v, &term, q)?.value);
                }
                Ok(Some(CaseRecord::new(key.clone(), lhs, rhs, lhs == rhs)))
            })())
        })
        .collect()
}

fn check_l23(s: &LimitScenario, corpus: &[CorpusEntry]) -> Vec<CaseResult> {
    let h = s.horizon();
    let work: Vec<(usize, usize, usize)> = (s.q_index()..=h)
        .flat_map(|j| (j + 1..=h).flat_map(move |k| (0..corpus.len()).map(move |i| (j, k, i))))
        .collect();
    let v = s.valuation();
    work.par_iter()
        .map(|&(j, k, i)| {
            let e = &corpus[i];
            let key = format!("{}@Q{j},Q{k}", e.key);
            tag(&key, (|| {
                let ea = q_expand(&e.poly, s.key(j)?)?;
                let Some(l) = truncate_expansion(v, &ea)?.delta_q else {
                    return Ok(None);
                };
                let eb = q_expand(&e.poly, s.key(k)?)?;
                let (al, bl) = (ea.coeff(l), eb.coeff(l));
                let lhs = v.nu(&al.sub(&bl)?)?;
                let rhs = v.nu(&al)?;
                Ok(Some(CaseRecord::new(key.clone(), lhs, rhs, lhs > rhs && rhs == v.nu(&bl)?)))
            })())
        })
        .collect()
}

fn tail(s: &LimitScenario) -> Vec<usize> {
    (s.q_index() + 1..=s.horizon()).collect()
}

fn check_p24(s: &LimitScenario, corpus: &[CorpusEntry], d: usize) -> Vec<CaseResult> {
    let rhos = tail(s);
    let work: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|i| rhos.iter().map(move |&r| (i, r)))
        .collect();
    let v = s.valuation();
    work.par_iter()
        .map(|&(i, rho)| {
            let e = &corpus[i];
            let key = format!("{}@rho{rho}", e.key);
            tag(&key, (|| {
                if e.poly.is_zero() || !x_degree_ok(s, &e.poly, d)? {
                    return Ok(None);
                }
                let qr = s.key(rho)?;
                let lh = compose_x(&s.l_of(&e.poly)?, &s.h(rho)?)?;
                let lhs = truncate(v, &lh, qr)?.value;
                let rhs = truncate(v, &e.poly, qr)?.value;
                let nu_a0 = v.nu(&a_rho0(&e.poly, qr)?)?;
                let criterion = nu_a0 == rhs && rhs == v.nu(&lh)?;
                let holds = lhs >= rhs && ((lhs == rhs) == criterion);
                Ok(Some(CaseRecord::new(key.clone(), lhs, rhs, holds)))
            })())
        })
        .collect()
}

/// Least `ρ_0` in `[q_index, horizon)` such that `pred` holds on all of
/// `(ρ_0, horizon]`; `None` when it fails at the horizon itself.
fn eventual_threshold(rhos: &[usize], holds: &[bool]) -> Option<usize> {
    let mut start = None;
    for (pos, &ok) in holds.iter().enumerate().rev() {
        if !ok {
            break;
        }
        start = Some(if pos == 0 { rhos[0] - 1 } else { rhos[pos - 1] });
    }
    start
}

fn check_c25(s: &LimitScenario, corpus: &[CorpusEntry]) -> Vec<CaseResult> {
    let rhos = tail(s);
    let deg_f = s.big_f().degree().unwrap_or(0);
    let v = s.valuation();
    corpus
        .par_iter()
        .map(|e| {
            let key = e.key.clone();
            tag(&key, (|| {
                if e.poly.is_zero() || e.poly.degree().unwrap_or(0) >= deg_f {
                    return Ok(None);
                }
                let nu_f = v.nu(&e.poly)?;
                let l = s.l_of(&e.poly)?;
                let mut holds = Vec::with_capacity(rhos.len());
                let mut last = Value::Infinity;
                for &sigma in &rhos {
                    let qs = s.key(sigma)?;
                    let nl = v.nu(&compose_x(&l, &s.h(sigma)?)?)?;
                    let ns = truncate(v, &e.poly, qs)?.value;
                    let na = v.nu(&a_rho0(&e.poly, qs)?)?;
                    holds.push(nl == nu_f && ns == nu_f && na == nu_f);
                    last = nl;
                }
                Ok(Some(match eventual_threshold(&rhos, &holds) {
                    Some(r) => CaseRecord::new(format!("{key}@from{r}"), last, nu_f, true),
                    None => CaseRecord::with(format!("{key}@none"), last, nu_f, Verdict::Horizon),
                }))
            })())
        })
        .collect()
}

fn check_p32(s: &LimitScenario, corpus: &[CorpusEntry], d: usize) -> Vec<CaseResult> {
    let rhos = tail(s);
    let v = s.valuation();
    corpus
        .par_iter()
        .map(|e| {
            let key = e.key.clone();
            tag(&key, (|| {
                if e.poly.is_zero() || !x_degree_ok(s, &e.poly, d)? {
                    return Ok(None);
                }
                let l = s.l_of(&e.poly)?;
                let mut holds = Vec::with_capacity(rhos.len());
                let (mut lhs, mut rhs) = (Value::Infinity, Value::Infinity);
                for &sigma in &rhos {
                    lhs = truncate(v, &e.poly, s.key(sigma)?)?.value;
                    rhs = v.nu(&compose_x(&l, &s.h(sigma)?)?)?;
                    holds.push(lhs == rhs);
                }
                Ok(Some(match eventual_threshold(&rhos, &holds) {
                    Some(r) => CaseRecord::new(format!("{key}@from{r}"), lhs, rhs, true),
                    None => CaseRecord::with(format!("{key}@none"), lhs, rhs, Verdict::Horizon),
                }))
            })())
        })
        .collect()
}

fn check_k31(s: &LimitScenario, corpus: &[CorpusEntry], d: usize) -> Vec<CaseResult> {
    let rhos = tail(s);
    let v = s.valuation();
    corpus
        .par_iter()
        .map(|e| {
            let key = e.key.clone();
            tag(&key, (|| {
                if e.poly.is_zero() || !x_degree_ok(s, &e.poly, d)? {
                    return Ok(None);
                }
                let l = s.l_of(&e.poly)?;
                let h_last = s.h(*rhos.last().expect("nonempty tail"))?;
                let derivs = l.taylor_expand(&h_last)?;
                let mut pairs: Vec<(usize, Rat)> = Vec::new();
                for (j, dj) in derivs.iter().enumerate().skip(1) {
                    if let Some(b) = v.nu(dj)?.finite() {
                        pairs.push((j, b));
                    }
                }
                if pairs.is_empty() {
                    return Ok(None);
                }
                let gammas: Vec<(usize, Rat)> = rhos
                    .iter()
                    .map(|&r| Ok((r, s.gamma(r)?.finite().expect("finite gamma"))))
                    .collect::<Result<_>>()?;
                let input = MinimizerInput {
                    pairs: pairs.iter().map(|&(j, b)| (b, j as u64)).collect(),
                    gammas: GammaSeq::Explicit {
                        start: rhos[0] as u64,
                        values: gammas.iter().map(|g| g.1).collect(),
                    },
                };
                let last_g = gammas.last().expect("nonempty").1;
                let value = |(j, b): (usize, Rat), g: Rat| b + g * Rat::from_integer(j as i64);
                let m = match kaplansky_minimizer(&input) {
                    Ok(m) => m,
                    Err(Error::NoEventualMinimizer(_)) => {
                        return Ok(Some(CaseRecord::with(
                            format!("{key}@none"),
                            Value::Infinity,
                            Value::Infinity,
                            Verdict::Horizon,
                        )));
                    }
                    Err(e) => return Err(e),
                };
                let winner = pairs[m.b - 1];
                let mut holds = true;
                let mut others = Value::Infinity;
                for &(r, g) in &gammas {
                    for (idx, &p) in pairs.iter().enumerate() {
                        if idx + 1 == m.b {
                            continue;
                        }
                        if r as u64 > m.rho && value(p, g) <= value(winner, g) {
                            holds = false;
                        }
                        if g == last_g {
                            others = others.min(Value::Finite(value(p, g)));
                        }
                    }
                }
                let rhs = Value::Finite(value(winner, last_g));
                Ok(Some(CaseRecord::new(
                    format!("{key}@b{},rho{}", winner.0, m.rho),
                    others,
                    rhs,
                    holds,
                )))
            })())
        })
        .collect()
}

fn check_l41(s: &LimitScenario) -> Vec<CaseResult> {
    let all = match j_gaps(s) {
        Ok(all) => all,
        Err(Error::VacuouslyTrue(_)) => {
            return vec![Ok(Some(CaseRecord::with(
                "scenario@J=empty".into(),
                Value::Infinity,
                Value::Infinity,
                Verdict::Vacuous,
            )))];
        }
        Err(e) => return vec![Err(("scenario".into(), e))],
    };
    all.into_iter()
        .map(|r| match r {
            Ok(rec) => {
                let key = format!("i{},j{}", rec.i, rec.j);
                let g = s.gamma(s.horizon());
                tag(&key, g.and_then(|g| {
                    let lhs = rec.beta_i.add(g.scale(rec.i as i64)?)?;
                    let rhs = rec.beta_j.add(g.scale(rec.j as i64)?)?;
                    Ok(Some(CaseRecord::new(key.clone(), lhs, rhs, rec.holds())))
                }))
            }
            Err(Error::VacuouslyTrue(msg)) => Ok(Some(CaseRecord::with(
                format!("pair@{}", msg.replace(' ', "_")),
                Value::Infinity,
                Value::Infinity,
                Verdict::Vacuous,
            ))),
            Err(e) => Err(("pair".into(), e)),
        })
        .collect()
}

fn check_l42(s: &LimitScenario, theta: usize) -> Vec<CaseResult> {
    match constant_gap_rows(s, theta) {
        Ok(rows) => rows
            .into_iter()
            .map(|r| {
                let holds = r.holds();
                Ok(Some(CaseRecord::new(format!("i{}@theta{theta}", r.i), r.lhs, r.bbar, holds)))
            })
            .collect(),
        Err(e) => vec![Err((format!("theta{theta}"), e))],
    }
}

/// Runs one check over `corpus`; `theta` is used by L42.
pub fn run_check(id: CheckId, s: &LimitScenario, corpus: &[CorpusEntry], theta: usize) -> Result<CheckReport> {
    let d = s.d()?;
    let results = match id {
        CheckId::Vax => check_vax(s, corpus),
        CheckId::Trc => check_trc(s, corpus),
        CheckId::L21 => check_l21(s, corpus),
        CheckId::L22 => check_l22(s, corpus),
        CheckId::L23 => check_l23(s, corpus),
        CheckId::P24 => check_p24(s, corpus, d),
        CheckId::C25 => check_c25(s, corpus),
        CheckId::K31 => check_k31(s, corpus, d),
        CheckId::P32 => check_p32(s, corpus, d),
        CheckId::L41 => check_l41(s),
        CheckId::L42 => check_l42(s, theta),
    };
    collect(id, results)
}

/// Every check in catalog order, on the scenario's own corpus and `theta`.
pub fn run_all(s: &LimitScenario) -> Result<Vec<CheckReport>> {
    let corpus = s.corpus();
    CheckId::ALL
        .iter()
        .map(|&id| run_check(id, s, &corpus, s.theta()))
        .collect()
}
