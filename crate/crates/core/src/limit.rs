//! Stability and fixedness along a scenario chain, the choice of the base
//! key, and the p-power rewrites `F_p`, `F̄_p` of the limit key polynomial.

use std::fmt;

use crate::error::{Error, Result};
use crate::expansion::{a_rho0, q_expand, truncate, TruncationReport};
use crate::poly::{compose_x, Poly, XPoly};
use crate::scenario::{CorpusEntry, LimitScenario};
use crate::valgroup::{kaplansky_minimizer, GammaSeq, Minimizer, MinimizerInput, Rat, Value};

/// Least `k > q0_index` with
/// `ε(Q_k) - ε(Q_0) > d(B - ν(Q_k))` and `ε(Q_k) - ε(Q_0) > B̄ - ν_{Q_k}(F)`.
pub fn choose_base_q(s: &LimitScenario, q0_index: usize) -> Result<usize> {
    let v = s.valuation();
    let q0 = s.key(q0_index)?;
    let eps0 = v.epsilon(q0)?.epsilon;
    let d = q_expand(s.big_f(), q0)?
        .deg_x()
        .ok_or_else(|| Error::Precondition("F is zero".into()))? as i64;
    for k in q0_index + 1..=s.horizon() {
        let qk = s.key(k)?;
        let gap = v.epsilon(qk)?.epsilon.sub(eps0)?;
        let first = s.declared_b().sub(v.nu(qk)?)?.scale(d)?;
        let second = s.declared_bbar().sub(truncate(v, s.big_f(), qk)?.value)?;
        if gap > first && gap > second {
            return Ok(k);
        }
    }
    Err(Error::HorizonExhausted(format!(
        "no index in ({q0_index}, {}] satisfies the base-key inequalities",
        s.horizon()
    )))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stability {
    /// `ν_{Q_k}(f) = ν(f)` first at `index`.
    Stable { index: usize, report: TruncationReport },
    UnstableAtHorizon,
}

/// Least `k ≤ horizon` with `ν_{Q_k}(f) = ν(f)`; for `deg f < deg F` the
/// witness must also have `0 ∈ S_{Q_k}(f)`.
pub fn is_stable_at_horizon(s: &LimitScenario, f: &Poly) -> Result<Stability> {
    if f.is_zero() {
        return Err(Error::Precondition("stability of the zero polynomial".into()));
    }
    let nu_f = s.nu(f)?;
    let small = f.degree() < s.big_f().degree();
    for k in 1..=s.horizon() {
        let report = truncate(s.valuation(), f, s.key(k)?)?;
        if report.value == nu_f && (!small || report.s_q.contains(&0)) {
            return Ok(Stability::Stable { index: k, report });
        }
    }
    Ok(Stability::UnstableAtHorizon)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedRow {
    pub rho: usize,
    /// `ν(l(h_ρ))` with `h_ρ = Q - Q_ρ`.
    pub nu_plus: Value,
    /// `ν(l(-h_ρ))`.
    pub nu_minus: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedReport {
    pub nu_f: Value,
    pub l: XPoly,
    pub rows: Vec<FixedRow>,
    /// First `ρ` with `ν(l(h_ρ)) = ν(f)`.
    pub witness: Option<usize>,
    /// First `ρ` with `ν(l(-h_ρ)) = ν(f)`.
    pub witness_minus: Option<usize>,
}

impl FixedReport {
    pub fn is_fixed(&self) -> bool {
        self.witness.is_some()
    }
}

/// Scans `ρ ∈ (q_index, horizon]` for `ν(f) = ν(l(h_ρ))`, reporting the
/// opposite sign convention alongside.
pub fn is_fixed(s: &LimitScenario, f: &Poly) -> Result<FixedReport> {
    let nu_f = s.nu(f)?;
    let l = s.l_of(f)?;
    let mut rows = Vec::new();
    for rho in s.q_index() + 1..=s.horizon() {
        let h = s.h(rho)?;
        rows.push(FixedRow {
            rho,
            nu_plus: s.nu(&compose_x(&l, &h)?)?,
            nu_minus: s.nu(&compose_x(&l, &h.neg())?)?,
        });
    }
    let witness = rows.iter().find(|r| r.nu_plus == nu_f).map(|r| r.rho);
    let witness_minus = rows.iter().find(|r| r.nu_minus == nu_f).map(|r| r.rho);
    Ok(FixedReport {
        nu_f,
        l,
        rows,
        witness,
        witness_minus,
    })
}

/// One corpus polynomial under both detectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AgreementRow {
    pub key: String,
    pub stable_at: Option<usize>,
    pub fixed_at: Option<usize>,
}

impl AgreementRow {
    pub fn agrees(&self) -> bool {
        self.stable_at.is_some() == self.fixed_at.is_some()
    }
}

/// Runs both detectors on every nonzero corpus entry with `deg_X ≤ d`.
pub fn stable_fixed_agreement(s: &LimitScenario, corpus: &[CorpusEntry]) -> Result<Vec<AgreementRow>> {
    let d = s.d()?;
    let base = s.base_q()?;
    let mut rows = Vec::new();
    for e in corpus {
        if e.poly.is_zero() || q_expand(&e.poly, base)?.deg_x().is_some_and(|dx| dx > d) {
            continue;
        }
        let stable_at = match is_stable_at_horizon(s, &e.poly)? {
            Stability::Stable { index, .. } => Some(index),
            Stability::UnstableAtHorizon => None,
        };
        rows.push(AgreementRow {
            key: e.key.clone(),
            stable_at,
            fixed_at: is_fixed(s, &e.poly)?.witness,
        });
    }
    Ok(rows)
}

/// `I` = powers of `p` in `[1, d]`, `J` = the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPowerSplit {
    pub d: usize,
    pub i: Vec<usize>,
    pub j: Vec<usize>,
}

pub fn ppower_split(d: usize, p: u64) -> PPowerSplit {
    let mut i = Vec::new();
    let mut pw: usize = 1;
    while pw <= d {
        i.push(pw);
        match pw.checked_mul(p as usize) {
            Some(next) => pw = next,
            None => break,
        }
    }
    let j = (1..=d).filter(|k| !i.contains(k)).collect();
    PPowerSplit { d, i, j }
}

impl fmt::Display for PPowerSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        write!(f, "d = {}; I = {{{}}}; J = {{{}}}", self.d, show(&self.i), show(&self.j))
    }
}

/// Pairs `(i, j)` with `i = p^t`, `j = p^t r`, `r > 1`, `p ∤ r`, `j ≤ d`.
pub fn admissible_pairs(d: usize, p: u64) -> Vec<(usize, usize)> {
    let p = p as usize;
    let mut out = Vec::new();
    for &i in &ppower_split(d, p as u64).i {
        let mut r = 2;
        while i * r <= d {
            if r % p != 0 {
                out.push((i, i * r));
            }
            r += 1;
        }
    }
    out
}

/// `∂_i l(h)` for `i = 0..=deg_X l`.
fn derivatives_at(l: &XPoly, h: &Poly) -> Result<Vec<Poly>> {
    l.taylor_expand(h)
}

/// `β_i = ν(∂_iL(h_ρ))` for `i = 1..=d`.
pub fn betas_at(s: &LimitScenario, rho: usize) -> Result<Vec<Value>> {
    let l = s.big_l()?;
    let derivs = derivatives_at(&l, &s.h(rho)?)?;
    derivs[1..].iter().map(|d| s.nu(d)).collect()
}

/// The index `σ` after which the `β_i` have settled and every admissible
/// pair satisfies `β_i + iB ≤ β_j + jγ_{σ+1}`; found by scanning.
pub fn tail_threshold(s: &LimitScenario) -> Result<usize> {
    let h = s.horizon();
    let d = s.big_l()?.deg_x().unwrap_or(0);
    let pairs = admissible_pairs(d, s.p());
    let betas: Vec<Vec<Value>> = (s.q_index() + 1..=h)
        .map(|rho| betas_at(s, rho))
        .collect::<Result<_>>()?;
    let settled = betas.last().cloned().unwrap_or_default();
    'sigma: for sigma in s.q_index()..h {
        for (offset, row) in betas.iter().enumerate() {
            if s.q_index() + 1 + offset > sigma && *row != settled {
                continue 'sigma;
            }
        }
        let g_next = s.gamma(sigma + 1)?;
        for &(i, j) in &pairs {
            let (bi, bj) = (settled[i - 1], settled[j - 1]);
            if bj.is_infinite() {
                continue;
            }
            let left = bi.add(s.declared_b().scale(i as i64)?)?;
            let right = bj.add(g_next.scale(j as i64)?)?;
            if left > right {
                continue 'sigma;
            }
        }
        return Ok(sigma);
    }
    Err(Error::HorizonExhausted(format!("no tail threshold below the horizon {h}")))
}

fn check_theta(s: &LimitScenario, theta: usize) -> Result<usize> {
    let sigma = tail_threshold(s)?;
    if theta <= sigma {
        return Err(Error::Precondition(format!(
            "theta = {theta} must exceed the tail threshold {sigma}"
        )));
    }
    if theta >= s.horizon() {
        return Err(Error::HorizonExhausted(format!(
            "theta = {theta} leaves no certified tail below the horizon {}",
            s.horizon()
        )));
    }
    Ok(sigma)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpRow {
    pub rho: usize,
    pub nu_l: Value,
    pub nu_lp: Value,
    pub nu_diff: Value,
    /// `β_b + bγ_ρ`.
    pub predicted: Value,
    pub dominance: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpCertificate {
    pub theta: usize,
    pub threshold: usize,
    pub split: PPowerSplit,
    /// Every `∂_jL(h_θ)` with `j ∈ J` vanishes, so `L_p(h_ρ) = L(h_ρ)`.
    pub degenerate: bool,
    pub monic: bool,
    pub deg_x: Option<usize>,
    /// Derivative order `b` and `β_b` selected by the minimizer.
    pub b: usize,
    pub beta_b: Value,
    pub minimizer: Minimizer,
    pub rows: Vec<FpRow>,
}

struct ThetaData {
    threshold: usize,
    split: PPowerSplit,
    l: XPoly,
    derivs: Vec<Poly>,
    h_theta: Poly,
    q_theta: Poly,
}

fn theta_data(s: &LimitScenario, theta: usize) -> Result<ThetaData> {
    let threshold = check_theta(s, theta)?;
    let l = s.big_l()?;
    let d = l.deg_x().unwrap_or(0);
    let h_theta = s.h(theta)?;
    Ok(ThetaData {
        threshold,
        split: ppower_split(d, s.p()),
        derivs: derivatives_at(&l, &h_theta)?,
        l,
        h_theta,
        q_theta: s.key(theta)?.clone(),
    })
}

/// `Σ_{i ∈ idx} c_i·g^i` with `c_0` always included.
fn p_power_sum(derivs: &[Poly], idx: &[usize], g: &Poly) -> Result<Poly> {
    let mut acc = derivs[0].clone();
    for &i in idx {
        acc = acc.add(&derivs[i].mul(&g.pow(i as u32)?)?)?;
    }
    Ok(acc)
}

/// `F_p = L(h_θ) + Σ_{i ∈ I} ∂_iL(h_θ) Q_θ^i` with its tail certificate.
pub fn construct_fp(s: &LimitScenario, theta: usize) -> Result<(Poly, FpCertificate)> {
    let td = theta_data(s, theta)?;
    let fp = p_power_sum(&td.derivs, &td.split.i, &td.q_theta)?;
    let degenerate = td.split.j.iter().all(|&j| td.derivs[j].is_zero());
    let deg_x = q_expand(&fp, &td.q_theta)?.deg_x();

    let h = s.horizon();
    let settled = betas_at(s, h)?;
    let pairs: Vec<(usize, Rat)> = settled
        .iter()
        .enumerate()
        .filter_map(|(i, b)| b.finite().map(|b| (i + 1, b)))
        .collect();
    let gammas = (theta + 1..=h)
        .map(|r| s.gamma(r)?.finite().ok_or(Error::Precondition("infinite gamma".into())))
        .collect::<Result<Vec<_>>>()?;
    let minimizer = kaplansky_minimizer(&MinimizerInput {
        pairs: pairs.iter().map(|&(i, b)| (b, i as u64)).collect(),
        gammas: GammaSeq::Explicit {
            start: (theta + 1) as u64,
            values: gammas,
        },
    })?;
    let (b, beta_b) = pairs[minimizer.b - 1];

    let mut rows = Vec::new();
    for rho in theta + 1..=h {
        let h_rho = s.h(rho)?;
        let l_at = compose_x(&td.l, &h_rho)?;
        let lp_at = p_power_sum(&td.derivs, &td.split.i, &h_rho.sub(&td.h_theta)?)?;
        let nu_l = s.nu(&l_at)?;
        let nu_lp = s.nu(&lp_at)?;
        let nu_diff = s.nu(&l_at.sub(&lp_at)?)?;
        let predicted = Value::Finite(beta_b).add(s.gamma(rho)?.scale(b as i64)?)?;
        let row = FpRow {
            rho,
            nu_l,
            nu_lp,
            nu_diff,
            predicted,
            dominance: nu_diff > nu_l,
        };
        if !row.dominance || nu_l != predicted || nu_lp != nu_l {
            return Err(Error::CertificateFailed {
                index: rho,
                details: format!(
                    "nu(L(h)) = {nu_l}, nu(L_p(h)) = {nu_lp}, nu(L(h) - L_p(h)) = {nu_diff}, beta_b + b*gamma = {predicted}"
                ),
            });
        }
        rows.push(row);
    }
    let monic = fp.is_monic();
    if !monic || deg_x != Some(td.split.d) {
        return Err(Error::CertificateFailed {
            index: theta,
            details: format!("F_p = {fp} is not monic of X-degree {}", td.split.d),
        });
    }
    Ok((
        fp,
        FpCertificate {
            theta,
            threshold: td.threshold,
            split: td.split,
            degenerate,
            monic,
            deg_x,
            b,
            beta_b: Value::Finite(beta_b),
            minimizer,
            rows,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantGapRow {
    pub i: usize,
    /// `ν_θ(∂_iL(h_θ) - a_{i0}) + iν(Q_θ)`.
    pub lhs: Value,
    pub bbar: Value,
}

impl ConstantGapRow {
    pub fn holds(&self) -> bool {
        self.lhs > self.bbar
    }
}

/// The bound `ν_θ(∂_iL(h_θ) - a_{θ0}(∂_iL(h_θ))) + iν(Q_θ) > B̄` for every `i`.
pub fn constant_gap_rows(s: &LimitScenario, theta: usize) -> Result<Vec<ConstantGapRow>> {
    let l = s.big_l()?;
    let q_theta = s.key(theta)?;
    let g = s.gamma(theta)?;
    let derivs = derivatives_at(&l, &s.h(theta)?)?;
    derivs
        .iter()
        .enumerate()
        .map(|(i, di)| {
            let a = a_rho0(di, q_theta)?;
            let nu = truncate(s.valuation(), &di.sub(&a)?, q_theta)?.value;
            Ok(ConstantGapRow {
                i,
                lhs: nu.add(g.scale(i as i64)?)?,
                bbar: s.declared_bbar(),
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpBarRow {
    pub rho: usize,
    /// `ν_ρ(F_p - F̄_p)`.
    pub nu_gap: Value,
    /// `ν_ρ(F)`.
    pub nu_f: Value,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpBarCertificate {
    pub theta: usize,
    pub split: PPowerSplit,
    /// `(i, a_i)` for `i ∈ I ∪ {0}`.
    pub coeffs: Vec<(usize, Poly)>,
    pub gaps: Vec<ConstantGapRow>,
    pub rows: Vec<FpBarRow>,
    pub top_is_one: bool,
}

/// `F̄_p = Σ_{i ∈ I ∪ {0}} a_i Q_θ^i` with `a_i = a_{θ0}(∂_iL(h_θ))`.
pub fn construct_fp_bar(s: &LimitScenario, theta: usize) -> Result<(Poly, FpBarCertificate)> {
    let td = theta_data(s, theta)?;
    let n = s.degree();
    let mut coeffs = Vec::new();
    for i in std::iter::once(0).chain(td.split.i.iter().copied()) {
        let a = a_rho0(&td.derivs[i], &td.q_theta)?;
        if a.degree().is_some_and(|dg| dg >= n) {
            return Err(Error::CertificateFailed {
                index: theta,
                details: format!("a_{i} = {a} has degree >= {n}"),
            });
        }
        coeffs.push((i, a));
    }
    let mut fbar = Poly::zero(s.field());
    for (i, a) in &coeffs {
        fbar = fbar.add(&a.mul(&td.q_theta.pow(*i as u32)?)?)?;
    }
    let top_is_one = coeffs.iter().find(|(i, _)| *i == td.split.d).is_some_and(|(_, a)| a.is_one());
    if !top_is_one || !fbar.is_monic() {
        return Err(Error::CertificateFailed {
            index: theta,
            details: format!("leading digit a_{} is not 1 in {fbar}", td.split.d),
        });
    }
    let gaps = constant_gap_rows(s, theta)?;
    if let Some(bad) = gaps.iter().find(|r| !r.holds()) {
        return Err(Error::CertificateFailed {
            index: theta,
            details: format!("bound fails for i = {}: {} <= {}", bad.i, bad.lhs, bad.bbar),
        });
    }
    let fp = p_power_sum(&td.derivs, &td.split.i, &td.q_theta)?;
    let gap = fp.sub(&fbar)?;
    let mut rows = Vec::new();
    for rho in theta + 1..=s.horizon() {
        let qr = s.key(rho)?;
        let nu_gap = truncate(s.valuation(), &gap, qr)?.value;
        let nu_f = truncate(s.valuation(), s.big_f(), qr)?.value;
        if !(nu_gap > s.declared_bbar() && s.declared_bbar() > nu_f) {
            return Err(Error::CertificateFailed {
                index: rho,
                details: format!("nu_rho(F_p - Fbar_p) = {nu_gap}, Bbar = {}, nu_rho(F) = {nu_f}", s.declared_bbar()),
            });
        }
        rows.push(FpBarRow { rho, nu_gap, nu_f });
    }
    Ok((
        fbar,
        FpBarCertificate {
            theta,
            split: td.split,
            coeffs,
            gaps,
            rows,
            top_is_one,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JGapRecord {
    pub i: usize,
    pub j: usize,
    pub beta_i: Value,
    pub beta_j: Value,
    /// Least index after which `β_i + iγ_σ < β_j + jγ_σ` holds on every
    /// listed `σ`; `None` if it fails at the last one.
    pub rho_star: Option<usize>,
    /// `β_i + iC < β_j + jC`.
    pub holds_at_c: bool,
}

impl JGapRecord {
    pub fn holds(&self) -> bool {
        self.rho_star.is_some() && self.holds_at_c
    }
}

/// Group-level form: explicit `β`s and `(index, γ)` pairs in increasing order.
pub fn j_gap_synthetic(
    (i, beta_i): (usize, Value),
    (j, beta_j): (usize, Value),
    gammas: &[(usize, Value)],
    c: Value,
) -> Result<JGapRecord> {
    if beta_j.is_infinite() {
        return Err(Error::VacuouslyTrue(format!("beta_{j} is infinite")));
    }
    let ok = |g: Value| -> Result<bool> {
        Ok(beta_i.add(g.scale(i as i64)?)? < beta_j.add(g.scale(j as i64)?)?)
    };
    let mut rho_star = None;
    for (pos, &(idx, g)) in gammas.iter().enumerate().rev() {
        if !ok(g)? {
            break;
        }
        rho_star = Some(if pos == 0 { idx.saturating_sub(1) } else { gammas[pos - 1].0 });
    }
    Ok(JGapRecord {
        i,
        j,
        beta_i,
        beta_j,
        rho_star,
        holds_at_c: ok(c)?,
    })
}

/// Scenario form for one admissible pair, using the settled `β`s and
/// `C = declared_B`.
pub fn j_gap(s: &LimitScenario, i: usize, j: usize) -> Result<JGapRecord> {
    let d = s.big_l()?.deg_x().unwrap_or(0);
    if !admissible_pairs(d, s.p()).contains(&(i, j)) {
        return Err(Error::Precondition(format!("({i}, {j}) is not an admissible pair for d = {d}")));
    }
    let settled = betas_at(s, s.horizon())?;
    let gammas = (s.q_index() + 1..=s.horizon())
        .map(|r| Ok((r, s.gamma(r)?)))
        .collect::<Result<Vec<_>>>()?;
    j_gap_synthetic((i, settled[i - 1]), (j, settled[j - 1]), &gammas, s.declared_b())
}

/// Every admissible pair of the scenario; `VacuouslyTrue` when there is none.
pub fn j_gaps(s: &LimitScenario) -> Result<Vec<Result<JGapRecord>>> {
    let d = s.big_l()?.deg_x().unwrap_or(0);
    let pairs = admissible_pairs(d, s.p());
    if pairs.is_empty() {
        return Err(Error::VacuouslyTrue(format!("no admissible pairs: {}", ppower_split(d, s.p()))));
    }
    Ok(pairs.into_iter().map(|(i, j)| j_gap(s, i, j)).collect())
}

/// Outcome of the group-level `J`-term check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupCheck {
    /// Derivative order attaining the eventual minimum.
    pub b: usize,
    pub in_i: bool,
    /// `(i, j, σ)` where `β_i ≤ β_j + (j - i)γ_σ` fails.
    pub violations: Vec<(usize, usize, u64)>,
}

/// Runs the minimizer on `(β_k, k)` for explicit `γ`s after checking the
/// constraint `β_i ≤ β_j + (j - i)γ_σ` on every admissible pair.
pub fn group_level_check(betas: &[(usize, Rat)], p: u64, start: u64, gammas: &[Rat]) -> Result<GroupCheck> {
    let d = betas.iter().map(|b| b.0).max().unwrap_or(0);
    let lookup = |k: usize| betas.iter().find(|b| b.0 == k).map(|b| b.1);
    let mut violations = Vec::new();
    for (i, j) in admissible_pairs(d, p) {
        let (Some(bi), Some(bj)) = (lookup(i), lookup(j)) else { continue };
        for (off, g) in gammas.iter().enumerate() {
            if bi > bj + *g * Rat::from_integer((j - i) as i64) {
                violations.push((i, j, start + off as u64));
            }
        }
    }
    let m = kaplansky_minimizer(&MinimizerInput {
        pairs: betas.iter().map(|&(k, b)| (b, k as u64)).collect(),
        gammas: GammaSeq::Explicit {
            start,
            values: gammas.to_vec(),
        },
    })?;
    let b = betas[m.b - 1].0;
    Ok(GroupCheck {
        b,
        in_i: ppower_split(d, p).i.contains(&b),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::valgroup::rat;

    fn as2() -> LimitScenario {
        LimitScenario::from_toml(include_str!("../../../scenarios/as2.scn")).unwrap()
    }

    #[test]
    fn split_examples() {
        assert_eq!(ppower_split(2, 2), PPowerSplit { d: 2, i: vec![1, 2], j: vec![] });
        assert_eq!(ppower_split(6, 2), PPowerSplit { d: 6, i: vec![1, 2, 4], j: vec![3, 5, 6] });
        assert_eq!(ppower_split(9, 3), PPowerSplit { d: 9, i: vec![1, 3, 9], j: vec![2, 4, 5, 6, 7, 8] });
        assert_eq!(admissible_pairs(6, 2), vec![(1, 3), (1, 5), (2, 6)]);
    }

    #[test]
    fn base_choice() {
        let s = as2();
        assert_eq!(choose_base_q(&s, 1).unwrap(), 3);
        assert_eq!(choose_base_q(&s, 3).unwrap(), 5);
        assert!(matches!(choose_base_q(&s, 8), Err(Error::HorizonExhausted(_))));
    }

    #[test]
    fn stability_examples() {
        let s = as2();
        let f = s.field();
        let r = is_stable_at_horizon(&s, &parse_poly(f, "x + t").unwrap()).unwrap();
        assert!(matches!(r, Stability::Stable { index: 1, .. }));
        assert_eq!(is_stable_at_horizon(&s, s.big_f()).unwrap(), Stability::UnstableAtHorizon);
        let r = is_stable_at_horizon(&s, &parse_poly(f, "t^-1").unwrap()).unwrap();
        assert!(matches!(r, Stability::Stable { index: 1, .. }));
    }

    #[test]
    fn fixedness_examples() {
        let s = as2();
        let f = s.field();
        let r = is_fixed(&s, &parse_poly(f, "x + t").unwrap()).unwrap();
        assert_eq!(r.witness, Some(4));
        assert_eq!(r.rows[0].nu_plus, Value::new(-1, 2));
        let r = is_fixed(&s, s.big_f()).unwrap();
        assert_eq!(r.witness, None);
        for row in &r.rows {
            assert_eq!(row.nu_plus, Value::new(-1, 1 << row.rho));
        }
        assert_eq!(is_fixed(&s, &parse_poly(f, "t").unwrap()).unwrap().witness, Some(4));
    }

    #[test]
    fn fp_constructions() {
        let s = as2();
        assert_eq!(tail_threshold(&s).unwrap(), 3);
        let (fp, cert) = construct_fp(&s, 5).unwrap();
        assert_eq!(&fp, s.big_f());
        assert!(cert.degenerate && cert.monic);
        assert_eq!(cert.deg_x, Some(2));
        assert_eq!(cert.b, 2);
        let (fbar, cert) = construct_fp_bar(&s, 5).unwrap();
        assert_eq!(&fbar, s.big_f());
        let digits: Vec<String> = cert.coeffs.iter().map(|(_, a)| a.to_string()).collect();
        assert_eq!(digits, ["t^(-1/32)", "1", "1"]);
        assert!(matches!(construct_fp(&s, 3), Err(Error::Precondition(_))));
        assert!(matches!(construct_fp(&s, 8), Err(Error::HorizonExhausted(_))));
    }

    #[test]
    fn j_gap_examples() {
        assert!(matches!(j_gaps(&as2()), Err(Error::VacuouslyTrue(_))));
        let gammas: Vec<(usize, Value)> = (1..=10).map(|k| (k, Value::new(-1, 1 << k))).collect();
        let bad = j_gap_synthetic((1, Value::zero()), (3, Value::from_int(-10)), &gammas, Value::zero()).unwrap();
        assert!(!bad.holds());
        let good = j_gap_synthetic((1, Value::zero()), (3, Value::from_int(2)), &gammas, Value::zero()).unwrap();
        assert_eq!(good.rho_star, Some(0));
        assert!(good.holds_at_c);
    }

    #[test]
    fn group_level_jterm_check() {
        let betas = [(1, rat(0, 1)), (2, rat(-10, 1)), (3, rat(1, 4))];
        let gammas: Vec<Rat> = (3..=12).map(|k| rat(-1, 1 << k)).collect();
        let g = group_level_check(&betas, 2, 3, &gammas).unwrap();
        assert!(g.violations.is_empty());
        assert_eq!(g.b, 2);
        assert!(g.in_i);
    }
}
