use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use keypoly_core::{
    choose_base_q, construct_fp, construct_fp_bar, is_fixed, is_stable_at_horizon, oracle, parse_poly, q_expand,
    truncate, CheckId, Error, FieldDescriptor, LimitScenario, Poly, PxValuation, Stability, Value,
};

#[derive(Parser, Debug)]
#[command(name = "keypoly", version, about = "Key polynomials, truncations and limit-key rewrites")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Valuation of a polynomial.
    Eval(PolyArgs),
    /// The invariant ε(f) and its attaining set.
    Epsilon(PolyArgs),
    /// Base-Q digit expansion.
    Expand(KeyArgs),
    /// Truncation ν_Q with S_Q and δ_Q.
    Truncate(KeyArgs),
    /// First chain index whose truncation computes ν(f).
    Stable(PolyArgs),
    /// Scan for ν(f) = ν(l(h_ρ)) against the base key.
    Fixed(PolyArgs),
    /// Index of the base key Q chosen from Q_0.
    ChooseQ(ChooseArgs),
    /// The rewrite F_p with its certificate.
    ConstructFp(ThetaArgs),
    /// The rewrite F̄_p with its certificate.
    ConstructFpBar(ThetaArgs),
    /// Run one check of the catalog, or all of them.
    Verify(VerifyArgs),
    /// Report scenario consistency issues.
    Validate(ScenarioArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Scenario file; supplies field, valuation and chain.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Field when no scenario is given: F2, F3(t), F2(t^Q), Q, Q_5.
    #[arg(long)]
    field: Option<String>,
    /// Valuation prime for `--field Q`.
    #[arg(long, default_value_t = 2)]
    prime: u64,
    /// Gauss valuation parameter ν(x) when no scenario is given.
    #[arg(long, default_value = "0")]
    mu: String,
    #[arg(long, value_enum, default_value_t = Output::Pretty)]
    output: Output,
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct PolyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    poly: String,
}

#[derive(Args, Debug)]
struct KeyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    poly: String,
    /// Expansion base as a literal.
    #[arg(long, conflicts_with = "q_index")]
    q: Option<String>,
    /// Expansion base as a chain index of the scenario.
    #[arg(long)]
    q_index: Option<usize>,
}

#[derive(Args, Debug)]
struct ChooseArgs {
    #[command(flatten)]
    common: Common,
    /// Defaults to the scenario's Q0 index.
    #[arg(long)]
    q0_index: Option<usize>,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    #[command(flatten)]
    common: Common,
    /// Defaults to the scenario's theta.
    #[arg(long)]
    theta: Option<usize>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// A check id such as L22, or `all`.
    check: String,
    /// Also print one line per case.
    #[arg(long)]
    cases: bool,
    /// Defaults to the scenario's theta.
    #[arg(long)]
    theta: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Pretty,
    Lines,
}

enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Run<T> = Result<T, Failure>;

/// A headline plus labelled detail rows.
struct Report {
    head: Vec<String>,
    details: Vec<(String, String)>,
    ok: bool,
}

impl Report {
    fn new(head: impl Into<String>) -> Self {
        Report {
            head: vec![head.into()],
            details: Vec::new(),
            ok: true,
        }
    }

    fn detail(&mut self, key: impl Into<String>, value: impl ToString) {
        self.details.push((key.into(), value.to_string()));
    }

    fn render(&self, mode: Output) -> String {
        let mut out = String::new();
        for h in &self.head {
            out.push_str(h);
            out.push('\n');
        }
        for (k, v) in &self.details {
            match mode {
                Output::Pretty => out.push_str(&format!("  {k}: {v}\n")),
                Output::Lines => out.push_str(&format!("{k} {v}\n")),
            }
        }
        out
    }
}

struct Ctx {
    scenario: Option<LimitScenario>,
    field: FieldDescriptor,
    valuation: PxValuation,
}

impl Ctx {
    fn load(c: &Common, validate: bool) -> Run<Self> {
        if let Some(path) = &c.scenario {
            let s = LimitScenario::load(path)?;
            if validate {
                s.ensure_valid()?;
            }
            return Ok(Ctx {
                field: s.field(),
                valuation: s.valuation().clone(),
                scenario: Some(s),
            });
        }
        let name = c
            .field
            .as_deref()
            .ok_or_else(|| Failure::Usage("either --scenario or --field is required".into()))?;
        let field = FieldDescriptor::parse(name, c.prime)?;
        let mu: Value = c.mu.parse()?;
        Ok(Ctx {
            scenario: None,
            field,
            valuation: PxValuation::gauss(field, mu)?,
        })
    }

    fn scenario(&self) -> Run<&LimitScenario> {
        self.scenario
            .as_ref()
            .ok_or_else(|| Failure::Usage("this command needs --scenario".into()))
    }

    fn poly(&self, text: &str) -> Run<Poly> {
        Ok(parse_poly(self.field, text)?)
    }

    fn key(&self, a: &KeyArgs) -> Run<Poly> {
        match (&a.q, a.q_index) {
            (Some(q), _) => self.poly(q),
            (None, Some(k)) => Ok(self.scenario()?.key(k)?.clone()),
            (None, None) => Err(Failure::Usage("one of --q or --q-index is required".into())),
        }
    }
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn eval(a: &PolyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let f = ctx.poly(&a.poly)?;
    let mut r = Report::new(format!("nu = {}", ctx.valuation.nu(&f)?));
    r.detail("poly", &f);
    r.detail("field", ctx.field);
    Ok(r)
}

fn epsilon(a: &PolyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let f = ctx.poly(&a.poly)?;
    let e = ctx.valuation.epsilon(&f)?;
    let mut r = Report::new(e.to_string());
    for row in &e.rows {
        let q = row.quotient.map_or("undefined".to_string(), |q| q.to_string());
        r.detail(format!("b{}", row.b), format!("nu = {}; quotient = {q}", row.nu_derivative));
    }
    Ok(r)
}

fn expand(a: &KeyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let f = ctx.poly(&a.poly)?;
    let q = ctx.key(a)?;
    let e = q_expand(&f, &q)?;
    let mut r = Report::new(format!("a = [{}]", join(e.coeffs())));
    r.detail("q", &q);
    r.detail("deg_X", e.deg_x().map_or("none".into(), |d| d.to_string()));
    Ok(r)
}

fn truncate_cmd(a: &KeyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let f = ctx.poly(&a.poly)?;
    let q = ctx.key(a)?;
    let t = truncate(&ctx.valuation, &f, &q)?;
    let mut r = Report::new(t.to_string());
    r.detail("q", &q);
    r.detail("terms", format!("[{}]", join(&t.terms)));
    r.detail("nu", ctx.valuation.nu(&f)?);
    Ok(r)
}

fn stable(a: &PolyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let s = ctx.scenario()?;
    let f = ctx.poly(&a.poly)?;
    let mut r = match is_stable_at_horizon(s, &f)? {
        Stability::Stable { index, report } => {
            let mut r = Report::new(format!("stable at Q{index}"));
            r.detail("truncation", report);
            r
        }
        Stability::UnstableAtHorizon => Report::new(format!("unstable through horizon {}", s.horizon())),
    };
    r.detail("nu", s.nu(&f)?);
    Ok(r)
}

fn fixed(a: &PolyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let s = ctx.scenario()?;
    let f = ctx.poly(&a.poly)?;
    let rep = is_fixed(s, &f)?;
    let mut r = Report::new(match rep.witness {
        Some(rho) => format!("fixed at rho = {rho}"),
        None => format!("not fixed through horizon {}", s.horizon()),
    });
    r.detail("nu", rep.nu_f);
    r.detail("base", format!("Q{}", s.q_index()));
    for row in &rep.rows {
        r.detail(
            format!("rho{}", row.rho),
            format!("nu(l(h)) = {}; nu(l(-h)) = {}", row.nu_plus, row.nu_minus),
        );
    }
    Ok(r)
}

fn choose_q(a: &ChooseArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let s = ctx.scenario()?;
    let q0 = a.q0_index.unwrap_or(s.q0_index());
    let k = choose_base_q(s, q0)?;
    let mut r = Report::new(format!("q = {k}"));
    r.detail("q0", q0);
    r.detail("Q", s.key(k)?);
    Ok(r)
}

fn construct_fp_cmd(a: &ThetaArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let s = ctx.scenario()?;
    let theta = a.theta.unwrap_or(s.theta());
    let (fp, cert) = construct_fp(s, theta)?;
    let mut r = Report::new(format!("F_p = {fp}"));
    r.detail("theta", cert.theta);
    r.detail("threshold", cert.threshold);
    r.detail("split", &cert.split);
    r.detail("degenerate", cert.degenerate);
    r.detail("monic", cert.monic);
    r.detail("deg_X", cert.deg_x.map_or("none".into(), |d| d.to_string()));
    r.detail("b", cert.b);
    r.detail("beta_b", cert.beta_b);
    r.detail("minimizer_rho", cert.minimizer.rho);
    for row in &cert.rows {
        r.detail(
            format!("rho{}", row.rho),
            format!(
                "nu(L) = {}; nu(L_p) = {}; nu(diff) = {}; predicted = {}; dominance = {}",
                row.nu_l, row.nu_lp, row.nu_diff, row.predicted, row.dominance
            ),
        );
    }
    r.ok = cert.monic && cert.rows.iter().all(|row| row.dominance);
    Ok(r)
}

fn construct_fp_bar_cmd(a: &ThetaArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let s = ctx.scenario()?;
    let theta = a.theta.unwrap_or(s.theta());
    let (fb, cert) = construct_fp_bar(s, theta)?;
    let mut r = Report::new(format!("Fbar_p = {fb}"));
    r.detail("theta", cert.theta);
    r.detail("split", &cert.split);
    for (i, c) in &cert.coeffs {
        r.detail(format!("a{i}"), c);
    }
    r.detail("top_is_one", cert.top_is_one);
    for row in &cert.gaps {
        r.detail(format!("gap{}", row.i), format!("{} vs {}", row.lhs, row.bbar));
    }
    for row in &cert.rows {
        r.detail(format!("rho{}", row.rho), format!("nu(F_p - Fbar_p) = {}; nu(F) = {}", row.nu_gap, row.nu_f));
    }
    r.ok = cert.top_is_one && cert.gaps.iter().all(|row| row.holds());
    Ok(r)
}

fn verify(a: &VerifyArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, true)?;
    let s = ctx.scenario()?;
    let ids: Vec<CheckId> = if a.check.eq_ignore_ascii_case("all") {
        CheckId::ALL.to_vec()
    } else {
        vec![a.check.parse()?]
    };
    let corpus = s.corpus();
    let theta = a.theta.unwrap_or(s.theta());
    let mut r = Report {
        head: Vec::new(),
        details: Vec::new(),
        ok: true,
    };
    for id in ids {
        let rep = oracle::run_check(id, s, &corpus, theta)?;
        if a.cases {
            r.head.extend(rep.case_lines());
        }
        r.head.push(rep.summary_line());
        r.ok &= rep.passed();
    }
    Ok(r)
}

fn validate(a: &ScenarioArgs) -> Run<Report> {
    let ctx = Ctx::load(&a.common, false)?;
    let s = ctx.scenario()?;
    let v = s.validate();
    let mut r = Report::new(if v.is_valid() { "valid" } else { "invalid" });
    for issue in &v.issues {
        r.detail(format!("issue{}", issue.index), &issue.reason);
    }
    r.detail("gammas", format!("[{}]", join(&v.gammas)));
    r.ok = v.is_valid();
    Ok(r)
}

fn dispatch(cmd: &Command) -> (Output, Run<Report>) {
    match cmd {
        Command::Eval(a) => (a.common.output, eval(a)),
        Command::Epsilon(a) => (a.common.output, epsilon(a)),
        Command::Expand(a) => (a.common.output, expand(a)),
        Command::Truncate(a) => (a.common.output, truncate_cmd(a)),
        Command::Stable(a) => (a.common.output, stable(a)),
        Command::Fixed(a) => (a.common.output, fixed(a)),
        Command::ChooseQ(a) => (a.common.output, choose_q(a)),
        Command::ConstructFp(a) => (a.common.output, construct_fp_cmd(a)),
        Command::ConstructFpBar(a) => (a.common.output, construct_fp_bar_cmd(a)),
        Command::Verify(a) => (a.common.output, verify(a)),
        Command::Validate(a) => (a.common.output, validate(a)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, result) = dispatch(&cli.command);
    match result {
        Ok(report) => {
            print!("{}", report.render(mode));
            ExitCode::from(if report.ok { 0 } else { 1 })
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_parse() { 2 } else { 1 })
        }
    }
}
