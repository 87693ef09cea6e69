//! Exact computations with rank-one valuations on a univariate polynomial
//! ring: expansions, truncations, the ε-invariant, stability of polynomials
//! along chains of key polynomials, and p-power rewrites of limit key
//! polynomials.

mod error;
pub mod expansion;
pub mod field;
pub mod limit;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod scenario;
pub mod valgroup;
pub mod valuation;

pub use error::{Error, Result};
pub use field::{FieldDescriptor, FieldElem, FieldKind, HahnSeries, RatFunc};
pub use parse::{parse_elem, parse_poly};
pub use poly::{compose_x, Poly, XPoly};
pub use valgroup::{kaplansky_minimizer, rat, Certification, GammaSeq, Minimizer, MinimizerInput, Rat, Value};
pub use expansion::{a_rho0, q_expand, truncate, QExpansion, TruncationReport};
pub use valuation::{ChainStep, EpsilonReport, KeyVerdict, PxValuation};
pub use scenario::{ChainSpec, CorpusEntry, LimitScenario, ScenarioFile, SeriesSpec, ValidationReport};
pub use limit::{
    admissible_pairs, choose_base_q, construct_fp, construct_fp_bar, is_fixed, is_stable_at_horizon, ppower_split,
    stable_fixed_agreement, AgreementRow, FixedReport, FpBarCertificate, FpCertificate, PPowerSplit, Stability,
};
pub use oracle::{run_all, run_check, CaseRecord, CheckId, CheckReport, Verdict};
