//! Named checks: the series congruences, the proof-chain steps behind them,
//! Carlitz's identity and the classical integer congruences.
//!
//! Every check returns a [`CheckResult`] decided by exact arithmetic. A
//! [`Verifier`] carries the shared read-only state (cyclotomic table and the
//! size above which congruences move to the cyclic residue ring).

mod carlitz;
mod chain;
mod classical;
mod series;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::congruence::eval::{EvalError, Evaluator, ExactEvaluator, Expr, ResidueEvaluator};
use crate::congruence::{CongruenceVerdict, Valuation};
use crate::cyclotomic::{cyclotomic, FrozenCyclotomics};
use crate::poly::PolyError;
use crate::qseries::MonomialParam;
use crate::IntPoly;

pub use carlitz::{carlitz_random_specializations, CARLITZ_A_GRID, CARLITZ_B_GRID};
pub use chain::chain_steps;
pub use chain::{a_nk, b_nk, c_nk, qpow_lemma_exponents, Section};
pub use classical::{
    central_binomial_sum, classical_check, p_adic_valuation, q_to_1_consistency, ClassicalParams,
    Q_TO_ONE_MAX,
};
pub use series::{series_lhs, series_rhs, series_terms};

/// Default largest `n` decided with exact fractions; larger `n` use the
/// residue ring.
pub const DEFAULT_EXACT_UP_TO: u64 = 60;

/// Identifier of a check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Anew3,
    Anew4,
    Anew5,
    Anew6,
    WangYu(i64),
    A1,
    A2,
    B1,
    C1,
    Carlitz,
    CarlitzRandom,
    B2Identity,
    C2Identity,
    RatioIdentity,
    QbinomNegk,
    B3,
    B4,
    B5,
    B8,
    MorleyB9,
    B10,
    CentralQbinom,
    B11,
    B12,
    B13,
    B14,
    B15,
    B16,
    B18,
    B19,
    B20,
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
    C11,
    QpowLemma(i64),
    SunTauraso,
    Sun,
    QToOne,
}

impl CheckId {
    /// Stable registry name.
    pub fn name(self) -> &'static str {
        use CheckId::*;
        match self {
            Anew3 => "anew3",
            Anew4 => "anew4",
            Anew5 => "anew5",
            Anew6 => "anew6",
            WangYu(_) => "wang-yu",
            A1 => "a1",
            A2 => "a2",
            B1 => "b1",
            C1 => "c1",
            Carlitz => "carlitz",
            CarlitzRandom => "carlitz-random",
            B2Identity => "b2-identity",
            C2Identity => "c2-identity",
            RatioIdentity => "ratio-identity",
            QbinomNegk => "qbinom-negk",
            B3 => "b3",
            B4 => "b4",
            B5 => "b5",
            B8 => "b8",
            MorleyB9 => "morley-b9",
            B10 => "b10",
            CentralQbinom => "central-qbinom",
            B11 => "b11",
            B12 => "b12",
            B13 => "b13",
            B14 => "b14",
            B15 => "b15",
            B16 => "b16",
            B18 => "b18",
            B19 => "b19",
            B20 => "b20",
            C3 => "c3",
            C4 => "c4",
            C5 => "c5",
            C6 => "c6",
            C7 => "c7",
            C8 => "c8",
            C9 => "c9",
            C10 => "c10",
            C11 => "c11",
            QpowLemma(_) => "qpow-lemma",
            SunTauraso => "sun-tauraso",
            Sun => "sun",
            QToOne => "q-to-1",
        }
    }

    /// Modulus power the congruence is stated with; 0 for exact identities.
    pub fn native_power(self) -> u32 {
        use CheckId::*;
        match self {
            Anew3 | Anew5 | Anew6 | WangYu(_) | QbinomNegk | B13 | SunTauraso => 1,
            Carlitz | CarlitzRandom | B2Identity | C2Identity | RatioIdentity | C3 => 0,
            _ => 2,
        }
    }

    /// The series checks with a closed-form right-hand side.
    pub fn is_series(self) -> bool {
        use CheckId::*;
        matches!(
            self,
            Anew3 | Anew4 | Anew5 | Anew6 | WangYu(_) | A1 | A2 | B1 | C1
        )
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckId::WangYu(d) => write!(f, "wang-yu(d={d})"),
            CheckId::QpowLemma(s) => write!(f, "qpow-lemma(s={s})"),
            id => f.write_str(id.name()),
        }
    }
}

/// What a registry name refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Registered {
    /// A series check; `wang-yu` needs a `d` parameter.
    Series(CheckId),
    Carlitz,
    ProofChain(Section),
    /// A single proof step; `qpow-lemma` needs an `s` parameter.
    Step(CheckId),
    Classical(u32),
}

/// Every name accepted by [`resolve`].
pub const REGISTRY_NAMES: &[&str] = &[
    "a1",
    "a2",
    "b1",
    "c1",
    "anew3",
    "anew4",
    "anew5",
    "anew6",
    "wang-yu",
    "carlitz",
    "proof-chain-s2",
    "proof-chain-s3",
    "sun-tauraso",
    "sun",
    "b2-identity",
    "qbinom-negk",
    "b3",
    "b4",
    "b5",
    "b8",
    "morley-b9",
    "b10",
    "ratio-identity",
    "central-qbinom",
    "b11",
    "b12",
    "b13",
    "b14",
    "b15",
    "b16",
    "qpow-lemma",
    "b18",
    "b19",
    "b20",
    "c2-identity",
    "c3",
    "c4",
    "c5",
    "c6",
    "c7",
    "c8",
    "c9",
    "c10",
    "c11",
];

/// Looks up a registry name.
pub fn resolve(name: &str) -> Option<Registered> {
    use CheckId::*;
    let step = |id| Some(Registered::Step(id));
    match name {
        "a1" => Some(Registered::Series(A1)),
        "a2" => Some(Registered::Series(A2)),
        "b1" => Some(Registered::Series(B1)),
        "c1" => Some(Registered::Series(C1)),
        "anew3" => Some(Registered::Series(Anew3)),
        "anew4" => Some(Registered::Series(Anew4)),
        "anew5" => Some(Registered::Series(Anew5)),
        "anew6" => Some(Registered::Series(Anew6)),
        "wang-yu" => Some(Registered::Series(WangYu(0))),
        "carlitz" => Some(Registered::Carlitz),
        "proof-chain-s2" => Some(Registered::ProofChain(Section::Two)),
        "proof-chain-s3" => Some(Registered::ProofChain(Section::Three)),
        "sun-tauraso" => Some(Registered::Classical(1)),
        "sun" => Some(Registered::Classical(2)),
        "b2-identity" => step(B2Identity),
        "qbinom-negk" => step(QbinomNegk),
        "b3" => step(B3),
        "b4" => step(B4),
        "b5" => step(B5),
        "b8" => step(B8),
        "morley-b9" => step(MorleyB9),
        "b10" => step(B10),
        "ratio-identity" => step(RatioIdentity),
        "central-qbinom" => step(CentralQbinom),
        "b11" => step(B11),
        "b12" => step(B12),
        "b13" => step(B13),
        "b14" => step(B14),
        "b15" => step(B15),
        "b16" => step(B16),
        "qpow-lemma" => step(QpowLemma(1)),
        "b18" => step(B18),
        "b19" => step(B19),
        "b20" => step(B20),
        "c2-identity" => step(C2Identity),
        "c3" => step(C3),
        "c4" => step(C4),
        "c5" => step(C5),
        "c6" => step(C6),
        "c7" => step(C7),
        "c8" => step(C8),
        "c9" => step(C9),
        "c10" => step(C10),
        "c11" => step(C11),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("the prime 2 is excluded")]
    EvenPrimeRejected,
    #[error("a term has a pole at q = 1")]
    PoleAtPoint,
    #[error("evaluation failed: {0}")]
    Eval(#[from] EvalError),
}

impl From<PolyError> for CheckError {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::PoleAtPoint => CheckError::PoleAtPoint,
            other => CheckError::Domain(other.to_string()),
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> CheckError {
    CheckError::Domain(msg.into())
}

/// A parameter value attached to a result.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ParamValue {
    Int(i64),
    Text(String),
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Text(s) => f.write_str(s),
        }
    }
}

/// Outcome of one check at one size.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: CheckId,
    /// `n`, or `p^r` for the classical checks.
    pub n: u64,
    /// Modulus power tested; 0 for exact identities.
    pub power: u32,
    pub params: BTreeMap<&'static str, ParamValue>,
    pub holds: bool,
    pub valuation: Valuation,
    /// The valuation is only known to be at least the reported value.
    pub valuation_is_lower_bound: bool,
    pub elapsed: Duration,
    pub detail: String,
}

impl CheckResult {
    fn new(id: CheckId, n: u64, power: u32) -> Self {
        let mut params = BTreeMap::new();
        match id {
            CheckId::WangYu(d) => {
                params.insert("d", ParamValue::Int(d));
            }
            CheckId::QpowLemma(s) => {
                params.insert("s", ParamValue::Int(s));
            }
            _ => {}
        }
        CheckResult {
            id,
            n,
            power,
            params,
            holds: false,
            valuation: Valuation::Finite(0),
            valuation_is_lower_bound: false,
            elapsed: Duration::ZERO,
            detail: String::new(),
        }
    }

    fn with_verdict(mut self, v: CongruenceVerdict) -> Self {
        self.holds = v.holds;
        self.valuation = v.valuation;
        self.valuation_is_lower_bound = v.valuation_is_lower_bound;
        if !v.denominator_coprime {
            self.detail = "denominator not coprime to Φ_n".into();
        }
        self
    }

    fn param(mut self, key: &'static str, value: ParamValue) -> Self {
        self.params.insert(key, value);
        self
    }

    fn timed(mut self, start: Instant) -> Self {
        self.elapsed = start.elapsed();
        self
    }
}

/// How a comparison is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    /// Exact equality in ℚ(q).
    Identity,
    /// Congruence modulo `Φ_n^m`.
    Congruence(u32),
}

/// Which engine decided a comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Engine {
    Exact,
    Residue,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Exact => "exact",
            Engine::Residue => "residue",
        })
    }
}

/// Shared context for running checks.
#[derive(Clone, Debug)]
pub struct Verifier {
    cyclotomics: FrozenCyclotomics,
    exact_up_to: u64,
}

impl Default for Verifier {
    fn default() -> Self {
        Verifier {
            cyclotomics: FrozenCyclotomics::default(),
            exact_up_to: DEFAULT_EXACT_UP_TO,
        }
    }
}

impl Verifier {
    pub fn new(cyclotomics: FrozenCyclotomics) -> Self {
        Verifier {
            cyclotomics,
            ..Self::default()
        }
    }

    /// Congruences with `n` above the threshold use the residue ring.
    pub fn with_exact_threshold(mut self, exact_up_to: u64) -> Self {
        self.exact_up_to = exact_up_to;
        self
    }

    pub fn exact_threshold(&self) -> u64 {
        self.exact_up_to
    }

    pub(crate) fn phi(&self, n: u64) -> IntPoly {
        if self.cyclotomics.contains(n) {
            self.cyclotomics.phi(n).into_owned()
        } else {
            cyclotomic(n)
        }
    }

    pub(crate) fn exact(&self, n: u64) -> ExactEvaluator {
        ExactEvaluator::new(n, self.phi(n))
    }

    /// Decides one comparison, falling back to exact fractions when the
    /// residue ring cannot represent an operand.
    pub(crate) fn decide(
        &self,
        n: u64,
        lhs: &Expr,
        rhs: &Expr,
        mode: Mode,
    ) -> Result<(CongruenceVerdict, Engine), CheckError> {
        match mode {
            Mode::Identity => {
                let v = self.exact(n).congruence(lhs, rhs, 0)?;
                let mut v = v;
                v.holds = v.valuation.is_infinite();
                Ok((v, Engine::Exact))
            }
            Mode::Congruence(m) => {
                if n > self.exact_up_to {
                    let residue = ResidueEvaluator::new(n, m, self.phi(n));
                    match residue.congruence(lhs, rhs, m) {
                        Ok(v) => return Ok((v, Engine::Residue)),
                        Err(
                            EvalError::NonUnitDenominator { .. }
                            | EvalError::NegativeValuation { .. },
                        ) => {}
                        Err(e) => return Err(e.into()),
                    }
                }
                Ok((self.exact(n).congruence(lhs, rhs, m)?, Engine::Exact))
            }
        }
    }
}

pub(crate) fn require_odd(n: u64, min: u64) -> Result<(), CheckError> {
    if n.is_multiple_of(2) {
        return Err(domain(format!("n = {n} is even; only odd n are supported")));
    }
    if n < min {
        return Err(domain(format!("n = {n} is below the minimum {min}")));
    }
    Ok(())
}

pub(crate) fn require_power(m: u32) -> Result<(), CheckError> {
    if m == 1 || m == 2 {
        Ok(())
    } else {
        Err(domain(format!("modulus power {m} is not 1 or 2")))
    }
}

/// `(-1)^e` as an integer.
pub(crate) fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

pub(crate) fn monomial_text(a: MonomialParam) -> ParamValue {
    ParamValue::Text(a.to_string())
}
