use thiserror::Error;

use crate::blowup::BlowupTree;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Variants map onto CLI exit codes through [`Error::exit_code`].
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("elements live in different rings: {0} vs {1}")]
    RingMismatch(String, String),
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("ring {0} is not of the form k[..]/(eps^h)")]
    NotPtmRing(String),
    #[error("element {0} is not a unit")]
    NotUnit(String),
    #[error("zero input")]
    ZeroInput,
    #[error("ill-defined ring map: {0}")]
    IllDefinedMap(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("bad center: {0}")]
    BadCenter(String),
    #[error("chart `{0}` is not a ptm chart of thickness at least 2")]
    NotPtm(String),
    #[error("divisor is not monomial: {0}")]
    NonMonomialDivisor(String),
    #[error("`{0}` is not a boundary variable")]
    NotBoundaryVariable(String),
    #[error("center is not admissible: {0}")]
    NotAdmissible(String),
    #[error("input is not monomial: {0}")]
    NonMonomialInput(String),
    #[error("fuel exhausted after {steps} blowups")]
    FuelExhausted {
        steps: usize,
        partial: Box<BlowupTree>,
    },
    #[error("oracle failure: {0}")]
    OracleFailure(String),
    #[error("subscheme is dense on chart `{0}`")]
    NotNowhereDense(String),
    #[error("reduction of the divisor is not boundary-monomial on chart `{0}`")]
    ReductionNotMonomial(String),
    #[error("not a modification with trivial reduction: {0}")]
    NotTrivialReduction(String),
    #[error("nil ratio is not boundary-monomial: {0}")]
    NotBoundaryMonomial(String),
    #[error("replayed splitting does not match: {0}")]
    SplitMismatch(String),
    #[error("retract coefficient has a non-monomial denominator: {0}")]
    NonMonomialDenominator(String),
    #[error("retract invariant did not drop: {0}")]
    InvariantNotDropping(String),
    #[error("retract is not regular on chart `{0}`")]
    RetractNotRegular(String),
    #[error("chart `{0}` carries no pi")]
    MissingPi(String),
    #[error("not generically smooth over B: {0}")]
    NotGenericallySmooth(String),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            msg: msg.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::FuelExhausted { .. } => 4,
            _ => 3,
        }
    }
}
