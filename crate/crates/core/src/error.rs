use thiserror::Error;

/// Why an interpolation formula does not exist for a parametrized family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NoFormulaReason {
    /// Two-node value/derivative sampling with `n ≡ a − b (mod 2)`.
    ParityExclusion,
    /// Difference-quotient sampling with `a − b` odd.
    OddOffset,
    /// Difference-quotient sampling with `ε ∈ ℤ \ {0}`.
    IntegerEpsilon,
    /// Difference-quotient sampling with `a − b` even and `|ε| ≥ 1`.
    LargeEpsilon,
    /// Power family whose base symbol is not injective on cosets of `ℤ/N`.
    NotInjective,
}

impl std::fmt::Display for NoFormulaReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            NoFormulaReason::ParityExclusion => "n and a-b have the same parity",
            NoFormulaReason::OddOffset => "case 1: a-b is odd",
            NoFormulaReason::IntegerEpsilon => "case 2: epsilon is a nonzero integer",
            NoFormulaReason::LargeEpsilon => "case 3: a-b is even and |epsilon| >= 1",
            NoFormulaReason::NotInjective => "base symbol is not injective on cosets of Z/N",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("x = {x} lies outside the open interval ({lo}, {hi})")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("spectral synthesis failed at x = {x}: {detail}")]
    Synthesis { x: f64, detail: String },

    #[error("no interpolation formula: {0}")]
    NoFormula(NoFormulaReason),

    #[error("invalid nodes: {0}")]
    InvalidNodes(String),

    #[error(
        "kernel quadrature at x = {x} is under-resolved (estimated error {estimated_error:.3e})"
    )]
    Accuracy {
        x: f64,
        estimated_error: f64,
        value: Vec<crate::C64>,
    },

    #[error("unknown operator type `{0}`")]
    UnknownOperator(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
