use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range input (dimensions, non-finite parameters,
    /// inconsistent lengths).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A numerical integrity check failed (Hermiticity, trace, residual
    /// imaginary part of an observable).
    #[error("integrity violation in {what}: defect {defect:.3e} exceeds tolerance {tol:.1e}")]
    Integrity {
        what: &'static str,
        defect: f64,
        tol: f64,
    },

    /// The gain channel leaks probability past the Fock-space truncation:
    /// the top raising amplitude is not negligible for this (g*tau, dim).
    #[error(
        "truncation leak: channel completeness defect {defect:.3e} exceeds {tol:.1e}; \
         enlarge the Fock dimension or move g*tau to a trapping value"
    )]
    TruncationLeak { defect: f64, tol: f64 },

    /// Block-state recurrence is undefined for an atom with beta = 0.
    #[error("degenerate atom: beta = 0 leaves the block recurrence undefined")]
    DegenerateAtom,

    /// A tan/cot pole fell inside the interior of a block, which signals a
    /// misclassified or invalid trapping block.
    #[error("trig pole at n = {n} inside block [{n_low}, {n_high}]: block is misclassified")]
    PoleInBlock {
        n: usize,
        n_low: usize,
        n_high: usize,
    },

    /// A block is not a valid tangent or cotangent block (parity rule failed
    /// or no trapping boundary closes it); state construction is refused.
    #[error("block [{n_low}, {n_high}] is not a tangent or cotangent block")]
    UnclassifiedBlock { n_low: usize, n_high: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
