//! Desk-scale verification toolkit for the plethysm conjectures of Stanley
//! and Foulkes.
//!
//! The crate enumerates equivalence classes of tableau fillings (horizontal
//! and vertical tableaux, i.e. set partitions with prescribed block sizes),
//! builds the 0/1 orthogonality matrices `K_λ` and the Black–List dissection
//! matrices `M^{m,n}`, computes their exact ranks over prime fields and over
//! the rationals, and mechanically checks the combinatorial identities behind
//! the `2×n` linear-independence argument.
//!
//! Modules follow the pipeline:
//!
//! * [`partitions`] — integer partitions, conjugation, dominance order;
//! * [`tableaux`] — canonical tableau enumeration and exact counting;
//! * [`ortho`] — orthogonality predicates and matrix construction/export;
//! * [`exactlinalg`] — rank over prime fields, fraction-free exact rank,
//!   and the certification policy combining them;
//! * [`proofcheck`] — the partial-tableau, coefficient and induction-chain
//!   identities for the `2×n` case;
//! * [`conjectures`] — verdict assembly for the CLI and other front ends.

pub mod conjectures;
pub mod exactlinalg;
pub mod ortho;
pub mod partitions;
pub mod proofcheck;
pub mod report;
pub mod tableaux;

use std::path::PathBuf;

/// Largest ground set `{1,…,N}` the bit-set block representation supports.
pub const MAX_GROUND_SET: usize = 64;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid partition {0:?}: parts must be positive and weakly decreasing")]
    InvalidPartition(Vec<usize>),

    #[error("cannot compare partitions of {left} and {right}")]
    WeightMismatch { left: usize, right: usize },

    #[error("ground set of size {n} exceeds the supported maximum {max}")]
    GroundSetTooLarge { n: usize, max: usize },

    #[error("mismatched ground sets: {left} vs {right}")]
    GroundSetMismatch { left: usize, right: usize },

    #[error("enumeration of {count} tableaux exceeds the cap of {cap}")]
    EnumerationCap { count: String, cap: u64 },

    #[error("{rows}x{cols} matrix exceeds the exact-method cap of {cap}x{cap}")]
    ExactCap { rows: usize, cols: usize, cap: usize },

    #[error("width {n} exceeds the identity-suite limit of {max}")]
    VerifyProofLimit { n: usize, max: usize },

    #[error("modulus {0} is not prime")]
    NonPrimeModulus(u64),

    #[error("modulus {0} is not below 2^31")]
    ModulusTooLarge(u64),

    #[error("row {index} has {got} entries, expected {expected}")]
    RowLength {
        index: usize,
        got: usize,
        expected: usize,
    },

    #[error("cannot parse {what} from {input:?}: {msg} at position {pos}")]
    Parse {
        what: &'static str,
        input: String,
        msg: String,
        pos: usize,
    },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for errors caused by configured resource caps rather than by
    /// malformed input; the CLI maps these to the "undetermined" exit code.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::EnumerationCap { .. }
                | Error::ExactCap { .. }
                | Error::GroundSetTooLarge { .. }
                | Error::VerifyProofLimit { .. }
        )
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
