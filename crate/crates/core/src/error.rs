use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} index {index} out of range")]
    IndexOutOfRange { what: &'static str, index: usize },

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("momentum magnitude must be non-negative, got {0}")]
    NegativeMomentum(f64),

    #[error("angle {name} = {value} outside its range")]
    AngleOutOfRange { name: &'static str, value: f64 },

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("momentum grid is not closed under p -> -p (no partner for entry {0})")]
    GridNotClosed(usize),

    #[error("zero momentum in grid at entry {0}")]
    ZeroMomentum(usize),

    #[error("duplicate momentum in grid at entries {0} and {1}")]
    DuplicateMomentum(usize, usize),

    #[error("grid momenta must share one mass (entry {index} has {found}, expected {expected})")]
    MassMismatch {
        index: usize,
        found: f64,
        expected: f64,
    },

    #[error("{0} modes exceed the supported Fock space size")]
    FockTooLarge(usize),

    #[error("mode {0} is not part of the mode set")]
    UnknownMode(String),

    #[error("momentum not found in the grid")]
    MomentumNotInGrid,

    #[error("{0} spinors do not individually satisfy the Dirac equation")]
    BasisMismatch(&'static str),

    #[error("no charge-conjugation generator reproduces the ladder table (best residual {best_residual:e})")]
    ChargeTuningFailed { best_residual: f64 },

    #[error("generator is not a sum of disjoint pair rotations: {0}")]
    NotPairGenerator(String),
}
