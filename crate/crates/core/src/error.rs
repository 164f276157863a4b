use thiserror::Error;

use crate::exchange::RootVector;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not rectangular: row {row} has {found} entries, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("extended matrix has {rows} rows but {cols} columns; need rows >= cols")]
    TooFewRows { rows: usize, cols: usize },
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not skew-symmetrizable ({0})")]
    NotSkewSymmetrizable(String),
    #[error("quiver has a directed cycle")]
    NotAcyclic,
    #[error("matrix is not of classical type A/B/C/D ({0})")]
    NotClassicalType(String),
    #[error("{family}{rank} is not a valid Cartan type")]
    InvalidCartanType { family: char, rank: usize },
    #[error("matrix does not match the canonical labeling of {0}")]
    NotCanonical(String),
    #[error("{root} is not a positive root of {cartan}")]
    RootNotInType { root: RootVector, cartan: String },
    #[error("polynomial division is not exact")]
    NotDivisible,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("negative power of non-monomial image for variable {0}")]
    NegativeExponentOnNonMonomial(usize),
    #[error("Laurent phenomenon violated while mutating in direction {0}")]
    LaurentPhenomenonViolation(usize),
    #[error("not a polynomial in the coefficient variables")]
    NotPolynomial,
    #[error("F-polynomial constant term is {0}, expected 1")]
    NoConstantTerm(i64),
    #[error("g-vector is ambiguous: {0} y-free terms")]
    AmbiguousGVector(usize),
    #[error("seed enumeration exceeded cap of {0} seeds")]
    CapExceeded(usize),
    #[error("enumeration missed positive root {0}")]
    MissingRoot(RootVector),
    #[error("enumeration found denominator vector {0} outside the positive roots")]
    ExtraRoot(RootVector),
    #[error("matrix is not invariant under the folding group")]
    NotInvariant,
    #[error("matrix is not admissible for the folding group")]
    NotAdmissible,
    #[error("wrong Cartan type: {0}")]
    WrongType(String),
    #[error("no unfolded root projects to {0}")]
    NoUnfoldedRoot(RootVector),
    #[error("invalid polygon diagonal [{0} {1}]")]
    InvalidDiagonal(usize, usize),
    #[error("no flip quadrilateral around [{0} {1}]")]
    QuadrilateralNotFound(usize, usize),
    #[error("orbit does not cross the initial snake; it is an initial variable")]
    InitialOrbit,
    #[error("crossing vector {0} is not a positive root")]
    NotARoot(RootVector),
    #[error("quantum torus elements belong to different algebras")]
    AlgebraMismatch,
    #[error("invalid input: {0}")]
    Input(String),
}
