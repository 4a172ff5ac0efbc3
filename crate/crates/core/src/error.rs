use thiserror::Error;

/// Errors raised by the algebraic routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("expected an even length, got {0}")]
    OddLength(usize),
    #[error("length {0} exceeds the 128-bit packing limit")]
    TooLong(usize),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is not symplectic")]
    NotSymplectic,
    #[error("matrix is not an involution")]
    NotInvolution,
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{m} qubits exceeds the dense limit of {max}")]
    TooManyQubits { m: usize, max: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("generators {0} and {1} anticommute")]
    AnticommutingGenerators(usize, usize),
    #[error("generated group contains -I")]
    ContainsMinusIdentity,
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("rows are linearly dependent")]
    DependentRows,
    #[error("the zero vector is not allowed here")]
    ZeroVector,
    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("not a Clifford: conjugate of generator {generator} is not a phased Pauli")]
    NotClifford { generator: String },
    #[error("not in the third level: conjugate of generator {generator} is not Clifford")]
    NotThirdLevel { generator: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("matrix is not monomial (column {column})")]
    NotMonomial { column: usize },
    #[error("permutation is not affine at basis state {state}")]
    NotAffine { state: usize },
    #[error("level test up to {kmax} at m = {m} needs about {estimate} conjugations; refused")]
    CostTooHigh { m: usize, kmax: usize, estimate: u128 },
}

pub type Result<T> = std::result::Result<T, Error>;
