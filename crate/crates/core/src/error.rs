use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("minimal Maslov number {0} is odd; the ambient ring needs an even one")]
    OddMaslov(u32),
    #[error("negative exponent: {0}")]
    NegativeExponent(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("degree law violated by differential term {0}")]
    DegreeViolation(String),
    #[error("degree law violated by twist term {0}")]
    TwistDegreeViolation(String),
    #[error("degree law violated by product term {0}")]
    ProductDegreeViolation(String),
    #[error("twist does not commute with the differential at {}", .0.join(", "))]
    TwistNotCocycle(Vec<String>),
    #[error("d∘d is nonzero at {}", .0.join(", "))]
    DSquaredNonZero(Vec<String>),
    #[error("cochain is not a cocycle: {0}")]
    NotCocycle(String),
    #[error("cochain is not homogeneous of degree {expected}: {detail}")]
    NotHomogeneous { expected: i64, detail: String },
    #[error("a degree window is required for the positive ring")]
    WindowRequired,
    #[error("no unit supplied")]
    MissingUnit,
    #[error("class is not invertible: {0}")]
    NotInvertible(String),
    #[error("formula applies only when N = 2, got N = {0}")]
    FormulaScope(u32),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
}
