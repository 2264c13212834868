use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation undefined on the zero form")]
    ZeroForm,
    #[error("degree out of range: {0}")]
    DegreeOutOfRange(String),
    #[error("input is not squarefree")]
    NotSquarefree,
    #[error("form is not in the ideal: {0}")]
    NotInIdeal(String),
    #[error("form does not annihilate the target: {0}")]
    NotApolar(String),
    #[error("form is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("roots are not all rational")]
    IrrationalRoots,
    #[error("forms share a complex root (resultant is zero)")]
    CommonRoot,
    #[error("pencil generators are linearly dependent")]
    DependentPencil,
    #[error("apolar ideal is not generated in generic degrees: {0}")]
    NonGenericDegrees(String),
    #[error("rank {m} is outside the typical range {lo} <= m <= {d} for degree {d}")]
    InadmissibleRank { d: usize, m: usize, lo: usize },
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("verification failed: {0}")]
    Verification(String),
}
