use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("series constant term is not a nonzero rational")]
    NonUnitConstantTerm,
    #[error("series has the wrong constant term for exp/log")]
    BadConstantTerm,
    #[error("slot {slot}: {have} Chern classes supplied, {need} required")]
    InsufficientChernData { slot: usize, have: usize, need: usize },
    #[error("invalid rho: rho_{index} = {value} is not below {index}")]
    InvalidRho { index: usize, value: usize },
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
    #[error("a finite truncation degree is required: {0}")]
    MissingTruncation(String),
    #[error("ambiguous fill for lambda-plus: {0}")]
    AmbiguousFill(String),
    #[error("no preimage: {0}")]
    NoPreimage(String),
    #[error("ambiguous preimage: {0}")]
    AmbiguousPreimage(String),
    #[error("strata recursion exceeded depth {0}")]
    RecursionDepthExceeded(usize),
    #[error("not in the subring generated by the q-classes: {0}")]
    NotInSubring(String),
    #[error("not a valid involution: {0}")]
    InvalidInvolution(String),
    #[error("not vexillary: {0}")]
    NotVexillary(String),
    #[error("candidate fundamental classes are linearly dependent")]
    DependentBasis,
    #[error("class is not a combination of the candidates: {0}")]
    Unrepresentable(String),
    #[error("parse error: {0}")]
    Parse(String),
}
