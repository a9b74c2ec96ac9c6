use thiserror::Error;

/// Errors raised by the algebra kernels.
///
/// Variants that describe a failed structural check carry a witness so the
/// caller can point at the offending elements.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("table is not square or has an entry out of range: {0}")]
    MalformedTable(String),
    #[error("no identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    NoInverse { element: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("subgroup is not normal: conjugating {element} by {conjugator} leaves it")]
    NotNormal { element: usize, conjugator: usize },
    #[error("map is not multiplicative at pair ({x}, {y})")]
    NotMultiplicative { x: usize, y: usize },
    #[error("group is not abelian: {a} and {b} do not commute")]
    NotAbelian { a: usize, b: usize },
    #[error("element {element} is not a member of the subgroup")]
    NotMember { element: usize },
    #[error("permutation degrees differ: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("ideal is not nilpotent")]
    NotNilpotent,
    #[error("algebra is not semisimple (radical has dimension {radical_dim})")]
    NotSemisimple { radical_dim: usize },
    #[error("invalid ring data: {0}")]
    InvalidRing(String),
    #[error("invalid module action: {0}")]
    InvalidAction(String),
    #[error("given cosets do not generate the quotient")]
    NotGenerating,
    #[error("relator {index} evaluates outside the normal subgroup")]
    RelatorOutsideKernel { index: usize },
    #[error("search exceeded the resource limit of {limit} candidates")]
    ResourceLimit { limit: u64 },
    #[error("no abelian normal subgroup with a length-{depth} cyclic/simple tower")]
    UnsupportedShape { depth: usize },
    #[error("input of size {size} exceeds the oracle guard of {limit}")]
    SizeGuard { size: usize, limit: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
