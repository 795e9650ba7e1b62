use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // integer lattice
    #[error("matrix rows are linearly dependent (rank {rank} < {rows})")]
    NotFullRank { rank: usize, rows: usize },
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("cone generators are linearly dependent")]
    DependentGenerators,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("isomorphism search limited to dimension <= 4 and <= 16 rays (got dimension {dim}, {rays} rays)")]
    SearchTooLarge { dim: usize, rays: usize },
    #[error("integer {0} does not fit in 64 bits")]
    Overflow(String),

    // fan validation and combinatorics
    #[error("ray {index} is not a primitive lattice vector")]
    NonPrimitiveRay { index: usize },
    #[error("ray {index} duplicates an earlier ray")]
    DuplicateRay { index: usize },
    #[error("ray {index} lies in no maximal cone")]
    UnusedRay { index: usize },
    #[error("maximal cone {cone} is malformed: {reason}")]
    MalformedCone { cone: usize, reason: String },
    #[error("maximal cone {cone} is not unimodular")]
    NonUnimodularCone { cone: usize },
    #[error("fan is not complete: {0}")]
    IncompleteFan(String),
    #[error("cones do not meet along common faces: {0}")]
    BadFaceIntersection(String),
    #[error("{collection:?} is not a primitive collection")]
    NotPrimitiveCollection { collection: Vec<usize> },
    #[error("no cone contains the generator sum of {collection:?}")]
    FocusNotFound { collection: Vec<usize> },
    #[error("class {class:?} is not in the kernel of the ray map")]
    InvalidClass { class: Vec<i64> },

    // bundle construction
    #[error("fan is not Fano")]
    NotFano,
    #[error("fan is not of the form P(K_Y + O_Y) with ray order (v0, .., v_last)")]
    NotBundle,

    // Kähler data
    #[error("moment polytope has empty interior")]
    EmptyInterior,
    #[error("class {class:?} is not an integer combination of the q-basis")]
    NotInBasisSpan { class: Vec<i64> },
    #[error("invalid q-basis: {0}")]
    InvalidQBasis(String),
    #[error("no default q-basis for this fan; supply one explicitly")]
    QBasisRequired,
    #[error("exp(lambda_{ray}) is not a monomial in the q-variables")]
    LambdaNotQExpressible { ray: usize },
    #[error("class {class:?} has a negative q-exponent")]
    NegativeQExponent { class: Vec<i64> },
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("missing value for parameter `{0}`")]
    MissingParameter(String),
    #[error("cannot parse linear form `{0}`")]
    BadLinearForm(String),

    // Gromov-Witten data
    #[error("no Gromov-Witten invariant known for class {class:?}")]
    UnknownInvariant { class: Vec<i64> },
    #[error("class {class:?} has Chern degree {degree}, expected 0")]
    BadChernDegree { class: Vec<i64>, degree: i64 },
    #[error("table fingerprint {found} does not match fan fingerprint {expected}")]
    FingerprintMismatch { expected: String, found: String },
    #[error("table disagrees with the built-in value for class {class:?}")]
    InconsistentTable { class: Vec<i64> },
    #[error("schema error: {0}")]
    SchemaError(String),

    // numerics
    #[error("coordinate {index} is zero")]
    ZeroCoordinate { index: usize },
    #[error("potential is constant")]
    ConstantPotential,
    #[error("no start converged ({attempted} attempted, best residual {best_residual:e})")]
    NoConvergence {
        attempted: usize,
        best_residual: f64,
    },
}
