use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid characteristic {0}: must be 0 or a prime")]
    InvalidCharacteristic(i64),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("fan is not smooth; contact orders can only be decomposed on smooth fans")]
    NotSmooth,

    #[error("contact order must be a nonzero lattice point")]
    ZeroContactOrder,

    #[error("lattice point {0:?} lies outside the support of the fan")]
    OutsideSupport(Vec<i64>),

    #[error("invalid multiplicities: {0}")]
    InvalidMultiplicities(String),

    #[error("structure is not klt: ray {0} has infinite multiplicity")]
    NotKlt(usize),

    #[error("per-ray degree {degree} on ray {ray} is below the bound 2m+2 = {bound}")]
    DegreeBelowBound { ray: usize, degree: u64, bound: u64 },

    #[error("per-ray degrees are not balanced: sum of D_rho * u_rho = {0:?}")]
    UnbalancedDegrees(Vec<i64>),

    #[error("no split of degree {degree} on ray {ray} into two parts >= {min} avoiding characteristic {p}")]
    InfeasibleSplit {
        ray: usize,
        degree: u64,
        min: u64,
        p: u64,
    },

    #[error("invalid jet: {0}")]
    InvalidJet(String),

    #[error("invalid curve data: {0}")]
    InvalidCurve(String),

    #[error("tangency mismatch at marking {marking}, hyperplane {hyperplane}: expected {expected}, certified {found}")]
    TangencyMismatch {
        marking: usize,
        hyperplane: usize,
        expected: u64,
        found: u64,
    },

    #[error("forms share a common root; the curve is degenerate")]
    CommonRoot,

    #[error("exponent matrix has rank {rank} < {d}; the contact orders do not span the lattice")]
    RankDeficient { rank: usize, d: usize },

    #[error("no rational solution: {0}")]
    NoRationalSolution(String),

    #[error("could not make markings distinct after {0} attempts")]
    MarkingsNotDistinct(usize),

    #[error("degenerate evaluation point: {0}")]
    DegenerateMarking(String),

    #[error("value has denominator divisible by {0}")]
    NotReducible(u64),

    #[error("not a klt Fano orbifold: {0}")]
    NotKltFano(String),

    #[error("inconsistent branch data: {0}")]
    InconsistentBranchData(String),

    #[error("characteristic {p} unsupported: {reason}")]
    UnsupportedCharacteristic { p: u64, reason: String },

    #[error("branch data mismatch: {0}")]
    BranchMismatch(String),

    #[error("forms are not coprime")]
    NotCoprime,

    #[error("invalid binary form: {0}")]
    InvalidForm(String),

    #[error("syzygy check failed: the stored invariant forms are corrupted")]
    SyzygyFailed,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
