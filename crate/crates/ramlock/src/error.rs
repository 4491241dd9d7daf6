use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("NonEisenstein: {0}")]
    NonEisenstein(String),
    #[error("ReducibleUnramPoly: {0}")]
    ReducibleUnramPoly(String),
    #[error("EvenPrime: p = 2 is not supported")]
    EvenPrime,
    #[error("InvalidDescriptor: {0}")]
    InvalidDescriptor(String),
    #[error("DegreeCapExceeded: degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("CapReached: {0}")]
    CapReached(String),
    #[error("DivisionByZero")]
    DivisionByZero,
    #[error("Unsupported: {0}")]
    Unsupported(String),
    #[error("NotAUnit: valuation {0}")]
    NotAUnit(i64),
    #[error("NoPthRoots: mu_p is not contained in the field")]
    NoPthRoots,
    #[error("BothDivisible: p divides both {0} and {1}")]
    BothDivisible(i64, i64),
    #[error("HypothesisViolated: {0}")]
    HypothesisViolated(String),
    #[error("NotFound: {0}")]
    NotFound(String),
    #[error("NotEquivariant: {0}")]
    NotEquivariant(String),
    #[error("NotExact: {0}")]
    NotExact(String),
    #[error("SplitCase: b = 0, image is all of mu_(p^{0})")]
    SplitCase(u32),
    #[error("RankUnsupported: rank {0}")]
    RankUnsupported(usize),
    #[error("InvalidModule: {0}")]
    InvalidModule(String),
    #[error("ResidueFieldTooLarge: q = {0}")]
    ResidueFieldTooLarge(u128),
    #[error("CapTooSmall: degree cap {cap} below {needed}")]
    CapTooSmall { cap: usize, needed: usize },
    #[error("NotGoodReduction: {0}")]
    NotGoodReduction(String),
    #[error("NonMinimalModel: v(discriminant) = {0} >= 12, rescale by the uniformizer")]
    NonMinimalModel(i64),
    #[error("NotSupersingular")]
    NotSupersingular,
    #[error("NotOrdinary")]
    NotOrdinary,
    #[error("NotCM: {0}")]
    NotCM(String),
    #[error("NotSplit: {0}")]
    NotSplit(String),
    #[error("VeluUnsupported: level {0}")]
    VeluUnsupported(u32),
    #[error("InconsistentInput: {0}")]
    InconsistentInput(String),
    #[error("TorsionHypothesisFails: {0}")]
    TorsionHypothesisFails(String),
    #[error("FieldMismatch")]
    FieldMismatch,
    #[error("OrderViolation: N = {n} exceeds Mur = {mur}")]
    OrderViolation { n: u32, mur: u32 },
    #[error("Io: {0}")]
    Io(String),
}

impl Error {
    /// Stable identifier used in diagnostics and by the CLI.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NonEisenstein(_) => "NonEisenstein",
            Error::ReducibleUnramPoly(_) => "ReducibleUnramPoly",
            Error::EvenPrime => "EvenPrime",
            Error::InvalidDescriptor(_) => "InvalidDescriptor",
            Error::DegreeCapExceeded { .. } => "DegreeCapExceeded",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::CapReached(_) => "CapReached",
            Error::DivisionByZero => "DivisionByZero",
            Error::Unsupported(_) => "Unsupported",
            Error::NotAUnit(_) => "NotAUnit",
            Error::NoPthRoots => "NoPthRoots",
            Error::BothDivisible(..) => "BothDivisible",
            Error::HypothesisViolated(_) => "HypothesisViolated",
            Error::NotFound(_) => "NotFound",
            Error::NotEquivariant(_) => "NotEquivariant",
            Error::NotExact(_) => "NotExact",
            Error::SplitCase(_) => "SplitCase",
            Error::RankUnsupported(_) => "RankUnsupported",
            Error::InvalidModule(_) => "InvalidModule",
            Error::ResidueFieldTooLarge(_) => "ResidueFieldTooLarge",
            Error::CapTooSmall { .. } => "CapTooSmall",
            Error::NotGoodReduction(_) => "NotGoodReduction",
            Error::NonMinimalModel(_) => "NonMinimalModel",
            Error::NotSupersingular => "NotSupersingular",
            Error::NotOrdinary => "NotOrdinary",
            Error::NotCM(_) => "NotCM",
            Error::NotSplit(_) => "NotSplit",
            Error::VeluUnsupported(_) => "VeluUnsupported",
            Error::InconsistentInput(_) => "InconsistentInput",
            Error::TorsionHypothesisFails(_) => "TorsionHypothesisFails",
            Error::FieldMismatch => "FieldMismatch",
            Error::OrderViolation { .. } => "OrderViolation",
            Error::Io(_) => "Io",
        }
    }
}
