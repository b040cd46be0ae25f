use thiserror::Error;

/// Errors raised by the arithmetic, solver and pipeline layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("extension modulus is reducible modulo p")]
    ReducibleModulus,
    #[error("p^M = {p}^{precision} does not fit in 63 bits")]
    PrecisionOverflow { p: u64, precision: u32 },
    #[error("operands live in different contexts")]
    ContextMismatch,
    /// The divisor has larger valuation than the dividend.
    #[error("division loses precision: v(divisor) = {divisor} > v(dividend) = {dividend}")]
    DivisionPrecision { dividend: u32, divisor: u32 },
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("inner series of a composition must have zero constant term")]
    NonzeroConstantTerm,
    #[error("square root: {0}")]
    SquareRoot(String),
    /// Inversion of a non-unit inside p-adic divisor arithmetic.
    #[error("non-unit inversion: {0}")]
    NonUnitInversion(String),
    #[error("polynomial has a repeated root modulo p")]
    RepeatedRoot,
    #[error("divisor support contains a Weierstrass point")]
    Weierstrass,
    #[error("degree: {0}")]
    Degree(String),
    #[error("rational reconstruction failed: {0}")]
    Reconstruction(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("working precision {have} is below the required {need}")]
    InsufficientPrecision { have: u32, need: u32 },
    #[error("singular curve: {0}")]
    SingularCurve(String),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("genericity: {0}")]
    Genericity(String),
}

impl Error {
    /// Stable name used in reports and across the C ABI.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrimeError",
            Error::InvalidParameter(_) => "InvalidParameterError",
            Error::ReducibleModulus => "ReducibleModulusError",
            Error::PrecisionOverflow { .. } => "PrecisionOverflowError",
            Error::ContextMismatch => "ContextMismatchError",
            Error::DivisionPrecision { .. } => "DivisionPrecisionError",
            Error::NotInvertible(_) => "NotInvertibleError",
            Error::NonzeroConstantTerm => "NonzeroConstantTermError",
            Error::SquareRoot(_) => "SquareRootError",
            Error::NonUnitInversion(_) => "NonUnitInversionError",
            Error::RepeatedRoot => "RepeatedRootError",
            Error::Weierstrass => "WeierstrassError",
            Error::Degree(_) => "DegreeError",
            Error::Reconstruction(_) => "ReconstructionError",
            Error::Shape(_) => "ShapeError",
            Error::InsufficientPrecision { .. } => "InsufficientPrecisionError",
            Error::SingularCurve(_) => "SingularCurveError",
            Error::NotOnCurve => "NotOnCurveError",
            Error::Genericity(_) => "GenericityError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
