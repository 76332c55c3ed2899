use thiserror::Error;

/// Errors surfaced by the series, ODE, engine, and validation layers.
#[derive(Error, Debug)]
pub enum Error {
    #[error("coefficient mode mismatch: cannot mix exact-rational and floating values")]
    ModeMismatch,
    #[error("tangential dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("bare logarithm term t^0 (log t)^{0} is outside the polyhomogeneous ring")]
    BareLog(u32),
    #[error("non-integrable term t^{m}(log t)^{j} under weighted antiderivative with mu = {mu}")]
    NonIntegrable { m: i64, j: u32, mu: i64 },
    #[error("term t^{i}(log t)^{j} violates the log cap {cap} at order {i}")]
    LogCapViolation { i: u32, j: u32, cap: u32 },
    #[error("cannot lift t^{i}(log t)^{j}: log power exceeds t power")]
    LiftLogExceedsPower { i: u32, j: u32 },
    #[error("series is not divisible by t^{0}")]
    NotDivisible(u32),
    #[error("divergent substitution: argument {arg} has a nonzero constant term{radius}")]
    DivergentSubstitution { arg: usize, radius: String },
    #[error("indicial equation m^2 - (1-p)m + q = 0 with (p, q) = ({p}, {q}) has no integer roots")]
    NonIntegerRoots { p: i64, q: i64 },
    #[error("indicial roots ({0}, {1}) violate m_low <= 0, m_high >= 3")]
    RootsOutOfRange(i64, i64),
    #[error("reduction level {l} out of range 0..={max}")]
    LevelOutOfRange { l: u32, max: u32 },
    #[error("matching encountered a singular coefficient block at order {0} (not the resonant order)")]
    SingularBlock(u32),
    #[error("inconsistent problem: nonzero residual {at} below the expansion's minimum order")]
    InconsistentResidual { at: String },
    #[error("iteration failed to stabilize within {0} steps (implementation bug sentinel)")]
    NonStabilization(u32),
    #[error("missing forced coefficient c_{i},{j} in supplied seed")]
    MissingCoefficient { i: u32, j: u32 },
    #[error("floating-mode series cannot be serialized to the exact-rational JSON schema")]
    FloatSerialization,
    #[error("malformed series JSON: {0}")]
    MalformedJson(String),
    #[error("composition did not terminate (argument lacks positive grading)")]
    NonTerminatingComposition,
    #[error("quadrature failed to converge near t = 0 (integrand not integrable)")]
    QuadratureDivergence,
    #[error("Newton iteration diverged: {0}")]
    NewtonDivergence(String),
    #[error("empty majorant sample region: s0 * a_k too small")]
    EmptySampleRegion,
    #[error("config error: {0}")]
    Config(String),
    #[error("validation failure: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
