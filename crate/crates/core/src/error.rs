use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix size L = {0} (must be at least 1)")]
    InvalidSize(usize),

    #[error("invalid precision: {0}")]
    InvalidPrecision(String),

    #[error("precision underflow: {0}")]
    PrecisionUnderflow(String),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("Bernoulli index {index} exceeds the configured cap {cap}")]
    BernoulliCap { index: usize, cap: usize },

    #[error("constant {name}: the two evaluation routes agree to only {agreed} of {digits} digits")]
    ConstantMismatch { name: &'static str, agreed: u32, digits: u32 },

    #[error("derivative order {0} exceeds the cap of 8")]
    DerivativeCap(usize),

    #[error("L = {0} is too large for path enumeration (at most 5)")]
    EnumerationTooLarge(usize),

    #[error("odd L has a pole at theta = pi (cos(theta/2) = 0)")]
    OddPole,

    #[error("special value index p = {0} is outside 0..=3")]
    InvalidSpecialIndex(i64),

    #[error("product for {0} is not an integer")]
    NonIntegral(String),

    #[error("no cache entry for L = {0}")]
    MissingEntry(usize),

    #[error("checksum mismatch in {path}: stored {stored}, computed {computed}")]
    ChecksumMismatch { path: String, stored: String, computed: String },

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("malformed cache file {path}: {reason}")]
    MalformedCache { path: String, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("theta is a zero of the leading amplitude")]
    ZeroOfAmplitude,

    #[error("degenerate fit model, colliding terms: {}", format_pairs(.pairs))]
    DegenerateModel { pairs: Vec<(String, String)> },

    #[error("need at least {needed} L values, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("fit stability of {got} digits is below the required {needed}")]
    InsufficientStability { needed: u32, got: u32 },

    #[error("linear system is singular")]
    SingularSystem,

    #[error("basis rows are linearly dependent")]
    DependentBasis,

    #[error("precision too low to decide: {0}")]
    PrecisionTooLow(String),

    #[error("parse error: {0}")]
    Parse(String),
}

fn format_pairs(pairs: &[(String, String)]) -> String {
    pairs
        .iter()
        .map(|(a, b)| format!("{a} ~ {b}"))
        .collect::<Vec<_>>()
        .join(", ")
}
