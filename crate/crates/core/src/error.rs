use thiserror::Error;

/// Errors raised by the symbol algebra, the determinant oracle and the
/// asymptotic engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("symbol evaluated at singular angle {angle}")]
    EvaluationAtSingularity { angle: f64 },

    #[error("contour rescale by {rho} crosses a zero or branch point (|lambda| becomes {modulus})")]
    AnnulusViolation { rho: f64, modulus: f64 },

    #[error("factor parameter |lambda| = {modulus} lies outside the closed unit disk")]
    NonCanonicalFactor { modulus: f64 },

    #[error("jump data is not periodic: total jump {total} is not an integer multiple of i")]
    NotPeriodic { total: String },

    #[error("symbol is not of jump/Fisher-Hartwig form: {reason}")]
    NotJumpForm { reason: String },

    #[error("smooth part has nonzero winding number {winding}")]
    WindingNonzero { winding: i32 },

    #[error("quadrature under-resolved: {reason}")]
    QuadratureUnderResolved { reason: String },

    #[error("log-coefficient series did not reach tolerance {tolerance:e} before K = {cap}")]
    SlowConvergence { tolerance: f64, cap: usize },

    #[error("Wiener-Hopf series failed the Cauchy test (spread {spread:e})")]
    SeriesDiverged { spread: f64 },

    #[error("determinant is structurally zero (pivot {pivot:e} at step {step})")]
    SingularToExactZero { step: usize, pivot: f64 },

    #[error("Barnes G argument {re}{im:+}i hits a nonpositive integer")]
    PoleArgument { re: f64, im: f64 },

    #[error("representation excluded: a {a} with b {b} makes a +/- b a negative integer")]
    ExcludedCase { a: f64, b: String },

    #[error("no admissible Fisher-Hartwig representation (all candidates excluded or out of shift range)")]
    NoAdmissibleRepresentation,

    #[error("symbol vanishes on the unit circle: {reason}")]
    VanishingSymbol { reason: String },

    #[error("parameters out of domain: {reason}")]
    OutOfDomain { reason: String },

    #[error("closed-form asymptotics are not available on the boundary circle h^2 + gamma^2 = 1")]
    BoundaryRegime,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
