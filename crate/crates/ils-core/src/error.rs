use thiserror::Error;

/// Errors produced by model construction, section algebra and checkers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown base point {0:?}")]
    UnknownBasePoint(Vec<f64>),

    #[error("base point index {0} out of range (sample has {1} points)")]
    BasePointIndex(usize, usize),

    #[error("invalid dimensions: n={n}, k={k} (require 1 <= k < n)")]
    InvalidDims { n: usize, k: usize },

    #[error("invalid norm exponent p={0} (require p >= 1 or infinity)")]
    InvalidNormExponent(f64),

    #[error("invalid annulus: eps={eps}, r={r} (require 0 <= eps < r)")]
    InvalidAnnulus { eps: f64, r: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("model has no vector structure: {0}")]
    NoVectorStructure(String),

    #[error("model is not real-valued: {0}")]
    NotRealValued(String),

    #[error("affine coefficients must sum to 1, got alpha={alpha}, beta={beta}")]
    AffineCoefficients { alpha: f64, beta: f64 },

    #[error("positivity precondition failed: value {value} < eps {eps} at base point {witness:?}")]
    PositivityViolated {
        value: f64,
        eps: f64,
        witness: Vec<f64>,
    },

    #[error("ratio undefined: all fiber-distance denominators degenerate")]
    RatioUndefined,

    #[error("sections disagree at the marked base point: |phi - psi| = {gap} > tol {tol}")]
    AgreementViolated { gap: f64, tol: f64 },

    #[error("1D fiber minimization failed to bracket the minimum")]
    BracketFailure,

    #[error("family member is not intrinsically {limit}-Lipschitz: measured {measured}")]
    FamilyMemberNotLipschitz { limit: f64, measured: f64 },

    #[error("bound {bound} is below sup-norm {sup_norm}")]
    BoundBelowSupNorm { bound: f64, sup_norm: f64 },

    #[error("weight out of range at base point {index}: {value} not in [0,1]")]
    WeightOutOfRange { index: usize, value: f64 },

    #[error("section length {got} does not match base sample size {expected}")]
    AssignmentLength { got: usize, expected: usize },

    #[error("internal consistency error: {0}")]
    InternalConsistency(String),

    #[error("expression error: {0}")]
    Expr(#[from] crate::expr::ExprError),

    #[error("model file error: {0}")]
    ModelFile(String),

    #[error("unknown proposition `{0}`")]
    UnknownProp(String),

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
