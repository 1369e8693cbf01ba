use thiserror::Error;

/// Errors raised by the numeric layers.
///
/// Complex values inside variants are stored as `f64` pairs so the error type
/// does not depend on the scalar parameter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("exponent at byte {pos} is not an integer or a ratio of integers")]
    NonRationalExponent { pos: usize },

    #[error("division by an identically zero literal at byte {pos}")]
    ZeroDivisorLiteral { pos: usize },

    #[error("branch cut violation: base {base:?} of a fractional power lies on the closed negative real axis (z = {z:?})")]
    BranchCut { z: (f64, f64), base: (f64, f64) },

    #[error("pole hit at z = {z:?}")]
    Pole { z: (f64, f64) },

    #[error("evaluation failed at radius {r} along the ray: {source}")]
    RadialSample {
        r: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("Hermite data has duplicate node {0:?}; merge derivative lists instead")]
    DuplicateNode((f64, f64)),

    #[error("Hermite data is empty")]
    EmptyInterpolation,

    #[error("expression is not rational in z: {0}")]
    NotRational(String),

    #[error("denominator of b has a root {0:?} in the closed unit disk")]
    PoleInClosedDisk((f64, f64)),

    #[error("sup norm of b is {0}, which exceeds 1")]
    NormTooLarge(f64),

    #[error("sup norm of b is {0} < 1: b has no boundary contact, outside the supported setting")]
    NormTooSmall(f64),

    #[error("b is a finite Blaschke product (|b| = 1 on the whole circle)")]
    FiniteBlaschke,

    #[error("1 - |b|^2 takes the negative value {0} on the circle")]
    NegativeDefect(f64),

    #[error("boundary root cluster near {zeta:?} has odd multiplicity {mult}")]
    OddBoundaryMultiplicity { zeta: (f64, f64), mult: usize },

    #[error("mate identity |a~|^2 + |b|^2 = 1 fails by {0:e} on the boundary grid")]
    MateIdentity(f64),

    #[error("the mate has no zeros on the unit circle")]
    NoBoundaryZeros,

    #[error("derivative of order {order} has no radial limit at zeta = {zeta:?}")]
    NoLimit { zeta: (f64, f64), order: usize },

    #[error("the H2 part g of the decomposition is not in H2")]
    GOutsideH2,

    #[error("phi is not a self-map of the disk: |phi({z:?})| = {modulus}")]
    NotSelfMap { z: (f64, f64), modulus: f64 },

    #[error("truncated Toeplitz system is rank deficient (|v(0)| = {0:e})")]
    RankDeficient(f64),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn pair<T: crate::Real>(z: num_complex::Complex<T>) -> (f64, f64) {
    (crate::scalar::to_f64(z.re), crate::scalar::to_f64(z.im))
}
