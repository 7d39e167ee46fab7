use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("requested level {level} exceeds voltage precision {precision}")]
    PrecisionExceeded { level: u32, precision: u32 },

    #[error("{ell}^{precision} does not fit in 64 bits")]
    ModulusOverflow { ell: u64, precision: u32 },

    #[error("mismatched moduli: {0}")]
    Mismatch(String),

    #[error("{radicand} has no square root in Z_{ell}")]
    NonResidue { radicand: i64, ell: u64 },

    #[error("square root of {radicand} in Z_{ell} needs a branch selector")]
    AmbiguousBranch { radicand: i64, ell: u64 },

    #[error("branch {branch} does not select a square root of {radicand} in Z_{ell}")]
    BadBranch { radicand: i64, ell: u64, branch: u64 },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("the tower is not connected at level {0}")]
    DisconnectedTower(u32),

    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("exponents are not declared integral")]
    NonIntegralExponents,

    #[error("precision too low to lift exponents bounded by {bound} from Z/{modulus}")]
    ExponentLiftAmbiguous { bound: u64, modulus: u64 },

    #[error("polynomial does not vanish at T = 1")]
    NoUnitRoot,

    #[error("p = {0} equals ell")]
    PrimeEqualsEll(u64),

    #[error("mu_p = {0} > 0, bound does not apply")]
    Inapplicable(u32),

    #[error("n0 not certified: empirical value {empirical} from levels up to {checked_up_to}")]
    Inconclusive { empirical: u32, checked_up_to: u32 },

    #[error("need at least {needed} valuations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
