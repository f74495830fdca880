use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    /// No intersection with the level curve inside the search bracket; the
    /// strip width is unbounded at this point (condition on decreasing width
    /// cannot hold here).
    #[error("no level-curve intersection within the search bracket at s = {s}: width is unbounded")]
    UnboundedWidth { s: f64 },

    /// The distance function has no distinguished zero half-line, so
    /// strip-width queries are meaningless.
    #[error("distance function has no distinguished half-line")]
    NoHalfLine,

    /// Slopes below 1/2 must be handled by swapping the coordinate axes
    /// before calling into the crossing machinery.
    #[error("slope {alpha} < 1/2: swap the axes and call again with the reciprocal slope")]
    SlopeBelowHalf { alpha: f64 },

    #[error("float continued fraction is no longer trustworthy at depth {depth} (quotient {quotient:e} exceeds the 1e8 guard)")]
    CfPrecision { depth: usize, quotient: f64 },

    #[error("integer overflow in the convergent recurrence at depth {0}")]
    CfOverflow(usize),

    #[error("requested {requested} terms but only {available} are available")]
    NotEnoughConvergents { requested: usize, available: usize },

    #[error("N = {n} lies below the first window bound N_0 = {first}")]
    BelowFirstWindow { n: u64, first: u64 },

    #[error("r = {r} is below r0(I) = {r0} required by the {policy} policy")]
    RBelowR0 {
        r: usize,
        r0: usize,
        policy: &'static str,
    },

    #[error("window index r = {r} needs nr[r+1], but only {len} entries are present")]
    WindowOutOfRange { r: usize, len: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;
