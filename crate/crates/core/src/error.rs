use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong inside the kernel.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `q` outside the open interval (0, 1) or not finite.
    InvalidBase(f64),
    /// A tolerance that is not a finite positive number.
    InvalidTolerance(f64),
    /// A parameter outside the range an operation accepts.
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// A parameter an identity needs is absent from the parameter point.
    MissingParameter(&'static str),
    /// A parameter that must be nonzero is zero.
    ZeroParameter(&'static str),
    /// A Pochhammer value used as a divisor vanishes.
    DegenerateDenominator(&'static str),
    /// Non-terminating series with `r > s + 1`, or `r = s + 1` with `|z| >= 1`.
    DivergentSeries { r: usize, s: usize },
    /// A denominator parameter equals `q^-m` before the series terminates.
    ZeroDenominator { index: usize },
    /// The term cap was reached before the stopping rule fired.
    NoConvergence { terms: usize },
    /// An input is outside the domain of a stated inequality or identity.
    PreconditionViolation(&'static str),
    /// `alpha` is within 1e-6 of a nonnegative integer without being one.
    NearIntegerAlpha(f64),
    /// Quadrature refinement cap reached.
    QuadratureNonconvergence,
    /// Truncation cap of a lattice or bilateral sum reached.
    TailNonconvergence { terms: usize },
    /// The last outer term of a truncated expansion is not negligible.
    InsufficientTruncation { n_outer: usize },
    /// An outer expansion term overflowed or is not a number.
    OuterDivergence { n: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidBase(q) => write!(f, "base q = {q} is not in (0, 1)"),
            Error::InvalidTolerance(t) => write!(f, "tolerance {t} is not a positive finite number"),
            Error::InvalidParameter { name, reason } => write!(f, "invalid parameter {name}: {reason}"),
            Error::MissingParameter(name) => write!(f, "missing parameter {name}"),
            Error::ZeroParameter(name) => write!(f, "parameter {name} must be nonzero"),
            Error::DegenerateDenominator(what) => write!(f, "degenerate denominator: {what} vanishes"),
            Error::DivergentSeries { r, s } => {
                write!(f, "{r}phi{s} series does not converge for these arguments")
            }
            Error::ZeroDenominator { index } => {
                write!(f, "denominator parameter {index} equals q^-m before termination")
            }
            Error::NoConvergence { terms } => write!(f, "series did not converge within {terms} terms"),
            Error::PreconditionViolation(what) => write!(f, "precondition violated: {what}"),
            Error::NearIntegerAlpha(a) => {
                write!(f, "alpha = {a} is too close to an integer for the sine-reflection form")
            }
            Error::QuadratureNonconvergence => write!(f, "quadrature did not stabilize"),
            Error::TailNonconvergence { terms } => write!(f, "lattice sum not converged after {terms} terms"),
            Error::InsufficientTruncation { n_outer } => {
                write!(f, "outer truncation at {n_outer} terms is insufficient")
            }
            Error::OuterDivergence { n } => write!(f, "outer expansion diverges: term {n} is not finite"),
        }
    }
}

impl core::error::Error for Error {}
