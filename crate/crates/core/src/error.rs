use core::fmt;

use crate::Subset;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// A weight (or order coefficient) that is not a finite, strictly
    /// positive number.
    InvalidWeight { what: &'static str, index: usize, value: f64 },
    /// A structural problem with a weight description.
    MalformedWeights(&'static str),
    /// A general weight table without an entry for this subset.
    MissingSubset(Subset),
    DuplicateSubset(Subset),
    SubsetOutOfRange { subset: Subset, s_max: usize },
    ComponentOutOfRange { component: usize, s_max: usize },
    /// Subset enumeration over more coordinates than the configured cap.
    EnumerationCap { dimension: usize, cap: usize },
    /// Brute-force enumeration larger than the configured budget.
    BudgetExceeded { candidates: u128, budget: u128 },
    InvalidDigits(u32),
    /// A generating vector component that is even or outside `1..N`.
    InvalidComponent { index: usize, value: u64 },
    /// Digit history inconsistent with the final components.
    InvalidHistory { component: usize, level: u32 },
    EvenCandidate(u64),
    InvalidLevel { level: u32, n: u32 },
    InvalidExponent(f64),
    InvalidSmoothness(f64),
    UnsupportedSmoothness(u32),
    DimensionMismatch { expected: usize, found: usize },
    /// A fast path was asked to run on a weight family it cannot handle.
    SchemeMismatch { path: &'static str, kind: &'static str },
    /// The POD/product table does not hold the data the caller expects.
    StateMismatch { level: u32, expected: usize, found: usize },
}

impl Error {
    /// Whether the error is a refusal to exceed an enumeration cap or budget
    /// (as opposed to invalid input).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::EnumerationCap { .. } | Error::BudgetExceeded { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWeight { what, index, value } => {
                write!(f, "{what}[{index}] = {value} is not a finite positive number")
            }
            Error::MalformedWeights(msg) => write!(f, "malformed weights: {msg}"),
            Error::MissingSubset(u) => write!(f, "general weights have no value for subset {u}"),
            Error::DuplicateSubset(u) => write!(f, "subset {u} given more than once"),
            Error::SubsetOutOfRange { subset, s_max } => {
                write!(f, "subset {subset} is not contained in {{1..{s_max}}}")
            }
            Error::ComponentOutOfRange { component, s_max } => {
                write!(f, "component {component} outside 1..={s_max}")
            }
            Error::EnumerationCap { dimension, cap } => write!(
                f,
                "subset enumeration over {dimension} coordinates exceeds the cap of {cap}"
            ),
            Error::BudgetExceeded { candidates, budget } => write!(
                f,
                "brute force would visit {candidates} vectors, budget is {budget}"
            ),
            Error::InvalidDigits(n) => {
                write!(f, "digit count {n} outside 1..={}", crate::MAX_DIGITS)
            }
            Error::InvalidComponent { index, value } => {
                write!(f, "component z_{index} = {value} must be odd and below N")
            }
            Error::InvalidHistory { component, level } => write!(
                f,
                "digit history of component {component} disagrees at level {level}"
            ),
            Error::EvenCandidate(x) => write!(f, "candidate {x} is even"),
            Error::InvalidLevel { level, n } => write!(f, "level {level} outside 1..={n}"),
            Error::InvalidExponent(e) => write!(f, "exponent {e} must be finite and positive"),
            Error::InvalidSmoothness(a) => write!(f, "smoothness {a} out of range"),
            Error::UnsupportedSmoothness(a) => {
                write!(f, "closed form only available for alpha in {{2, 4, 6}}, got {a}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            Error::SchemeMismatch { path, kind } => {
                write!(f, "the {path} path cannot run on {kind} weights")
            }
            Error::StateMismatch {
                level,
                expected,
                found,
            } => write!(
                f,
                "table level {level} holds component {found}, expected {expected}"
            ),
        }
    }
}

impl core::error::Error for Error {}
