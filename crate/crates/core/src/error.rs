use alloc::string::String;
use core::fmt;

/// Errors produced by the core statistics.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A raw name starts with a non-alphabetic character.
    NoLeadingLetters(String),
    /// A name of a single letter reached coding; it must be filtered first.
    SingleLetter(String),
    /// Text that does not satisfy the standardized-name shape.
    InvalidStandardName(String),
    /// Two coding-table rows share a variant after case folding.
    DuplicateKey(String),
    /// A canonical name is itself re-coded to something else.
    NotFixedPoint {
        variant: String,
        canonical: String,
    },
    /// Two variants of the same canonical name carry different sex overrides.
    ConflictingSexOverride(String),
    /// Record year or age outside the accepted range.
    RecordOutOfRange(&'static str),
    /// No age and no default age applies to the record kind.
    AgeUnresolvable,
    /// Birth span with start after end.
    InvalidSpan {
        start: i32,
        end: i32,
    },
    InsufficientDistinctNames {
        needed: usize,
        found: usize,
    },
    EmptyTable,
    /// Averaging requires at least two inputs.
    TooFewInputs,
    /// Averaged inputs describe different cohorts or list lengths.
    MismatchedInputs(&'static str),
    /// Aligned lists have different lengths.
    LengthMismatch {
        left: usize,
        right: usize,
    },
    /// Year 1 has no mass outside the top names but year 2 does.
    DivergentOtherMass,
    /// C3 needs year 1's own top-k total.
    T11Required,
    InvalidYears,
    InsufficientPoints {
        needed: usize,
        found: usize,
    },
    /// Model constraints cannot be met.
    Infeasible(&'static str),
    /// Constraints are only met in the limit of an infinitely steep slope.
    Degenerate,
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NoLeadingLetters(raw) => write!(f, "no_leading_letters: {raw:?}"),
            Error::SingleLetter(name) => write!(f, "single-letter name {name:?} cannot be coded"),
            Error::InvalidStandardName(name) => write!(f, "invalid standardized name {name:?}"),
            Error::DuplicateKey(key) => write!(f, "duplicate coding-table variant {key:?}"),
            Error::NotFixedPoint { variant, canonical } => write!(
                f,
                "coding-table target {canonical:?} (from {variant:?}) is itself re-coded"
            ),
            Error::ConflictingSexOverride(name) => {
                write!(f, "conflicting sex overrides for {name:?}")
            }
            Error::RecordOutOfRange(what) => write!(f, "{what} out of range"),
            Error::AgeUnresolvable => f.write_str("age_unresolvable"),
            Error::InvalidSpan { start, end } => write!(f, "birth span {start}-{end} is empty"),
            Error::InsufficientDistinctNames { needed, found } => write!(
                f,
                "insufficient_distinct_names: need {needed}, found {found}"
            ),
            Error::EmptyTable => f.write_str("empty frequency table"),
            Error::TooFewInputs => f.write_str("averaging needs at least two inputs"),
            Error::MismatchedInputs(what) => write!(f, "mismatched inputs: {what}"),
            Error::LengthMismatch { left, right } => {
                write!(f, "list lengths differ ({left} vs {right})")
            }
            Error::DivergentOtherMass => f.write_str("divergent_other_mass"),
            Error::T11Required => f.write_str("t11_required"),
            Error::InvalidYears => f.write_str("years elapsed must be positive"),
            Error::InsufficientPoints { needed, found } => {
                write!(
                    f,
                    "insufficient points for fit: need {needed}, found {found}"
                )
            }
            Error::Infeasible(why) => write!(f, "infeasible constraints: {why}"),
            Error::Degenerate => f.write_str("degenerate constraints"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
