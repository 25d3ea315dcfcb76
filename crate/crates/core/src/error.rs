use core::fmt;

/// Error type shared by all analyses in this crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Alphabet size outside the supported range 1..=256.
    InvalidAlphabet(usize),
    /// A letter does not belong to the alphabet it is used with.
    LetterOutOfRange { letter: u8, alphabet_size: usize },
    /// Two values built over different alphabets were combined.
    AlphabetMismatch,
    /// A rule table has the wrong number of entries.
    BadTableLength { expected: u64, actual: usize },
    /// A table or enumeration would exceed the configured budget.
    BudgetExceeded { needed: u64, budget: u64 },
    /// A window does not cover the light cone of the requested computation.
    /// `required` is the half-open interval the window would have to cover.
    InsufficientWindow { required: (i64, i64) },
    /// An operation received an empty or degenerate input.
    EmptyInput(&'static str),
    /// A parameter violates a documented precondition.
    InvalidParameter(&'static str),
    /// The alphabet is too large for the requested rendering format.
    UnsupportedAlphabet { size: usize, max: usize },
    /// A series is shorter than the analysis requires.
    SeriesTooShort { len: usize, min: usize },
    /// The requested tolerance is below the sampling noise floor.
    ToleranceBelowNoise { tolerance: f64, noise: f64 },
    /// A global-equicontinuity witness failed its replay check.
    InvalidWitness { preperiod: usize, period: usize },
    /// Bernoulli probabilities are negative or do not sum to one.
    InvalidDistribution,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidAlphabet(q) => {
                write!(f, "alphabet size {q} outside supported range 1..=256")
            }
            Error::LetterOutOfRange { letter, alphabet_size } => {
                write!(f, "letter {letter} outside alphabet of size {alphabet_size}")
            }
            Error::AlphabetMismatch => write!(f, "alphabet mismatch between rule and configuration"),
            Error::BadTableLength { expected, actual } => {
                write!(f, "rule table has {actual} entries, expected {expected}")
            }
            Error::BudgetExceeded { needed, budget } => {
                write!(f, "budget exceeded: operation needs {needed} entries, budget is {budget}")
            }
            Error::InsufficientWindow { required } => write!(
                f,
                "insufficient window: computation requires coverage of [{}, {})",
                required.0, required.1
            ),
            Error::EmptyInput(what) => write!(f, "empty input: {what}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::UnsupportedAlphabet { size, max } => {
                write!(f, "unsupported alphabet size {size} (format supports at most {max})")
            }
            Error::SeriesTooShort { len, min } => {
                write!(f, "series of length {len} too short, need at least {min}")
            }
            Error::ToleranceBelowNoise { tolerance, noise } => write!(
                f,
                "tolerance {tolerance} below Monte Carlo noise floor {noise}; increase samples or tolerance"
            ),
            Error::InvalidWitness { preperiod, period } => write!(
                f,
                "witness ({preperiod}, {period}) failed replay: composed tables disagree"
            ),
            Error::InvalidDistribution => {
                write!(f, "probabilities must be nonnegative and sum to 1")
            }
        }
    }
}

impl core::error::Error for Error {}
