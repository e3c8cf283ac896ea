use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Which field of a prediction row a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Mu,
    Sigma,
    Y,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Mu => "mu",
            Field::Sigma => "sigma",
            Field::Y => "y",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    EmptyInput,
    NonFiniteValue { row: usize, field: Field },
    NonPositiveSigma { row: usize, sigma: f64 },
    UnlabeledCalibrationSet,
    UnlabeledTestSet,
    EmptyCalibrationSet,
    EmptyTestSet,
    TooFewPoints { needed: usize, got: usize },
    ProbabilityOutOfRange(f64),
    ProbabilityOutOfOpenRange(f64),
    InvertedLevels { lower: f64, upper: f64 },
    LengthMismatch { expected: usize, got: usize },
    InvalidModel(&'static str),
    InvalidFamilyParams(&'static str),
    InvalidSplit(&'static str),
    EmptyPartition(&'static str),
    TrialOutOfRange { trial: usize, trials: usize },
    KTooLarge { k: usize, n: usize },
    InvalidK(usize),
    DimensionMismatch { expected: usize, got: usize },
    InvalidSteps,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyInput => write!(f, "no prediction rows"),
            Error::NonFiniteValue { row, field } => {
                write!(f, "non-finite {} at row {row}", field.name())
            }
            Error::NonPositiveSigma { row, sigma } => {
                write!(f, "sigma must be > 0, got {sigma} at row {row}")
            }
            Error::UnlabeledCalibrationSet => write!(f, "calibration set has unlabeled rows"),
            Error::UnlabeledTestSet => write!(f, "test set has unlabeled rows"),
            Error::EmptyCalibrationSet => write!(f, "calibration set is empty"),
            Error::EmptyTestSet => write!(f, "test set is empty"),
            Error::TooFewPoints { needed, got } => {
                write!(f, "need at least {needed} calibration points, got {got}")
            }
            Error::ProbabilityOutOfRange(p) => write!(f, "probability {p} outside [0, 1]"),
            Error::ProbabilityOutOfOpenRange(p) => write!(f, "probability {p} outside (0, 1)"),
            Error::InvertedLevels { lower, upper } => {
                write!(f, "lower level {lower} must be below upper level {upper}")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "length mismatch: expected {expected}, got {got}")
            }
            Error::InvalidModel(why) => write!(f, "invalid model: {why}"),
            Error::InvalidFamilyParams(why) => write!(f, "invalid error family parameters: {why}"),
            Error::InvalidSplit(why) => write!(f, "invalid split: {why}"),
            Error::EmptyPartition(which) => write!(f, "{which} partition would be empty"),
            Error::TrialOutOfRange { trial, trials } => {
                write!(f, "trial {trial} out of range for {trials} trials")
            }
            Error::KTooLarge { k, n } => write!(f, "k = {k} exceeds training size {n}"),
            Error::InvalidK(k) => write!(f, "k must be at least 2, got {k}"),
            Error::DimensionMismatch { expected, got } => {
                write!(
                    f,
                    "feature dimension mismatch: expected {expected}, got {got}"
                )
            }
            Error::InvalidSteps => write!(f, "calibration curve needs at least one step"),
        }
    }
}

impl core::error::Error for Error {}
