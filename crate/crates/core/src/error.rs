use thiserror::Error;

/// Errors raised when building or evaluating an Ising problem.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("problem must have at least one spin")]
    Empty,
    #[error("expected length {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },
    #[error("index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("self-coupling on spin {0}")]
    SelfCoupling(usize),
    #[error("duplicate coupler ({0}, {1})")]
    DuplicateCoupler(usize, usize),
    #[error("coupler ({i}, {j}) has invalid weight {w}")]
    InvalidWeight { i: usize, j: usize, w: f64 },
    #[error("local field h[{index}] = {value} is not finite")]
    InvalidField { index: usize, value: f64 },
    #[error("analog spin s[{index}] = {value} is outside [-1, 1]")]
    SpinOutOfRange { index: usize, value: f64 },
    #[error("discrete spin at {index} is {value}, expected -1 or +1")]
    NotIsingSpin { index: usize, value: i8 },
    #[error("cut value is undefined for problems with nonzero local fields")]
    NonzeroField,
}

/// Errors from invalid solver parameters or schedules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("alpha must lie in (0, 1], got {0}")]
    Alpha(f64),
    #[error("sigma must be a finite nonnegative number, got {0}")]
    Sigma(f64),
    #[error("iteration count must be at least 1")]
    Iterations,
    #[error("schedule needs at least two breakpoints, got {0}")]
    TooFewBreakpoints(usize),
    #[error("schedule must start at fraction 0 and end at fraction 1")]
    ScheduleEndpoints,
    #[error("schedule fractions must be strictly increasing (breakpoint {0})")]
    ScheduleOrder(usize),
    #[error("schedule temperature at breakpoint {index} must be positive, got {value}")]
    Temperature { index: usize, value: f64 },
    #[error("iteration {t} outside 1..={t_final}")]
    IterationOutOfRange { t: usize, t_final: usize },
    #[error("malformed schedule entry {0:?}, expected \"fraction:temperature\"")]
    ScheduleSyntax(String),
    #[error("run count must be at least 1")]
    Runs,
}

/// Errors from the instance generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("need at least {min} spins, got {n}")]
    TooSmall { n: usize, min: usize },
    #[error("n must be even, got {0}")]
    OddSize(usize),
    #[error("edge probability must lie in (0, 1], got {0}")]
    Probability(f64),
}

/// What went wrong on a particular line of a G-set file.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GsetErrorKind {
    #[error("missing header")]
    MissingHeader,
    #[error("header must be \"n_vertices n_edges\"")]
    BadHeader,
    #[error("expected {expected} fields, found {found}")]
    FieldCount { expected: usize, found: usize },
    #[error("non-numeric token {0:?}")]
    NotANumber(String),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge weight must be finite and nonzero")]
    BadWeight,
    #[error("header declares {declared} edges but file has {found}")]
    EdgeCount { declared: usize, found: usize },
    #[error("input is not valid UTF-8")]
    Encoding,
}

/// A G-set parse failure with the (1-based) line where it happened.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {kind}")]
pub struct GsetError {
    pub line: usize,
    pub kind: GsetErrorKind,
}

/// Errors from writing a problem in G-set form.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GsetWriteError {
    #[error("G-set files cannot carry local fields")]
    NonzeroField,
    #[error("coupler ({i}, {j}) has non-integer weight {w}")]
    NonIntegerWeight { i: usize, j: usize, w: f64 },
}

/// Errors from the benchmark statistics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("exact enumeration is limited to {max} spins, got {n}")]
    TooLarge { n: usize, max: usize },
    #[error("no results to summarize")]
    Empty,
    #[error("probability must lie in [0, 1], got {0}")]
    Probability(f64),
    #[error("time per run must be positive and finite, got {0}")]
    Tau(f64),
    #[error("confidence must lie in (0, 1), got {0}")]
    Confidence(f64),
}

/// A run-configuration file error with its line number.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: expected \"key = value\"")]
    Syntax { line: usize },
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: invalid value {value:?} for {key}")]
    Value { line: usize, key: String, value: String },
    #[error("line {line}: {source}")]
    Param { line: usize, source: ParamError },
}
