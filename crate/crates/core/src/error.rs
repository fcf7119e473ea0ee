use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),

    #[error("vertex function has {got} values but the graph has {expected} vertices")]
    DomainMismatch { expected: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph file line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("metric {metric} needs lattice coordinates on the graph")]
    MetricUnsupported { metric: &'static str },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("graph is disconnected: vertex {0} is unreachable")]
    Disconnected(usize),

    #[error("jump size undefined: graph has no edges")]
    NoEdges,

    #[error("no vertex lies outside B_R0 (R0 = {r0}) in the scanned set")]
    EmptyScan { r0: f64 },

    #[error("only {usable} usable shells (need at least 3); excluded shells at radii {excluded:?}")]
    TooFewShells { usable: usize, excluded: Vec<f64> },

    #[error("ψ argument {arg} lies below its domain start {lower}")]
    OutOfDomain { arg: f64, lower: f64 },

    #[error("negative time t = {0}")]
    NegativeTime(f64),

    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),

    #[error("potential is nonpositive ({value}) at vertex {vertex}, t = {t}")]
    NonpositivePotential { vertex: usize, t: f64, value: f64 },

    #[error("growth fit needs at least 3 samples with strictly increasing R")]
    TooFewSamples,

    #[error("growth fit sample R = {r} has nonpositive value {value}")]
    NonpositiveSample { r: f64, value: f64 },

    #[error("time step {dt} exceeds the stability bound {bound}")]
    Unstable { dt: f64, bound: f64 },

    #[error("test-function support ends at t = {support}, beyond usable horizon {horizon}")]
    SupportViolation { support: f64, horizon: f64 },

    #[error("trajectory blew up at t = {t_blowup}, before the test-function support ends at {support}")]
    TruncatedSupport { t_blowup: f64, support: f64 },

    #[error("step index {index} out of range 1..{len}")]
    StepOutOfRange { index: usize, len: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
