use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("seed graph is disconnected (pass an explicit override to allow it)")]
    DisconnectedSeed,

    #[error("seed graph needs at least 2 vertices, got {0}")]
    SeedTooSmall(usize),

    #[error("vertex id {id} out of range for a graph with {n} vertices")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("malformed edge list at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unknown seed graph `{0}`")]
    UnknownSeed(String),

    #[error("checkpoint {checkpoint} outside the growth window [{current}, {target}]")]
    Checkpoint {
        checkpoint: usize,
        current: usize,
        target: usize,
    },

    #[error("clique size {k} outside supported range 2..={k_max}")]
    CliqueSize { k: usize, k_max: usize },

    #[error("{count} cliques exceed the pair-enumeration cap of {cap}")]
    CliqueCap { count: usize, cap: usize },

    #[error("missing seed data: {0}")]
    MissingSeedData(String),

    #[error("p = {p} is not above the critical value p* = {p_star}")]
    Subcritical { p: f64, p_star: f64 },

    #[error("numerical check failed: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p = {p} is not in [0, 1]")))
    }
}
