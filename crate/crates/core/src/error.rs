use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum SwtError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A plaquette circulation left the principal branch of the logarithm.
    /// The link-phase curvature is only trustworthy for |circulation| < pi;
    /// this fires on lattices too coarse for the connection they carry.
    #[error(
        "plaquette circulation {circulation} at site {site}, plane ({i},{j}) \
         exceeds the branch cut (|arg| >= pi); refine the lattice or shrink the connection"
    )]
    BranchCut {
        site: usize,
        i: usize,
        j: usize,
        circulation: f64,
    },

    #[error("solver failure: {0}")]
    SolverFailure(String),

    #[error("snapshot parse error at line {line}: {msg}")]
    Snapshot { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SwtError>;
