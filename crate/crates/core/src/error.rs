use std::path::PathBuf;

/// Everything that can go wrong in the engines, evaluation and I/O layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A cluster lost all of its membership weight during a center update.
    #[error("cluster {cluster} became degenerate (zero total membership weight)")]
    DegenerateCluster { cluster: usize },

    #[error("cannot form {clusters} clusters from {distinct} distinct gray levels")]
    TooFewLevels { clusters: usize, distinct: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("label {label} is out of range for {clusters} clusters")]
    LabelOutOfRange { label: usize, clusters: usize },

    #[error("exhaustive label alignment supports at most 8 clusters, got {0}")]
    TooManyClusters(usize),

    #[error("unknown phantom layout `{0}` (expected halves, stripes or disks)")]
    InvalidLayout(String),

    #[error("unknown method `{0}` (expected fcm or isfcm)")]
    InvalidMethod(String),

    #[error("PGM parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
