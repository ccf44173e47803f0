use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid node name {0:?} (expected a nonempty name over [A-Za-z0-9_])")]
    InvalidName(String),
    #[error("node {0} declared twice")]
    DuplicateNode(String),
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("more than one edge between {0} and {1}")]
    DuplicateEdge(String, String),
    #[error("semidirected cycle {}", .0.join(" "))]
    SemidirectedCycle(Vec<String>),
    #[error("graph has {0} nodes, at most {max} are supported", max = crate::nodeset::MAX_NODES)]
    TooManyNodes(usize),

    #[error("graph is not chordal")]
    NotChordal,
    #[error("elimination tail is not a complete set")]
    TailNotComplete,
    #[error("graph has directed edges, expected an undirected graph")]
    NotUndirected,

    #[error("invalid separation query: {0}")]
    InvalidQuery(String),
    #[error("graphs are defined over different node sets")]
    NodeSetMismatch,
    #[error("{what} too large: {size} exceeds the cap of {cap}")]
    TooLarge { what: &'static str, size: usize, cap: usize },
    #[error("equivalence class is empty")]
    EmptyClass,
    #[error("separator {set:?} does not separate {a} and {b}")]
    SeparationWitnessFailed { a: String, b: String, set: Vec<String> },
    #[error("invalid marked graph state: {0}")]
    InvalidState(String),

    #[error("node sets are not chain components of the graph")]
    NotComponents,
    #[error("merging the components is not feasible")]
    InfeasibleMerge,
    #[error("splitting the component is not feasible")]
    InfeasibleSplit,

    #[error("S contains {0}, which is not a non-strong undirected neighbour of the target")]
    SNotInNst(String),
    #[error("target {0} has both strong and non-strong undirected edges")]
    CorollaryViolation(String),

    #[error("linear system is singular")]
    SingularSystem,
    #[error("regression design is singular; collinear columns: {}", .0.join(", "))]
    SingularRegression(Vec<String>),
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("dataset error: {0}")]
    Dataset(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Dataset(err.to_string())
    }
}
