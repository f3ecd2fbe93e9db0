use std::path::PathBuf;

/// Errors produced anywhere in the solver pipeline.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("triangle {index} is degenerate (signed area {area:e})")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("triangle {element} references node {node}, but the mesh has {count} nodes")]
    NodeOutOfRange {
        element: usize,
        node: usize,
        count: usize,
    },

    #[error("triangles {first} and {second} are duplicates")]
    DuplicateTriangle { first: usize, second: usize },

    #[error("edge ({0}, {1}) is shared by more than two triangles")]
    NonManifoldEdge(usize, usize),

    #[error("periodic boundary edge {edge} has no partner on the opposite side")]
    UnmatchedPeriodicEdge { edge: usize },

    #[error("periodic pairing makes triangle {element} its own neighbour across edge {edge}")]
    SelfPeriodic { element: usize, edge: usize },

    #[error("element {element} is inverted (det J = {det:e})")]
    InvertedElement { element: usize, det: f64 },

    #[error("polynomial degree {degree} outside supported range {min}..={max}")]
    DegreeOutOfRange { degree: usize, min: usize, max: usize },

    #[error("quadrature exactness {0} is not supported")]
    UnsupportedExactness(usize),

    #[error("invalid material for region {region}: {msg}")]
    InvalidMaterial { region: i32, msg: String },

    #[error("no material defined for region {0}")]
    MissingMaterial(i32),

    #[error("singular matrix in {what} (index {index})")]
    Singular { what: &'static str, index: usize },

    #[error("point ({x}, {y}) lies on an element boundary; move it inside an element")]
    AmbiguousPoint { x: f64, y: f64 },

    #[error("point ({x}, {y}) is outside the mesh")]
    PointOutsideMesh { x: f64, y: f64 },

    #[error("unsupported boundary condition `{0}`")]
    UnsupportedBoundary(String),

    #[error("Krylov solver did not converge in {iterations} iterations (last residual {last:e})")]
    NotConverged {
        iterations: usize,
        last: f64,
        history: Vec<f64>,
    },

    #[error("Krylov solver diverged (NaN residual) after {iterations} iterations")]
    Diverged { iterations: usize },

    #[error("operator dimension {0} exceeds the materialization limit")]
    TooLarge(usize),

    #[error("slice {slice}: {source}")]
    AtSlice {
        slice: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("no analytic solution is available for scenario `{0}`")]
    NoExactSolution(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    TomlDe(#[from] toml::de::Error),

    #[error(transparent)]
    TomlSer(#[from] toml::ser::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
