use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate ({x}, {y}) is not finite")]
    NonFiniteCoordinate { x: f64, y: f64 },

    #[error("circle radius {0} must be positive and finite")]
    InvalidRadius(f64),

    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("cannot fit a circumcircle: the seed vertices are collinear")]
    CollinearSeed,

    #[error("polygon is not cyclic: vertex {index} is off the fitted circle by {deviation:e}")]
    NotConcyclic { index: usize, deviation: f64 },

    #[error("polygon is not ordinary: vertices {first} and {second} coincide")]
    DuplicateVertices { first: usize, second: usize },

    #[error("central angle {index} = {value} lies outside (-pi, pi]")]
    AngleOutOfRange { index: usize, value: f64 },

    #[error("polygon is not ordinary: central angle {index} = {value:e} is zero within tolerance")]
    ZeroAngle { index: usize, value: f64 },

    #[error("winding number {0} is not an integer within tolerance")]
    NonIntegerWinding(f64),

    #[error("angle profile is degenerate: vertices {first} and {second} coincide")]
    DegenerateProfile { first: usize, second: usize },

    #[error("degenerate edge: vertices {first} and {second} coincide")]
    DegenerateEdge { first: usize, second: usize },

    #[error("determinant D({j},{i},{k}) = {value:e} is within tolerance of zero")]
    MarginalSign { j: usize, i: usize, k: usize, value: f64 },

    #[error("vertex {vertex} lies within tolerance of the line through edge {edge} (offset {offset:e})")]
    MarginalOffset { edge: usize, vertex: usize, offset: f64 },

    #[error("all points are collinear")]
    AllCollinear,

    #[error("the sign check applies only to convex profiles")]
    NotApplicable,

    #[error("no shift or re-orientation of the profile exhibits a forbidden pattern")]
    NoReduction,

    #[error("no interval witness exists for the profile")]
    NoWitness,

    #[error("could not generate a {label} profile with n = {n} after {attempts} attempts")]
    Unsatisfiable { label: String, n: usize, attempts: usize },

    #[error("invalid input: {0}")]
    Parse(String),
}
