use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("polynomial must have degree >= 1 with a nonzero leading coefficient")]
    ZeroDegree,
    #[error("roots {0} and {1} are closer than the separation tolerance ({2:e})")]
    DegenerateRoots(usize, usize, f64),
    #[error("root finder did not converge (residual {0:e})")]
    NoConvergence(f64),
    #[error("arg jump of {jump:.3} rad between samples {index} and {next} exceeds pi/2", next = index + 1)]
    BranchStep { index: usize, jump: f64 },
    #[error("point {index} lies within eps_root of a root")]
    OnRoot { index: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("curve has {got} points, need at least {need}")]
    TooFewPoints { got: usize, need: usize },
    #[error("curve has zero length")]
    ZeroLength,
    #[error("root index {0} out of range")]
    BadRoot(usize),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("phase lift failed at sample {index}: increment {jump:.3} rad")]
    LiftFailure { index: usize, jump: f64 },
    #[error("omega weight undefined: p and p' both vanish")]
    WeightUndefined,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlowError {
    #[error("point {index} is within eps_root of root {root}; run surgery first")]
    NearRoot { index: usize, root: usize },
    #[error("step rejected: {0}")]
    StepRejected(String),
    #[error("split failed: piece would have {0} points")]
    SplitFailed(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SlagError {
    #[error("shoot stalled at arclength {0:.4}: direction lift unresolved")]
    ShootStalled(f64),
    #[error("no connector: miss function has no sign change over the window")]
    NotFound,
    #[error("root index {0} out of range")]
    BadRoot(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloerError {
    #[error("angle {0} outside (0, pi)")]
    AngleRange(f64),
    #[error("expected {expected} angles, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("Floer index {0} is not an integer within tolerance")]
    NotIntegral(f64),
    #[error("class needs a curve pinned at both ends")]
    Unpinned,
    #[error("chord passes through root {0}")]
    ChordThroughRoot(usize),
    #[error("Jordan-Hölder recursion exceeded depth {0}")]
    NonTerminating(usize),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}
