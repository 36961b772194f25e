use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix")]
    SingularMatrix,
    #[error("characteristic polynomial has non-real roots (eigenvalue moduli {moduli:?})")]
    ComplexSpectrum { moduli: [f64; 3] },
    #[error("points coincide projectively")]
    CoincidentPoints,
    #[error("lines coincide projectively")]
    CoincidentLines,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("degenerate pair in cross-ratio")]
    DegeneratePair,
    #[error("point is not incident to line")]
    InvalidFlag,
    #[error("invalid moduli: (zt^2-1)(zb^2-1) vanishes")]
    InvalidModuli,
    #[error("degenerate box: {0}")]
    DegenerateBox(&'static str),
    #[error("degenerate configuration in box transformation")]
    DegenerateConfiguration,
    #[error("box is not convex")]
    NotConvex,
    #[error("not a Farey edge")]
    NotAFareyEdge,
    #[error("word is not in the index-2 subgroup")]
    NotInSubgroupO,
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(&'static str),
    #[error("no sign change of h on the search interval")]
    NoBracket,
    #[error("special box moduli (0,0)")]
    SpecialBox,
    #[error("no symmetric intertwiner: obstruction determinant {0:e}")]
    NoSolution(f64),
    #[error("matrix is not a rotation of angle in (0, pi)")]
    NotARotation,
    #[error("point outside the domain")]
    OutsideDomain,
    #[error("domains are not nested")]
    NotNested,
    #[error("element is not loxodromic")]
    NonLoxodromic,
    #[error("no convergence within {0} steps")]
    NoConvergence(usize),
    #[error("deformation parameter outside the region")]
    OutsideRegion,
    #[error("identity matrix given")]
    IdentityInput,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
