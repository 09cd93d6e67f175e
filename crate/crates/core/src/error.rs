use num_bigint::BigInt;
use thiserror::Error;

use crate::exactnum::rational::Q;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("interval endpoint {0} is a root; perturb it")]
    EndpointRoot(Q),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("generators {0} and {1} do not commute")]
    NonCommuting(usize, usize),
    #[error("generator {index} has determinant {det}, expected +-1")]
    NotUnimodular { index: usize, det: BigInt },
    #[error("subspace is not invariant under generator {0}")]
    NotInvariant(usize),
    #[error("not an Anosov action: a Lyapunov functional vanishes identically")]
    NotAnosovAction,
    #[error("proportionality of functionals {0} and {1} undecided at {2} bits")]
    UndecidedProportionality(usize, usize, u32),
    #[error("no lattice witness found within scaling cap {0}")]
    WitnessSearchExhausted(u64),
    #[error("no generic 2-plane found after {0} draws")]
    DegeneratePlane(usize),
    #[error("action is not totally non-symplectic")]
    NotTns,
    #[error("linear program infeasible at {0} bits")]
    LpInfeasibleAtPrecision(u32),
    #[error("element is singular (lies on a Lyapunov hyperplane, or undecided at {0} bits)")]
    SingularElement(u32),
    #[error("dimension {dim} exceeds cap {cap}")]
    SizeCap { dim: usize, cap: usize },
    #[error("subresonance inequality undecided at {0} bits")]
    UndecidedBoundary(u32),
    #[error("svg output needs rank 2, got rank {0}")]
    RankUnsupported(usize),
    #[error("precision cap of {0} bits reached")]
    PrecisionExhausted(u32),
    #[error("not a Lie algebra: {0}")]
    NotLieAlgebra(String),
}

pub type Result<T> = std::result::Result<T, Error>;
