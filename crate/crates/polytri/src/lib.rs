//! Exact-arithmetic construction and verification of regular unimodular
//! triangulations of matroid base polytopes, integral generalized
//! permutahedra, and matroid independence polytopes.

pub mod exact_linalg;
pub mod lp;
pub mod matroid;
pub mod polytope;
pub mod subdivision;
pub mod triangulate;
pub mod genperm;
pub mod verifier;
pub mod io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matroid: {0}")]
    InvalidMatroid(String),
    #[error("cannot delete a coloop (element {0})")]
    DeleteColoop(usize),
    #[error("cannot contract a loop (element {0})")]
    ContractLoop(usize),
    #[error("not a generalized permutahedron: no flag of subset-sum equations cuts out the affine hull")]
    NoSpanFlag,
    #[error("not a simplex: vertices affinely dependent")]
    NotSimplex,
    #[error("face is not a union of faces of the triangulation")]
    NotAFace,
    #[error("non-submodular table: witness pair S={0:#b}, T={1:#b}")]
    NotSubmodular(u32, u32),
    #[error("dicing cell is not a matroid base polytope translate")]
    BadDicingCell,
    #[error("genericity retry cap exceeded after {0} attempts")]
    RetryCapExceeded(usize),
    #[error("epsilon concretization failed after {0} halvings")]
    EpsilonCapExceeded(usize),
    #[error("genericity brute-force check capped at dimension {0}")]
    GenericityDimCap(usize),
    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;
