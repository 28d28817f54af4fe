//! Computational convex geometry for shadow covering.
//!
//! Bodies are convex polytopes held by their vertex list ([`Body`]). On top of
//! the polytope kernel the crate provides
//!
//! * translate containment `K + x ⊆ L` decided by linear programming
//!   ([`containment`]),
//! * Steiner polynomials and mixed volumes computed two independent ways
//!   ([`mixedvol`]),
//! * sampled certificates that every projection of `L` covers the matching
//!   projection of `K`, along with the dilate bounds that follow from it
//!   ([`shadow`]).
//!
//! Sampled sweeps certify covering at their stated resolution only; they are
//! not proofs of the universally quantified statement.

pub mod containment;
pub mod error;
pub mod linalg;
pub mod lp;
pub mod mixedvol;
pub mod polytope;
pub mod shadow;
pub mod tol;

pub use containment::{ContainmentWitness, ScaleResult};
pub use error::{Error, Result};
pub use linalg::{AffineMap, Basis, Matrix, Vector};
pub use lp::{LinearProgram, LpOutcome, LpStatus, Sense};
pub use mixedvol::{InterpFamily, SteinerCoefficients};
pub use polytope::{Body, BodyJson, BodyKind, HPolytope, Halfspace, VPolytope};
pub use shadow::{BoundReport, CoveringReport, DirectionSample, Strategy, Verdict};
pub use tol::Tolerances;
