//! Flag-algebra toolkit for induced subgraph densities.
//!
//! Builds the semidefinite programs of the flag-algebra method for
//! inducibility-type problems, emits them for an external solver, and checks
//! sum-of-squares certificates in exact rational arithmetic.

pub mod algebra;
pub mod certificate;
pub mod density;
mod error;
pub mod graph;
pub mod linalg;
pub mod rational;
pub mod sdp;

pub use algebra::{Basis, FlagBasis, Parity, QuantumGraph};
pub use certificate::{Certificate, PsdCheck, VerificationReport};
pub use density::StepGraphon;
pub use error::{Error, Result};
pub use graph::{Graph, HostGraph, LabeledGraph, Permutation, TypeSigma};
pub use rational::Rational;
pub use sdp::{Manifest, SdpProblem, SolverSolution};
