//! Workbench for finite residuated lattices and lattice-valued states.
//!
//! The crate validates finite residuated lattices, classifies the usual
//! subvarieties (MTL, BL, MV, Heyting, Goedel, product, ...), enumerates
//! lattice-valued states of several classes together with their kernels,
//! quotients and completions, and runs exhaustive counterexample scans over
//! a catalog of all small algebras up to isomorphism.

pub mod algebra;
pub mod catalog;
pub mod classify;
pub mod convergence;
pub mod filter;
pub mod io;
pub mod report;
pub mod riecan;
pub mod samples;
pub mod state;
pub mod tnorm;

pub use algebra::{derived, validate_lattice, AlgebraError, RawAlgebra, ResiduatedLattice};
pub use classify::{classify, identity_suite, ClassificationReport};
pub use report::{ItemStatus, SuiteItem, SuiteReport};
pub use state::{StateClassification, StateMap};
