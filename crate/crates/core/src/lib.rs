//! Fixed points of non-monotonic functions over stratified complete lattices.
//!
//! The [`lattice`] module defines the model contract; [`truth`] and [`zoo`]
//! provide concrete models; [`axioms`] and [`laws`] check them exhaustively;
//! [`fixpoint`] computes least fixed points stage by stage; [`lp`] applies
//! all of it to normal logic programs.

pub mod axioms;
pub mod exec;
pub mod fixpoint;
pub mod laws;
pub mod lattice;
pub mod lp;
pub mod truth;
pub mod zoo;

pub use exec::Exec;
pub use lattice::{CompatibleSequence, FiniteLattice, LatticeError, StageIndex, StratifiedLattice};
pub use truth::{TruthModelV, TruthValue};
