//! Base-2 automata toolkit and verification pipeline.
//!
//! The crate compiles first-order formulas over natural numbers (with base-2
//! predicates given as morphism fixed points) into multi-track DFAs, derives
//! counting linear representations from them, minimizes those representations
//! over exact rationals, synthesizes an output automaton from the orbit of a
//! representation, and cross-checks the whole chain against an independent
//! brute-force oracle.

pub mod automata;
pub mod dfao;
pub mod fixture;
pub mod linrep;
pub mod logic;
pub mod numeration;
pub mod oracle;
pub mod orbit;
pub mod pipeline;
pub mod session;
pub mod verify;

pub use automata::{AutomataError, BoolOp, Dfa, Nfa};
pub use dfao::Dfao;
pub use linrep::{count_rep, LinRep, LinRepError, Rational};
pub use orbit::{orbit_dfao, output_range, OrbitError};
pub use pipeline::{ArtifactCache, MemoryCache, Pipeline, PipelineError};
pub use logic::{compile, CompileError, CompiledFormula, Formula, Morphism, Registry};
pub use numeration::{align, decode, encode_canonical, Word};
pub use verify::{verify_theorem, Milestone, TheoremReport, VerifyLimits};
