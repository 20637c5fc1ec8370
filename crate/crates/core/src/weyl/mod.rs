//! Weyl-group periods of type `C_n`: exact symbolic terms, iterated
//! residues and normalization to a completed zeta.

pub mod form;
pub mod group;
pub mod normalize;
pub mod residue;
pub mod term;

pub use form::{variable_names, LinearForm};
pub use group::{coroot, enumerate_weyl, root_system_c, weyl_action, RootSystem, WeylElement, MAX_RANK};
pub use normalize::*;
pub use residue::{
    assemble_period, build_period_term, inversion_count, take_residue, term_residue, weyl_sum, MAX_PERIOD_RANK,
};
pub use term::{eval_symbolic, SymbolicSum, SymbolicTerm, TermKey};
