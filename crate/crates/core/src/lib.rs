//! Finite fragments of topological Ramsey spaces.
//!
//! Infinite members are replaced by depth-`N` truncations, and every statement
//! that quantifies over infinite objects is answered with a three-valued verdict:
//! it holds, it fails with a witness, or it cannot be decided at this depth.
//!
//! * [`space`] is the abstract interface ([`SpaceBinding`]) together with the
//!   checkers for the four axioms, depth, basic open sets and almost reduction.
//! * [`ellentuck`] binds the Ellentuck space and carries fronts, barriers and
//!   the Nash-Williams homogenization search.
//! * [`canonize`] holds the brute-force canonization engines.
//! * [`trees`] and [`hypercube`] are the block spaces `R1` and `H2`.
//! * [`graphs`] covers ordered graphs omitting cliques.
//! * [`ideals`] decides `Fin^k` membership for eventually-constant sets.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canonize;
pub mod ellentuck;
pub mod graphs;
pub mod hypercube;
pub mod ideals;
pub mod space;
pub mod trees;

mod subsets;

pub use space::{
    almost_reduces, basic_open, check_a4, check_axioms_a123, depth_of, A4Outcome, A4Witness,
    AlmostVerdict, AxiomReport, ClauseReport, Depth, SearchOptions, Side, SpaceBinding,
    SpaceError, TruncatedMember, Verdict, DEFAULT_BUDGET,
};
