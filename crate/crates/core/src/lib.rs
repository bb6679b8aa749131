//! Conjugacy in finite semigroups of partial transformations.
//!
//! The central relation: `a` and `b` are conjugate when some `g` satisfies
//! `a g = g b` and some `h` satisfies `b h = h a`, with both witnesses
//! restricted to elements that keep the nonzero left multiples of `a`
//! (respectively `b`) away from zero. Without a zero the restriction is
//! vacuous; with one, it stops everything from collapsing into the class
//! of the zero.
//!
//! For the classical families on a finite ground set the relation turns
//! combinatorial. Each partial transformation is a functional digraph,
//! and conjugacy amounts to two-way homomorphisms between those digraphs
//! that respect arcs and terminal vertices. For all partial and for full
//! transformations a pair of numbers decides it outright: the
//! divisibility-reduced set of cycle lengths and the tallest tree height.
//!
//! What's here:
//!
//! - [`transform`]: partial transformations on `{0, .., n-1}` under
//!   left-to-right composition.
//! - [`digraph`]: the associated digraph, its components, cycles, vertex
//!   ranks, and the class invariant.
//! - [`rphom`]: homomorphisms between those digraphs, verification
//!   against two equivalent definitions, and a backtracking search under
//!   totality and injectivity constraints.
//! - [`conjugacy`]: family-aware deciders, with certificates, for
//!   partial, full, injective partial, and bijective transformations.
//! - [`semigroup`]: abstract finite semigroups from Cayley tables, the
//!   five comparison relations, class partitions, and a battery of
//!   structural cross-checks.
//! - [`census`]: class counts over whole families, computed two
//!   independent ways.

pub mod census;
pub mod conjugacy;
pub mod digraph;
pub mod rphom;
pub mod semigroup;
pub mod transform;

pub use census::{census, enumerate, CensusClass, CensusError, CensusMode, CensusReport};
pub use conjugacy::{
    conj_oracle, conj_p_finite, conj_sym_finite, conj_t_finite, ConjugacyError,
    ConjugacyVerdict, SemigroupFamily,
};
pub use digraph::{
    cycle_type, decompose, invariant, sac, to_dot, Component, ComponentKind, ConjInvariant,
    DigraphError, RankTable,
};
pub use rphom::{
    assemble_hom, build_cho_hom, build_cycle_hom, search_rp_hom, verify_intertwining,
    verify_rp_hom, PartialMap, RpHomError, WitnessConstraint,
};
pub use semigroup::{
    AxiomCheck, AxiomReport, AxiomStatus, CayleyTableFile, FiniteSemigroup, RelationKind,
    RelationMatrix, SemigroupError,
};
pub use transform::{BasicKind, PartialTransformation, TransformError};
