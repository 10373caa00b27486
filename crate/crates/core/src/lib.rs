//! Finite semilattices, their filters and spectra, finite inverse semigroups
//! acting on them, and a search for contracting blocks of injective maps on
//! cylinder sets and finite sets.

pub mod corpus;
pub mod filter;
pub mod lattice;
pub mod semigroup;
pub mod symbolic;
