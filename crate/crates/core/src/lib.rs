//! Homological checks on finite commutative monoids and monoidal semilattices.

pub mod checks;
pub mod enumerate;
pub mod format;
pub mod lattice;
pub mod monoid;
pub mod nsub;
pub mod report;
pub mod scenarios;
pub mod semilattice;
pub mod zexact;
