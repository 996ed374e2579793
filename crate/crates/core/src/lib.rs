//! A finite-lattice toolkit for deciding supersolvability.
//!
//! The crate builds lattices from cover relations, evaluates the modularity
//! predicates that characterize chief chains (left-modularity, right
//! chain-modularity, rank modularity), searches for pentagon sublattices,
//! certifies supersolvability with constructive witnesses, and exhaustively
//! cross-checks that the characterizations agree on every small lattice.
//!
//! Entry points:
//! - [`FiniteLattice::from_covers`] and the [`families`] constructors build
//!   lattices; [`enumerate::enumerate_lattices`] streams all small ones.
//! - [`modularity`] holds the element- and chain-level predicates and
//!   pentagon search.
//! - [`chief`] decides chief chains and supersolvability and verifies the
//!   equivalence of the characterizations.
//! - [`io`] reads and writes the cover-list format and renders DOT
//!   diagrams.

pub mod check;
pub mod chief;
pub mod enumerate;
pub mod families;
pub mod io;
pub mod lattice;
pub mod modularity;

pub use check::Check;
pub use chief::{certify_supersolvable, SupersolvabilityCertificate};
pub use families::{make_family, Family, FamilySpec, SizeGuard};
pub use lattice::{Chain, FiniteLattice, LatticeError, RankFunction};
pub use modularity::PentagonWitness;
