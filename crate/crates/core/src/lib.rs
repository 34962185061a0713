//! Construction and verification of branch-and-cut certificates for integer
//! points in rational polyhedra, in exact rational arithmetic.
//!
//! The crate provides:
//!
//! * exact rational scalars, vectors, halfspaces, and polyhedra
//!   ([`rational`], [`geometry`]);
//! * an exact simplex producing Farkas rays and dominance multipliers
//!   ([`lp`]);
//! * checkers for Farkas, lower-bound, and dominance certificates
//!   ([`certificates`]);
//! * Chvátal–Gomory cut steps with attached validity evidence ([`cuts`]);
//! * the two-labeled branch-and-cut tree model and its four verification
//!   goals: infeasibility, hull, validity, membership ([`bctree`]);
//! * split sets, exact cover decisions, and cover-based lower bounds
//!   ([`splitcover`]);
//! * generators for tight instance families plus Helly-number bounds
//!   ([`instances`]);
//! * a brute-force oracle for minimal certificate sizes relative to a
//!   finite move family ([`search`]).
//!
//! The `hellycert` binary exposes all of this on the command line; see the
//! repository README.

pub mod bctree;
pub mod certificates;
pub mod cli;
pub mod cuts;
pub mod error;
pub mod geometry;
pub mod instances;
pub mod linalg;
pub mod lp;
pub mod rational;
pub mod search;
pub mod splitcover;

pub use error::{Error, Result};
