//! Markings of the coordinate lines of `[k]^n` in which every point is marked
//! exactly `a` or `b` times.
//!
//! [`constructions::construct`] plans and builds a marking for a feasible
//! instance and certifies it with [`verify::verify`]. [`oracle::search`] decides
//! tiny instances by exhaustive search.

pub mod algebra;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod feasibility;
pub mod grid;
pub mod oracle;
pub mod verify;

pub use constructions::{construct, plan, Certified, Options, Plan, Route};
pub use error::{Error, Result};
pub use feasibility::{feasibility, FeasibilityWitness, Params};
pub use grid::{GroupKind, GroupSpec, LineId, Marking, Point, Shape};
pub use verify::{verify, VerifyReport};
