//! Lower bounds for the domination number of cylinders `P_m □ C_n`.
//!
//! The pipeline:
//!
//! * [`words`] enumerates correct words, the column states of a border strip.
//! * [`transfer`] builds the labelled transfer digraph on those words as a
//!   tropical matrix `A`.
//! * [`tropical`] multiplies dense `(min, +)` matrices and persists them.
//! * [`scan`] computes `L(n) = min diag(A^n)`, the minimum wasted domination of
//!   a border strip, until the powers settle into a constant shift.
//! * [`bounds`] turns `L(n)` into `γ(P_m □ C_n) >= ⌈(2 L(n) + m n) / 5⌉` and
//!   compares it with known bounds and exact values.
//! * [`oracle`] is exhaustive ground truth for small instances.

pub mod bounds;
pub mod error;
pub mod oracle;
pub mod scan;
pub mod transfer;
pub mod tropical;
pub mod verify;
pub mod words;

pub use bounds::{BoundReport, CylinderDims};
pub use error::{Error, Result};
pub use oracle::{VertexSet, WastedResult};
pub use scan::{LTable, Recurrence};
pub use transfer::NewlyDominated;
pub use tropical::{TropicalMatrix, TropicalValue};
pub use words::{CorrectWord, WordTable};
