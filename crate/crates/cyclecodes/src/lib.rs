//! Bounds, constructions and certificates for codes on cycle graphs.
//!
//! Words live in `Z_q^n` and are compared with a per-coordinate semimetric
//! that is 0 for equal symbols, 1 for symbols adjacent on the `q`-cycle and
//! infinite otherwise, summed over coordinates. The crate computes upper and
//! lower bounds on the asymptotic rate of codes under this semimetric,
//! performs exact maximum-code search at small lengths, builds the
//! constructive codes behind the lower bounds, and assembles verifiable
//! numerical certificates (linear-programming and positive-semidefinite)
//! behind the upper bounds.
//!
//! All rates are natural-log based (nats) unless rescaled by a caller.

pub mod bounds;
pub mod certs;
pub mod codes;
mod dd;
pub mod fourier;
pub mod kraw;
pub mod report;
pub mod simplex;

pub use bounds::{cycle_params, CycleParams};
pub use codes::{Code, ExtDist, WeightTable, Word};
pub use kraw::{LpCertificate, Scheme};
pub use report::CheckItem;
