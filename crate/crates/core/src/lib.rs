//! Perfect state transfer on weighted and unweighted graphs of the Johnson
//! scheme `J(2k, k)`, decided in exact arithmetic and cross-checked by an
//! independent numeric quantum-walk simulation.
//!
//! * [`exactmath`]: bignum binomials, Kummer valuations, Lucas residues.
//! * [`scheme`]: eigenvalues `p_r(s)`, the weight/coefficient transform,
//!   explicit adjacency matrices.
//! * [`transfer`]: the parity criterion and the construction of PST weights.
//! * [`unweighted`]: 0/1 unions of distance graphs, the mod `2^h`
//!   characterization and exhaustive search.
//! * [`oracle`]: dense eigendecomposition of `U(t) = exp(-itA)`.
//! * [`cli`]: JSON/CSV front end used by the `jpst` binary.

pub mod cli;
pub mod error;
pub mod exactmath;
pub mod matrix;
pub mod oracle;
pub mod par;
pub mod scheme;
pub mod transfer;
pub mod unweighted;
pub mod wire;

pub use error::{Error, Result};
