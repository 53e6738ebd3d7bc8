//! Exact computational algebra for quantum cellular automata on finite
//! metric spaces.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: scalars over ℚ and 𝔽_p with dense matrices and canonical subspaces.
//! * [`space`]: finite metric spaces (intervals, circles, grids, products).
//! * [`spin`]: spin systems and windowed algebra elements, plus the stacking map Φ.
//! * [`subalg`]: subalgebras with their centralizers and tensor splittings.
//! * [`qca`]: locality-preserving homomorphisms, circuits, SWAP, translations.
//! * [`index`]: the boundary index of one-dimensional automata and pumps.
//! * [`shiftnorm`]: reduction of shift-times-circuit automata to shifts.
//! * [`coarse`]: degree chains with l-homology decisions; the tuple chain complex.
//! * [`kone`]: the rationalised determinant class.
//! * [`cli`]: JSON documents and the command handlers behind the `qcalab` binary.
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --release --example translation_index
//! cargo run --release --example pump
//! cargo run --release --example centralizer
//! cargo run --release --example circuits
//! cargo run --release --example shift_normalization
//! cargo run --release --example coarse_bridge
//! cargo run --release --example chain_complex
//! cargo run --release --example k1_class
//! cargo run --release --example stacking
//! cargo run --release --example documents
//! ```

pub mod cli;
pub mod coarse;
pub mod exactalg;
pub mod index;
pub mod kone;
pub mod qca;
pub mod random;
pub mod shiftnorm;
pub mod space;
pub mod spin;
pub mod subalg;

pub use exactalg::{Field, Mat, Scalar, Subspace};
pub use space::MetricSpace;
pub use spin::{Element, SpinSystem};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("field error: {0}")]
    Field(String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("metric error: {0}")]
    Metric(String),
    #[error("system error: {0}")]
    System(String),
    #[error("support error: {0}")]
    Support(String),
    #[error("index out of range: {0}")]
    Range(String),
    #[error("subalgebra error: {0}")]
    Subalgebra(String),
    #[error("homomorphism error: {0}")]
    Homo(String),
    #[error("gate error: {0}")]
    Gate(String),
    #[error("cut error: {0}")]
    Cut(String),
    #[error("normalization error: {0}")]
    Normalize(String),
    #[error("chain error: {0}")]
    Chain(String),
    #[error("factorization error: {0}")]
    Factor(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
