//! Exact symmetric functions, Hall polynomials and Ringel-Hall algebras of
//! cyclic quivers.

pub mod arith;
pub mod canonical;
pub mod cli;
pub mod error;
pub mod fq_oracle;
pub mod hall_classical;
pub mod hall_cyclic;
pub mod hall_engine;
pub mod linalg;
pub mod partitions;
pub mod symfunc;
pub mod verify;

pub use error::{Error, Result};
