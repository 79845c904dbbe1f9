//! Exact mould calculus.
//!
//! Moulds are families of rational functions indexed by depth. This crate
//! provides the operator algebra on them (products, weight operators, push,
//! swap, circ and the Fay operator), the flexion derivation `arat` with its
//! conjugate `Darit`, property checkers with exact witnesses, closed-form
//! correction moulds, and a truncated noncommutative-series layer that
//! realizes moulds as images of Lie series.

pub mod error;
pub mod exactalg;
pub mod mouldcore;
pub mod ncseries;
pub mod flexion;
pub mod library;
pub mod acceptance;
pub mod checks;
pub mod serial;

pub use error::{Error, Result};
