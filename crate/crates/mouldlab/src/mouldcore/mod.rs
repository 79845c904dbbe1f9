//! The mould type and its elementary operator algebra.

pub mod maps;
mod mould;
mod ops;

pub use mould::{Mould, Side};
pub use ops::{circ, dar, dar_inv, delta, delta_inv, dur, dur_inv, fay, lu, mu, push_u, push_v, shuffle_sum, swap, MouldA};
