//! Exact lattice and cohomology computations for the period-index problem on
//! abelian threefolds.
//!
//! Everything here works over arbitrary-precision integers and rationals and
//! needs only `alloc`. Serialization, file formats and the command line live
//! in the companion `pindex` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod brauerhodge;
pub mod dtseries;
pub mod error;
pub mod evenring;
pub mod exactalg;
pub mod pipeline;
pub mod sample;
pub mod tiltstab;

pub use error::Error;
pub use exactalg::{Int, Mat, Rat};
