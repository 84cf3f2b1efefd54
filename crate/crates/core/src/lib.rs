//! Exact enumeration and simulation of rooted maps of arbitrary genus.
//!
//! * [`algebra`]: big integers, rationals and dense one/two-variable
//!   polynomials.
//! * [`gfengine`]: coefficient recurrences for the six statistic equations,
//!   closed-form auxiliary series and the loop-moment triangle.
//! * [`mapcore`]: rotation-system maps, their recursive construction,
//!   enumeration, statistics and exactly uniform sampling.
//! * [`chords`]: chord diagrams, indecomposability and rejection sampling.
//! * [`stats`]: reference limit laws and distances to them.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod chords;
pub mod gfengine;
pub mod mapcore;
pub mod stats;

pub use algebra::{BigInt, BigPoly, BigRat, Var};
pub use gfengine::{dist_series, map_counts, phi_series, DistTable, Statistic};
