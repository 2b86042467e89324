//! Soft-decision decoding of product and staircase codes built from extended
//! BCH constituent codes.
//!
//! The crate provides the building blocks used by the simulation harness:
//!
//! * [`gf`] and [`ebch`]: GF(2^m) arithmetic and the constituent code with its
//!   bounded-distance decoder.
//! * [`chase`]: Chase-II candidate lists with path metrics.
//! * [`softout`]: soft-output rules for one constituent word, including the
//!   iteration-independent gamma rule, the Chase-Pyndiah rules and an exact
//!   brute-force APP oracle.
//! * [`product`] and [`staircase`]: iterative row/column decoding and
//!   sliding-window decoding.
//! * [`channel`]: BPSK over AWGN with seeded noise streams.

pub mod channel;
pub mod chase;
pub mod ebch;
pub mod gf;
pub mod product;
pub mod softout;
pub mod staircase;

mod error;

pub use error::Error;

pub use chase::{chase2_list, least_reliable_positions, path_metric, CandidateList};
pub use ebch::{CodeSpec, HardWord};
pub use gf::FieldTable;
pub use softout::{PyndiahCoefficients, SoftOutput};
