//! Analysis and slot-level Monte-Carlo simulation of spectrum sharing with
//! a full-duplex secondary user.
//!
//! Two protocols are covered end to end:
//!
//! - **LAT (listen-and-talk)**: one antenna senses continuously while the
//!   other transmits whenever the band was last judged idle, at the cost
//!   of residual self-interference leaking into the sensing antenna.
//! - **LBT (listen-before-talk)**: the classic half-duplex baseline that
//!   spends the first `tau` of every slot sensing with both antennas and
//!   the remainder transmitting over a 2x2 spatially-multiplexed link.
//!
//! For each protocol the crate provides the closed-form detection-error
//! probabilities, adaptive thresholds for a target miss-detection rate,
//! steady-state occupancies of the decision chains, and throughput — plus
//! a slot-level Monte-Carlo engine that validates every closed form, and
//! a mode-switching layer that compares the two throughputs and sweeps
//! the interesting parameters (spatial correlation, transmit power, ROC).

pub mod channel;
pub mod error;
pub mod lat;
pub mod lbt;
pub mod params;
pub mod simulator;
pub mod stats;
pub mod switching;

pub use error::{Error, Result};
pub use params::{db_to_linear, linear_to_db, DerivedRatios, JointState, SystemParams};
pub use stats::{Complex, MomentPair};
