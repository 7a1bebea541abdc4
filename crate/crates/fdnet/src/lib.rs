//! Coverage and throughput models for wireless networks that mix half-duplex
//! and full-duplex links under residual self-interference.
//!
//! The crate has two halves that check each other: closed-form/quadrature
//! expressions for link success probability and area throughput
//! ([`analytic`], [`throughput`]), and a Monte Carlo simulator that realizes
//! the underlying random network directly ([`simulator`]). [`quadrature`]
//! supplies the adaptive integrator behind the analytic half, and [`model`]
//! the shared configuration types.

pub mod analytic;
pub mod model;
pub mod quadrature;
pub mod simulator;
pub mod throughput;

pub use model::{DuplexMix, ModelError, NetworkConfig};
