//! Secure computation offloading for post-quantum cryptographic workloads.
//!
//! A small edge cell: one edge server, `K` resource-constrained devices, and a
//! passive eavesdropper whose channel is known only up to a bounded estimation
//! error. Each device either computes its cryptographic task locally or
//! offloads it to the edge over a wiretap-coded link while the non-offloading
//! devices jam the eavesdropper with artificial noise. The crate models every
//! rate and latency term of that system and minimizes total latency by
//! alternating three sub-solvers:
//!
//! - [`sca::solve_sp1`] — transmit powers, by successive convex approximation
//!   with an in-house log-barrier Newton method,
//! - [`resource::allocate_compute`] — the closed-form KKT split of the edge
//!   CPU budget,
//! - [`resource::greedy_offload`] — the offload/local decision, greedy in the
//!   per-device latency gain.
//!
//! [`driver::solve`] orchestrates the loop; [`baselines::run_scheme`] runs the
//! comparison schemes (fixed max power, uniform compute split, full local
//! computing, and the no-eavesdropper bound) against the same model.
//!
//! The crate is `no_std`-compatible (with `alloc`); disable the default `std`
//! feature and enable `libm` for builds without the standard library. All
//! randomness flows through [`rng`]: seeded ChaCha8 substreams that are
//! bit-reproducible across platforms.

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(all(not(feature = "std"), not(feature = "libm")))]
compile_error!("pqoff-core requires either the `std` feature or the `libm` feature");

pub mod baselines;
pub mod catalog;
pub mod driver;
pub mod error;
pub(crate) mod linalg;
pub(crate) mod math;
pub mod model;
pub mod resource;
pub mod rng;
pub mod sca;
pub mod scenario;

pub use error::Error;
