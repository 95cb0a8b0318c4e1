//! Locality analysis and miss-rate modeling for prefix-level map-caches.
//!
//! The crate measures how much temporal locality a stream of destination-prefix
//! references carries, decides whether the stream can be treated as the output
//! of a stationary process, compresses its average working-set growth into a
//! piecewise power law, and turns that law into cache miss-rate predictions --
//! for plain traffic and for traffic polluted by prefix-scanning attacks.
//! Every prediction can be cross-checked against the built-in trace-driven LRU
//! emulator.
//!
//! Pipeline, end to end:
//!
//! 1. [`prefix_table`]: load a CIDR list, drop more-specific prefixes, and
//!    resolve IPv4 addresses to dense prefix ids by longest-prefix match.
//! 2. [`trace`]: read recorded traces or generate synthetic reference strings.
//! 3. [`workingset`]: working-set curves, interreference distances, and the
//!    average working-set size `s(T)` with its miss-rate companion `m(T)`.
//! 4. [`stationarity`]: curve-clustering and unit-root tests that decide
//!    whether `s(T)` characterizes the whole trace.
//! 5. [`locality`]: the piecewise power-law fit `s(u) = e^beta * u^alpha` and
//!    the derived miss-rate-vs-cache-size law.
//! 6. [`attack`]: the same model extended with scanning-attack terms.
//! 7. [`emulator`]: an exact LRU map-cache emulator for validation.
//!
//! With the default `parallel` feature the embarrassingly parallel pieces
//! (curve families, capacity sweeps, Monte Carlo calibration) run on rayon;
//! without it everything runs sequentially with identical results.

pub mod attack;
pub mod emulator;
pub mod error;
pub mod grid;
pub mod locality;
pub mod prefix_table;
pub mod stationarity;
pub mod trace;
pub mod workingset;

mod par;
mod stats;

pub use error::{Error, Result};
