//! Numerical laboratory for a trapped two-level condensate exchanging
//! excitations with one resonant cavity mode (equivalently, parametric
//! down-conversion with a quantized pump).
//!
//! The interaction Hamiltonian is trilinear,
//!
//! ```text
//! H = -ħΩ (b_g† b_e a† + b_g b_e† a),
//! ```
//!
//! and all dynamics are expressed in the dimensionless time τ = Ωt. The
//! crate computes the mean number of excited atoms N̄_e(τ) and its variance
//! Δ_e² through three mutually cross-checking routes:
//!
//! * [`fock`] — exact propagation in the number basis, reduced to a
//!   one-dimensional chain by the conserved total atom number S_A and
//!   excitation number S_E; the ground truth for everything else.
//! * [`moments`] — the vanishing-variance closure and the coupled
//!   mean/variance system obtained by neglecting the third central moment
//!   ("vanishing asymmetry"), integrated with an adaptive Runge–Kutta 5(4).
//! * [`closed_form`] — the analytic number-state solution
//!   N̄_e(τ) = n − ½mω² cn²(ωτ − K(m)|m), with (m, ω) solved from two
//!   algebraic equations by a damped 2-D Newton iteration.
//!
//! [`ensemble`] superposes per-number-state curves with Poisson (or custom)
//! weights, which reproduces the coherent-state evolution exactly and
//! exhibits collapse, revival, and fractional revivals. [`elliptic`] is the
//! self-contained special-function kernel (K(m), cn, sn, dn) used by the
//! closed form; it is accurate arbitrarily close to the m → 1 degenerate
//! limit where the physics lives (m ≈ 1 − 2/n).

pub mod closed_form;
pub mod elliptic;
pub mod ensemble;
mod error;
pub mod fock;
pub mod moments;
mod ode;
pub mod trajectory;
mod tridiag;

pub use error::Error;
pub use trajectory::{ConservedCharges, Method, SystemSpec, Trajectory};

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
