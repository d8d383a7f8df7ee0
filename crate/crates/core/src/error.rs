//! Crate-wide error type. Every variant message is tagged with the module
//! that produced it so CLI diagnostics can be traced back directly.

/// Errors produced by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument fell outside the mathematical domain of an operation.
    #[error("{module}: {name} = {value} outside domain ({requirement})")]
    Domain {
        module: &'static str,
        name: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// A sample grid that must be strictly increasing was not.
    #[error("{module}: tau grid must be strictly increasing")]
    GridNotIncreasing { module: &'static str },

    /// A residual grid was too short for the finite-difference stencils.
    #[error("moments: residual evaluation needs at least 9 grid points, got {got}")]
    GridTooCoarse { got: usize },

    /// The Fock chain would exceed the supported dimension.
    #[error("fock: chain dimension {dim} exceeds the supported maximum {max}")]
    ChainTooLarge { dim: usize, max: usize },

    /// The implicit-shift QL iteration did not converge.
    #[error(
        "fock: tridiagonal eigensolver failed to converge for eigenvalue {index} \
         after {iterations} iterations (dimension {dim})"
    )]
    EigenNonConvergence {
        index: usize,
        iterations: usize,
        dim: usize,
    },

    /// The adaptive integrator could not take an acceptable step.
    #[error("moments: integrator step size underflow at tau = {tau:.6e}; last good mean = {mean:.6e}")]
    StepFailure { tau: f64, mean: f64 },

    /// The closure produced a variance too negative to be rounding noise.
    #[error(
        "moments: closure variance {value:.6e} at tau = {tau:.6e} fell below the \
         validity threshold {threshold:.6e}"
    )]
    NegativeVariance { tau: f64, value: f64, threshold: f64 },

    /// The damped Newton iteration for (m, omega) stalled.
    #[error(
        "closed_form: parameter solve stalled for n = {n}; last iterate m = {m:.12}, \
         omega^2 = {omega_sq:.12} with residuals ({r1:.3e}, {r2:.3e})"
    )]
    NewtonStall {
        n: f64,
        m: f64,
        omega_sq: f64,
        r1: f64,
        r2: f64,
    },

    /// The closed form is not credible below the minimum atom number.
    #[error(
        "closed_form: n = {n} below the supported minimum {min}; \
         use the exact oracle for small atom numbers"
    )]
    UnsupportedRegime { n: f64, min: f64 },

    /// The variance recovered from the mean equation was too negative,
    /// signalling an invalid parameter solve.
    #[error(
        "closed_form: recovered variance {value:.6e} fell below {threshold:.6e}; \
         the (m, omega) solution is not on the physical branch"
    )]
    InvalidVariance { value: f64, threshold: f64 },

    /// Too much Poisson mass was cut by the sigma truncation window.
    #[error(
        "ensemble: truncated tail mass {mass:.3e} >= 1e-10; \
         increase truncation_sigmas (currently {sigmas})"
    )]
    TruncationTail { mass: f64, sigmas: f64 },

    /// Too much Poisson mass fell below the closed-form minimum atom number.
    #[error(
        "ensemble: weight mass {mass:.3e} excluded below l = {l_min} exceeds {limit:.1e}; \
         use exact per-l curves for this mean atom number"
    )]
    ExcludedMass { mass: f64, l_min: u64, limit: f64 },

    /// Custom ensemble weights failed validation.
    #[error("ensemble: {reason}")]
    InvalidWeights { reason: String },

    /// The two revival phase conditions admit no integer solution.
    #[error(
        "ensemble: no integer r satisfies both phase conditions; best candidate \
         r = {r} leaves a mismatch of {mismatch:.3e} periods"
    )]
    NoSimultaneousMaximum { r: i64, mismatch: f64 },
}
