//! Approximate moment-evolution equations for N̄_e and Δ_e².
//!
//! Two closures of the operator hierarchy are integrated:
//!
//! * vanishing variance — Δ_e ≡ 0, leaving the scalar equation
//!   ∂²N̄ = 6N̄² − 2ĀN̄ + 2B̄ (valid for short times only);
//! * vanishing asymmetry — conserved charges uncorrelated with N_e and the
//!   third central moment dropped, giving the coupled system
//!
//! ```text
//! ∂²N̄  = 6(Δ² + N̄²) − 2ĀN̄ + 2B̄
//! ∂²Δ² = 20N̄³ + 60Δ²N̄ − 8Ā(Δ² + N̄²) + 4(1 + 3B̄)N̄ + 2C̄ − ∂²(N̄²)
//! ```
//!
//! with ∂²(N̄²) expanded analytically as 2(∂N̄)² + 2N̄∂²N̄ so the system is an
//! explicit first-order ODE in four variables. Eliminating Δ² decouples the
//! system into a single fourth-order equation for N̄; that equation is
//! integrated directly by [`quartic_trajectory`] as a cross-check and its
//! pointwise residual on any sampled curve is exposed by
//! [`quartic_residual`] as a consistency meter.

use crate::ode::{integrate_to_grid, OdeOptions};
use crate::trajectory::check_grid;
use crate::{ConservedCharges, Error, Method, Result, Trajectory};

const RTOL: f64 = 1e-9;
const ATOL: f64 = 1e-9;

/// Step cap keeping the cubic-Hermite dense output at the same accuracy as
/// the integrator tolerance: the fourth τ-derivative of N̄ scales like 8n²,
/// so h⁴·8n²/384 ≤ RTOL·n pins h ≈ (48·RTOL·/n)^{1/4}.
fn h_max_for(n0: f64) -> f64 {
    (48.0 * RTOL / n0.max(1.0)).powf(0.25).min(0.05)
}

/// Validity threshold for transient negative variances: anything below
/// −1e−6·n² means the closure has left its regime and the run aborts.
fn variance_floor(n0: f64) -> f64 {
    -(1e-6 * n0 * n0).max(1e-12)
}

/// Right-hand side of the decoupled fourth-order equation,
/// ∂⁴N̄ as a function of N̄ and ∂²N̄.
fn quartic_rhs(charges: &ConservedCharges, n: f64, n_dd: f64) -> f64 {
    let (a, b, c) = (charges.a_bar, charges.b_bar, charges.c_bar);
    -10.0 * a * n_dd + 60.0 * n * n_dd - 240.0 * n.powi(3) + 120.0 * a * n * n
        + n * (24.0 - 48.0 * b - 16.0 * a * a)
        + 12.0 * c
        + 16.0 * a * b
}

/// Integrate the vanishing-variance closure from N̄(0) = n0, ∂N̄(0) = 0.
/// The variance channel is identically zero by assumption.
///
/// The second-order form is integrated rather than its first integral,
/// which would need a square-root sign choice at every turning point.
pub fn vanishing_variance_trajectory(
    charges: &ConservedCharges,
    n0: f64,
    tau_grid: &[f64],
) -> Result<Trajectory> {
    check_grid("moments", tau_grid)?;
    let (a, b) = (charges.a_bar, charges.b_bar);
    let rhs = move |_t: f64, y: &[f64; 2]| [y[1], 6.0 * y[0] * y[0] - 2.0 * a * y[0] + 2.0 * b];
    let opts = OdeOptions::new(RTOL, ATOL, h_max_for(n0));
    let states = integrate_to_grid(rhs, [n0, 0.0], tau_grid, &opts, |_, _| Ok(()))?;
    Ok(Trajectory {
        method: Method::VanishingVariance,
        tau: tau_grid.to_vec(),
        mean_ne: states.iter().map(|y| y[0]).collect(),
        variance_ne: vec![0.0; states.len()],
        charges: *charges,
    })
}

fn asymmetry_rhs(charges: &ConservedCharges, y: &[f64; 4]) -> [f64; 4] {
    let (a, b, c) = (charges.a_bar, charges.b_bar, charges.c_bar);
    let [n, n_dot, var, var_dot] = *y;
    let n_dd = 6.0 * (var + n * n) - 2.0 * a * n + 2.0 * b;
    let var_dd = 20.0 * n.powi(3) + 60.0 * var * n - 8.0 * a * (var + n * n)
        + 4.0 * (1.0 + 3.0 * b) * n
        + 2.0 * c
        - 2.0 * n_dot * n_dot
        - 2.0 * n * n_dd;
    [n_dot, n_dd, var_dot, var_dd]
}

/// Integrate the coupled mean/variance system from the number-state data
/// N̄(0) = n0, ∂N̄(0) = 0, Δ²(0) = 0, ∂Δ²(0) = 0.
///
/// Small negative variance transients (closure noise) are clipped to zero
/// in the output; excursions below −1e−6·n0² abort with an error.
pub fn vanishing_asymmetry_trajectory(
    charges: &ConservedCharges,
    n0: f64,
    tau_grid: &[f64],
) -> Result<Trajectory> {
    check_grid("moments", tau_grid)?;
    let charges_copy = *charges;
    let rhs = move |_t: f64, y: &[f64; 4]| asymmetry_rhs(&charges_copy, y);
    let opts = OdeOptions::new(RTOL, ATOL, h_max_for(n0));
    let floor = variance_floor(n0);
    let states = integrate_to_grid(rhs, [n0, 0.0, 0.0, 0.0], tau_grid, &opts, |t, y| {
        if y[2] < floor {
            Err(Error::NegativeVariance {
                tau: t,
                value: y[2],
                threshold: floor,
            })
        } else {
            Ok(())
        }
    })?;
    Ok(Trajectory {
        method: Method::VanishingAsymmetry,
        tau: tau_grid.to_vec(),
        mean_ne: states.iter().map(|y| y[0]).collect(),
        variance_ne: states.iter().map(|y| y[2].max(0.0)).collect(),
        charges: *charges,
    })
}

/// Integrate the decoupled fourth-order equation directly (cross-check
/// route) from the number-state initial data (n0, 0, −2n0, 0). The variance
/// is recovered algebraically from the mean equation.
pub fn quartic_trajectory(
    charges: &ConservedCharges,
    n0: f64,
    tau_grid: &[f64],
) -> Result<Trajectory> {
    check_grid("moments", tau_grid)?;
    let charges_copy = *charges;
    let rhs = move |_t: f64, y: &[f64; 4]| {
        [y[1], y[2], y[3], quartic_rhs(&charges_copy, y[0], y[2])]
    };
    let opts = OdeOptions::new(RTOL, ATOL, h_max_for(n0));
    let n_dd0 = 6.0 * n0 * n0 - 2.0 * charges.a_bar * n0 + 2.0 * charges.b_bar;
    let states = integrate_to_grid(rhs, [n0, 0.0, n_dd0, 0.0], tau_grid, &opts, |_, _| Ok(()))?;
    let (a, b) = (charges.a_bar, charges.b_bar);
    Ok(Trajectory {
        method: Method::VanishingAsymmetry,
        tau: tau_grid.to_vec(),
        mean_ne: states.iter().map(|y| y[0]).collect(),
        variance_ne: states
            .iter()
            .map(|y| ((y[2] - 6.0 * y[0] * y[0] + 2.0 * a * y[0] - 2.0 * b) / 6.0).max(0.0))
            .collect(),
        charges: *charges,
    })
}

/// Pointwise residual of the fourth-order equation on a sampled mean curve,
/// evaluated with seven-point central finite differences (fourth derivative
/// to O(h⁴), second derivative to O(h⁶)). The trajectory must be sampled on
/// a uniform grid of at least 9 points; residuals are returned for the
/// interior points `3..len-3`.
pub fn quartic_residual(traj: &Trajectory, charges: &ConservedCharges) -> Result<Vec<f64>> {
    let n = traj.tau.len();
    if n < 9 {
        return Err(Error::GridTooCoarse { got: n });
    }
    let h = traj.tau[1] - traj.tau[0];
    for w in traj.tau.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs() {
            return Err(Error::Domain {
                module: "moments",
                name: "tau_grid",
                value: w[1] - w[0],
                requirement: "uniform spacing",
            });
        }
    }

    // Central stencils, offsets -3..=3.
    const D2: [f64; 7] = [
        1.0 / 90.0,
        -3.0 / 20.0,
        3.0 / 2.0,
        -49.0 / 18.0,
        3.0 / 2.0,
        -3.0 / 20.0,
        1.0 / 90.0,
    ];
    const D4: [f64; 7] = [
        -1.0 / 6.0,
        2.0,
        -13.0 / 2.0,
        28.0 / 3.0,
        -13.0 / 2.0,
        2.0,
        -1.0 / 6.0,
    ];

    let y = &traj.mean_ne;
    let h2 = h * h;
    let h4 = h2 * h2;
    let mut residuals = Vec::with_capacity(n - 6);
    for i in 3..n - 3 {
        let mut d2 = 0.0;
        let mut d4 = 0.0;
        for (s, (c2, c4)) in D2.iter().zip(D4.iter()).enumerate() {
            let v = y[i + s - 3];
            d2 += c2 * v;
            d4 += c4 * v;
        }
        d2 /= h2;
        d4 /= h4;
        residuals.push(d4 - quartic_rhs(charges, y[i], d2));
    }
    Ok(residuals)
}
