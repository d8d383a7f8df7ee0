//! Adaptive embedded Runge–Kutta 5(4) (Dormand–Prince coefficients) with
//! cubic Hermite dense output onto a caller-supplied sample grid.
//!
//! The moment systems integrated here are small polynomial ODEs, so the
//! solver is kept deliberately compact: classic error-per-step control with
//! a fifth-root step law, and a hard `h_max` chosen by the caller so the
//! Hermite interpolant is as accurate as the steps themselves.

use crate::{Error, Result};

pub(crate) struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Upper bound on the step size; also the initial trial step.
    pub h_max: f64,
}

impl OdeOptions {
    pub fn new(rtol: f64, atol: f64, h_max: f64) -> Self {
        Self { rtol, atol, h_max }
    }
}

const MAX_STEPS: usize = 50_000_000;

/// Butcher tableau of the Dormand–Prince 5(4) pair.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights (identical to the last tableau row: FSAL).
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
/// Embedded fourth-order weights.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate `y' = f(t, y)` from t = 0 with initial state `y0`, producing
/// the solution on the strictly increasing `grid` (grid points must be
/// ≥ 0). Dense output between accepted steps is cubic Hermite on the step
/// endpoints and their derivatives.
pub(crate) fn integrate_to_grid<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    y0: [f64; N],
    grid: &[f64],
    opts: &OdeOptions,
    mut inspect: impl FnMut(f64, &[f64; N]) -> Result<()>,
) -> Result<Vec<[f64; N]>> {
    let mut out = Vec::with_capacity(grid.len());
    if grid.is_empty() {
        return Ok(out);
    }
    let t_end = *grid.last().unwrap();

    let mut t = 0.0_f64;
    let mut y = y0;
    let mut dy = f(t, &y);
    let mut next_emit = 0;

    // Emit any samples exactly at t = 0.
    while next_emit < grid.len() && grid[next_emit] <= 0.0 {
        out.push(y);
        next_emit += 1;
    }
    inspect(t, &y)?;

    let mut h = opts.h_max.min(t_end.max(1e-12));
    let mut steps = 0;
    while next_emit < grid.len() {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::StepFailure { tau: t, mean: y[0] });
        }
        if h < 1e-14 * t.abs().max(1.0) {
            return Err(Error::StepFailure { tau: t, mean: y[0] });
        }
        if t + h > t_end {
            h = t_end - t;
        }

        // Stage evaluations; k[0] is FSAL from the previous step.
        let mut k = [[0.0; N]; 7];
        k[0] = dy;
        for s in 1..7 {
            let mut ys = y;
            for (i, ysi) in ys.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                *ysi += h * acc;
            }
            k[s] = f(t + C[s] * h, &ys);
        }

        let mut y5 = y;
        let mut err_sq = 0.0;
        for i in 0..N {
            let mut acc5 = 0.0;
            let mut acc4 = 0.0;
            for s in 0..7 {
                acc5 += B5[s] * k[s][i];
                acc4 += B4[s] * k[s][i];
            }
            y5[i] += h * acc5;
            let scale = opts.atol + opts.rtol * y[i].abs().max(y5[i].abs());
            let e = h * (acc5 - acc4) / scale;
            err_sq += e * e;
        }
        let err = (err_sq / N as f64).sqrt();

        if err <= 1.0 {
            // Accept; emit grid points inside (t, t+h] by cubic Hermite.
            let t_new = t + h;
            let dy_new = k[6]; // FSAL: f(t_new, y5)
            while next_emit < grid.len() && grid[next_emit] <= t_new + 1e-15 {
                let tg = grid[next_emit].min(t_new);
                let s = (tg - t) / h;
                let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
                let h10 = s * (1.0 - s) * (1.0 - s);
                let h01 = s * s * (3.0 - 2.0 * s);
                let h11 = s * s * (s - 1.0);
                let mut yg = [0.0; N];
                for i in 0..N {
                    yg[i] = h00 * y[i] + h10 * h * dy[i] + h01 * y5[i] + h11 * h * dy_new[i];
                }
                out.push(yg);
                next_emit += 1;
            }
            t = t_new;
            y = y5;
            dy = dy_new;
            inspect(t, &y)?;
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = (h * factor).min(opts.h_max);
        } else {
            h *= (0.9 * err.powf(-0.2)).max(0.2);
        }
    }

    Ok(out)
}
