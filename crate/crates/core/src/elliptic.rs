//! Complete elliptic integral K(m) and the Jacobian elliptic functions
//! cn, sn, dn with analytic derivatives of cn².
//!
//! Everything is built on the arithmetic–geometric mean. K(m) is the AGM
//! limit directly (DLMF 19.8.5); cn/sn/dn come from the descending Landen
//! chain driven by the same AGM sequence, evaluated by the backward
//! function-value recurrence (A&S 16.4, the classical `sncndn` scheme).
//! That recurrence stays well conditioned at the quarter period, where the
//! angle-based variant degenerates to 0/0.
//!
//! Parameter convention: the argument is the *parameter* m = k², matching
//! `scipy.special.ellipk` / `ellipj`. The physics upstream operates at
//! m = 1 − 2/n, so the chain is exercised deep in the near-degenerate
//! regime; for 1 − m < 1e−12 the functions switch to the exact hyperbolic
//! limit cn = dn = sech, sn = tanh.

use crate::{Error, Result};

/// Iteration cap for the AGM; convergence is quadratic and in practice
/// takes < 12 steps anywhere in [0, 1).
const MAX_AGM_ITER: usize = 64;

/// Below this complementary parameter the Landen chain is replaced by the
/// hyperbolic limit.
const HYPERBOLIC_SWITCH: f64 = 1e-12;

/// AGM stopping threshold. Quadratic convergence squares the remaining gap,
/// so stopping at √ε leaves an error below double-precision resolution.
const AGM_TOL: f64 = 1e-9;

/// Values of the three Jacobian elliptic functions at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jacobi {
    pub cn: f64,
    pub sn: f64,
    pub dn: f64,
}

fn check_parameter(module_op: &'static str, m: f64, allow_one: bool) -> Result<()> {
    let ok = if allow_one {
        (0.0..=1.0).contains(&m)
    } else {
        (0.0..1.0).contains(&m)
    };
    if !ok || m.is_nan() {
        return Err(Error::Domain {
            module: "elliptic",
            name: module_op,
            value: m,
            requirement: if allow_one { "0 <= m <= 1" } else { "0 <= m < 1" },
        });
    }
    Ok(())
}

/// Complete elliptic integral of the first kind,
///
/// ```text
/// K(m) = ∫₀^{π/2} dθ / √(1 − m sin²θ) = π / (2 AGM(1, √(1−m))).
/// ```
///
/// Monotone increasing on [0, 1), K(0) = π/2, and K(m) ≈ ½ ln(16/(1−m))
/// as m → 1. Relative accuracy is a few ulps for m ≤ 1 − 1e−10.
pub fn complete_elliptic_k(m: f64) -> Result<f64> {
    check_parameter("m", m, false)?;
    let mut a = 1.0_f64;
    let mut b = (1.0 - m).sqrt();
    let mut converged = false;
    for _ in 0..MAX_AGM_ITER {
        if (a - b).abs() <= f64::EPSILON * a {
            converged = true;
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    assert!(
        converged || (a - b).abs() <= 4.0 * f64::EPSILON * a,
        "AGM failed to converge for m = {m}"
    );
    Ok(std::f64::consts::PI / (a + b))
}

/// Jacobian elliptic functions cn(z|m), sn(z|m), dn(z|m) for real z,
/// evaluated simultaneously.
///
/// At m = 0 these reduce to (cos z, sin z, 1); at m = 1 (and within
/// 1e−12 of it) to (sech z, tanh z, sech z). cn² is periodic in z with
/// period 2K(m). Arguments of any magnitude are reduced modulo the full
/// period 4K(m) first.
pub fn jacobi_cn_sn_dn(z: f64, m: f64) -> Result<Jacobi> {
    check_parameter("m", m, true)?;
    if !z.is_finite() {
        return Err(Error::Domain {
            module: "elliptic",
            name: "z",
            value: z,
            requirement: "finite",
        });
    }

    if 1.0 - m < HYPERBOLIC_SWITCH {
        let sech = 1.0 / z.cosh();
        return Ok(Jacobi {
            cn: sech,
            sn: z.tanh(),
            dn: sech,
        });
    }

    // Reduce to |z| <= 2K; sn and cn have period 4K, dn has period 2K.
    let quarter = complete_elliptic_k(m)?;
    let full = 4.0 * quarter;
    let z = z - full * (z / full).round();

    Ok(sncndn(z, m))
}

/// Backward Landen recurrence over the AGM chain (A&S 16.4). `m < 1`.
fn sncndn(u: f64, m: f64) -> Jacobi {
    let mut emc = 1.0 - m;
    if emc == 1.0 {
        // m == 0 exactly: circular limit.
        return Jacobi {
            cn: u.cos(),
            sn: u.sin(),
            dn: 1.0,
        };
    }

    let mut a = 1.0_f64;
    let mut c = 0.0_f64;
    let mut em = [0.0_f64; MAX_AGM_ITER];
    let mut en = [0.0_f64; MAX_AGM_ITER];
    let mut level = 0;
    for i in 0..MAX_AGM_ITER {
        level = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= AGM_TOL * a {
            break;
        }
        emc *= a;
        a = c;
    }
    assert!(
        (em[level] - en[level]).abs() <= AGM_TOL * em[level],
        "Landen chain failed to converge for m = {m}"
    );

    let phi = c * u;
    let mut sn = phi.sin();
    let mut cn = phi.cos();
    let mut dn = 1.0;
    // Near a multiple of 2K the recurrence variables scale like 1/sn and
    // would overflow; there sn is already exact to O(sn^3) and cn = ±1,
    // dn = 1 hold to the same order.
    if sn.abs() > 1e-30 {
        let mut aa = cn / sn;
        c *= aa;
        for i in (0..=level).rev() {
            let b = em[i];
            aa *= c;
            c *= dn;
            dn = (en[i] + aa) / (b + aa);
            aa = c / b;
        }
        let inv = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn >= 0.0 { inv } else { -inv };
        cn = c * sn;
    }
    Jacobi { cn, sn, dn }
}

/// cn²(z|m) together with its first two derivatives in z:
///
/// ```text
/// f  = cn²,
/// f′ = −2 cn·sn·dn,
/// f″ = 2(1−m) + (8m−4) f − 6m f².
/// ```
///
/// The second form follows from the derivative table of the elliptic
/// functions and the two quadratic identities; it is exact at the corners
/// (f″ = 2(1−m) at the quarter period, where f = 0).
pub fn cn_squared_derivatives(z: f64, m: f64) -> Result<(f64, f64, f64)> {
    let j = jacobi_cn_sn_dn(z, m)?;
    let f = j.cn * j.cn;
    let fp = -2.0 * j.cn * j.sn * j.dn;
    let fpp = 2.0 * (1.0 - m) + (8.0 * m - 4.0) * f - 6.0 * m * f * f;
    Ok((f, fp, fpp))
}
