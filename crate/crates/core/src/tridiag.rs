//! Symmetric tridiagonal eigensolver: implicit-shift QL with accumulated
//! plane rotations (EISPACK `tql2` lineage). The Fock chain Hamiltonian is
//! tridiagonal with zero diagonal, so no Householder reduction is needed;
//! the decomposition is computed once and reused for propagation at every
//! sample time.

use crate::{Error, Result};

/// Eigendecomposition of a real symmetric tridiagonal matrix.
///
/// `eigenvectors` is row-major with dimension `dim × dim`; column `j` is the
/// orthonormal eigenvector belonging to `eigenvalues[j]`, sorted ascending.
#[derive(Debug, Clone)]
pub(crate) struct TridiagonalEigen {
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<f64>,
}

impl TridiagonalEigen {
    #[inline]
    pub fn vector_component(&self, row: usize, col: usize) -> f64 {
        self.eigenvectors[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.eigenvectors[row * self.dim..(row + 1) * self.dim]
    }
}

const MAX_QL_SWEEPS: usize = 50;

/// Decompose the matrix with diagonal `diag` and off-diagonal `offdiag`
/// (`offdiag[i]` couples rows `i` and `i+1`).
pub(crate) fn eigh_tridiagonal(diag: &[f64], offdiag: &[f64]) -> Result<TridiagonalEigen> {
    let n = diag.len();
    assert_eq!(
        offdiag.len() + 1,
        n.max(1),
        "off-diagonal length must be dim - 1"
    );

    let mut d = diag.to_vec();
    if n <= 1 {
        return Ok(TridiagonalEigen {
            dim: n,
            eigenvalues: d,
            eigenvectors: vec![1.0; n * n],
        });
    }

    // e[i] couples i and i+1; e[n-1] is workspace.
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(offdiag);

    let mut z = vec![0.0; n * n];
    for k in 0..n {
        z[k * n + k] = 1.0;
    }

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            // Look for a negligible subdiagonal element to split the matrix.
            let mut m = l;
            while m < n - 1 {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::EigenNonConvergence {
                    index: l,
                    iterations: sweeps,
                    dim: n,
                });
            }

            // Wilkinson-style shift from the leading 2x2 block.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;

            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Rotation annihilated prematurely; drop the shift and retry.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;

                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut eigenvectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[k * n + new_col] = z[k * n + old_col];
        }
    }

    Ok(TridiagonalEigen {
        dim: n,
        eigenvalues,
        eigenvectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn reconstruction_residual(d: &[f64], e: &[f64], eig: &TridiagonalEigen) -> f64 {
        let n = eig.dim;
        let mut worst: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                let mut tv = d[k] * eig.vector_component(k, j);
                if k > 0 {
                    tv += e[k - 1] * eig.vector_component(k - 1, j);
                }
                if k + 1 < n {
                    tv += e[k] * eig.vector_component(k + 1, j);
                }
                worst = worst.max((tv - eig.eigenvalues[j] * eig.vector_component(k, j)).abs());
            }
        }
        worst
    }

    fn orthogonality_residual(eig: &TridiagonalEigen) -> f64 {
        let n = eig.dim;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a..n {
                let dot: f64 = (0..n)
                    .map(|k| eig.vector_component(k, a) * eig.vector_component(k, b))
                    .sum();
                let target = if a == b { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }

    #[test]
    fn uniform_chain_matches_analytic_spectrum() {
        // Zero diagonal, constant off-diagonal -1: eigenvalues -2cos(j pi / (n+1)).
        let n = 24;
        let d = vec![0.0; n];
        let e = vec![-1.0; n - 1];
        let eig = eigh_tridiagonal(&d, &e).unwrap();
        for (j, &lambda) in eig.eigenvalues.iter().enumerate() {
            let exact = -2.0 * ((j + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert_relative_eq!(lambda, exact, epsilon = 1e-12, max_relative = 1e-12);
        }
    }

    #[test]
    fn two_by_two_analytic() {
        let eig = eigh_tridiagonal(&[0.0, 0.0], &[-1.0]).unwrap();
        assert_relative_eq!(eig.eigenvalues[0], -1.0, max_relative = 1e-15);
        assert_relative_eq!(eig.eigenvalues[1], 1.0, max_relative = 1e-15);
    }

    #[test]
    fn dimension_one_is_trivial() {
        let eig = eigh_tridiagonal(&[3.5], &[]).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.5]);
        assert_eq!(eig.eigenvectors, vec![1.0]);
    }

    #[test]
    fn random_matrices_match_nalgebra() {
        // Deterministic pseudo-random tridiagonals cross-checked against an
        // independent dense symmetric eigensolver.
        let mut state = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for &n in &[3usize, 7, 20, 51] {
            let d: Vec<f64> = (0..n).map(|_| 4.0 * next()).collect();
            let e: Vec<f64> = (0..n - 1).map(|_| 4.0 * next()).collect();
            let eig = eigh_tridiagonal(&d, &e).unwrap();

            let mut dense = nalgebra::DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                dense[(i, i)] = d[i];
            }
            for i in 0..n - 1 {
                dense[(i, i + 1)] = e[i];
                dense[(i + 1, i)] = e[i];
            }
            let mut reference: Vec<f64> =
                dense.symmetric_eigen().eigenvalues.iter().copied().collect();
            reference.sort_by(f64::total_cmp);
            for (got, want) in eig.eigenvalues.iter().zip(&reference) {
                assert_relative_eq!(got, want, epsilon = 1e-10, max_relative = 1e-10);
            }
            assert!(reconstruction_residual(&d, &e, &eig) < 1e-12 * n as f64);
            assert!(orthogonality_residual(&eig) < 1e-13 * n as f64);
        }
    }

    #[test]
    fn fock_chain_couplings_stay_accurate_at_n_100() {
        // The coupling profile the oracle actually uses.
        let n = 100usize;
        let d = vec![0.0; n + 1];
        let e: Vec<f64> = (0..n)
            .map(|k| -(((n - k) * (k + 1) * (k + 1)) as f64).sqrt())
            .collect();
        let eig = eigh_tridiagonal(&d, &e).unwrap();
        assert!(reconstruction_residual(&d, &e, &eig) < 1e-9);
        assert!(orthogonality_residual(&eig) < 1e-12);
        // Spectrum of a zero-diagonal tridiagonal is symmetric about zero.
        let m = eig.dim;
        for j in 0..m {
            assert_relative_eq!(
                eig.eigenvalues[j],
                -eig.eigenvalues[m - 1 - j],
                epsilon = 1e-9
            );
        }
    }
}
