//! Exact quantum evolution in the number basis.
//!
//! Both S_A = N_e + N_g and S_E = N_e + N_a commute with the trilinear
//! Hamiltonian, so the reachable states from |n_e0, n_g0, n_a0⟩ form a
//! one-parameter chain |n_e0 − k, n_g0 + k, n_a0 + k⟩ indexed by the number
//! of de-excitation events k. On that chain H/(ħΩ) is a real symmetric
//! tridiagonal matrix with zero diagonal and off-diagonal elements −h_k,
//!
//! ```text
//! h_k = √((n_e0 − k)(n_g0 + k + 1)(n_a0 + k + 1)).
//! ```
//!
//! Propagation is done by one eigendecomposition followed by closed-form
//! phase evolution, so arbitrary sample times carry no accumulated
//! integration error; revival-scale horizons (τ ~ √n ln²(8n)) cost the same
//! as short ones. This module is the ground-truth oracle against which the
//! moment closures and the closed form are judged.

use num_complex::Complex64;

use crate::trajectory::{check_grid, NeumaierSum};
use crate::tridiag::{eigh_tridiagonal, TridiagonalEigen};
use crate::{ConservedCharges, Error, Method, Result, SystemSpec, Trajectory};

/// Largest chain dimension the oracle will attempt.
pub const MAX_CHAIN_DIM: usize = 100_000;

/// The reduced Hilbert-space chain for one initial configuration, holding
/// the current amplitude vector (initially concentrated on the start site).
#[derive(Debug, Clone)]
pub struct ChainState {
    n_excited0: u64,
    k_min: i64,
    couplings: Vec<f64>,
    amplitudes: Vec<Complex64>,
    initial_site: usize,
}

impl ChainState {
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// First value of the de-excitation index k (negative when both ground
    /// atoms and photons are initially present).
    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    /// Off-diagonal Hamiltonian elements h_k in units of ħΩ;
    /// `couplings()[i]` couples sites `i` and `i + 1`.
    pub fn couplings(&self) -> &[f64] {
        &self.couplings
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Number of excited atoms at chain site `i`.
    fn weight(&self, site: usize) -> f64 {
        (self.n_excited0 as i64 - (self.k_min + site as i64)) as f64
    }

    pub fn norm_squared(&self) -> f64 {
        let mut s = NeumaierSum::default();
        for a in &self.amplitudes {
            s.add(a.norm_sqr());
        }
        s.value()
    }

    /// Mean and variance of N_e in the current amplitudes.
    pub fn excited_moments(&self) -> (f64, f64) {
        let mut mean = NeumaierSum::default();
        let mut second = NeumaierSum::default();
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            let w = self.weight(i);
            mean.add(w * p);
            second.add(w * w * p);
        }
        let mean = mean.value();
        (mean, second.value() - mean * mean)
    }

    /// ⟨H⟩ and ⟨H²⟩ in units of ħΩ and (ħΩ)², evaluated directly from the
    /// tridiagonal action on the amplitudes.
    pub fn hamiltonian_moments(&self) -> (f64, f64) {
        let dim = self.dim();
        let mut h_psi = vec![Complex64::ZERO; dim];
        for i in 0..dim.saturating_sub(1) {
            let h = -self.couplings[i];
            h_psi[i] += h * self.amplitudes[i + 1];
            h_psi[i + 1] += h * self.amplitudes[i];
        }
        let mut first = NeumaierSum::default();
        let mut second = NeumaierSum::default();
        for i in 0..dim {
            first.add((self.amplitudes[i].conj() * h_psi[i]).re);
            second.add(h_psi[i].norm_sqr());
        }
        (first.value(), second.value())
    }
}

/// Build the chain for `spec` with the initial amplitude on the start site.
///
/// A chain of dimension 1 (nothing to exchange) is valid and yields a
/// constant trajectory.
pub fn build_chain(spec: &SystemSpec) -> Result<ChainState> {
    spec.validate()?;
    let k_min = -(spec.n_ground.min(spec.n_photons) as i64);
    let k_max = spec.n_excited as i64;
    let dim = (k_max - k_min) as usize + 1;
    if dim > MAX_CHAIN_DIM {
        return Err(Error::ChainTooLarge {
            dim,
            max: MAX_CHAIN_DIM,
        });
    }

    let couplings = (k_min..k_max)
        .map(|k| {
            let ne = (spec.n_excited as i64 - k) as f64;
            let ng = (spec.n_ground as i64 + k + 1) as f64;
            let na = (spec.n_photons as i64 + k + 1) as f64;
            (ne * ng * na).sqrt()
        })
        .collect();

    let initial_site = (-k_min) as usize;
    let mut amplitudes = vec![Complex64::ZERO; dim];
    amplitudes[initial_site] = Complex64::ONE;

    Ok(ChainState {
        n_excited0: spec.n_excited,
        k_min,
        couplings,
        amplitudes,
        initial_site,
    })
}

/// Immutable propagator: the eigendecomposition of the chain Hamiltonian.
/// Evaluations at different τ are pure reads and safe to share across
/// threads.
#[derive(Debug, Clone)]
pub struct ChainPropagator {
    chain: ChainState,
    eigen: TridiagonalEigen,
    /// Overlaps of the initial state with each eigenvector.
    projections: Vec<f64>,
}

impl ChainPropagator {
    pub fn new(chain: ChainState) -> Result<Self> {
        let dim = chain.dim();
        let diag = vec![0.0; dim];
        let offdiag: Vec<f64> = chain.couplings.iter().map(|h| -h).collect();
        let eigen = eigh_tridiagonal(&diag, &offdiag)?;
        let projections = eigen.row(chain.initial_site).to_vec();
        Ok(Self {
            chain,
            eigen,
            projections,
        })
    }

    pub fn chain(&self) -> &ChainState {
        &self.chain
    }

    /// State at dimensionless time τ: c(τ) = V e^{−iΛτ} Vᵀ c(0).
    pub fn state_at(&self, tau: f64) -> ChainState {
        let dim = self.chain.dim();
        let phased: Vec<Complex64> = (0..dim)
            .map(|j| Complex64::from_polar(self.projections[j], -self.eigen.eigenvalues[j] * tau))
            .collect();
        let mut amplitudes = vec![Complex64::ZERO; dim];
        for (k, amp) in amplitudes.iter_mut().enumerate() {
            let row = self.eigen.row(k);
            let mut re = 0.0_f64;
            let mut im = 0.0_f64;
            for (v, p) in row.iter().zip(&phased) {
                re += v * p.re;
                im += v * p.im;
            }
            *amp = Complex64::new(re, im);
        }
        ChainState {
            amplitudes,
            ..self.chain.clone()
        }
    }
}

/// Exact trajectory of (N̄_e, Δ_e²) on `tau_grid`.
pub fn evolve_exact(spec: &SystemSpec, tau_grid: &[f64]) -> Result<Trajectory> {
    check_grid("fock", tau_grid)?;
    let propagator = ChainPropagator::new(build_chain(spec)?)?;
    let charges = conserved_charges(spec)?;

    let mut mean_ne = Vec::with_capacity(tau_grid.len());
    let mut variance_ne = Vec::with_capacity(tau_grid.len());
    for &tau in tau_grid {
        let state = propagator.state_at(tau);
        let (mean, var) = state.excited_moments();
        debug_assert!(var > -1e-9, "exact variance fell below -1e-9: {var}");
        mean_ne.push(mean);
        variance_ne.push(var.max(0.0));
    }

    Ok(Trajectory {
        method: Method::Exact,
        tau: tau_grid.to_vec(),
        mean_ne,
        variance_ne,
        charges,
    })
}

/// Conserved charges of the initial number state, with ⟨H²⟩ evaluated on
/// the chain (⟨H⟩ = 0 for any number state since the diagonal vanishes).
pub fn conserved_charges(spec: &SystemSpec) -> Result<ConservedCharges> {
    let chain = build_chain(spec)?;
    let (_, h2) = chain.hamiltonian_moments();
    let s_a = spec.s_a();
    let s_e = spec.s_e();
    Ok(ConservedCharges {
        s_a,
        s_e,
        a_bar: 2.0 * s_e + 2.0 * s_a + 1.0,
        b_bar: s_a * s_e,
        c_bar: 2.0 * s_a * s_e - h2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trajectory::linspace;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn chain_couplings_by_hand() {
        let c = build_chain(&SystemSpec::number_state(1)).unwrap();
        assert_eq!(c.dim(), 2);
        assert_eq!(c.couplings(), &[1.0]);

        let c = build_chain(&SystemSpec::number_state(2)).unwrap();
        assert_relative_eq!(c.couplings()[0], 2.0_f64.sqrt());
        assert_relative_eq!(c.couplings()[1], 2.0);
    }

    #[test]
    fn empty_excited_mode_gives_constant_chain() {
        let spec = SystemSpec {
            n_excited: 0,
            n_ground: 5,
            n_photons: 0,
            rabi_frequency: 1.0,
        };
        let c = build_chain(&spec).unwrap();
        assert_eq!(c.dim(), 1);
        let traj = evolve_exact(&spec, &[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(traj.mean_ne, vec![0.0, 0.0, 0.0]);
        assert_eq!(traj.variance_ne, vec![0.0, 0.0, 0.0]);
    }

    #[test]
    fn negative_k_sites_open_when_ground_and_photons_present() {
        let spec = SystemSpec {
            n_excited: 1,
            n_ground: 1,
            n_photons: 1,
            rabi_frequency: 1.0,
        };
        let c = build_chain(&spec).unwrap();
        assert_eq!(c.k_min(), -1);
        assert_eq!(c.dim(), 3);
        assert_relative_eq!(c.couplings()[0], 2.0_f64.sqrt()); // k = -1
        assert_relative_eq!(c.couplings()[1], 2.0); // k = 0
    }

    #[test]
    fn single_excited_atom_is_a_two_level_rabi_problem() {
        let grid = linspace(3.0, 301);
        let traj = evolve_exact(&SystemSpec::number_state(1), &grid).unwrap();
        for (tau, mean) in grid.iter().zip(&traj.mean_ne) {
            let expected = tau.cos().powi(2);
            assert_abs_diff_eq!(*mean, expected, epsilon = 1e-10);
        }
    }

    #[test]
    fn initial_sample_is_the_number_state() {
        let traj = evolve_exact(&SystemSpec::number_state(17), &[0.0, 0.5]).unwrap();
        assert_abs_diff_eq!(traj.mean_ne[0], 17.0, epsilon = 1e-12);
        assert_abs_diff_eq!(traj.variance_ne[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn headline_charges_match_closed_formulas() {
        let c = conserved_charges(&SystemSpec::number_state(100)).unwrap();
        assert_eq!((c.s_a, c.s_e), (100.0, 100.0));
        assert_relative_eq!(c.a_bar, 401.0);
        assert_relative_eq!(c.b_bar, 10_000.0);
        assert_relative_eq!(c.c_bar, 19_900.0, max_relative = 1e-12);

        let c1 = conserved_charges(&SystemSpec::number_state(1)).unwrap();
        assert_relative_eq!(c1.a_bar, 5.0);
        assert_relative_eq!(c1.b_bar, 1.0);
        assert_relative_eq!(c1.c_bar, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn general_charges_use_chain_hamiltonian_square() {
        // (n_e, n_g, n_a) = (0, 3, 2): <H^2> = (0+1)*3*2 = 6 on the chain.
        let spec = SystemSpec {
            n_excited: 0,
            n_ground: 3,
            n_photons: 2,
            rabi_frequency: 1.0,
        };
        let c = conserved_charges(&spec).unwrap();
        assert_eq!((c.s_a, c.s_e), (3.0, 2.0));
        assert_relative_eq!(c.c_bar, 2.0 * 3.0 * 2.0 - 6.0, max_relative = 1e-12);
    }

    #[test]
    fn norm_energy_and_charges_conserved_along_trajectory() {
        let spec = SystemSpec::number_state(40);
        let propagator = ChainPropagator::new(build_chain(&spec).unwrap()).unwrap();
        let (h1_0, h2_0) = propagator.chain().hamiltonian_moments();
        assert_abs_diff_eq!(h1_0, 0.0, epsilon = 1e-12);
        assert_relative_eq!(h2_0, 40.0, max_relative = 1e-12);
        for &tau in &[0.3, 1.7, 9.4, 57.0] {
            let state = propagator.state_at(tau);
            assert_abs_diff_eq!(state.norm_squared(), 1.0, epsilon = 1e-12);
            let (h1, h2) = state.hamiltonian_moments();
            assert_abs_diff_eq!(h1, h1_0, epsilon = 1e-9 * h2_0.sqrt());
            assert_relative_eq!(h2, h2_0, max_relative = 1e-9);
        }
    }

    #[test]
    fn mean_stays_within_atom_number_and_double_entry_agrees() {
        let spec = SystemSpec {
            n_excited: 6,
            n_ground: 2,
            n_photons: 3,
            rabi_frequency: 1.0,
        };
        let propagator = ChainPropagator::new(build_chain(&spec).unwrap()).unwrap();
        for &tau in &[0.0, 0.21, 0.93, 2.7, 6.1] {
            let state = propagator.state_at(tau);
            let (mean, var) = state.excited_moments();
            assert!(mean >= -1e-12 && mean <= spec.s_a() + 1e-12);
            assert!(var >= -1e-12);
            // Double entry: N_e = n_e0 - k, so the k-distribution must give
            // the same mean through the complementary accumulation route.
            let mean_k: f64 = state
                .amplitudes()
                .iter()
                .enumerate()
                .map(|(i, a)| (state.k_min() + i as i64) as f64 * a.norm_sqr())
                .sum();
            assert_abs_diff_eq!(mean, spec.n_excited as f64 - mean_k, epsilon = 1e-10);
        }
    }

    #[test]
    fn short_time_curvature_matches_minus_two_n() {
        // N(tau) = n - n tau^2 + O(tau^4) for a number state.
        let n = 100u64;
        let h = 1e-3;
        let traj = evolve_exact(&SystemSpec::number_state(n), &[h]).unwrap();
        let second_derivative = 2.0 * (traj.mean_ne[0] - n as f64) / (h * h);
        assert_relative_eq!(second_derivative, -2.0 * n as f64, max_relative = 1e-4);
    }

    #[test]
    fn dip_sits_past_half_period_with_variance_peak() {
        let n = 100u64;
        let t_p = (8.0 * n as f64).ln() / ((n + 2) as f64).sqrt();
        let grid = linspace(t_p, 1001);
        let traj = evolve_exact(&SystemSpec::number_state(n), &grid).unwrap();
        let (i_min, min) = traj
            .mean_ne
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!(*min > 0.0 && *min < n as f64 / 2.0);
        assert!(grid[i_min] > 0.4 * t_p && grid[i_min] < 0.8 * t_p);
        let i_var = traj
            .variance_ne
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap();
        assert!((grid[i_var] - grid[i_min]).abs() < 0.15 * t_p);
    }

    #[test]
    fn grid_must_increase() {
        let err = evolve_exact(&SystemSpec::number_state(3), &[0.0, 0.0]);
        assert!(matches!(err, Err(Error::GridNotIncreasing { .. })));
    }

    #[test]
    fn oversized_chain_is_rejected() {
        let spec = SystemSpec::number_state(200_000);
        assert!(matches!(
            build_chain(&spec),
            Err(Error::ChainTooLarge { .. })
        ));
    }
}
