//! Shared domain types: the initial configuration, its conserved charges,
//! and sampled trajectories of the excited-atom statistics.

use crate::{Error, Result};

/// Initial configuration of the three bosonic modes plus the physical Rabi
/// frequency. The dynamics depend only on the occupation numbers; Ω is used
/// solely to convert the dimensionless time τ = Ωt back to seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    /// Initially excited atoms.
    pub n_excited: u64,
    /// Initially ground-state atoms.
    pub n_ground: u64,
    /// Initial cavity photons.
    pub n_photons: u64,
    /// Rabi frequency Ω in rad/s.
    pub rabi_frequency: f64,
}

impl SystemSpec {
    /// The headline scenario: `n` atoms all excited, no photons.
    pub fn number_state(n: u64) -> Self {
        Self {
            n_excited: n,
            n_ground: 0,
            n_photons: 0,
            rabi_frequency: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_excited + self.n_ground == 0 {
            return Err(Error::Domain {
                module: "fock",
                name: "n_excited + n_ground",
                value: 0.0,
                requirement: "at least one atom",
            });
        }
        if !(self.rabi_frequency > 0.0) {
            return Err(Error::Domain {
                module: "fock",
                name: "rabi_frequency",
                value: self.rabi_frequency,
                requirement: "> 0",
            });
        }
        Ok(())
    }

    /// Total atom number ⟨S_A⟩.
    pub fn s_a(&self) -> f64 {
        (self.n_excited + self.n_ground) as f64
    }

    /// Excitation number ⟨S_E⟩ (excited atoms plus photons).
    pub fn s_e(&self) -> f64 {
        (self.n_excited + self.n_photons) as f64
    }
}

/// Expectation values of the conserved quantities and the derived constants
/// that drive every moment equation:
///
/// ```text
/// Ā = 2⟨S_E⟩ + 2⟨S_A⟩ + 1,   B̄ = ⟨S_A S_E⟩,   C̄ = ⟨-H²/(ħΩ)² + 2 S_A S_E⟩.
/// ```
///
/// For a number state with `n` excited atoms and nothing else these reduce
/// to Ā = 4n + 1, B̄ = n², C̄ = 2n² − n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservedCharges {
    pub s_a: f64,
    pub s_e: f64,
    pub a_bar: f64,
    pub b_bar: f64,
    pub c_bar: f64,
}

impl ConservedCharges {
    /// Charges of the all-excited number state with `n` atoms. `n` may be
    /// non-integer when used for an ensemble mean.
    pub fn number_state(n: f64) -> Self {
        Self {
            s_a: n,
            s_e: n,
            a_bar: 4.0 * n + 1.0,
            b_bar: n * n,
            c_bar: 2.0 * n * n - n,
        }
    }
}

/// Which route produced a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    VanishingVariance,
    VanishingAsymmetry,
    ClosedForm,
    Ensemble,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::VanishingVariance => "vanishing_variance",
            Method::VanishingAsymmetry => "vanishing_asymmetry",
            Method::ClosedForm => "closed_form",
            Method::Ensemble => "ensemble",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A sampled curve of (τ, N̄_e, Δ_e²).
///
/// The variance channel stores Δ_e² internally; [`Trajectory::delta_e`] is
/// the single conversion point to the standard deviation Δ_e that outputs
/// report. Entries may be NaN where a method does not define the variance
/// (closed-form ensemble means).
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub method: Method,
    pub tau: Vec<f64>,
    pub mean_ne: Vec<f64>,
    pub variance_ne: Vec<f64>,
    pub charges: ConservedCharges,
}

impl Trajectory {
    /// Standard deviation Δ_e per sample (NaN where variance is undefined).
    pub fn delta_e(&self) -> Vec<f64> {
        self.variance_ne
            .iter()
            .map(|&v| if v.is_nan() { f64::NAN } else { v.max(0.0).sqrt() })
            .collect()
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }
}

/// Validate that a sample grid is strictly increasing and finite.
pub(crate) fn check_grid(module: &'static str, tau_grid: &[f64]) -> Result<()> {
    if tau_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain {
            module,
            name: "tau_grid",
            value: f64::NAN,
            requirement: "finite samples",
        });
    }
    if tau_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::GridNotIncreasing { module });
    }
    Ok(())
}

/// Evenly spaced grid over [0, tau_max] with `samples` points.
pub fn linspace(tau_max: f64, samples: usize) -> Vec<f64> {
    assert!(samples >= 2, "need at least two samples");
    let h = tau_max / (samples - 1) as f64;
    (0..samples).map(|i| i as f64 * h).collect()
}

/// Compensated (Neumaier) summation; the order of `+=` calls fixes the
/// result bit-for-bit, which golden-file tests rely on.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}
