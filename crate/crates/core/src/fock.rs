//! Truncated Fock-space state containers and field observables.
//!
//! States live on photon numbers `0..=n_max` (dimension `n_max + 1`). The
//! density matrix is stored dense; at the dimensions used here (<= ~64)
//! clarity wins over sparsity.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Normalization tolerance for pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices after any physical map.
pub const TRACE_TOL: f64 = 1e-10;
/// Hermiticity tolerance for density matrices.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Bound on the imaginary residue of a Hermitian observable expectation.
/// The residue is a numerical integrity probe; the value returned is real.
pub const OBSERVABLE_RESIDUE_TOL: f64 = 1e-10;

/// NaN defects must fail checks, not slip past them.
fn exceeds(defect: f64, tol: f64) -> bool {
    defect.is_nan() || defect > tol
}

/// Overall scale applied to the electric-field expectation value.
///
/// Only the oscillation structure of the field matters here, so the physical
/// prefactor sqrt(omega / 2V) is collapsed into one dimensionless scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldUnits {
    prefactor: f64,
}

impl FieldUnits {
    pub fn new(prefactor: f64) -> Result<Self> {
        if !(prefactor.is_finite() && prefactor > 0.0) {
            return Err(Error::InvalidInput(format!(
                "field prefactor must be finite and > 0, got {prefactor}"
            )));
        }
        Ok(Self { prefactor })
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }
}

impl Default for FieldUnits {
    fn default() -> Self {
        Self { prefactor: 1.0 }
    }
}

/// A pure field state: complex amplitudes d_n over Fock states |n>.
#[derive(Debug, Clone, PartialEq)]
pub struct PureFieldState {
    amps: Array1<Complex64>,
}

impl PureFieldState {
    /// Build a normalized state from raw amplitudes.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let state = Self::raw(amps)?;
        let norm = state.norm_sqr().sqrt();
        if norm <= 0.0 {
            return Err(Error::InvalidInput(
                "cannot normalize the zero state".into(),
            ));
        }
        Ok(Self {
            amps: state.amps / Complex64::new(norm, 0.0),
        })
    }

    /// Build a state without normalizing. The Jaynes-Cummings branch maps
    /// produce intentionally sub-normalized states; everything else should
    /// go through [`PureFieldState::normalized`].
    pub fn raw(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::InvalidInput("state dimension must be >= 1".into()));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite amplitude".into()));
        }
        Ok(Self {
            amps: Array1::from(amps),
        })
    }

    /// The Fock basis state |n> in a space of the given dimension.
    pub fn basis(dim: usize, n: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {n} out of range for dimension {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[n] = Complex64::new(1.0, 0.0);
        Self::raw(amps)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps[n]
    }

    pub fn amps(&self) -> &Array1<Complex64> {
        &self.amps
    }

    /// Sum of |d_n|^2.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// The field density matrix rho over Fock states, stored dense.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    elems: Array2<Complex64>,
}

impl DensityMatrix {
    /// Wrap a square complex matrix. No physicality checks are applied here;
    /// use [`DensityMatrix::check_physical`] where a map's contract needs one.
    pub fn from_elems(elems: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = elems.dim();
        if rows == 0 || rows != cols {
            return Err(Error::InvalidInput(format!(
                "density matrix must be square and non-empty, got {rows}x{cols}"
            )));
        }
        Ok(Self { elems })
    }

    pub fn dim(&self) -> usize {
        self.elems.nrows()
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.elems[(m, n)]
    }

    pub fn elems(&self) -> &Array2<Complex64> {
        &self.elems
    }

    pub fn trace(&self) -> Complex64 {
        self.elems.diag().sum()
    }

    /// |Tr(rho) - 1|.
    pub fn trace_error(&self) -> f64 {
        (self.trace() - Complex64::new(1.0, 0.0)).norm()
    }

    /// max_mn |rho_mn - conj(rho_nm)|.
    pub fn hermiticity_defect(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for m in 0..d {
            for n in m..d {
                let defect = (self.elems[(m, n)] - self.elems[(n, m)].conj()).norm();
                worst = worst.max(defect);
            }
        }
        worst
    }

    /// Smallest real part on the diagonal.
    pub fn min_diagonal(&self) -> f64 {
        self.elems
            .diag()
            .iter()
            .map(|e| e.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Tr(rho^2); 1 for pure states, < 1 for mixed ones.
    pub fn purity(&self) -> f64 {
        self.elems.iter().map(|e| e.norm_sqr()).sum()
    }

    /// <psi| rho |psi>, the fidelity of rho with a pure state.
    pub fn fidelity_with_pure(&self, psi: &PureFieldState) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..self.dim() {
            for n in 0..self.dim() {
                acc += psi.amp(m).conj() * self.elems[(m, n)] * psi.amp(n);
            }
        }
        acc.re
    }

    /// Largest elementwise |self - other|.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.elems
            .iter()
            .zip(other.elems.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Fraction of absolute mass off the diagonal:
    /// sum_{m != n} |rho_mn| / sum_{m,n} |rho_mn|.
    pub fn off_diagonal_mass_ratio(&self) -> f64 {
        let total: f64 = self.elems.iter().map(|e| e.norm()).sum();
        let diag: f64 = self.elems.diag().iter().map(|e| e.norm()).sum();
        if total <= 0.0 {
            return 0.0;
        }
        (total - diag) / total
    }

    /// Enforce the density-matrix invariants within the given tolerances.
    /// Comparisons are written so that NaN defects fail rather than pass.
    pub fn check_physical(&self, trace_tol: f64, herm_tol: f64) -> Result<()> {
        let herm = self.hermiticity_defect();
        if exceeds(herm, herm_tol) {
            return Err(Error::Integrity {
                what: "hermiticity",
                defect: herm,
                tol: herm_tol,
            });
        }
        let trace = self.trace_error();
        if exceeds(trace, trace_tol) {
            return Err(Error::Integrity {
                what: "trace",
                defect: trace,
                tol: trace_tol,
            });
        }
        let min_diag = self.min_diagonal();
        if min_diag.is_nan() || min_diag < -NORM_TOL {
            return Err(Error::Integrity {
                what: "diagonal positivity",
                defect: -min_diag,
                tol: NORM_TOL,
            });
        }
        Ok(())
    }
}

/// rho_mn = d_m conj(d_n) for a normalized pure state.
pub fn pure_to_density(state: &PureFieldState) -> Result<DensityMatrix> {
    let d = state.dim();
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidInput(format!(
            "pure state not normalized: |psi|^2 = {norm}"
        )));
    }
    let mut elems = Array2::zeros((d, d));
    for m in 0..d {
        for n in 0..d {
            elems[(m, n)] = state.amp(m) * state.amp(n).conj();
        }
    }
    DensityMatrix::from_elems(elems)
}

fn check_hermitian_input(rho: &DensityMatrix) -> Result<()> {
    let defect = rho.hermiticity_defect();
    if exceeds(defect, HERMITICITY_TOL) {
        return Err(Error::Integrity {
            what: "hermiticity",
            defect,
            tol: HERMITICITY_TOL,
        });
    }
    Ok(())
}

fn real_part_checked(value: Complex64, what: &'static str) -> Result<f64> {
    if exceeds(value.im.abs(), OBSERVABLE_RESIDUE_TOL) {
        return Err(Error::Integrity {
            what,
            defect: value.im.abs(),
            tol: OBSERVABLE_RESIDUE_TOL,
        });
    }
    Ok(value.re)
}

/// Expectation value of the electric field,
/// <E> = prefactor * i * sum_{n>=1} sqrt(n) (rho_{n-1,n} - rho_{n,n-1}).
///
/// The sum runs over the whole truncated range; states confined to a few
/// trapping blocks simply contribute zeros elsewhere.
pub fn electric_field_expectation(rho: &DensityMatrix, units: &FieldUnits) -> Result<f64> {
    check_hermitian_input(rho)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for n in 1..rho.dim() {
        acc += (n as f64).sqrt() * (rho.get(n - 1, n) - rho.get(n, n - 1));
    }
    let value = Complex64::i() * acc;
    Ok(units.prefactor() * real_part_checked(value, "electric field residue")?)
}

/// Expectation values of Y1 = (a^2 + a+^2)/2 and Y2 = i (a+^2 - a^2)/2.
///
/// These couple |n> to |n+2>, so they pick up coherences two blocks apart.
pub fn quadrature_squared_expectations(rho: &DensityMatrix) -> Result<(f64, f64)> {
    check_hermitian_input(rho)?;
    // lower = Tr(rho a^2), raise = Tr(rho a+^2)
    let mut lower = Complex64::new(0.0, 0.0);
    let mut raise = Complex64::new(0.0, 0.0);
    for n in 2..rho.dim() {
        let w = ((n * (n - 1)) as f64).sqrt();
        lower += w * rho.get(n, n - 2);
        raise += w * rho.get(n - 2, n);
    }
    let y1 = real_part_checked(0.5 * (lower + raise), "Y1 residue")?;
    let y2 = real_part_checked(0.5 * Complex64::i() * (raise - lower), "Y2 residue")?;
    Ok((y1, y2))
}

/// Photon number distribution P_n = Re(rho_nn) and its mean.
pub fn photon_distribution(rho: &DensityMatrix) -> Result<(Vec<f64>, f64)> {
    let p: Vec<f64> = (0..rho.dim()).map(|n| rho.get(n, n).re).collect();
    let total: f64 = p.iter().sum();
    if exceeds((total - 1.0).abs(), TRACE_TOL) {
        return Err(Error::Integrity {
            what: "photon distribution normalization",
            defect: (total - 1.0).abs(),
            tol: TRACE_TOL,
        });
    }
    let mean = p.iter().enumerate().map(|(n, pn)| n as f64 * pn).sum();
    Ok((p, mean))
}
