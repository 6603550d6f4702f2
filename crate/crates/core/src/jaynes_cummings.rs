//! The one-atom gain kick: resonant Jaynes-Cummings evolution for a fixed
//! transit time, traced over the atom.
//!
//! The kick is represented two ways. [`GainChannel`] is the two-operator
//! Kraus form acting on the field density matrix (atom exits in |a> or |b>).
//! [`evolve_joint_pure`] keeps the joint atom-field state pure and is the
//! cross-check path used in tests.
//!
//! Everything is in the interaction picture; free evolution between atoms is
//! a pure phase in the rotating frame and is omitted.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, PureFieldState, HERMITICITY_TOL, TRACE_TOL};

/// Entrywise bound on K_a†K_a + K_b†K_b - I at channel build time.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Atomic superposition alpha|a> + beta|b> injected into the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomState {
    alpha: Complex64,
    beta: Complex64,
}

impl AtomState {
    /// Normalize (alpha, beta) so that |alpha|^2 + |beta|^2 = 1.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        for v in [alpha, beta] {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidInput("non-finite atom amplitude".into()));
            }
        }
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if norm <= 0.0 {
            return Err(Error::InvalidInput("atom state cannot be zero".into()));
        }
        Ok(Self {
            alpha: alpha / norm,
            beta: beta / norm,
        })
    }

    /// Real-amplitude atom with the given upper-state amplitude,
    /// beta = sqrt(1 - alpha^2).
    pub fn from_real_alpha(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha.abs() <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "real alpha must satisfy |alpha| <= 1, got {alpha}"
            )));
        }
        Self::new(
            Complex64::new(alpha, 0.0),
            Complex64::new((1.0 - alpha * alpha).sqrt(), 0.0),
        )
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }
}

/// Precomputed Rabi factors s_n = sin(g tau sqrt(n)), c_n = cos(g tau sqrt(n))
/// for n = 0..=dim. Built once per (g tau, dim) and shared by all atoms.
#[derive(Debug, Clone)]
pub struct RabiTable {
    g_tau: f64,
    s: Vec<f64>,
    c: Vec<f64>,
}

impl RabiTable {
    pub fn new(g_tau: f64, dim: usize) -> Result<Self> {
        if !g_tau.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite g*tau: {g_tau}")));
        }
        if dim == 0 {
            return Err(Error::InvalidInput("Rabi table needs dim >= 1".into()));
        }
        let mut s = Vec::with_capacity(dim + 1);
        let mut c = Vec::with_capacity(dim + 1);
        for n in 0..=dim {
            let phase = g_tau * (n as f64).sqrt();
            s.push(phase.sin());
            c.push(phase.cos());
        }
        Ok(Self { g_tau, s, c })
    }

    pub fn g_tau(&self) -> f64 {
        self.g_tau
    }

    /// Largest n for which the table holds entries.
    pub fn max_index(&self) -> usize {
        self.s.len() - 1
    }

    pub fn s(&self, n: usize) -> f64 {
        self.s[n]
    }

    pub fn c(&self, n: usize) -> f64 {
        self.c[n]
    }
}

/// Kraus pair for the gain kick: K_a (atom exits excited) and K_b (atom
/// exits in the lower state).
///
/// K_a has diagonal alpha c_{n+1} and the photon-lowering entries
/// -i beta s_n taking |n> to |n-1>; K_b has diagonal beta c_n and the
/// photon-raising entries -i alpha s_{n+1} taking |n> to |n+1>. The raising
/// amplitude out of the top state |dim-1> is dropped by the truncation; the
/// build-time completeness check turns any resulting leak into an error.
#[derive(Debug, Clone)]
pub struct GainChannel {
    k_a: Array2<Complex64>,
    k_b: Array2<Complex64>,
    completeness_defect: f64,
}

/// Build the gain channel for one atom transit.
///
/// Fails with [`Error::TruncationLeak`] if K_a†K_a + K_b†K_b deviates from
/// the identity anywhere by more than [`COMPLETENESS_TOL`], which happens
/// exactly when sin(g tau sqrt(dim)) is not negligible: either the Fock
/// space is too small or g tau is not at a trapping value.
pub fn build_gain_channel(table: &RabiTable, atom: &AtomState, dim: usize) -> Result<GainChannel> {
    if dim == 0 || dim > table.max_index() {
        return Err(Error::InvalidInput(format!(
            "channel dim {dim} out of range for Rabi table with max index {}",
            table.max_index()
        )));
    }
    let alpha = atom.alpha();
    let beta = atom.beta();
    let mut k_a: Array2<Complex64> = Array2::zeros((dim, dim));
    let mut k_b: Array2<Complex64> = Array2::zeros((dim, dim));
    for n in 0..dim {
        k_a[(n, n)] = alpha * table.c(n + 1);
        k_b[(n, n)] = beta * table.c(n);
        if n + 1 < dim {
            // |n+1> -> |n> in K_a, |n> -> |n+1> in K_b, both with s_{n+1}.
            k_a[(n, n + 1)] = -Complex64::i() * beta * table.s(n + 1);
            k_b[(n + 1, n)] = -Complex64::i() * alpha * table.s(n + 1);
        }
    }

    let completeness_defect = completeness_defect(&k_a, &k_b);
    if completeness_defect > COMPLETENESS_TOL {
        return Err(Error::TruncationLeak {
            defect: completeness_defect,
            tol: COMPLETENESS_TOL,
        });
    }
    Ok(GainChannel {
        k_a,
        k_b,
        completeness_defect,
    })
}

fn completeness_defect(k_a: &Array2<Complex64>, k_b: &Array2<Complex64>) -> f64 {
    let dag = |m: &Array2<Complex64>| m.t().mapv(|v| v.conj());
    let mut sum = dag(k_a).dot(k_a) + dag(k_b).dot(k_b);
    for n in 0..sum.nrows() {
        sum[(n, n)] -= Complex64::new(1.0, 0.0);
    }
    sum.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

impl GainChannel {
    pub fn dim(&self) -> usize {
        self.k_a.nrows()
    }

    pub fn k_a(&self) -> &Array2<Complex64> {
        &self.k_a
    }

    pub fn k_b(&self) -> &Array2<Complex64> {
        &self.k_b
    }

    /// Entrywise deviation of K_a†K_a + K_b†K_b from the identity,
    /// measured at build time.
    pub fn completeness_defect(&self) -> f64 {
        self.completeness_defect
    }
}

/// One atom transit on the field: rho' = K_a rho K_a† + K_b rho K_b†.
pub fn apply_gain(rho: &DensityMatrix, channel: &GainChannel) -> Result<DensityMatrix> {
    if rho.dim() != channel.dim() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: rho is {}, channel is {}",
            rho.dim(),
            channel.dim()
        )));
    }
    let dag = |m: &Array2<Complex64>| m.t().mapv(|v| v.conj());
    let out = channel.k_a.dot(rho.elems()).dot(&dag(&channel.k_a))
        + channel.k_b.dot(rho.elems()).dot(&dag(&channel.k_b));
    let out = DensityMatrix::from_elems(out)?;
    out.check_physical(TRACE_TOL, HERMITICITY_TOL)?;
    Ok(out)
}

/// The same transit kept pure: returns the (unnormalized) field amplitudes
/// paired with the atom exiting in |a> and |b>.
///
/// branch_a[n] = alpha c_{n+1} d_n - i beta s_{n+1} d_{n+1}
/// branch_b[n] = beta c_n d_n - i alpha s_n d_{n-1}
///
/// The two squared norms sum to 1 whenever the top raising amplitude
/// s_dim * d_{dim-1} is negligible.
pub fn evolve_joint_pure(
    field: &PureFieldState,
    atom: &AtomState,
    table: &RabiTable,
) -> Result<(PureFieldState, PureFieldState)> {
    let dim = field.dim();
    if dim > table.max_index() {
        return Err(Error::InvalidInput(format!(
            "field dim {dim} exceeds Rabi table max index {}",
            table.max_index()
        )));
    }
    let alpha = atom.alpha();
    let beta = atom.beta();
    let mut branch_a = vec![Complex64::new(0.0, 0.0); dim];
    let mut branch_b = vec![Complex64::new(0.0, 0.0); dim];
    for n in 0..dim {
        let mut a = alpha * table.c(n + 1) * field.amp(n);
        if n + 1 < dim {
            a -= Complex64::i() * beta * table.s(n + 1) * field.amp(n + 1);
        }
        branch_a[n] = a;

        let mut b = beta * table.c(n) * field.amp(n);
        if n > 0 {
            b -= Complex64::i() * alpha * table.s(n) * field.amp(n - 1);
        }
        branch_b[n] = b;
    }
    Ok((
        PureFieldState::raw(branch_a)?,
        PureFieldState::raw(branch_b)?,
    ))
}
