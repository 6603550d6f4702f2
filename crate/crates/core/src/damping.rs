//! Zero-temperature cavity decay between atoms.
//!
//! [`apply_decay`] is the exact number-basis solution of the loss master
//! equation
//!
//!   drho/dt = -(gamma/2) (a†a rho + rho a†a - 2 a rho a†),
//!
//! namely
//!
//!   rho_mn(t) = e^{-gamma t (m+n)/2} sum_l sqrt((m+l)!/m!) sqrt((n+l)!/n!)
//!               (1 - e^{-gamma t})^l / l! rho_{m+l,n+l}(0),
//!
//! with the l-sum cut at the truncation boundary; the discarded tail is zero
//! for states with no support past the truncation. [`lindblad_oracle`]
//! integrates the same master equation with a fixed-step classical RK4 and
//! exists as an independent cross-check path for tests.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{DensityMatrix, HERMITICITY_TOL, TRACE_TOL};

/// Largest step size gamma * dt the RK4 oracle accepts.
pub const ORACLE_MAX_GAMMA_DT: f64 = 1e-3;

/// Magnitude bound on the multiplicative decay coefficients. At the
/// dimensions used here the largest coefficient is around 1e19, far below
/// this margin.
const COEFFICIENT_GUARD: f64 = 1e150;

/// Cavity loss coefficient and decay interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayParams {
    gamma: f64,
    duration: f64,
}

impl DecayParams {
    pub fn new(gamma: f64, duration: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if !(duration.is_finite() && duration >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "decay duration must be finite and >= 0, got {duration}"
            )));
        }
        if !(gamma * duration).is_finite() {
            return Err(Error::InvalidInput(format!(
                "gamma * duration must be finite, got {}",
                gamma * duration
            )));
        }
        Ok(Self { gamma, duration })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// The dimensionless product gamma * t driving the map.
    pub fn gamma_t(&self) -> f64 {
        self.gamma * self.duration
    }
}

/// Exact zero-temperature decay of the field over the configured interval.
pub fn apply_decay(rho: &DensityMatrix, params: &DecayParams) -> Result<DensityMatrix> {
    let dim = rho.dim();
    let gamma_t = params.gamma_t();
    let survival = (-gamma_t).exp();
    let loss = 1.0 - survival;

    let mut out: Array2<Complex64> = Array2::zeros((dim, dim));
    for m in 0..dim {
        for n in 0..dim {
            // Factorial ratios accumulate multiplicatively; raw factorials
            // would overflow long before dim ~ 64.
            let mut coef = 1.0_f64;
            let mut acc = rho.get(m, n);
            let reach = dim - 1 - m.max(n);
            for l in 1..=reach {
                coef *= ((m + l) as f64 * (n + l) as f64).sqrt() * loss / l as f64;
                if !coef.is_finite() || coef > COEFFICIENT_GUARD {
                    return Err(Error::Integrity {
                        what: "decay coefficient magnitude",
                        defect: coef,
                        tol: COEFFICIENT_GUARD,
                    });
                }
                acc += coef * rho.get(m + l, n + l);
            }
            out[(m, n)] = (-gamma_t * (m + n) as f64 / 2.0).exp() * acc;
        }
    }
    let out = DensityMatrix::from_elems(out)?;
    out.check_physical(TRACE_TOL, HERMITICITY_TOL)?;
    Ok(out)
}

fn lindblad_rhs(rho: &Array2<Complex64>, gamma: f64) -> Array2<Complex64> {
    let dim = rho.nrows();
    let mut out = Array2::zeros((dim, dim));
    for m in 0..dim {
        for n in 0..dim {
            let mut v = -0.5 * gamma * (m + n) as f64 * rho[(m, n)];
            if m + 1 < dim && n + 1 < dim {
                v += gamma * ((m + 1) as f64 * (n + 1) as f64).sqrt() * rho[(m + 1, n + 1)];
            }
            out[(m, n)] = v;
        }
    }
    out
}

/// Fixed-step classical 4th-order integration of the loss master equation.
///
/// Used only as an independent oracle in tests; the production path is the
/// exact map in [`apply_decay`]. The step size gamma * dt must not exceed
/// [`ORACLE_MAX_GAMMA_DT`].
pub fn lindblad_oracle(
    rho: &DensityMatrix,
    params: &DecayParams,
    steps: usize,
) -> Result<DensityMatrix> {
    if steps == 0 {
        return Err(Error::InvalidInput("oracle needs at least one step".into()));
    }
    let dt = params.duration() / steps as f64;
    if params.gamma() * dt > ORACLE_MAX_GAMMA_DT * (1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "oracle step size gamma*dt = {:.3e} exceeds {ORACLE_MAX_GAMMA_DT:.0e}; raise steps",
            params.gamma() * dt
        )));
    }

    let gamma = params.gamma();
    let mut state = rho.elems().clone();
    let half = Complex64::new(dt / 2.0, 0.0);
    let full = Complex64::new(dt, 0.0);
    let sixth = Complex64::new(dt / 6.0, 0.0);
    let two = Complex64::new(2.0, 0.0);
    for _ in 0..steps {
        let k1 = lindblad_rhs(&state, gamma);
        let k2 = lindblad_rhs(&(&state + &k1.mapv(|v| half * v)), gamma);
        let k3 = lindblad_rhs(&(&state + &k2.mapv(|v| half * v)), gamma);
        let k4 = lindblad_rhs(&(&state + &k3.mapv(|v| full * v)), gamma);
        let increment = (k1 + k2.mapv(|v| two * v) + k3.mapv(|v| two * v) + k4).mapv(|v| sixth * v);
        state += &increment;
    }
    let out = DensityMatrix::from_elems(state)?;
    out.check_physical(TRACE_TOL, HERMITICITY_TOL)?;
    Ok(out)
}
