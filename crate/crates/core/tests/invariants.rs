//! Property tests for the structural invariants of the state containers,
//! the observables and the gain kick.

use std::f64::consts::PI;

use micromaser_core::{
    apply_gain, build_gain_channel, electric_field_expectation, evolve_joint_pure, pure_to_density,
    quadrature_squared_expectations, AtomState, Complex64, DensityMatrix, FieldUnits,
    PureFieldState, RabiTable,
};
use ndarray::Array2;
use proptest::prelude::*;

fn amplitude_vec(dim: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim).prop_map(|pairs| {
        pairs
            .into_iter()
            .map(|(re, im)| Complex64::new(re, im))
            .collect()
    })
}

fn nontrivial_state(dim: usize) -> impl Strategy<Value = PureFieldState> {
    amplitude_vec(dim).prop_filter_map("needs nonzero norm", |amps| {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm > 1e-3 {
            Some(PureFieldState::normalized(amps).unwrap())
        } else {
            None
        }
    })
}

fn density_from_entries(dim: usize, entries: Vec<Complex64>) -> DensityMatrix {
    let g = Array2::from_shape_vec((dim, dim), entries).unwrap();
    let g_dag = g.t().mapv(|v: Complex64| v.conj());
    let mut rho = g.dot(&g_dag);
    let trace: Complex64 = rho.diag().sum();
    rho.mapv_inplace(|v| v / trace.re.max(1e-9));
    DensityMatrix::from_elems(rho).unwrap()
}

fn random_density(dim: usize) -> impl Strategy<Value = DensityMatrix> {
    amplitude_vec(dim * dim).prop_map(move |entries| density_from_entries(dim, entries))
}

/// Dense matrices for i (a† - a), Y1 and Y2, used as the trace oracle.
fn observable_matrices(dim: usize) -> (Array2<Complex64>, Array2<Complex64>, Array2<Complex64>) {
    let mut lower: Array2<Complex64> = Array2::zeros((dim, dim));
    for n in 1..dim {
        lower[(n - 1, n)] = Complex64::new((n as f64).sqrt(), 0.0);
    }
    let raise = lower.t().mapv(|v: Complex64| v.conj());
    let e_op = (&raise - &lower).mapv(|v| Complex64::i() * v);
    let lower_sq = lower.dot(&lower);
    let raise_sq = raise.dot(&raise);
    let y1_op = (&lower_sq + &raise_sq).mapv(|v| 0.5 * v);
    let y2_op = (&raise_sq - &lower_sq).mapv(|v| 0.5 * Complex64::i() * v);
    (e_op, y1_op, y2_op)
}

fn dense_trace(rho: &DensityMatrix, op: &Array2<Complex64>) -> Complex64 {
    rho.elems().dot(op).diag().sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pure_to_density_has_unit_trace_and_rank_one(state in nontrivial_state(8)) {
        let rho = pure_to_density(&state).unwrap();
        prop_assert!(rho.trace_error() <= 1e-12);
        prop_assert!(rho.hermiticity_defect() <= 1e-14);
        prop_assert!((rho.purity() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn diagonal_states_have_zero_field(weights in prop::collection::vec(0.01..1.0f64, 6)) {
        let total: f64 = weights.iter().sum();
        let mut elems: Array2<Complex64> = Array2::zeros((6, 6));
        for (n, w) in weights.iter().enumerate() {
            elems[(n, n)] = Complex64::new(w / total, 0.0);
        }
        let rho = DensityMatrix::from_elems(elems).unwrap();
        let e = electric_field_expectation(&rho, &FieldUnits::default()).unwrap();
        prop_assert!(e.abs() <= 1e-14);
    }

    #[test]
    fn observables_agree_with_dense_trace_oracle(rho in random_density(9)) {
        let (e_op, y1_op, y2_op) = observable_matrices(9);
        let e = electric_field_expectation(&rho, &FieldUnits::default()).unwrap();
        let (y1, y2) = quadrature_squared_expectations(&rho).unwrap();
        prop_assert!((e - dense_trace(&rho, &e_op).re).abs() <= 1e-10);
        prop_assert!((y1 - dense_trace(&rho, &y1_op).re).abs() <= 1e-10);
        prop_assert!((y2 - dense_trace(&rho, &y2_op).re).abs() <= 1e-10);
    }

    #[test]
    fn gain_preserves_trace_and_hermiticity(
        rho in random_density(16),
        alpha_re in -1.0..1.0f64,
        alpha_im in -1.0..1.0f64,
        beta_re in -1.0..1.0f64,
        multiple in 1..4usize,
    ) {
        let alpha = Complex64::new(alpha_re, alpha_im);
        let beta = Complex64::new(beta_re, 0.3);
        let atom = AtomState::new(alpha, beta).unwrap();
        // Trapping value for this dimension, so the channel is complete.
        let g_tau = multiple as f64 * PI / 4.0;
        let table = RabiTable::new(g_tau, 16).unwrap();
        let channel = build_gain_channel(&table, &atom, 16).unwrap();

        let before = rho.trace();
        let after_rho = apply_gain(&rho, &channel).unwrap();
        prop_assert!((after_rho.trace() - before).norm() <= 1e-12);
        prop_assert!(after_rho.hermiticity_defect() <= 1e-12);
    }

    #[test]
    fn joint_evolution_conserves_total_norm(
        state in nontrivial_state(16),
        alpha_re in -1.0..1.0f64,
        beta_im in -1.0..1.0f64,
        multiple in 1..4usize,
    ) {
        let atom = AtomState::new(
            Complex64::new(alpha_re, 0.2),
            Complex64::new(0.4, beta_im),
        ).unwrap();
        let g_tau = multiple as f64 * PI / 4.0;
        let table = RabiTable::new(g_tau, 16).unwrap();
        let (a, b) = evolve_joint_pure(&state, &atom, &table).unwrap();
        prop_assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() <= 1e-12);
    }
}
