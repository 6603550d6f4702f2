#![allow(dead_code)]

use micromaser_core::{Complex64, DensityMatrix};
use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random Hermitian, positive, unit-trace matrix: G G† / Tr(G G†) for a
/// complex Ginibre draw G. Seeded, so every test run sees the same matrices.
pub fn random_density(dim: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g: Array2<Complex64> = Array2::zeros((dim, dim));
    for v in g.iter_mut() {
        *v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    let g_dag = g.t().mapv(|v| v.conj());
    let mut rho = g.dot(&g_dag);
    let trace: Complex64 = rho.diag().sum();
    rho.mapv_inplace(|v| v / trace.re);
    DensityMatrix::from_elems(rho).unwrap()
}
