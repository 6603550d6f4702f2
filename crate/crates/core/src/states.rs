//! Trapping-block structure of the pumped Fock space and the tangent /
//! cotangent states confined inside the blocks.
//!
//! Photon numbers n with g tau sqrt(n) at an integer multiple of pi block
//! the probability flow across n, splitting the space into independent
//! blocks. Inside a block bounded by such values the recurrences
//!
//!   d_n = -i (alpha/beta) cot(g tau sqrt(n)/2) d_{n-1}   (cotangent)
//!   d_n =  i (alpha/beta) tan(g tau sqrt(n)/2) d_{n-1}   (tangent)
//!
//! generate the states that the gain kick maps onto themselves, up to an
//! atomic sign: tangent states flip the lower-state amplitude, cotangent
//! states flip the global sign. Superpositions of the two kinds therefore
//! return to themselves only after two atoms.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::PureFieldState;
use crate::jaynes_cummings::AtomState;

/// Default relative tolerance on g tau sqrt(n) / pi for boundary detection.
/// Configurations with g tau set exactly at a trapping value are exact up to
/// floating rounding; finite-precision interaction times need a looser
/// caller-supplied tolerance.
pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-9;

const POLE_EPS: f64 = 1e-12;
const SEED_MODULUS_TOL: f64 = 1e-12;

/// Classification of a block between two trapping values.
///
/// With g tau sqrt(n_low) = q pi and g tau sqrt(n_high + 1) = p pi, a block
/// is tangent when q is odd and p even, cotangent when q is even and p odd.
/// Everything else (parity rule failed, or the block is not closed by a
/// trapping value below the truncation) is `Unclassified` and refuses state
/// construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Tangent,
    Cotangent,
    Unclassified,
}

/// A contiguous photon-number interval [n_low, n_high] between trapping
/// values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrappingBlock {
    n_low: usize,
    n_high: usize,
    kind: BlockKind,
}

impl TrappingBlock {
    pub fn new(n_low: usize, n_high: usize, kind: BlockKind) -> Result<Self> {
        if n_low > n_high {
            return Err(Error::InvalidInput(format!(
                "block bounds out of order: [{n_low}, {n_high}]"
            )));
        }
        Ok(Self {
            n_low,
            n_high,
            kind,
        })
    }

    pub fn n_low(&self) -> usize {
        self.n_low
    }

    pub fn n_high(&self) -> usize {
        self.n_high
    }

    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn overlaps(&self, other: &TrappingBlock) -> bool {
        self.n_low <= other.n_high && other.n_low <= self.n_high
    }
}

/// One summand of a block superposition: the block, its complex weight and
/// the unit-modulus starting value of the recurrence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockWeight {
    pub block: TrappingBlock,
    pub weight: Complex64,
    pub seed_phase: Complex64,
}

impl BlockWeight {
    pub fn new(block: TrappingBlock, weight: Complex64, seed_phase: Complex64) -> Result<Self> {
        check_seed_phase(seed_phase)?;
        Ok(Self {
            block,
            weight,
            seed_phase,
        })
    }

    /// Equal-weight part with unit seed phase.
    pub fn unit(block: TrappingBlock) -> Self {
        Self {
            block,
            weight: Complex64::new(1.0, 0.0),
            seed_phase: Complex64::new(1.0, 0.0),
        }
    }
}

fn check_seed_phase(seed: Complex64) -> Result<()> {
    if (seed.norm() - 1.0).abs() > SEED_MODULUS_TOL {
        return Err(Error::InvalidInput(format!(
            "seed phase must have unit modulus, got |seed| = {}",
            seed.norm()
        )));
    }
    Ok(())
}

/// Is g_tau * sqrt(n) an integer multiple of pi within the relative
/// tolerance? Returns the multiple when it is.
fn boundary_multiple(g_tau: f64, n: usize, tol: f64) -> Option<i64> {
    let x = g_tau * (n as f64).sqrt() / std::f64::consts::PI;
    let rounded = x.round();
    if (x - rounded).abs() <= tol * x.abs().max(1.0) {
        Some(rounded as i64)
    } else {
        None
    }
}

fn classify(q: i64, p: i64) -> BlockKind {
    let q_odd = q.rem_euclid(2) == 1;
    let p_odd = p.rem_euclid(2) == 1;
    match (q_odd, p_odd) {
        (true, false) => BlockKind::Tangent,
        (false, true) => BlockKind::Cotangent,
        _ => BlockKind::Unclassified,
    }
}

/// Partition [0, n_max] into blocks separated by trapping values of
/// g tau sqrt(n).
///
/// The returned blocks are ordered, disjoint and cover [0, n_max]. A block
/// whose closing boundary lies beyond n_max + 1, or whose edge multiples
/// fail the parity rule, comes back as `Unclassified`; when no trapping
/// value exists in [1, n_max + 1] at all, the result is the single
/// unclassified block [0, n_max].
pub fn detect_blocks(g_tau: f64, n_max: usize, tol: f64) -> Result<Vec<TrappingBlock>> {
    if !(g_tau.is_finite() && g_tau > 0.0) {
        return Err(Error::InvalidInput(format!(
            "g*tau must be finite and > 0, got {g_tau}"
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidInput(format!(
            "boundary tolerance must be finite and > 0, got {tol}"
        )));
    }

    // n = 0 is always a boundary with multiple 0.
    let mut boundaries: Vec<(usize, i64)> = vec![(0, 0)];
    for n in 1..=n_max + 1 {
        if let Some(q) = boundary_multiple(g_tau, n, tol) {
            boundaries.push((n, q));
        }
    }

    let mut blocks = Vec::new();
    for pair in boundaries.windows(2) {
        let (low, q) = pair[0];
        let (next, p) = pair[1];
        if low > n_max {
            break;
        }
        blocks.push(TrappingBlock {
            n_low: low,
            n_high: next - 1,
            kind: classify(q, p),
        });
    }
    // Trailing stretch not closed by a trapping value.
    let (last, _) = *boundaries.last().expect("n = 0 boundary always present");
    if last <= n_max {
        blocks.push(TrappingBlock {
            n_low: last,
            n_high: n_max,
            kind: BlockKind::Unclassified,
        });
    }
    Ok(blocks)
}

/// Build the tangent or cotangent state confined to one block.
///
/// The recurrence starts from d_{n_low} = seed_phase, runs up to n_high,
/// is zero outside the block and is normalized at the end.
pub fn build_block_state(
    block: &TrappingBlock,
    atom: &AtomState,
    g_tau: f64,
    seed_phase: Complex64,
    dim: usize,
) -> Result<PureFieldState> {
    if block.kind() == BlockKind::Unclassified {
        return Err(Error::UnclassifiedBlock {
            n_low: block.n_low(),
            n_high: block.n_high(),
        });
    }
    if atom.beta().norm() == 0.0 {
        return Err(Error::DegenerateAtom);
    }
    check_seed_phase(seed_phase)?;
    if dim <= block.n_high() {
        return Err(Error::InvalidInput(format!(
            "dimension {dim} does not contain block [{}, {}]",
            block.n_low(),
            block.n_high()
        )));
    }

    let ratio = atom.alpha() / atom.beta();
    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    amps[block.n_low()] = seed_phase;
    for n in block.n_low() + 1..=block.n_high() {
        let half = g_tau * (n as f64).sqrt() / 2.0;
        let (sin, cos) = half.sin_cos();
        let factor = match block.kind() {
            BlockKind::Tangent => {
                if cos.abs() < POLE_EPS {
                    return Err(Error::PoleInBlock {
                        n,
                        n_low: block.n_low(),
                        n_high: block.n_high(),
                    });
                }
                Complex64::i() * ratio * (sin / cos)
            }
            BlockKind::Cotangent => {
                if sin.abs() < POLE_EPS {
                    return Err(Error::PoleInBlock {
                        n,
                        n_low: block.n_low(),
                        n_high: block.n_high(),
                    });
                }
                -Complex64::i() * ratio * (cos / sin)
            }
            BlockKind::Unclassified => unreachable!(),
        };
        amps[n] = factor * amps[n - 1];
    }
    PureFieldState::normalized(amps)
}

/// Normalized weighted sum of block states over pairwise-disjoint blocks.
pub fn superpose(
    parts: &[BlockWeight],
    atom: &AtomState,
    g_tau: f64,
    dim: usize,
) -> Result<PureFieldState> {
    if parts.is_empty() {
        return Err(Error::InvalidInput(
            "superposition needs at least one part".into(),
        ));
    }
    for (i, a) in parts.iter().enumerate() {
        for b in parts.iter().skip(i + 1) {
            if a.block.overlaps(&b.block) {
                return Err(Error::InvalidInput(format!(
                    "overlapping blocks [{}, {}] and [{}, {}]",
                    a.block.n_low(),
                    a.block.n_high(),
                    b.block.n_low(),
                    b.block.n_high()
                )));
            }
        }
    }
    if parts.iter().all(|p| p.weight.norm() == 0.0) {
        return Err(Error::InvalidInput(
            "all superposition weights are zero".into(),
        ));
    }

    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    for part in parts {
        if part.weight.norm() == 0.0 {
            continue;
        }
        let state = build_block_state(&part.block, atom, g_tau, part.seed_phase, dim)?;
        for (acc, amp) in amps.iter_mut().zip(state.amps()) {
            *acc += part.weight * amp;
        }
    }
    PureFieldState::normalized(amps)
}

/// Observable whose magnitude the seed-phase search maximizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseObjective {
    FieldAmplitude,
    Y1,
    Y2,
}

fn pure_objective(amps: &[Complex64], objective: PhaseObjective) -> f64 {
    match objective {
        PhaseObjective::FieldAmplitude => {
            let mut acc = 0.0;
            for n in 1..amps.len() {
                acc += 2.0 * (n as f64).sqrt() * (amps[n] * amps[n - 1].conj()).im;
            }
            acc
        }
        PhaseObjective::Y1 => {
            let mut acc = 0.0;
            for n in 2..amps.len() {
                acc += ((n * (n - 1)) as f64).sqrt() * (amps[n] * amps[n - 2].conj()).re;
            }
            acc
        }
        PhaseObjective::Y2 => {
            let mut acc = 0.0;
            for n in 2..amps.len() {
                acc += ((n * (n - 1)) as f64).sqrt() * (amps[n] * amps[n - 2].conj()).im;
            }
            acc
        }
    }
}

/// Deterministic grid search over the relative seed phases of a block
/// superposition, maximizing |<objective>| of the superposed state.
///
/// The first part's phase is fixed to 1; each remaining part scans
/// `grid_points` equally spaced phases on the unit circle. Ties keep the
/// earliest grid point, so a structurally constant objective returns the
/// all-unit assignment.
pub fn optimize_seed_phases(
    parts: &[BlockWeight],
    atom: &AtomState,
    g_tau: f64,
    dim: usize,
    objective: PhaseObjective,
    grid_points: usize,
) -> Result<Vec<BlockWeight>> {
    if parts.len() < 2 {
        return Err(Error::InvalidInput(
            "phase optimization needs at least two parts".into(),
        ));
    }
    if grid_points < 2 {
        return Err(Error::InvalidInput(format!(
            "grid must have at least 2 points, got {grid_points}"
        )));
    }

    // Seeds enter the recurrence linearly, so each block state is built once
    // with unit seed and rotated by the trial phase afterwards.
    let unit = Complex64::new(1.0, 0.0);
    let mut block_states = Vec::with_capacity(parts.len());
    for part in parts {
        block_states.push(build_block_state(&part.block, atom, g_tau, unit, dim)?);
    }

    let free = parts.len() - 1;
    let mut indices = vec![0usize; free];
    let mut best_indices = indices.clone();
    let mut best_value = f64::NEG_INFINITY;
    let phase = |i: usize| {
        let angle = 2.0 * std::f64::consts::PI * i as f64 / grid_points as f64;
        Complex64::new(angle.cos(), angle.sin())
    };

    let mut amps = vec![Complex64::new(0.0, 0.0); dim];
    loop {
        for a in amps.iter_mut() {
            *a = Complex64::new(0.0, 0.0);
        }
        for (j, (part, state)) in parts.iter().zip(&block_states).enumerate() {
            let seed = if j == 0 { unit } else { phase(indices[j - 1]) };
            for (acc, amp) in amps.iter_mut().zip(state.amps()) {
                *acc += part.weight * seed * amp;
            }
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let value = if norm > 0.0 {
            (pure_objective(&amps, objective) / (norm * norm)).abs()
        } else {
            0.0
        };
        if value > best_value {
            best_value = value;
            best_indices.copy_from_slice(&indices);
        }

        // Odometer over the free phases, most significant digit first.
        let mut k = free;
        loop {
            if k == 0 {
                break;
            }
            indices[k - 1] += 1;
            if indices[k - 1] < grid_points {
                break;
            }
            indices[k - 1] = 0;
            k -= 1;
        }
        if k == 0 {
            break;
        }
    }

    let mut out = parts.to_vec();
    out[0].seed_phase = unit;
    for (j, part) in out.iter_mut().enumerate().skip(1) {
        part.seed_phase = phase(best_indices[j - 1]);
    }
    Ok(out)
}

#[cfg(test)]
// Frozen reference constants keep their full evaluated precision.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn c64(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reference_atom() -> AtomState {
        AtomState::from_real_alpha(0.9).unwrap()
    }

    #[test]
    fn taxonomy_at_g_tau_pi() {
        let blocks = detect_blocks(PI, 15, DEFAULT_BOUNDARY_TOL).unwrap();
        let expected = [
            (0, 0, BlockKind::Cotangent),
            (1, 3, BlockKind::Tangent),
            (4, 8, BlockKind::Cotangent),
            (9, 15, BlockKind::Tangent),
        ];
        assert_eq!(blocks.len(), expected.len());
        for (block, (lo, hi, kind)) in blocks.iter().zip(expected) {
            assert_eq!(
                (block.n_low(), block.n_high(), block.kind()),
                (lo, hi, kind)
            );
        }
    }

    #[test]
    fn even_even_parities_are_flagged() {
        // g tau = 2 pi: the boundary multiples are all even, so the strict
        // parity rule rejects every block.
        let blocks = detect_blocks(2.0 * PI, 3, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(
            (blocks[0].n_low(), blocks[0].n_high(), blocks[0].kind()),
            (0, 0, BlockKind::Unclassified)
        );
        assert_eq!(
            (blocks[1].n_low(), blocks[1].n_high(), blocks[1].kind()),
            (1, 3, BlockKind::Unclassified)
        );
    }

    #[test]
    fn half_pi_blocks_match_brute_force_scan() {
        let g_tau = PI / 2.0;
        let n_max = 16;
        let blocks = detect_blocks(g_tau, n_max, DEFAULT_BOUNDARY_TOL).unwrap();

        // Independent scan of g tau sqrt(n) / pi over n = 0..=17.
        let mut expected_boundaries = Vec::new();
        for n in 0..=n_max + 1 {
            let x = g_tau * (n as f64).sqrt() / PI;
            if (x - x.round()).abs() < 1e-9 {
                expected_boundaries.push((n, x.round() as i64));
            }
        }
        assert_eq!(expected_boundaries, vec![(0, 0), (4, 1), (16, 2)]);

        assert_eq!(blocks.len(), 3);
        assert_eq!(
            (blocks[0].n_low(), blocks[0].n_high(), blocks[0].kind()),
            (0, 3, BlockKind::Cotangent)
        );
        assert_eq!(
            (blocks[1].n_low(), blocks[1].n_high(), blocks[1].kind()),
            (4, 15, BlockKind::Tangent)
        );
        // [16, 16] is not closed by a trapping value below n_max + 1.
        assert_eq!(
            (blocks[2].n_low(), blocks[2].n_high(), blocks[2].kind()),
            (16, 16, BlockKind::Unclassified)
        );
    }

    #[test]
    fn no_trapping_boundary_yields_single_flagged_block() {
        let blocks = detect_blocks(1.0, 8, DEFAULT_BOUNDARY_TOL).unwrap();
        assert_eq!(blocks.len(), 1);
        assert_eq!(
            (blocks[0].n_low(), blocks[0].n_high(), blocks[0].kind()),
            (0, 8, BlockKind::Unclassified)
        );
    }

    #[test]
    fn blocks_cover_range_and_are_disjoint() {
        for (g_tau, n_max) in [(PI, 40), (PI / 2.0, 30), (2.0 * PI, 12), (0.7, 25)] {
            let blocks = detect_blocks(g_tau, n_max, DEFAULT_BOUNDARY_TOL).unwrap();
            let mut next = 0;
            for block in &blocks {
                assert_eq!(block.n_low(), next);
                assert!(block.n_high() >= block.n_low());
                next = block.n_high() + 1;
            }
            assert_eq!(next, n_max + 1);
        }
    }

    #[test]
    fn single_level_block_is_the_seed_times_vacuum() {
        let block = TrappingBlock::new(0, 0, BlockKind::Cotangent).unwrap();
        let seed = c64(0.0, 1.0);
        let state = build_block_state(&block, &reference_atom(), PI, seed, 4).unwrap();
        assert!((state.amp(0) - seed).norm() < 1e-15);
        for n in 1..4 {
            assert_eq!(state.amp(n), c64(0.0, 0.0));
        }
    }

    #[test]
    fn tangent_block_amplitudes_match_high_precision_recurrence() {
        // Normalized amplitudes for the block [1, 3] at g tau = pi,
        // alpha = 0.9: evaluated independently at 50-digit precision.
        let block = TrappingBlock::new(1, 3, BlockKind::Tangent).unwrap();
        let state = build_block_state(&block, &reference_atom(), PI, c64(1.0, 0.0), 5).unwrap();
        assert_eq!(state.amp(0), c64(0.0, 0.0));
        assert_abs_diff_eq!(state.amp(1).re, 0.2613351539287402418, epsilon = 1e-13);
        assert_abs_diff_eq!(state.amp(1).im, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(state.amp(2).re, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(state.amp(2).im, -0.7088457038557915876, epsilon = 1e-13);
        assert_abs_diff_eq!(state.amp(3).re, -0.6551654031206387313, epsilon = 1e-13);
        assert_abs_diff_eq!(state.amp(3).im, 0.0, epsilon = 1e-13);
        assert_eq!(state.amp(4), c64(0.0, 0.0));
    }

    #[test]
    fn cotangent_block_amplitudes_match_high_precision_recurrence() {
        let block = TrappingBlock::new(4, 8, BlockKind::Cotangent).unwrap();
        let state = build_block_state(&block, &reference_atom(), PI, c64(1.0, 0.0), 9).unwrap();
        let expected = [
            (0.04240851674359260391, 0.0),
            (0.0, -0.2252120980277947778),
            (-0.5453351299211869629, 0.0),
            (0.0, 0.7003781365403190255),
            (0.3994509864046899019, 0.0),
        ];
        for (k, (re, im)) in expected.iter().enumerate() {
            let amp = state.amp(4 + k);
            assert_abs_diff_eq!(amp.re, *re, epsilon = 1e-13);
            assert_abs_diff_eq!(amp.im, *im, epsilon = 1e-13);
        }
    }

    #[test]
    fn recurrence_continuations_vanish_at_block_edges() {
        // d_{n_high + 1} would be proportional to tan (resp. cot) at the
        // closing trapping value, which is zero there.
        let tan_factor = (PI * 4.0_f64.sqrt() / 2.0).tan();
        assert_abs_diff_eq!(tan_factor, 0.0, epsilon = 1e-12);
        let half = PI * 9.0_f64.sqrt() / 2.0;
        let cot_factor = half.cos() / half.sin();
        assert_abs_diff_eq!(cot_factor, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_atom_is_rejected() {
        let block = TrappingBlock::new(1, 3, BlockKind::Tangent).unwrap();
        let atom = AtomState::from_real_alpha(1.0).unwrap();
        match build_block_state(&block, &atom, PI, c64(1.0, 0.0), 5) {
            Err(Error::DegenerateAtom) => {}
            other => panic!("expected degenerate atom error, got {other:?}"),
        }
    }

    #[test]
    fn unclassified_block_refuses_construction() {
        let block = TrappingBlock::new(0, 3, BlockKind::Unclassified).unwrap();
        assert!(matches!(
            build_block_state(&block, &reference_atom(), 2.0 * PI, c64(1.0, 0.0), 5),
            Err(Error::UnclassifiedBlock { .. })
        ));
    }

    #[test]
    fn misclassified_block_hits_a_pole() {
        // Treating [1, 8] as cotangent runs the recurrence across n = 4,
        // where cot(pi sqrt(4)/2) = cot(pi) is singular.
        let block = TrappingBlock::new(1, 8, BlockKind::Cotangent).unwrap();
        match build_block_state(&block, &reference_atom(), PI, c64(1.0, 0.0), 9) {
            Err(Error::PoleInBlock { n: 4, .. }) => {}
            other => panic!("expected pole at n = 4, got {other:?}"),
        }
    }

    #[test]
    fn non_unit_seed_is_rejected() {
        let block = TrappingBlock::new(1, 3, BlockKind::Tangent).unwrap();
        assert!(build_block_state(&block, &reference_atom(), PI, c64(0.5, 0.0), 5).is_err());
    }

    fn baseline_parts() -> Vec<BlockWeight> {
        let blocks = detect_blocks(PI, 8, DEFAULT_BOUNDARY_TOL).unwrap();
        blocks.iter().map(|b| BlockWeight::unit(*b)).collect()
    }

    #[test]
    fn single_part_superposition_equals_block_state() {
        let block = TrappingBlock::new(1, 3, BlockKind::Tangent).unwrap();
        let part = BlockWeight::unit(block);
        let sup = superpose(&[part], &reference_atom(), PI, 5).unwrap();
        let direct = build_block_state(&block, &reference_atom(), PI, c64(1.0, 0.0), 5).unwrap();
        for n in 0..5 {
            assert!((sup.amp(n) - direct.amp(n)).norm() < 1e-14);
        }
    }

    #[test]
    fn default_superposition_has_support_zero_through_eight() {
        let parts = baseline_parts();
        assert_eq!(parts.len(), 3);
        let state = superpose(&parts, &reference_atom(), PI, 16).unwrap();
        for n in 0..=8 {
            assert!(state.amp(n).norm() > 1e-6, "amplitude {n} vanished");
        }
        for n in 9..16 {
            assert_eq!(state.amp(n), c64(0.0, 0.0));
        }
        assert_abs_diff_eq!(state.norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn zero_weight_part_drops_out() {
        let blocks = detect_blocks(PI, 8, DEFAULT_BOUNDARY_TOL).unwrap();
        let parts = vec![
            BlockWeight::unit(blocks[1]),
            BlockWeight::new(blocks[2], c64(0.0, 0.0), c64(1.0, 0.0)).unwrap(),
        ];
        let sup = superpose(&parts, &reference_atom(), PI, 16).unwrap();
        let direct =
            build_block_state(&blocks[1], &reference_atom(), PI, c64(1.0, 0.0), 16).unwrap();
        for n in 0..16 {
            assert!((sup.amp(n) - direct.amp(n)).norm() < 1e-14);
        }
    }

    #[test]
    fn superpose_rejects_bad_inputs() {
        let atom = reference_atom();
        assert!(superpose(&[], &atom, PI, 8).is_err());

        let a = TrappingBlock::new(1, 3, BlockKind::Tangent).unwrap();
        let b = TrappingBlock::new(2, 5, BlockKind::Cotangent).unwrap();
        assert!(superpose(&[BlockWeight::unit(a), BlockWeight::unit(b)], &atom, PI, 8).is_err());

        let zero = BlockWeight::new(a, c64(0.0, 0.0), c64(1.0, 0.0)).unwrap();
        assert!(superpose(&[zero], &atom, PI, 8).is_err());
    }

    #[test]
    fn phase_search_matches_finer_grid() {
        // One free phase: a 36-point search must land within one grid step
        // of the optimum found at 10x resolution.
        let blocks = detect_blocks(PI, 8, DEFAULT_BOUNDARY_TOL).unwrap();
        let parts = vec![BlockWeight::unit(blocks[0]), BlockWeight::unit(blocks[1])];
        let atom = reference_atom();

        let coarse =
            optimize_seed_phases(&parts, &atom, PI, 16, PhaseObjective::FieldAmplitude, 36)
                .unwrap();
        let fine = optimize_seed_phases(&parts, &atom, PI, 16, PhaseObjective::FieldAmplitude, 360)
            .unwrap();
        let coarse_angle = coarse[1].seed_phase.arg();
        let fine_angle = fine[1].seed_phase.arg();
        let mut delta = (coarse_angle - fine_angle).abs();
        if delta > PI {
            delta = 2.0 * PI - delta;
        }
        assert!(
            delta <= 2.0 * PI / 36.0 + 1e-12,
            "coarse optimum {coarse_angle} too far from fine optimum {fine_angle}"
        );
    }

    #[test]
    fn structurally_constant_objective_keeps_first_grid_point() {
        // Blocks [0,0] and [4,8] are separated by a gap >= 2, so the field
        // amplitude has no inter-block term and the objective is flat.
        let blocks = detect_blocks(PI, 8, DEFAULT_BOUNDARY_TOL).unwrap();
        let parts = vec![BlockWeight::unit(blocks[0]), BlockWeight::unit(blocks[2])];
        let out = optimize_seed_phases(
            &parts,
            &reference_atom(),
            PI,
            16,
            PhaseObjective::FieldAmplitude,
            90,
        )
        .unwrap();
        assert!((out[1].seed_phase - c64(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn optimized_phases_do_not_lose_to_unit_phases() {
        let parts = baseline_parts();
        let atom = reference_atom();
        let baseline = superpose(&parts, &atom, PI, 16).unwrap();
        let baseline_value = pure_objective(
            baseline.amps().as_slice().unwrap(),
            PhaseObjective::FieldAmplitude,
        )
        .abs();

        let optimized =
            optimize_seed_phases(&parts, &atom, PI, 16, PhaseObjective::FieldAmplitude, 60)
                .unwrap();
        let state = superpose(&optimized, &atom, PI, 16).unwrap();
        let value = pure_objective(
            state.amps().as_slice().unwrap(),
            PhaseObjective::FieldAmplitude,
        )
        .abs();
        assert!(value + 1e-12 >= baseline_value);
    }

    #[test]
    fn phase_search_rejects_bad_inputs() {
        let blocks = detect_blocks(PI, 8, DEFAULT_BOUNDARY_TOL).unwrap();
        let one = vec![BlockWeight::unit(blocks[0])];
        let two = vec![BlockWeight::unit(blocks[0]), BlockWeight::unit(blocks[1])];
        let atom = reference_atom();
        assert!(optimize_seed_phases(&one, &atom, PI, 16, PhaseObjective::Y1, 10).is_err());
        assert!(optimize_seed_phases(&two, &atom, PI, 16, PhaseObjective::Y1, 1).is_err());
    }
}
