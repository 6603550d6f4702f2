//! Configuration resolution: built-in defaults, then a flat key = value
//! config file, then command-line flags, each layer overriding the last.
//!
//! The defaults reproduce the baseline run: g = 4.4e4 Hz, tau = 7.14e-5 s
//! (snapped to the g tau = pi trapping value), T = 6.666e-3 s, gamma = 5/s,
//! a real alpha = 0.9 atom, and the cotangent/tangent/cotangent initial
//! superposition on blocks 0-0, 1-3, 4-8.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use micromaser_core::{
    detect_blocks, AtomState, BlockKind, BlockWeight, Complex64, DecayWindow, FieldUnits,
    PhaseObjective, SimConfig,
};

use crate::error::{CliError, Result};

/// Relative slack within which a requested g*tau is snapped onto the nearest
/// trapping-compatible value (the interaction time is the tuning knob).
pub const SNAP_REL_TOL: f64 = 1e-4;

/// Simulate a regularly pumped micromaser with injected atomic coherence.
#[derive(Debug, Parser)]
#[command(name = "micromaser", version, about)]
pub struct CliArgs {
    /// Flat key = value config file with '#' comments.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Output directory for CSV, plot and manifest files.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,

    /// Number of atoms to inject.
    #[arg(long)]
    pub atoms: Option<usize>,

    /// Cavity loss coefficient (1/s).
    #[arg(long)]
    pub gamma: Option<f64>,

    /// Shortcut for --gamma 0.
    #[arg(long)]
    pub lossless: bool,

    /// Atom index at which to capture a density-matrix snapshot
    /// (repeatable; replaces the configured list).
    #[arg(long = "snapshot")]
    pub snapshot: Vec<usize>,

    /// Grid points for the seed-phase search (applied before the run).
    #[arg(long = "optimize-phases")]
    pub optimize_phases: Option<usize>,

    /// Decay interval convention.
    #[arg(long = "decay-window", value_enum)]
    pub decay_window: Option<DecayWindowArg>,

    /// Seed-phase override <block-index>=<degrees> (repeatable).
    #[arg(long = "seed-phase")]
    pub seed_phase: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecayWindowArg {
    /// Decay over the full period T.
    Full,
    /// Decay over T - tau, excluding the transit time.
    MinusTau,
}

impl From<DecayWindowArg> for DecayWindow {
    fn from(arg: DecayWindowArg) -> Self {
        match arg {
            DecayWindowArg::Full => DecayWindow::FullT,
            DecayWindowArg::MinusTau => DecayWindow::TMinusTau,
        }
    }
}

/// All tunable settings, before physics resolution.
#[derive(Debug, Clone)]
pub struct Settings {
    pub g: f64,
    pub tau: f64,
    pub t_period: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: Option<f64>,
    pub n_max: usize,
    pub atoms: usize,
    pub blocks: Vec<(usize, usize)>,
    pub weights: Vec<f64>,
    pub seed_phase_deg: Vec<f64>,
    pub snapshots: Vec<usize>,
    pub decay_window: DecayWindow,
    pub block_tol: f64,
    pub snap_gtau: bool,
    pub prefactor: f64,
    pub sample_after_kick: bool,
    pub optimize_phases: usize,
    pub objective: PhaseObjective,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            g: 4.4e4,
            tau: 7.14e-5,
            t_period: 6.666e-3,
            gamma: 5.0,
            alpha: 0.9,
            beta: None,
            n_max: 35,
            atoms: 100,
            blocks: vec![(0, 0), (1, 3), (4, 8)],
            weights: Vec::new(),
            seed_phase_deg: Vec::new(),
            snapshots: vec![0, 10, 20, 100],
            decay_window: DecayWindow::FullT,
            block_tol: 1e-5,
            snap_gtau: true,
            prefactor: 1.0,
            sample_after_kick: false,
            optimize_phases: 0,
            objective: PhaseObjective::FieldAmplitude,
        }
    }
}

/// The fully resolved run: the core config plus the CLI-level context the
/// manifest echoes.
#[derive(Debug, Clone)]
pub struct ResolvedRun {
    pub sim: SimConfig,
    pub settings: Settings,
    /// tau as requested, before any snap.
    pub tau_requested: f64,
    /// Whether tau was snapped onto a trapping value.
    pub snapped: bool,
    /// Seed phases as configured, in degrees. When a phase search runs, these
    /// stay the inputs; the chosen phases land in `optimized_seed_phase_deg`.
    pub seed_phase_deg: Vec<f64>,
    pub optimized_seed_phase_deg: Option<Vec<f64>>,
    pub weights: Vec<f64>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.trim().parse::<T>().map_err(|_| {
        CliError::Config(format!(
            "config line {line}: cannot parse '{value}' for key '{key}'"
        ))
    })
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    let trimmed = value.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    trimmed
        .split(',')
        .map(|item| parse_value::<T>(key, item, line))
        .collect()
}

fn parse_block_list(value: &str, line: usize) -> Result<Vec<(usize, usize)>> {
    value
        .trim()
        .split(',')
        .map(|item| {
            let (lo, hi) = item.trim().split_once('-').ok_or_else(|| {
                CliError::Config(format!(
                    "config line {line}: block '{item}' must look like '<lo>-<hi>'"
                ))
            })?;
            let lo: usize = parse_value("blocks", lo, line)?;
            let hi: usize = parse_value("blocks", hi, line)?;
            if lo > hi {
                return Err(CliError::Config(format!(
                    "config line {line}: block '{item}' has lo > hi"
                )));
            }
            Ok((lo, hi))
        })
        .collect()
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(CliError::Config(format!(
            "config line {line}: key '{key}' wants true/false, got '{other}'"
        ))),
    }
}

fn parse_objective(value: &str, line: usize) -> Result<PhaseObjective> {
    match value.trim() {
        "e_field" | "field" => Ok(PhaseObjective::FieldAmplitude),
        "y1" => Ok(PhaseObjective::Y1),
        "y2" => Ok(PhaseObjective::Y2),
        other => Err(CliError::Config(format!(
            "config line {line}: objective must be e_field, y1 or y2, got '{other}'"
        ))),
    }
}

/// Apply a flat key = value config file on top of the settings.
pub fn apply_config_file(settings: &mut Settings, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|err| {
        CliError::Config(format!("cannot read config file {}: {err}", path.display()))
    })?;
    // Collect into a map first so duplicate keys are reported.
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "config line {line_no}: expected 'key = value', got '{raw_line}'"
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        if let Some(first) = seen.insert(key.to_string(), line_no) {
            return Err(CliError::Config(format!(
                "config line {line_no}: key '{key}' already set on line {first}"
            )));
        }
        match key {
            "g" => settings.g = parse_value(key, value, line_no)?,
            "tau" => settings.tau = parse_value(key, value, line_no)?,
            "T" => settings.t_period = parse_value(key, value, line_no)?,
            "gamma" => settings.gamma = parse_value(key, value, line_no)?,
            "alpha" => settings.alpha = parse_value(key, value, line_no)?,
            "beta" => settings.beta = Some(parse_value(key, value, line_no)?),
            "n_max" => settings.n_max = parse_value(key, value, line_no)?,
            "atoms" => settings.atoms = parse_value(key, value, line_no)?,
            "blocks" => settings.blocks = parse_block_list(value, line_no)?,
            "weights" => settings.weights = parse_list(key, value, line_no)?,
            "seed_phase_deg" => settings.seed_phase_deg = parse_list(key, value, line_no)?,
            "snapshots" => settings.snapshots = parse_list(key, value, line_no)?,
            "decay_window" => {
                settings.decay_window = match value {
                    "full" => DecayWindow::FullT,
                    "minus-tau" => DecayWindow::TMinusTau,
                    other => {
                        return Err(CliError::Config(format!(
                            "config line {line_no}: decay_window must be 'full' or 'minus-tau', got '{other}'"
                        )))
                    }
                }
            }
            "block_tol" => settings.block_tol = parse_value(key, value, line_no)?,
            "snap_gtau" => settings.snap_gtau = parse_bool(key, value, line_no)?,
            "prefactor" => settings.prefactor = parse_value(key, value, line_no)?,
            "sample_after_kick" => {
                settings.sample_after_kick = parse_bool(key, value, line_no)?
            }
            "optimize_phases" => settings.optimize_phases = parse_value(key, value, line_no)?,
            "objective" => settings.objective = parse_objective(value, line_no)?,
            other => {
                return Err(CliError::Config(format!(
                    "config line {line_no}: unknown key '{other}'"
                )))
            }
        }
    }
    Ok(())
}

fn apply_flags(settings: &mut Settings, args: &CliArgs) -> Result<()> {
    if let Some(atoms) = args.atoms {
        settings.atoms = atoms;
    }
    if args.lossless {
        settings.gamma = 0.0;
    }
    if let Some(gamma) = args.gamma {
        settings.gamma = gamma;
    }
    if !args.snapshot.is_empty() {
        settings.snapshots = args.snapshot.clone();
    }
    if let Some(grid) = args.optimize_phases {
        settings.optimize_phases = grid;
    }
    if let Some(window) = args.decay_window {
        settings.decay_window = window.into();
    }
    Ok(())
}

fn apply_seed_phase_flags(args: &CliArgs, phases: &mut [f64]) -> Result<()> {
    for entry in &args.seed_phase {
        let (idx, deg) = entry.split_once('=').ok_or_else(|| {
            CliError::Config(format!(
                "--seed-phase wants <block-index>=<degrees>, got '{entry}'"
            ))
        })?;
        let idx: usize = idx
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--seed-phase: bad block index in '{entry}'")))?;
        let deg: f64 = deg
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("--seed-phase: bad angle in '{entry}'")))?;
        if idx >= phases.len() {
            return Err(CliError::Config(format!(
                "--seed-phase: block index {idx} out of range (have {} blocks)",
                phases.len()
            )));
        }
        phases[idx] = deg;
    }
    Ok(())
}

fn phase_from_degrees(deg: f64) -> Complex64 {
    let rad = deg.to_radians();
    Complex64::new(rad.cos(), rad.sin())
}

/// Snap tau so that g*tau lands exactly on the trapping value implied by the
/// requested blocks, when it is within [`SNAP_REL_TOL`] of one.
fn snap_tau(settings: &Settings) -> Option<f64> {
    let smallest_edge = settings
        .blocks
        .iter()
        .flat_map(|(lo, hi)| [*lo, hi + 1])
        .filter(|edge| *edge > 0)
        .min()?;
    let g_tau = settings.g * settings.tau;
    let root = (smallest_edge as f64).sqrt();
    let multiple = (g_tau * root / std::f64::consts::PI).round();
    if multiple < 1.0 {
        return None;
    }
    let target = multiple * std::f64::consts::PI / root;
    if (g_tau - target).abs() <= SNAP_REL_TOL * target {
        Some(target / settings.g)
    } else {
        None
    }
}

/// Resolve defaults, config file and flags into a runnable configuration.
pub fn resolve(args: &CliArgs) -> Result<ResolvedRun> {
    let mut settings = Settings::default();
    if let Some(path) = &args.config {
        apply_config_file(&mut settings, path)?;
    }
    apply_flags(&mut settings, args)?;

    if settings.blocks.is_empty() {
        return Err(CliError::Config("no blocks configured".into()));
    }

    // Weights and seed phases default per block: weight 1, first block phase
    // 0 degrees, later blocks 90 degrees (so the per-atom sign flips show up
    // in the field and in both quadrature observables).
    let weights = if settings.weights.is_empty() {
        vec![1.0; settings.blocks.len()]
    } else if settings.weights.len() == settings.blocks.len() {
        settings.weights.clone()
    } else {
        return Err(CliError::Config(format!(
            "weights lists {} entries for {} blocks",
            settings.weights.len(),
            settings.blocks.len()
        )));
    };
    let mut seed_phase_deg = if settings.seed_phase_deg.is_empty() {
        let mut phases = vec![90.0; settings.blocks.len()];
        phases[0] = 0.0;
        phases
    } else if settings.seed_phase_deg.len() == settings.blocks.len() {
        settings.seed_phase_deg.clone()
    } else {
        return Err(CliError::Config(format!(
            "seed_phase_deg lists {} entries for {} blocks",
            settings.seed_phase_deg.len(),
            settings.blocks.len()
        )));
    };
    apply_seed_phase_flags(args, &mut seed_phase_deg)?;

    // Atom.
    let beta = match settings.beta {
        Some(beta) => beta,
        None => {
            if settings.alpha.abs() > 1.0 {
                return Err(CliError::Config(format!(
                    "alpha = {} needs an explicit beta (|alpha| > 1)",
                    settings.alpha
                )));
            }
            (1.0 - settings.alpha * settings.alpha).sqrt()
        }
    };
    let atom = AtomState::new(
        Complex64::new(settings.alpha, 0.0),
        Complex64::new(beta, 0.0),
    )?;

    // Interaction time: snap onto the trapping value when close enough.
    let tau_requested = settings.tau;
    let mut snapped = false;
    if settings.snap_gtau {
        if let Some(tau) = snap_tau(&settings) {
            snapped = (tau - settings.tau).abs() > 0.0;
            settings.tau = tau;
        }
    }

    // Match the requested block ranges against the detected taxonomy.
    let g_tau = settings.g * settings.tau;
    let detected = detect_blocks(g_tau, settings.n_max, settings.block_tol)?;
    let mut parts = Vec::with_capacity(settings.blocks.len());
    for (i, (lo, hi)) in settings.blocks.iter().enumerate() {
        let found = detected
            .iter()
            .find(|b| b.n_low() == *lo && b.n_high() == *hi && b.kind() != BlockKind::Unclassified);
        let block = found.ok_or_else(|| {
            let listing: Vec<String> = detected
                .iter()
                .map(|b| format!("[{}, {}] {:?}", b.n_low(), b.n_high(), b.kind()))
                .collect();
            CliError::Physics(format!(
                "requested block [{lo}, {hi}] is not a tangent/cotangent block at g*tau = {g_tau}; \
                 detected blocks: {}",
                listing.join(", ")
            ))
        })?;
        parts.push(BlockWeight::new(
            *block,
            Complex64::new(weights[i], 0.0),
            phase_from_degrees(seed_phase_deg[i]),
        )?);
    }

    let sim = SimConfig {
        g: settings.g,
        tau: settings.tau,
        t_period: settings.t_period,
        gamma: settings.gamma,
        atom,
        n_max: settings.n_max,
        parts,
        atom_count: settings.atoms,
        field_units: FieldUnits::new(settings.prefactor)?,
        decay_window: settings.decay_window,
        snapshot_atoms: settings.snapshots.clone(),
        sample_after_kick: settings.sample_after_kick,
    };
    sim.validate()?;
    if settings.optimize_phases == 1 {
        return Err(CliError::Config(
            "optimize_phases needs a grid of at least 2 points (or 0 to disable)".into(),
        ));
    }

    Ok(ResolvedRun {
        sim,
        settings,
        tau_requested,
        snapped,
        seed_phase_deg,
        optimized_seed_phase_deg: None,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::Parser;

    fn args(list: &[&str]) -> CliArgs {
        CliArgs::parse_from(std::iter::once("micromaser").chain(list.iter().copied()))
    }

    #[test]
    fn empty_invocation_resolves_baseline_defaults() {
        let resolved = resolve(&args(&[])).unwrap();
        assert_eq!(resolved.sim.g, 4.4e4);
        assert_eq!(resolved.sim.t_period, 6.666e-3);
        assert_eq!(resolved.sim.gamma, 5.0);
        assert_eq!(resolved.sim.n_max, 35);
        assert_eq!(resolved.sim.atom_count, 100);
        assert_eq!(resolved.tau_requested, 7.14e-5);
        // tau snapped onto the g tau = pi trapping value.
        assert!(resolved.snapped);
        assert!((resolved.sim.g_tau() - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(resolved.sim.parts.len(), 3);
    }

    #[test]
    fn lossless_flag_zeroes_gamma() {
        let resolved = resolve(&args(&["--lossless"])).unwrap();
        assert_eq!(resolved.sim.gamma, 0.0);
    }

    #[test]
    fn gamma_flag_overrides_lossless() {
        let resolved = resolve(&args(&["--lossless", "--gamma", "2.5"])).unwrap();
        assert_eq!(resolved.sim.gamma, 2.5);
    }

    #[test]
    fn non_trapping_g_tau_is_a_physics_error() {
        // g tau = 1.0 has no trapping boundary anywhere near the requested
        // blocks and is too far from one to snap.
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("non_trapping.cfg");
        std::fs::write(&path, format!("tau = {}\n", 1.0 / 4.4e4)).unwrap();
        let err = resolve(&args(&["--config", path.to_str().unwrap()])).unwrap_err();
        match &err {
            CliError::Physics(msg) => assert!(msg.contains("not a tangent/cotangent block")),
            other => panic!("expected physics error, got {other:?}"),
        }
        assert_eq!(err.exit_code(), 3);
    }

    #[test]
    fn flags_override_the_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("base.cfg");
        std::fs::write(&path, "atoms = 5\ngamma = 2\n").unwrap();
        let resolved =
            resolve(&args(&["--config", path.to_str().unwrap(), "--atoms", "7"])).unwrap();
        assert_eq!(resolved.sim.atom_count, 7);
        assert_eq!(resolved.sim.gamma, 2.0);
    }

    #[test]
    fn seed_phase_flag_overrides_one_block() {
        let resolved = resolve(&args(&["--seed-phase", "1=180"])).unwrap();
        assert_eq!(resolved.seed_phase_deg, vec![0.0, 180.0, 90.0]);
        assert!((resolved.sim.parts[1].seed_phase - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn snapshot_flags_replace_the_list() {
        let resolved = resolve(&args(&["--snapshot", "3", "--snapshot", "7"])).unwrap();
        assert_eq!(resolved.sim.snapshot_atoms, vec![3, 7]);
    }

    #[test]
    fn bad_seed_phase_flag_is_a_config_error() {
        for bad in ["5=90", "x=1", "1:90"] {
            let err = resolve(&args(&["--seed-phase", bad])).unwrap_err();
            assert_eq!(err.exit_code(), 2, "entry '{bad}'");
        }
    }
}
