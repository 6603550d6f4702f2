//! The run manifest: a JSON record of the fully resolved configuration,
//! derived quantities and produced files, sufficient to reproduce the run
//! bit-identically.

use std::path::Path;

use micromaser_core::{BlockKind, DecayWindow, PhaseObjective, RunOutput};
use serde::{Deserialize, Serialize};

use crate::config::ResolvedRun;
use crate::error::Result;

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub created_unix_s: u64,
    pub config: ConfigEcho,
    pub derived: Derived,
    pub snapshot_stats: Vec<SnapshotStats>,
    pub outputs: Vec<String>,
}

/// Full resolved configuration, flat enough to paste back into a config
/// file.
#[derive(Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub g: f64,
    pub tau_requested: f64,
    pub tau: f64,
    pub tau_snapped: bool,
    #[serde(rename = "T")]
    pub t_period: f64,
    pub gamma: f64,
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub beta_re: f64,
    pub beta_im: f64,
    pub n_max: usize,
    pub atoms: usize,
    pub blocks: Vec<BlockEcho>,
    pub snapshots: Vec<usize>,
    pub decay_window: String,
    pub block_tol: f64,
    pub snap_gtau: bool,
    pub prefactor: f64,
    pub sample_after_kick: bool,
    pub optimize_phases: usize,
    pub objective: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct BlockEcho {
    pub n_low: usize,
    pub n_high: usize,
    pub kind: String,
    pub weight: f64,
    pub seed_phase_deg: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Derived {
    pub g_tau: f64,
    /// Atoms per photon lifetime, absent for lossless runs.
    pub n_ex: Option<f64>,
    /// Pumping parameter g tau sqrt(N_ex).
    pub theta_int: Option<f64>,
    pub decay_duration: f64,
    /// Phases chosen by the seed-phase search, when one ran. Reproducing the
    /// run uses the echoed inputs plus `optimize_phases`; the search is
    /// deterministic.
    pub optimized_seed_phase_deg: Option<Vec<f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SnapshotStats {
    pub atom: usize,
    pub off_diagonal_mass_ratio: f64,
    pub mean_photon_number: f64,
    pub purity: f64,
}

fn kind_name(kind: BlockKind) -> String {
    match kind {
        BlockKind::Tangent => "tangent".into(),
        BlockKind::Cotangent => "cotangent".into(),
        BlockKind::Unclassified => "unclassified".into(),
    }
}

fn window_name(window: DecayWindow) -> String {
    match window {
        DecayWindow::FullT => "full".into(),
        DecayWindow::TMinusTau => "minus-tau".into(),
    }
}

fn objective_name(objective: PhaseObjective) -> String {
    match objective {
        PhaseObjective::FieldAmplitude => "e_field".into(),
        PhaseObjective::Y1 => "y1".into(),
        PhaseObjective::Y2 => "y2".into(),
    }
}

pub fn build_manifest(resolved: &ResolvedRun, output: &RunOutput) -> Result<RunManifest> {
    let sim = &resolved.sim;
    let blocks = sim
        .parts
        .iter()
        .enumerate()
        .map(|(i, part)| BlockEcho {
            n_low: part.block.n_low(),
            n_high: part.block.n_high(),
            kind: kind_name(part.block.kind()),
            weight: resolved.weights[i],
            seed_phase_deg: resolved.seed_phase_deg[i],
        })
        .collect();

    let snapshot_stats = output
        .snapshots
        .iter()
        .map(|(atom, rho)| {
            let (_, mean) = micromaser_core::photon_distribution(rho)?;
            Ok(SnapshotStats {
                atom: *atom,
                off_diagonal_mass_ratio: rho.off_diagonal_mass_ratio(),
                mean_photon_number: mean,
                purity: rho.purity(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let created_unix_s = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);

    Ok(RunManifest {
        tool: "micromaser".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        created_unix_s,
        config: ConfigEcho {
            g: sim.g,
            tau_requested: resolved.tau_requested,
            tau: sim.tau,
            tau_snapped: resolved.snapped,
            t_period: sim.t_period,
            gamma: sim.gamma,
            alpha_re: sim.atom.alpha().re,
            alpha_im: sim.atom.alpha().im,
            beta_re: sim.atom.beta().re,
            beta_im: sim.atom.beta().im,
            n_max: sim.n_max,
            atoms: sim.atom_count,
            blocks,
            snapshots: sim.snapshot_atoms.clone(),
            decay_window: window_name(sim.decay_window),
            block_tol: resolved.settings.block_tol,
            snap_gtau: resolved.settings.snap_gtau,
            prefactor: sim.field_units.prefactor(),
            sample_after_kick: sim.sample_after_kick,
            optimize_phases: resolved.settings.optimize_phases,
            objective: objective_name(resolved.settings.objective),
        },
        derived: Derived {
            g_tau: sim.g_tau(),
            n_ex: sim.n_ex(),
            theta_int: sim.theta_int(),
            decay_duration: sim.decay_duration(),
            optimized_seed_phase_deg: resolved.optimized_seed_phase_deg.clone(),
        },
        snapshot_stats,
        outputs: Vec::new(),
    })
}

impl RunManifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|err| crate::error::CliError::Io(std::io::Error::other(err)))?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|err| crate::error::CliError::Io(std::io::Error::other(err)))
    }
}
