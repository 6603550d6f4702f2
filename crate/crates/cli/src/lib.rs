//! Command-line front end: config resolution, the run itself, CSV/SVG
//! emission and the reproducibility manifest.

pub mod config;
pub mod error;
pub mod manifest;
pub mod output;
pub mod plot;

use micromaser_core::{optimize_seed_phases, run};

pub use config::{resolve, CliArgs, ResolvedRun};
pub use error::{CliError, Result};
pub use manifest::RunManifest;

/// Resolve the configuration, run the pump sequence and write all outputs.
pub fn execute(args: &CliArgs) -> Result<(ResolvedRun, RunManifest)> {
    let mut resolved = resolve(args)?;

    if resolved.settings.optimize_phases >= 2 {
        let optimized = optimize_seed_phases(
            &resolved.sim.parts,
            &resolved.sim.atom,
            resolved.sim.g_tau(),
            resolved.sim.dim(),
            resolved.settings.objective,
            resolved.settings.optimize_phases,
        )?;
        resolved.optimized_seed_phase_deg = Some(
            optimized
                .iter()
                .map(|p| p.seed_phase.arg().to_degrees())
                .collect(),
        );
        resolved.sim.parts = optimized;
    }

    let run_output = run(&resolved.sim)?;
    let manifest = output::emit_outputs(&resolved, &run_output, &args.out)?;
    Ok((resolved, manifest))
}
