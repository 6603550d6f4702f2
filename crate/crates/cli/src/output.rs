//! CSV and plot emission. All numbers are written with Rust's shortest
//! round-trip formatting, so re-parsing a CSV reproduces the in-memory
//! values exactly and identical configs produce byte-identical files.

use std::io::Write;
use std::path::{Path, PathBuf};

use micromaser_core::{photon_distribution, AtomRecord, DensityMatrix, RunOutput, TimeSeries};

use crate::config::ResolvedRun;
use crate::error::{CliError, Result};
use crate::manifest::{build_manifest, RunManifest};
use crate::plot;

pub const SERIES_HEADER: &str = "atom,e_field,y1,y2,mean_n,purity,trace_error";

pub fn write_series_csv(series: &TimeSeries, path: &Path) -> Result<()> {
    let mut out = String::new();
    out.push_str(SERIES_HEADER);
    out.push('\n');
    for r in &series.records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            r.index, r.e_field, r.y1, r.y2, r.mean_n, r.purity, r.trace_error
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Parse a series CSV back; numbers round-trip exactly.
pub fn read_series_csv(path: &Path) -> Result<TimeSeries> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    match lines.next() {
        Some(header) if header == SERIES_HEADER => {}
        other => {
            return Err(CliError::Config(format!(
                "{}: unexpected series header {other:?}",
                path.display()
            )))
        }
    }
    let mut series = TimeSeries::default();
    for (idx, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(CliError::Config(format!(
                "{} row {}: expected 7 fields, got {}",
                path.display(),
                idx + 2,
                fields.len()
            )));
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|_| {
                CliError::Config(format!(
                    "{} row {}: bad float '{s}'",
                    path.display(),
                    idx + 2
                ))
            })
        };
        series.records.push(AtomRecord {
            index: fields[0].parse::<usize>().map_err(|_| {
                CliError::Config(format!(
                    "{} row {}: bad atom index '{}'",
                    path.display(),
                    idx + 2,
                    fields[0]
                ))
            })?,
            e_field: parse_f(fields[1])?,
            y1: parse_f(fields[2])?,
            y2: parse_f(fields[3])?,
            mean_n: parse_f(fields[4])?,
            purity: parse_f(fields[5])?,
            trace_error: parse_f(fields[6])?,
        });
    }
    Ok(series)
}

pub fn write_density_csv(rho: &DensityMatrix, path: &Path) -> Result<()> {
    let mut out = String::from("m,n,re,im\n");
    for m in 0..rho.dim() {
        for n in 0..rho.dim() {
            let v = rho.get(m, n);
            out.push_str(&format!("{m},{n},{},{}\n", v.re, v.im));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_distribution_csv(p: &[f64], path: &Path) -> Result<()> {
    let mut out = String::from("n,p\n");
    for (n, v) in p.iter().enumerate() {
        out.push_str(&format!("{n},{v}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Write every output file for a finished run and return the manifest.
/// On any failure the files written so far are removed.
pub fn emit_outputs(
    resolved: &ResolvedRun,
    output: &RunOutput,
    out_dir: &Path,
) -> Result<RunManifest> {
    std::fs::create_dir_all(out_dir)?;
    let mut written: Vec<PathBuf> = Vec::new();
    match emit_inner(resolved, output, out_dir, &mut written) {
        Ok(manifest) => Ok(manifest),
        Err(err) => {
            for path in written.iter().rev() {
                let _ = std::fs::remove_file(path);
            }
            Err(err)
        }
    }
}

fn emit_inner(
    resolved: &ResolvedRun,
    output: &RunOutput,
    out_dir: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<RunManifest> {
    let mut names: Vec<String> = Vec::new();
    let track = |written: &mut Vec<PathBuf>, names: &mut Vec<String>, path: PathBuf| {
        names.push(
            path.file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default(),
        );
        written.push(path);
    };

    let series_path = out_dir.join("series.csv");
    write_series_csv(&output.series, &series_path)?;
    track(written, &mut names, series_path);

    for (atom, rho) in &output.snapshots {
        let rho_path = out_dir.join(format!("rho_{atom}.csv"));
        write_density_csv(rho, &rho_path)?;
        track(written, &mut names, rho_path);

        let (p, _) = photon_distribution(rho)?;
        let pn_path = out_dir.join(format!("pn_{atom}.csv"));
        write_distribution_csv(&p, &pn_path)?;
        track(written, &mut names, pn_path);

        let pn_svg = out_dir.join(format!("pn_{atom}.svg"));
        plot::distribution_bars(
            &pn_svg,
            &format!("photon number distribution after {atom} atoms"),
            &p,
        )?;
        track(written, &mut names, pn_svg);

        let rho_svg = out_dir.join(format!("rho_{atom}.svg"));
        plot::density_heatmap(&rho_svg, &format!("|rho_mn| after {atom} atoms"), rho)?;
        track(written, &mut names, rho_svg);
    }

    if !output.series.is_empty() {
        type Column = (&'static str, fn(&AtomRecord) -> f64);
        let columns: [Column; 3] = [
            ("e_field", |r| r.e_field),
            ("y1", |r| r.y1),
            ("y2", |r| r.y2),
        ];
        for (name, select) in columns {
            let ys: Vec<f64> = output.series.records.iter().map(select).collect();
            let path = out_dir.join(format!("series_{name}.svg"));
            plot::series_line(&path, name, &ys)?;
            track(written, &mut names, path);
        }
    }

    let mut manifest = build_manifest(resolved, output)?;
    names.push("manifest.json".into());
    manifest.outputs = names;
    let manifest_path = out_dir.join("manifest.json");
    manifest.write(&manifest_path)?;
    written.push(manifest_path);

    Ok(manifest)
}

/// Small human summary printed on success.
pub fn print_summary(
    mut sink: impl Write,
    resolved: &ResolvedRun,
    manifest: &RunManifest,
    out_dir: &Path,
) -> Result<()> {
    writeln!(
        sink,
        "ran {} atoms at g*tau = {:.6} (dim {})",
        resolved.sim.atom_count,
        resolved.sim.g_tau(),
        resolved.sim.dim()
    )?;
    if let (Some(n_ex), Some(theta)) = (manifest.derived.n_ex, manifest.derived.theta_int) {
        writeln!(sink, "N_ex = {n_ex:.3}, theta_int = {theta:.3}")?;
    } else {
        writeln!(sink, "lossless run (gamma = 0)")?;
    }
    writeln!(
        sink,
        "{} files in {}",
        manifest.outputs.len(),
        out_dir.display()
    )?;
    Ok(())
}
