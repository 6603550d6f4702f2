//! Static SVG plots: observable traces per atom, photon-number bar charts
//! and |rho_mn| heatmaps per snapshot.

use std::path::Path;

use micromaser_core::DensityMatrix;
use plotters::prelude::*;

use crate::error::{CliError, Result};

fn draw_error<E: std::error::Error>(err: E) -> CliError {
    CliError::Io(std::io::Error::other(err.to_string()))
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() || !hi.is_finite() {
        return (-1.0, 1.0);
    }
    let span = (hi - lo).max(1e-12);
    (lo - 0.08 * span, hi + 0.08 * span)
}

/// Observable value per atom index, drawn as a connected line so the
/// period-2 alternation shows as a zigzag.
pub fn series_line(path: &Path, title: &str, ys: &[f64]) -> Result<()> {
    let root = SVGBackend::new(path, (900, 480)).into_drawing_area();
    root.fill(&WHITE).map_err(draw_error)?;
    let (lo, hi) = padded_range(ys.iter().copied());
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(70)
        .build_cartesian_2d(0.0..(ys.len() as f64 + 1.0), lo..hi)
        .map_err(draw_error)?;
    chart
        .configure_mesh()
        .x_desc("atom")
        .y_desc(title)
        .draw()
        .map_err(draw_error)?;
    chart
        .draw_series(LineSeries::new(
            ys.iter().enumerate().map(|(k, y)| ((k + 1) as f64, *y)),
            &BLUE,
        ))
        .map_err(draw_error)?;
    root.present().map_err(draw_error)?;
    Ok(())
}

/// Photon number distribution as a bar chart.
pub fn distribution_bars(path: &Path, title: &str, p: &[f64]) -> Result<()> {
    let root = SVGBackend::new(path, (760, 460)).into_drawing_area();
    root.fill(&WHITE).map_err(draw_error)?;
    let top = p.iter().copied().fold(0.0, f64::max).max(1e-12) * 1.1;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(60)
        .build_cartesian_2d(-0.5..(p.len() as f64 - 0.5), 0.0..top)
        .map_err(draw_error)?;
    chart
        .configure_mesh()
        .x_desc("n")
        .y_desc("P_n")
        .draw()
        .map_err(draw_error)?;
    chart
        .draw_series(p.iter().enumerate().map(|(n, v)| {
            Rectangle::new(
                [(n as f64 - 0.4, 0.0), (n as f64 + 0.4, *v)],
                BLUE.mix(0.75).filled(),
            )
        }))
        .map_err(draw_error)?;
    root.present().map_err(draw_error)?;
    Ok(())
}

/// |rho_mn| as a heatmap; white is zero, dark blue the largest modulus.
pub fn density_heatmap(path: &Path, title: &str, rho: &DensityMatrix) -> Result<()> {
    let dim = rho.dim();
    let mut top = 0.0_f64;
    for m in 0..dim {
        for n in 0..dim {
            top = top.max(rho.get(m, n).norm());
        }
    }
    let top = top.max(1e-12);

    let root = SVGBackend::new(path, (640, 640)).into_drawing_area();
    root.fill(&WHITE).map_err(draw_error)?;
    let mut chart = ChartBuilder::on(&root)
        .caption(title, ("sans-serif", 22))
        .margin(12)
        .x_label_area_size(40)
        .y_label_area_size(50)
        .build_cartesian_2d(-0.5..(dim as f64 - 0.5), -0.5..(dim as f64 - 0.5))
        .map_err(draw_error)?;
    chart
        .configure_mesh()
        .x_desc("n")
        .y_desc("m")
        .disable_mesh()
        .draw()
        .map_err(draw_error)?;
    chart
        .draw_series(
            (0..dim)
                .flat_map(|m| (0..dim).map(move |n| (m, n)))
                .map(|(m, n)| {
                    let t = rho.get(m, n).norm() / top;
                    let color = RGBColor(
                        (255.0 - 215.0 * t) as u8,
                        (255.0 - 190.0 * t) as u8,
                        (255.0 - 100.0 * t) as u8,
                    );
                    Rectangle::new(
                        [
                            (n as f64 - 0.5, m as f64 - 0.5),
                            (n as f64 + 0.5, m as f64 + 0.5),
                        ],
                        color.filled(),
                    )
                }),
        )
        .map_err(draw_error)?;
    root.present().map_err(draw_error)?;
    Ok(())
}
