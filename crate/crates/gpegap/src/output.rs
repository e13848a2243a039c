//! File formats: gap CSV, JSON reports, binary field export and plot series.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use anyhow::Context;
use gpegap_core::{Grid, ProblemSpec, WaveField};
use serde::Serialize;

use crate::sweep::SweepPoint;

pub const CSV_HEADER: &str = "beta,E_g,mu_g,E_1,mu_1,delta_E,delta_mu,residual_g,residual_1,iters_g,iters_1,status";

/// 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> anyhow::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let f = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

pub fn write_gap_csv(path: &Path, points: &[SweepPoint]) -> anyhow::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "{CSV_HEADER}")?;
    for p in points {
        let (eg, mg, rg, ig) = p.ground.as_ref().map_or((f64::NAN, f64::NAN, f64::NAN, 0), |r| {
            (r.energy.energy, r.energy.chemical_potential, r.residual, r.iterations)
        });
        let (e1, m1, r1, i1) = p.excited.as_ref().map_or((f64::NAN, f64::NAN, f64::NAN, 0), |r| {
            (r.energy.energy, r.energy.chemical_potential, r.residual, r.iterations)
        });
        let cols = [p.beta, eg, mg, e1, m1, e1 - eg, m1 - mg, rg, r1].map(fmt_f64);
        writeln!(w, "{},{ig},{i1},{}", cols.join(","), p.status.name())?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline; struct fields keep declaration order.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Row-major little-endian `f64` values, interleaved `re, im` for complex
/// fields, plus a text sidecar `<stem>.txt` describing the layout.
pub fn write_field(bin: &Path, field: &WaveField, grid: &Grid, spec: &ProblemSpec) -> anyhow::Result<()> {
    let mut w = create(bin)?;
    for i in 0..field.len() {
        w.write_all(&field.re[i].to_le_bytes())?;
        if let Some(im) = &field.im {
            w.write_all(&im[i].to_le_bytes())?;
        }
    }
    w.flush()?;
    let join = |v: &[String]| v.join(" ");
    let mut h = create(&bin.with_extension("txt"))?;
    writeln!(h, "format = f64-le row-major")?;
    writeln!(h, "dims = {}", grid.dim())?;
    writeln!(h, "shape = {}", join(&grid.shape().iter().map(usize::to_string).collect::<Vec<_>>()))?;
    writeln!(h, "lengths = {}", join(&spec.domain.lengths().iter().map(f64::to_string).collect::<Vec<_>>()))?;
    writeln!(h, "bc = {}", spec.bc.name())?;
    writeln!(h, "beta = {}", spec.beta)?;
    writeln!(h, "complex = {}", field.im.is_some())?;
    writeln!(h, "nodes-stored = {}", if spec.bc.is_dirichlet_like() { "interior" } else { "all" })?;
    h.flush()?;
    Ok(())
}

/// One named x/y series of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub description: String,
    /// `(β, δ_E, δ_μ)`.
    pub points: Vec<(f64, f64, f64)>,
}

/// Writes `<name>.dat` per series and a `manifest.txt` listing them.
pub fn write_series(dir: &Path, title: &str, series: &[Series]) -> anyhow::Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut m = create(&dir.join("manifest.txt"))?;
    writeln!(m, "# {title}")?;
    writeln!(m, "# file columns: beta delta_E delta_mu")?;
    for s in series {
        writeln!(m, "{}.dat\t{}\t{} points", s.name, s.description, s.points.len())?;
        let mut w = create(&dir.join(format!("{}.dat", s.name)))?;
        writeln!(w, "# {}", s.description)?;
        writeln!(w, "# beta delta_E delta_mu")?;
        for (b, e, mu) in &s.points {
            writeln!(w, "{} {} {}", fmt_f64(*b), fmt_f64(*e), fmt_f64(*mu))?;
        }
        w.flush()?;
    }
    m.flush()?;
    Ok(())
}
