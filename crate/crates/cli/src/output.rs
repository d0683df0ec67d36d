//! CSV writers. Floats use the shortest round-trip representation, so
//! identical values always produce identical bytes.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use gamow_core::NormScanF64;

pub struct FrontRow {
    pub r: Vec<f64>,
    pub tau: f64,
    pub residual: f64,
}

pub struct PoleRow {
    pub branch: usize,
    pub k_re: f64,
    pub k_im: f64,
    pub e0: f64,
    pub gamma: f64,
    pub residual: f64,
}

/// Shortest round-trip text; exponent form outside `[1e-4, 1e16)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn create(path: &Path) -> std::io::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

pub fn write_front(path: &Path, n: usize, rows: &[FrontRow]) -> std::io::Result<()> {
    let mut w = create(path)?;
    let coords: Vec<String> = (1..=n).map(|j| format!("r_{j}")).collect();
    writeln!(w, "sample_id,{},tau,residual", coords.join(","))?;
    for (id, row) in rows.iter().enumerate() {
        write!(w, "{id}")?;
        for x in &row.r {
            write!(w, ",{}", num(*x))?;
        }
        writeln!(w, ",{},{}", num(row.tau), num(row.residual))?;
    }
    w.flush()
}

pub fn write_norm(path: &Path, scan: &NormScanF64) -> std::io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "tau_R,vol_re,vol_im,surf_re,surf_im,norm_re,norm_im")?;
    for j in 0..scan.tau_grid.len() {
        let (v, s, n) = (scan.volume_terms[j], scan.surface_terms[j], scan.norms[j]);
        let cols = [scan.tau_grid[j], v.re, v.im, s.re, s.im, n.re, n.im].map(num);
        writeln!(w, "{}", cols.join(","))?;
    }
    w.flush()
}

pub fn write_poles(path: &Path, rows: &[PoleRow]) -> std::io::Result<()> {
    let mut w = create(path)?;
    writeln!(w, "branch,k_re,k_im,E0,Gamma,residual")?;
    for p in rows {
        let cols = [p.k_re, p.k_im, p.e0, p.gamma, p.residual].map(num);
        writeln!(w, "{},{}", p.branch, cols.join(","))?;
    }
    w.flush()
}
