use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::{DynError, MapSpec};

/// An orbit computed in hardware doubles.
#[derive(Clone, Debug, Serialize)]
pub struct OrbitRecord {
    pub points: Vec<[f64; 2]>,
    pub escaped_at: Option<usize>,
    pub escape_radius: f64,
    pub map: String,
    pub alpha: f64,
    pub precision_bits: u32,
}

/// Iterates until `n_max` steps or until an iterate has `|z| > escape_radius`; the escaping
/// point is recorded. The starting point itself is not tested.
pub fn orbit(map: &MapSpec, z0: Complex64, n_max: usize, escape_radius: f64) -> Result<OrbitRecord, DynError> {
    let mut points = Vec::with_capacity(n_max.min(1 << 20) + 1);
    let mut z = z0;
    points.push([z.re, z.im]);
    let mut escaped_at = None;
    for k in 1..=n_max {
        z = map.eval_f64(z)?;
        points.push([z.re, z.im]);
        if !(z.norm() <= escape_radius) {
            escaped_at = Some(k);
            break;
        }
    }
    Ok(OrbitRecord {
        points,
        escaped_at,
        escape_radius,
        map: map.name().to_string(),
        alpha: map.alpha_f64(),
        precision_bits: 53,
    })
}

impl OrbitRecord {
    /// CSV with columns `iter,re,im,abs,escaped_at` (the last column repeats the escape index or is empty).
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "iter,re,im,abs,escaped_at")?;
        let esc = self.escaped_at.map(|e| e.to_string()).unwrap_or_default();
        for (i, p) in self.points.iter().enumerate() {
            let a = p[0].hypot(p[1]);
            writeln!(out, "{i},{:e},{:e},{:e},{esc}", p[0], p[1], a)?;
        }
        Ok(())
    }
}
