//! Rasterization of the Q-condition test over a grid of trace triples.
//!
//! Cells are evaluated in parallel and assembled in row-major order, so the
//! outputs never depend on the number of worker threads.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bqtree::{bq_test, BqVerdict};
use crate::charvar::TraceTriple;
use crate::tolerance::Tolerance;

#[derive(Debug, Error)]
pub enum ScanError {
    #[error("invalid scan specification: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// The family of triples swept by a scan. Columns follow the first range and
/// rows the second; both ends of every range are sampled.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum ScanMode {
    /// Triples `(t, t, t)` with `Re t` along columns and `Im t` along rows.
    Diagonal { re: (f64, f64), im: (f64, f64) },
    /// `x` moves along a segment with the column, `y` along another with the
    /// row, and `z` is the larger-modulus root of `z² − xyz + (x² + y² − μ)`.
    FixedXY {
        #[serde(with = "crate::json::complex")]
        mu: Complex64,
        #[serde(with = "crate::json::complex")]
        x_from: Complex64,
        #[serde(with = "crate::json::complex")]
        x_to: Complex64,
        #[serde(with = "crate::json::complex")]
        y_from: Complex64,
        #[serde(with = "crate::json::complex")]
        y_to: Complex64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub mode: ScanMode,
    pub width: usize,
    pub height: usize,
    pub depth_cap: usize,
    pub tol: Tolerance,
}

fn sample(from: Complex64, to: Complex64, k: usize, n: usize) -> Complex64 {
    if n <= 1 {
        from
    } else {
        from + (to - from) * (k as f64 / (n - 1) as f64)
    }
}

/// The root of `z² − xyz + (x² + y² − μ) = 0` of larger modulus; among roots of
/// equal modulus, the one with larger real part.
pub fn fixed_mu_root(x: Complex64, y: Complex64, mu: Complex64, tol: &Tolerance) -> Complex64 {
    let p = x * y;
    let disc = (p * p - 4.0 * (x * x + y * y - mu)).sqrt();
    let (a, b) = ((p + disc) / 2.0, (p - disc) / 2.0);
    let gap = a.norm() - b.norm();
    if gap.abs() <= tol.tie * a.norm().max(1.0) {
        if a.re >= b.re {
            a
        } else {
            b
        }
    } else if gap > 0.0 {
        a
    } else {
        b
    }
}

impl ScanSpec {
    pub fn validate(&self) -> Result<(), ScanError> {
        let bad = |m: &str| Err(ScanError::InvalidSpec(m.to_string()));
        if self.width == 0 || self.height == 0 {
            return bad("resolution must be positive");
        }
        let finite = match &self.mode {
            ScanMode::Diagonal { re, im } => [re.0, re.1, im.0, im.1].iter().all(|v| v.is_finite()),
            ScanMode::FixedXY {
                mu,
                x_from,
                x_to,
                y_from,
                y_to,
            } => [mu, x_from, x_to, y_from, y_to]
                .iter()
                .all(|z| z.is_finite()),
        };
        if !finite {
            return bad("grid bounds must be finite");
        }
        Ok(())
    }

    /// The triple sampled at column `col` and row `row`.
    pub fn point(&self, col: usize, row: usize) -> TraceTriple {
        match &self.mode {
            ScanMode::Diagonal { re, im } => {
                let r = sample(
                    Complex64::new(re.0, 0.0),
                    Complex64::new(re.1, 0.0),
                    col,
                    self.width,
                );
                let i = sample(
                    Complex64::new(im.0, 0.0),
                    Complex64::new(im.1, 0.0),
                    row,
                    self.height,
                );
                let t = Complex64::new(r.re, i.re);
                TraceTriple::new(t, t, t)
            }
            ScanMode::FixedXY {
                mu,
                x_from,
                x_to,
                y_from,
                y_to,
            } => {
                let x = sample(*x_from, *x_to, col, self.width);
                let y = sample(*y_from, *y_to, row, self.height);
                TraceTriple::new(x, y, fixed_mu_root(x, y, *mu, &self.tol))
            }
        }
    }
}

/// Coarse outcome of the Q-condition test, as stored per pixel.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictClass {
    Accept,
    RejectElliptic,
    RejectReducible,
    Indeterminate,
}

impl VerdictClass {
    pub fn pixel(self) -> u8 {
        match self {
            VerdictClass::Accept => 255,
            VerdictClass::RejectElliptic | VerdictClass::RejectReducible => 0,
            VerdictClass::Indeterminate => 128,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            VerdictClass::Accept => "Accept",
            VerdictClass::RejectElliptic => "RejectElliptic",
            VerdictClass::RejectReducible => "RejectReducible",
            VerdictClass::Indeterminate => "Indeterminate",
        }
    }
}

impl From<&BqVerdict> for VerdictClass {
    fn from(v: &BqVerdict) -> Self {
        match v {
            BqVerdict::Accept { .. } => VerdictClass::Accept,
            BqVerdict::RejectElliptic { .. } => VerdictClass::RejectElliptic,
            BqVerdict::RejectReducible => VerdictClass::RejectReducible,
            BqVerdict::Indeterminate { .. } => VerdictClass::Indeterminate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScanCell {
    pub col: usize,
    pub row: usize,
    pub traces: TraceTriple,
    pub verdict: VerdictClass,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanResult {
    pub spec: ScanSpec,
    /// Row-major: all of row 0, then row 1, and so on.
    pub cells: Vec<ScanCell>,
}

pub fn run_scan(spec: &ScanSpec) -> Result<ScanResult, ScanError> {
    spec.validate()?;
    let cells = (0..spec.width * spec.height)
        .into_par_iter()
        .map(|k| {
            let (row, col) = (k / spec.width, k % spec.width);
            let traces = spec.point(col, row);
            let verdict = VerdictClass::from(&bq_test(&traces, spec.depth_cap, &spec.tol));
            ScanCell {
                col,
                row,
                traces,
                verdict,
            }
        })
        .collect();
    Ok(ScanResult {
        spec: spec.clone(),
        cells,
    })
}

impl ScanResult {
    /// Binary greymap: 255 accept, 0 reject, 128 indeterminate.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> Result<(), ScanError> {
        write!(out, "P5\n{} {}\n255\n", self.spec.width, self.spec.height)?;
        let pixels: Vec<u8> = self.cells.iter().map(|c| c.verdict.pixel()).collect();
        out.write_all(&pixels)?;
        Ok(())
    }

    pub fn pgm_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_pgm(&mut buf)
            .expect("writing to memory cannot fail");
        buf
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), ScanError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "col", "row", "x_re", "x_im", "y_re", "y_im", "z_re", "z_im", "verdict",
        ])?;
        for c in &self.cells {
            let t = &c.traces;
            let mut record = vec![c.col.to_string(), c.row.to_string()];
            for z in [t.x, t.y, t.z] {
                record.push(z.re.to_string());
                record.push(z.im.to_string());
            }
            record.push(c.verdict.name().to_string());
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}
