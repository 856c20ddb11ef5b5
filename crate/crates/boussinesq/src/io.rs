//! CSV rendering and parsing.
//!
//! All writers first assemble the complete file in memory and only then
//! touch the filesystem, so a failure partway through rendering (or a
//! rejected configuration upstream) never leaves a truncated file behind.
//! Floats are printed with 17 significant digits, enough to round-trip
//! `f64` exactly.

use crate::asymptotics::AsymptoticResult;
use crate::pde::PdeState;
use crate::scattering::{SpectralData, SpectralSource};
use crate::C;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot access {path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
    #[error("spectral table rejected: {0}")]
    Spectral(#[from] crate::scattering::ScatteringError),
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render spectral samples:  `#` header with the source tag and grid
/// metadata, then one `theta,re_r1,im_r1,re_r2,im_r2` row per node.
pub fn render_spectral_csv(spec: &SpectralData) -> String {
    let tag = match &spec.source {
        SpectralSource::Computed => "computed".to_string(),
        SpectralSource::Synthetic(p) => format!(
            "synthetic amplitude={} sharpness={} phase0={} phase1={}",
            p.amplitude, p.sharpness, p.phase0, p.phase1
        ),
    };
    let n = spec.theta_grid.len();
    let mut out = String::new();
    out.push_str(&format!(
        "# source={tag} n={n} theta_min={} theta_max={}\n",
        fmt(spec.theta_grid[0]),
        fmt(spec.theta_grid[n - 1]),
    ));
    out.push_str("theta,re_r1,im_r1,re_r2,im_r2\n");
    for i in 0..n {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt(spec.theta_grid[i]),
            fmt(spec.r1[i].re),
            fmt(spec.r1[i].im),
            fmt(spec.r2[i].re),
            fmt(spec.r2[i].im),
        ));
    }
    out
}

pub fn write_spectral_csv(path: &str, spec: &SpectralData) -> Result<(), IoError> {
    write_text(path, &render_spectral_csv(spec))
}

/// Parse a spectral CSV back into evaluable data.  Comment lines (`#`) and
/// the column header are skipped; each data row must carry exactly five
/// finite fields.
pub fn read_spectral_csv(path: &str) -> Result<SpectralData, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.to_string(),
        source,
    })?;
    let mut theta = Vec::new();
    let mut r1 = Vec::new();
    let mut r2 = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("theta") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(IoError::Malformed {
                path: path.to_string(),
                line: idx + 1,
                message: format!("expected 5 comma-separated fields, got {}", fields.len()),
            });
        }
        let mut vals = [0.0_f64; 5];
        for (slot, field) in vals.iter_mut().zip(&fields) {
            *slot = field.trim().parse().map_err(|_| IoError::Malformed {
                path: path.to_string(),
                line: idx + 1,
                message: format!("cannot parse '{field}' as a float"),
            })?;
            if !slot.is_finite() {
                return Err(IoError::Malformed {
                    path: path.to_string(),
                    line: idx + 1,
                    message: format!("non-finite value '{field}'"),
                });
            }
        }
        theta.push(vals[0]);
        r1.push(C::new(vals[1], vals[2]));
        r2.push(C::new(vals[3], vals[4]));
    }
    Ok(SpectralData::from_samples(theta, r1, r2)?)
}

/// One output row of the asymptotics pipeline plus a free-text warning
/// column (empty when the row is clean).
pub struct ResultRow {
    pub result: AsymptoticResult,
    pub warning: String,
}

pub fn render_result_csv(rows: &[ResultRow]) -> String {
    let mut out = String::from(
        "x,tau,t,amplitude,alpha_wrapped,alpha_unwrapped,u_leading,x_n_term,log_term,warning\n",
    );
    for row in rows {
        let r = &row.result;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            fmt(r.x),
            fmt(r.tau),
            fmt(r.t),
            fmt(r.amplitude),
            fmt(r.alpha_wrapped),
            fmt(r.alpha_unwrapped),
            fmt(r.u_leading),
            fmt(r.error_scale.x_n_term),
            fmt(r.error_scale.log_term),
            row.warning,
        ));
    }
    out
}

/// Render PDE snapshots as `x,u,ut` blocks separated by `# t=...` comment
/// lines, one block per recorded time.
pub fn render_pde_csv(snapshots: &[PdeState]) -> String {
    let mut out = String::from("x,u,ut\n");
    for state in snapshots {
        out.push_str(&format!("# t={}\n", fmt(state.t)));
        for i in 0..state.n() {
            out.push_str(&format!(
                "{},{},{}\n",
                fmt(state.xs[i]),
                fmt(state.u[i]),
                fmt(state.ut[i]),
            ));
        }
    }
    out
}

pub fn write_text(path: &str, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::File {
        path: path.to_string(),
        source,
    })
}
