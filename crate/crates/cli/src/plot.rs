//! Plot data: two-or-more-column CSV files for an external plotting tool.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use num_rational::Ratio;

use nthsieve::characters::RayClassSetup;
use nthsieve::lfunctions::{density_exponent_g, moment_ratio, second_moment, Q64};
use nthsieve::sieve::large_sieve_ratio;

use crate::experiments::q_to_f64;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    /// σ against the zero density exponent g(σ)
    GSigma,
    /// M = N against the best large sieve ratio found
    SieveRatioVsMn,
    /// N against the second moment at t = 0
    MomentVsN,
}

#[derive(Clone, Debug)]
pub struct PlotOptions {
    pub n: u32,
    pub seed: u64,
    pub trials: usize,
    pub epsilon: f64,
    pub delta: f64,
}

impl Default for PlotOptions {
    fn default() -> PlotOptions {
        PlotOptions { n: 3, seed: 0, trials: 50, epsilon: 0.1, delta: 0.1 }
    }
}

/// from, from + step, … up to `to` (inclusive, with a small tolerance for rounding), each
/// rounded to 12 decimals so that the CSV shows 0.83 rather than 0.8300000000000001.
pub fn sigma_points(from: f64, to: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(CliError::Config(format!("step = {step} must be positive")));
    }
    if !from.is_finite() || !to.is_finite() || from > to {
        return Err(CliError::Config(format!("range [{from}, {to}] is empty")));
    }
    let count = ((to - from) / step + 1e-9).floor() as usize + 1;
    if count > 1_000_000 {
        return Err(CliError::Config(format!("{count} points requested")));
    }
    Ok((0..count).map(|k| ((from + k as f64 * step) * 1e12).round() / 1e12).collect())
}

/// (σ, g(σ)); σ is read as the nearest simple fraction, so 0.83 is 83/100 exactly.
pub fn g_rows(from: f64, to: f64, step: f64) -> Result<Vec<(f64, f64)>, CliError> {
    sigma_points(from, to, step)?
        .into_iter()
        .map(|s| {
            let q: Q64 = Ratio::approximate_float(s).ok_or_else(|| CliError::Config(format!("σ = {s}")))?;
            let g = density_exponent_g(q).map_err(|e| CliError::Config(e.to_string()))?;
            Ok((s, q_to_f64(g)))
        })
        .collect()
}

pub fn xy_csv<const K: usize>(header: [&str; K], rows: &[(f64, f64)]) -> Result<Vec<u8>, CliError> {
    table_csv(&header, &rows.iter().map(|r| vec![r.0, r.1]).collect::<Vec<_>>())
}

pub fn table_csv(header: &[&str], rows: &[Vec<f64>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Other(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r.iter().map(|x| x.to_string())).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Other(e.to_string()))
}

pub fn plot_data(curve: Curve, from: f64, to: f64, step: f64, opts: &PlotOptions) -> Result<Vec<u8>, CliError> {
    match curve {
        Curve::GSigma => xy_csv(["sigma", "g"], &g_rows(from, to, step)?),
        Curve::SieveRatioVsMn => {
            let xs = sigma_points(from, to, step)?;
            if xs[0] < 1.0 {
                return Err(CliError::Config("M = N must be at least 1".into()));
            }
            let setup = RayClassSetup::standard(opts.n)?;
            let mut rows = Vec::new();
            for x in xs {
                let s = large_sieve_ratio(&setup, x, x, opts.trials, opts.epsilon, opts.seed)?;
                rows.push(vec![x, x, x * x, s.ratio]);
            }
            table_csv(&["M", "N", "MN", "ratio"], &rows)
        }
        Curve::MomentVsN => {
            let xs = sigma_points(from, to, step)?;
            if xs[0] < 1.0 || xs.iter().any(|x| x.fract() != 0.0) {
                return Err(CliError::Config("N must run over positive integers".into()));
            }
            let setup = RayClassSetup::standard(opts.n)?;
            let d = setup.field().degree();
            let mut rows = Vec::new();
            for x in xs {
                let r = second_moment(&setup, x as u64, 0.0)?;
                rows.push(vec![x, r.moment, moment_ratio(&r, opts.delta, d)]);
            }
            table_csv(&["N", "moment", "ratio"], &rows)
        }
    }
}

/// Computes the curve and writes it to `out`; nothing is written if the computation fails.
pub fn emit_plot_data(curve: Curve, from: f64, to: f64, step: f64, opts: &PlotOptions, out: &Path) -> Result<PathBuf, CliError> {
    let bytes = plot_data(curve, from, to, step, opts)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Other(format!("{}: {e}", dir.display())))?;
    }
    std::fs::write(out, bytes).map_err(|e| CliError::Other(format!("{}: {e}", out.display())))?;
    Ok(out.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_sigma_rows() {
        let rows = g_rows(0.51, 1.0, 0.01).unwrap();
        assert_eq!(rows.len(), 50);
        assert_eq!(rows[0].0, 0.51);
        assert_eq!(rows[49], (1.0, 0.0));
        // σ = 5/6 lies between 0.83 and 0.84
        let below = rows.iter().find(|r| r.0 == 0.83).unwrap().1;
        let above = rows.iter().find(|r| r.0 == 0.84).unwrap().1;
        assert!(below > 2.0 / 3.0 && above < 2.0 / 3.0, "{below} {above}");
        assert!(rows.windows(2).all(|w| w[1].1 < w[0].1));
    }

    #[test]
    fn bad_ranges() {
        assert!(sigma_points(0.6, 0.9, 0.0).is_err());
        assert!(sigma_points(0.6, 0.9, -0.1).is_err());
        assert!(sigma_points(0.9, 0.6, 0.1).is_err());
        assert!(g_rows(0.5, 0.9, 0.1).is_err());
        assert!(g_rows(0.9, 1.1, 0.1).is_err());
        assert_eq!(sigma_points(0.6, 0.6, 0.1).unwrap(), vec![0.6]);
    }

    #[test]
    fn header_names_axes() {
        let bytes = plot_data(Curve::GSigma, 0.75, 0.8, 0.05, &PlotOptions::default()).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap().lines().next(), Some("sigma,g"));
    }
}
