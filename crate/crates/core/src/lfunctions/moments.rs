use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::lvalue::l_central;
use crate::algebra::{canonical_decompose, ideals_up_to_avoiding, DecompositionMode, IdealK};
use crate::characters::RayClassSetup;
use crate::numerics::ComplexVal;
use crate::Result;

/// Floor below which a central value is not counted as nonzero, whatever its error.
pub const NONZERO_FLOOR: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct LRecord {
    pub ideal: IdealK,
    pub conductor: IdealK,
    pub value: ComplexVal,
    /// 𝒩𝔞₂ for 𝔞 = 𝔞₁𝔞₂ⁿ with 𝔞₁ n-th power free.
    pub root_norm: u64,
    pub nonzero: bool,
}

#[derive(Clone, Debug)]
pub struct LReport {
    pub cutoff: u64,
    pub t: f64,
    pub n: u32,
    pub records: Vec<LRecord>,
    pub moment: f64,
    /// Σ |L|²·(𝒩𝔞₂)^{n−2}.
    pub weighted_moment: f64,
    pub nonzero_count: usize,
}

#[derive(Serialize)]
struct CsvRow {
    norm_a: u64,
    ideal_gen_a: String,
    ideal_gen_b: String,
    re_l: f64,
    im_l: f64,
    err: f64,
    nonzero: bool,
}

impl LReport {
    pub fn nonzero_fraction(&self) -> f64 {
        if self.records.is_empty() {
            0.0
        } else {
            self.nonzero_count as f64 / self.records.len() as f64
        }
    }

    /// Recomputes the aggregates from the records, summing in record order.
    pub fn recompute(&self) -> (f64, f64, usize) {
        let mut m = 0.0;
        let mut w = 0.0;
        let mut c = 0;
        for r in &self.records {
            let a = r.value.abs() * r.value.abs();
            m += a;
            w += a * (r.root_norm as f64).powi(self.n as i32 - 2);
            c += r.nonzero as usize;
        }
        (m, w, c)
    }

    /// One row per record; `ideal_gen_b` holds the conductor's generator.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        w.write_record(["norm_a", "ideal_gen_a", "ideal_gen_b", "re_L", "im_L", "err", "nonzero"])
            .map_err(csv_err)?;
        for r in &self.records {
            let g = r.ideal.gen();
            let f = r.conductor.gen();
            w.serialize(CsvRow {
                norm_a: r.ideal.norm(),
                ideal_gen_a: format!("{}:{}", g.a, g.b),
                ideal_gen_b: format!("{}:{}", f.a, f.b),
                re_l: r.value.re(),
                im_l: r.value.im(),
                err: r.value.err,
                nonzero: r.nonzero,
            })
            .map_err(csv_err)?;
        }
        w.flush().map_err(|e| crate::Error::InvalidArgument(e.to_string()))?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> crate::Error {
    crate::Error::InvalidArgument(format!("csv: {e}"))
}

pub fn is_nonzero(v: &ComplexVal) -> bool {
    v.abs() > (10.0 * v.err).max(NONZERO_FLOOR)
}

/// L(1/2+it, χ_𝔞) for every 𝔞 ∈ 𝓘(S) with 𝒩𝔞 ≤ N, with the moment aggregates.
pub fn second_moment(setup: &RayClassSetup, cutoff: u64, t: f64) -> Result<LReport> {
    let n = setup.n();
    let ideals = if cutoff < 1 { Vec::new() } else { ideals_up_to_avoiding(setup.field(), cutoff, setup.s()) };
    // characters are built (and cached) serially so the parallel part only reads
    let chars = ideals.iter().map(|a| setup.hecke_char(a)).collect::<Result<Vec<_>>>()?;
    let values: Vec<Result<ComplexVal>> = chars.par_iter().map(|ch| l_central(ch, t)).collect();
    let mut records = Vec::with_capacity(ideals.len());
    for ((a, ch), v) in ideals.into_iter().zip(chars).zip(values) {
        let value = v?;
        let root_norm = canonical_decompose(&a, n, DecompositionMode::NthPowerFree).nth_power_root.norm();
        records.push(LRecord { conductor: ch.conductor().clone(), nonzero: is_nonzero(&value), ideal: a, value, root_norm });
    }
    let mut report = LReport { cutoff, t, n, records, moment: 0.0, weighted_moment: 0.0, nonzero_count: 0 };
    let (m, w, c) = report.recompute();
    report.moment = m;
    report.weighted_moment = w;
    report.nonzero_count = c;
    Ok(report)
}

/// Number and fraction of 𝔞 ∈ 𝓘(S), 𝒩𝔞 ≤ N, with L(1/2, χ_𝔞) detectably nonzero.
pub fn nonvanishing_count(setup: &RayClassSetup, cutoff: u64) -> Result<(usize, f64)> {
    let r = second_moment(setup, cutoff, 0.0)?;
    Ok((r.nonzero_count, r.nonzero_fraction()))
}

/// moment / (N^{1+δ}(1+|t|)^{d(1+δ)/2}).
pub fn moment_ratio(report: &LReport, delta: f64, degree: u32) -> f64 {
    let n = report.cutoff as f64;
    report.moment / (n.powf(1.0 + delta) * (1.0 + report.t.abs()).powf(degree as f64 * (1.0 + delta) / 2.0))
}
