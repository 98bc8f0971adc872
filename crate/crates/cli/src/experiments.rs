//! The named experiments. Each one computes everything in memory and returns its CSV files and
//! assertions; nothing touches the disk here.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rayon::prelude::*;

use nthsieve::algebra::{ideals_up_to_avoiding, nth_power_free_part, primes_above, Field, IdealK, Prime};
use nthsieve::characters::{HeckeChar, RayClassSetup, UnityRoot};
use nthsieve::lfunctions::{
    density_exponent_g, g_high, g_low, gauss_epsilon, moment_ratio, second_moment, smoothed_sum_check, LReport, Q64,
};
use nthsieve::mds::{write_grid_csv, z_grid, ClassChar, Series};
use nthsieve::numerics::Window;
use nthsieve::sieve::{aitken_limit, b_norm_estimate, exponent_recursion, four_thirds, recursion_step, to_f64, write_stats_csv};
use nthsieve::sieve::{EstimateConfig, SieveStats};

use crate::config::{Experiment, RunConfig};
use crate::{Assertion, CliError};

/// Residual tolerance of the smoothed summation identity.
pub const FE_TOLERANCE: f64 = 1e-6;
/// Tolerance for |ε(χ)| = 1.
pub const EPSILON_TOLERANCE: f64 = 1e-10;
pub const RECURSION_TOLERANCE: f64 = 1e-10;
pub const SLOPE_RANGE: (f64, f64) = (-0.1, 0.1);
/// Largest ideal norm searched when a sample needs more ideals than the cutoff provides.
const SEARCH_LIMIT: u64 = 1 << 16;

#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, Vec<u8>)>,
    pub assertions: Vec<Assertion>,
}

impl Outcome {
    fn file(&mut self, name: impl Into<String>, bytes: Vec<u8>) {
        self.files.push((name.into(), bytes));
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.assertions.push(Assertion { name: name.into(), passed, detail: detail.into() });
    }
}

/// S = the primes above n together with the primes above the listed rational primes.
pub fn build_setup(cfg: &RunConfig) -> Result<RayClassSetup, CliError> {
    let field = Field::from_n(cfg.field.n)?;
    let mut s: Vec<Prime> = primes_above(field, field.ramified_prime());
    for &p in &cfg.field.s {
        s.extend(primes_above(field, p));
    }
    Ok(RayClassSetup::build(cfg.field.n, field, &s)?)
}

pub fn run_experiment(cfg: &RunConfig, setup: &RayClassSetup) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    match cfg.run.experiment {
        Experiment::Symbols => symbols(setup, p.cutoff),
        Experiment::Conductors => conductors(setup, p.cutoff, p.count, p.pairs),
        Experiment::Reciprocity => reciprocity(setup, p.cutoff),
        Experiment::FeResidual => fe_residual(setup, p.cutoff, &p.m_values),
        Experiment::SecondMoment => moments(setup, &p.norms, &p.t, p.delta),
        Experiment::Nonvanishing => nonvanishing(setup, &p.norms, p.min_fraction),
        Experiment::SieveGrid => sieve_grid(setup, &p.sizes, p.j, p.trials, p.epsilon, cfg.run.seed),
        Experiment::Recursion => recursion(&cfg.alpha0()?, p.steps),
        Experiment::MdsGrid => mds_grid(setup, p.series, &p.s_re, &p.w_re, &p.im, (p.cutoff_a, p.cutoff_b)),
        Experiment::GSigma => g_sigma(p.sigma_from, p.sigma_to, p.sigma_step),
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>, CliError> {
    w.into_inner().map_err(|e| CliError::Other(e.to_string()))
}

fn record<I, T>(w: &mut csv::Writer<Vec<u8>>, fields: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = T>,
    T: AsRef<[u8]>,
{
    w.write_record(fields).map_err(|e| CliError::Other(e.to_string()))
}

fn gen_str(a: &IdealK) -> String {
    let g = a.gen();
    format!("{}:{}", g.a, g.b)
}

fn unity_str(v: UnityRoot) -> String {
    v.exponent().map_or_else(|| "zero".to_string(), |k| k.to_string())
}

pub fn squarefree_ideals(setup: &RayClassSetup, bound: u64) -> Vec<IdealK> {
    ideals_up_to_avoiding(setup.field(), bound, setup.s()).into_iter().filter(|a| a.is_squarefree()).collect()
}

/// χ_𝔞ⁿ trivial, χ_{𝔞𝔟} = χ_𝔞χ_𝔟 and χ_{𝔞𝔟ⁿ} = χ_𝔞 on all squarefree 𝔞, 𝔟 up to the cutoff,
/// evaluated on every test ideal coprime to 𝔞𝔟.
pub fn symbols(setup: &RayClassSetup, cutoff: u64) -> Result<Outcome, CliError> {
    let n = setup.n();
    let sq = squarefree_ideals(setup, cutoff);
    let all = ideals_up_to_avoiding(setup.field(), cutoff, setup.s());
    let mut out = Outcome::default();

    let mut w = csv_writer();
    record(&mut w, ["norm_a", "gen_a", "norm_b", "gen_b", "chi"])?;
    for a in &sq {
        for b in &all {
            let v = setup.chi_eval(a, b)?;
            record(&mut w, [a.norm().to_string(), gen_str(a), b.norm().to_string(), gen_str(b), unity_str(v)])?;
        }
    }
    out.file("symbols.csv", finish(w)?);

    let mut nontrivial_power = 0;
    for a in &sq {
        let ch = setup.hecke_char(a)?;
        let an = a.pow(n);
        let bad_value = all.iter().filter(|b| b.is_coprime(a)).any(|b| !setup.chi_eval(&an, b).map(|v| v.is_one()).unwrap_or(false));
        if !ch.pow(n as i64).is_trivial() || bad_value {
            nontrivial_power += 1;
        }
    }
    out.check("chi_a^n trivial", nontrivial_power == 0, format!("{} characters, {nontrivial_power} failures", sq.len()));

    // (failures of χ_{𝔞𝔟} = χ_𝔞χ_𝔟, failures of χ_{𝔞𝔟ⁿ} = χ_𝔞, evaluations)
    let counts: Vec<(usize, usize, usize)> = sq
        .par_iter()
        .map(|a| {
            let mut c = (0, 0, 0);
            for b in &sq {
                let ab = a.mul(b);
                let abn = a.mul(&b.pow(n));
                for t in all.iter().filter(|t| t.is_coprime(&ab)) {
                    let va = setup.chi_eval(a, t).expect("coprime");
                    let vb = setup.chi_eval(b, t).expect("coprime");
                    c.0 += (setup.chi_eval(&ab, t).expect("coprime") != va * vb) as usize;
                    c.1 += (setup.chi_eval(&abn, t).expect("coprime") != va) as usize;
                    c.2 += 1;
                }
            }
            c
        })
        .collect();
    let (mul_fail, pow_fail, evals) = counts.iter().fold((0, 0, 0), |s, c| (s.0 + c.0, s.1 + c.1, s.2 + c.2));
    let pairs = sq.len() * sq.len();
    out.check("chi_ab = chi_a chi_b", mul_fail == 0, format!("{pairs} pairs, {evals} evaluations, {mul_fail} failures"));
    out.check("chi_(a b^n) = chi_a", pow_fail == 0, format!("{pairs} pairs, {evals} evaluations, {pow_fail} failures"));
    Ok(out)
}

/// χ_𝔞(𝔟)χ_𝔟(𝔞)⁻¹ over all coprime squarefree pairs, grouped by the R_𝔠 classes of 𝔞 and 𝔟.
pub fn reciprocity(setup: &RayClassSetup, cutoff: u64) -> Result<Outcome, CliError> {
    let sq = squarefree_ideals(setup, cutoff);
    let classes = sq.iter().map(|a| setup.class_of(a)).collect::<nthsieve::Result<Vec<_>>>()?;
    let rows: Vec<Vec<(u32, u32, UnityRoot)>> = (0..sq.len())
        .into_par_iter()
        .map(|i| {
            (0..sq.len())
                .filter(|&j| sq[i].is_coprime(&sq[j]))
                .map(|j| (classes[i], classes[j], setup.reciprocity_factor(&sq[i], &sq[j]).expect("coprime")))
                .collect()
        })
        .collect();
    // class pair → (first value, pairs, disagreements)
    let mut cells: BTreeMap<(u32, u32), (UnityRoot, usize, usize)> = BTreeMap::new();
    for (ka, kb, v) in rows.into_iter().flatten() {
        let cell = cells.entry((ka, kb)).or_insert((v, 0, 0));
        cell.1 += 1;
        cell.2 += (cell.0 != v) as usize;
    }
    let mut out = Outcome::default();
    let mut w = csv_writer();
    record(&mut w, ["class_a", "class_b", "factor", "pairs", "disagreements"])?;
    for ((ka, kb), (v, count, bad)) in &cells {
        record(&mut w, [ka.to_string(), kb.to_string(), unity_str(*v), count.to_string(), bad.to_string()])?;
    }
    out.file("reciprocity.csv", finish(w)?);
    let total: usize = cells.values().map(|c| c.1).sum();
    let bad: usize = cells.values().map(|c| c.2).sum();
    out.check(
        "reciprocity factor constant on class pairs",
        bad == 0,
        format!("{total} pairs in {} class pairs, {bad} disagreements", cells.len()),
    );
    Ok(out)
}

/// The first `count` nontrivial squarefree ideals, and `pairs` coprime same-class pairs among
/// squarefree ideals; the search bound grows from the cutoff until both are found.
pub fn conductor_samples(setup: &RayClassSetup, cutoff: u64, count: usize, pairs: usize) -> Result<(Vec<IdealK>, Vec<(IdealK, IdealK)>), CliError> {
    let mut bound = cutoff.max(2);
    loop {
        let sq: Vec<IdealK> = squarefree_ideals(setup, bound).into_iter().filter(|a| !a.is_one()).collect();
        let mut by_class: BTreeMap<u32, Vec<&IdealK>> = BTreeMap::new();
        for a in &sq {
            by_class.entry(setup.class_of(a)?).or_default().push(a);
        }
        let mut found = Vec::new();
        'outer: for group in by_class.values() {
            for (i, b1) in group.iter().enumerate() {
                for b2 in &group[i + 1..] {
                    if b1.is_coprime(b2) {
                        found.push(((*b1).clone(), (*b2).clone()));
                        if found.len() == pairs {
                            break 'outer;
                        }
                    }
                }
            }
        }
        if sq.len() >= count && found.len() >= pairs {
            return Ok((sq.into_iter().take(count).collect(), found));
        }
        if bound >= SEARCH_LIMIT {
            return Err(CliError::Config(format!("fewer than {count} characters or {pairs} pairs below norm {bound}")));
        }
        bound *= 2;
    }
}

/// 𝔞₀ | cond(χ_𝔞) | 𝔠𝔞₀, and cond(χ_{𝔟₁}ʲχ̄_{𝔟₂}ʲ) = 𝔟₁𝔟₂ for coprime 𝔟₁, 𝔟₂ in one class.
pub fn conductors(setup: &RayClassSetup, cutoff: u64, count: usize, pairs: usize) -> Result<Outcome, CliError> {
    let n = setup.n();
    let (sample, pair_sample) = conductor_samples(setup, cutoff, count, pairs)?;
    let mut out = Outcome::default();

    let mut w = csv_writer();
    record(&mut w, ["norm_a", "gen_a", "norm_cond", "gen_cond", "bracketed"])?;
    let mut bad = 0;
    for a in &sample {
        let ch = setup.hecke_char(a)?;
        let f = ch.conductor();
        let a0 = nth_power_free_part(a, n).radical();
        let ok = a0.divides(f) && f.divides(&setup.c().mul(&a0));
        bad += (!ok) as usize;
        record(&mut w, [a.norm().to_string(), gen_str(a), f.norm().to_string(), gen_str(f), ok.to_string()])?;
    }
    out.file("conductors.csv", finish(w)?);
    out.check("a0 | cond | c a0", bad == 0, format!("{} characters, {bad} failures", sample.len()));

    let mut w = csv_writer();
    record(&mut w, ["gen_b1", "gen_b2", "j", "norm_cond", "expected_norm", "equal"])?;
    let mut bad = 0;
    for (b1, b2) in &pair_sample {
        let (c1, c2) = (setup.hecke_char(b1)?, setup.hecke_char(b2)?);
        for j in 1..n as i64 {
            let f = c1.pow(j).mul(&c2.conj().pow(j)).conductor().clone();
            let prod = b1.mul(b2);
            let ok = f == prod;
            bad += (!ok) as usize;
            record(&mut w, [gen_str(b1), gen_str(b2), j.to_string(), f.norm().to_string(), prod.norm().to_string(), ok.to_string()])?;
        }
    }
    out.file("pair_conductors.csv", finish(w)?);
    out.check("cond of twisted pair = b1 b2", bad == 0, format!("{} pairs, {bad} failures", pair_sample.len()));
    Ok(out)
}

/// Every distinct primitive character χ_𝔞ʲ with 𝒩cond ≤ fmax, trivial character first.
pub fn primitive_characters(setup: &RayClassSetup, fmax: u64) -> Result<Vec<Arc<HeckeChar>>, CliError> {
    let n = setup.n() as i64;
    let mut seen: HashSet<(IdealK, Vec<i8>)> = HashSet::new();
    let mut out = Vec::new();
    for a in ideals_up_to_avoiding(setup.field(), fmax, setup.s()) {
        if !a.is_nth_power_free(n as u32) {
            continue;
        }
        let ch = setup.hecke_char(&a)?;
        if ch.conductor().norm() > fmax {
            continue;
        }
        for j in 1..n {
            let c = if j == 1 { ch.clone() } else { Arc::new(ch.pow(j)) };
            if seen.insert((c.conductor().clone(), c.residue_char().table().to_vec())) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// |ε(χ)| = 1 and the smoothed summation identity (exponential window) for every primitive
/// character of conductor norm ≤ cutoff.
pub fn fe_residual(setup: &RayClassSetup, cutoff: u64, m_values: &[f64]) -> Result<Outcome, CliError> {
    let chars = primitive_characters(setup, cutoff)?;
    let rows: Vec<(f64, Vec<(f64, f64, f64)>)> = chars
        .par_iter()
        .map(|ch| -> Result<_, CliError> {
            let eps = gauss_epsilon(ch)?;
            let mut per_m = Vec::new();
            for &m in m_values {
                let r = smoothed_sum_check(ch, Window::Exponential, m)?;
                per_m.push((m, r.residual, r.quad_err));
            }
            Ok((eps.abs(), per_m))
        })
        .collect::<Result<_, _>>()?;
    let mut out = Outcome::default();
    let mut w = csv_writer();
    record(&mut w, ["norm_cond", "gen_cond", "abs_epsilon", "M", "residual", "quad_err"])?;
    let (mut worst_eps, mut worst_res) = (0.0f64, 0.0f64);
    for (ch, (eps, per_m)) in chars.iter().zip(&rows) {
        worst_eps = worst_eps.max((eps - 1.0).abs());
        for &(m, res, err) in per_m {
            worst_res = worst_res.max(res);
            record(&mut w, [ch.conductor().norm().to_string(), gen_str(ch.conductor()), eps.to_string(), m.to_string(), res.to_string(), err.to_string()])?;
        }
    }
    out.file("fe_residual.csv", finish(w)?);
    out.check("|epsilon| = 1", worst_eps <= EPSILON_TOLERANCE, format!("{} characters, max ||ε|−1| = {worst_eps:e}", chars.len()));
    out.check("smoothed identity residual", worst_res <= FE_TOLERANCE, format!("max residual {worst_res:e} (tolerance {FE_TOLERANCE:e})"));
    Ok(out)
}

fn l_values_file(report: &LReport) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    report.write_csv(&mut buf)?;
    Ok(buf)
}

/// Second moment of L(1/2+it, χ_𝔞) over 𝒩𝔞 ≤ N, normalized by N^{1+δ}(1+|t|)^{d(1+δ)/2}.
pub fn moments(setup: &RayClassSetup, norms: &[u64], ts: &[f64], delta: f64) -> Result<Outcome, CliError> {
    let d = setup.field().degree();
    let mut out = Outcome::default();
    let mut w = csv_writer();
    record(&mut w, ["N", "t", "count", "moment", "weighted_moment", "ratio"])?;
    let mut consistent = true;
    let mut all_finite = true;
    for &n in norms {
        for &t in ts {
            let r = second_moment(setup, n, t)?;
            let ratio = moment_ratio(&r, delta, d);
            let (m, wm, c) = r.recompute();
            consistent &= m == r.moment && wm == r.weighted_moment && c == r.nonzero_count;
            all_finite &= ratio.is_finite();
            record(&mut w, [n.to_string(), t.to_string(), r.records.len().to_string(), r.moment.to_string(), r.weighted_moment.to_string(), ratio.to_string()])?;
            out.file(format!("l_values_N{n}_t{t}.csv"), l_values_file(&r)?);
        }
    }
    out.files.insert(0, ("moments.csv".into(), finish(w)?));
    out.check("aggregates match records", consistent, format!("{} runs", norms.len() * ts.len()));
    out.check("moment ratios finite", all_finite, "");
    Ok(out)
}

/// Fraction of 𝔞 with L(1/2, χ_𝔞) detectably nonzero.
pub fn nonvanishing(setup: &RayClassSetup, norms: &[u64], min_fraction: f64) -> Result<Outcome, CliError> {
    let mut out = Outcome::default();
    let mut w = csv_writer();
    record(&mut w, ["N", "nonzero", "total", "fraction"])?;
    for &n in norms {
        let r = second_moment(setup, n, 0.0)?;
        let f = r.nonzero_fraction();
        record(&mut w, [n.to_string(), r.nonzero_count.to_string(), r.records.len().to_string(), f.to_string()])?;
        out.check(format!("nonvanishing fraction at N={n}"), f >= min_fraction, format!("{}/{} = {f:.4} (threshold {min_fraction})", r.nonzero_count, r.records.len()));
    }
    out.files.insert(0, ("nonvanishing.csv".into(), finish(w)?));
    Ok(out)
}

/// Least-squares slope of ln(ratio) against ln(MN).
pub fn log_slope(stats: &[SieveStats]) -> f64 {
    let pts: Vec<(f64, f64)> = stats.iter().map(|s| ((s.m * s.n).ln(), s.ratio.ln())).collect();
    let k = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / k, pts.iter().map(|p| p.1).sum::<f64>() / k);
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

pub fn sieve_stats(setup: &RayClassSetup, sizes: &[f64], j: i64, trials: usize, eps: f64, seed: u64) -> Result<Vec<SieveStats>, CliError> {
    let cfg = EstimateConfig { trials, epsilon: eps, seed, ..EstimateConfig::default() };
    let mut stats = Vec::new();
    for &m in sizes {
        for &n in sizes {
            stats.push(b_norm_estimate(setup, 1, m, n, j, &cfg)?);
        }
    }
    Ok(stats)
}

pub fn sieve_grid(setup: &RayClassSetup, sizes: &[f64], j: i64, trials: usize, eps: f64, seed: u64) -> Result<Outcome, CliError> {
    let stats = sieve_stats(setup, sizes, j, trials, eps, seed)?;
    let mut out = Outcome::default();
    let mut buf = Vec::new();
    write_stats_csv(&stats, &mut buf)?;
    out.file("sieve_grid.csv", buf);
    let max = stats.iter().map(|s| s.ratio).fold(0.0, f64::max);
    out.check("ratios finite", stats.iter().all(|s| s.ratio.is_finite()), format!("max ratio {max:.6}"));
    if sizes.len() > 1 {
        let slope = log_slope(&stats);
        out.check("log-ratio slope in [-0.1, 0.1]", (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope), format!("slope {slope:.6}"));
    }
    Ok(out)
}

pub fn rational_str(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn recursion(alpha0: &BigRational, steps: usize) -> Result<Outcome, CliError> {
    let seq = exponent_recursion(alpha0, steps)?;
    let limit = four_thirds();
    let mut out = Outcome::default();
    let mut w = csv_writer();
    record(&mut w, ["k", "alpha", "alpha_f64", "distance"])?;
    for (k, a) in seq.iter().enumerate() {
        let dist = (a - &limit).abs();
        record(&mut w, [k.to_string(), rational_str(a), to_f64(a).to_string(), dist.to_f64().unwrap_or(f64::INFINITY).to_string()])?;
    }
    out.file("recursion.csv", finish(w)?);
    let first = recursion_step(alpha0);
    let two = BigRational::one() + BigRational::one();
    if *alpha0 == two {
        out.check("alpha_1 = 8/5", first == BigRational::new(8.into(), 5.into()), rational_str(&first));
    }
    let last = seq.last().unwrap();
    let dist = to_f64(&(last - &limit).abs());
    let aitken = aitken_limit(&seq).map(|a| to_f64(&(a - &limit).abs())).unwrap_or(f64::NAN);
    out.check(
        format!("alpha_{steps} within 1e-10 of 4/3"),
        dist <= RECURSION_TOLERANCE,
        format!("|alpha_{steps} - 4/3| = {dist:e}; Aitken extrapolate off by {aitken:e}"),
    );
    Ok(out)
}

pub fn mds_grid(setup: &RayClassSetup, series: u8, s_re: &[f64], w_re: &[f64], im: &[f64], cutoffs: (u64, u64)) -> Result<Outcome, CliError> {
    let which = Series::from_index(series)?;
    let mut points = Vec::new();
    for &a in s_re {
        for &b in w_re {
            for &t in im {
                points.push((Complex64::new(a, t), Complex64::new(b, t)));
            }
        }
    }
    let triv = ClassChar::trivial(setup);
    let rows = z_grid(which, &points, &triv, &triv, cutoffs, setup)?;
    let mut out = Outcome::default();
    let mut buf = Vec::new();
    write_grid_csv(&rows, &mut buf)?;
    out.file("mds_grid.csv", buf);
    let finite = rows.iter().all(|r| r.re_z.is_finite() && r.im_z.is_finite());
    let bounded = rows.iter().filter(|r| r.err.is_finite()).count();
    out.check("values finite", finite, format!("{} points, {bounded} with a finite error bound", rows.len()));
    Ok(out)
}

pub fn q_to_f64(q: Q64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

/// The exact values at σ → 1/2⁺, σ = 5/6 on both branches and σ = 1.
pub fn g_exact_checks() -> Vec<(String, bool)> {
    let q = Q64::new;
    vec![
        ("g(1/2+) = 1".into(), g_low(q(1, 2)) == q(1, 1)),
        ("g_low(5/6) = 2/3".into(), g_low(q(5, 6)) == q(2, 3)),
        ("g_high(5/6) = 2/3".into(), g_high(q(5, 6)) == q(2, 3)),
        ("g(1) = 0".into(), density_exponent_g(q(1, 1)).map(|g| g == q(0, 1)).unwrap_or(false)),
    ]
}

pub fn g_sigma(from: f64, to: f64, step: f64) -> Result<Outcome, CliError> {
    let rows = crate::plot::g_rows(from, to, step)?;
    let mut out = Outcome::default();
    out.file("g_sigma.csv", crate::plot::xy_csv(["sigma", "g"], &rows)?);
    let decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    out.check("g decreasing", decreasing, format!("{} rows", rows.len()));
    for (name, ok) in g_exact_checks() {
        out.check(name, ok, "exact rational");
    }
    Ok(out)
}
