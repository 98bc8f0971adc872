use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::coeff::CoeffVector;
use super::sigma::{sigma3_window, CharMatrix, Sigma3Form};
use crate::characters::RayClassSetup;
use crate::numerics::Window;
use crate::{Error, Result};

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const POWER_STEPS: usize = 20;
/// Power iteration is restarted from this many random vectors.
const POWER_STARTS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Random,
    Power,
    /// Both, keeping the better one.
    Best,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Random => "random",
            Strategy::Power => "power",
            Strategy::Best => "best",
        })
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "random" => Ok(Strategy::Random),
            "power" => Ok(Strategy::Power),
            "best" => Ok(Strategy::Best),
            _ => Err(Error::InvalidArgument(format!("unknown strategy {s}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SieveStats {
    pub kind: u8,
    #[serde(rename = "M")]
    pub m: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub j: i64,
    pub epsilon: f64,
    pub sigma: f64,
    pub rhs: f64,
    pub ratio: f64,
    /// The strategy that produced the reported value.
    pub strategy: Strategy,
    pub seed: u64,
}

impl SieveStats {
    fn new(kind: u8, m: f64, n: f64, j: i64, eps: f64, sigma: f64, norm_sq: f64, strategy: Strategy, seed: u64) -> SieveStats {
        let rhs = large_sieve_rhs(m, n, eps) * norm_sq;
        SieveStats { kind, m, n, j, epsilon: eps, sigma, rhs, ratio: sigma / rhs, strategy, seed }
    }
}

pub fn write_stats_csv<W: Write>(stats: &[SieveStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in stats {
        w.serialize(s).map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    }
    if stats.is_empty() {
        w.write_record(["kind", "M", "N", "j", "epsilon", "sigma", "rhs", "ratio", "strategy", "seed"])
            .map_err(|e| Error::InvalidArgument(format!("csv: {e}")))?;
    }
    w.flush().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    Ok(())
}

/// (M + N + (MN)^{2/3})·(MN)^ε.
pub fn large_sieve_rhs(m: f64, n: f64, eps: f64) -> f64 {
    (m + n + (m * n).powf(2.0 / 3.0)) * (m * n).powf(eps)
}

/// Trial i draws from its own ChaCha stream, so results do not depend on scheduling.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

#[derive(Clone, Debug)]
pub struct EstimateConfig {
    pub trials: usize,
    pub strategy: Strategy,
    pub seed: u64,
    pub epsilon: f64,
    /// Specific λ that are tried in addition to the random ones.
    pub extra: Vec<CoeffVector>,
    /// Window for Σ₃.
    pub window: Window,
}

impl Default for EstimateConfig {
    fn default() -> EstimateConfig {
        EstimateConfig {
            trials: 200,
            strategy: Strategy::Best,
            seed: 0,
            epsilon: DEFAULT_EPSILON,
            extra: Vec::new(),
            window: sigma3_window(),
        }
    }
}

fn normalize(v: &mut [Complex64]) -> f64 {
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
    norm
}

/// Best Rayleigh quotient of a Hermitian operator found by random vectors and power iteration.
/// `quotient(v)` is the form at v (any scale), `step(v)` applies the operator.
fn search<Q, S>(dim: usize, seed: u64, cfg: &EstimateConfig, extra: &[Vec<Complex64>], quotient: Q, step: S) -> (f64, Strategy)
where
    Q: Fn(&[Complex64]) -> f64 + Sync,
    S: Fn(&[Complex64]) -> Vec<Complex64> + Sync,
{
    if dim == 0 {
        return (0.0, cfg.strategy);
    }
    let random_vec = |trial: u64| {
        use rand::Rng;
        let mut rng = trial_rng(seed, trial);
        (0..dim).map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))).collect::<Vec<_>>()
    };
    let ratio = |v: &[Complex64]| {
        let ns: f64 = v.iter().map(|x| x.norm_sqr()).sum();
        if ns == 0.0 {
            0.0
        } else {
            quotient(v) / ns
        }
    };
    let mut best_random = extra.iter().map(|v| ratio(v)).fold(0.0, f64::max);
    if cfg.strategy != Strategy::Power {
        let r = (0..cfg.trials as u64).into_par_iter().map(|t| ratio(&random_vec(t))).collect::<Vec<_>>();
        best_random = r.into_iter().fold(best_random, f64::max);
    }
    let mut best_power = 0.0;
    if cfg.strategy != Strategy::Random {
        for start in 0..POWER_STARTS.min(cfg.trials.max(1)) as u64 {
            let mut v = random_vec(u64::MAX - start);
            normalize(&mut v);
            for _ in 0..POWER_STEPS {
                let mut w = step(&v);
                if normalize(&mut w) == 0.0 {
                    break;
                }
                v = w;
                best_power = f64::max(best_power, ratio(&v));
            }
            best_power = f64::max(best_power, ratio(&v));
        }
    }
    match cfg.strategy {
        Strategy::Random => (best_random, Strategy::Random),
        Strategy::Power => (best_power.max(best_random), Strategy::Power),
        Strategy::Best => {
            if best_power > best_random {
                (best_power, Strategy::Power)
            } else {
                (best_random, Strategy::Random)
            }
        }
    }
}

/// Lower bound for B_i^j(M,N), i ∈ {1, 2, 3}; the reported sigma is the form at a unit vector.
pub fn b_norm_estimate(setup: &RayClassSetup, i: u8, m: f64, n: f64, j: i64, cfg: &EstimateConfig) -> Result<SieveStats> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let support = CoeffVector::support_for(setup, n);
    let extra: Vec<Vec<Complex64>> = cfg
        .extra
        .iter()
        .map(|l| {
            if l.support() != &support {
                Err(Error::InvalidArgument("extra λ has a different support".into()))
            } else {
                Ok(l.values().to_vec())
            }
        })
        .collect::<Result<_>>()?;
    let (best, strategy) = match i {
        1 | 2 => {
            let mat = if i == 1 {
                CharMatrix::sigma1(setup, m, &support, j)?
            } else {
                CharMatrix::sigma2(setup, m, &support, j)?
            };
            search(support.len(), cfg.seed, cfg, &extra, |v| mat.form(v), |v| mat.apply_adjoint(&mat.apply(v)))
        }
        3 => {
            let mut best = (0.0, cfg.strategy);
            for class in 0..setup.r().order() as u32 {
                let form = Sigma3Form::direct(setup, m, &support, class, j, cfg.window)?;
                let k = form.members.len();
                // Σ₃(λ) = |μ*Hμ| with μ = λ̄ restricted to the class
                let sub_extra: Vec<Vec<Complex64>> =
                    extra.iter().map(|v| form.members.iter().map(|&i| v[i].conj()).collect()).collect();
                let quotient = |mu: &[Complex64]| {
                    let hm = form.apply(mu);
                    mu.iter().zip(&hm).map(|(a, b)| a.conj() * b).sum::<Complex64>().norm()
                };
                let r = search(k, cfg.seed ^ (class as u64) << 32, cfg, &sub_extra, quotient, |mu| form.apply(mu));
                if r.0 > best.0 {
                    best = r;
                }
            }
            best
        }
        _ => return Err(Error::InvalidArgument(format!("no B_{i}"))),
    };
    Ok(SieveStats::new(i, m, n, j, cfg.epsilon, best, 1.0, strategy, cfg.seed))
}

/// Best observed Σ₁/((MN)^ε(M+N+(MN)^{2/3})Σ|λ|²) for j = 1.
pub fn large_sieve_ratio(setup: &RayClassSetup, m: f64, n: f64, trials: usize, eps: f64, seed: u64) -> Result<SieveStats> {
    if m < 0.5 || n < 0.5 {
        return Err(Error::InvalidArgument(format!("M = {m}, N = {n} must be at least 1/2")));
    }
    let cfg = EstimateConfig { trials, epsilon: eps, seed, ..EstimateConfig::default() };
    b_norm_estimate(setup, 1, m, n, 1, &cfg)
}

/// Σ for one given λ as SieveStats.
pub fn stats_for(setup: &RayClassSetup, kind: u8, m: f64, lambda: &CoeffVector, j: i64, eps: f64) -> Result<SieveStats> {
    let sigma = super::sigma::sigma(kind, setup, m, lambda, j, &Default::default())?;
    Ok(SieveStats::new(kind, m, lambda.n(), j, eps, sigma, lambda.norm_sq(), Strategy::Random, 0))
}
