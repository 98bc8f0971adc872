//! Run configuration. A config file has three sections, all optional except `run.experiment`:
//!
//! ```toml
//! [field]
//! n = 3                 # 3 (Eisenstein) or 4 (Gaussian)
//! tag = "eisenstein"    # optional; must agree with n
//! s = []                # extra rational primes whose prime ideals join S
//!
//! [run]
//! experiment = "recursion"
//! seed = 0
//! precision = 16        # digits; NTHSIEVE_PRECISION overrides
//! output = "out"
//!
//! [params]
//! cutoff = 200          # ideal norm bound for symbols, conductors, reciprocity, fe-residual
//! count = 100           # characters sampled by conductors
//! pairs = 50            # same-class pairs checked by conductors
//! norms = [50, 100, 200]
//! t = [0.0, 5.0]
//! delta = 0.1
//! min_fraction = 0.3
//! m_values = [10.0, 100.0]
//! sizes = [8.0, 16.0, 32.0, 64.0]
//! trials = 200
//! epsilon = 0.1
//! j = 1
//! alpha0 = "2"
//! steps = 50
//! sigma_from = 0.51
//! sigma_to = 1.0
//! sigma_step = 0.01
//! series = 1
//! s_re = [2.0, 3.0]
//! w_re = [2.0, 3.0]
//! im = [0.0, 1.0]
//! cutoff_a = 300
//! cutoff_b = 300
//! ```
//!
//! Unknown keys in any section are rejected.

use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const PRECISION_ENV: &str = "NTHSIEVE_PRECISION";
/// Digits an f64 actually carries.
pub const NATIVE_DIGITS: u32 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Symbols,
    Conductors,
    Reciprocity,
    FeResidual,
    SecondMoment,
    Nonvanishing,
    SieveGrid,
    Recursion,
    MdsGrid,
    GSigma,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Symbols => "symbols",
            Experiment::Conductors => "conductors",
            Experiment::Reciprocity => "reciprocity",
            Experiment::FeResidual => "fe-residual",
            Experiment::SecondMoment => "second-moment",
            Experiment::Nonvanishing => "nonvanishing",
            Experiment::SieveGrid => "sieve-grid",
            Experiment::Recursion => "recursion",
            Experiment::MdsGrid => "mds-grid",
            Experiment::GSigma => "g-sigma",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldSection {
    pub n: u32,
    pub tag: Option<String>,
    pub s: Vec<u64>,
}

impl Default for FieldSection {
    fn default() -> FieldSection {
        FieldSection { n: 3, tag: None, s: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub experiment: Experiment,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_precision")]
    pub precision: u32,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_precision() -> u32 {
    NATIVE_DIGITS
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub cutoff: u64,
    pub count: usize,
    pub pairs: usize,
    pub norms: Vec<u64>,
    pub t: Vec<f64>,
    pub delta: f64,
    pub min_fraction: f64,
    pub m_values: Vec<f64>,
    pub sizes: Vec<f64>,
    pub trials: usize,
    pub epsilon: f64,
    pub j: i64,
    pub alpha0: String,
    pub steps: usize,
    pub sigma_from: f64,
    pub sigma_to: f64,
    pub sigma_step: f64,
    pub series: u8,
    pub s_re: Vec<f64>,
    pub w_re: Vec<f64>,
    pub im: Vec<f64>,
    pub cutoff_a: u64,
    pub cutoff_b: u64,
}

impl Default for Params {
    fn default() -> Params {
        Params {
            cutoff: 200,
            count: 100,
            pairs: 50,
            norms: vec![50, 100, 200],
            t: vec![0.0, 5.0],
            delta: 0.1,
            min_fraction: 0.3,
            m_values: vec![10.0, 100.0],
            sizes: vec![8.0, 16.0, 32.0, 64.0],
            trials: 200,
            epsilon: 0.1,
            j: 1,
            alpha0: "2".into(),
            steps: 50,
            sigma_from: 0.51,
            sigma_to: 1.0,
            sigma_step: 0.01,
            series: 1,
            s_re: vec![2.0, 3.0],
            w_re: vec![2.0, 3.0],
            im: vec![0.0, 1.0],
            cutoff_a: 300,
            cutoff_b: 300,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub field: FieldSection,
    pub run: RunSection,
    #[serde(default)]
    pub params: Params,
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<RunConfig, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        RunConfig::parse(&text)
    }

    pub fn new(experiment: Experiment) -> RunConfig {
        RunConfig {
            field: FieldSection::default(),
            run: RunSection { experiment, seed: 0, precision: NATIVE_DIGITS, output: default_output() },
            params: Params::default(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn alpha0(&self) -> Result<BigRational, CliError> {
        parse_rational(&self.params.alpha0)
    }

    /// Every check that can fail before any computation starts.
    pub fn validate(&self) -> Result<(), CliError> {
        let f = &self.field;
        if f.n != 3 && f.n != 4 {
            return Err(bad(format!("field.n = {} (supported: 3, 4)", f.n)));
        }
        if let Some(tag) = &f.tag {
            let expected = if f.n == 3 { "eisenstein" } else { "gaussian" };
            if tag != expected {
                return Err(bad(format!("field.tag = {tag:?} does not match n = {}", f.n)));
            }
        }
        if f.s.iter().any(|&p| !nthsieve::arith::is_prime(p)) {
            return Err(bad(format!("field.s = {:?} must list rational primes", f.s)));
        }
        if self.run.precision == 0 {
            return Err(bad("run.precision must be positive"));
        }
        let p = &self.params;
        let positive = |name: &str, xs: &[f64]| {
            if xs.is_empty() || xs.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
                Err(bad(format!("params.{name} must be a nonempty list of positive numbers")))
            } else {
                Ok(())
            }
        };
        use Experiment::*;
        match self.run.experiment {
            Symbols | Reciprocity | FeResidual => {
                if p.cutoff < 2 {
                    return Err(bad("params.cutoff must be at least 2"));
                }
                if self.run.experiment == FeResidual {
                    positive("m_values", &p.m_values)?;
                }
            }
            Conductors => {
                if p.count == 0 || p.pairs == 0 {
                    return Err(bad("params.count and params.pairs must be positive"));
                }
            }
            SecondMoment | Nonvanishing => {
                if p.norms.is_empty() || p.norms.contains(&0) {
                    return Err(bad("params.norms must be a nonempty list of positive norms"));
                }
                if p.t.is_empty() || p.t.iter().any(|t| !t.is_finite()) {
                    return Err(bad("params.t must be a nonempty list of finite numbers"));
                }
                if !(p.delta >= 0.0) || !(0.0..=1.0).contains(&p.min_fraction) {
                    return Err(bad("params.delta must be ≥ 0 and params.min_fraction in [0, 1]"));
                }
            }
            SieveGrid => {
                positive("sizes", &p.sizes)?;
                if p.sizes.iter().any(|&x| x < 1.0) {
                    return Err(bad("params.sizes must be at least 1"));
                }
                if p.trials == 0 || !(p.epsilon > 0.0) {
                    return Err(bad("params.trials and params.epsilon must be positive"));
                }
                if p.j.rem_euclid(f.n as i64) == 0 {
                    return Err(bad(format!("params.j = {} must not be divisible by n", p.j)));
                }
            }
            Recursion => {
                if self.alpha0()? <= nthsieve::sieve::four_thirds() {
                    return Err(bad("params.alpha0 must exceed 4/3"));
                }
                if p.steps == 0 {
                    return Err(bad("params.steps must be positive"));
                }
            }
            MdsGrid => {
                if p.series != 1 && p.series != 2 {
                    return Err(bad("params.series must be 1 or 2"));
                }
                if p.s_re.is_empty() || p.w_re.is_empty() || p.im.is_empty() {
                    return Err(bad("params.s_re, params.w_re and params.im must be nonempty"));
                }
                if p.cutoff_a == 0 || p.cutoff_b == 0 {
                    return Err(bad("params.cutoff_a and params.cutoff_b must be positive"));
                }
            }
            GSigma => {
                crate::plot::sigma_points(p.sigma_from, p.sigma_to, p.sigma_step)?;
            }
        }
        Ok(())
    }
}

/// "p/q", "p" or a decimal such as "1.5".
pub fn parse_rational(s: &str) -> Result<BigRational, CliError> {
    let s = s.trim();
    let int = |x: &str| x.parse::<BigInt>().map_err(|_| bad(format!("not a rational number: {s:?}")));
    if let Some((p, q)) = s.split_once('/') {
        let q = int(q)?;
        if q == BigInt::from(0) {
            return Err(bad(format!("zero denominator in {s:?}")));
        }
        return Ok(BigRational::new(int(p)?, q));
    }
    if let Some((a, b)) = s.split_once('.') {
        let den = BigInt::from(10).pow(b.len() as u32);
        let sign = if a.starts_with('-') { -1 } else { 1 };
        let whole = if a.is_empty() || a == "-" { BigInt::from(0) } else { int(a)? };
        let frac = if b.is_empty() { BigInt::from(0) } else { int(b)? };
        return Ok(BigRational::new(whole * &den + frac * sign, den));
    }
    Ok(BigRational::from_integer(int(s)?))
}

/// Precision after the environment override, with a warning when it exceeds what f64 carries.
pub fn effective_precision(configured: u32) -> Result<(u32, Option<String>), CliError> {
    let digits = match std::env::var(PRECISION_ENV) {
        Ok(v) => v.trim().parse::<u32>().map_err(|_| bad(format!("{PRECISION_ENV}={v:?} is not a digit count")))?,
        Err(_) => configured,
    };
    if digits == 0 {
        return Err(bad("precision must be positive"));
    }
    let warning = (digits > NATIVE_DIGITS).then(|| {
        format!("warning: {digits} digits requested; computations run in f64 (about {NATIVE_DIGITS} digits) with explicit error bounds")
    });
    Ok((digits, warning))
}
