//! Experiment driver: reads a run config, builds the ray class setup, runs one named experiment
//! and writes its CSV files together with a config echo and an assertion report.

pub mod config;
pub mod experiments;
pub mod plot;

use std::fmt;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use config::RunConfig;
use nthsieve::characters::RayClassSetup;

pub const EXIT_OK: i32 = 0;
pub const EXIT_OTHER: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ASSERTION: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numeric(String),
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Other(_) => EXIT_OTHER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numeric(m) => write!(f, "numeric failure: {m}"),
            CliError::Other(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<nthsieve::Error> for CliError {
    fn from(e: nthsieve::Error) -> CliError {
        use nthsieve::Error::*;
        match e {
            Quadrature(_) => CliError::Numeric(e.to_string()),
            InvalidArgument(_) | Domain(_) | UnsupportedField(_) => CliError::Config(e.to_string()),
            ZeroIdeal | NotCoprime(_) | Inconsistent(_) => CliError::Other(e.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub config: RunConfig,
    pub csv_paths: Vec<PathBuf>,
    pub assertions: Vec<Assertion>,
    pub wall_time: Duration,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_OK
        } else {
            EXIT_ASSERTION
        }
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "experiment {} (n = {}, seed = {})", self.config.run.experiment.name(), self.config.field.n, self.config.run.seed);
        for a in &self.assertions {
            let _ = writeln!(s, "  [{}] {}: {}", if a.passed { "pass" } else { "FAIL" }, a.name, a.detail);
        }
        for p in &self.csv_paths {
            let _ = writeln!(s, "  wrote {}", p.display());
        }
        let _ = writeln!(s, "  wall time {:.2} s", self.wall_time.as_secs_f64());
        s
    }
}

fn report_csv(assertions: &[Assertion]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let err = |e: csv::Error| CliError::Other(e.to_string());
    w.write_record(["assertion", "passed", "detail"]).map_err(err)?;
    for a in assertions {
        w.write_record([a.name.as_str(), if a.passed { "true" } else { "false" }, a.detail.as_str()]).map_err(err)?;
    }
    w.into_inner().map_err(|e| CliError::Other(e.to_string()))
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    std::fs::write(&path, bytes).map_err(|e| CliError::Other(format!("{}: {e}", path.display())))?;
    Ok(path)
}

/// Runs the configured experiment. Files are written only after the whole computation has
/// succeeded, one at a time: the experiment's CSVs, `config.toml` (the effective config) and
/// `report.csv`. Assertion failures are reported in the result, not as an error.
pub fn run(config: &RunConfig) -> Result<RunReport, CliError> {
    let start = Instant::now();
    config.validate()?;
    let (precision, warning) = config::effective_precision(config.run.precision)?;
    let mut config = config.clone();
    config.run.precision = precision;
    let setup = experiments::build_setup(&config)?;
    let outcome = experiments::run_experiment(&config, &setup)?;

    let dir = &config.run.output;
    std::fs::create_dir_all(dir).map_err(|e| CliError::Other(format!("{}: {e}", dir.display())))?;
    let mut csv_paths = Vec::new();
    for (name, bytes) in &outcome.files {
        csv_paths.push(write_file(dir, name, bytes)?);
    }
    write_file(dir, "config.toml", config.to_toml().as_bytes())?;
    csv_paths.push(write_file(dir, "report.csv", &report_csv(&outcome.assertions)?)?);
    Ok(RunReport {
        config,
        csv_paths,
        assertions: outcome.assertions,
        wall_time: start.elapsed(),
        warnings: warning.into_iter().collect(),
    })
}

/// S, the sufficiency search behind 𝔠, H_𝔠 and R_𝔠 with the chosen generators ℰ₀.
pub fn describe_setup(setup: &RayClassSetup) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "field {:?}, n = {}", setup.field(), setup.n());
    let _ = writeln!(s, "S = {:?}", setup.s());
    for x in setup.sufficiency() {
        let _ = writeln!(
            s,
            "  {:?}: exponent {} (units ≡ 1 mod 𝔭^e are n-th powers, checked modulo 𝔭^{})",
            x.prime, x.exponent, x.checked_modulus
        );
        if x.exponent > 0 {
            let v = x.checked_modulus - x.exponent + 1;
            let below = nthsieve::characters::units_near_one_are_powers(&x.prime, setup.n(), x.exponent - 1, v);
            let _ = writeln!(s, "    exponent {} {}", x.exponent - 1, if below { "also works" } else { "fails, so the exponent is minimal" });
        }
    }
    let _ = writeln!(s, "c = {:?}, norm {}", setup.c(), setup.c().norm());
    let _ = writeln!(s, "H_c order {}", setup.ray_group().order());
    let _ = writeln!(s, "R_c order {}, invariants {:?}", setup.r().order(), setup.r().orders());
    for (i, e) in setup.e0().iter().enumerate() {
        let _ = writeln!(s, "  E0[{i}] = {e:?}, norm {}", e.norm());
    }
    s
}
