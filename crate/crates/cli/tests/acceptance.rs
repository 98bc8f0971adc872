//! The twelve acceptance criteria, each at its stated tolerance. One line is printed per
//! criterion; the test fails if any criterion fails.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nthsieve::algebra::{canonical_decompose, ideals_up_to_avoiding, primes_up_to_norm, DecompositionMode, Field, IdealK};
use nthsieve::characters::{power_residue_symbol, RayClassSetup};
use nthsieve::lfunctions::{moment_ratio, second_moment};
use nthsieve::mds::*;
use nthsieve::sieve::{exponent_recursion, four_thirds, to_f64};
use nthsieve_cli::experiments::{self, g_exact_checks, log_slope, sieve_stats, Outcome, SLOPE_RANGE};
use nthsieve_cli::plot::{plot_data, Curve, PlotOptions};

/// Allowed regression over a recorded baseline.
const REGRESSION: f64 = 1.05;

struct Line {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn c(a: f64, b: f64) -> Complex64 {
    Complex64::new(a, b)
}

fn all_passed(o: &Outcome) -> (bool, String) {
    let mut s = String::new();
    for a in &o.assertions {
        let _ = write!(s, "{}{}: {}; ", if a.passed { "" } else { "FAILED " }, a.name, a.detail);
    }
    (o.assertions.iter().all(|a| a.passed), s.trim_end_matches("; ").to_string())
}

fn within(elapsed: Duration, minutes: u64) -> (bool, String) {
    (elapsed <= Duration::from_secs(60 * minutes), format!("{:.1} s (limit {minutes} min)", elapsed.as_secs_f64()))
}

fn baseline_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/acceptance_baselines.toml")
}

/// Reads the recorded baselines; a missing key is recorded from `current` (first validated run).
fn check_baseline(key: &str, current: f64) -> (bool, String) {
    let path = baseline_path();
    let mut table: BTreeMap<String, f64> =
        std::fs::read_to_string(&path).ok().map(|t| toml::from_str(&t).expect("baseline file parses")).unwrap_or_default();
    match table.get(key) {
        Some(&base) => (current <= base * REGRESSION, format!("{current:.6} vs baseline {base:.6} (+5% allowed)")),
        None => {
            table.insert(key.to_string(), current);
            std::fs::write(&path, toml::to_string(&table).unwrap()).expect("baseline file is writable");
            (true, format!("{current:.6}, recorded as baseline"))
        }
    }
}

fn criterion_1(setup: &RayClassSetup) -> (bool, String) {
    let start = Instant::now();
    let (ok_sym, d_sym) = all_passed(&experiments::symbols(setup, 200).unwrap());
    let (ok_rec, d_rec) = all_passed(&experiments::reciprocity(setup, 200).unwrap());
    let (ok_t, d_t) = within(start.elapsed(), 5);
    (ok_sym && ok_rec && ok_t, format!("{d_sym}; {d_rec}; {d_t}"))
}

fn criterion_2(setup: &RayClassSetup) -> (bool, String) {
    all_passed(&experiments::conductors(setup, 200, 100, 50).unwrap())
}

fn criterion_3(setup: &RayClassSetup) -> (bool, String) {
    let start = Instant::now();
    let (ok, d) = match experiments::fe_residual(setup, 300, &[10.0, 100.0]) {
        Ok(o) => all_passed(&o),
        Err(e) => (false, e.to_string()),
    };
    let (ok_t, d_t) = within(start.elapsed(), 10);
    (ok && ok_t, format!("{d}; exponential window, f64 arithmetic; {d_t}"))
}

fn display_square(alpha: u32, beta: u32, q: u64, n: u32) -> (i32, u128) {
    let q = q as u128;
    if beta == 0 {
        (1, 1)
    } else if alpha >= beta && beta % n == 0 {
        (1, q.pow(beta - 2) * (q - 1) * (q - 1))
    } else if alpha + 1 == beta && beta % n == 0 {
        (-1, q.pow(beta - 2))
    } else if alpha + 1 == beta {
        (1, q.pow(beta - 1))
    } else {
        (0, 0)
    }
}

fn criterion_4(setup: &RayClassSetup) -> (bool, String) {
    let mut entries = 0;
    let mut table_bad = 0;
    for n in [3u32, 4] {
        let field = Field::from_n(n).unwrap();
        for p in primes_up_to_norm(field, 200).into_iter().take(10) {
            for alpha in 0..=2 * n {
                for beta in 0..=2 * n {
                    let g = gauss_coeff(alpha, beta, &p, n);
                    let got = (g.coeff.signum() as i32, (g.coeff * g.coeff) as u128 * g.root);
                    entries += 1;
                    table_bad += (got != display_square(alpha, beta, p.norm, n)) as usize;
                }
            }
        }
    }
    // closed form 1 + 𝒩𝔭^{n−1−ns} − χ_𝔞ψ(𝔭)𝒩𝔭^{−s} for 𝔞 = 𝔞₁𝔭ⁿ
    let n = setup.n();
    let chars = ClassChar::all(setup);
    let field = setup.field();
    let a1s: Vec<IdealK> = ideals_up_to_avoiding(field, 40, setup.s()).into_iter().filter(|a| a.is_squarefree()).take(8).collect();
    let (mut cases, mut worst) = (0, 0.0f64);
    for p in primes_up_to_norm(field, 80).into_iter().filter(|p| !setup.s().contains(p)) {
        let pi = p.ideal();
        for a1 in &a1s {
            let a = a1.mul(&pi.pow(n));
            for (k, psi) in chars.iter().enumerate() {
                let s = c(0.25 + 0.25 * (k % 5) as f64, 3.0 - k as f64);
                let got = correction_a(s, psi, &a, setup).unwrap().v;
                let q = (p.norm as f64).ln();
                let chi = (setup.chi_eval(&a, &pi).unwrap() * psi.eval(setup, &pi).unwrap()).to_complex();
                let terms = [c(1.0, 0.0), ((n as f64 - 1.0 - s * n as f64) * q).exp(), -chi * (-s * q).exp()];
                let want: Complex64 = terms.iter().sum();
                let scale: f64 = terms.iter().map(|t| t.norm()).sum();
                worst = worst.max((got - want).norm() / (scale * f64::EPSILON));
                cases += 1;
            }
        }
    }
    (
        table_bad == 0 && worst <= 4.0,
        format!("{entries} table entries, {table_bad} mismatches; {cases} closed-form cases, worst difference {worst:.1} ulp of the term scale"),
    )
}

fn criterion_5() -> (bool, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let s = c(rng.gen_range(0.1..0.9), rng.gen_range(-20.0..20.0));
        let w = c(rng.gen_range(0.1..0.9), rng.gen_range(-20.0..20.0));
        worst = worst.max(quotient_check(s, w, 3, 2).unwrap().0);
    }
    (worst <= 1e-10, format!("20 points, max residual {worst:e}"))
}

/// Σ_𝔞 Σ_𝔟 χ_𝔞(𝔟)𝔄(s,𝔞)𝒩𝔟^{−s}𝒩𝔞^{−w} with trivial ψ, straight from the definitions: χ_𝔞 by
/// the symbol of the twisted generator of 𝔞₁, 𝔄 by enumerating ordered triples.
fn z1_naive(s: Complex64, w: Complex64, xa: u64, xb: u64, setup: &RayClassSetup) -> Complex64 {
    let n = setup.n();
    let field = setup.field();
    let bs = ideals_up_to_avoiding(field, xb, setup.s());
    let mut total = c(0.0, 0.0);
    for a in ideals_up_to_avoiding(field, xa, setup.s()) {
        let dec = canonical_decompose(&a, n, DecompositionMode::NthPowerFree);
        let (a1, a2) = (dec.squarefull_part, dec.nth_power_root);
        let t = (!a1.is_one()).then(|| setup.twisted_generator(&a1).unwrap());
        let chi = |b: &IdealK| t.as_ref().map_or(c(1.0, 0.0), |t| power_residue_symbol(t, b).unwrap().to_complex());
        let mut corr = c(0.0, 0.0);
        for b1 in a2.divisors() {
            let rest = a2.div_exact(&b1).unwrap();
            for b2 in rest.divisors() {
                let b3 = rest.div_exact(&b2).unwrap();
                let mu = b3.mobius() as f64;
                if mu == 0.0 || !a1.is_coprime(&b3) {
                    continue;
                }
                corr += chi(&b3)
                    * mu
                    * (-(s * n as f64 - n as f64 + 1.0) * (b1.norm() as f64).ln()).exp()
                    * (-s * (b3.norm() as f64).ln()).exp();
            }
        }
        let l: Complex64 = bs.iter().filter(|b| a1.is_coprime(b)).map(|b| chi(b) * (-s * (b.norm() as f64).ln()).exp()).sum();
        total += l * corr * (-w * (a.norm() as f64).ln()).exp();
    }
    total
}

fn criterion_6(setup: &RayClassSetup) -> (bool, String) {
    let triv = ClassChar::trivial(setup);
    let s = c(3.0, 0.0);
    let got = z_eval(Series::Z1, s, s, &triv, &triv, (1000, 1000), setup).unwrap();
    let want = z1_naive(s, s, 1000, 1000, setup);
    let diff = (got.v - want).norm();
    (diff <= 1e-6, format!("Z1(3,3) = {:.12}{:+.3e}i, difference {diff:e}", got.v.re, got.v.im))
}

fn criterion_7(setup: &RayClassSetup) -> (bool, String) {
    let start = Instant::now();
    let stats = sieve_stats(setup, &[8.0, 16.0, 32.0, 64.0], 1, 200, 0.1, 0).unwrap();
    let max = stats.iter().map(|s| s.ratio).fold(0.0, f64::max);
    let (ok_b, d_b) = check_baseline("sieve_max_ratio", max);
    let slope = log_slope(&stats);
    let ok_s = (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&slope);
    let (ok_t, d_t) = within(start.elapsed(), 15);
    (ok_b && ok_s && ok_t, format!("max ratio {d_b}; slope {slope:.4} {}in [-0.1, 0.1]; {d_t}", if ok_s { "" } else { "NOT " }))
}

fn criterion_8() -> (bool, String) {
    let two = BigRational::from_integer(BigInt::from(2));
    let seq = exponent_recursion(&two, 50).unwrap();
    let first = seq[1] == BigRational::new(BigInt::from(8), BigInt::from(5));
    let dist = to_f64(&(&seq[50] - four_thirds()));
    (first && dist.abs() <= 1e-10, format!("alpha_1 = {}, |alpha_50 - 4/3| = {:e}", seq[1], dist.abs()))
}

fn criterion_9(setup: &RayClassSetup) -> (bool, String) {
    let start = Instant::now();
    let mut max = 0.0f64;
    let mut parts = Vec::new();
    for n in [50, 100, 200] {
        for t in [0.0, 5.0] {
            let r = second_moment(setup, n, t).unwrap();
            let ratio = moment_ratio(&r, 0.1, setup.field().degree());
            parts.push(format!("({n},{t})={ratio:.4}"));
            max = max.max(ratio);
        }
    }
    let (ok_b, d_b) = check_baseline("moment_max_ratio", max);
    let (ok_t, d_t) = within(start.elapsed(), 20);
    (ok_b && ok_t, format!("{}; max {d_b}; {d_t}", parts.join(" ")))
}

fn criterion_10(setup: &RayClassSetup) -> (bool, String) {
    let r = second_moment(setup, 200, 0.0).unwrap();
    let f = r.nonzero_fraction();
    (f >= 0.3, format!("{}/{} nonzero, fraction {f:.4} (threshold 0.3)", r.nonzero_count, r.records.len()))
}

fn criterion_11() -> (bool, String) {
    let exact = g_exact_checks();
    let bytes = plot_data(Curve::GSigma, 0.51, 1.0, 0.01, &PlotOptions::default()).unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let g: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let decreasing = g.windows(2).all(|w| w[1] < w[0]);
    let ok = exact.iter().all(|e| e.1) && decreasing;
    let names: Vec<String> = exact.iter().map(|(n, ok)| format!("{n}{}", if *ok { "" } else { " FAILED" })).collect();
    (ok, format!("{}; emitted curve of {} rows {}", names.join(", "), g.len(), if decreasing { "decreasing" } else { "NOT decreasing" }))
}

fn criterion_12() -> (bool, String) {
    let tol = |err: f64| 1e-8f64.max(err);
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut note = |x: f64, err: f64| {
        worst = worst.max(x);
        ok &= x <= tol(err);
    };
    let spec = WeightSpec::new(2.0, -1.5, 3, 3, 2).unwrap();
    for z in spec.zero_set() {
        note((weight_p(z, c(0.0, 0.0)).unwrap() - 1.0).norm(), 0.0);
        note(weight_p(z, z).unwrap().norm(), 0.0);
        for w in [c(0.3, 1.0), c(-0.7, 2.5), c(1.2, -0.4)] {
            note((weight_p(z, w).unwrap() - weight_p(z, -w).unwrap()).norm(), 0.0);
        }
        note(weight_h(&spec, z).unwrap().norm(), 0.0);
    }
    note((weight_h(&spec, c(0.0, 0.0)).unwrap() - 1.0).norm(), 0.0);
    let mut decay = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let ca = v_decay_constant(&spec, sign).unwrap();
        for y in [1.0, 10.0, 100.0] {
            let v = weight_v(&spec, sign, y).unwrap();
            let excess = (v.abs() * (1.0 + y).powi(3) - ca.re()).max(0.0);
            note(excess, ca.err + v.err);
            decay.push(v.abs() * (1.0 + y).powi(3));
        }
    }
    let peak = decay.iter().cloned().fold(0.0, f64::max);
    (ok, format!("worst identity defect {worst:e}; max |V(y)|(1+y)^3 over y in {{1,10,100}} = {peak:.3e} within c_A"))
}

#[test]
fn acceptance() {
    let setup = RayClassSetup::standard(3).unwrap();
    let mut lines = Vec::new();
    let mut record = |id: u32, name: &'static str, f: &dyn Fn() -> (bool, String)| {
        let start = Instant::now();
        let (passed, detail) = f();
        let line = Line { id, name, passed, detail: format!("{detail} [{:.1} s]", start.elapsed().as_secs_f64()) };
        println!("criterion {:>2} {} {}: {}", line.id, if line.passed { "PASS" } else { "FAIL" }, line.name, line.detail);
        lines.push(line);
    };
    record(1, "character algebra", &|| criterion_1(&setup));
    record(2, "conductor bracketing", &|| criterion_2(&setup));
    record(3, "root numbers and smoothed identity", &|| criterion_3(&setup));
    record(4, "Gauss coefficient table and correction factor", &|| criterion_4(&setup));
    record(5, "Gamma quotient identity", &criterion_5);
    record(6, "Z1 against the naive double series", &|| criterion_6(&setup));
    record(7, "large sieve grid", &|| criterion_7(&setup));
    record(8, "exponent recursion", &criterion_8);
    record(9, "second moment", &|| criterion_9(&setup));
    record(10, "non-vanishing", &|| criterion_10(&setup));
    record(11, "density exponent g", &criterion_11);
    record(12, "weights", &criterion_12);
    let failed: Vec<u32> = lines.iter().filter(|l| !l.passed).map(|l| l.id).collect();
    println!("acceptance: {} of {} criteria pass", lines.len() - failed.len(), lines.len());
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn baseline_file_is_well_formed() {
    if let Ok(text) = std::fs::read_to_string(baseline_path()) {
        let table: BTreeMap<String, f64> = toml::from_str(&text).unwrap();
        assert!(table.values().all(|v| v.is_finite() && *v > 0.0));
    }
}
