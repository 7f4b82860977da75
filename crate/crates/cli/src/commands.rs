//! Subcommand pipelines. Each one writes its artifacts, then a
//! `run_summary.json` listing every cross-check, and fails with a numeric
//! error (exit 2) if any check is out of tolerance.

use std::path::{Path, PathBuf};

use serde_json::json;

use qwpath_core::chain::{chain_from_coins, coins_from_chain};
use qwpath_core::distribution::{
    check_szegedy, stationary_distributions, time_average_spectral, time_average_szegedy,
    time_average_theorem,
};
use qwpath_core::ehrenfest::{
    arcsine_component, ehrenfest_chain, ehrenfest_time_average, ehrenfest_time_average_exact,
    origin_excess, rational_to_f64, verify_identities, EXACT_LIMIT,
};
use qwpath_core::evolution::{cesaro_average, step};
use qwpath_core::spectra::{
    check_spectral_symmetry, eigensolve_chain, lift_walk_eigenpairs,
    transition_eigenvalues_bisection,
};
use qwpath_core::state::position_marginal;
use qwpath_core::{
    Branch, CoinSpec, Complex64, Distribution, Sampler, StateVector, Walk, WalkMode, WalkSpectrum,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{distribution_table, ensure_dir, num, plot_script, write_atomic, write_json, Table};

/// Default horizon for the Cesàro column of `--method all`.
pub const DEFAULT_ALL_STEPS: usize = 100_000;
/// Horizon of the stationarity check.
pub const STATIONARY_HORIZON: usize = 100;

pub const SPECTRUM_TOL: f64 = 1e-10;
pub const CLOSED_FORM_TOL: f64 = 1e-8;
pub const SZEGEDY_TOL: f64 = 1e-10;
pub const STATIONARY_TOL: f64 = 1e-10;
pub const EHRENFEST_TOL: f64 = 1e-10;
/// Selftest budget for Cesàro vs closed form at `T = 10^5`.
pub const CESARO_TOL: f64 = 1e-2;

pub const METHODS: [&str; 5] = ["theorem", "szegedy", "spectral", "cesaro", "all"];

/// Flags shared by every subcommand; flags override config fields.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: Option<PathBuf>,
    pub method: Option<String>,
    pub steps: Option<usize>,
    pub big_n: Option<usize>,
    pub out: PathBuf,
    pub seed: Option<u64>,
}

/// A validated walk plus run parameters.
#[derive(Debug, Clone)]
pub struct Input {
    pub spec: CoinSpec,
    pub method: Option<String>,
    pub steps: Option<usize>,
}

impl Options {
    /// `--config` takes precedence; `--N` alone selects the Ehrenfest walk
    /// with `(nu1, nu2) = (1, -1)`.
    pub fn input(&self) -> Result<Input, CliError> {
        let (spec, cfg) = match (&self.config, self.big_n) {
            (Some(path), _) => {
                let cfg = RunConfig::load(path)?;
                (cfg.walk()?, cfg)
            }
            (None, Some(big_n)) => (ehrenfest_walk(big_n)?, RunConfig::default()),
            (None, None) => return Err(CliError::Usage("--config PATH (or --N INT) is required".into())),
        };
        Ok(Input {
            spec,
            method: self.method.clone().or(cfg.method),
            steps: self.steps.or(cfg.steps),
        })
    }
}

fn ehrenfest_walk(big_n: usize) -> Result<CoinSpec, CliError> {
    let chain = ehrenfest_chain(big_n)?;
    Ok(coins_from_chain(&chain, Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), None)?)
}

/// One named cross-check: `value <= tol`.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tol: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tol,
        }
    }

    /// NaN fails.
    pub fn passed(&self) -> bool {
        self.value <= self.tol
    }
}

/// Writes `run_summary.json` and turns failed checks into an error.
fn finish(command: &str, out: &Path, spec: Option<&CoinSpec>, files: &[PathBuf], checks: &[Check]) -> Result<(), CliError> {
    let walk = spec.map(|s| {
        json!({
            "n": s.size().n(),
            "nu1": [s.nu1().re, s.nu1().im],
            "nu2": [s.nu2().re, s.nu2().im],
        })
    });
    let names: Vec<String> = files
        .iter()
        .map(|p| p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default())
        .collect();
    let summary = json!({
        "command": command,
        "walk": walk,
        "files": names,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "value": c.value,
            "tol": c.tol,
            "pass": c.passed(),
        })).collect::<Vec<_>>(),
    });
    write_json(out, "run_summary.json", &summary)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} = {:e} exceeds {:e}", c.name, c.value, c.tol))
        .collect();
    for c in checks {
        log::info!("check {}: {:e} (tol {:e})", c.name, c.value, c.tol);
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(failed.join("; ")))
    }
}

fn mode_residual(spec: &CoinSpec, mode: &WalkMode) -> Result<f64, CliError> {
    let image = step(spec, &mode.vector)?;
    Ok((0..spec.size().dim())
        .map(|i| (image[i] - mode.mu * mode.vector[i]).norm())
        .fold(0.0, f64::max))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn spectrum(opts: &Options) -> Result<(), CliError> {
    let input = opts.input()?;
    let spec = &input.spec;
    ensure_dir(&opts.out)?;
    let chain = chain_from_coins(spec);
    let spectrum = eigensolve_chain(&chain)?;
    spectrum.check_matches(spec)?;
    let ws = lift_walk_eigenpairs(spec, &spectrum)?;

    let last = spec.size().last();
    let mut header = vec!["m".to_string(), "lambda".to_string()];
    header.extend((0..=last).map(|x| format!("phi_{x}")));
    let mut chain_csv = Table::new(header);
    for m in 0..spectrum.len() {
        let mut row = vec![m.to_string(), num(spectrum.lambda(m))];
        row.extend(spectrum.phi(m).iter().map(|&v| num(v)));
        chain_csv.push(row);
    }

    let mut walk_csv = Table::new(["index", "re_mu", "im_mu", "residual"]);
    let mut worst_mode = 0.0f64;
    for (i, mode) in ws.modes().iter().enumerate() {
        let r = mode_residual(spec, mode)?;
        worst_mode = worst_mode.max(r);
        walk_csv.push(vec![i.to_string(), num(mode.mu.re), num(mode.mu.im), num(r)]);
    }

    let files = vec![
        chain_csv.write(&opts.out, "chain_spectrum.csv")?,
        walk_csv.write(&opts.out, "walk_spectrum.csv")?,
    ];
    let bisection = transition_eigenvalues_bisection(&chain);
    let symmetry = check_spectral_symmetry(&spectrum);
    let checks = vec![
        Check::new("chain eigenpair residual", spectrum.max_residual(), SPECTRUM_TOL),
        Check::new("QL vs bisection eigenvalues", max_abs_diff(spectrum.lambdas(), &bisection), SPECTRUM_TOL),
        Check::new("spectral symmetry violations", symmetry.violations.len() as f64, 0.0),
        Check::new("walk eigenpair residual", worst_mode, SPECTRUM_TOL),
        Check::new("walk eigenbasis orthonormality", ws.orthonormality_error(), SPECTRUM_TOL),
    ];
    finish("spectrum", &opts.out, Some(spec), &files, &checks)
}

fn lifted(spec: &CoinSpec) -> Result<WalkSpectrum, CliError> {
    let spectrum = eigensolve_chain(&chain_from_coins(spec))?;
    Ok(lift_walk_eigenpairs(spec, &spectrum)?)
}

fn average_of(method: &str, spec: &CoinSpec, steps: Option<usize>) -> Result<Distribution, CliError> {
    let (nu1, nu2) = (spec.nu1(), spec.nu2());
    match method {
        "theorem" => Ok(time_average_theorem(&eigensolve_chain(&chain_from_coins(spec))?, nu1, nu2)?),
        "szegedy" => {
            check_szegedy(nu1, nu2)?;
            Ok(time_average_szegedy(&eigensolve_chain(&chain_from_coins(spec))?)?)
        }
        "spectral" => Ok(time_average_spectral(&lifted(spec)?)?),
        "cesaro" => {
            let steps = steps.ok_or_else(|| CliError::Usage("method cesaro needs --steps T".into()))?;
            Ok(cesaro_average(spec, &StateVector::origin(spec.size()), steps)?)
        }
        other => Err(CliError::Usage(format!(
            "unknown method {other:?}; expected one of {}",
            METHODS.join(", ")
        ))),
    }
}

pub fn average(opts: &Options) -> Result<(), CliError> {
    let input = opts.input()?;
    let spec = &input.spec;
    let method = input.method.as_deref().unwrap_or("theorem");
    if !METHODS.contains(&method) {
        return Err(CliError::Usage(format!(
            "unknown method {method:?}; expected one of {}",
            METHODS.join(", ")
        )));
    }
    if method == "cesaro" && input.steps.is_none() {
        return Err(CliError::Usage("method cesaro needs --steps T".into()));
    }
    ensure_dir(&opts.out)?;

    let methods: Vec<&str> = if method == "all" {
        let mut m = vec!["theorem"];
        if spec.is_szegedy_type() {
            m.push("szegedy");
        } else {
            log::info!("skipping szegedy: nu2 != -nu1");
        }
        m.extend(["spectral", "cesaro"]);
        m
    } else {
        vec![method]
    };
    let steps = input.steps.or((method == "all").then_some(DEFAULT_ALL_STEPS));

    let mut files = Vec::new();
    let mut results = Vec::new();
    for &m in &methods {
        let d = average_of(m, spec, steps)?;
        let name = format!("average_{m}.csv");
        files.push(distribution_table(d.probs()).write(&opts.out, &name)?);
        results.push((m, name, d));
    }

    let mut checks = Vec::new();
    if results.len() > 1 {
        let mut cmp = Table::new(["a", "b", "sup_diff"]);
        for i in 0..results.len() {
            for j in i + 1..results.len() {
                let (a, _, da) = &results[i];
                let (b, _, db) = &results[j];
                let diff = da.sup_distance(db);
                cmp.push(vec![a.to_string(), b.to_string(), num(diff)]);
                // Cesàro error decays like 1/T; it is reported, not enforced.
                let tol = match (*a, *b) {
                    (_, "cesaro") | ("cesaro", _) => continue,
                    ("theorem", "szegedy") => SZEGEDY_TOL,
                    _ => CLOSED_FORM_TOL,
                };
                checks.push(Check::new(format!("{a} vs {b}"), diff, tol));
            }
        }
        files.push(cmp.write(&opts.out, "comparison.csv")?);
    }

    let series: Vec<(String, String)> = results.iter().map(|(m, f, _)| (m.to_string(), f.clone())).collect();
    let plot = opts.out.join("plot_average.py");
    write_atomic(&plot, &plot_script(&series, &format!("n = {}", spec.size().n())))?;
    files.push(plot);
    finish("average", &opts.out, Some(spec), &files, &checks)
}

/// Largest per-vertex deviation of the marginal of `U^t u` from `target`, `t <= horizon`.
fn stationarity_deviation(spec: &CoinSpec, vector: &StateVector, target: &[f64], horizon: usize) -> Result<Vec<f64>, CliError> {
    let mut dev = vec![0.0f64; target.len()];
    // Re-normalize so that a 1e-13 norm defect is not mistaken for motion.
    let unit = vector.clone().normalized();
    position_marginal(&unit)?;
    for record in Walk::new(spec, unit)?.take(horizon + 1) {
        for (d, (p, q)) in dev.iter_mut().zip(record.distribution.probs().iter().zip(target)) {
            *d = d.max((p - q).abs());
        }
    }
    Ok(dev)
}

pub fn stationary(opts: &Options) -> Result<(), CliError> {
    let input = opts.input()?;
    let spec = &input.spec;
    ensure_dir(&opts.out)?;
    let spectrum = eigensolve_chain(&chain_from_coins(spec))?;
    let ws = lift_walk_eigenpairs(spec, &spectrum)?;
    let list = stationary_distributions(&spectrum, spec.nu1(), spec.nu2())?;

    let mut files = Vec::new();
    let mut checks = Vec::new();
    for (m, d) in list.iter().enumerate() {
        let branch = if m == 0 { Branch::Top } else { Branch::Plus };
        let mode = ws
            .mode(m, branch)
            .ok_or_else(|| CliError::Numeric(format!("no walk eigenvector for m = {m}")))?;
        let dev = stationarity_deviation(spec, &mode.vector, d.probs(), STATIONARY_HORIZON)?;
        let mut t = Table::new(["x", "p", "max_deviation"]);
        for (x, (p, e)) in d.probs().iter().zip(&dev).enumerate() {
            t.push(vec![x.to_string(), num(*p), num(*e)]);
        }
        files.push(t.write(&opts.out, &format!("stationary_m{m}.csv"))?);
        checks.push(Check::new(
            format!("stationarity m={m}"),
            dev.iter().copied().fold(0.0, f64::max),
            STATIONARY_TOL,
        ));
    }
    finish("stationary", &opts.out, Some(spec), &files, &checks)
}

pub fn ehrenfest(opts: &Options) -> Result<(), CliError> {
    let big_n = opts
        .big_n
        .ok_or_else(|| CliError::Usage("ehrenfest needs --N INT".into()))?;
    let closed = ehrenfest_time_average(big_n)?;
    ensure_dir(&opts.out)?;

    let exact = if big_n <= EXACT_LIMIT {
        Some(ehrenfest_time_average_exact(big_n)?)
    } else {
        None
    };
    let mut table = Table::new(["x", "p", "p_rational", "arcsine", "arcsine_rational"]);
    for (x, p) in closed.probs().iter().enumerate() {
        let (pr, a, ar) = match &exact {
            Some(e) => {
                let arc = arcsine_component(big_n, x)?;
                (e[x].to_string(), num(rational_to_f64(&arc)), arc.to_string())
            }
            None => (String::new(), String::new(), String::new()),
        };
        table.push(vec![x.to_string(), num(*p), pr, a, ar]);
    }
    let name = format!("ehrenfest_N{big_n}.csv");
    let mut files = vec![table.write(&opts.out, &name)?];
    let plot = opts.out.join("plot_average.py");
    write_atomic(&plot, &plot_script(&[("closed form".into(), name)], &format!("Ehrenfest N = {big_n}")))?;
    files.push(plot);

    let spec = ehrenfest_walk(big_n)?;
    let generic = time_average_szegedy(&eigensolve_chain(&chain_from_coins(&spec))?)?;
    let mut checks = vec![Check::new("closed form vs generic pipeline", closed.sup_distance(&generic), EHRENFEST_TOL)];
    if let Some(e) = &exact {
        let total = e.iter().skip(1).fold(e[0].clone(), |acc, p| acc + p);
        let is_one = total.numer() == total.denom();
        checks.push(Check::new("exact sum differs from one", if is_one { 0.0 } else { 1.0 }, 0.0));
        // pbar(0) - 4^-N = C(2N, N) / 2^(2N+1), which is the arcsine term at x = 0.
        let identity = origin_excess(big_n)? == arcsine_component(big_n, 0)?;
        checks.push(Check::new("origin excess identity fails", if identity { 0.0 } else { 1.0 }, 0.0));
    }
    finish("ehrenfest", &opts.out, Some(&spec), &files, &checks)
}

/// Random instances from `seed` run through every pipeline; one PASS/FAIL line each.
pub fn selftest(opts: &Options) -> Result<(), CliError> {
    let seed = match (opts.seed, &opts.config) {
        (Some(s), _) => s,
        (None, Some(path)) => RunConfig::load(path)?.seed.unwrap_or(0),
        (None, None) => 0,
    };
    let mut sampler = Sampler::new(seed);
    let mut checks = Vec::new();
    for i in 0..10 {
        let spec = sampler.walk(6);
        let n = spec.size().n();
        let spectrum = eigensolve_chain(&chain_from_coins(&spec))?;
        let ws = lift_walk_eigenpairs(&spec, &spectrum)?;
        let theorem = time_average_theorem(&spectrum, spec.nu1(), spec.nu2())?;
        let spectral = time_average_spectral(&ws)?;
        checks.push(Check::new(format!("instance {i} (n={n}) chain residual"), spectrum.max_residual(), SPECTRUM_TOL));
        checks.push(Check::new(format!("instance {i} (n={n}) walk residual"), ws.max_residual(&spec)?, SPECTRUM_TOL));
        checks.push(Check::new(format!("instance {i} (n={n}) theorem vs spectral"), theorem.sup_distance(&spectral), CLOSED_FORM_TOL));
        let mut worst = 0.0f64;
        for (m, d) in stationary_distributions(&spectrum, spec.nu1(), spec.nu2())?.iter().enumerate() {
            let branch = if m == 0 { Branch::Top } else { Branch::Plus };
            if let Some(mode) = ws.mode(m, branch) {
                let dev = stationarity_deviation(&spec, &mode.vector, d.probs(), STATIONARY_HORIZON)?;
                worst = dev.iter().copied().fold(worst, f64::max);
            } else {
                worst = f64::NAN;
            }
        }
        checks.push(Check::new(format!("instance {i} (n={n}) stationarity"), worst, STATIONARY_TOL));
    }
    let spec = sampler.walk(4);
    let theorem = time_average_theorem(&eigensolve_chain(&chain_from_coins(&spec))?, spec.nu1(), spec.nu2())?;
    let cesaro = cesaro_average(&spec, &StateVector::origin(spec.size()), DEFAULT_ALL_STEPS)?;
    checks.push(Check::new("cesaro T=100000 vs theorem", cesaro.sup_distance(&theorem), CESARO_TOL));
    for big_n in 2..=12 {
        let report = verify_identities(big_n);
        checks.push(Check::new(format!("Krawtchouk identities N={big_n}"), report.violations.len() as f64, 0.0));
    }

    let mut failed = 0;
    for c in &checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        failed += usize::from(!c.passed());
        println!("[{tag}] {}: {:e} (tol {:e})", c.name, c.value, c.tol);
    }
    println!("selftest seed {seed}: {} of {} checks passed", checks.len() - failed, checks.len());
    if opts.out.as_os_str().is_empty() {
        if failed == 0 {
            return Ok(());
        }
        return Err(CliError::Numeric(format!("{failed} selftest checks failed")));
    }
    ensure_dir(&opts.out)?;
    finish("selftest", &opts.out, None, &[], &checks)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_check_fails() {
        assert!(Check::new("ok", 1e-12, 1e-10).passed());
        assert!(!Check::new("nan", f64::NAN, 1e-10).passed());
    }

    #[test]
    fn input_sources() {
        assert!(matches!(Options::default().input(), Err(CliError::Usage(_))));
        let opts = Options {
            big_n: Some(4),
            method: Some("spectral".into()),
            ..Options::default()
        };
        let input = opts.input().unwrap();
        assert_eq!(input.spec.size().n(), 3);
        assert!(input.spec.is_szegedy_type());
        assert_eq!(input.method.as_deref(), Some("spectral"));
    }

    #[test]
    fn methods_agree_on_small_walk() {
        let spec = Sampler::new(5).walk(5);
        let t = average_of("theorem", &spec, None).unwrap();
        let s = average_of("spectral", &spec, None).unwrap();
        assert!(t.sup_distance(&s) <= CLOSED_FORM_TOL);
        assert!(matches!(average_of("cesaro", &spec, None), Err(CliError::Usage(_))));
    }
}
