use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use hivelab::determinantal::{expected_gap, gap_covariance, gap_variance, mc_gap_moments, RELIABLE_N};
use hivelab::harness::{
    decay_verdict, render, run_concentration, run_equivalence_suite, worker_pool,
    EquivalenceOptions, ExperimentConfig, Probe,
};
use hivelab::octahedron::{
    build_hexagon, for_each_tiling, oct, tiling_form, BorderSign, DEFAULT_TILING_BUDGET,
};
use hivelab::rmt::{
    eigvalsh, minor_process, rigidity_report, sample_gue, RngStream, DEFAULT_RIGIDITY_CONSTANT,
};
use hivelab::spectra::SpecTuple;
use hivelab::textfmt::{
    fmt_f64, parse_spectrum, read_gt, read_square, read_to_string, to_text, write_string, Record,
};

#[derive(Parser)]
#[command(name = "hivelab", version, about = "Hives, GT patterns and the octahedron recurrence")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the concentration experiment and write its summary table.
    Concentration {
        #[arg(long)]
        config: Option<PathBuf>,
        /// `key=value` overrides applied after the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Also require var/n⁴ at the largest n to fall below this multiple
        /// of its value at the smallest n, at the centroid probe.
        #[arg(long)]
        decay_threshold: Option<f64>,
    },
    /// Run the oracle-equivalence battery.
    Equivalence {
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// Use the wrong border-triangle sign; the battery should fail.
        #[arg(long)]
        flip_border_sign: bool,
    },
    /// Map a pair of GT patterns to an augmented hive.
    Oct {
        g1: PathBuf,
        g2: PathBuf,
        #[arg(long)]
        gap: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// List the tilings of the excavation hexagon at v and their weights.
    Tilings {
        #[arg(long)]
        n: usize,
        /// Interior point `i,j`.
        #[arg(long, value_parser = parse_point)]
        v: (usize, usize),
        /// A square-function record to evaluate the weights on.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_TILING_BUDGET)]
        budget: usize,
    },
    /// Write minor-process GT patterns of GUE samples.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Exact gap moments for a spectrum file, optionally with Monte Carlo.
    Moments {
        spectrum: PathBuf,
        #[arg(long)]
        mc: Option<usize>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Rigidity of GUE eigenvalues about their classical locations.
    Rigidity {
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1.0)]
        sigma: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RIGIDITY_CONSTANT)]
        constant: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn parse_point(s: &str) -> std::result::Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    let a = a.trim().parse().map_err(|_| format!("bad coordinate {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad coordinate {b:?}"))?;
    Ok((a, b))
}

fn write_out(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => write_string(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn concentration(
    config: Option<PathBuf>,
    overrides: Vec<String>,
    decay_threshold: Option<f64>,
) -> Result<bool> {
    let mut cfg = match config {
        Some(p) => ExperimentConfig::load(&p)?,
        None => ExperimentConfig::default(),
    };
    for kv in &overrides {
        cfg.apply_override(kv)?;
    }
    cfg.validate()?;
    let out = run_concentration(&cfg)?;
    for f in &out.failures {
        eprintln!("trial {} at n = {} failed: {}", f.trial, f.n, f.message);
    }
    write_out(cfg.output.as_deref(), &render(&out.rows, cfg.format))?;
    let mut passed = out.passed;
    if !passed {
        eprintln!("more than {} of trials failed", cfg.max_failure_fraction);
    }
    if let Some(threshold) = decay_threshold {
        let lo = *cfg.ns.iter().min().expect("validated");
        let hi = *cfg.ns.iter().max().expect("validated");
        let d = decay_verdict(&out.rows, Probe::Centroid, lo, hi, threshold)?;
        eprintln!(
            "decay {}: n={} → n={} ratio {:.4} (threshold {threshold}), intervals {}",
            if d.passed { "PASS" } else { "FAIL" },
            lo,
            hi,
            d.ratio,
            if d.intervals_disjoint { "disjoint" } else { "overlap" }
        );
        passed &= d.passed;
    }
    Ok(passed)
}

fn tilings(n: usize, v: (usize, usize), input: Option<PathBuf>, budget: usize) -> Result<bool> {
    let hex = build_hexagon(n, v)?;
    let k = input.map(|p| read_square(&p)).transpose()?;
    if let Some(k) = &k {
        if k.n() != n {
            bail!("input square has n = {}, expected {n}", k.n());
        }
    }
    let mut out = String::new();
    let mut best = f64::NEG_INFINITY;
    let count = for_each_tiling(&hex, budget, |t| {
        let form = tiling_form(t, BorderSign::default());
        let _ = write!(out, "tiling lozenges={} triangles={}", t.lozenges.len(), t.triangles.len());
        if let Some(k) = &k {
            let w = form.evaluate(k);
            best = best.max(w);
            let _ = write!(out, " weight={}", fmt_f64(w));
        }
        let terms: Vec<String> = form
            .terms()
            .into_iter()
            .map(|((i, j), c)| format!("{c}/3*k({i},{j})"))
            .collect();
        let _ = writeln!(out, " form={}", terms.join(" + "));
    })?;
    println!("n={n} v=({},{}) tilings={count}", v.0, v.1);
    print!("{out}");
    if k.is_some() {
        println!("max={}", fmt_f64(best));
    }
    Ok(true)
}

fn sample(n: usize, trials: usize, sigma: f64, seed: u64, output: Option<PathBuf>) -> Result<bool> {
    let records = (0..trials)
        .map(|t| {
            let mut rng = RngStream::new(seed, t as u64);
            let a = sample_gue(n, sigma, &mut rng)?;
            Ok(Record::Gt(minor_process(&a)?))
        })
        .collect::<Result<Vec<_>>>()?;
    write_out(output.as_deref(), &to_text(&records))?;
    Ok(true)
}

fn moments(spectrum: PathBuf, mc: Option<usize>, seed: u64, output: Option<PathBuf>) -> Result<bool> {
    let text = read_to_string(&spectrum)?;
    let lambda = parse_spectrum(&text).with_context(|| spectrum.display().to_string())?;
    let n = lambda.len();
    if n > RELIABLE_N {
        eprintln!("warning: n = {n} exceeds {RELIABLE_N}; barycentric weights are ill-conditioned");
    }
    let sim = mc.map(|trials| mc_gap_moments(&lambda, trials, seed)).transpose()?;
    let mut out = String::from(if sim.is_some() {
        "i,j,exact,mc,mc_se\n"
    } else {
        "i,j,exact\n"
    });
    let mut row = |i: usize, j: Option<usize>, exact: f64, m: Option<(f64, f64)>| {
        let j = j.map_or(String::new(), |j| j.to_string());
        let _ = write!(out, "{i},{j},{}", fmt_f64(exact));
        if let Some((v, se)) = m {
            let _ = write!(out, ",{},{}", fmt_f64(v), fmt_f64(se));
        }
        out.push('\n');
    };
    for i in 1..n {
        let m = sim.as_ref().map(|s| (s.means[i - 1], s.mean_se[i - 1]));
        row(i, None, expected_gap(&lambda, i)?, m);
    }
    for i in 1..n {
        for j in i..n {
            let exact = if i == j {
                gap_variance(&lambda, i)?
            } else {
                gap_covariance(&lambda, i, j)?
            };
            let m = sim.as_ref().map(|s| (s.cov[i - 1][j - 1], s.cov_se[i - 1][j - 1]));
            row(i, Some(j), exact, m);
        }
    }
    write_out(output.as_deref(), &out)?;
    Ok(true)
}

fn rigidity(
    n: usize,
    trials: usize,
    sigma: f64,
    seed: u64,
    constant: f64,
    output: Option<PathBuf>,
) -> Result<bool> {
    use rayon::prelude::*;
    let pool = worker_pool(None)?;
    let samples: Vec<SpecTuple> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let a = sample_gue(n, sigma, &mut RngStream::new(seed, t as u64))?;
                Ok(eigvalsh(&a.scaled(1.0 / (n as f64).sqrt()))?)
            })
            .collect::<Result<_>>()
    })?;
    let report = rigidity_report(&samples, sigma, constant)?;
    let mut out = String::from("i,gamma_i,max_norm_dev,flag\n");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.i,
            fmt_f64(r.gamma_i),
            fmt_f64(r.max_norm_dev),
            r.flag
        );
    }
    write_out(output.as_deref(), &out)?;
    let flagged = report.flagged();
    if !flagged.is_empty() {
        eprintln!("{} indices exceed {constant}; worst {}", flagged.len(), report.worst());
    }
    Ok(flagged.is_empty())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Concentration {
            config,
            overrides,
            decay_threshold,
        } => concentration(config, overrides, decay_threshold),
        Command::Equivalence {
            max_n,
            trials,
            seed,
            flip_border_sign,
        } => {
            let mut o = EquivalenceOptions::new(max_n, trials, seed);
            if flip_border_sign {
                o.border_sign = BorderSign::AMinusB;
            }
            let report = run_equivalence_suite(&o)?;
            print!("{}", report.render());
            Ok(report.passed())
        }
        Command::Oct { g1, g2, gap, output } => {
            let aug = oct(&read_gt(&g1)?, &read_gt(&g2)?, gap)?;
            write_out(
                output.as_deref(),
                &to_text(&[Record::Hive(aug.hive), Record::Gt(aug.pattern)]),
            )?;
            Ok(true)
        }
        Command::Tilings { n, v, input, budget } => tilings(n, v, input, budget),
        Command::Sample {
            n,
            trials,
            sigma,
            seed,
            output,
        } => sample(n, trials, sigma, seed, output),
        Command::Moments {
            spectrum,
            mc,
            seed,
            output,
        } => moments(spectrum, mc, seed, output),
        Command::Rigidity {
            n,
            trials,
            sigma,
            seed,
            constant,
            output,
        } => rigidity(n, trials, sigma, seed, constant, output),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
