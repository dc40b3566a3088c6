use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::textfmt::read_to_string;

/// A vertex of the hive triangle chosen relative to `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Probe {
    /// `(⌊n/2⌋, ⌊n/2⌋)`, on the ν-edge.
    Midpoint,
    /// `(⌊n/3⌋, ⌊2n/3⌋)`.
    Centroid,
    /// `(1, n−1)`.
    Corner,
    /// `(⌊a·n⌋, ⌊b·n⌋)`.
    Fraction(f64, f64),
}

impl Probe {
    pub fn resolve(&self, n: usize) -> (usize, usize) {
        match *self {
            Probe::Midpoint => (n / 2, n / 2),
            Probe::Centroid => (n / 3, 2 * n / 3),
            Probe::Corner => (1, n.saturating_sub(1)),
            Probe::Fraction(a, b) => ((a * n as f64).floor() as usize, (b * n as f64).floor() as usize),
        }
    }
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Midpoint => write!(f, "midpoint"),
            Probe::Centroid => write!(f, "centroid"),
            Probe::Corner => write!(f, "corner"),
            Probe::Fraction(a, b) => write!(f, "{a}:{b}"),
        }
    }
}

impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" => Ok(Probe::Midpoint),
            "centroid" => Ok(Probe::Centroid),
            "corner" => Ok(Probe::Corner),
            _ => {
                let bad = || Error::Precondition(format!("unknown probe {s:?}"));
                let (a, b) = s.split_once(':').ok_or_else(bad)?;
                let a: f64 = a.parse().map_err(|_| bad())?;
                let b: f64 = b.parse().map_err(|_| bad())?;
                if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a > b {
                    return Err(Error::Precondition(format!(
                        "probe fractions need 0 ≤ a ≤ b ≤ 1 (got {s})"
                    )));
                }
                Ok(Probe::Fraction(a, b))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(TableFormat::Csv),
            "json" => Ok(TableFormat::Json),
            _ => Err(Error::Precondition(format!("unknown table format {s:?}"))),
        }
    }
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TableFormat::Csv => "csv",
            TableFormat::Json => "json",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub ns: Vec<usize>,
    pub trials: usize,
    pub sigma_lambda: f64,
    pub sigma_mu: f64,
    pub seed: u64,
    pub probes: Vec<Probe>,
    pub output: Option<PathBuf>,
    pub format: TableFormat,
    pub bootstrap: usize,
    /// Worker cap; `None` defers to `HIVELAB_WORKERS`, then to rayon.
    pub workers: Option<usize>,
    /// Boundary bookkeeping slack is `boundary_tol · n · scale`.
    pub boundary_tol: f64,
    /// A run fails once more than this fraction of its trials at any `n` fail.
    pub max_failure_fraction: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            ns: vec![8, 16, 32],
            trials: 200,
            sigma_lambda: 1.0,
            sigma_mu: 1.0,
            seed: 1,
            probes: vec![Probe::Midpoint, Probe::Centroid, Probe::Corner],
            output: None,
            format: TableFormat::Csv,
            bootstrap: 1000,
            workers: None,
            boundary_tol: 1e-7,
            max_failure_fraction: 0.01,
        }
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Precondition(format!("bad entry {s:?} for {key}")))
        })
        .collect()
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Precondition(format!("bad value {value:?} for {key}")))
}

impl ExperimentConfig {
    /// Sets one `key=value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "n" => self.ns = list(key, value)?,
            "trials" => self.trials = scalar(key, value)?,
            "sigma_lambda" => self.sigma_lambda = scalar(key, value)?,
            "sigma_mu" => self.sigma_mu = scalar(key, value)?,
            "seed" => self.seed = scalar(key, value)?,
            "probes" => {
                self.probes = value
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(Probe::from_str)
                    .collect::<Result<_>>()?
            }
            "output" => self.output = Some(PathBuf::from(value)),
            "format" => self.format = value.parse()?,
            "bootstrap" => self.bootstrap = scalar(key, value)?,
            "workers" => self.workers = Some(scalar(key, value)?),
            "boundary_tol" => self.boundary_tol = scalar(key, value)?,
            "max_failure_fraction" => self.max_failure_fraction = scalar(key, value)?,
            other => return Err(Error::Precondition(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key=value` string, as given on the command line.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::Precondition(format!("expected key=value, got {kv:?}")))?;
        self.set(k, v)
    }

    /// Defaults overridden by a flat `key=value` file; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = ExperimentConfig::default();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(k + 1, format!("expected key=value, got {line:?}")))?;
            cfg.set(key, value).map_err(|e| Error::parse(k + 1, e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Precondition(m));
        if self.ns.is_empty() {
            return fail("no values of n".into());
        }
        if self.trials < 2 {
            return fail(format!("need at least two trials (got {})", self.trials));
        }
        for (name, s) in [("sigma_lambda", self.sigma_lambda), ("sigma_mu", self.sigma_mu)] {
            if !(s > 0.0 && s.is_finite()) {
                return fail(format!("{name} must be positive (got {s})"));
            }
        }
        if self.probes.is_empty() {
            return fail("no probes".into());
        }
        if self.bootstrap < 2 {
            return fail(format!("need at least two bootstrap resamples (got {})", self.bootstrap));
        }
        if self.workers == Some(0) {
            return fail("workers must be positive".into());
        }
        if self.boundary_tol.is_nan() || self.boundary_tol <= 0.0 || !(0.0..1.0).contains(&self.max_failure_fraction) {
            return fail("tolerances out of range".into());
        }
        for &n in &self.ns {
            if n < 2 {
                return fail(format!("n must be at least 2 (got {n})"));
            }
            for p in &self.probes {
                let (i, j) = p.resolve(n);
                if i > j || j > n || (i, j) == (0, 0) {
                    return fail(format!("probe {p} resolves to ({i},{j}), not a live vertex at n = {n}"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_override() {
        let text = "# run\nn = 4, 8\ntrials=10\nprobes=centroid,0.25:0.75\nseed=9 # trailing\n";
        let mut cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.ns, vec![4, 8]);
        assert_eq!(cfg.trials, 10);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.probes, vec![Probe::Centroid, Probe::Fraction(0.25, 0.75)]);
        assert_eq!(cfg.sigma_mu, 1.0);
        cfg.apply_override("trials=20").unwrap();
        assert_eq!(cfg.trials, 20);
        assert!(cfg.apply_override("trials").is_err());
        assert!(cfg.apply_override("colour=red").is_err());
    }

    #[test]
    fn probe_positions() {
        assert_eq!(Probe::Midpoint.resolve(9), (4, 4));
        assert_eq!(Probe::Centroid.resolve(9), (3, 6));
        assert_eq!(Probe::Corner.resolve(9), (1, 8));
        assert_eq!(Probe::Fraction(0.25, 0.5).resolve(8), (2, 4));
        for p in ["midpoint", "centroid", "corner", "0.5:0.75"] {
            assert_eq!(Probe::from_str(p).unwrap().to_string(), p);
        }
        assert!(Probe::from_str("0.8:0.2").is_err());
    }

    #[test]
    fn invalid_configs() {
        for text in [
            "trials=1",
            "sigma_lambda=0",
            "sigma_mu=-1",
            "n=1",
            "probes=",
            "bootstrap=1",
            "nonsense",
            "format=xml",
            "probes=0:0",
        ] {
            assert!(ExperimentConfig::parse(text).is_err(), "{text}");
        }
        let err = ExperimentConfig::parse("trials=5\nsigma=2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }
}
