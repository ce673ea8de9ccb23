//! Generator settings from `key=value` files and command-line flags.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use abcdo_core::distspec::PowerLawSpec;
use abcdo_core::sequences::{solve_min_degree, CommunitySizes, DegreeSequence};
use abcdo_core::{DegreeSource, GeneratorParams, SizeSource};

use crate::error::{CliError, Result};
use crate::io;

pub const KEYS: [&str; 13] = [
    "n",
    "outliers",
    "xi",
    "gamma",
    "min_degree",
    "avg_degree",
    "max_degree",
    "beta",
    "min_community",
    "max_community",
    "seed",
    "degree_file",
    "size_file",
];

/// Unresolved settings. Later layers override earlier ones; `min_degree`
/// and `avg_degree` replace each other.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    values: BTreeMap<&'static str, String>,
}

fn known_key(key: &str) -> Option<&'static str> {
    KEYS.iter().copied().find(|&k| k == key)
}

impl Settings {
    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let mut out = Settings::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::parse(path, line_no, "expected `key=value`"));
            };
            let key = key.trim();
            let Some(key) = known_key(key) else {
                return Err(CliError::parse(
                    path,
                    line_no,
                    format!("unknown key `{key}`"),
                ));
            };
            if out.values.contains_key(key) {
                return Err(CliError::parse(
                    path,
                    line_no,
                    format!("`{key}` given twice"),
                ));
            }
            out.values.insert(key, value.trim().to_string());
        }
        if out.values.contains_key("min_degree") && out.values.contains_key("avg_degree") {
            return Err(CliError::invalid(format!(
                "{}: give either min_degree or avg_degree, not both",
                path.display()
            )));
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(path, &io::read_text(path)?)
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> Result<()> {
        let key =
            known_key(key).ok_or_else(|| CliError::invalid(format!("unknown key `{key}`")))?;
        match key {
            "min_degree" => self.values.remove("avg_degree"),
            "avg_degree" => self.values.remove("min_degree"),
            _ => None,
        };
        self.values.insert(key, value.to_string());
        Ok(())
    }

    pub fn overlay(&mut self, other: &Settings) {
        for (k, v) in &other.values {
            self.set(k, v).expect("known key");
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn value<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| CliError::invalid(format!("invalid value `{v}` for {key}"))),
        }
    }

    /// Applies defaults, reads sequence files and solves for the minimum
    /// degree when an average is requested.
    pub fn resolve(&self) -> Result<Config> {
        let degree_file = self.get("degree_file").map(PathBuf::from);
        let size_file = self.get("size_file").map(PathBuf::from);
        let degrees = match &degree_file {
            Some(p) => Some(io::parse_integers(p, &io::read_text(p)?)?),
            None => None,
        };
        let sizes = match &size_file {
            Some(p) => Some(io::parse_integers(p, &io::read_text(p)?)?),
            None => None,
        };
        let default_n = degrees.as_ref().map_or(10_000, Vec::len);
        let gamma = self.value("gamma", 2.5)?;
        let max_degree = self.value("max_degree", 500)?;
        let avg_degree: Option<f64> = match self.get("avg_degree") {
            Some(_) => Some(self.value("avg_degree", 0.0)?),
            None => None,
        };
        let min_degree = match avg_degree {
            Some(avg) if degrees.is_none() => solve_min_degree(gamma, avg, max_degree)?,
            Some(_) => {
                return Err(CliError::invalid(
                    "avg_degree cannot be combined with degree_file",
                ))
            }
            None => self.value("min_degree", 5)?,
        };
        Ok(Config {
            n: self.value("n", default_n)?,
            outliers: self.value("outliers", 500)?,
            xi: self.value("xi", 0.2)?,
            gamma,
            min_degree,
            avg_degree,
            max_degree,
            beta: self.value("beta", 1.5)?,
            min_community: self.value("min_community", 100)?,
            max_community: self.value("max_community", 1000)?,
            seed: self.value("seed", 1)?,
            degree_file,
            size_file,
            degrees,
            sizes,
        })
    }
}

/// Fully resolved generator settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub n: usize,
    pub outliers: usize,
    pub xi: f64,
    pub gamma: f64,
    pub min_degree: u32,
    /// Requested average degree, if `min_degree` was solved from it.
    pub avg_degree: Option<f64>,
    pub max_degree: u32,
    pub beta: f64,
    pub min_community: u32,
    pub max_community: u32,
    pub seed: u64,
    pub degree_file: Option<PathBuf>,
    pub size_file: Option<PathBuf>,
    pub degrees: Option<Vec<u32>>,
    pub sizes: Option<Vec<u32>>,
}

impl Config {
    pub fn params(&self) -> Result<GeneratorParams> {
        let degrees = match &self.degrees {
            Some(d) => DegreeSource::Explicit(DegreeSequence::from_explicit(d.clone())?),
            None => DegreeSource::PowerLaw(PowerLawSpec::new(
                self.gamma,
                self.min_degree,
                self.max_degree,
            )?),
        };
        let sizes = match &self.sizes {
            Some(s) => SizeSource::Explicit(CommunitySizes::from_explicit(s.clone())?),
            None => SizeSource::PowerLaw(PowerLawSpec::new(
                self.beta,
                self.min_community,
                self.max_community,
            )?),
        };
        let params = GeneratorParams {
            n: self.n,
            outliers: self.outliers,
            xi: self.xi,
            degrees,
            sizes,
            seed: self.seed,
        };
        params.validate()?;
        Ok(params)
    }

    /// `key=value` record of every resolved value; loading it back gives
    /// the same configuration.
    pub fn echo(&self) -> String {
        let mut out = String::from("# abcdo params v1\n");
        let mut line = |k: &str, v: &dyn std::fmt::Display| {
            writeln!(out, "{k}={v}").expect("string write");
        };
        line("n", &self.n);
        line("outliers", &self.outliers);
        line("xi", &self.xi);
        match &self.degree_file {
            Some(p) => line("degree_file", &p.display()),
            None => {
                line("gamma", &self.gamma);
                line("min_degree", &self.min_degree);
                line("max_degree", &self.max_degree);
            }
        }
        match &self.size_file {
            Some(p) => line("size_file", &p.display()),
            None => {
                line("beta", &self.beta);
                line("min_community", &self.min_community);
                line("max_community", &self.max_community);
            }
        }
        line("seed", &self.seed);
        if let Some(avg) = self.avg_degree {
            writeln!(out, "# min_degree solved from avg_degree={avg}").expect("string write");
        }
        out
    }
}
