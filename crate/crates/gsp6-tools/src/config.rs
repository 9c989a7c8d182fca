//! Run configuration: command-line flags over environment over config file
//! over defaults.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const ENV_REPORT: &str = "GSP6_REPORT";
pub const ENV_THREADS: &str = "GSP6_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    Quick,
    /// Adds the `p = 3` Hecke enumeration.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Output {
    Json,
    Text,
    Svg,
}

/// Caps on the weights swept by the exhaustive checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    /// `|lambda|` for the dimension identities.
    pub dim_size: i64,
    /// `lambda_1` for the branching comparisons.
    pub branch_top: i64,
    /// `lambda_1` for the highest weight vectors.
    pub vector_top: i64,
    /// Largest entry of the random weights in the grading check.
    pub grading_entry: i64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { dim_size: 8, branch_top: 4, vector_top: 3, grading_entry: 6 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub p: u64,
    pub n: u32,
    pub m: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub trials: u64,
    pub seed: u64,
    pub bounds: Bounds,
    pub profile: Profile,
    pub output: Output,
    pub report: Option<PathBuf>,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            p: 2,
            n: 6,
            m: 1,
            big_n: 8,
            trials: 10_000,
            seed: 0,
            bounds: Bounds::default(),
            profile: Profile::Quick,
            output: Output::Text,
            report: None,
            threads: 1,
        }
    }
}

/// Config file contents; every field optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub p: Option<u64>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    #[serde(rename = "N")]
    pub big_n: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub bounds: Option<Bounds>,
    pub profile: Option<Profile>,
    pub output: Option<Output>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Values given on the command line.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub p: Option<u64>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub big_n: Option<u32>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub profile: Option<Profile>,
    pub output: Option<Output>,
    pub report: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

/// Environment lookups, injectable for tests.
pub trait Env {
    fn var(&self, key: &str) -> Option<String>;
}

pub struct ProcessEnv;

impl Env for ProcessEnv {
    fn var(&self, key: &str) -> Option<String> {
        std::env::var(key).ok().filter(|s| !s.is_empty())
    }
}

impl RunConfig {
    pub fn resolve(file: Option<&ConfigFile>, env: &dyn Env, flags: &Overrides) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(f) = file {
            macro_rules! take {
                ($($field:ident),*) => { $( if let Some(v) = f.$field.clone() { c.$field = v; } )* };
            }
            take!(p, n, m, big_n, trials, seed, bounds, profile, output, threads);
            if f.report.is_some() {
                c.report = f.report.clone();
            }
        }
        if let Some(r) = env.var(ENV_REPORT) {
            c.report = Some(PathBuf::from(r));
        }
        if let Some(t) = env.var(ENV_THREADS) {
            c.threads = t.parse().with_context(|| format!("{ENV_THREADS}={t:?} is not a count"))?;
        }
        macro_rules! flag {
            ($($field:ident),*) => { $( if let Some(v) = flags.$field.clone() { c.$field = v; } )* };
        }
        flag!(p, n, m, big_n, trials, seed, profile, output, threads);
        if flags.report.is_some() {
            c.report = flags.report.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !gsp6_core::zp::is_prime(self.p) {
            bail!("p = {} is not prime", self.p);
        }
        if self.m < 1 {
            bail!("m must be at least 1");
        }
        if self.big_n < 2 || self.big_n > 40 {
            bail!("N = {} outside 2..=40", self.big_n);
        }
        if self.threads == 0 {
            bail!("thread count must be positive");
        }
        Ok(())
    }

    /// The verification suite samples inside `K'_{n,m}` with `n >= 3m + 3`.
    pub fn validate_for_verify(&self) -> Result<()> {
        if self.n < 3 * self.m + 3 {
            bail!("need n >= 3m + 3, got n = {} and m = {}", self.n, self.m);
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    struct MapEnv(HashMap<&'static str, &'static str>);

    impl Env for MapEnv {
        fn var(&self, key: &str) -> Option<String> {
            self.0.get(key).map(|s| s.to_string())
        }
    }

    #[test]
    fn defaults() {
        let c = RunConfig::resolve(None, &MapEnv(HashMap::new()), &Overrides::default()).unwrap();
        assert_eq!((c.p, c.n, c.m, c.big_n, c.trials, c.seed), (2, 6, 1, 8, 10_000, 0));
    }

    #[test]
    fn precedence() {
        let file: ConfigFile = serde_json::from_str(r#"{"seed": 5, "trials": 7, "threads": 3, "report": "a.json"}"#).unwrap();
        let env = MapEnv(HashMap::from([(ENV_THREADS, "4"), (ENV_REPORT, "b.json")]));
        let flags = Overrides { seed: Some(9), ..Default::default() };
        let c = RunConfig::resolve(Some(&file), &env, &flags).unwrap();
        assert_eq!((c.seed, c.trials, c.threads), (9, 7, 4));
        assert_eq!(c.report, Some(PathBuf::from("b.json")));
    }

    #[test]
    fn rejects_bad_values() {
        let env = MapEnv(HashMap::new());
        let bad = |o: Overrides| RunConfig::resolve(None, &env, &o).is_err();
        assert!(bad(Overrides { p: Some(4), ..Default::default() }));
        assert!(bad(Overrides { threads: Some(0), ..Default::default() }));
        let c = RunConfig::resolve(None, &env, &Overrides { n: Some(5), ..Default::default() }).unwrap();
        assert!(c.validate_for_verify().is_err());
        assert!(serde_json::from_str::<ConfigFile>(r#"{"q": 1}"#).is_err());
    }
}
