//! Experiment configuration from flat `key=value` text.
//!
//! ```text
//! # K32 in 4096 vertices
//! family=clique
//! n=4096
//! t=32
//! epsilon=0.0666666667
//! trials=300
//! seed=1
//! mbar_star=64
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use edgecount::driver::Tuning;

use crate::error::{config_err, BenchResult};
use crate::families::{Family, DEFAULT_STAR_DEGREES};

/// Keys accepted in config files and their CLI equivalents.
pub const KEYS: [&str; 20] = [
    "family", "n", "t", "m", "degrees", "n_k", "n_ell", "n_h", "lb_epsilon", "which", "graph",
    "epsilon", "trials", "seed", "mbar_star", "budget", "out", "profile", "timing", "budgets",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Full-size sample and guard constants.
    Standard,
    /// Reduced constants that make single runs finish on a desk machine.
    Desk,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Standard => "standard",
            Profile::Desk => "desk",
        }
    }

    pub fn tuning(self) -> Tuning {
        match self {
            Profile::Standard => Tuning::standard(),
            Profile::Desk => Tuning::desk(),
        }
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "standard" => Ok(Profile::Standard),
            "desk" => Ok(Profile::Desk),
            _ => Err(format!("unknown profile {s:?} (standard, desk)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub family: Family,
    pub n: usize,
    pub epsilon: f64,
    pub trials: usize,
    pub master_seed: u64,
    /// Overrides the guard's Case-0 cutoff; flagged in every record.
    pub mbar_star: Option<f64>,
    pub budget: Option<u64>,
    pub out: Option<PathBuf>,
    pub profile: Profile,
    /// Adds wall time to the records, which makes output nondeterministic.
    pub timing: bool,
}

/// Parses `key=value` lines. Blank lines and `#` comments are skipped.
pub fn parse_pairs(text: &str) -> BenchResult<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| config_err(format!("line {}: expected key=value", i + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(config_err(format!("line {}: unknown key {k:?}", i + 1)));
        }
        out.insert(k.to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn get<T: FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> BenchResult<Option<T>> {
    pairs
        .get(key)
        .map(|v| {
            v.parse::<T>()
                .map_err(|_| config_err(format!("{key}: cannot parse {v:?}")))
        })
        .transpose()
}

fn need<T: FromStr>(pairs: &BTreeMap<String, String>, key: &str) -> BenchResult<T> {
    get(pairs, key)?.ok_or_else(|| config_err(format!("missing {key}")))
}

/// Reads an `epsilon`-style value, accepting fractions such as `1/15`.
pub fn parse_fraction(v: &str) -> Option<f64> {
    match v.split_once('/') {
        Some((a, b)) => Some(a.trim().parse::<f64>().ok()? / b.trim().parse::<f64>().ok()?),
        None => v.trim().parse().ok(),
    }
}

fn get_fraction(pairs: &BTreeMap<String, String>, key: &str) -> BenchResult<Option<f64>> {
    pairs
        .get(key)
        .map(|v| parse_fraction(v).ok_or_else(|| config_err(format!("{key}: cannot parse {v:?}"))))
        .transpose()
}

pub fn parse_list<T: FromStr>(key: &str, v: &str) -> BenchResult<Vec<T>> {
    v.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| config_err(format!("{key}: cannot parse {s:?}")))
        })
        .collect()
}

/// Family and vertex count from the family keys.
pub fn family_from_pairs(pairs: &BTreeMap<String, String>) -> BenchResult<(Family, usize)> {
    let name: String = need(pairs, "family")?;
    let family = match name.as_str() {
        "clique" => Family::Clique { t: need(pairs, "t")? },
        "gnm" => Family::Gnm { m: need(pairs, "m")? },
        "star_forest" => Family::StarForest {
            degrees: match pairs.get("degrees") {
                Some(v) => parse_list("degrees", v)?,
                None => DEFAULT_STAR_DEGREES.to_vec(),
            },
        },
        "clique_biclique" => Family::CliqueBiclique {
            n_k: need(pairs, "n_k")?,
            n_ell: need(pairs, "n_ell")?,
            n_h: need(pairs, "n_h")?,
        },
        "hard_pair" => Family::HardPair {
            n_k: need(pairs, "n_k")?,
            epsilon: get_fraction(pairs, "lb_epsilon")?.unwrap_or(1.0 / 11.0),
            second: match get::<u8>(pairs, "which")?.unwrap_or(1) {
                1 => false,
                2 => true,
                w => return Err(config_err(format!("which must be 1 or 2, got {w}"))),
            },
        },
        "file" => Family::File {
            path: need::<String>(pairs, "graph")?.into(),
        },
        other => return Err(config_err(format!("unknown family {other:?}"))),
    };
    let n = match (&family, get::<usize>(pairs, "n")?) {
        (_, Some(n)) => n,
        (Family::File { .. }, None) => 0,
        (_, None) => return Err(config_err("missing n")),
    };
    Ok((family, n))
}

impl ExperimentConfig {
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> BenchResult<Self> {
        let (family, n) = family_from_pairs(pairs)?;
        let cfg = ExperimentConfig {
            family,
            n,
            epsilon: get_fraction(pairs, "epsilon")?.unwrap_or(1.0 / 15.0),
            trials: get(pairs, "trials")?.unwrap_or(1),
            master_seed: get(pairs, "seed")?.unwrap_or(0),
            mbar_star: get(pairs, "mbar_star")?,
            budget: get(pairs, "budget")?,
            out: get::<String>(pairs, "out")?.map(PathBuf::from),
            profile: get(pairs, "profile")?.unwrap_or(Profile::Standard),
            timing: get(pairs, "timing")?.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> BenchResult<()> {
        if self.trials < 1 {
            return Err(config_err("trials must be at least 1"));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(config_err(format!("epsilon must lie in (0, 1], got {}", self.epsilon)));
        }
        if let Some(x) = self.mbar_star {
            if !(x >= 1.0) {
                return Err(config_err(format!("mbar_star must be at least 1, got {x}")));
            }
        }
        Ok(())
    }

    /// Driver constants for this run, including the Case-0 override.
    pub fn tuning(&self) -> BenchResult<Tuning> {
        let base = self.profile.tuning();
        Ok(match self.mbar_star {
            Some(x) => base.with_m_bar_star(x)?,
            None => base,
        })
    }

    /// Departures from the standard constants, for the deviation column.
    pub fn deviation(&self) -> String {
        let mut parts = Vec::new();
        if self.profile != Profile::Standard {
            parts.push(format!("profile={}", self.profile.name()));
        }
        if let Some(x) = self.mbar_star {
            parts.push(format!("mbar_star={x}"));
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join(";")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_config_file() {
        let text = "# comment\nfamily=clique\nn=4096\nt=32\nepsilon=1/15\ntrials=3\nmbar_star=64\n\nprofile=desk\n";
        let cfg = ExperimentConfig::from_pairs(&parse_pairs(text).unwrap()).unwrap();
        assert_eq!(cfg.family, Family::Clique { t: 32 });
        assert_eq!((cfg.n, cfg.trials), (4096, 3));
        assert!((cfg.epsilon - 1.0 / 15.0).abs() < 1e-15);
        assert_eq!(cfg.deviation(), "profile=desk;mbar_star=64");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_pairs("family clique").is_err());
        assert!(parse_pairs("colour=red").is_err());
        let bad = |t: &str| ExperimentConfig::from_pairs(&parse_pairs(t).unwrap()).is_err();
        assert!(bad("family=clique\nn=10"));
        assert!(bad("family=clique\nn=10\nt=3\ntrials=0"));
        assert!(bad("family=clique\nn=10\nt=3\nepsilon=0"));
        assert!(bad("family=clique\nn=10\nt=3\nepsilon=1.5"));
        assert!(bad("family=cycle\nn=10"));
        assert!(bad("family=hard_pair\nn=64\nn_k=8\nwhich=3"));
    }

    #[test]
    fn star_forest_defaults() {
        let (f, _) = family_from_pairs(&parse_pairs("family=star_forest\nn=4096").unwrap()).unwrap();
        assert_eq!(f, Family::StarForest { degrees: DEFAULT_STAR_DEGREES.to_vec() });
        let (f, _) = family_from_pairs(&parse_pairs("family=star_forest\nn=9\ndegrees=2, 3").unwrap()).unwrap();
        assert_eq!(f, Family::StarForest { degrees: vec![2, 3] });
    }
}
