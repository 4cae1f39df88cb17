use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use opcalc::gridrep::{GridSpec, DEFAULT_BJ_ORDER};
use opcalc::phasespace::StateVector;
use opcalc::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub half_width: f64,
    pub hbar: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { n: 128, half_width: 8.0, hbar: 1.0 }
    }
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec> {
        GridSpec::new(self.n, self.half_width, self.hbar)
    }
}

/// A Gaussian `exp(-(q-q0)²/2σ² + i p0 q/ħ)`, written `q0,p0,sigma` on the
/// command line.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub q0: f64,
    pub p0: f64,
    pub sigma: f64,
}

impl StateSpec {
    pub fn build(&self, grid: GridSpec) -> Result<StateVector> {
        StateVector::gaussian(grid, self.q0, self.p0, self.sigma)
    }
}

impl FromStr for StateSpec {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Invalid(format!("state '{s}' is not 'q0,p0,sigma'"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let v: Vec<f64> = parts.iter().map(|x| x.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        if !v.iter().all(|x| x.is_finite()) || v[2] <= 0.0 {
            return Err(Error::Invalid(format!("state '{s}' needs finite values and sigma > 0")));
        }
        Ok(Self { q0: v[0], p0: v[1], sigma: v[2] })
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.q0, self.p0, self.sigma)
    }
}

/// Everything a run depends on. Flags override values loaded with
/// `--config`, and `--save-config` writes the merged result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridConfig,
    /// `bj`, `weyl`, `tau:<rational>`, or the command-specific `both`/`diff`.
    pub rule: Option<String>,
    pub symbol: Option<String>,
    pub pre: StateSpec,
    pub post: StateSpec,
    /// Gauss–Legendre nodes for the Born–Jordan τ-average.
    pub order: usize,
    pub seed: u64,
    pub horizon: f64,
    pub samples: usize,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub threads: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: GridConfig::default(),
            rule: None,
            symbol: None,
            pre: StateSpec { q0: 0.0, p0: 0.0, sigma: 0.7 },
            post: StateSpec { q0: -0.5, p0: 0.5, sigma: 0.7 },
            order: DEFAULT_BJ_ORDER,
            seed: 0,
            horizon: 10.0,
            samples: 101,
            out: None,
            format: None,
            threads: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Ok(serde_json::from_reader(std::io::BufReader::new(file))?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn state_round_trip() {
        let s: StateSpec = "0.5, -1, 0.7".parse().unwrap();
        assert_eq!(s, StateSpec { q0: 0.5, p0: -1.0, sigma: 0.7 });
        assert_eq!(s.to_string().parse::<StateSpec>().unwrap(), s);
        assert!("1,2".parse::<StateSpec>().is_err());
        assert!("1,2,0".parse::<StateSpec>().is_err());
        assert!("1,x,1".parse::<StateSpec>().is_err());
    }

    #[test]
    fn config_round_trip() {
        let c =
            RunConfig { symbol: Some("p^2*q^2".into()), format: Some(Format::Csv), ..RunConfig::default() };
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<RunConfig>(&text).unwrap(), c);
        let partial: RunConfig = serde_json::from_str(r#"{"seed": 7}"#).unwrap();
        assert_eq!(partial.seed, 7);
        assert_eq!(partial.grid, GridConfig::default());
        assert!(serde_json::from_str::<RunConfig>(r#"{"sed": 7}"#).is_err());
    }
}
