//! Run configuration: everything a command depends on besides its
//! arguments and the cache contents.
//!
//! Config files are TOML (or JSON, by extension). Every field is optional:
//!
//! ```toml
//! format = "human"            # or "structured"
//! budget = 10000000           # evaluator step budget
//! numeral_threshold = 64      # unary numerals up to here, efficient above
//! cache = "cache/"            # memo directory; absent means no cache
//!
//! [signs]                     # sign policy: notation = "rosser" | "neg"
//! default = "rosser"
//! "w+1" = "neg"
//!
//! [grid]
//! stages = ["0", "1", "w"]    # verification stages
//! bound = "w"                 # sample codes up to q̃(bound)
//! samples = 72                # random short codes in the sample
//! seed = 1
//! diagonal = "stream"         # or "formula"
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ordinals::parse_ordinal;
use serde::{Deserialize, Serialize};
use syntax::DEFAULT_NUMERAL_THRESHOLD;
use tower::verify::{DiagonalLevel, Grid};
use tower::SignPolicy;

use crate::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Human,
    Structured,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Diagonal {
    #[default]
    Stream,
    Formula,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub stages: Vec<String>,
    pub bound: Option<String>,
    pub samples: usize,
    pub seed: u64,
    pub diagonal: Diagonal,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = Grid::new(Grid::default_stages());
        GridConfig {
            stages: g.stages.iter().map(|s| s.to_string()).collect(),
            bound: None,
            samples: g.random_samples,
            seed: g.seed,
            diagonal: Diagonal::Stream,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub format: Format,
    pub budget: u64,
    pub numeral_threshold: u64,
    pub cache: Option<PathBuf>,
    /// Notation (or `default`) to sign.
    pub signs: BTreeMap<String, String>,
    pub grid: GridConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            format: Format::Human,
            budget: 10_000_000,
            numeral_threshold: DEFAULT_NUMERAL_THRESHOLD,
            cache: None,
            signs: BTreeMap::new(),
            grid: GridConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let parsed = if path.extension().is_some_and(|e| e == "json") {
            serde_json::from_str(&text).map_err(|e| e.to_string())
        } else {
            toml::from_str(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| CliError::Parse(format!("config {}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// The sign policy; `default` is applied before the exceptions.
    pub fn policy(&self) -> Result<SignPolicy, CliError> {
        let mut policy = SignPolicy::new();
        let bad = |e: tower::PolicyError| CliError::Parse(e.to_string());
        if let Some(d) = self.signs.get("default") {
            policy.apply(&format!("default={d}")).map_err(bad)?;
        }
        for (k, v) in self.signs.iter().filter(|(k, _)| *k != "default") {
            policy.apply(&format!("{k}={v}")).map_err(bad)?;
        }
        Ok(policy)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let notation = |s: &str| parse_ordinal(s).map_err(|e| CliError::Parse(format!("grid notation `{s}`: {e}")));
        let mut grid = Grid::new(self.grid.stages.iter().map(|s| notation(s)).collect::<Result<_, _>>()?);
        grid.bound = self.grid.bound.as_deref().map(notation).transpose()?;
        grid.random_samples = self.grid.samples;
        grid.seed = self.grid.seed;
        grid.diagonal = match self.grid.diagonal {
            Diagonal::Stream => DiagonalLevel::Stream,
            Diagonal::Formula => DiagonalLevel::Formula,
        };
        Ok(grid)
    }
}
