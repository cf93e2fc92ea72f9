//! Experiment specifications, family grids and `key=value` config files.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::edgestep::{make_family, EdgeStepFunction};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidSpec(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Toggles {
    pub diameter: bool,
    pub clique_greedy: bool,
    pub clique_exact: bool,
    pub paths: bool,
}

impl Default for Toggles {
    fn default() -> Self {
        Self {
            diameter: true,
            clique_greedy: true,
            clique_exact: true,
            paths: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentSpec {
    /// Family descriptors; more than one makes a sweep grid.
    pub families: Vec<String>,
    /// Second family for coupled runs: one tree per replicate is collapsed
    /// against every family in the grid and this one.
    pub family2: Option<String>,
    pub horizons: Vec<u32>,
    pub reps: u32,
    pub seed: u64,
    pub observables: Toggles,
    pub exact_diameter_cap: usize,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub format: Format,
    #[serde(skip)]
    pub jobs: usize,
}

impl ExperimentSpec {
    pub fn new(family: impl Into<String>, horizons: Vec<u32>, reps: u32, seed: u64) -> Self {
        Self {
            families: vec![family.into()],
            family2: None,
            horizons,
            reps,
            seed,
            observables: Toggles::default(),
            exact_diameter_cap: 20_000,
            out: None,
            format: Format::Csv,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.families.is_empty() {
            return Err(Error::EmptyGrid);
        }
        if self.horizons.is_empty() {
            return Err(Error::InvalidSpec("no horizons given".into()));
        }
        if self.horizons[0] == 0 {
            return Err(Error::InvalidSpec("horizons start at 1".into()));
        }
        if self.horizons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSpec("horizons must be strictly increasing".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidSpec("reps must be at least 1".into()));
        }
        for d in self.families.iter().chain(&self.family2) {
            make_family(d)?;
        }
        Ok(())
    }

    /// Parsed functions in output order (grid, then the coupled partner).
    pub fn functions(&self) -> Result<Vec<EdgeStepFunction>> {
        self.families
            .iter()
            .chain(&self.family2)
            .map(|d| make_family(d))
            .collect()
    }

    /// Hex SHA-256 of the measurement-relevant fields, truncated to 16 digits.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("spec serializes");
        let digest = Sha256::digest(&json);
        hex::encode(&digest[..8])
    }
}

/// Expands `{a,b,c}` groups: `log_class:{0.5,1}` gives `log_class:0.5` and
/// `log_class:1`. Several groups expand to their product.
pub fn expand_braces(pattern: &str) -> Result<Vec<String>> {
    let Some(open) = pattern.find('{') else {
        if pattern.contains('}') {
            return Err(Error::InvalidSpec(format!("unbalanced `}}` in `{pattern}`")));
        }
        return Ok(vec![pattern.to_string()]);
    };
    let close = pattern[open..]
        .find('}')
        .map(|i| open + i)
        .ok_or_else(|| Error::InvalidSpec(format!("unclosed `{{` in `{pattern}`")))?;
    let (head, body, tail) = (&pattern[..open], &pattern[open + 1..close], &pattern[close + 1..]);
    if body.contains('{') {
        return Err(Error::InvalidSpec(format!("nested braces in `{pattern}`")));
    }
    let mut out = Vec::new();
    for alt in body.split(',') {
        for rest in expand_braces(tail)? {
            out.push(format!("{head}{}{rest}", alt.trim()));
        }
    }
    Ok(out)
}

/// Parses a list of horizons: `100,1000`, `1e4`, or `1e4..1e6` (decades).
pub fn parse_horizons(s: &str) -> Result<Vec<u32>> {
    let num = |x: &str| -> Result<u32> {
        let x = x.trim();
        let v: f64 = x
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("`{x}` is not a horizon")))?;
        if !(v >= 1.0 && v <= u32::MAX as f64 && v.fract() == 0.0) {
            return Err(Error::InvalidSpec(format!("`{x}` is not a positive integer horizon")));
        }
        Ok(v as u32)
    };
    let mut out = Vec::new();
    for part in s.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let (mut a, b) = (num(a)?, num(b)?);
            while a <= b {
                out.push(a);
                a = a.checked_mul(10).unwrap_or(u32::MAX);
                if a == u32::MAX {
                    break;
                }
            }
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

/// Reads a flat `key=value` file; `#` starts a comment.
pub fn read_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: i + 1,
            reason: "expected `key=value`".into(),
        })?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        map.insert(key, v.trim().to_string());
    }
    Ok(map)
}
