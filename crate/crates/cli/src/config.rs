//! Run configuration: command-line flags over a TOML config file over defaults.

use clap::ValueEnum;
use qlorentz::scalar::GaussianRational;
use qlorentz::Error;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable naming the quantum CG cache directory.
pub const CACHE_ENV: &str = "QLORENTZ_CACHE_DIR";

pub const DEFAULT_ORDER: usize = 6;
pub const DEFAULT_PRECISION: usize = 60;
pub const MIN_PRECISION: usize = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// The parameter p: an exact number or a formal variable.
#[derive(Clone, Debug, PartialEq)]
pub enum PValue {
    Number(GaussianRational),
    Symbolic,
}

impl PValue {
    pub fn parse(text: &str) -> Result<Self, Error> {
        if text.trim().eq_ignore_ascii_case("symbolic") {
            return Ok(PValue::Symbolic);
        }
        text.parse()
            .map(PValue::Number)
            .map_err(|_| Error::Parse(format!("p must be a number such as 3, 5/2, 1/2+i, or 'symbolic'; got '{text}'")))
    }
}

impl std::fmt::Display for PValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PValue::Number(p) => write!(f, "{p}"),
            PValue::Symbolic => write!(f, "symbolic"),
        }
    }
}

/// Keys accepted in a config file. Every key is optional.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub order: Option<usize>,
    pub precision: Option<usize>,
    pub cutoff: Option<u32>,
    pub format: Option<Format>,
    pub braid: Option<String>,
    pub knot: Option<String>,
    pub m: Option<i64>,
    pub p: Option<String>,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, Error> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Invalid(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| Error::Parse(format!("config {}: {e}", path.display())))
    }
}

/// Values given on the command line; same keys as `FileConfig`.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub order: Option<usize>,
    pub precision: Option<usize>,
    pub cutoff: Option<u32>,
    pub format: Option<Format>,
    pub braid: Option<String>,
    pub knot: Option<String>,
    pub m: Option<i64>,
    pub p: Option<String>,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub order: usize,
    pub precision: usize,
    /// Spin cutoff of the braid sums; defaults to the order.
    pub cutoff: u32,
    pub format: Format,
    pub braid: Option<String>,
    pub knot: Option<String>,
    pub m: i64,
    pub p: Option<PValue>,
    pub workers: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Flags win over the environment (cache directory only), which wins
    /// over the file, which wins over the defaults.
    pub fn resolve(flags: Overrides, file: FileConfig, env_cache_dir: Option<PathBuf>) -> Result<Self, Error> {
        let order = flags.order.or(file.order).unwrap_or(DEFAULT_ORDER);
        let cfg = RunConfig {
            order,
            precision: flags.precision.or(file.precision).unwrap_or(DEFAULT_PRECISION),
            cutoff: flags.cutoff.or(file.cutoff).unwrap_or(order as u32),
            format: flags.format.or(file.format).unwrap_or(Format::Pretty),
            braid: flags.braid.or(file.braid),
            knot: flags.knot.or(file.knot),
            m: flags.m.or(file.m).unwrap_or(0),
            p: flags.p.or(file.p).map(|t| PValue::parse(&t)).transpose()?,
            workers: flags.workers.or(file.workers),
            cache_dir: flags.cache_dir.or(env_cache_dir).or(file.cache_dir),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.precision < MIN_PRECISION {
            return Err(Error::Invalid(format!("precision must be at least {MIN_PRECISION}, got {}", self.precision)));
        }
        if (self.cutoff as usize) < self.order {
            return Err(Error::Invalid(format!("cutoff {} is below the order {}", self.cutoff, self.order)));
        }
        if self.workers == Some(0) {
            return Err(Error::Invalid("workers must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let file = FileConfig { order: Some(3), precision: Some(40), m: Some(2), ..Default::default() };
        let flags = Overrides { order: Some(5), ..Default::default() };
        let c = RunConfig::resolve(flags, file, None).unwrap();
        assert_eq!((c.order, c.precision, c.m, c.cutoff), (5, 40, 2, 5));
        assert_eq!(c.format, Format::Pretty);
    }

    #[test]
    fn cache_dir_sources() {
        let file = FileConfig { cache_dir: Some("a".into()), ..Default::default() };
        let c = RunConfig::resolve(Overrides::default(), file.clone(), Some("b".into())).unwrap();
        assert_eq!(c.cache_dir, Some(PathBuf::from("b")));
        let flags = Overrides { cache_dir: Some("c".into()), ..Default::default() };
        let c = RunConfig::resolve(flags, file, Some("b".into())).unwrap();
        assert_eq!(c.cache_dir, Some(PathBuf::from("c")));
    }

    #[test]
    fn invariants_enforced() {
        let low = Overrides { precision: Some(20), ..Default::default() };
        assert!(RunConfig::resolve(low, FileConfig::default(), None).is_err());
        let cut = Overrides { order: Some(4), cutoff: Some(3), ..Default::default() };
        assert!(RunConfig::resolve(cut, FileConfig::default(), None).is_err());
    }

    #[test]
    fn file_keys() {
        let f: FileConfig = toml::from_str("order = 2\nformat = \"csv\"\np = \"symbolic\"\n").unwrap();
        assert_eq!(f.format, Some(Format::Csv));
        assert!(toml::from_str::<FileConfig>("nonsense = 1").is_err());
        let c = RunConfig::resolve(Overrides::default(), f, None).unwrap();
        assert_eq!(c.p, Some(PValue::Symbolic));
    }
}
