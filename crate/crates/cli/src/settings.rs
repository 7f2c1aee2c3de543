//! Flat key-value configuration files and flag/default resolution.
//!
//! Every run setting has one config-file key; a command-line flag with
//! the same (kebab-case) name overrides it, and a built-in default
//! applies when neither is given. The resolved values are echoed into
//! the run manifest so artifacts are self-describing.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use culina_core::{Error, Result};

/// Every key a config file may set. Parsing rejects anything else so
/// typos fail loudly instead of silently using a default.
pub const KNOWN_KEYS: &[&str] = &[
    // Inputs and shared run settings.
    "corpus",
    "reference",
    "aliases",
    "units",
    "cuisine_country",
    "country_region",
    "country_health",
    "out_dir",
    "sample_size",
    "seed",
    "min_mapped",
    "min_recipes",
    "threads",
    // Diversity / complexity.
    "degree",
    // Notable ingredients.
    "cuisine",
    "top",
    // Similarity graphs.
    "kind",
    "top_k",
    "format",
    "ridge",
    "cap",
    "out",
    // Classification.
    "model",
    "target",
    "train_frac",
    "svm_epochs",
    "svm_lr",
    "svm_l2",
    "mlp_epochs",
    "mlp_batch",
    "mlp_dropout",
    "mlp_rho",
    "mlp_eps",
    "mlp_hidden",
    // Health correlations.
    "measures",
    "nutrients",
    "rating_policy",
];

/// Parsed contents of a `key = value` config file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FileConfig {
    values: BTreeMap<String, String>,
}

impl FileConfig {
    /// Loads and validates a config file: one `key = value` per line,
    /// `#` comments and blank lines ignored, duplicate or unknown keys
    /// rejected.
    pub fn load(path: &Path) -> Result<FileConfig> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        FileConfig::parse(&text, path)
    }

    fn parse(text: &str, path: &Path) -> Result<FileConfig> {
        let mut values = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let malformed = |message: String| Error::Malformed {
                path: path.to_path_buf(),
                line: line_no,
                message,
            };
            let Some((key, value)) = trimmed.split_once('=') else {
                return Err(malformed("expected `key = value`".into()));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(malformed(format!("unknown config key {key:?}")));
            }
            if values.insert(key.clone(), value).is_some() {
                return Err(malformed(format!("duplicate config key {key:?}")));
            }
        }
        Ok(FileConfig { values })
    }
}

/// Resolves each setting from flag, then config file, then default,
/// and records the effective value for the manifest echo.
#[derive(Debug, Default)]
pub struct Resolver {
    file: BTreeMap<String, String>,
    echo: BTreeMap<String, String>,
}

impl Resolver {
    pub fn new(file: Option<FileConfig>) -> Resolver {
        Resolver {
            file: file.map(|f| f.values).unwrap_or_default(),
            echo: BTreeMap::new(),
        }
    }

    fn file_parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.file.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| {
                Error::InvalidArg(format!("config key {key}: cannot parse {raw:?}"))
            }),
        }
    }

    /// A value with a built-in default.
    pub fn get<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T> {
        let value = match flag {
            Some(v) => v,
            None => self.file_parsed(key)?.unwrap_or(default),
        };
        self.echo.insert(key.to_string(), value.to_string());
        Ok(value)
    }

    /// A value that may stay unset.
    pub fn get_opt<T: FromStr + Display>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>> {
        let value = match flag {
            Some(v) => Some(v),
            None => self.file_parsed(key)?,
        };
        if let Some(v) = &value {
            self.echo.insert(key.to_string(), v.to_string());
        }
        Ok(value)
    }

    /// A string-typed value piped through a custom parser (used for
    /// enum-like settings: kinds, formats, lists).
    pub fn get_with<T>(
        &mut self,
        key: &str,
        flag: Option<String>,
        default: &str,
        parse: impl Fn(&str) -> Result<T>,
    ) -> Result<T> {
        let raw = match flag {
            Some(s) => s,
            None => self.file.get(key).cloned().unwrap_or_else(|| default.to_string()),
        };
        let value =
            parse(&raw).map_err(|e| Error::InvalidArg(format!("setting {key}: {e}")))?;
        self.echo.insert(key.to_string(), raw);
        Ok(value)
    }

    /// An optional path (flag wins, then config file).
    pub fn path_opt(&mut self, key: &str, flag: Option<PathBuf>) -> Option<PathBuf> {
        let value = flag.or_else(|| self.file.get(key).map(PathBuf::from));
        if let Some(p) = &value {
            self.echo.insert(key.to_string(), p.display().to_string());
        }
        value
    }

    /// A required path; missing means a config error.
    pub fn path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
        self.path_opt(key, flag).ok_or_else(|| {
            Error::InvalidArg(format!(
                "missing required setting `{key}`: pass --{flag} or set `{key}` in the config file",
                flag = key.replace('_', "-"),
            ))
        })
    }

    /// A required path that must also exist on disk. Reported as a
    /// config error: the run was asked to read a file that is not
    /// there.
    pub fn input_path(&mut self, key: &str, flag: Option<PathBuf>) -> Result<PathBuf> {
        let path = self.path(key, flag)?;
        if !path.is_file() {
            return Err(Error::InvalidArg(format!(
                "setting `{key}`: {} is not a readable file",
                path.display()
            )));
        }
        Ok(path)
    }

    /// The effective settings this resolver handed out, for the
    /// manifest echo.
    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.echo
    }

    /// Removes a key from the echo. Used for `out_dir`, which controls
    /// where artifacts land but has no effect on their bytes; leaving
    /// it out keeps manifests identical across output locations.
    pub fn drop_from_echo(&mut self, key: &str) {
        self.echo.remove(key);
    }
}

/// Settings shared by every subcommand that reads the corpus.
#[derive(Debug, Clone)]
pub struct CommonSettings {
    /// The config file the run was given, if any (recorded as a
    /// manifest input).
    pub config_file: Option<PathBuf>,
    pub corpus: PathBuf,
    pub reference: PathBuf,
    pub aliases: PathBuf,
    pub units: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub sample_size: usize,
    pub seed: u64,
    pub min_mapped: f64,
    pub min_recipes: usize,
    pub threads: usize,
}

/// The three country-table paths, resolved together because every
/// consumer needs all of them.
#[derive(Debug, Clone)]
pub struct TablePaths {
    pub cuisine_country: PathBuf,
    pub country_region: PathBuf,
    pub country_health: PathBuf,
}
