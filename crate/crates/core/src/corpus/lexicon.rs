//! Ingredient lexicon: the reference id list plus the alias map.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use crate::corpus::normalize::Normalizer;
use crate::error::{Error, Result};

/// Counts of raw-ingredient lookups performed during standardization.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LexiconStats {
    pub mapped_raws: usize,
    pub unmapped_raws: usize,
}

/// Reference ingredient ids, alias mappings onto them, and the
/// normalizer both were built with.
///
/// Every reference id maps to itself implicitly; alias keys are stored
/// in normalized form and their targets always lie in the reference set.
#[derive(Debug, Clone, Default)]
pub struct IngredientLexicon {
    pub normalizer: Normalizer,
    pub reference: BTreeSet<String>,
    pub aliases: BTreeMap<String, String>,
    pub stats: LexiconStats,
}

impl IngredientLexicon {
    /// Resolve an already-normalized string to a reference id.
    pub fn lookup(&self, normalized: &str) -> Option<&str> {
        if let Some(id) = self.reference.get(normalized) {
            return Some(id.as_str());
        }
        self.aliases.get(normalized).map(String::as_str)
    }

    /// Number of distinct normalized strings that resolve to some
    /// reference id (reference ids themselves plus alias keys).
    pub fn resolvable_keys(&self) -> usize {
        self.reference.len() + self.aliases.len()
    }
}

/// Load the reference list (one id per line) and the alias TSV
/// (`normalized_raw <TAB> standard_id` per line).
///
/// Alias keys are normalized with `normalizer` on load; conflicting
/// duplicate keys — including keys that collide with a reference id but
/// point elsewhere — are an error, and so are alias targets missing from
/// the reference list.
pub fn build_lexicon(
    reference_path: &Path,
    aliases_path: &Path,
    normalizer: Normalizer,
) -> Result<IngredientLexicon> {
    let reference_text = read(reference_path)?;
    let mut reference = BTreeSet::new();
    for line in reference_text.lines() {
        let id = line.trim().to_lowercase();
        if !id.is_empty() {
            reference.insert(id);
        }
    }

    let alias_text = read(aliases_path)?;
    let mut aliases: BTreeMap<String, String> = BTreeMap::new();
    for (lineno, line) in alias_text.lines().enumerate() {
        let line_no = lineno + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.splitn(2, '\t');
        let (raw_key, raw_target) = match (fields.next(), fields.next()) {
            (Some(k), Some(t)) => (k, t),
            _ => {
                return Err(Error::Malformed {
                    path: aliases_path.to_path_buf(),
                    line: line_no,
                    message: "expected two tab-separated fields".into(),
                })
            }
        };
        let key = normalizer.normalize(raw_key);
        let target = raw_target.trim().to_lowercase();
        if key.is_empty() {
            return Err(Error::Malformed {
                path: aliases_path.to_path_buf(),
                line: line_no,
                message: format!("alias key {raw_key:?} normalizes to the empty string"),
            });
        }
        if !reference.contains(&target) {
            return Err(Error::UnknownAliasTarget { key, target });
        }
        if key == target {
            continue; // redundant self-mapping
        }
        if reference.contains(&key) {
            // The implicit self-mapping wins; pointing the key elsewhere
            // would make lookup ambiguous.
            return Err(Error::AliasConflict {
                first: key.clone(),
                second: target,
                key,
            });
        }
        if let Some(existing) = aliases.get(&key) {
            if existing != &target {
                return Err(Error::AliasConflict {
                    key: key.clone(),
                    first: existing.clone(),
                    second: target,
                });
            }
            continue;
        }
        aliases.insert(key, target);
    }

    Ok(IngredientLexicon {
        normalizer,
        reference,
        aliases,
        stats: LexiconStats::default(),
    })
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
