//! Raw ingredient-string normalization.
//!
//! Raw strings from recipe aggregators mix quantities, units, packaging
//! notes, and casing ("2 cups Chopped Tomatoes (canned)"). [`Normalizer`]
//! reduces them to a canonical lowercase form so that lexicon lookup sees
//! one key per surface variant.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

/// Default measurement-unit tokens, one per line (see `data/units.txt`).
pub const DEFAULT_UNITS: &str = include_str!("../../data/units.txt");

/// Lowercases, strips bracketed content, punctuation, digits, and unit
/// tokens, and collapses whitespace.
///
/// Normalization is idempotent: `normalize(normalize(s)) == normalize(s)`
/// for every input.
#[derive(Debug, Clone)]
pub struct Normalizer {
    units: HashSet<String>,
}

impl Default for Normalizer {
    fn default() -> Self {
        Normalizer {
            units: parse_unit_list(DEFAULT_UNITS),
        }
    }
}

fn parse_unit_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty() && !line.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

impl Normalizer {
    /// The default unit list plus every token in `extra`.
    pub fn with_extra_units<I, S>(extra: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut n = Normalizer::default();
        for token in extra {
            n.units.insert(token.as_ref().trim().to_lowercase());
        }
        n
    }

    /// The default unit list extended with the tokens in `path`
    /// (one per line, `#` comments allowed).
    pub fn with_units_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Normalizer::with_extra_units(
            parse_unit_list(&text).into_iter(),
        ))
    }

    /// Number of unit tokens currently recognized.
    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    /// Normalize one raw ingredient string.
    ///
    /// Steps, in order: lowercase; drop content inside `()`/`[]`/`{}`;
    /// replace punctuation and digits with spaces; drop unit tokens;
    /// join the surviving tokens with single spaces.
    pub fn normalize(&self, raw: &str) -> String {
        let lower = raw.to_lowercase();
        let mut cleaned = String::with_capacity(lower.len());
        let mut depth = 0usize;
        for ch in lower.chars() {
            match ch {
                '(' | '[' | '{' => depth += 1,
                ')' | ']' | '}' => depth = depth.saturating_sub(1),
                _ if depth > 0 => {}
                c if c.is_alphabetic() => cleaned.push(c),
                // Digits, punctuation, and whitespace all become token
                // boundaries ("100g" -> " g").
                _ => cleaned.push(' '),
            }
        }
        let mut out = String::with_capacity(cleaned.len());
        for token in cleaned.split_whitespace() {
            if self.units.contains(token) {
                continue;
            }
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(token);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_quantity_unit_and_case() {
        let n = Normalizer::default();
        assert_eq!(n.normalize("2 cups Chopped Tomatoes"), "chopped tomatoes");
    }

    #[test]
    fn pure_unit_string_normalizes_to_empty() {
        let n = Normalizer::default();
        assert_eq!(n.normalize("100g"), "");
    }

    #[test]
    fn plain_word_is_unchanged() {
        let n = Normalizer::default();
        assert_eq!(n.normalize("salt"), "salt");
    }

    #[test]
    fn bracketed_content_is_dropped() {
        let n = Normalizer::default();
        assert_eq!(n.normalize("Tomatoes (canned, diced)"), "tomatoes");
        assert_eq!(n.normalize("flour [sifted] {organic}"), "flour");
        // Unbalanced closers act as plain punctuation.
        assert_eq!(n.normalize("odd) name"), "odd name");
    }

    #[test]
    fn punctuation_and_digits_become_boundaries() {
        let n = Normalizer::default();
        assert_eq!(n.normalize("extra-virgin olive oil"), "extra virgin olive oil");
        assert_eq!(n.normalize("1 1/2 lbs. chicken breast"), "chicken breast");
    }

    #[test]
    fn extra_units_extend_the_default_list() {
        let n = Normalizer::with_extra_units(["knob"]);
        assert_eq!(n.normalize("1 knob butter"), "butter");
        // Default list still applies.
        assert_eq!(n.normalize("2 cups milk"), "milk");
    }

    #[test]
    fn normalize_is_idempotent_on_typical_strings() {
        let n = Normalizer::default();
        for raw in [
            "2 cups Chopped Tomatoes",
            "100g",
            "salt",
            "1 (15 oz) can black beans, rinsed",
            "Fresh basil leaves!!",
            "   ",
            "crème fraîche",
        ] {
            let once = n.normalize(raw);
            assert_eq!(n.normalize(&once), once, "not idempotent on {raw:?}");
        }
    }

    proptest::proptest! {
        #[test]
        fn normalize_is_idempotent(raw in "\\PC{0,40}") {
            let n = Normalizer::default();
            let once = n.normalize(&raw);
            proptest::prop_assert_eq!(n.normalize(&once), once.clone());
        }

        #[test]
        fn output_has_no_digits_and_is_lowercase_fixed(raw in "\\PC{0,40}") {
            let n = Normalizer::default();
            let out = n.normalize(&raw);
            // ASCII digits are what quantities are written with; exotic
            // code points can be numeric and alphabetic at once
            // (cuneiform numerals, say) and are left alone.
            proptest::prop_assert!(!out.chars().any(|c| c.is_ascii_digit()));
            // Some code points (mathematical capitals, for instance) have
            // no lowercase mapping at all, so the guarantee is that
            // lowercasing the output changes nothing.
            proptest::prop_assert_eq!(out.to_lowercase(), out.clone());
        }
    }
}
