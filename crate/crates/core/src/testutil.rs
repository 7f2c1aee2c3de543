//! Small fixture builders shared by the unit tests.

use std::collections::BTreeSet;

use crate::corpus::{IngredientLexicon, Recipe, RecipeCorpus};

/// A recipe with the given standardized ingredient set and no optional
/// fields; `raw_ingredients` mirrors the standardized ids.
pub fn recipe(id: &str, cuisine: &str, ingredients: &[&str]) -> Recipe {
    Recipe {
        id: id.to_string(),
        cuisine: cuisine.to_string(),
        raw_ingredients: ingredients.iter().map(|s| s.to_string()).collect(),
        std_ingredients: ingredients
            .iter()
            .map(|s| s.to_string())
            .collect::<BTreeSet<_>>(),
        flavors: None,
        rating: None,
        nutrition: None,
    }
}

/// A standardized corpus built directly from `(id, cuisine, ingredients)`
/// triples.
pub fn corpus(entries: &[(&str, &str, &[&str])]) -> RecipeCorpus {
    let recipes = entries
        .iter()
        .map(|(id, cuisine, ingredients)| recipe(id, cuisine, ingredients))
        .collect();
    RecipeCorpus::from_recipes(recipes, IngredientLexicon::default())
}
