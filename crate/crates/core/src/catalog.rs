//! Curated example languages over {a, b}.

use crate::classify::Universe;
use crate::error::Result;
use crate::language::AutomataLanguage;

#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    /// The universe the language lives in.
    pub universe: Universe,
    pub description: &'static str,
    pub json: &'static str,
}

impl CatalogEntry {
    pub fn language(&self) -> Result<AutomataLanguage> {
        AutomataLanguage::from_json(self.json)
    }
}

const fn entry(name: &'static str, universe: Universe, description: &'static str, json: &'static str) -> CatalogEntry {
    CatalogEntry {
        name,
        universe,
        description,
        json,
    }
}

pub const CATALOG: &[CatalogEntry] = &[
    entry(
        "contains-a",
        Universe::Infty,
        "finite and infinite words containing the letter a",
        include_str!("../data/languages/contains-a.json"),
    ),
    entry(
        "contains-a-alt",
        Universe::Infty,
        "contains-a, nondeterministic automaton",
        include_str!("../data/languages/contains-a-alt.json"),
    ),
    entry(
        "contains-ab",
        Universe::Infty,
        "words with ab as a subword",
        include_str!("../data/languages/contains-ab.json"),
    ),
    entry(
        "contains-ab-alt",
        Universe::Infty,
        "contains-ab, nondeterministic automaton",
        include_str!("../data/languages/contains-ab-alt.json"),
    ),
    entry(
        "a-or-bb",
        Universe::Infty,
        "words with a or bb as a subword",
        include_str!("../data/languages/a-or-bb.json"),
    ),
    entry(
        "starts-with-a",
        Universe::Infty,
        "words whose first letter is a",
        include_str!("../data/languages/starts-with-a.json"),
    ),
    entry(
        "finitely-many-a",
        Universe::Omega,
        "infinite words with finitely many a",
        include_str!("../data/languages/finitely-many-a.json"),
    ),
    entry(
        "astar-bomega",
        Universe::Omega,
        "A*b^ω, a second automaton for finitely-many-a",
        include_str!("../data/languages/astar-bomega.json"),
    ),
    entry(
        "infinitely-many-a",
        Universe::Omega,
        "infinite words with infinitely many a",
        include_str!("../data/languages/infinitely-many-a.json"),
    ),
    entry(
        "infinitely-many-a-alt",
        Universe::Omega,
        "infinitely-many-a, three-state automaton",
        include_str!("../data/languages/infinitely-many-a-alt.json"),
    ),
    entry(
        "contains-a-omega",
        Universe::Omega,
        "infinite words containing the letter a",
        include_str!("../data/languages/contains-a-omega.json"),
    ),
    entry(
        "parity-a",
        Universe::Star,
        "finite words with an even number of a",
        include_str!("../data/languages/parity-a.json"),
    ),
    entry(
        "parity-a-alt",
        Universe::Star,
        "parity-a, automaton also tracking the parity of b",
        include_str!("../data/languages/parity-a-alt.json"),
    ),
    entry(
        "contains-a-finite",
        Universe::Star,
        "finite words containing the letter a",
        include_str!("../data/languages/contains-a-finite.json"),
    ),
    entry(
        "contains-a-finite-alt",
        Universe::Star,
        "contains-a-finite, nondeterministic automaton",
        include_str!("../data/languages/contains-a-finite-alt.json"),
    ),
    entry(
        "empty",
        Universe::Infty,
        "the empty language",
        include_str!("../data/languages/empty.json"),
    ),
    entry(
        "universal",
        Universe::Infty,
        "all finite and infinite words",
        include_str!("../data/languages/universal.json"),
    ),
    entry(
        "universal-alt",
        Universe::Infty,
        "universal, two-state automaton",
        include_str!("../data/languages/universal-alt.json"),
    ),
];

pub fn find(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_parses() {
        for e in CATALOG {
            e.language().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        }
        assert!(find("contains-a").is_some());
        assert!(find("nope").is_none());
    }
}
