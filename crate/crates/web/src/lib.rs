//! Browser bindings. Every export returns a JSON string; failures come back
//! as `{"error": "..."}` so the page never has to catch exceptions.

use fo2alt::catalog::{find, CATALOG};
use fo2alt::json::{monoid_from_json, MonoidFile};
use fo2alt::language::{combine_infty, DEFAULT_SIZE_CAP};
use fo2alt::logic::solve_game;
use fo2alt::varieties::{is_in_jplus, kd_quotient};
use fo2alt::{classify, AutomataLanguage, Error, GameConfig, Universe};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Longest quotient chain shown by the demo.
const MAX_CHAIN: usize = 16;

fn respond(r: Result<Value, Error>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

#[wasm_bindgen]
pub fn catalog() -> String {
    let entries: Vec<Value> = CATALOG
        .iter()
        .map(|e| json!({"name": e.name, "universe": e.universe, "description": e.description, "json": e.json}))
        .collect();
    Value::from(entries).to_string()
}

/// Solves `Σ²_{m,n}(u, v)`.
#[wasm_bindgen]
pub fn ef_game(u: &str, v: &str, m: usize, n: usize) -> String {
    respond((|| {
        let (u, v): (Vec<char>, Vec<char>) = (u.trim().chars().collect(), v.trim().chars().collect());
        let out = solve_game(&u, &v, GameConfig::new(m, n)?)?;
        Ok(json!({
            "duplicator_wins": out.duplicator_wins,
            "spoiler_move": out.spoiler_move.map(|mv| mv.to_string()),
        }))
    })())
}

/// Classifies a language given as a catalog name or as language JSON.
#[wasm_bindgen]
pub fn classify_language(source: &str, universe: &str) -> String {
    respond((|| {
        let universe: Universe = universe.parse()?;
        let lang = match find(source.trim()) {
            Some(e) => e.language()?,
            None => AutomataLanguage::from_json(source)?,
        };
        let r = combine_infty(lang.finite.as_ref(), lang.infinite.as_ref(), DEFAULT_SIZE_CAP)?;
        Ok(serde_json::to_value(classify(&r, universe)?).expect("serializes"))
    })())
}

/// The KD quotient chain of a monoid file, stopping at J⁺ or a repeat.
#[wasm_bindgen]
pub fn kd_chain(monoid_json: &str) -> String {
    respond((|| {
        let mut m = monoid_from_json(monoid_json)?;
        let mut steps = Vec::new();
        for _ in 0..MAX_CHAIN {
            let jplus = is_in_jplus(&m);
            steps.push(json!({"size": m.size(), "in_jplus": jplus, "monoid": MonoidFile::from_monoid(&m)}));
            if jplus {
                break;
            }
            let next = kd_quotient(&m)?.monoid;
            if next == m {
                break;
            }
            m = next;
        }
        Ok(Value::from(steps))
    })())
}
