use std::collections::BTreeMap;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::Letter;

/// Nondeterministic automaton with state-based acceptance. Interpreted as an
/// [`Nfa`] over finite words or a [`BuchiAutomaton`] over infinite words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<String>,
    alphabet: Vec<Letter>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
    /// `delta[q][letter index]` = sorted successor states
    delta: Vec<Vec<Vec<usize>>>,
}

impl Automaton {
    pub fn new(
        states: Vec<String>,
        alphabet: Vec<Letter>,
        initial: Vec<String>,
        transitions: Vec<(String, Letter, String)>,
        accepting: Vec<String>,
    ) -> Result<Self> {
        let mut alphabet = alphabet;
        alphabet.sort_unstable();
        alphabet.dedup();
        if alphabet.is_empty() {
            return Err(Error::Input("automaton alphabet must be nonempty".into()));
        }
        let index: BTreeMap<&str, usize> = states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        if index.len() != states.len() {
            return Err(Error::Input("duplicate state names".into()));
        }
        let lookup = |name: &str, field: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::Input(format!("{field}: undeclared state '{name}'")))
        };
        let initial = initial
            .iter()
            .map(|q| lookup(q, "initial"))
            .collect::<Result<Vec<_>>>()?;
        let mut accepting_flags = vec![false; states.len()];
        for q in &accepting {
            accepting_flags[lookup(q, "accepting")?] = true;
        }
        let mut delta = vec![vec![Vec::new(); alphabet.len()]; states.len()];
        for (i, (p, a, q)) in transitions.iter().enumerate() {
            let p = lookup(p, &format!("transitions[{i}]"))?;
            let q = lookup(q, &format!("transitions[{i}]"))?;
            let ai = alphabet
                .binary_search(a)
                .map_err(|_| Error::Input(format!("transitions[{i}]: letter '{a}' not in alphabet")))?;
            delta[p][ai].push(q);
        }
        for row in &mut delta {
            for targets in row {
                targets.sort_unstable();
                targets.dedup();
            }
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Ok(Automaton {
            states,
            alphabet,
            initial,
            accepting: accepting_flags,
            delta,
        })
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[Letter] {
        &self.alphabet
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn letter_index(&self, a: Letter) -> Option<usize> {
        self.alphabet.binary_search(&a).ok()
    }

    pub fn successors(&self, q: usize, letter_index: usize) -> &[usize] {
        &self.delta[q][letter_index]
    }

    pub(crate) fn check_word(&self, word: &[Letter]) -> Result<Vec<usize>> {
        word.iter()
            .map(|&a| {
                self.letter_index(a)
                    .ok_or_else(|| Error::Input(format!("letter '{a}' is not in the alphabet")))
            })
            .collect()
    }
}

/// Automaton over finite words; accepting states are final states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nfa(pub Automaton);

/// Automaton over infinite words with Büchi acceptance on states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuchiAutomaton(pub Automaton);

impl Deref for Nfa {
    type Target = Automaton;
    fn deref(&self) -> &Automaton {
        &self.0
    }
}

impl Deref for BuchiAutomaton {
    type Target = Automaton;
    fn deref(&self) -> &Automaton {
        &self.0
    }
}

impl Nfa {
    pub fn accepts(&self, word: &[Letter]) -> Result<bool> {
        let letters = self.check_word(word)?;
        let mut current = vec![false; self.num_states()];
        for &q in self.initial() {
            current[q] = true;
        }
        for &ai in &letters {
            let mut next = vec![false; self.num_states()];
            for q in (0..self.num_states()).filter(|&q| current[q]) {
                for &r in self.successors(q, ai) {
                    next[r] = true;
                }
            }
            current = next;
        }
        Ok((0..self.num_states()).any(|q| current[q] && self.is_accepting(q)))
    }
}

impl BuchiAutomaton {
    /// Accepting lasso search for `prefix · period^ω` (period nonempty).
    ///
    /// Nodes are (position, state) where positions `0..|prefix|` walk the
    /// prefix and positions `|prefix|..|prefix|+|period|` cycle through the
    /// period. The word is accepted iff some reachable node with an
    /// accepting state in the cyclic part lies on a cycle.
    pub fn accepts_lasso(&self, prefix: &[Letter], period: &[Letter]) -> Result<bool> {
        if period.is_empty() {
            return Err(Error::Input("lasso period must be nonempty".into()));
        }
        let p = self.check_word(prefix)?;
        let v = self.check_word(period)?;
        let word: Vec<usize> = p.iter().chain(&v).copied().collect();
        let len = word.len();
        let nq = self.num_states();
        let next_pos = |i: usize| if i + 1 < len { i + 1 } else { p.len() };
        let node = |i: usize, q: usize| i * nq + q;
        let successors = |n: usize| {
            let (i, q) = (n / nq, n % nq);
            let j = next_pos(i);
            self.successors(q, word[i]).iter().map(move |&r| node(j, r))
        };
        let total = len * nq;
        let mut reachable = vec![false; total];
        let mut stack: Vec<usize> = self.initial().iter().map(|&q| node(0, q)).collect();
        for &n in &stack {
            reachable[n] = true;
        }
        while let Some(n) = stack.pop() {
            for m in successors(n) {
                if !reachable[m] {
                    reachable[m] = true;
                    stack.push(m);
                }
            }
        }
        for start in 0..total {
            let (i, q) = (start / nq, start % nq);
            if !reachable[start] || i < p.len() || !self.is_accepting(q) {
                continue;
            }
            // is `start` on a cycle?
            let mut seen = vec![false; total];
            let mut stack: Vec<usize> = successors(start).collect();
            while let Some(n) = stack.pop() {
                if n == start {
                    return Ok(true);
                }
                if !seen[n] {
                    seen[n] = true;
                    stack.extend(successors(n));
                }
            }
        }
        Ok(false)
    }
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateName {
    Name(String),
    Number(i64),
}

impl StateName {
    fn into_string(self) -> String {
        match self {
            StateName::Name(s) => s,
            StateName::Number(n) => n.to_string(),
        }
    }
}

/// `{"states": [...], "alphabet": [...], "initial": [...],
///   "transitions": [[q, "a", q'], ...], "accepting": [...]}`;
/// `"final"` is accepted in place of `"accepting"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub states: Vec<StateName>,
    pub alphabet: Vec<String>,
    pub initial: Vec<StateName>,
    pub transitions: Vec<(StateName, String, StateName)>,
    #[serde(alias = "final")]
    pub accepting: Vec<StateName>,
}

fn single_letter(s: &str, field: &str) -> Result<Letter> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) if !c.is_whitespace() && !"()^".contains(c) => Ok(c),
        _ => Err(Error::Input(format!(
            "{field}: letters must be single characters other than '(', ')', '^', got {s:?}"
        ))),
    }
}

impl TryFrom<AutomatonFile> for Automaton {
    type Error = Error;

    fn try_from(f: AutomatonFile) -> Result<Self> {
        let alphabet = f
            .alphabet
            .iter()
            .map(|a| single_letter(a, "alphabet"))
            .collect::<Result<Vec<_>>>()?;
        let transitions = f
            .transitions
            .into_iter()
            .enumerate()
            .map(|(i, (p, a, q))| {
                Ok((
                    p.into_string(),
                    single_letter(&a, &format!("transitions[{i}]"))?,
                    q.into_string(),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Automaton::new(
            f.states.into_iter().map(StateName::into_string).collect(),
            alphabet,
            f.initial.into_iter().map(StateName::into_string).collect(),
            transitions,
            f.accepting.into_iter().map(StateName::into_string).collect(),
        )
    }
}

impl From<&Automaton> for AutomatonFile {
    fn from(a: &Automaton) -> Self {
        let name = |q: usize| StateName::Name(a.states[q].clone());
        let mut transitions = Vec::new();
        for q in 0..a.num_states() {
            for (ai, &letter) in a.alphabet.iter().enumerate() {
                for &r in &a.delta[q][ai] {
                    transitions.push((name(q), letter.to_string(), name(r)));
                }
            }
        }
        AutomatonFile {
            states: (0..a.num_states()).map(name).collect(),
            alphabet: a.alphabet.iter().map(|c| c.to_string()).collect(),
            initial: a.initial.iter().map(|&q| name(q)).collect(),
            transitions,
            accepting: (0..a.num_states()).filter(|&q| a.accepting[q]).map(name).collect(),
        }
    }
}

/// Builds an automaton from compact literals; used by tests and fixtures.
///
/// `transitions` entries are `"p a q"`.
pub fn automaton(
    states: &[&str],
    alphabet: &str,
    initial: &[&str],
    transitions: &[&str],
    accepting: &[&str],
) -> Automaton {
    let owned = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let transitions = transitions
        .iter()
        .map(|t| {
            let parts: Vec<&str> = t.split_whitespace().collect();
            assert_eq!(parts.len(), 3, "transition literal {t:?}");
            (
                parts[0].to_string(),
                parts[1].chars().next().expect("letter"),
                parts[2].to_string(),
            )
        })
        .collect();
    Automaton::new(
        owned(states),
        alphabet.chars().collect(),
        owned(initial),
        transitions,
        owned(accepting),
    )
    .expect("valid automaton literal")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finitely_many_a() -> BuchiAutomaton {
        BuchiAutomaton(automaton(
            &["0", "1"],
            "ab",
            &["0"],
            &["0 a 0", "0 b 0", "0 b 1", "1 b 1"],
            &["1"],
        ))
    }

    #[test]
    fn nfa_contains_a() {
        let n = Nfa(automaton(
            &["0", "1"],
            "ab",
            &["0"],
            &["0 a 1", "0 b 0", "1 a 1", "1 b 1"],
            &["1"],
        ));
        assert!(n.accepts(&['a', 'b']).unwrap());
        assert!(!n.accepts(&['b', 'b']).unwrap());
        assert!(!n.accepts(&[]).unwrap());
        assert!(n.accepts(&['c']).is_err());
    }

    #[test]
    fn lasso_examples() {
        let b = finitely_many_a();
        assert!(b.accepts_lasso(&['a'], &['b']).unwrap());
        assert!(!b.accepts_lasso(&[], &['a', 'b']).unwrap());
        assert!(!b.accepts_lasso(&['b'], &['a']).unwrap());
        assert!(b.accepts_lasso(&['a', 'b', 'a'], &['b', 'b']).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let src = r#"{"states": [0, 1], "alphabet": ["a", "b"], "initial": [0],
            "transitions": [[0, "a", 0], [0, "b", 0], [0, "b", 1], [1, "b", 1]], "final": [1]}"#;
        let file: AutomatonFile = serde_json::from_str(src).unwrap();
        let a = Automaton::try_from(file).unwrap();
        assert_eq!(a, finitely_many_a().0);
        let back = Automaton::try_from(AutomatonFile::from(&a)).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn rejects_bad_input() {
        let bad_state = r#"{"states": ["p"], "alphabet": ["a"], "initial": ["q"], "transitions": [], "accepting": []}"#;
        let f: AutomatonFile = serde_json::from_str(bad_state).unwrap();
        assert!(Automaton::try_from(f).is_err());
        let bad_letter =
            r#"{"states": ["p"], "alphabet": ["ab"], "initial": ["p"], "transitions": [], "accepting": []}"#;
        let f: AutomatonFile = serde_json::from_str(bad_letter).unwrap();
        assert!(Automaton::try_from(f).is_err());
        let empty = r#"{"states": ["p"], "alphabet": [], "initial": ["p"], "transitions": [], "accepting": []}"#;
        let f: AutomatonFile = serde_json::from_str(empty).unwrap();
        assert!(Automaton::try_from(f).is_err());
    }
}
