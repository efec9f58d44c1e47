//! Minimal `Σ²_m` level of a language over `A^∞`, `A^ω` or `A*`, and
//! explicit `Σ²_1` formulas for level-1 languages.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::{finite_syntactic_monoid, make_alphabetic, syntactic_quotient, RecognizedLanguage};
use crate::logic::{Formula, Var};
use crate::monoid::{Element, Letter, OrderedMonoid};
use crate::pairs::LinkedPair;
use crate::topology::{is_open, OpenVerdict, TopologyKind};
use crate::varieties::{da_counterexample, min_level, LevelReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Universe {
    Infty,
    Omega,
    Star,
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Universe::Infty => "infty",
            Universe::Omega => "omega",
            Universe::Star => "star",
        })
    }
}

impl FromStr for Universe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "infty" => Ok(Universe::Infty),
            "omega" => Ok(Universe::Omega),
            "star" => Ok(Universe::Star),
            _ => Err(Error::Input(format!(
                "unknown universe {s:?} (expected infty, omega or star)"
            ))),
        }
    }
}

/// A level ruled out by a failed openness test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockedLevel {
    pub level: usize,
    pub verdict: OpenVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Evidence {
    pub syntactic_size: usize,
    /// Witness `(x, y, z)` against the DA identity.
    pub da_counterexample: Option<(Element, Element, Element)>,
    pub min_level: LevelReport,
    pub cantor_open: Option<OpenVerdict>,
    pub alphabetic_open: Option<OpenVerdict>,
    pub blocked: Vec<BlockedLevel>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub universe: Universe,
    pub fo2: bool,
    pub level: Option<usize>,
    pub evidence: Evidence,
}

fn check_universe(l: &RecognizedLanguage, universe: Universe) -> Result<()> {
    let al = make_alphabetic(l)?;
    let one = al.monoid().neutral();
    let pairs = al.accepted_pairs();
    match universe {
        Universe::Infty => Ok(()),
        Universe::Omega => match pairs.iter().find(|p| p.e == one) {
            Some(_) => Err(Error::Input(
                "universe omega: the language contains finite words".into(),
            )),
            None => Ok(()),
        },
        Universe::Star => match pairs.iter().find(|p| p.e != one) {
            Some(_) => Err(Error::Input(
                "universe star: the language contains infinite words".into(),
            )),
            None => Ok(()),
        },
    }
}

/// Minimal `m` such that the language is definable in `Σ²_m` over the
/// given universe, from its syntactic ordered monoid and, at levels 1 and 2
/// over `A^∞` and `A^ω`, Cantor and alphabetic openness.
pub fn classify(l: &RecognizedLanguage, universe: Universe) -> Result<Classification> {
    check_universe(l, universe)?;
    let (monoid, alphabetic): (OrderedMonoid, Option<RecognizedLanguage>) = match universe {
        Universe::Star => (finite_syntactic_monoid(l)?.monoid, None),
        _ => {
            let s = syntactic_quotient(l)?;
            let al = make_alphabetic(&s.language)?;
            (s.language.monoid().clone(), Some(al))
        }
    };
    let report = min_level(&monoid)?;
    let dace = da_counterexample(&monoid);
    let mut evidence = Evidence {
        syntactic_size: monoid.size(),
        da_counterexample: dace,
        min_level: report.clone(),
        cantor_open: None,
        alphabetic_open: None,
        blocked: Vec::new(),
    };
    if dace.is_some() {
        return Ok(Classification {
            universe,
            fo2: false,
            level: None,
            evidence,
        });
    }
    let mut level = report.level;
    if let (Some(al), Some(a)) = (&alphabetic, report.level) {
        let (cantor, alpha) = match universe {
            Universe::Omega => (TopologyKind::CantorOmega, TopologyKind::AlphabeticOmega),
            _ => (TopologyKind::CantorInfty, TopologyKind::AlphabeticInfty),
        };
        let cantor = is_open(al, cantor)?;
        let alpha = is_open(al, alpha)?;
        let mut m = a;
        if m == 1 && !cantor.open {
            evidence.blocked.push(BlockedLevel {
                level: 1,
                verdict: cantor.clone(),
            });
            m = 2;
        }
        if m == 2 && !alpha.open {
            evidence.blocked.push(BlockedLevel {
                level: 2,
                verdict: alpha.clone(),
            });
            m = 3;
        }
        evidence.cantor_open = Some(cantor);
        evidence.alphabetic_open = Some(alpha);
        level = Some(m);
    }
    Ok(Classification {
        universe,
        fo2: true,
        level,
        evidence,
    })
}

// ---------------------------------------------------------------------------
// Σ²_1 synthesis

/// Formula and the subword-minimal finite words it is built from.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub formula: Formula,
    pub minimal_words: Vec<Vec<Letter>>,
}

/// Safety bound on the length of minimal words.
pub const MAX_MINIMAL_WORD_LEN: usize = 64;
/// Safety bound on the number of search states per length.
pub const MAX_SYNTHESIS_STATES: usize = 1_000_000;

/// `∃x (a₁(x) ∧ ∃y (x<y ∧ a₂(y) ∧ ∃x (y<x ∧ a₃(x) ∧ …)))`: `u` is a subword.
pub fn subword_formula(u: &[Letter]) -> Formula {
    fn build(u: &[Letter], var: Var, prev: Option<Var>) -> Formula {
        match u.split_first() {
            None => Formula::True,
            Some((&a, rest)) => {
                let mut body = Formula::Letter(var, a);
                if let Some(p) = prev {
                    body = Formula::and(Formula::VarLt(p, var), body);
                }
                if !rest.is_empty() {
                    body = Formula::and(body, build(rest, var.other(), Some(var)));
                }
                Formula::exists(var, body)
            }
        }
    }
    build(u, Var::X, None)
}

/// Word automaton over the elements of `m` with final set `finals`.
struct WordSearch<'a> {
    m: &'a OrderedMonoid,
    letters: Vec<(Letter, Element)>,
    finals: Vec<bool>,
}

impl WordSearch<'_> {
    fn advance(&self, progress: &[u8], kept: &[Vec<Letter>], a: Letter) -> Vec<u8> {
        progress
            .iter()
            .zip(kept)
            .map(|(&p, k)| {
                if (p as usize) < k.len() && k[p as usize] == a {
                    p + 1
                } else {
                    p
                }
            })
            .collect()
    }

    fn uncovered(progress: &[u8], kept: &[Vec<Letter>]) -> bool {
        progress.iter().zip(kept).all(|(&p, k)| (p as usize) < k.len())
    }

    /// Length of a shortest accepted word with no kept word as subword.
    fn shortest_uncovered(&self, kept: &[Vec<Letter>]) -> Result<Option<usize>> {
        let start = (self.m.neutral(), vec![0u8; kept.len()]);
        if !Self::uncovered(&start.1, kept) {
            return Ok(None);
        }
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([(start, 0usize)]);
        while let Some(((s, prog), d)) = queue.pop_front() {
            if self.finals[s] {
                return Ok(Some(d));
            }
            for &(a, g) in &self.letters {
                let next = (self.m.mul(s, g), self.advance(&prog, kept, a));
                if Self::uncovered(&next.1, kept) && seen.insert(next.clone()) {
                    if seen.len() > MAX_SYNTHESIS_STATES {
                        return Err(Error::Resource {
                            what: "subword search states",
                            cap: MAX_SYNTHESIS_STATES,
                            observed: seen.len(),
                        });
                    }
                    queue.push_back((next, d + 1));
                }
            }
        }
        Ok(None)
    }

    /// All accepted words of length exactly `len` with no kept word as
    /// subword, in lexicographic order.
    fn uncovered_of_length(&self, kept: &[Vec<Letter>], len: usize) -> Vec<Vec<Letter>> {
        // can_finish[r][s]: some word of length r leads from s to a final element
        let n = self.m.size();
        let mut can_finish = vec![self.finals.clone()];
        for r in 1..=len {
            let prev = &can_finish[r - 1];
            let row = (0..n)
                .map(|s| self.letters.iter().any(|&(_, g)| prev[self.m.mul(s, g)]))
                .collect();
            can_finish.push(row);
        }
        let mut out = Vec::new();
        let mut word = Vec::with_capacity(len);
        self.extend(
            kept,
            len,
            self.m.neutral(),
            vec![0; kept.len()],
            &can_finish,
            &mut word,
            &mut out,
        );
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &self,
        kept: &[Vec<Letter>],
        len: usize,
        s: Element,
        prog: Vec<u8>,
        can_finish: &[Vec<bool>],
        word: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
    ) {
        let remaining = len - word.len();
        if !can_finish[remaining][s] || !Self::uncovered(&prog, kept) {
            return;
        }
        if remaining == 0 {
            out.push(word.clone());
            return;
        }
        for &(a, g) in &self.letters {
            word.push(a);
            self.extend(
                kept,
                len,
                self.m.mul(s, g),
                self.advance(&prog, kept, a),
                can_finish,
                word,
                out,
            );
            word.pop();
        }
    }
}

/// Subword-minimal elements of the finite words of `l`, shortest first.
///
/// Proceeds by length: every accepted word of the current shortest length
/// that has no kept word as a subword is itself minimal.
pub fn minimal_subwords(l: &RecognizedLanguage) -> Result<Vec<Vec<Letter>>> {
    let m = l.monoid();
    let one = m.neutral();
    let search = WordSearch {
        m,
        letters: m.letters().iter().map(|(&c, &g)| (c, g)).collect(),
        finals: m.elements().map(|s| l.accepts(LinkedPair::new(s, one))).collect(),
    };
    let mut kept: Vec<Vec<Letter>> = Vec::new();
    while let Some(len) = search.shortest_uncovered(&kept)? {
        if len > MAX_MINIMAL_WORD_LEN {
            return Err(Error::Resource {
                what: "minimal subword length",
                cap: MAX_MINIMAL_WORD_LEN,
                observed: len,
            });
        }
        let layer = search.uncovered_of_length(&kept, len);
        debug_assert!(!layer.is_empty());
        kept.extend(layer);
    }
    Ok(kept)
}

/// `⋁ᵢ φ_{uᵢ}` over the subword-minimal finite words `uᵢ` of a level-1
/// language over `A^∞`.
pub fn synthesize_sigma21_formula(l: &RecognizedLanguage) -> Result<Synthesis> {
    let c = classify(l, Universe::Infty)?;
    if c.level != Some(1) {
        let evidence = serde_json::to_string(&c).unwrap_or_default();
        return Err(Error::Precondition(format!("language is not at level 1: {evidence}")));
    }
    let s = syntactic_quotient(l)?;
    let minimal_words = minimal_subwords(&s.language)?;
    let formula = Formula::disjunction(minimal_words.iter().map(|u| subword_formula(u)));
    Ok(Synthesis { formula, minimal_words })
}
