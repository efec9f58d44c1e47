use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::formula::Var;
use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::monoid::Letter;

/// Largest word length accepted by the solver.
pub const MAX_WORD_LEN: usize = 32;

/// Parameters of the game `Σ²_{m,n}(u, v)`: `n` rounds, and Spoiler may
/// change words `m − 1` times.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameConfig {
    pub m: usize,
    pub n: usize,
}

impl GameConfig {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("alternation budget m must be at least 1".into()));
        }
        if n > 64 {
            return Err(Error::Input("at most 64 rounds are supported".into()));
        }
        Ok(GameConfig { m, n })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// A Spoiler move: put `pebble` on position `position` (0-based) of the
/// word on `side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpoilerMove {
    pub side: Side,
    pub pebble: Var,
    pub position: usize,
}

impl fmt::Display for SpoilerMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::Left => "left",
            Side::Right => "right",
        };
        write!(f, "{} on {side} word at position {}", self.pebble, self.position + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameOutcome {
    pub duplicator_wins: bool,
    /// A first move from which Spoiler wins, when he does.
    pub spoiler_move: Option<SpoilerMove>,
}

/// Pebble positions: `0` unplaced, `i + 1` on position `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct State {
    left: [u8; 2],
    right: [u8; 2],
    rounds: u8,
    alternations: u8,
    side: Side,
}

struct Solver<'a> {
    u: &'a [Letter],
    v: &'a [Letter],
    memo: HashMap<State, bool>,
}

impl Solver<'_> {
    fn word(&self, side: Side) -> &[Letter] {
        match side {
            Side::Left => self.u,
            Side::Right => self.v,
        }
    }

    /// Result of Spoiler playing `mv` in `st`, or `None` if the move is not
    /// allowed. `Some(true)` means Spoiler wins.
    fn try_move(&mut self, st: State, mv: SpoilerMove) -> Option<bool> {
        let cost = u8::from(mv.side != st.side);
        if cost > st.alternations {
            return None;
        }
        let p = mv.pebble as usize;
        let q = 1 - p;
        let (own, other) = match mv.side {
            Side::Left => (st.left, st.right),
            Side::Right => (st.right, st.left),
        };
        let letter = self.word(mv.side)[mv.position];
        let reply_word = match mv.side {
            Side::Left => self.v,
            Side::Right => self.u,
        };
        let order = (own[q] != 0).then(|| (mv.position + 1).cmp(&(own[q] as usize)));
        for (j, _) in reply_word.iter().enumerate().filter(|&(_, &c)| c == letter) {
            if let Some(o) = order {
                if (j + 1).cmp(&(other[q] as usize)) != o {
                    continue;
                }
            }
            let mut own2 = own;
            let mut other2 = other;
            own2[p] = (mv.position + 1) as u8;
            other2[p] = (j + 1) as u8;
            let (left, right) = match mv.side {
                Side::Left => (own2, other2),
                Side::Right => (other2, own2),
            };
            let next = State {
                left,
                right,
                rounds: st.rounds - 1,
                alternations: st.alternations - cost,
                side: mv.side,
            };
            if !self.spoiler_wins(next) {
                return Some(false);
            }
        }
        Some(true)
    }

    fn moves(&self, st: State) -> Vec<SpoilerMove> {
        let mut out = Vec::new();
        for side in [st.side, other_side(st.side)] {
            for pebble in [Var::X, Var::Y] {
                for position in 0..self.word(side).len() {
                    out.push(SpoilerMove { side, pebble, position });
                }
            }
        }
        out
    }

    fn spoiler_wins(&mut self, st: State) -> bool {
        if st.rounds == 0 {
            return false;
        }
        if let Some(&r) = self.memo.get(&st) {
            return r;
        }
        let mut wins = false;
        for mv in self.moves(st) {
            if self.try_move(st, mv) == Some(true) {
                wins = true;
                break;
            }
        }
        self.memo.insert(st, wins);
        wins
    }
}

fn other_side(s: Side) -> Side {
    match s {
        Side::Left => Side::Right,
        Side::Right => Side::Left,
    }
}

fn check_len(w: &[Letter]) -> Result<()> {
    if w.len() > MAX_WORD_LEN {
        return Err(Error::Resource {
            what: "EF game word length",
            cap: MAX_WORD_LEN,
            observed: w.len(),
        });
    }
    Ok(())
}

/// Solves `Σ²_{m,n}(u, v)` exactly. Duplicator wins iff every
/// `Σ²_{m,n}` sentence true on `u` is true on `v`.
pub fn solve_game(u: &[Letter], v: &[Letter], cfg: GameConfig) -> Result<GameOutcome> {
    check_len(u)?;
    check_len(v)?;
    if cfg.m == 0 {
        return Err(Error::Input("alternation budget m must be at least 1".into()));
    }
    let mut solver = Solver {
        u,
        v,
        memo: HashMap::new(),
    };
    let start = State {
        left: [0, 0],
        right: [0, 0],
        rounds: cfg.n.min(255) as u8,
        alternations: (cfg.m - 1).min(255) as u8,
        side: Side::Left,
    };
    if !solver.spoiler_wins(start) {
        return Ok(GameOutcome {
            duplicator_wins: true,
            spoiler_move: None,
        });
    }
    let mv = solver
        .moves(start)
        .into_iter()
        .find(|&mv| solver.try_move(start, mv) == Some(true))
        .expect("a winning Spoiler has a winning move");
    Ok(GameOutcome {
        duplicator_wins: false,
        spoiler_move: Some(mv),
    })
}

/// `ef_duplicator_wins`.
pub fn ef_duplicator_wins(u: &[Letter], v: &[Letter], cfg: GameConfig) -> Result<bool> {
    solve_game(u, v, cfg).map(|o| o.duplicator_wins)
}

/// `M[i][j]` iff Duplicator wins `Σ²_{m,n}(words[i], words[j])`.
pub fn sigma2_preorder(words: &[Vec<Letter>], cfg: GameConfig) -> Result<BitMatrix> {
    let k = words.len();
    let mut out = BitMatrix::new(k);
    for i in 0..k {
        for j in 0..k {
            out.set(i, j, ef_duplicator_wins(&words[i], &words[j], cfg)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn wins(u: &str, v: &str, m: usize, n: usize) -> bool {
        ef_duplicator_wins(&w(u), &w(v), GameConfig::new(m, n).unwrap()).unwrap()
    }

    #[test]
    fn identical_words() {
        for m in 1..=3 {
            for n in 0..=3 {
                assert!(wins("abba", "abba", m, n));
            }
        }
    }

    #[test]
    fn subword_examples() {
        for n in 0..=4 {
            assert!(wins("a", "aa", 1, n));
        }
        assert!(!wins("aa", "a", 1, 2));
        let out = solve_game(&w("aa"), &w("a"), GameConfig::new(1, 2).unwrap()).unwrap();
        assert_eq!(out.spoiler_move.unwrap().side, Side::Left);
    }

    #[test]
    fn switching_before_first_move_costs() {
        // Spoiler needs the right word to expose the extra b, so m = 1 is not enough
        assert!(wins("a", "ab", 1, 1));
        assert!(!wins("a", "ab", 2, 1));
    }

    #[test]
    fn preorder_examples() {
        let words = vec![w(""), w("a"), w("aa")];
        let p = sigma2_preorder(&words, GameConfig::new(1, 1).unwrap()).unwrap();
        assert!(p.get(0, 1) && p.get(1, 2) && p.get(0, 2));
        // one round cannot count occurrences
        assert!(p.get(2, 1));
        assert!(!wins("aa", "a", 1, 2));
        assert!(p.is_reflexive() && p.is_transitive());
        let p = sigma2_preorder(&[w("ab")], GameConfig::new(1, 1).unwrap()).unwrap();
        assert!(p.get(0, 0));
        let p = sigma2_preorder(&[w("ab"), w("ba")], GameConfig::new(2, 2).unwrap()).unwrap();
        assert!(!p.get(0, 1) && !p.get(1, 0));
    }

    #[test]
    fn length_guard() {
        let long = vec!['a'; MAX_WORD_LEN + 1];
        assert!(matches!(
            ef_duplicator_wins(&long, &['a'], GameConfig::new(1, 1).unwrap()),
            Err(Error::Resource { .. })
        ));
    }
}
