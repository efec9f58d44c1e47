use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::monoid::Letter;

/// Ultimately periodic word `prefix · period^ω`; finite when `period` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UpWord {
    pub prefix: Vec<Letter>,
    pub period: Vec<Letter>,
}

impl UpWord {
    pub fn finite(word: &[Letter]) -> Self {
        UpWord {
            prefix: word.to_vec(),
            period: Vec::new(),
        }
    }

    pub fn infinite(prefix: &[Letter], period: &[Letter]) -> Self {
        assert!(!period.is_empty(), "infinite word needs a nonempty period");
        UpWord {
            prefix: prefix.to_vec(),
            period: period.to_vec(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn alph(&self) -> BTreeSet<Letter> {
        self.prefix.iter().chain(&self.period).copied().collect()
    }

    /// Letters occurring infinitely often.
    pub fn im(&self) -> BTreeSet<Letter> {
        self.period.iter().copied().collect()
    }

    /// Uniform lengths in `0..=max_prefix` and `1..=max_period`; finite with
    /// probability `finite_ratio`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        alphabet: &[Letter],
        max_prefix: usize,
        max_period: usize,
        finite_ratio: f64,
    ) -> Self {
        fn word<R: Rng + ?Sized>(rng: &mut R, alphabet: &[Letter], len: usize) -> Vec<Letter> {
            (0..len).map(|_| alphabet[rng.gen_range(0..alphabet.len())]).collect()
        }
        let lu = rng.gen_range(0..=max_prefix);
        let prefix = word(rng, alphabet, lu);
        if rng.gen_bool(finite_ratio) {
            UpWord::finite(&prefix)
        } else {
            let lv = rng.gen_range(1..=max_period.max(1));
            let period = word(rng, alphabet, lv);
            UpWord { prefix, period }
        }
    }

    /// The first `n` letters (fewer for a short finite word).
    pub fn unroll(&self, n: usize) -> Vec<Letter> {
        if self.is_finite() {
            return self.prefix.iter().copied().take(n).collect();
        }
        self.prefix
            .iter()
            .chain(self.period.iter().cycle())
            .copied()
            .take(n)
            .collect()
    }
}

impl fmt::Display for UpWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = self.prefix.iter().collect();
        if self.is_finite() {
            if s.is_empty() {
                write!(f, "ε")
            } else {
                write!(f, "{s}")
            }
        } else {
            let p: String = self.period.iter().collect();
            write!(f, "{s}({p})^w")
        }
    }
}

/// Syntax `u(v)^w` or `u`; `ε` or the empty string denote the empty word.
impl FromStr for UpWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = |msg: &str| Error::Input(format!("bad word {s:?}: {msg}"));
        let letters = |part: &str| -> Result<Vec<Letter>, Error> {
            if part == "ε" {
                return Ok(Vec::new());
            }
            part.chars()
                .map(|c| {
                    if c.is_whitespace() || "()^".contains(c) {
                        Err(bad("unexpected character"))
                    } else {
                        Ok(c)
                    }
                })
                .collect()
        };
        match s.find('(') {
            None => Ok(UpWord::finite(&letters(s)?)),
            Some(open) => {
                let rest = &s[open + 1..];
                let body = rest
                    .strip_suffix(")^w")
                    .ok_or_else(|| bad("expected a trailing ')^w'"))?;
                let period = letters(body)?;
                if period.is_empty() {
                    return Err(bad("empty period"));
                }
                Ok(UpWord {
                    prefix: letters(&s[..open])?,
                    period,
                })
            }
        }
    }
}
