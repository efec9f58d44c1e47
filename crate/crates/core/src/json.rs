//! Monoid file format:
//! `{"size": n, "neutral": i, "mul": [[...]], "order": [[s, t], ...], "letters": {"a": i}}`.
//! `order` lists pairs `s ≤ t`; reflexive pairs may be omitted and the
//! transitive closure is taken before validation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::monoid::{Element, OrderedMonoid};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidFile {
    pub size: usize,
    pub neutral: Element,
    pub mul: Vec<Vec<Element>>,
    #[serde(default)]
    pub order: Vec<(Element, Element)>,
    #[serde(default)]
    pub letters: BTreeMap<String, Element>,
}

impl MonoidFile {
    pub fn into_monoid(self) -> Result<OrderedMonoid> {
        let n = self.size;
        if n == 0 {
            return Err(Error::Input("size must be positive".into()));
        }
        if self.mul.len() != n {
            return Err(Error::Input(format!(
                "mul: expected {n} rows, found {}",
                self.mul.len()
            )));
        }
        for (i, row) in self.mul.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!(
                    "mul[{i}]: expected {n} entries, found {}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|&x| x >= n) {
                return Err(Error::Input(format!("mul[{i}][{j}] = {} is out of range", row[j])));
            }
        }
        if self.neutral >= n {
            return Err(Error::Input(format!("neutral {} is out of range", self.neutral)));
        }
        let mut leq = BitMatrix::identity(n);
        for (k, &(s, t)) in self.order.iter().enumerate() {
            if s >= n || t >= n {
                return Err(Error::Input(format!("order[{k}] = [{s}, {t}] is out of range")));
            }
            leq.set(s, t, true);
        }
        leq.transitive_closure();
        let mut letters = BTreeMap::new();
        for (name, &x) in &self.letters {
            let mut chars = name.chars();
            let c = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => return Err(Error::Input(format!("letters: {name:?} is not a single character"))),
            };
            letters.insert(c, x);
        }
        OrderedMonoid::new(self.neutral, self.mul, leq, letters)
    }

    pub fn from_monoid(m: &OrderedMonoid) -> Self {
        MonoidFile {
            size: m.size(),
            neutral: m.neutral(),
            mul: m.table(),
            order: m.order().pairs().filter(|(s, t)| s != t).collect(),
            letters: m.letters().iter().map(|(c, &x)| (c.to_string(), x)).collect(),
        }
    }
}

pub fn monoid_from_json(text: &str) -> Result<OrderedMonoid> {
    let file: MonoidFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("monoid file: {e}")))?;
    file.into_monoid()
}

pub fn monoid_to_json(m: &OrderedMonoid) -> String {
    serde_json::to_string(&MonoidFile::from_monoid(m)).expect("monoid files serialize")
}
