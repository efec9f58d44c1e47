//! Linked pairs, conjugacy and the ordered conjugacy preorder `≲`.

use serde::{Deserialize, Serialize};

use crate::monoid::{Element, OrderedMonoid};

/// `(s, e)` with `s·e = s` and `e·e = e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinkedPair {
    pub s: Element,
    pub e: Element,
}

impl LinkedPair {
    pub fn new(s: Element, e: Element) -> Self {
        LinkedPair { s, e }
    }

    pub fn is_linked(&self, m: &OrderedMonoid) -> bool {
        m.is_idempotent(self.e) && m.mul(self.s, self.e) == self.s
    }
}

impl OrderedMonoid {
    /// All linked pairs, ordered by `(s, e)`.
    pub fn linked_pairs(&self) -> Vec<LinkedPair> {
        let idem = self.idempotents();
        self.elements()
            .flat_map(|s| {
                idem.iter()
                    .filter(move |&&e| self.mul(s, e) == s)
                    .map(move |&e| LinkedPair::new(s, e))
            })
            .collect()
    }

    /// Witness `(x, y)` with `s·x = t`, `x·y = e`, `y·x = f`, if any.
    pub fn conjugacy_witness(&self, p: LinkedPair, q: LinkedPair) -> Option<(Element, Element)> {
        for x in self.elements() {
            if self.mul(p.s, x) != q.s {
                continue;
            }
            for y in self.elements() {
                if self.mul(x, y) == p.e && self.mul(y, x) == q.e {
                    return Some((x, y));
                }
            }
        }
        None
    }

    pub fn is_conjugate(&self, p: LinkedPair, q: LinkedPair) -> bool {
        self.conjugacy_witness(p, q).is_some()
    }

    /// `p ≲ q`: some linked `(r, f)` is conjugate to `p` with `r ≤ q.s`,
    /// where `f = q.e`.
    pub fn lesssim(&self, p: LinkedPair, q: LinkedPair) -> bool {
        self.elements()
            .any(|r| self.leq(r, q.s) && self.mul(r, q.e) == r && self.is_conjugate(p, LinkedPair::new(r, q.e)))
    }
}
