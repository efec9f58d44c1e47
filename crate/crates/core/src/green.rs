//! Green's preorders by principal-ideal inclusion.

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::monoid::{Element, OrderedMonoid};

/// `rleq[s][t]` iff `s ∈ tM`, `lleq[s][t]` iff `s ∈ Mt`, `jleq[s][t]` iff `s ∈ MtM`.
#[derive(Debug, Clone)]
pub struct GreenData {
    pub rleq: BitMatrix,
    pub lleq: BitMatrix,
    pub jleq: BitMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GreenClasses {
    pub r: Vec<Vec<Element>>,
    pub l: Vec<Vec<Element>>,
    pub j: Vec<Vec<Element>>,
}

impl GreenData {
    pub fn new(m: &OrderedMonoid) -> Self {
        let n = m.size();
        let mut rleq = BitMatrix::new(n);
        let mut lleq = BitMatrix::new(n);
        let mut jleq = BitMatrix::new(n);
        for t in m.elements() {
            for x in m.elements() {
                rleq.set(m.mul(t, x), t, true);
                lleq.set(m.mul(x, t), t, true);
                let xt = m.mul(x, t);
                for y in m.elements() {
                    jleq.set(m.mul(xt, y), t, true);
                }
            }
        }
        GreenData { rleq, lleq, jleq }
    }

    pub fn r_leq(&self, s: Element, t: Element) -> bool {
        self.rleq.get(s, t)
    }

    pub fn l_leq(&self, s: Element, t: Element) -> bool {
        self.lleq.get(s, t)
    }

    pub fn j_leq(&self, s: Element, t: Element) -> bool {
        self.jleq.get(s, t)
    }

    pub fn r_eq(&self, s: Element, t: Element) -> bool {
        self.rleq.get(s, t) && self.rleq.get(t, s)
    }

    pub fn l_eq(&self, s: Element, t: Element) -> bool {
        self.lleq.get(s, t) && self.lleq.get(t, s)
    }

    pub fn j_eq(&self, s: Element, t: Element) -> bool {
        self.jleq.get(s, t) && self.jleq.get(t, s)
    }

    pub fn classes(&self) -> GreenClasses {
        GreenClasses {
            r: classes_of(&self.rleq),
            l: classes_of(&self.lleq),
            j: classes_of(&self.jleq),
        }
    }
}

/// Equivalence classes of the symmetric part of a preorder, each sorted,
/// listed by smallest member.
pub(crate) fn classes_of(pre: &BitMatrix) -> Vec<Vec<Element>> {
    let n = pre.size();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for s in 0..n {
        if assigned[s] {
            continue;
        }
        let class: Vec<Element> = (s..n)
            .filter(|&t| !assigned[t] && pre.get(s, t) && pre.get(t, s))
            .collect();
        for &t in &class {
            assigned[t] = true;
        }
        out.push(class);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_zero() {
        let m = OrderedMonoid::one_zero(true);
        let g = GreenData::new(&m);
        // element 1 is the zero
        assert!(g.j_leq(1, 0));
        assert!(!g.j_leq(0, 1));
        assert_eq!(g.classes().j, vec![vec![0], vec![1]]);
    }

    #[test]
    fn group_has_one_j_class() {
        let m = OrderedMonoid::cyclic_group(4);
        let g = GreenData::new(&m);
        let c = g.classes();
        assert_eq!(c.j, vec![vec![0, 1, 2, 3]]);
        assert_eq!(c.r, c.j);
        assert_eq!(c.l, c.j);
    }

    #[test]
    fn powerset_ideals() {
        let m = OrderedMonoid::powerset(&['a', 'b']).unwrap();
        let g = GreenData::new(&m);
        for b in 0..4usize {
            for c in 0..4usize {
                // B <=_J C iff C ⊆ B
                assert_eq!(g.j_leq(b, c), c & !b == 0, "{b} {c}");
            }
        }
        assert!(g.classes().r.iter().all(|c| c.len() == 1));
    }
}
