use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::green::classes_of;
use crate::monoid::{Element, OrderedMonoid};
use crate::varieties::quotient_by;

use super::recognize::RecognizedLanguage;

/// Syntactic quotient with the projection from the input recognizer.
#[derive(Debug, Clone)]
pub struct SyntacticQuotient {
    pub language: RecognizedLanguage,
    /// Input element to its class; `None` for elements that are not images
    /// of words.
    pub projection: Vec<Option<Element>>,
}

/// Syntactic monoid of the finite-word part together with its final set.
#[derive(Debug, Clone)]
pub struct FiniteSyntactic {
    pub monoid: OrderedMonoid,
    pub finals: Vec<bool>,
    pub projection: Vec<Option<Element>>,
}

/// Greatest relation contained in `base` that is compatible with left and
/// right multiplication by every letter image.
fn letter_stable_core(m: &OrderedMonoid, mut rel: BitMatrix) -> BitMatrix {
    let gens: Vec<Element> = m.letters().values().copied().collect();
    loop {
        let mut changed = false;
        for s in m.elements() {
            for t in m.elements() {
                if !rel.get(s, t) {
                    continue;
                }
                let broken = gens
                    .iter()
                    .any(|&a| !rel.get(m.mul(s, a), m.mul(t, a)) || !rel.get(m.mul(a, s), m.mul(a, t)));
                if broken {
                    rel.set(s, t, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return rel;
        }
    }
}

/// Restricts to the elements reachable from the letters; returns the
/// submonoid and the old index of each new element.
fn accessible(m: &OrderedMonoid) -> Result<(OrderedMonoid, Vec<Element>)> {
    let mut reach = m.accessible_elements();
    reach.sort_unstable();
    m.submonoid(&reach)
}

fn canonical_quotient(m: &OrderedMonoid, pre: &BitMatrix) -> Result<(OrderedMonoid, Vec<Element>, Vec<Element>)> {
    let classes = classes_of(pre);
    let mut class_of = vec![0; m.size()];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    let q = quotient_by(m, pre, &classes, &class_of)?;
    // canonical numbering: breadth-first from the neutral element
    let order = q.monoid.accessible_elements();
    if order.len() != q.monoid.size() {
        return Err(Error::Invariant(
            "quotient of a letter-generated monoid is not letter-generated".into(),
        ));
    }
    let mut perm = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        perm[old] = new;
    }
    let monoid = q.monoid.relabel(&perm);
    let projection = class_of.iter().map(|&c| perm[c]).collect();
    let reps = order.iter().map(|&c| classes[c][0]).collect();
    Ok((monoid, projection, reps))
}

fn lift_projection(original: usize, kept: &[Element], projection: &[Element]) -> Vec<Option<Element>> {
    let mut out = vec![None; original];
    for (new, &old) in kept.iter().enumerate() {
        out[old] = Some(projection[new]);
    }
    out
}

/// Syntactic ordered monoid of `L ⊆ A^∞` with the induced acceptance.
///
/// `s ≤ t` iff for all contexts, `x s y z^ω ∈ L ⇒ x t y z^ω ∈ L` and
/// `x (s y)^ω ∈ L ⇒ x (t y)^ω ∈ L`. Computed as the greatest
/// letter-stable relation inside the one-step context inclusion.
/// The result is numbered canonically, so two recognizers of the same
/// language give equal outputs.
pub fn syntactic_quotient(l: &RecognizedLanguage) -> Result<SyntacticQuotient> {
    let (m, kept) = accessible(l.monoid())?;
    let n = m.size();
    let acc = |p: Element, q: Element| l.accepts_context(kept[p], kept[q]);
    // F(s) = { z : s z^ω accepted }, G(s) = { x : x s^ω accepted }
    let future = BitMatrix::from_fn(n, &acc);
    let past = BitMatrix::from_fn(n, |s, x| acc(x, s));
    let base = BitMatrix::from_fn(n, |s, t| future.row_subset(s, t) && past.row_subset(s, t));
    let pre = letter_stable_core(&m, base);
    let (monoid, projection, reps) = canonical_quotient(&m, &pre)?;
    let k = monoid.size();
    let accept = BitMatrix::from_fn(k, |s, e| {
        monoid.mul(s, e) == s && monoid.is_idempotent(e) && acc(reps[s], reps[e])
    });
    let language = RecognizedLanguage::from_bits(monoid, accept, l.source().cloned());
    Ok(SyntacticQuotient {
        language,
        projection: lift_projection(l.monoid().size(), &kept, &projection),
    })
}

/// Syntactic ordered monoid of the finite words of `L`:
/// `s ≤ t` iff `x s y ∈ L ⇒ x t y ∈ L` for all finite contexts.
pub fn finite_syntactic_monoid(l: &RecognizedLanguage) -> Result<FiniteSyntactic> {
    let (m, kept) = accessible(l.monoid())?;
    let n = m.size();
    let neutral = l.monoid().neutral();
    let fin = |p: Element| l.accepts(crate::pairs::LinkedPair::new(kept[p], neutral));
    let base = BitMatrix::from_fn(n, |s, t| !fin(s) || fin(t));
    let pre = letter_stable_core(&m, base);
    let (monoid, projection, reps) = canonical_quotient(&m, &pre)?;
    let finals = reps.iter().map(|&r| fin(r)).collect();
    Ok(FiniteSyntactic {
        monoid,
        finals,
        projection: lift_projection(l.monoid().size(), &kept, &projection),
    })
}
