//! Finite ordered monoids given by multiplication tables.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};

/// Dense element index `0..size`.
pub type Element = usize;

/// Alphabet symbol. Words are sequences of single characters.
pub type Letter = char;

/// A finite monoid with a stable partial order and an optional map from
/// letters to elements.
///
/// Values of this type always satisfy the structural invariants: the table is
/// associative, `neutral` is a two-sided identity, and `leq` is a stable
/// partial order. Use [`validate`] to diagnose a raw table.
#[derive(Clone, PartialEq, Eq)]
pub struct OrderedMonoid {
    size: usize,
    neutral: Element,
    mul: Vec<Element>,
    leq: BitMatrix,
    letters: BTreeMap<Letter, Element>,
    omega: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    Shape {
        detail: String,
    },
    NonAssociative {
        a: Element,
        b: Element,
        c: Element,
    },
    NeutralNotIdentity {
        x: Element,
    },
    NotReflexive {
        x: Element,
    },
    NotAntisymmetric {
        s: Element,
        t: Element,
    },
    NotTransitive {
        s: Element,
        t: Element,
        u: Element,
    },
    /// `s <= t` but `x s y <= x t y` fails.
    Unstable {
        s: Element,
        t: Element,
        x: Element,
        y: Element,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { detail } => write!(f, "malformed table: {detail}"),
            Violation::NonAssociative { a, b, c } => {
                write!(f, "not associative: ({a}*{b})*{c} != {a}*({b}*{c})")
            }
            Violation::NeutralNotIdentity { x } => {
                write!(f, "neutral element is not an identity for {x}")
            }
            Violation::NotReflexive { x } => write!(f, "order is not reflexive at {x}"),
            Violation::NotAntisymmetric { s, t } => {
                write!(f, "order is not antisymmetric: {s} <= {t} <= {s}")
            }
            Violation::NotTransitive { s, t, u } => {
                write!(f, "order is not transitive: {s} <= {t} <= {u} but not {s} <= {u}")
            }
            Violation::Unstable { s, t, x, y } => {
                write!(f, "order is not stable: {s} <= {t} but not {x}*{s}*{y} <= {x}*{t}*{y}")
            }
        }
    }
}

/// Outcome of [`validate`]: empty when the table is a valid ordered monoid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Checks a raw multiplication table and order. At most one witness is
/// reported per kind of violation.
pub fn validate(neutral: Element, mul: &[Vec<Element>], leq: &BitMatrix) -> ValidationReport {
    let n = mul.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::Shape {
            detail: "monoid must have at least one element".into(),
        });
        return ValidationReport { violations };
    }
    if neutral >= n {
        violations.push(Violation::Shape {
            detail: format!("neutral {neutral} out of range 0..{n}"),
        });
    }
    for (i, row) in mul.iter().enumerate() {
        if row.len() != n {
            violations.push(Violation::Shape {
                detail: format!("row {i} has {} entries, expected {n}", row.len()),
            });
        } else if let Some(j) = row.iter().position(|&v| v >= n) {
            violations.push(Violation::Shape {
                detail: format!("entry ({i},{j}) = {} out of range", row[j]),
            });
        }
    }
    if leq.size() != n {
        violations.push(Violation::Shape {
            detail: format!("order has dimension {}, expected {n}", leq.size()),
        });
    }
    if !violations.is_empty() {
        return ValidationReport { violations };
    }

    let m = |a: usize, b: usize| mul[a][b];
    'assoc: for a in 0..n {
        for b in 0..n {
            let ab = m(a, b);
            for c in 0..n {
                if m(ab, c) != m(a, m(b, c)) {
                    violations.push(Violation::NonAssociative { a, b, c });
                    break 'assoc;
                }
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| m(neutral, x) != x || m(x, neutral) != x) {
        violations.push(Violation::NeutralNotIdentity { x });
    }
    if let Some(x) = (0..n).find(|&x| !leq.get(x, x)) {
        violations.push(Violation::NotReflexive { x });
    }
    'anti: for s in 0..n {
        for t in s + 1..n {
            if leq.get(s, t) && leq.get(t, s) {
                violations.push(Violation::NotAntisymmetric { s, t });
                break 'anti;
            }
        }
    }
    'trans: for s in 0..n {
        for t in leq.row_ones(s) {
            for u in leq.row_ones(t) {
                if !leq.get(s, u) {
                    violations.push(Violation::NotTransitive { s, t, u });
                    break 'trans;
                }
            }
        }
    }
    // One-sided stability on both sides implies two-sided stability.
    'stable: for (s, t) in leq.pairs().collect::<Vec<_>>() {
        for x in 0..n {
            if !leq.get(m(x, s), m(x, t)) {
                violations.push(Violation::Unstable { s, t, x, y: neutral });
                break 'stable;
            }
            if !leq.get(m(s, x), m(t, x)) {
                violations.push(Violation::Unstable { s, t, x: neutral, y: x });
                break 'stable;
            }
        }
    }
    ValidationReport { violations }
}

impl OrderedMonoid {
    /// Builds a validated ordered monoid from a table.
    pub fn new(
        neutral: Element,
        mul: Vec<Vec<Element>>,
        leq: BitMatrix,
        letters: BTreeMap<Letter, Element>,
    ) -> Result<Self> {
        let report = validate(neutral, &mul, &leq);
        if !report.is_valid() {
            return Err(Error::InvalidMonoid(report));
        }
        let n = mul.len();
        if let Some((a, &i)) = letters.iter().find(|(_, &i)| i >= n) {
            return Err(Error::Input(format!("letter '{a}' maps to {i}, out of range")));
        }
        Ok(Self::from_parts(neutral, mul.concat(), leq, letters))
    }

    /// Table with the equality order.
    pub fn unordered(neutral: Element, mul: Vec<Vec<Element>>, letters: BTreeMap<Letter, Element>) -> Result<Self> {
        let n = mul.len();
        Self::new(neutral, mul, BitMatrix::identity(n), letters)
    }

    /// Trusted constructor for tables produced by this crate.
    pub(crate) fn from_parts(
        neutral: Element,
        mul: Vec<Element>,
        leq: BitMatrix,
        letters: BTreeMap<Letter, Element>,
    ) -> Self {
        let size = leq.size();
        debug_assert_eq!(mul.len(), size * size);
        let mut monoid = OrderedMonoid {
            size,
            neutral,
            mul,
            leq,
            letters,
            omega: Vec::new(),
        };
        monoid.omega = (0..size).map(|s| monoid.compute_idempotent_power(s)).collect();
        debug_assert!(size > 64 || monoid.check().is_valid(), "{}", monoid.check());
        monoid
    }

    /// Re-runs [`validate`] on this monoid's own table.
    pub fn check(&self) -> ValidationReport {
        validate(self.neutral, &self.table(), &self.leq)
    }

    pub fn trivial() -> Self {
        Self::from_parts(0, vec![0], BitMatrix::identity(1), BTreeMap::new())
    }

    /// Cyclic group `Z_k` with equality order; element `i` is `g^i`.
    pub fn cyclic_group(k: usize) -> Self {
        assert!(k >= 1);
        let mul = (0..k * k).map(|i| (i / k + i % k) % k).collect();
        Self::from_parts(0, mul, BitMatrix::identity(k), BTreeMap::new())
    }

    /// The multiplicative monoid `{1, 0}` with element 0 = `1` and element
    /// 1 = `0`, ordered by `0 <= 1` when `zero_below_one`, else by equality.
    pub fn one_zero(zero_below_one: bool) -> Self {
        let mut leq = BitMatrix::identity(2);
        if zero_below_one {
            leq.set(1, 0, true);
        }
        Self::from_parts(0, vec![0, 1, 1, 1], leq, BTreeMap::new())
    }

    /// Subsets of `alphabet` under union, ordered by inclusion. Element index
    /// is the bitmask over the sorted, deduplicated alphabet; `a` maps to `{a}`.
    pub fn powerset(alphabet: &[Letter]) -> Result<Self> {
        let mut letters: Vec<Letter> = alphabet.to_vec();
        letters.sort_unstable();
        letters.dedup();
        if letters.is_empty() {
            return Err(Error::Input("powerset monoid needs a nonempty alphabet".into()));
        }
        if letters.len() > 12 {
            return Err(Error::Resource {
                what: "powerset alphabet",
                cap: 12,
                observed: letters.len(),
            });
        }
        let n = 1usize << letters.len();
        let mul = (0..n * n).map(|i| (i / n) | (i % n)).collect();
        let leq = BitMatrix::from_fn(n, |b, c| b & !c == 0);
        let map = letters.iter().enumerate().map(|(i, &a)| (a, 1 << i)).collect();
        Ok(Self::from_parts(0, mul, leq, map))
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn neutral(&self) -> Element {
        self.neutral
    }

    #[inline]
    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.mul[a * self.size + b]
    }

    /// Product of a sequence of elements.
    pub fn product(&self, elements: impl IntoIterator<Item = Element>) -> Element {
        elements.into_iter().fold(self.neutral, |acc, x| self.mul(acc, x))
    }

    #[inline]
    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq.get(a, b)
    }

    pub fn order(&self) -> &BitMatrix {
        &self.leq
    }

    pub fn letters(&self) -> &BTreeMap<Letter, Element> {
        &self.letters
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        self.letters.keys().copied().collect()
    }

    pub fn letter(&self, a: Letter) -> Option<Element> {
        self.letters.get(&a).copied()
    }

    /// Image of a word under the letter homomorphism.
    pub fn eval_word(&self, word: &[Letter]) -> Result<Element> {
        word.iter().try_fold(self.neutral, |acc, &a| {
            self.letter(a)
                .map(|x| self.mul(acc, x))
                .ok_or_else(|| Error::Input(format!("letter '{a}' is not in the alphabet")))
        })
    }

    pub fn elements(&self) -> std::ops::Range<Element> {
        0..self.size
    }

    pub fn table(&self) -> Vec<Vec<Element>> {
        self.mul.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    pub fn is_idempotent(&self, e: Element) -> bool {
        self.mul(e, e) == e
    }

    pub fn idempotents(&self) -> Vec<Element> {
        self.elements().filter(|&e| self.is_idempotent(e)).collect()
    }

    /// The unique idempotent among the positive powers of `s`, which is
    /// `s^ω` for any valid global exponent.
    #[inline]
    pub fn idempotent_power(&self, s: Element) -> Element {
        self.omega[s]
    }

    fn compute_idempotent_power(&self, s: Element) -> Element {
        let mut p = s;
        for _ in 0..=self.size {
            if self.mul(p, p) == p {
                return p;
            }
            p = self.mul(p, s);
        }
        unreachable!("cyclic subsemigroup of a finite monoid contains an idempotent")
    }

    /// `s^k` by repeated multiplication.
    pub fn pow(&self, s: Element, k: usize) -> Element {
        (0..k).fold(self.neutral, |acc, _| self.mul(acc, s))
    }

    /// Same table and order with a different letter map.
    pub fn with_letters(&self, letters: BTreeMap<Letter, Element>) -> Result<Self> {
        if let Some((a, &i)) = letters.iter().find(|(_, &i)| i >= self.size) {
            return Err(Error::Input(format!("letter '{a}' maps to {i}, out of range")));
        }
        let mut out = self.clone();
        out.letters = letters;
        Ok(out)
    }

    /// Same table with a different order; the order is validated.
    pub fn with_order(&self, leq: BitMatrix) -> Result<Self> {
        Self::new(self.neutral, self.table(), leq, self.letters.clone())
    }

    /// Replaces the order without re-validating it; the caller guarantees
    /// stability.
    pub(crate) fn with_order_unchecked(self, leq: BitMatrix) -> Self {
        Self::from_parts(self.neutral, self.mul, leq, self.letters)
    }

    /// Componentwise product. Element `(i, j)` has index `i * m2.size() + j`.
    /// Letters are kept when both factors define them.
    pub fn direct_product(&self, other: &OrderedMonoid) -> OrderedMonoid {
        let (n1, n2) = (self.size, other.size);
        let n = n1 * n2;
        let split = |i: usize| (i / n2, i % n2);
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            let (a1, a2) = split(a);
            for b in 0..n {
                let (b1, b2) = split(b);
                mul.push(self.mul(a1, b1) * n2 + other.mul(a2, b2));
            }
        }
        let leq = BitMatrix::from_fn(n, |a, b| {
            let ((a1, a2), (b1, b2)) = (split(a), split(b));
            self.leq(a1, b1) && other.leq(a2, b2)
        });
        let letters = self
            .letters
            .iter()
            .filter_map(|(&c, &x)| other.letter(c).map(|y| (c, x * n2 + y)))
            .collect();
        OrderedMonoid::from_parts(self.neutral * n2 + other.neutral, mul, leq, letters)
    }

    /// Elements reachable from the neutral element by right multiplication
    /// with letter images, in breadth-first order (neutral first).
    pub fn accessible_elements(&self) -> Vec<Element> {
        let gens: Vec<Element> = self.letters.values().copied().collect();
        let mut seen = vec![false; self.size];
        let mut order = vec![self.neutral];
        seen[self.neutral] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            i += 1;
            for &g in &gens {
                let t = self.mul(s, g);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    /// Restriction to a subset closed under multiplication that contains the
    /// neutral element. Returns the submonoid and the map new index -> old.
    pub fn submonoid(&self, elements: &[Element]) -> Result<(OrderedMonoid, Vec<Element>)> {
        let mut index = vec![usize::MAX; self.size];
        for (i, &e) in elements.iter().enumerate() {
            index[e] = i;
        }
        if index[self.neutral] == usize::MAX {
            return Err(Error::Input("submonoid must contain the neutral element".into()));
        }
        let k = elements.len();
        let mut mul = Vec::with_capacity(k * k);
        for &a in elements {
            for &b in elements {
                let p = index[self.mul(a, b)];
                if p == usize::MAX {
                    return Err(Error::Input("subset is not closed under multiplication".into()));
                }
                mul.push(p);
            }
        }
        let leq = BitMatrix::from_fn(k, |i, j| self.leq(elements[i], elements[j]));
        let letters = self
            .letters
            .iter()
            .filter(|(_, &x)| index[x] != usize::MAX)
            .map(|(&c, &x)| (c, index[x]))
            .collect();
        Ok((
            OrderedMonoid::from_parts(index[self.neutral], mul, leq, letters),
            elements.to_vec(),
        ))
    }

    /// Returns an isomorphic copy with elements renumbered by `perm`
    /// (`perm[old] = new`).
    pub fn relabel(&self, perm: &[Element]) -> OrderedMonoid {
        let n = self.size;
        let mut inv = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let mut mul = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                mul.push(perm[self.mul(inv[a], inv[b])]);
            }
        }
        let leq = BitMatrix::from_fn(n, |a, b| self.leq(inv[a], inv[b]));
        let letters = self.letters.iter().map(|(&c, &x)| (c, perm[x])).collect();
        OrderedMonoid::from_parts(perm[self.neutral], mul, leq, letters)
    }

    /// Canonical renumbering of a letter-generated monoid by breadth-first
    /// discovery from the neutral element. Two letter-generated ordered
    /// monoids are isomorphic (compatibly with the letter maps) iff their
    /// canonical forms are equal. Returns `None` when some element is not
    /// reachable from the letters.
    pub fn canonical(&self) -> Option<OrderedMonoid> {
        let order = self.accessible_elements();
        if order.len() != self.size {
            return None;
        }
        let mut perm = vec![0; self.size];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        Some(self.relabel(&perm))
    }

    /// Exhaustive search for an order- and product-preserving bijection.
    /// Intended for small monoids in tests and diagnostics.
    pub fn find_isomorphism(&self, other: &OrderedMonoid) -> Option<Vec<Element>> {
        if self.size != other.size {
            return None;
        }
        let n = self.size;
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        map[self.neutral] = other.neutral;
        used[other.neutral] = true;
        fn extend(
            a: &OrderedMonoid,
            b: &OrderedMonoid,
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
            next: usize,
        ) -> bool {
            let n = a.size;
            if next == n {
                return (0..n).all(|x| {
                    (0..n).all(|y| map[a.mul(x, y)] == b.mul(map[x], map[y]) && a.leq(x, y) == b.leq(map[x], map[y]))
                });
            }
            if map[next] != usize::MAX {
                return extend(a, b, map, used, next + 1);
            }
            for cand in 0..n {
                if used[cand] || a.is_idempotent(next) != b.is_idempotent(cand) {
                    continue;
                }
                map[next] = cand;
                used[cand] = true;
                let consistent = (0..next)
                    .filter(|&x| map[x] != usize::MAX)
                    .all(|x| a.leq(x, next) == b.leq(map[x], cand) && a.leq(next, x) == b.leq(cand, map[x]));
                if consistent && extend(a, b, map, used, next + 1) {
                    return true;
                }
                map[next] = usize::MAX;
                used[cand] = false;
            }
            false
        }
        extend(self, other, &mut map, &mut used, 0).then_some(map)
    }
}

impl fmt::Debug for OrderedMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrderedMonoid")
            .field("size", &self.size)
            .field("neutral", &self.neutral)
            .field("mul", &self.table())
            .field("order", &self.leq.pairs().filter(|(a, b)| a != b).collect::<Vec<_>>())
            .field("letters", &self.letters)
            .finish()
    }
}
