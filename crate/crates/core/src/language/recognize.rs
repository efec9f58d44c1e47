use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::automaton::{Automaton, AutomatonFile, BuchiAutomaton, Nfa};
use super::upword::UpWord;
use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::monoid::{Element, Letter, OrderedMonoid};
use crate::pairs::LinkedPair;

pub const DEFAULT_SIZE_CAP: usize = 5000;

/// Finite part and infinite part of a language over `A^∞`, given by automata.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutomataLanguage {
    pub finite: Option<Nfa>,
    pub infinite: Option<BuchiAutomaton>,
}

/// `{"finite": <automaton or null>, "infinite": <automaton or null>}`
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LanguageFile {
    #[serde(default)]
    pub finite: Option<AutomatonFile>,
    #[serde(default)]
    pub infinite: Option<AutomatonFile>,
}

impl TryFrom<LanguageFile> for AutomataLanguage {
    type Error = Error;

    fn try_from(f: LanguageFile) -> Result<Self> {
        let finite = f.finite.map(Automaton::try_from).transpose()?.map(Nfa);
        let infinite = f.infinite.map(Automaton::try_from).transpose()?.map(BuchiAutomaton);
        AutomataLanguage::new(finite, infinite)
    }
}

impl AutomataLanguage {
    pub fn new(finite: Option<Nfa>, infinite: Option<BuchiAutomaton>) -> Result<Self> {
        match (&finite, &infinite) {
            (None, None) => return Err(Error::Input("language needs a finite or an infinite part".into())),
            (Some(n), Some(b)) if n.alphabet() != b.alphabet() => {
                return Err(Error::Input(format!(
                    "alphabet mismatch: finite part uses {:?}, infinite part uses {:?}",
                    n.alphabet(),
                    b.alphabet()
                )))
            }
            _ => {}
        }
        Ok(AutomataLanguage { finite, infinite })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: LanguageFile = serde_json::from_str(text).map_err(|e| Error::Input(format!("language file: {e}")))?;
        Self::try_from(file)
    }

    pub fn alphabet(&self) -> &[Letter] {
        match (&self.finite, &self.infinite) {
            (Some(n), _) => n.alphabet(),
            (None, Some(b)) => b.alphabet(),
            (None, None) => unreachable!("checked in constructor"),
        }
    }

    /// Membership by direct simulation; a missing part rejects.
    pub fn member(&self, w: &UpWord) -> Result<bool> {
        if let Some(c) = w.alph().into_iter().find(|c| !self.alphabet().contains(c)) {
            return Err(Error::Input(format!("letter '{c}' is not in the alphabet")));
        }
        if w.is_finite() {
            self.finite.as_ref().map_or(Ok(false), |n| n.accepts(&w.prefix))
        } else {
            self.infinite
                .as_ref()
                .map_or(Ok(false), |b| b.accepts_lasso(&w.prefix, &w.period))
        }
    }
}

/// `member_up_automaton`: finite words via the NFA, infinite words by lasso
/// search in the Büchi automaton.
pub fn member_up_automaton(n: Option<&Nfa>, b: Option<&BuchiAutomaton>, w: &UpWord) -> Result<bool> {
    if w.is_finite() {
        n.map_or(Ok(false), |n| n.accepts(&w.prefix))
    } else {
        b.map_or(Ok(false), |b| b.accepts_lasso(&w.prefix, &w.period))
    }
}

/// A language over `A^∞` given by an ordered monoid and a set of accepted
/// linked pairs: `L = ⋃ { [s][e]^ω : (s,e) ∈ accept }`.
#[derive(Debug, Clone)]
pub struct RecognizedLanguage {
    monoid: OrderedMonoid,
    accept: BitMatrix,
    source: Option<Arc<AutomataLanguage>>,
}

impl RecognizedLanguage {
    pub fn new(monoid: OrderedMonoid, accept: impl IntoIterator<Item = LinkedPair>) -> Result<Self> {
        if monoid.letters().is_empty() {
            return Err(Error::Input("recognizer needs a nonempty letter map".into()));
        }
        let n = monoid.size();
        let mut bits = BitMatrix::new(n);
        for p in accept {
            if p.s >= n || p.e >= n || !p.is_linked(&monoid) {
                return Err(Error::Input(format!("accepted pair ({}, {}) is not linked", p.s, p.e)));
            }
            bits.set(p.s, p.e, true);
        }
        Ok(RecognizedLanguage {
            monoid,
            accept: bits,
            source: None,
        })
    }

    /// Every linked pair accepted, i.e. `A^∞` when `monoid` is a recognizer.
    pub fn universal(monoid: OrderedMonoid) -> Result<Self> {
        let pairs = monoid.linked_pairs();
        Self::new(monoid, pairs)
    }

    pub(crate) fn from_bits(monoid: OrderedMonoid, accept: BitMatrix, source: Option<Arc<AutomataLanguage>>) -> Self {
        debug_assert!(accept.pairs().all(|(s, e)| LinkedPair::new(s, e).is_linked(&monoid)));
        RecognizedLanguage { monoid, accept, source }
    }

    pub fn with_source(mut self, source: Arc<AutomataLanguage>) -> Self {
        self.source = Some(source);
        self
    }

    pub fn monoid(&self) -> &OrderedMonoid {
        &self.monoid
    }

    pub fn source(&self) -> Option<&Arc<AutomataLanguage>> {
        self.source.as_ref()
    }

    pub fn alphabet(&self) -> Vec<Letter> {
        self.monoid.alphabet()
    }

    pub fn accepts(&self, p: LinkedPair) -> bool {
        self.accept.get(p.s, p.e)
    }

    pub fn accept_matrix(&self) -> &BitMatrix {
        &self.accept
    }

    /// Accepted pairs in lexicographic order.
    pub fn accepted_pairs(&self) -> Vec<LinkedPair> {
        self.accept.pairs().map(|(s, e)| LinkedPair::new(s, e)).collect()
    }

    /// Acceptance of `[p][q]^ω`, normalized to the linked pair `(p·q^π, q^π)`.
    pub fn accepts_context(&self, p: Element, q: Element) -> bool {
        let e = self.monoid.idempotent_power(q);
        self.accept.get(self.monoid.mul(p, e), e)
    }

    /// `member_up_monoid`.
    pub fn member(&self, w: &UpWord) -> Result<bool> {
        let s = self.monoid.eval_word(&w.prefix)?;
        let v = self.monoid.eval_word(&w.period)?;
        Ok(self.accepts_context(s, v))
    }

    /// Alphabet content of each element when the recognizer is alphabetic
    /// (every word mapped to `s` has the same set of letters), as bitmasks
    /// over the sorted alphabet. `None` otherwise.
    pub fn alph_masks(&self) -> Option<Vec<u64>> {
        alph_masks(&self.monoid)
    }

    pub fn is_alphabetic(&self) -> bool {
        self.alph_masks().is_some()
    }
}

pub(crate) fn alph_masks(m: &OrderedMonoid) -> Option<Vec<u64>> {
    let letters: Vec<(usize, Element)> = m.letters().values().copied().enumerate().collect();
    if letters.len() > 64 {
        return None;
    }
    let mut mask: Vec<Option<u64>> = vec![None; m.size()];
    mask[m.neutral()] = Some(0);
    let mut queue = vec![m.neutral()];
    let mut i = 0;
    while i < queue.len() {
        let s = queue[i];
        i += 1;
        let ms = mask[s].expect("queued elements have masks");
        for &(bit, g) in &letters {
            let t = m.mul(s, g);
            let mt = ms | (1 << bit);
            match mask[t] {
                None => {
                    mask[t] = Some(mt);
                    queue.push(t);
                }
                Some(old) if old != mt => return None,
                Some(_) => {}
            }
        }
    }
    mask.into_iter().collect()
}

// ---------------------------------------------------------------------------
// Transition monoids

/// Product over the semiring `{0 < 1 < 2}` (no path, path, path through an
/// accepting state): sums are max, products are 0 if either factor is 0 and
/// max otherwise.
fn matrix_product(a: &[u8], b: &[u8], q: usize) -> Vec<u8> {
    let mut c = vec![0u8; q * q];
    for i in 0..q {
        for k in 0..q {
            let x = a[i * q + k];
            if x == 0 {
                continue;
            }
            for j in 0..q {
                let y = b[k * q + j];
                if y != 0 {
                    let v = x.max(y);
                    if v > c[i * q + j] {
                        c[i * q + j] = v;
                    }
                }
            }
        }
    }
    c
}

/// Closure of the letter generators under right multiplication, discovered
/// breadth first from the identity. Products of arbitrary elements are
/// obtained by replaying the right factor's representative word.
fn generate<T: Clone + Eq + Hash>(
    identity: T,
    gens: &[(Letter, T)],
    mul: impl Fn(&T, &T) -> T,
    cap: usize,
    what: &'static str,
) -> Result<(OrderedMonoid, Vec<T>)> {
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (gi, (_, g)) in gens.iter().enumerate() {
            let t = mul(&elements[i], g);
            let id = match index.get(&t) {
                Some(&id) => id,
                None => {
                    let id = elements.len();
                    if id >= cap {
                        return Err(Error::Resource {
                            what,
                            cap,
                            observed: id + 1,
                        });
                    }
                    index.insert(t.clone(), id);
                    elements.push(t);
                    parent.push((i, gi));
                    id
                }
            };
            row.push(id);
        }
        right.push(row);
        i += 1;
    }
    let n = elements.len();
    // representative words, shortest first by construction
    let mut words: Vec<Vec<usize>> = vec![Vec::new(); n];
    for t in 1..n {
        let (p, g) = parent[t];
        let mut w = words[p].clone();
        w.push(g);
        words[t] = w;
    }
    let mut table = Vec::with_capacity(n * n);
    for s in 0..n {
        for w in &words {
            table.push(w.iter().fold(s, |x, &g| right[x][g]));
        }
    }
    let letters: BTreeMap<Letter, Element> = gens.iter().enumerate().map(|(gi, (c, _))| (*c, right[0][gi])).collect();
    let monoid = OrderedMonoid::from_parts(0, table, BitMatrix::identity(n), letters);
    Ok((monoid, elements))
}

struct MatrixMonoid {
    monoid: OrderedMonoid,
    matrices: Vec<Vec<u8>>,
    q: usize,
}

fn transition_matrices(a: &Automaton, buchi: bool, cap: usize, what: &'static str) -> Result<MatrixMonoid> {
    let q = a.num_states();
    let mut identity = vec![0u8; q * q];
    for i in 0..q {
        identity[i * q + i] = 1;
    }
    let gens: Vec<(Letter, Vec<u8>)> = a
        .alphabet()
        .iter()
        .enumerate()
        .map(|(ai, &c)| {
            let mut m = vec![0u8; q * q];
            for i in 0..q {
                for &j in a.successors(i, ai) {
                    m[i * q + j] = if buchi && (a.is_accepting(i) || a.is_accepting(j)) {
                        2
                    } else {
                        1
                    };
                }
            }
            (c, m)
        })
        .collect();
    let (monoid, matrices) = generate(identity, &gens, |x, y| matrix_product(x, y, q), cap, what)?;
    Ok(MatrixMonoid { monoid, matrices, q })
}

fn nfa_final(a: &Automaton, m: &[u8], q: usize) -> bool {
    a.initial()
        .iter()
        .any(|&i| (0..q).any(|j| a.is_accepting(j) && m[i * q + j] != 0))
}

fn buchi_accepts(a: &Automaton, s: &[u8], e: &[u8], q: usize) -> bool {
    a.initial()
        .iter()
        .any(|&i| (0..q).any(|j| s[i * q + j] != 0 && e[j * q + j] == 2))
}

/// Monoid of Boolean transition matrices of `n` and its final elements.
pub fn nfa_transition_monoid(n: &Nfa, cap: usize) -> Result<(OrderedMonoid, Vec<bool>)> {
    let mm = transition_matrices(n, false, cap, "NFA transition monoid")?;
    let finals = mm.matrices.iter().map(|m| nfa_final(n, m, mm.q)).collect();
    Ok((mm.monoid, finals))
}

/// Recognizer of `L(b) ⊆ A^ω` from the `{0,1,2}` transition matrices.
pub fn buchi_transition_monoid(b: &BuchiAutomaton, cap: usize) -> Result<RecognizedLanguage> {
    let mm = transition_matrices(b, true, cap, "Büchi transition monoid")?;
    let n = mm.monoid.size();
    let accept = BitMatrix::from_fn(n, |s, e| {
        LinkedPair::new(s, e).is_linked(&mm.monoid) && buchi_accepts(b, &mm.matrices[s], &mm.matrices[e], mm.q)
    });
    let source = AutomataLanguage::new(None, Some(b.clone()))?;
    Ok(RecognizedLanguage::from_bits(mm.monoid, accept, Some(Arc::new(source))))
}

/// Submonoid of `m1 × m2` generated by the pairs of letter images.
/// Returns the monoid and, per element, its pair of components.
pub(crate) fn accessible_product(
    m1: &OrderedMonoid,
    m2: &OrderedMonoid,
    cap: usize,
) -> Result<(OrderedMonoid, Vec<(Element, Element)>)> {
    let gens: Vec<(Letter, (Element, Element))> = m1
        .letters()
        .iter()
        .filter_map(|(&c, &x)| m2.letter(c).map(|y| (c, (x, y))))
        .collect();
    let (monoid, pairs) = generate(
        (m1.neutral(), m2.neutral()),
        &gens,
        |&(a1, a2), &(b1, b2)| (m1.mul(a1, b1), m2.mul(a2, b2)),
        cap,
        "product monoid",
    )?;
    let leq = BitMatrix::from_fn(pairs.len(), |i, j| {
        m1.leq(pairs[i].0, pairs[j].0) && m2.leq(pairs[i].1, pairs[j].1)
    });
    Ok((monoid.with_order_unchecked(leq), pairs))
}

/// Accessible part of `M × 2^A` with `μ′(u) = (μ(u), alph(u))`. Returns the
/// recognizer and, per new element, its component in the old monoid.
pub fn make_alphabetic_with_map(l: &RecognizedLanguage, cap: usize) -> Result<(RecognizedLanguage, Vec<Element>)> {
    let powerset = OrderedMonoid::powerset(&l.alphabet())?;
    let (monoid, pairs) = accessible_product(&l.monoid, &powerset, cap)?;
    let n = monoid.size();
    let accept = BitMatrix::from_fn(n, |s, e| {
        LinkedPair::new(s, e).is_linked(&monoid) && l.accept.get(pairs[s].0, pairs[e].0)
    });
    let map = pairs.iter().map(|p| p.0).collect();
    Ok((RecognizedLanguage::from_bits(monoid, accept, l.source.clone()), map))
}

pub fn make_alphabetic(l: &RecognizedLanguage) -> Result<RecognizedLanguage> {
    make_alphabetic_with_map(l, usize::MAX).map(|r| r.0)
}

/// Alphabetic recognizer of `N ∪ B` over `A^∞`: product of the two
/// transition monoids (a missing part contributes the trivial monoid),
/// made alphabetic so that `(s,1)` pairs capture exactly the finite words.
pub fn combine_infty(n: Option<&Nfa>, b: Option<&BuchiAutomaton>, cap: usize) -> Result<RecognizedLanguage> {
    let source = AutomataLanguage::new(n.cloned(), b.cloned())?;
    let alphabet = source.alphabet().to_vec();
    let trivial = || {
        let letters = alphabet.iter().map(|&c| (c, 0)).collect();
        (OrderedMonoid::trivial().with_letters(letters), vec![false])
    };
    let (mn, finals) = match n {
        Some(n) => nfa_transition_monoid(n, cap)?,
        None => {
            let (m, f) = trivial();
            (m?, f)
        }
    };
    let mb = match b {
        Some(b) => Some(transition_matrices(b, true, cap, "Büchi transition monoid")?),
        None => None,
    };
    let mb_monoid = match &mb {
        Some(mm) => mm.monoid.clone(),
        None => trivial().0?,
    };
    let (product, components) = accessible_product(&mn, &mb_monoid, cap)?;
    let powerset = OrderedMonoid::powerset(&alphabet)?;
    let (monoid, outer) = accessible_product(&product, &powerset, cap)?;
    let size = monoid.size();
    let accept = BitMatrix::from_fn(size, |s, e| {
        if !LinkedPair::new(s, e).is_linked(&monoid) {
            return false;
        }
        let (ns, bs) = components[outer[s].0];
        if e == monoid.neutral() {
            finals[ns]
        } else {
            let be = components[outer[e].0].1;
            match (b, &mb) {
                (Some(b), Some(mm)) => buchi_accepts(b, &mm.matrices[bs], &mm.matrices[be], mm.q),
                _ => false,
            }
        }
    });
    let lang = RecognizedLanguage::from_bits(monoid, accept, Some(Arc::new(source)));
    if size <= CLOSURE_CHECK_LIMIT {
        let report = closure_report(&lang);
        if !report.is_clean() {
            return Err(Error::Invariant(format!(
                "combined recognizer is not saturated: {report:?}"
            )));
        }
    }
    Ok(lang)
}

/// Largest recognizer on which construction-time closure checks run.
const CLOSURE_CHECK_LIMIT: usize = 400;

// ---------------------------------------------------------------------------
// Validation

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjugacyViolation {
    pub accepted: LinkedPair,
    pub missing: LinkedPair,
    pub x: Element,
    pub y: Element,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpwardViolation {
    pub accepted: LinkedPair,
    pub missing: LinkedPair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SamplingReport {
    pub samples: usize,
    pub disagreements: usize,
    pub first_disagreement: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RecognitionReport {
    pub conjugacy: Option<ConjugacyViolation>,
    pub upward: Option<UpwardViolation>,
    pub sampling: Option<SamplingReport>,
}

impl RecognitionReport {
    pub fn is_clean(&self) -> bool {
        self.conjugacy.is_none() && self.upward.is_none() && self.sampling.as_ref().is_none_or(|s| s.disagreements == 0)
    }
}

fn closure_report(l: &RecognizedLanguage) -> RecognitionReport {
    let m = &l.monoid;
    let mut report = RecognitionReport::default();
    let by_idempotent = l.accept.transpose();
    // (s,e) ~ (s·x, y·x) whenever x·y = e and y·x is idempotent
    'conj: for x in m.elements() {
        for y in m.elements() {
            let e = m.mul(x, y);
            let f = m.mul(y, x);
            if !m.is_idempotent(e) || !m.is_idempotent(f) {
                continue;
            }
            for s in by_idempotent.row_ones(e) {
                let t = m.mul(s, x);
                if !l.accept.get(t, f) {
                    report.conjugacy = Some(ConjugacyViolation {
                        accepted: LinkedPair::new(s, e),
                        missing: LinkedPair::new(t, f),
                        x,
                        y,
                    });
                    break 'conj;
                }
            }
        }
    }
    'up: for (s, e) in l.accept.pairs() {
        for t in m.elements() {
            if t != s && m.leq(s, t) && m.mul(t, e) == t && !l.accept.get(t, e) {
                report.upward = Some(UpwardViolation {
                    accepted: LinkedPair::new(s, e),
                    missing: LinkedPair::new(t, e),
                });
                break 'up;
            }
        }
    }
    report
}

/// Checks closure under conjugacy and upward closure; with automata
/// provenance attached, also compares `samples` random words (prefix and
/// period of length at most 8) against direct simulation.
pub fn validate_recognition(l: &RecognizedLanguage, samples: usize, seed: u64) -> Result<RecognitionReport> {
    let mut report = closure_report(l);
    if let Some(src) = &l.source {
        let alphabet = l.alphabet();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sampling = SamplingReport {
            samples,
            disagreements: 0,
            first_disagreement: None,
        };
        for _ in 0..samples {
            let w = UpWord::random(&mut rng, &alphabet, 8, 8, 0.25);
            if l.member(&w)? != src.member(&w)? {
                sampling.disagreements += 1;
                sampling.first_disagreement.get_or_insert_with(|| w.to_string());
            }
        }
        report.sampling = Some(sampling);
    }
    Ok(report)
}
