//! Reproducible corpus of small ordered monoids: submonoids of full
//! transformation monoids with randomly generated stable orders.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitMatrix;
use crate::monoid::{Element, OrderedMonoid};

#[derive(Debug, Clone, Copy)]
pub struct CorpusConfig {
    /// Transformations act on `1..=max_points` points.
    pub max_points: usize,
    pub max_size: usize,
    /// Random seed-pair attempts per underlying monoid.
    pub order_attempts: usize,
    pub seed: u64,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            max_points: 3,
            max_size: 6,
            order_attempts: 12,
            seed: 0x5eed,
        }
    }
}

type Transformation = Vec<u8>;

fn all_transformations(points: usize) -> Vec<Transformation> {
    let mut out = vec![Vec::new()];
    for _ in 0..points {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..points as u8).map(move |img| {
                    let mut t = t.clone();
                    t.push(img);
                    t
                })
            })
            .collect();
    }
    out
}

/// Submonoid of `T_n` generated by `gens` under left-to-right composition,
/// or `None` when it exceeds `max_size`. Generators become letters
/// `a`, `b`, ...
fn generated(points: usize, gens: &[Transformation], max_size: usize) -> Option<OrderedMonoid> {
    let compose =
        |f: &Transformation, g: &Transformation| -> Transformation { f.iter().map(|&i| g[i as usize]).collect() };
    let identity: Transformation = (0..points as u8).collect();
    let mut elements = vec![identity];
    let mut i = 0;
    while i < elements.len() {
        for g in gens {
            let t = compose(&elements[i], g);
            if !elements.contains(&t) {
                if elements.len() == max_size {
                    return None;
                }
                elements.push(t);
            }
        }
        i += 1;
    }
    let n = elements.len();
    let index = |t: &Transformation| elements.iter().position(|e| e == t).expect("closed");
    let mul: Vec<Vec<Element>> = (0..n)
        .map(|a| (0..n).map(|b| index(&compose(&elements[a], &elements[b]))).collect())
        .collect();
    let letters = gens
        .iter()
        .enumerate()
        .map(|(k, g)| ((b'a' + k as u8) as char, index(g)))
        .collect();
    let m = OrderedMonoid::unordered(0, mul, letters).expect("transformation monoids are valid");
    m.canonical()
}

/// Smallest stable preorder containing the identity and `seeds`, if it is
/// antisymmetric.
pub fn stable_order_closure(m: &OrderedMonoid, seeds: &[(Element, Element)]) -> Option<BitMatrix> {
    let mut rel = BitMatrix::identity(m.size());
    for &(s, t) in seeds {
        for x in m.elements() {
            for y in m.elements() {
                rel.set(m.product([x, s, y]), m.product([x, t, y]), true);
            }
        }
    }
    rel.transitive_closure();
    let antisymmetric = rel.pairs().all(|(a, b)| a == b || !rel.get(b, a));
    antisymmetric.then_some(rel)
}

type Key = (
    Element,
    Vec<Vec<Element>>,
    Vec<(Element, Element)>,
    Vec<(char, Element)>,
);

fn key(m: &OrderedMonoid) -> Key {
    (
        m.neutral(),
        m.table(),
        m.order().pairs().collect(),
        m.letters().iter().map(|(&c, &x)| (c, x)).collect(),
    )
}

/// Ordered monoids of size at most `max_size` generated by one or two
/// transformations of at most `max_points` points, each with the equality
/// order and with the distinct stable orders obtained from random seed
/// pairs. Deterministic for a fixed configuration.
pub fn transformation_corpus(cfg: &CorpusConfig) -> Vec<OrderedMonoid> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut underlying: Vec<OrderedMonoid> = Vec::new();
    let mut seen: BTreeSet<Key> = BTreeSet::new();
    let push = |m: OrderedMonoid, seen: &mut BTreeSet<Key>, out: &mut Vec<OrderedMonoid>| {
        if seen.insert(key(&m)) {
            out.push(m);
        }
    };
    for points in 1..=cfg.max_points {
        let ts = all_transformations(points);
        for (i, f) in ts.iter().enumerate() {
            if let Some(m) = generated(points, std::slice::from_ref(f), cfg.max_size) {
                push(m, &mut seen, &mut underlying);
            }
            for g in &ts[i + 1..] {
                if let Some(m) = generated(points, &[f.clone(), g.clone()], cfg.max_size) {
                    push(m, &mut seen, &mut underlying);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut seen_ordered: BTreeSet<Key> = BTreeSet::new();
    for m in underlying {
        push(m.clone(), &mut seen_ordered, &mut out);
        let n = m.size();
        if n < 2 {
            continue;
        }
        let mut pairs: Vec<(Element, Element)> = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .filter(|(s, t)| s != t)
            .collect();
        for _ in 0..cfg.order_attempts {
            pairs.shuffle(&mut rng);
            let k = rng.gen_range(1..=2);
            if let Some(leq) = stable_order_closure(&m, &pairs[..k]) {
                let ordered = m.with_order(leq).expect("closure is a stable partial order");
                push(ordered, &mut seen_ordered, &mut out);
            }
        }
    }
    out
}
