//! The varieties A, DA, J⁺, the KD preorder and the hierarchy `M_m`.

use std::collections::HashSet;

use serde::Serialize;

use crate::bits::BitMatrix;
use crate::error::{Error, Result};
use crate::green::{classes_of, GreenData};
use crate::monoid::{Element, OrderedMonoid};
use crate::term::{satisfies_identity, Identity, IdentityBudget, OmegaTerm};

/// `x^ω x = x^ω`.
pub fn is_in_a(m: &OrderedMonoid) -> bool {
    m.elements().all(|x| {
        let e = m.idempotent_power(x);
        m.mul(e, x) == e
    })
}

/// `(xyz)^ω y (xyz)^ω = (xyz)^ω`.
pub fn is_in_da(m: &OrderedMonoid) -> bool {
    da_counterexample(m).is_none()
}

/// Lexicographically least `(x, y, z)` violating the DA identity.
pub fn da_counterexample(m: &OrderedMonoid) -> Option<(Element, Element, Element)> {
    for x in m.elements() {
        for y in m.elements() {
            let xy = m.mul(x, y);
            for z in m.elements() {
                let e = m.idempotent_power(m.mul(xy, z));
                if m.mul(m.mul(e, y), e) != e {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// `1 <= z`.
pub fn is_in_jplus(m: &OrderedMonoid) -> bool {
    m.elements().all(|z| m.leq(m.neutral(), z))
}

pub fn a_identity() -> Identity {
    "x^w * x = x^w".parse().expect("static identity")
}

pub fn da_identity() -> Identity {
    "(x*y*z)^w * y * (x*y*z)^w = (x*y*z)^w"
        .parse()
        .expect("static identity")
}

pub fn jplus_identity() -> Identity {
    "1 <= z".parse().expect("static identity")
}

/// The terms `U_m`, `V_m` over `x2..xm, y2..ym, z`:
/// `U_1 = 1`, `V_1 = z`, and for `m >= 2`
/// `U_m = (V_{m-1} x_m)^ω U_{m-1} (y_m V_{m-1})^ω`,
/// `V_m = (V_{m-1} x_m)^ω V_{m-1} (y_m V_{m-1})^ω`.
pub fn build_um_vm(m: usize) -> (OmegaTerm, OmegaTerm) {
    assert!(m >= 1, "levels start at 1");
    let mut u = OmegaTerm::One;
    let mut v = OmegaTerm::var("z");
    for i in 2..=m {
        let left = OmegaTerm::product(v.clone(), OmegaTerm::var(&format!("x{i}"))).omega();
        let right = OmegaTerm::product(OmegaTerm::var(&format!("y{i}")), v.clone()).omega();
        let next_u = OmegaTerm::product_of([left.clone(), u, right.clone()]);
        let next_v = OmegaTerm::product_of([left, v, right]);
        u = next_u;
        v = next_v;
    }
    (u, v)
}

/// `U_m <= V_m`.
pub fn um_vm_identity(m: usize) -> Identity {
    let (u, v) = build_um_vm(m);
    Identity::leq(u, v)
}

/// The preorder `u ⪯_KD v` and its equivalence classes.
#[derive(Debug, Clone)]
pub struct KdRelation {
    pub leq: BitMatrix,
    /// Classes of `≡_KD`, sorted, listed by smallest member.
    pub classes: Vec<Vec<Element>>,
    pub class_of: Vec<usize>,
}

impl KdRelation {
    pub fn holds(&self, u: Element, v: Element) -> bool {
        self.leq.get(u, v)
    }
}

/// `u ⪯_KD v` iff for all `s, t`:
/// (i) `s R svt` implies `s R sut`;
/// (ii) `svt L t` implies `sut L t`;
/// (iii) `s R sv` and `vt L t` imply `sut <= svt`.
pub fn kd_preorder(m: &OrderedMonoid, green: &GreenData) -> KdRelation {
    let n = m.size();
    let mut leq = BitMatrix::new(n);
    for u in m.elements() {
        for v in m.elements() {
            leq.set(u, v, kd_holds(m, green, u, v));
        }
    }
    let classes = classes_of(&leq);
    let mut class_of = vec![0; n];
    for (i, c) in classes.iter().enumerate() {
        for &x in c {
            class_of[x] = i;
        }
    }
    KdRelation { leq, classes, class_of }
}

fn kd_holds(m: &OrderedMonoid, g: &GreenData, u: Element, v: Element) -> bool {
    for s in m.elements() {
        let sv = m.mul(s, v);
        let su = m.mul(s, u);
        let s_r_sv = g.r_leq(s, sv);
        for t in m.elements() {
            let svt = m.mul(sv, t);
            let sut = m.mul(su, t);
            if g.r_leq(s, svt) && !g.r_leq(s, sut) {
                return false;
            }
            if g.l_leq(t, svt) && !g.l_leq(t, sut) {
                return false;
            }
            if s_r_sv && g.l_leq(t, m.mul(v, t)) && !m.leq(sut, svt) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct KdQuotient {
    pub monoid: OrderedMonoid,
    /// Element of the input to its class in `monoid`. Not necessarily monotone.
    pub projection: Vec<Element>,
}

/// `M / ⪯_KD`: the classes of `≡_KD` with the product of representatives
/// and the order induced by `⪯_KD`.
pub fn kd_quotient(m: &OrderedMonoid) -> Result<KdQuotient> {
    let green = GreenData::new(m);
    let kd = kd_preorder(m, &green);
    quotient_by(m, &kd.leq, &kd.classes, &kd.class_of)
}

/// Quotient of `m` by the symmetric part of a stable preorder.
pub(crate) fn quotient_by(
    m: &OrderedMonoid,
    pre: &BitMatrix,
    classes: &[Vec<Element>],
    class_of: &[usize],
) -> Result<KdQuotient> {
    let k = classes.len();
    let reps: Vec<Element> = classes.iter().map(|c| c[0]).collect();
    let mut mul = Vec::with_capacity(k * k);
    for &a in &reps {
        for &b in &reps {
            mul.push(class_of[m.mul(a, b)]);
        }
    }
    for x in m.elements() {
        for y in m.elements() {
            let expected = mul[class_of[x] * k + class_of[y]];
            if class_of[m.mul(x, y)] != expected {
                return Err(Error::Invariant(format!(
                    "quotient product depends on representatives: {x}*{y}"
                )));
            }
        }
    }
    let leq = BitMatrix::from_fn(k, |a, b| pre.get(reps[a], reps[b]));
    let letters = m.letters().iter().map(|(&c, &x)| (c, class_of[x])).collect();
    let table: Vec<Vec<Element>> = mul.chunks(k).map(|r| r.to_vec()).collect();
    let monoid = OrderedMonoid::new(class_of[m.neutral()], table, leq, letters)
        .map_err(|e| Error::Invariant(format!("quotient is not an ordered monoid: {e}")))?;
    Ok(KdQuotient {
        monoid,
        projection: class_of.to_vec(),
    })
}

/// `M ∈ M_m` by iterating the KD quotient `m - 1` times and testing J⁺.
pub fn is_in_mm_via_quotient(m: &OrderedMonoid, level: usize) -> Result<bool> {
    assert!(level >= 1, "levels start at 1");
    let mut current = m.clone();
    for _ in 1..level {
        current = kd_quotient(&current)?.monoid;
    }
    Ok(is_in_jplus(&current))
}

/// `M ∈ M_m` via `DA ∩ [[U_m <= V_m]]`.
pub fn is_in_mm_via_identity(m: &OrderedMonoid, level: usize, budget: &IdentityBudget) -> Result<bool> {
    if !is_in_da(m) {
        return Ok(false);
    }
    Ok(satisfies_identity(m, &um_vm_identity(level), budget)?.holds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelDiagnostic {
    NotInDa,
    /// The quotient chain revisited a state without reaching J⁺.
    ChainCycle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub size: usize,
    pub in_jplus: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub level: Option<usize>,
    pub diagnostic: Option<LevelDiagnostic>,
    /// Sizes along the quotient chain, starting with the input.
    pub chain: Vec<ChainStep>,
}

/// Smallest `m` with `M ∈ M_m`, following the KD quotient chain.
pub fn min_level(m: &OrderedMonoid) -> Result<LevelReport> {
    if !is_in_da(m) {
        return Ok(LevelReport {
            level: None,
            diagnostic: Some(LevelDiagnostic::NotInDa),
            chain: vec![ChainStep {
                size: m.size(),
                in_jplus: is_in_jplus(m),
            }],
        });
    }
    let mut current = m.clone();
    // composite projection from the original carrier
    let mut projection: Vec<Element> = m.elements().collect();
    let mut seen: HashSet<(Vec<usize>, BitMatrix)> = HashSet::new();
    let mut chain = Vec::new();
    for level in 1.. {
        let in_jplus = is_in_jplus(&current);
        chain.push(ChainStep {
            size: current.size(),
            in_jplus,
        });
        if in_jplus {
            return Ok(LevelReport {
                level: Some(level),
                diagnostic: None,
                chain,
            });
        }
        if !seen.insert(canonical_state(&projection, &current)) {
            return Ok(LevelReport {
                level: None,
                diagnostic: Some(LevelDiagnostic::ChainCycle),
                chain,
            });
        }
        let q = kd_quotient(&current)?;
        projection = projection.iter().map(|&x| q.projection[x]).collect();
        current = q.monoid;
    }
    unreachable!()
}

/// Partition of the original carrier (classes numbered by first occurrence)
/// together with the class order in that numbering.
fn canonical_state(projection: &[Element], current: &OrderedMonoid) -> (Vec<usize>, BitMatrix) {
    let mut relabel = vec![usize::MAX; current.size()];
    let mut next = 0;
    let labels: Vec<usize> = projection
        .iter()
        .map(|&c| {
            if relabel[c] == usize::MAX {
                relabel[c] = next;
                next += 1;
            }
            relabel[c]
        })
        .collect();
    let mut inverse = vec![0; next];
    for (c, &l) in relabel.iter().enumerate() {
        if l != usize::MAX {
            inverse[l] = c;
        }
    }
    let order = BitMatrix::from_fn(next, |a, b| current.leq(inverse[a], inverse[b]));
    (labels, order)
}
