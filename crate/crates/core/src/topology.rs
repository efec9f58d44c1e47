//! Openness in the Cantor and alphabetic topologies on `A^∞` and `A^ω`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::RecognizedLanguage;
use crate::monoid::Element;
use crate::pairs::LinkedPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    CantorInfty,
    AlphabeticInfty,
    CantorOmega,
    AlphabeticOmega,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::CantorInfty,
        TopologyKind::AlphabeticInfty,
        TopologyKind::CantorOmega,
        TopologyKind::AlphabeticOmega,
    ];

    pub fn is_omega(self) -> bool {
        matches!(self, TopologyKind::CantorOmega | TopologyKind::AlphabeticOmega)
    }

    pub fn is_cantor(self) -> bool {
        matches!(self, TopologyKind::CantorInfty | TopologyKind::CantorOmega)
    }
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TopologyKind::CantorInfty => "cantor-infty",
            TopologyKind::AlphabeticInfty => "alphabetic-infty",
            TopologyKind::CantorOmega => "cantor-omega",
            TopologyKind::AlphabeticOmega => "alphabetic-omega",
        };
        f.write_str(s)
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TopologyKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| Error::Input(format!("unknown topology {s:?}")))
    }
}

/// Outcome of an openness test. On failure, `witness` holds an accepted
/// pair and a linked pair in its basic neighborhood that is rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OpenVerdict {
    pub kind: TopologyKind,
    pub open: bool,
    pub witness: Option<(LinkedPair, LinkedPair)>,
}

/// Decides openness of `L` from an alphabetic recognizer.
///
/// An accepted `(s,e)` forces its basic neighborhood into `L`: every linked
/// `(t,f)` with `t ∈ s·N` and `f ∈ N`, where `N = M` (Cantor) or `N = M_C`,
/// the elements whose words use only letters of `C = alph(e)`
/// (alphabetic). The ω variants only consider `e ≠ 1` and `f ≠ 1`.
/// Witnesses are the first failure in lexicographic order of `(s, e, t, f)`.
pub fn is_open(l: &RecognizedLanguage, kind: TopologyKind) -> Result<OpenVerdict> {
    let masks = l
        .alph_masks()
        .ok_or_else(|| Error::Precondition("openness needs an alphabetic recognizer".into()))?;
    let m = l.monoid();
    let one = m.neutral();
    let idempotents = m.idempotents();
    for p in l.accepted_pairs() {
        if kind.is_omega() && p.e == one {
            continue;
        }
        let allowed = |x: Element| kind.is_cantor() || masks[x] & !masks[p.e] == 0;
        let mut targets: Vec<Element> = m.elements().filter(|&x| allowed(x)).map(|x| m.mul(p.s, x)).collect();
        targets.sort_unstable();
        targets.dedup();
        for &t in &targets {
            for &f in &idempotents {
                if !allowed(f) || m.mul(t, f) != t || (kind.is_omega() && f == one) {
                    continue;
                }
                let q = LinkedPair::new(t, f);
                if !l.accepts(q) {
                    return Ok(OpenVerdict {
                        kind,
                        open: false,
                        witness: Some((p, q)),
                    });
                }
            }
        }
    }
    Ok(OpenVerdict {
        kind,
        open: true,
        witness: None,
    })
}
