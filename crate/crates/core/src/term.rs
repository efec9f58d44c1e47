//! ω-terms, ω-identities and exhaustive identity checking.
//!
//! Text syntax: `1`, variables matching `[a-z][a-z0-9]*`, explicit `*` for
//! products and postfix `^w` for the ω-power, e.g.
//! `(z*x2)^w * z * (y2*z)^w <= (z*x2)^w * 1 * (y2*z)^w`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::{Element, OrderedMonoid};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OmegaTerm {
    One,
    Var(String),
    Product(Box<OmegaTerm>, Box<OmegaTerm>),
    OmegaPower(Box<OmegaTerm>),
}

impl OmegaTerm {
    pub fn var(name: &str) -> Self {
        OmegaTerm::Var(name.to_string())
    }

    pub fn product(left: OmegaTerm, right: OmegaTerm) -> Self {
        OmegaTerm::Product(Box::new(left), Box::new(right))
    }

    /// Left-nested product of the factors; `One` when empty.
    pub fn product_of(factors: impl IntoIterator<Item = OmegaTerm>) -> Self {
        factors.into_iter().reduce(OmegaTerm::product).unwrap_or(OmegaTerm::One)
    }

    pub fn omega(self) -> Self {
        OmegaTerm::OmegaPower(Box::new(self))
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            OmegaTerm::One => {}
            OmegaTerm::Var(v) => {
                out.insert(v.clone());
            }
            OmegaTerm::Product(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            OmegaTerm::OmegaPower(a) => a.collect_vars(out),
        }
    }

    /// Number of occurrences of each variable in the tree.
    pub fn variable_occurrences(&self) -> BTreeMap<String, usize> {
        fn walk(t: &OmegaTerm, out: &mut BTreeMap<String, usize>) {
            match t {
                OmegaTerm::One => {}
                OmegaTerm::Var(v) => *out.entry(v.clone()).or_default() += 1,
                OmegaTerm::Product(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                OmegaTerm::OmegaPower(a) => walk(a, out),
            }
        }
        let mut out = BTreeMap::new();
        walk(self, &mut out);
        out
    }

    /// Evaluates the term. `1` maps to the neutral element, products to
    /// products and `t^ω` to the idempotent power of the value of `t`.
    pub fn eval(&self, interpretation: &BTreeMap<String, Element>, m: &OrderedMonoid) -> Result<Element> {
        Ok(match self {
            OmegaTerm::One => m.neutral(),
            OmegaTerm::Var(v) => {
                let x = *interpretation
                    .get(v)
                    .ok_or_else(|| Error::Input(format!("variable '{v}' has no interpretation")))?;
                if x >= m.size() {
                    return Err(Error::Input(format!("variable '{v}' maps to {x}, out of range")));
                }
                x
            }
            OmegaTerm::Product(a, b) => m.mul(a.eval(interpretation, m)?, b.eval(interpretation, m)?),
            OmegaTerm::OmegaPower(a) => m.idempotent_power(a.eval(interpretation, m)?),
        })
    }
}

impl fmt::Display for OmegaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OmegaTerm::One => write!(f, "1"),
            OmegaTerm::Var(v) => write!(f, "{v}"),
            OmegaTerm::Product(a, b) => write!(f, "{a} * {b}"),
            OmegaTerm::OmegaPower(a) => match **a {
                OmegaTerm::Product(..) => write!(f, "({a})^w"),
                _ => write!(f, "{a}^w"),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IdentityKind {
    LessEq,
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: OmegaTerm,
    pub rhs: OmegaTerm,
    pub kind: IdentityKind,
}

impl Identity {
    pub fn leq(lhs: OmegaTerm, rhs: OmegaTerm) -> Self {
        Identity {
            lhs,
            rhs,
            kind: IdentityKind::LessEq,
        }
    }

    pub fn eq(lhs: OmegaTerm, rhs: OmegaTerm) -> Self {
        Identity {
            lhs,
            rhs,
            kind: IdentityKind::Equal,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        let mut v = self.lhs.variables();
        v.extend(self.rhs.variables());
        v
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.kind {
            IdentityKind::LessEq => "<=",
            IdentityKind::Equal => "=",
        };
        write!(f, "{} {op} {}", self.lhs, self.rhs)
    }
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: &str) -> Error {
        Error::Input(format!("{msg} at offset {}", self.pos))
    }

    fn term(&mut self) -> Result<OmegaTerm> {
        let mut t = self.factor()?;
        while self.eat("*") {
            t = OmegaTerm::product(t, self.factor()?);
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<OmegaTerm> {
        let mut t = self.atom()?;
        while self.eat("^w") {
            t = t.omega();
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<OmegaTerm> {
        match self.peek() {
            Some(b'1') => {
                self.pos += 1;
                Ok(OmegaTerm::One)
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.term()?;
                if !self.eat(")") {
                    return Err(self.error("expected ')'"));
                }
                Ok(t)
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_lowercase() || self.src[self.pos].is_ascii_digit())
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(OmegaTerm::var(name))
            }
            Some(_) => Err(self.error("expected '1', a variable or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.error("trailing input")),
        }
    }
}

impl FromStr for OmegaTerm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let t = p.term()?;
        p.finish()?;
        Ok(t)
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser::new(s);
        let lhs = p.term()?;
        let kind = if p.eat("<=") {
            IdentityKind::LessEq
        } else if p.eat("=") {
            IdentityKind::Equal
        } else {
            return Err(p.error("expected '<=' or '='"));
        };
        let rhs = p.term()?;
        p.finish()?;
        Ok(Identity { lhs, rhs, kind })
    }
}

// ---------------------------------------------------------------------------
// Checking

/// Refusal thresholds for exhaustive interpretation enumeration.
#[derive(Debug, Clone, Copy)]
pub struct IdentityBudget {
    pub max_interpretations: u64,
    /// Identities with more variables than this are refused on monoids
    /// larger than `large_monoid`.
    pub max_variables_on_large: usize,
    pub large_monoid: usize,
}

impl Default for IdentityBudget {
    fn default() -> Self {
        IdentityBudget {
            max_interpretations: 10_000_000,
            max_variables_on_large: 6,
            large_monoid: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub holds: bool,
    /// Lexicographically least violating interpretation (variables in
    /// sorted order, most significant first).
    pub counterexample: Option<BTreeMap<String, Element>>,
    pub interpretations: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Node {
    One,
    Var(usize),
    Mul(usize, usize),
    Omega(usize),
}

/// Hash-consed DAG of both sides of an identity. Shared subterms such as
/// the repeated `V_{m-1}` inside `U_m`/`V_m` are evaluated once per
/// interpretation.
struct Compiled {
    nodes: Vec<Node>,
    lhs: usize,
    rhs: usize,
}

impl Compiled {
    fn new(id: &Identity, vars: &[String]) -> Self {
        let mut c = Compiled {
            nodes: Vec::new(),
            lhs: 0,
            rhs: 0,
        };
        let mut memo = HashMap::new();
        c.lhs = c.intern(&id.lhs, vars, &mut memo);
        c.rhs = c.intern(&id.rhs, vars, &mut memo);
        c
    }

    fn intern(&mut self, t: &OmegaTerm, vars: &[String], memo: &mut HashMap<Node, usize>) -> usize {
        let node = match t {
            OmegaTerm::One => Node::One,
            OmegaTerm::Var(v) => Node::Var(vars.iter().position(|x| x == v).expect("collected")),
            OmegaTerm::Product(a, b) => {
                let a = self.intern(a, vars, memo);
                let b = self.intern(b, vars, memo);
                Node::Mul(a, b)
            }
            OmegaTerm::OmegaPower(a) => Node::Omega(self.intern(a, vars, memo)),
        };
        *memo.entry(node).or_insert_with(|| {
            self.nodes.push(node);
            self.nodes.len() - 1
        })
    }

    fn eval(&self, m: &OrderedMonoid, assignment: &[Element], values: &mut [Element]) {
        for (i, node) in self.nodes.iter().enumerate() {
            values[i] = match *node {
                Node::One => m.neutral(),
                Node::Var(v) => assignment[v],
                Node::Mul(a, b) => m.mul(values[a], values[b]),
                Node::Omega(a) => m.idempotent_power(values[a]),
            };
        }
    }
}

/// Checks `id` under every interpretation of its variables in `m`.
pub fn satisfies_identity(m: &OrderedMonoid, id: &Identity, budget: &IdentityBudget) -> Result<IdentityCheck> {
    let vars: Vec<String> = id.variables().into_iter().collect();
    let k = vars.len();
    if m.size() > budget.large_monoid && k > budget.max_variables_on_large {
        return Err(Error::Resource {
            what: "identity variables on a large monoid",
            cap: budget.max_variables_on_large,
            observed: k,
        });
    }
    let total = (m.size() as u64)
        .checked_pow(k as u32)
        .filter(|&t| t <= budget.max_interpretations)
        .ok_or(Error::Resource {
            what: "identity interpretations",
            cap: budget.max_interpretations as usize,
            observed: (m.size() as f64).powi(k as i32).min(usize::MAX as f64) as usize,
        })?;

    let compiled = Compiled::new(id, &vars);
    let mut values = vec![0; compiled.nodes.len()];
    let mut assignment = vec![0; k];
    let mut checked = 0u64;
    loop {
        compiled.eval(m, &assignment, &mut values);
        checked += 1;
        let (l, r) = (values[compiled.lhs], values[compiled.rhs]);
        let ok = match id.kind {
            IdentityKind::LessEq => m.leq(l, r),
            IdentityKind::Equal => l == r,
        };
        if !ok {
            let witness = vars.iter().cloned().zip(assignment.iter().copied()).collect();
            return Ok(IdentityCheck {
                holds: false,
                counterexample: Some(witness),
                interpretations: checked,
            });
        }
        // odometer, last variable least significant
        let mut i = k;
        loop {
            if i == 0 {
                debug_assert_eq!(checked, total);
                return Ok(IdentityCheck {
                    holds: true,
                    counterexample: None,
                    interpretations: checked,
                });
            }
            i -= 1;
            assignment[i] += 1;
            if assignment[i] < m.size() {
                break;
            }
            assignment[i] = 0;
        }
    }
}
