use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::Letter;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Var::X => "x",
            Var::Y => "y",
        })
    }
}

/// Two-variable first-order formula over words.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    /// `λ(v) = a`
    Letter(Var, Letter),
    VarEq(Var, Var),
    VarLt(Var, Var),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Least `(m, n)` with the formula in `Σ²_{m,n}`: `m` counts nested
/// negations above quantifiers, `n` is the quantifier depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentIndex {
    pub m: usize,
    pub n: usize,
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(f: Formula, g: Formula) -> Formula {
        Formula::And(Box::new(f), Box::new(g))
    }

    pub fn or(f: Formula, g: Formula) -> Formula {
        Formula::Or(Box::new(f), Box::new(g))
    }

    pub fn exists(v: Var, f: Formula) -> Formula {
        Formula::Exists(v, Box::new(f))
    }

    /// Left-nested disjunction; `False` when empty.
    pub fn disjunction(fs: impl IntoIterator<Item = Formula>) -> Formula {
        fs.into_iter().reduce(Formula::or).unwrap_or(Formula::False)
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> Vec<Var> {
        fn go(f: &Formula, bound: [bool; 2], out: &mut [bool; 2]) {
            let mut mark = |v: Var| {
                if !bound[v.index()] {
                    out[v.index()] = true;
                }
            };
            match f {
                Formula::True | Formula::False => {}
                Formula::Letter(v, _) => mark(*v),
                Formula::VarEq(a, b) | Formula::VarLt(a, b) => {
                    mark(*a);
                    mark(*b);
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(g, h) | Formula::Or(g, h) => {
                    go(g, bound, out);
                    go(h, bound, out);
                }
                Formula::Exists(v, g) => {
                    let mut b = bound;
                    b[v.index()] = true;
                    go(g, b, out);
                }
            }
        }
        let mut out = [false; 2];
        go(self, [false; 2], &mut out);
        [Var::X, Var::Y].into_iter().filter(|v| out[v.index()]).collect()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    pub fn fragment(&self) -> FragmentIndex {
        match self {
            Formula::True | Formula::False | Formula::Letter(..) | Formula::VarEq(..) | Formula::VarLt(..) => {
                FragmentIndex { m: 0, n: 0 }
            }
            Formula::Not(g) => {
                let i = g.fragment();
                if i.n == 0 {
                    i
                } else {
                    FragmentIndex { m: i.m + 1, n: i.n }
                }
            }
            Formula::And(g, h) | Formula::Or(g, h) => {
                let (a, b) = (g.fragment(), h.fragment());
                FragmentIndex {
                    m: a.m.max(b.m),
                    n: a.n.max(b.n),
                }
            }
            Formula::Exists(_, g) => {
                let i = g.fragment();
                FragmentIndex {
                    m: i.m.max(1),
                    n: i.n + 1,
                }
            }
        }
    }

    /// Truth on the finite word `w` (positions `0..|w|`).
    pub fn eval_finite(&self, w: &[Letter]) -> Result<bool> {
        if let Some(v) = self.free_vars().first() {
            return Err(Error::Input(format!("variable {v} is free")));
        }
        Ok(self.eval_at(w, [None, None]))
    }

    fn eval_at(&self, w: &[Letter], env: [Option<usize>; 2]) -> bool {
        let pos = |v: Var| env[v.index()].expect("bound variable");
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Letter(v, a) => w[pos(*v)] == *a,
            Formula::VarEq(a, b) => pos(*a) == pos(*b),
            Formula::VarLt(a, b) => pos(*a) < pos(*b),
            Formula::Not(g) => !g.eval_at(w, env),
            Formula::And(g, h) => g.eval_at(w, env) && h.eval_at(w, env),
            Formula::Or(g, h) => g.eval_at(w, env) || h.eval_at(w, env),
            Formula::Exists(v, g) => (0..w.len()).any(|i| {
                let mut e = env;
                e[v.index()] = Some(i);
                g.eval_at(w, e)
            }),
        }
    }

    /// Removes double negations.
    pub fn simplify_double_negation(&self) -> Formula {
        match self {
            Formula::Not(g) => match g.as_ref() {
                Formula::Not(h) => h.simplify_double_negation(),
                other => Formula::not(other.simplify_double_negation()),
            },
            Formula::And(g, h) => Formula::and(g.simplify_double_negation(), h.simplify_double_negation()),
            Formula::Or(g, h) => Formula::or(g.simplify_double_negation(), h.simplify_double_negation()),
            Formula::Exists(v, g) => Formula::exists(*v, g.simplify_double_negation()),
            leaf => leaf.clone(),
        }
    }
}

/// `fragment_of`.
pub fn fragment_of(f: &Formula) -> FragmentIndex {
    f.fragment()
}

// ---------------------------------------------------------------------------
// Text syntax: `E x (a(x) & E y (x<y & b(y)))`, `!`, `&`, `|`, `T`, `F`,
// `x=y`, `x<y`. Precedence: `!` and `E` bind tightest, then `&`, then `|`.

impl Formula {
    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(..) => 1,
            Formula::And(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Formula::True => f.write_str("T")?,
            Formula::False => f.write_str("F")?,
            Formula::Letter(v, a) => write!(f, "{a}({v})")?,
            Formula::VarEq(a, b) => write!(f, "{a}={b}")?,
            Formula::VarLt(a, b) => write!(f, "{a}<{b}")?,
            Formula::Not(g) => {
                f.write_str("!")?;
                g.fmt_prec(f, 3)?;
            }
            Formula::And(g, h) => {
                g.fmt_prec(f, 2)?;
                f.write_str(" & ")?;
                h.fmt_prec(f, 3)?;
            }
            Formula::Or(g, h) => {
                g.fmt_prec(f, 1)?;
                f.write_str(" | ")?;
                h.fmt_prec(f, 2)?;
            }
            Formula::Exists(v, g) => {
                write!(f, "E {v} ")?;
                if g.precedence() < 3 {
                    f.write_str("(")?;
                    g.fmt_prec(f, 0)?;
                    f.write_str(")")?;
                } else {
                    g.fmt_prec(f, 3)?;
                }
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Input(format!("formula {:?}, column {}: {msg}", self.src, self.pos + 1))
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn var(&mut self) -> Result<Var> {
        let v = match self.peek() {
            Some('x') => Var::X,
            Some('y') => Var::Y,
            Some(c) if c.is_alphabetic() => {
                return Err(self.err(&format!("only the variables x and y are allowed, found '{c}'")))
            }
            _ => return Err(self.err("expected a variable")),
        };
        self.pos += 1;
        if self.chars.get(self.pos).is_some_and(|c| c.is_alphanumeric()) {
            return Err(self.err("only the variables x and y are allowed"));
        }
        Ok(v)
    }

    fn or(&mut self) -> Result<Formula> {
        let mut f = self.and()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            f = Formula::or(f, self.and()?);
        }
        Ok(f)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn next_nonspace_after(&self, i: usize) -> Option<char> {
        self.chars[i..].iter().copied().find(|c| !c.is_whitespace())
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('!') => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some('(') => {
                self.pos += 1;
                let f = self.or()?;
                self.expect(')')?;
                Ok(f)
            }
            Some('E') if self.next_nonspace_after(self.pos + 1) != Some('(') => {
                self.pos += 1;
                let v = self.var()?;
                Ok(Formula::exists(v, self.unary()?))
            }
            Some('T') if self.next_nonspace_after(self.pos + 1) != Some('(') => {
                self.pos += 1;
                Ok(Formula::True)
            }
            Some('F') if self.next_nonspace_after(self.pos + 1) != Some('(') => {
                self.pos += 1;
                Ok(Formula::False)
            }
            Some('x') | Some('y') if self.next_nonspace_after(self.pos + 1) != Some('(') => {
                let a = self.var()?;
                let op = self.peek();
                self.pos += 1;
                let b = self.var()?;
                match op {
                    Some('<') => Ok(Formula::VarLt(a, b)),
                    Some('=') => Ok(Formula::VarEq(a, b)),
                    Some('>') => Ok(Formula::VarLt(b, a)),
                    _ => Err(self.err("expected '<', '=' or '>'")),
                }
            }
            Some(c) if !"()&|!<=>".contains(c) => {
                self.pos += 1;
                self.expect('(')?;
                let v = self.var()?;
                self.expect(')')?;
                Ok(Formula::Letter(v, c))
            }
            Some(c) => Err(self.err(&format!("unexpected '{c}'"))),
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser {
            chars: s.chars().collect(),
            pos: 0,
            src: s,
        };
        let f = p.or()?;
        if p.peek().is_some() {
            return Err(p.err("trailing input"));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    #[test]
    fn fragment_examples() {
        assert_eq!(fragment_of(&f("E x a(x)")), FragmentIndex { m: 1, n: 1 });
        assert_eq!(fragment_of(&f("!E x a(x)")), FragmentIndex { m: 2, n: 1 });
        assert_eq!(fragment_of(&f("E x !E y (x<y & a(y))")), FragmentIndex { m: 2, n: 2 });
        assert_eq!(fragment_of(&f("T")), FragmentIndex { m: 0, n: 0 });
        assert_eq!(fragment_of(&f("E x !a(x)")), FragmentIndex { m: 1, n: 1 });
    }

    #[test]
    fn eval_examples() {
        let ex = f("E x a(x)");
        assert!(ex.eval_finite(&['b', 'a']).unwrap());
        assert!(!ex.eval_finite(&['b', 'b']).unwrap());
        let ab = f("E x (a(x) & E y (x<y & b(y)))");
        assert!(ab.eval_finite(&['a', 'b']).unwrap());
        assert!(!ab.eval_finite(&['b', 'a']).unwrap());
        assert!(f("a(x)").eval_finite(&['a']).is_err());
    }

    #[test]
    fn print_parse_round_trip() {
        for s in [
            "E x (a(x) & E y (x<y & b(y)))",
            "!E x a(x) | T",
            "E x !E y (x<y & a(y))",
            "(T | F) & x=y",
            "E y (E x (x<y & a(x)) | b(y))",
        ] {
            let g = f(s);
            assert_eq!(f(&g.to_string()), g, "{s}");
        }
        assert_eq!(
            f("E x (a(x) & E y (x<y & b(y)))").to_string(),
            "E x (a(x) & E y (x<y & b(y)))"
        );
    }

    #[test]
    fn rejects_third_variable() {
        assert!("E z a(z)".parse::<Formula>().is_err());
        assert!("E x a(xy)".parse::<Formula>().is_err());
        assert!("E x (a(x)".parse::<Formula>().is_err());
    }

    #[test]
    fn letters_named_like_keywords() {
        let g = f("E x E(x)");
        assert_eq!(g, Formula::exists(Var::X, Formula::Letter(Var::X, 'E')));
    }
}
