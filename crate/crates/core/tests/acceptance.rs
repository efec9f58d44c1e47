//! Acceptance run: one PASS/FAIL line per criterion. Exits non-zero if any
//! criterion fails.

use std::process::ExitCode;

use fo2alt::catalog::{self, CatalogEntry, CATALOG};
use fo2alt::classify::minimal_subwords;
use fo2alt::corpus::{transformation_corpus, CorpusConfig};
use fo2alt::language::{combine_infty, make_alphabetic, member_up_automaton, syntactic_quotient, DEFAULT_SIZE_CAP};
use fo2alt::logic::{ef_duplicator_wins, fragment_of, FragmentIndex};
use fo2alt::term::IdentityBudget;
use fo2alt::varieties::{
    is_in_a, is_in_da, is_in_mm_via_identity, is_in_mm_via_quotient, kd_preorder, kd_quotient, min_level,
};
use fo2alt::{
    classify, is_open, synthesize_sigma21_formula, Classification, Formula, GameConfig, GreenData, Letter, LinkedPair,
    OrderedMonoid, RecognizedLanguage, TopologyKind, Universe, UpWord,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MIN_CORPUS: usize = 200;
const MAX_CORPUS_SIZE: usize = 6;
const MIN_CURATED: usize = 8;
const MEMBERSHIP_SAMPLES: usize = 1000;
const CONCAT_SAMPLES: usize = 1000;
const PADDING_INSTANCES: usize = 200;
const SYNTH_SAMPLES: usize = 1000;
const SEED: u64 = 0xacce;
/// Criteria expected to print FAIL. The m = 1 game equals length-n subword
/// containment only in one direction: two-variable formulas of depth n can
/// branch and detect longer subwords, as the separating formula shows.
const KNOWN_RED: &[usize] = &[7];

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(violations: usize, detail: String) -> Outcome {
    Outcome {
        // every criterion is exact
        ok: violations == 0,
        detail: format!("{detail}, {violations} violations"),
    }
}

fn recognizer(e: &CatalogEntry) -> RecognizedLanguage {
    let l = e.language().expect("catalog languages parse");
    combine_infty(l.finite.as_ref(), l.infinite.as_ref(), DEFAULT_SIZE_CAP).expect("catalog languages are small")
}

fn wins(u: &[Letter], v: &[Letter], m: usize, n: usize) -> bool {
    ef_duplicator_wins(u, v, GameConfig::new(m, n).unwrap()).expect("short words")
}

fn words_up_to(alphabet: &[Letter], max_len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<Letter>| {
                alphabet.iter().map(move |&c| {
                    let mut w = w.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

fn corpus() -> Vec<OrderedMonoid> {
    transformation_corpus(&CorpusConfig::default())
}

fn algebraic_laws(corpus: &[OrderedMonoid]) -> Outcome {
    let mut violations = 0;
    let mut aperiodic = 0;
    for m in corpus {
        let g = GreenData::new(m);
        let kd = kd_preorder(m, &g);
        let els: Vec<_> = m.elements().collect();
        // preorder and stability
        for &u in &els {
            violations += usize::from(!kd.holds(u, u));
            for &v in &els {
                if !kd.holds(u, v) {
                    continue;
                }
                for &w in &els {
                    violations += usize::from(kd.holds(v, w) && !kd.holds(u, w));
                    for &x in &els {
                        violations += usize::from(!kd.holds(m.product([w, u, x]), m.product([w, v, x])));
                    }
                }
            }
        }
        // u ≡ v, s R sv, vt L t give sut = svt
        for &u in &els {
            for &v in &els {
                if !(kd.holds(u, v) && kd.holds(v, u)) {
                    continue;
                }
                for &s in &els {
                    if !g.r_eq(s, m.mul(s, v)) {
                        continue;
                    }
                    for &t in &els {
                        if g.l_eq(m.mul(v, t), t) && m.product([s, u, t]) != m.product([s, v, t]) {
                            violations += 1;
                        }
                    }
                }
            }
        }
        // DA passes through the quotient in both directions
        match kd_quotient(m) {
            Ok(q) => violations += usize::from(is_in_da(m) != is_in_da(&q.monoid)),
            Err(_) => violations += 1,
        }
        // ≲ is transitive
        let pairs = m.linked_pairs();
        let k = pairs.len();
        let rel: Vec<bool> = (0..k * k).map(|i| m.lesssim(pairs[i / k], pairs[i % k])).collect();
        for a in 0..k {
            for b in 0..k {
                if !rel[a * k + b] {
                    continue;
                }
                for c in 0..k {
                    violations += usize::from(rel[b * k + c] && !rel[a * k + c]);
                }
            }
        }
        // aperiodic: (s,1) ≲ (t,1) forces s ≤ t
        if is_in_a(m) {
            aperiodic += 1;
            let one = m.neutral();
            for &s in &els {
                for &t in &els {
                    if m.lesssim(LinkedPair::new(s, one), LinkedPair::new(t, one)) && !m.leq(s, t) {
                        violations += 1;
                    }
                }
            }
        }
    }
    let mut o = outcome(violations, format!("{} monoids ({aperiodic} aperiodic)", corpus.len()));
    o.ok &= corpus.len() >= MIN_CORPUS && corpus.iter().all(|m| m.size() <= MAX_CORPUS_SIZE);
    o
}

fn hierarchy_cross_check(corpus: &[OrderedMonoid]) -> Outcome {
    let budget = IdentityBudget::default();
    let mut violations = 0;
    let mut checks = 0;
    for m in corpus {
        for level in 1..=3 {
            let a = is_in_mm_via_quotient(m, level);
            let b = is_in_mm_via_identity(m, level, &budget);
            checks += 1;
            match (a, b) {
                (Ok(a), Ok(b)) if a == b => {}
                _ => violations += 1,
            }
        }
    }
    outcome(violations, format!("{checks} checks"))
}

fn one_zero_example() -> Outcome {
    // 0 ≤ 1; element 0 is the identity 1, element 1 is the zero
    let m = OrderedMonoid::one_zero(true);
    let kd = kd_preorder(&m, &GreenData::new(&m));
    let mut violations = 0;
    violations += usize::from(!kd.holds(0, 1));
    violations += usize::from(kd.holds(1, 0));
    let q = kd_quotient(&m).expect("quotient");
    violations += usize::from(q.monoid.size() != 2);
    let one = q.projection[0];
    let zero = q.projection[1];
    violations += usize::from(!(q.monoid.leq(one, zero) && !q.monoid.leq(zero, one)));
    violations += usize::from(min_level(&m).expect("min level").level != Some(2));
    outcome(violations, "kd preorder, quotient order and level".into())
}

fn membership_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = 0;
    for e in CATALOG {
        let l = e.language().unwrap();
        let r = recognizer(e);
        for _ in 0..MEMBERSHIP_SAMPLES {
            let w = UpWord::random(&mut rng, l.alphabet(), 8, 6, 0.5);
            let expected = member_up_automaton(l.finite.as_ref(), l.infinite.as_ref(), &w).unwrap();
            violations += usize::from(r.member(&w).unwrap() != expected);
        }
    }
    let mut o = outcome(
        violations,
        format!("{} languages x {MEMBERSHIP_SAMPLES} words", CATALOG.len()),
    );
    o.ok &= CATALOG.len() >= MIN_CURATED;
    o
}

fn syntactic_minimality() -> Outcome {
    let mut violations = 0;
    for e in CATALOG {
        let r = recognizer(e);
        let s = syntactic_quotient(&r).unwrap();
        let s2 = syntactic_quotient(&s.language).unwrap();
        violations += usize::from(s.language.monoid().size() > r.monoid().size());
        violations += usize::from(s.language.monoid().find_isomorphism(s2.language.monoid()).is_none());
        violations += usize::from(s.language.monoid() != s2.language.monoid());
    }
    outcome(violations, format!("{} languages", CATALOG.len()))
}

fn classified(name: &str) -> Classification {
    let e = catalog::find(name).expect("catalog entry");
    classify(&recognizer(e), e.universe).expect("classifies")
}

fn expected_verdicts() -> Outcome {
    let mut violations = 0;
    // contains a over A^∞: the syntactic monoid is {1, a} with 1 ≤ a (adding
    // an a never leaves the language), which satisfies 1 ≤ z. The language is
    // the union of the basic open sets u·A^∞ with a in u, so level 1.
    let c = classified("contains-a");
    violations += usize::from(!(c.fo2 && c.level == Some(1)));
    violations += usize::from(c.evidence.syntactic_size != 2);
    // finitely many a over A^ω: Cantor closure fails since b^ω is in the
    // language while every neighbourhood u·A^ω contains u·a^ω. It is the
    // union of u·{b}^ω, alphabetic open, so level 2.
    let c = classified("finitely-many-a");
    violations += usize::from(!(c.fo2 && c.level == Some(2)));
    violations += usize::from(c.evidence.cantor_open.as_ref().map(|v| v.open) != Some(false));
    violations += usize::from(c.evidence.cantor_open.as_ref().map(|v| v.kind) != Some(TopologyKind::CantorOmega));
    // infinitely many a over A^ω: (ab)^ω is in the language, but every set
    // u·B^ω containing it has B = {a,b} and contains u·b^ω, so it is not
    // alphabetic open and levels 1 and 2 are both ruled out.
    let c = classified("infinitely-many-a");
    violations += usize::from(!(c.fo2 && c.level == Some(3)));
    violations += usize::from(c.evidence.alphabetic_open.as_ref().map(|v| v.open) != Some(false));
    violations +=
        usize::from(c.evidence.alphabetic_open.as_ref().map(|v| v.kind) != Some(TopologyKind::AlphabeticOmega));
    // even number of a: the syntactic monoid is Z_2, a non-trivial group.
    let c = classified("parity-a");
    violations += usize::from(c.fo2 || c.level.is_some());
    outcome(violations, "4 verdicts".into())
}

/// `u` embeds as a subsequence of `v`.
fn is_subword(u: &[Letter], v: &[Letter]) -> bool {
    let mut it = v.iter();
    u.iter().all(|c| it.any(|d| d == c))
}

fn subwords_up_to(u: &[Letter], n: usize) -> Vec<Vec<Letter>> {
    (0u32..1 << u.len())
        .filter(|mask| mask.count_ones() as usize <= n)
        .map(|mask| (0..u.len()).filter(|i| mask >> i & 1 == 1).map(|i| u[i]).collect())
        .collect()
}

fn ef_subword_oracle() -> Outcome {
    let words = words_up_to(&['a', 'b'], 4);
    let mut violations = 0;
    let mut unsound = 0;
    let mut checks = 0;
    for u in &words {
        for v in &words {
            for n in 1..=3 {
                let expected = subwords_up_to(u, n).iter().all(|s| is_subword(s, v));
                let got = wins(u, v, 1, n);
                checks += 1;
                violations += usize::from(got != expected);
                unsound += usize::from(got && !expected);
            }
        }
    }
    // depth 2, yet it separates aaa from aa
    let branching: Formula = "E x (a(x) & E y (y<x & a(y)) & E y (x<y & a(y)))".parse().unwrap();
    let separates = fragment_of(&branching) == FragmentIndex { m: 1, n: 2 }
        && branching.eval_finite(&['a', 'a', 'a']).unwrap()
        && !branching.eval_finite(&['a', 'a']).unwrap()
        && !wins(&['a', 'a', 'a'], &['a', 'a'], 1, 2);
    let mut o = outcome(
        violations,
        format!(
            "{checks} games, {unsound} duplicator wins without subword containment, \
             depth-2 formula separating aaa from aa: {separates}"
        ),
    );
    o.ok &= unsound == 0 && separates;
    o
}

fn concatenation_and_padding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let pool = words_up_to(&['a', 'b'], 3);
    let configs = [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2)];
    let mut winning: Vec<(GameConfig, Vec<(usize, usize)>)> = Vec::new();
    for &(m, n) in &configs {
        let cfg = GameConfig::new(m, n).unwrap();
        let ps = (0..pool.len())
            .flat_map(|i| (0..pool.len()).map(move |j| (i, j)))
            .filter(|&(i, j)| ef_duplicator_wins(&pool[i], &pool[j], cfg).unwrap())
            .collect();
        winning.push((cfg, ps));
    }
    let mut violations = 0;
    let mut concat = 0;
    while concat < CONCAT_SAMPLES {
        let (cfg, ps) = &winning[rng.gen_range(0..winning.len())];
        let (u, v) = ps[rng.gen_range(0..ps.len())];
        let (x, y) = ps[rng.gen_range(0..ps.len())];
        let left = [pool[u].as_slice(), &pool[x]].concat();
        let right = [pool[v].as_slice(), &pool[y]].concat();
        violations += usize::from(!wins(&left, &right, cfg.m, cfg.n));
        concat += 1;
    }
    // padding: exhaustive over short p, q, u, v
    let short = words_up_to(&['a', 'b'], 2);
    let nonempty: Vec<_> = short.iter().filter(|w| !w.is_empty()).collect();
    let mut padding = 0;
    for m in 2..=3 {
        for n in 1..=2 {
            for p in &nonempty {
                for q in &nonempty {
                    for u in &short {
                        for v in &short {
                            if !v.iter().all(|c| p.contains(c) && q.contains(c)) || !wins(u, v, m - 1, n) {
                                continue;
                            }
                            let pn = p.repeat(n);
                            let qn = q.repeat(n);
                            let left = [pn.as_slice(), u, &qn].concat();
                            let right = [pn.as_slice(), v, &qn].concat();
                            padding += 1;
                            violations += usize::from(!wins(&left, &right, m, n));
                        }
                    }
                }
            }
        }
    }
    let mut o = outcome(violations, format!("{concat} concatenations, {padding} paddings"));
    o.ok &= padding >= PADDING_INSTANCES;
    o
}

/// `U_{i,k}`, `V_{i,k}` with every variable a single letter.
fn u_v(level: usize, k: usize, x: &[Letter], y: &[Letter], z: Letter) -> (Vec<Letter>, Vec<Letter>) {
    let mut u = Vec::new();
    let mut v = vec![z];
    for i in 2..=level {
        let left = [v.as_slice(), &[x[i - 2]]].concat().repeat(k);
        let right = [&[y[i - 2]], v.as_slice()].concat().repeat(k);
        u = [left.as_slice(), &u, &right].concat();
        v = [left.as_slice(), &v, &right].concat();
    }
    (u, v)
}

fn hierarchy_words() -> Outcome {
    let alphabet = ['a', 'b', 'c'];
    let mut violations = 0;
    let mut checks = 0;
    for n in 1..=2 {
        for &x in &alphabet {
            for &y in &alphabet {
                for &z in &alphabet {
                    let (u, v) = u_v(2, n, &[x], &[y], z);
                    checks += 1;
                    violations += usize::from(!wins(&u, &v, 2, n));
                }
            }
        }
    }
    outcome(violations, format!("{checks} games"))
}

fn topology_implications() -> Outcome {
    let mut violations = 0;
    let mut checks = 0;
    for e in CATALOG {
        let r = make_alphabetic(&recognizer(e)).unwrap();
        let open = |k| is_open(&r, k).unwrap().open;
        for (cantor, alpha) in [
            (TopologyKind::CantorInfty, TopologyKind::AlphabeticInfty),
            (TopologyKind::CantorOmega, TopologyKind::AlphabeticOmega),
        ] {
            checks += 1;
            violations += usize::from(open(cantor) && !open(alpha));
        }
        if e.universe == Universe::Star {
            continue;
        }
        let c = classify(&recognizer(e), e.universe).unwrap();
        let alpha_kind = match e.universe {
            Universe::Omega => TopologyKind::AlphabeticOmega,
            _ => TopologyKind::AlphabeticInfty,
        };
        if c.evidence.min_level.level.is_some_and(|m| m <= 2) {
            checks += 1;
            violations += usize::from(c.level.is_some_and(|l| l <= 2) != open(alpha_kind));
        }
        if e.universe == Universe::Infty && c.level == Some(1) {
            synthesize_sigma21_formula(&recognizer(e)).unwrap();
            checks += 1;
            violations += usize::from(!open(TopologyKind::CantorInfty));
        }
    }
    outcome(violations, format!("{checks} checks"))
}

fn synthesis_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = 0;
    let mut languages = 0;
    for e in CATALOG.iter().filter(|e| e.universe == Universe::Infty) {
        let r = recognizer(e);
        if classify(&r, Universe::Infty).unwrap().level != Some(1) {
            continue;
        }
        languages += 1;
        let synth = synthesize_sigma21_formula(&r).unwrap();
        let f = &synth.formula;
        let quantified = !matches!(f, Formula::True | Formula::False);
        let frag = fragment_of(f);
        violations += usize::from(if quantified { frag.m != 1 } else { frag.m != 0 });
        let depth = synth.minimal_words.iter().map(Vec::len).max().unwrap_or(0).max(1);
        let s = syntactic_quotient(&r).unwrap();
        violations += usize::from(minimal_subwords(&s.language).unwrap() != synth.minimal_words);
        for _ in 0..SYNTH_SAMPLES {
            let w = UpWord::random(&mut rng, &r.alphabet(), 8, 4, 0.5);
            let letters = if w.is_finite() {
                w.prefix.clone()
            } else {
                w.unroll(w.prefix.len() + depth * w.period.len())
            };
            violations += usize::from(f.eval_finite(&letters).unwrap() != r.member(&w).unwrap());
        }
    }
    outcome(violations, format!("{languages} languages x {SYNTH_SAMPLES} words"))
}

type Criterion<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("algebraic laws", Box::new(|| algebraic_laws(&corpus))),
        (
            "quotient chain vs identity",
            Box::new(|| hierarchy_cross_check(&corpus)),
        ),
        ("two-element example", Box::new(one_zero_example)),
        ("recognition oracle", Box::new(membership_oracle)),
        ("syntactic minimality", Box::new(syntactic_minimality)),
        ("end-to-end verdicts", Box::new(expected_verdicts)),
        ("EF game vs subwords", Box::new(ef_subword_oracle)),
        ("concatenation and padding", Box::new(concatenation_and_padding)),
        ("hierarchy words", Box::new(hierarchy_words)),
        ("topology implications", Box::new(topology_implications)),
        ("level-1 synthesis round trip", Box::new(synthesis_round_trip)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.ok { "PASS" } else { "FAIL" };
        let known = KNOWN_RED.contains(&(i + 1));
        failed += usize::from(!o.ok && !known);
        let note = if known { " [known red]" } else { "" };
        println!("{tag} {:>2} {name}: {}{note}", i + 1, o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
