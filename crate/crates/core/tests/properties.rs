use std::sync::OnceLock;

use fo2alt::corpus::{transformation_corpus, CorpusConfig};
use fo2alt::language::{
    combine_infty, finite_syntactic_monoid, member_up_automaton, syntactic_quotient, validate_recognition, Automaton,
    BuchiAutomaton, Nfa, DEFAULT_SIZE_CAP,
};
use fo2alt::logic::{ef_duplicator_wins, fragment_of, Var};
use fo2alt::term::IdentityBudget;
use fo2alt::varieties::{is_in_da, is_in_mm_via_identity, is_in_mm_via_quotient, kd_preorder, min_level};
use fo2alt::{classify, Formula, GameConfig, GreenData, LinkedPair, OrderedMonoid, Universe, UpWord};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn corpus() -> &'static [OrderedMonoid] {
    static CORPUS: OnceLock<Vec<OrderedMonoid>> = OnceLock::new();
    CORPUS.get_or_init(|| transformation_corpus(&CorpusConfig::default()))
}

fn monoid() -> impl Strategy<Value = &'static OrderedMonoid> {
    (0..corpus().len()).prop_map(|i| &corpus()[i])
}

/// A corpus monoid with `k` of its elements.
fn monoid_with(k: usize) -> impl Strategy<Value = (&'static OrderedMonoid, Vec<usize>)> {
    monoid().prop_flat_map(move |m| (Just(m), proptest::collection::vec(0..m.size(), k)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn idempotent_power_laws((m, xs) in monoid_with(1), a in 0usize..6, b in 0usize..6) {
        let s = xs[0];
        let e = m.idempotent_power(s);
        prop_assert!(m.is_idempotent(e));
        prop_assert!((1..=m.size()).any(|k| m.pow(s, k) == e));
        prop_assert_eq!(m.pow(s, a + b), m.mul(m.pow(s, a), m.pow(s, b)));
        prop_assert_eq!(m.pow(s, 0), m.neutral());
    }

    #[test]
    fn lesssim_is_a_preorder(m in monoid(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let pairs = m.linked_pairs();
        let (p, q, r) = (pairs[i % pairs.len()], pairs[j % pairs.len()], pairs[k % pairs.len()]);
        prop_assert!(m.lesssim(p, p));
        if m.lesssim(p, q) && m.lesssim(q, r) {
            prop_assert!(m.lesssim(p, r));
        }
    }

    #[test]
    fn green_preorders_match_ideals((m, xs) in monoid_with(3)) {
        let g = GreenData::new(m);
        let (s, t, u) = (xs[0], xs[1], xs[2]);
        let r = m.elements().any(|x| m.mul(t, x) == s);
        let l = m.elements().any(|x| m.mul(x, t) == s);
        let j = m.elements().any(|x| m.elements().any(|y| m.product([x, t, y]) == s));
        prop_assert_eq!(g.r_leq(s, t), r);
        prop_assert_eq!(g.l_leq(s, t), l);
        prop_assert_eq!(g.j_leq(s, t), j);
        if g.r_eq(s, t) {
            prop_assert!(g.r_eq(m.mul(u, s), m.mul(u, t)));
        }
        if g.l_eq(s, t) {
            prop_assert!(g.l_eq(m.mul(s, u), m.mul(t, u)));
        }
    }

    #[test]
    fn da_absorbs_factors_above_an_idempotent((m, xs) in monoid_with(4)) {
        prop_assume!(is_in_da(m));
        let g = GreenData::new(m);
        let e = m.idempotent_power(xs[0]);
        let factors = &xs[1..];
        if factors.iter().all(|&a| g.j_leq(e, a)) {
            let inner = m.product(factors.iter().copied());
            prop_assert_eq!(m.product([e, inner, e]), e);
        }
    }

    #[test]
    fn kd_is_a_stable_preorder((m, xs) in monoid_with(5)) {
        let kd = kd_preorder(m, &GreenData::new(m));
        let (u, v, w, x, y) = (xs[0], xs[1], xs[2], xs[3], xs[4]);
        prop_assert!(kd.holds(u, u));
        if kd.holds(u, v) {
            prop_assert!(kd.holds(m.product([x, u, y]), m.product([x, v, y])));
            if kd.holds(v, w) {
                prop_assert!(kd.holds(u, w));
            }
        }
    }

    #[test]
    fn neutral_below_v_is_kd_below_v((m, xs) in monoid_with(1)) {
        prop_assume!(is_in_da(m));
        let v = xs[0];
        let one = m.neutral();
        if m.leq(one, v) {
            prop_assert!(kd_preorder(m, &GreenData::new(m)).holds(one, v));
        }
    }

    #[test]
    fn hierarchy_is_monotone(m in monoid(), level in 1usize..4) {
        if is_in_mm_via_quotient(m, level).unwrap() {
            prop_assert!(is_in_mm_via_quotient(m, level + 1).unwrap());
        }
        let report = min_level(m).unwrap();
        if let Some(k) = report.level {
            prop_assert_eq!(is_in_mm_via_quotient(m, level).unwrap(), level >= k);
        }
    }
}

/// Transitions as a bit vector over `states × {a,b} × states`.
fn random_automaton(states: usize, bits: &[bool], accepting: &[bool]) -> Automaton {
    let names: Vec<String> = (0..states).map(|i| i.to_string()).collect();
    let mut transitions = Vec::new();
    for p in 0..states {
        for (l, c) in ['a', 'b'].into_iter().enumerate() {
            for q in 0..states {
                if bits[(p * 2 + l) * states + q] {
                    transitions.push((names[p].clone(), c, names[q].clone()));
                }
            }
        }
    }
    let finals = (0..states)
        .filter(|&q| accepting[q])
        .map(|q| names[q].clone())
        .collect();
    Automaton::new(
        names.clone(),
        vec!['a', 'b'],
        vec![names[0].clone()],
        transitions,
        finals,
    )
    .unwrap()
}

fn automaton_strategy() -> impl Strategy<Value = Automaton> {
    (1usize..=3).prop_flat_map(|k| {
        (
            proptest::collection::vec(any::<bool>(), k * 2 * k),
            proptest::collection::vec(any::<bool>(), k),
        )
            .prop_map(move |(bits, acc)| random_automaton(k, &bits, &acc))
    })
}

fn samples(seed: u64, count: usize, finite_ratio: f64) -> Vec<UpWord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| UpWord::random(&mut rng, &['a', 'b'], 6, 4, finite_ratio))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn transition_monoid_recognition(n in automaton_strategy(), b in automaton_strategy(), seed in any::<u64>()) {
        let (n, b) = (Nfa(n), BuchiAutomaton(b));
        let r = combine_infty(Some(&n), Some(&b), DEFAULT_SIZE_CAP).unwrap();
        let report = validate_recognition(&r, 0, seed).unwrap();
        prop_assert!(report.conjugacy.is_none() && report.upward.is_none());
        let s = syntactic_quotient(&r).unwrap();
        prop_assert!(s.language.monoid().size() <= r.monoid().size());
        let again = syntactic_quotient(&s.language).unwrap();
        prop_assert_eq!(again.language.monoid(), s.language.monoid());
        for w in samples(seed, 100, 0.3) {
            let expected = member_up_automaton(Some(&n), Some(&b), &w).unwrap();
            prop_assert_eq!(r.member(&w).unwrap(), expected, "{}", w);
            prop_assert_eq!(s.language.member(&w).unwrap(), expected, "{}", w);
        }
        let direct = classify(&r, Universe::Infty).unwrap();
        let via_syntactic = classify(&s.language, Universe::Infty).unwrap();
        prop_assert_eq!(direct.level, via_syntactic.level);
        prop_assert_eq!(direct.fo2, via_syntactic.fo2);
    }

    #[test]
    fn star_level_matches_identities(n in automaton_strategy()) {
        let n = Nfa(n);
        let r = combine_infty(Some(&n), None, DEFAULT_SIZE_CAP).unwrap();
        let c = classify(&r, Universe::Star).unwrap();
        let m = finite_syntactic_monoid(&r).unwrap().monoid;
        let budget = IdentityBudget::default();
        let by_identity = (1..=4).find(|&k| is_in_mm_via_identity(&m, k, &budget).unwrap());
        match c.level {
            Some(k) if k <= 4 => prop_assert_eq!(Some(k), by_identity),
            Some(_) => prop_assert_eq!(by_identity, None),
            None => prop_assert!(!is_in_da(&m)),
        }
    }
}

fn var() -> impl Strategy<Value = Var> {
    prop_oneof![Just(Var::X), Just(Var::Y)]
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (var(), prop_oneof![Just('a'), Just('b')]).prop_map(|(v, c)| Formula::Letter(v, c)),
        (var(), var()).prop_map(|(v, w)| Formula::VarEq(v, w)),
        (var(), var()).prop_map(|(v, w)| Formula::VarLt(v, w)),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::and(f, g)),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| Formula::or(f, g)),
            (var(), inner).prop_map(|(v, f)| Formula::exists(v, f)),
        ]
    })
}

/// Closes free variables existentially.
fn sentence() -> impl Strategy<Value = Formula> {
    formula().prop_map(|f| f.free_vars().into_iter().fold(f, |f, v| Formula::exists(v, f)))
}

fn short_word() -> impl Strategy<Value = Vec<char>> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('b')], 0..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_parse_round_trip(f in formula()) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<Formula>().unwrap(), f);
    }

    #[test]
    fn double_negation_preserves_truth(f in sentence(), w in short_word()) {
        let g = f.simplify_double_negation();
        prop_assert_eq!(g.eval_finite(&w).unwrap(), f.eval_finite(&w).unwrap());
        prop_assert!(fragment_of(&g).m <= fragment_of(&f).m);
    }

    #[test]
    fn duplicator_wins_preserve_fragment(f in sentence(), u in short_word(), v in short_word()) {
        let idx = fragment_of(&f);
        let cfg = GameConfig::new(idx.m.max(1), idx.n).unwrap();
        if f.eval_finite(&u).unwrap() && ef_duplicator_wins(&u, &v, cfg).unwrap() {
            prop_assert!(f.eval_finite(&v).unwrap(), "{} on {:?} vs {:?}", f, u, v);
        }
    }

    #[test]
    fn ef_is_monotone(u in short_word(), v in short_word(), m in 1usize..4, n in 0usize..4) {
        if ef_duplicator_wins(&u, &v, GameConfig::new(m, n).unwrap()).unwrap() {
            for m2 in 1..=m {
                for n2 in 0..=n {
                    prop_assert!(ef_duplicator_wins(&u, &v, GameConfig::new(m2, n2).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn ef_preorder((u, v, w) in (short_word(), short_word(), short_word()), m in 1usize..3, n in 0usize..3) {
        let cfg = GameConfig::new(m, n).unwrap();
        prop_assert!(ef_duplicator_wins(&u, &u, cfg).unwrap());
        if ef_duplicator_wins(&u, &v, cfg).unwrap() && ef_duplicator_wins(&v, &w, cfg).unwrap() {
            prop_assert!(ef_duplicator_wins(&u, &w, cfg).unwrap());
        }
    }
}

#[test]
fn linked_pairs_are_linked() {
    for m in corpus() {
        for p in m.linked_pairs() {
            assert!(p.is_linked(m));
            assert_eq!(p, LinkedPair::new(p.s, p.e));
        }
    }
}
