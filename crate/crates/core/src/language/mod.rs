//! Languages over finite and infinite words: automata input, recognizing
//! monoids with linked-pair acceptance, and syntactic quotients.

pub mod automaton;
pub mod recognize;
pub mod syntactic;
pub mod upword;

pub use automaton::{Automaton, AutomatonFile, BuchiAutomaton, Nfa};
pub use recognize::{
    buchi_transition_monoid, combine_infty, make_alphabetic, member_up_automaton, nfa_transition_monoid,
    validate_recognition, AutomataLanguage, LanguageFile, RecognitionReport, RecognizedLanguage, DEFAULT_SIZE_CAP,
};
pub use syntactic::{finite_syntactic_monoid, syntactic_quotient, FiniteSyntactic, SyntacticQuotient};
pub use upword::UpWord;
