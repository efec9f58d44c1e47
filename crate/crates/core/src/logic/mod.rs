//! Two-variable first-order logic on words: formulas, fragments and
//! Ehrenfeucht–Fraïssé games.

pub mod ef;
pub mod formula;

pub use ef::{ef_duplicator_wins, sigma2_preorder, solve_game, GameConfig, GameOutcome, Side, SpoilerMove};
pub use formula::{fragment_of, Formula, FragmentIndex, Var};
