pub mod bits;
pub mod catalog;
pub mod classify;
pub mod corpus;
pub mod error;
pub mod green;
pub mod json;
pub mod language;
pub mod logic;
pub mod monoid;
pub mod pairs;
pub mod term;
pub mod topology;
pub mod varieties;

pub use bits::BitMatrix;
pub use classify::{classify, synthesize_sigma21_formula, Classification, Universe};
pub use error::{Error, Result};
pub use green::GreenData;
pub use language::{AutomataLanguage, RecognizedLanguage, UpWord};
pub use logic::{Formula, GameConfig};
pub use monoid::{Element, Letter, OrderedMonoid};
pub use pairs::LinkedPair;
pub use topology::{is_open, TopologyKind};
