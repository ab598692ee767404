//! Temporal logics over Kripke structures, labelled transition systems,
//! Kripke transition systems and Kripke modal transition systems, plus the
//! translations between them that preserve truth.
//!
//! The commonly used types are re-exported at the crate root.

pub mod checker2;
pub mod checker3;
pub mod formulas;
pub mod mappings;
pub mod parser;
pub mod structures;
pub mod testkit;

pub use checker2::{check, check_path, check_state, CheckConfig, CheckError, Verdict};
pub use checker3::{eval_upml, Check3Error};
pub use formulas::{ActionFormula, Formula, LogicId, PathFormula, StateFormula, Truth3, UpmlFormula};
pub use mappings::{map_structure, MappingBundle, MappingError, MappingId};
pub use parser::{load_structure, parse_formula, parse_state, save_structure, LoadError, ParseError};
pub use structures::{
    ActionToken, Kmts, Ks, Kts, LabelSet, Lasso, Lts, Model, PropToken, StateId, Structure, StructureKind, Transition,
    TransitionSystem,
};
