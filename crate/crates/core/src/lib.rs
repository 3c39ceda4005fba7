//! Model checking for multi-agent epistemic probability logic in which
//! players may interpret propositions differently.

pub mod agreement;
pub mod cli;
pub mod model;
pub mod rational;
pub mod semantics;
pub mod sweep;
pub mod syntax;
pub mod transforms;

pub use model::{Event, Structure};
pub use rational::Rational;
pub use semantics::{EvalError, Evaluator, Mode};
pub use syntax::{parse, Formula, PlayerId, PropId};
