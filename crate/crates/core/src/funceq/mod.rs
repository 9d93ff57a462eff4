//! Catalan-type functional recurrences and their evaluation.

mod catalog;
mod eval;
mod marginal;
mod spec;

pub use catalog::{builtin_spec, catalog};
pub use eval::{
    deviation_name, eval_full, eval_full_with_limit, eval_truncated, EnumeratorSequence, Mode, Values,
    FULL_MODE_LIMIT,
};
pub use marginal::eval_marginal;
pub use spec::{Atom, FuncRecSpec, Image, RecTerm, VALIDATION_N};
