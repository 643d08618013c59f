//! Normal logic programs: surface syntax, grounding, completion, the
//! immediate consequence operator over infinite-valued interpretations, the
//! infinite-valued and well-founded models, and independent oracles.

mod gen;
mod ground;
mod oracle;
mod program;
mod semantics;
mod syntax;

pub use gen::{random_program, RandomProgramParams};
pub use ground::{ground, parse_program, GROUNDING_LIMIT};
pub use oracle::{fixed_points_bruteforce, least_model_bruteforce, sqle_by_level_sets, wfs_oracle, BRUTEFORCE_LIMIT};
pub use program::{Formula, Program, Rule};
pub use semantics::{
    collapse, eval_formula, eval_saturating, eval_unbounded, infinite_valued_model, solve_with_kappa,
    stability_check, tp_apply, tp_saturating, tp_unbounded, unsatisfied_rule, Solution, ThreeValuedModel, Tri,
};
pub use syntax::{parse, SourceAtom, SourceBody, SourceLiteral, SourceProgram, SourceRule, Term};

use thiserror::Error;

use crate::fixpoint::FixpointError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unsafe rule at {line}:{col}: {msg}")]
    Safety { line: usize, col: usize, msg: String },
    #[error("the program has no atoms")]
    Empty,
    #[error("{what} is {size}, above the limit of {limit}")]
    SizeLimit { what: String, size: u128, limit: u128 },
    #[error("atom {atom} would need a value of order {order}, beyond kappa = {kappa}")]
    Truncation { atom: String, order: u32, kappa: usize },
    #[error("the model changed when kappa was raised from {kappa} to {}: {before} vs {after}", kappa + 1)]
    Unstable { kappa: usize, before: String, after: String },
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Fixpoint(#[from] FixpointError),
}

impl LpError {
    /// Whether the error is caused by the input rather than by a broken invariant.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            LpError::Parse { .. } | LpError::Safety { .. } | LpError::Empty | LpError::SizeLimit { .. }
        )
    }
}
