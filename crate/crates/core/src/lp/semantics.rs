//! The immediate consequence operator and the models it determines.
//!
//! Interpretations live in a model with finitely many stages, while negation
//! raises orders by one. [`tp_apply`] refuses to leave the model. The
//! fixed-point construction instead runs [`tp_saturating`], which maps every
//! value of order `≥ κ` to the undefined value; saturation preserves every
//! stage preorder and stage supremum, so it is a legitimate operator on the
//! truncated model. The result is then checked to be a genuine fixed point
//! of the strict operator, and solving again with one more stage must give
//! the same answer.

use std::fmt;

use serde::Serialize;

use super::program::{Formula, Program};
use super::LpError;
use crate::fixpoint::{lfp, FixpointTrace, IterationBudget};
use crate::truth::{tv_and, tv_or, TruthModelV, TruthValue};
use crate::zoo::{Interpretation, InterpretationModel};

fn eval_with<E>(
    i: &Interpretation,
    f: &Formula,
    neg: &impl Fn(TruthValue) -> Result<TruthValue, E>,
) -> Result<TruthValue, E> {
    Ok(match f {
        Formula::Atom(a) => i.get(*a),
        Formula::Neg(g) => neg(eval_with(i, g, neg)?)?,
        Formula::And(gs) => {
            let mut acc = TruthValue::True(0);
            for g in gs {
                acc = tv_and(acc, eval_with(i, g, neg)?);
            }
            acc
        }
        Formula::Or(gs) => {
            let mut acc = TruthValue::False(0);
            for g in gs {
                acc = tv_or(acc, eval_with(i, g, neg)?);
            }
            acc
        }
        Formula::True => TruthValue::True(0),
        Formula::False => TruthValue::False(0),
    })
}

/// Value of a formula; negation fails when it would leave `model`.
pub fn eval_formula(model: &TruthModelV, i: &Interpretation, f: &Formula) -> Result<TruthValue, crate::truth::TruthError> {
    eval_with(i, f, &|v| model.neg(v))
}

/// Value of a formula with unbounded orders.
pub fn eval_unbounded(i: &Interpretation, f: &Formula) -> TruthValue {
    eval_with::<std::convert::Infallible>(i, f, &|v| Ok(v.negate())).unwrap_or_else(|e| match e {})
}

/// Value of a formula, with orders `≥ kappa` replaced by the undefined value.
pub fn eval_saturating(kappa: usize, i: &Interpretation, f: &Formula) -> TruthValue {
    eval_unbounded(i, f).saturate(kappa)
}

/// `T_P(I)` with unbounded orders.
pub fn tp_unbounded(program: &Program, i: &Interpretation) -> Interpretation {
    let mut values = vec![TruthValue::False(0); program.atoms().len()];
    for r in program.rules() {
        values[r.head] = tv_or(values[r.head], eval_unbounded(i, &r.body));
    }
    Interpretation::new(values)
}

/// `T_P(I)` followed by saturation at `kappa`.
pub fn tp_saturating(program: &Program, kappa: usize, i: &Interpretation) -> Interpretation {
    let out = tp_unbounded(program, i);
    Interpretation::new(out.into_values().into_iter().map(|v| v.saturate(kappa)).collect())
}

/// `T_P(I)` in the model with `kappa` stages; fails if any atom would need a
/// value of order `≥ kappa`.
pub fn tp_apply(program: &Program, kappa: usize, i: &Interpretation) -> Result<Interpretation, LpError> {
    let out = tp_unbounded(program, i);
    for (a, v) in out.values().iter().enumerate() {
        if !v.fits(kappa) {
            return Err(LpError::Truncation {
                atom: program.atoms()[a].clone(),
                order: v.order().unwrap_or(0),
                kappa,
            });
        }
    }
    Ok(out)
}

/// The first rule whose head value is below its body value (unbounded orders).
pub fn unsatisfied_rule(program: &Program, i: &Interpretation) -> Option<usize> {
    program
        .rules()
        .iter()
        .position(|r| i.get(r.head) < eval_unbounded(i, &r.body))
}

/// The infinite-valued model of a program with its construction trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub model: Interpretation,
    pub trace: FixpointTrace<Interpretation>,
    pub kappa: usize,
}

fn budget(program: &Program, kappa: usize) -> IterationBudget {
    let n = program.atoms().len();
    IterationBudget {
        limit_every: 2 * n + 2,
        max_steps: (10 * kappa * n).max(2 * n + 2),
    }
}

/// The least fixed point of the saturated operator with `kappa` stages,
/// checked to be a fixed point of the strict operator.
pub fn solve_with_kappa(program: &Program, kappa: usize) -> Result<Solution, LpError> {
    if program.atoms().is_empty() {
        return Err(LpError::Empty);
    }
    let model = InterpretationModel::new(program.atoms().to_vec(), kappa)
        .map_err(|e| LpError::Internal(e.to_string()))?;
    let f = |i: &Interpretation| tp_saturating(program, kappa, i);
    let trace = lfp(&model, &f, budget(program, kappa))?;
    let m = trace.result.clone();
    let strict = tp_apply(program, kappa, &m)?;
    if strict != m {
        return Err(LpError::Internal(format!(
            "{} is not a fixed point of the immediate consequence operator",
            m.render_with(program.atoms())
        )));
    }
    Ok(Solution {
        model: m,
        trace,
        kappa,
    })
}

/// Solves with `kappa + 1` stages and fails unless the model is unchanged.
pub fn stability_check(program: &Program, solution: &Solution) -> Result<(), LpError> {
    let wider = solve_with_kappa(program, solution.kappa + 1)?;
    if wider.model != solution.model {
        return Err(LpError::Unstable {
            kappa: solution.kappa,
            before: solution.model.render_with(program.atoms()),
            after: wider.model.render_with(program.atoms()),
        });
    }
    Ok(())
}

/// `M_P`: solves with `kappa` stages (default: number of atoms + 2) and
/// confirms the answer is stable under one more stage.
pub fn infinite_valued_model(program: &Program, kappa: Option<usize>) -> Result<Solution, LpError> {
    let kappa = kappa.unwrap_or(program.atoms().len() + 2);
    if kappa == 0 {
        return Err(LpError::Internal("kappa must be at least 1".into()));
    }
    let solution = solve_with_kappa(program, kappa)?;
    stability_check(program, &solution)?;
    Ok(solution)
}

/// A three-valued truth value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    False,
    Undefined,
    True,
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::False => "false",
            Tri::Undefined => "undefined",
            Tri::True => "true",
        })
    }
}

impl std::str::FromStr for Tri {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "false" => Ok(Tri::False),
            "undefined" => Ok(Tri::Undefined),
            "true" => Ok(Tri::True),
            other => Err(format!("not a three-valued truth value: {other:?}")),
        }
    }
}

/// A three-valued interpretation indexed by atom position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThreeValuedModel {
    pub values: Vec<Tri>,
}

impl ThreeValuedModel {
    pub fn render_with<S: AsRef<str>>(&self, atoms: &[S]) -> String {
        let parts: Vec<String> = self
            .values
            .iter()
            .zip(atoms)
            .map(|(v, a)| format!("{}: {v}", a.as_ref()))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Collapses every `T_β` to true and every `F_β` to false.
pub fn collapse(i: &Interpretation) -> ThreeValuedModel {
    ThreeValuedModel {
        values: i
            .values()
            .iter()
            .map(|v| match v {
                TruthValue::True(_) => Tri::True,
                TruthValue::False(_) => Tri::False,
                TruthValue::Undefined => Tri::Undefined,
            })
            .collect(),
    }
}
