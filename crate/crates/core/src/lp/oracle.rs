//! Reference implementations used to cross-check the fixed-point engine.
//!
//! Neither oracle calls the lattice code. [`wfs_oracle`] is the classical
//! alternating fixpoint on two-valued sets; [`least_model_bruteforce`]
//! enumerates every interpretation.

use super::program::{Formula, Program};
use super::semantics::{ThreeValuedModel, Tri};
use super::LpError;
use crate::exec::Exec;
use crate::truth::TruthValue;
use crate::zoo::Interpretation;

/// Maximum number of interpretations [`least_model_bruteforce`] enumerates.
pub const BRUTEFORCE_LIMIT: u128 = 1_000_000;

/// Positive occurrences read `pos`, negated ones read `neg`.
fn holds(f: &Formula, pos: &[bool], neg: &[bool]) -> bool {
    match f {
        Formula::Atom(a) => pos[*a],
        Formula::Neg(g) => !holds(g, neg, pos),
        Formula::And(gs) => gs.iter().all(|g| holds(g, pos, neg)),
        Formula::Or(gs) => gs.iter().any(|g| holds(g, pos, neg)),
        Formula::True => true,
        Formula::False => false,
    }
}

/// Least model of the program with negation evaluated against `assumed`.
fn gamma(program: &Program, assumed: &[bool]) -> Vec<bool> {
    let mut cur = vec![false; program.atoms().len()];
    loop {
        let mut next = vec![false; cur.len()];
        for r in program.rules() {
            if holds(&r.body, &cur, assumed) {
                next[r.head] = true;
            }
        }
        if next == cur {
            return cur;
        }
        cur = next;
    }
}

/// The well-founded model by the alternating fixpoint construction.
pub fn wfs_oracle(program: &Program) -> ThreeValuedModel {
    let mut t = vec![false; program.atoms().len()];
    loop {
        let next = gamma(program, &gamma(program, &t));
        if next == t {
            break;
        }
        t = next;
    }
    let possible = gamma(program, &t);
    ThreeValuedModel {
        values: t
            .iter()
            .zip(&possible)
            .map(|(&sure, &maybe)| match (sure, maybe) {
                (true, _) => Tri::True,
                (false, true) => Tri::Undefined,
                (false, false) => Tri::False,
            })
            .collect(),
    }
}

fn level_masks(i: &Interpretation, level: u32) -> (u64, u64) {
    let (mut t, mut f) = (0u64, 0u64);
    for (a, v) in i.values().iter().enumerate() {
        match v {
            TruthValue::True(o) if *o == level => t |= 1 << a,
            TruthValue::False(o) if *o == level => f |= 1 << a,
            _ => {}
        }
    }
    (t, f)
}

/// `I ⊑ J` read off the level sets: at the first level where the sets of
/// `T_α` atoms or of `F_α` atoms differ, `J` must have gained true atoms and
/// lost false ones. Supports at most 64 atoms.
pub fn sqle_by_level_sets(i: &Interpretation, j: &Interpretation) -> bool {
    assert!(i.len() == j.len() && i.len() <= 64, "interpretations over at most 64 shared atoms");
    let max_order = i
        .values()
        .iter()
        .chain(j.values())
        .filter_map(|v| v.order())
        .max();
    let Some(max_order) = max_order else {
        return true;
    };
    for level in 0..=max_order {
        let (ti, fi) = level_masks(i, level);
        let (tj, fj) = level_masks(j, level);
        if ti != tj || fi != fj {
            return ti & !tj == 0 && fj & !fi == 0;
        }
    }
    true
}

fn value(f: &Formula, i: &[TruthValue]) -> TruthValue {
    match f {
        Formula::Atom(a) => i[*a],
        Formula::Neg(g) => match value(g, i) {
            TruthValue::False(o) => TruthValue::True(o + 1),
            TruthValue::True(o) => TruthValue::False(o + 1),
            TruthValue::Undefined => TruthValue::Undefined,
        },
        Formula::And(gs) => gs.iter().map(|g| value(g, i)).min().unwrap_or(TruthValue::True(0)),
        Formula::Or(gs) => gs.iter().map(|g| value(g, i)).max().unwrap_or(TruthValue::False(0)),
        Formula::True => TruthValue::True(0),
        Formula::False => TruthValue::False(0),
    }
}

fn consequences(program: &Program, i: &[TruthValue]) -> Vec<TruthValue> {
    let mut out = vec![TruthValue::False(0); i.len()];
    for r in program.rules() {
        out[r.head] = out[r.head].max(value(&r.body, i));
    }
    out
}

fn is_model(program: &Program, i: &[TruthValue]) -> bool {
    program.rules().iter().all(|r| i[r.head] >= value(&r.body, i))
}

struct Space {
    values: Vec<TruthValue>,
    n: usize,
    size: usize,
}

impl Space {
    fn new(program: &Program, kappa: usize) -> Result<Self, LpError> {
        let n = program.atoms().len();
        if n == 0 {
            return Err(LpError::Empty);
        }
        if kappa == 0 {
            return Err(LpError::Internal("kappa must be at least 1".into()));
        }
        let base = 2 * kappa as u128 + 1;
        let size = u32::try_from(n).ok().and_then(|n| base.checked_pow(n)).unwrap_or(u128::MAX);
        if size > BRUTEFORCE_LIMIT || n > 64 {
            return Err(LpError::SizeLimit {
                what: "number of interpretations".into(),
                size,
                limit: BRUTEFORCE_LIMIT,
            });
        }
        let mut values: Vec<TruthValue> = (0..kappa as u32).map(TruthValue::False).collect();
        values.push(TruthValue::Undefined);
        values.extend((0..kappa as u32).rev().map(TruthValue::True));
        Ok(Space {
            values,
            n,
            size: size as usize,
        })
    }

    fn decode(&self, mut index: usize) -> Vec<TruthValue> {
        let mut out = vec![TruthValue::Undefined; self.n];
        for slot in out.iter_mut().rev() {
            *slot = self.values[index % self.values.len()];
            index /= self.values.len();
        }
        out
    }
}

/// Every fixed point of `T_P` with values in the model with `kappa` stages,
/// in enumeration order, together with the number of interpretations scanned.
pub fn fixed_points_bruteforce(program: &Program, kappa: usize, exec: Exec) -> Result<(Vec<Interpretation>, usize), LpError> {
    let space = Space::new(program, kappa)?;
    let fixed = exec
        .map(space.size, |k| {
            let i = space.decode(k);
            (consequences(program, &i) == i).then(|| Interpretation::new(i))
        })
        .into_iter()
        .flatten()
        .collect();
    Ok((fixed, space.size))
}

/// The `⊑`-least fixed point of `T_P` among interpretations with values in
/// the model with `kappa` stages, found by enumeration and confirmed to be
/// `⊑`-below every model of the program in that space.
pub fn least_model_bruteforce(program: &Program, kappa: usize, exec: Exec) -> Result<Interpretation, LpError> {
    let space = Space::new(program, kappa)?;
    let (fixed, _) = fixed_points_bruteforce(program, kappa, exec)?;
    let Some(mut least) = fixed.first().cloned() else {
        return Err(LpError::Internal(format!("no fixed point with kappa = {kappa}")));
    };
    for f in &fixed[1..] {
        if sqle_by_level_sets(f, &least) {
            least = f.clone();
        }
    }
    if let Some(f) = fixed.iter().find(|f| !sqle_by_level_sets(&least, f)) {
        return Err(LpError::Internal(format!(
            "no least fixed point with kappa = {kappa}: {} and {} are incomparable",
            least.render_with(program.atoms()),
            f.render_with(program.atoms())
        )));
    }
    let below = exec.find_first(space.size, |k| {
        let i = Interpretation::new(space.decode(k));
        (is_model(program, i.values()) && !sqle_by_level_sets(&least, &i)).then_some(i)
    });
    if let Some(m) = below {
        return Err(LpError::Internal(format!(
            "least fixed point {} is not below the model {}",
            least.render_with(program.atoms()),
            m.render_with(program.atoms())
        )));
    }
    Ok(least)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::parse_program;
    use crate::truth::TruthValue::*;

    const EXAMPLE: &str = "p :- not q.\nq :- not r.\ns :- p.\ns :- not s.\n";

    #[test]
    fn wfs_examples() {
        let p = parse_program(EXAMPLE).unwrap();
        assert_eq!(wfs_oracle(&p).values, vec![Tri::False, Tri::True, Tri::False, Tri::Undefined]);
        let p = parse_program("p :- not p.").unwrap();
        assert_eq!(wfs_oracle(&p).values, vec![Tri::Undefined]);
        let p = parse_program("p :- q.\nq.").unwrap();
        assert_eq!(wfs_oracle(&p).values, vec![Tri::True, Tri::True]);
        let p = parse_program("p :- not q.\nq :- not p.").unwrap();
        assert_eq!(wfs_oracle(&p).values, vec![Tri::Undefined, Tri::Undefined]);
    }

    #[test]
    fn level_set_order() {
        let i = |vs: &[TruthValue]| Interpretation::new(vs.to_vec());
        assert!(sqle_by_level_sets(&i(&[False(0), False(0)]), &i(&[True(0), Undefined])));
        assert!(sqle_by_level_sets(&i(&[False(1)]), &i(&[Undefined])));
        assert!(!sqle_by_level_sets(&i(&[Undefined]), &i(&[False(1)])));
        assert!(sqle_by_level_sets(&i(&[False(2), True(1)]), &i(&[False(2), True(1)])));
        assert!(!sqle_by_level_sets(&i(&[True(0), False(0)]), &i(&[False(0), True(0)])));
        assert!(sqle_by_level_sets(&i(&[True(1), False(1)]), &i(&[True(0), True(1)])));
    }

    #[test]
    fn bruteforce_examples() {
        let p = parse_program("p :- not p.").unwrap();
        assert_eq!(least_model_bruteforce(&p, 2, Exec::Sequential).unwrap().values(), &[Undefined]);
        let p = parse_program("p.").unwrap();
        assert_eq!(least_model_bruteforce(&p, 1, Exec::Sequential).unwrap().values(), &[True(0)]);
        let p = parse_program(EXAMPLE).unwrap();
        assert_eq!(
            least_model_bruteforce(&p, 4, Exec::Parallel).unwrap().values(),
            &[False(2), True(1), False(0), Undefined]
        );
    }

    #[test]
    fn bruteforce_size_limit() {
        let text: String = (0..20).map(|k| format!("a{k} :- not a{}.\n", (k + 1) % 20)).collect();
        let p = parse_program(&text).unwrap();
        assert!(matches!(least_model_bruteforce(&p, 1, Exec::Sequential), Err(LpError::SizeLimit { .. })));
    }
}
