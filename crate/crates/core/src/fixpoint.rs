//! Least fixed points of functions that preserve every stage preorder.
//!
//! For each stage `α` in turn, [`lfp`] starts from the supremum of the
//! earlier stage results and iterates `f` inside the stage (see
//! [`stage_iterate`]) until the iterate is stationary up to `=_α`. The stage
//! results form a compatible sequence whose supremum is the `⊑`-least
//! pre-fixed point, which is also the least fixed point.

use serde::Serialize;
use thiserror::Error;

use crate::axioms::CarrierIndex;
use crate::exec::Exec;
use crate::lattice::{LatticeError, StageIndex, StratifiedLattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixpointError {
    #[error("stage {stage}: start value is not below its image ({witness}); the function is not monotonic at this stage")]
    Precondition { stage: usize, witness: String },
    #[error("stage {stage}: no stationary point after {steps} applications")]
    Divergence { stage: usize, steps: usize },
    #[error("the constructed value {0} is not a fixed point")]
    NotFixed(String),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Inner-iteration schedule: a stage-supremum (limit) step is forced after
/// `limit_every` successor steps without stationarity, and the stage gives up
/// after `max_steps` applications in total.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IterationBudget {
    pub limit_every: usize,
    pub max_steps: usize,
}

impl IterationBudget {
    /// `carrier size + 1` steps between limits, `10 × carrier size` overall.
    pub fn for_carrier(size: u128) -> Self {
        let size = usize::try_from(size).unwrap_or(usize::MAX / 16).max(1);
        IterationBudget {
            limit_every: size.saturating_add(1),
            max_steps: size.saturating_mul(10),
        }
    }
}

/// One stage of the outer construction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord<E> {
    pub stage: usize,
    /// `y_α`, the supremum of the earlier stage results.
    pub start: E,
    /// `x_α`, the stage result.
    pub value: E,
    /// Applications of `f` before stationarity was detected.
    pub inner_steps: usize,
}

/// The full record of an [`lfp`] run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixpointTrace<E> {
    pub stages: Vec<StageRecord<E>>,
    pub result: E,
}

impl<E> FixpointTrace<E> {
    /// Applies `g` to every element of the trace.
    pub fn map<F, G: Fn(&E) -> F>(&self, g: G) -> FixpointTrace<F> {
        FixpointTrace {
            stages: self
                .stages
                .iter()
                .map(|r| StageRecord {
                    stage: r.stage,
                    start: g(&r.start),
                    value: g(&r.value),
                    inner_steps: r.inner_steps,
                })
                .collect(),
            result: g(&self.result),
        }
    }
}

/// `f_α(x)`: the `≤`-least element of the `⊑_α`-least class reachable from
/// `x` that `f` leaves stationary up to `=_α`. Returns the element and the
/// number of successor applications made.
///
/// Requires `x ⊑_α f(x)`; monotonicity of `f` at `α` is assumed.
pub fn stage_iterate<M, F>(
    model: &M,
    f: &F,
    stage: StageIndex,
    x: &M::Elem,
    budget: IterationBudget,
) -> Result<(M::Elem, usize), FixpointError>
where
    M: StratifiedLattice,
    F: Fn(&M::Elem) -> M::Elem,
{
    let fx = f(x);
    if !model.sqle_alpha(stage, x, &fx) {
        return Err(FixpointError::Precondition {
            stage: stage.value(),
            witness: format!("{} vs {}", model.render(x), model.render(&fx)),
        });
    }
    let mut chain = vec![x.clone()];
    let mut next = fx;
    let mut steps = 1;
    let mut since_limit = 1;
    loop {
        let cur = chain.last().expect("chain starts nonempty");
        let stationary = model.eq_alpha(stage, &next, cur);
        if stationary || since_limit >= budget.limit_every {
            if !stationary {
                chain.push(next);
            }
            let refs: Vec<&M::Elem> = chain.iter().collect();
            let y = model.alpha_lub(stage, &chain[0], &refs)?;
            let fy = f(&y);
            if model.eq_alpha(stage, &fy, &y) {
                return Ok((y, steps));
            }
            chain = vec![y];
            next = fy;
            since_limit = 0;
        } else {
            chain.push(next);
            next = f(chain.last().expect("just pushed"));
        }
        if steps >= budget.max_steps {
            return Err(FixpointError::Divergence {
                stage: stage.value(),
                steps,
            });
        }
        steps += 1;
        since_limit += 1;
    }
}

/// The least fixed point of `f`, built stage by stage.
pub fn lfp<M, F>(model: &M, f: &F, budget: IterationBudget) -> Result<FixpointTrace<M::Elem>, FixpointError>
where
    M: StratifiedLattice,
    F: Fn(&M::Elem) -> M::Elem,
{
    let mut stages: Vec<StageRecord<M::Elem>> = Vec::with_capacity(model.kappa());
    for stage in model.stages() {
        let refs: Vec<&M::Elem> = stages.iter().map(|r| &r.value).collect();
        let start = model.lub(&refs);
        let (value, inner_steps) = stage_iterate(model, f, stage, &start, budget)?;
        stages.push(StageRecord {
            stage: stage.value(),
            start,
            value,
            inner_steps,
        });
    }
    let refs: Vec<&M::Elem> = stages.iter().map(|r| &r.value).collect();
    let result = model.lub(&refs);
    if f(&result) != result {
        return Err(FixpointError::NotFixed(model.render(&result)));
    }
    Ok(FixpointTrace { stages, result })
}

/// `f: L → L'` preserves `⊑_α`: every pair `x ⊑_α y` of the domain maps to
/// `f(x) ⊑_α f(y)`. Returns the first violating pair.
pub fn is_alpha_monotonic<L, L2, F>(
    dom: &CarrierIndex<'_, L>,
    cod: &L2,
    f: &F,
    stage: usize,
    exec: Exec,
) -> Result<(), String>
where
    L: StratifiedLattice,
    L2: StratifiedLattice,
    F: Fn(&L::Elem) -> L2::Elem + Sync,
{
    let cs = cod.stage(stage).map_err(|e| e.to_string())?;
    let n = dom.len();
    let images = exec.map(n, |i| f(dom.elem(i)));
    match exec.find_first(n * n, |p| {
        let (x, y) = (p / n, p % n);
        (dom.sq(stage, x, y) && !cod.sqle_alpha(cs, &images[x], &images[y])).then(|| {
            format!(
                "{} ⊑_{stage} {} but their images {} and {} are not",
                dom.render(x),
                dom.render(y),
                cod.render(&images[x]),
                cod.render(&images[y])
            )
        })
    }) {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// Longest chain enumerated by [`is_alpha_continuous`] for a domain of `n` elements.
fn chain_bound(n: usize) -> usize {
    match n {
        0..=9 => 4,
        10..=64 => 3,
        _ => 2,
    }
}

/// `f: L → L'` is monotonic at `α` and commutes with stage suprema of
/// `⊑_α`-chains up to `=_α`. Chains are finite increasing prefixes with a
/// constant tail; the stage supremum in `L'` is taken in the cone of the
/// first image.
pub fn is_alpha_continuous<L, L2, F>(
    dom: &CarrierIndex<'_, L>,
    cod: &L2,
    f: &F,
    stage: usize,
    exec: Exec,
) -> Result<(), String>
where
    L: StratifiedLattice,
    L2: StratifiedLattice,
    F: Fn(&L::Elem) -> L2::Elem + Sync,
{
    is_alpha_monotonic(dom, cod, f, stage, exec)?;
    let cs = cod.stage(stage).map_err(|e| e.to_string())?;
    let ds = dom.stage(stage);
    let n = dom.len();
    let images = exec.map(n, |i| f(dom.elem(i)));
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|x| (0..n).filter(|&y| y != x && dom.sq(stage, x, y)).collect())
        .collect();
    let max_len = chain_bound(n);
    let found = exec.find_first(n, |start| {
        let mut stack = vec![vec![start]];
        while let Some(chain) = stack.pop() {
            let refs: Vec<&L::Elem> = chain.iter().map(|&i| dom.elem(i)).collect();
            let sup = match dom.model().alpha_lub(ds, refs[0], &refs) {
                Ok(s) => s,
                Err(e) => return Some(e.to_string()),
            };
            let lhs = f(&sup);
            let image_refs: Vec<&L2::Elem> = chain.iter().map(|&i| &images[i]).collect();
            let rhs = match cod.alpha_lub(cs, image_refs[0], &image_refs) {
                Ok(r) => r,
                Err(e) => return Some(format!("images of chain {} leave a cone: {e}", dom.render_set(&chain))),
            };
            if !cod.eq_alpha(cs, &lhs, &rhs) {
                return Some(format!(
                    "chain {}: image of the stage-{stage} supremum is {}, supremum of the images is {}",
                    dom.render_set(&chain),
                    cod.render(&lhs),
                    cod.render(&rhs)
                ));
            }
            if chain.len() < max_len {
                let last = *chain.last().expect("nonempty");
                for &y in &succ[last] {
                    let mut next = chain.clone();
                    next.push(y);
                    stack.push(next);
                }
            }
        }
        None
    });
    match found {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// Checks that `candidate` is a fixed point of `f` and is `⊑`-below every
/// pre-fixed point `f(z) ⊑ z` of the carrier.
pub fn verify_least_prefix<M, F>(idx: &CarrierIndex<'_, M>, f: &F, candidate: &M::Elem, exec: Exec) -> Result<(), String>
where
    M: StratifiedLattice,
    F: Fn(&M::Elem) -> M::Elem + Sync,
{
    let model = idx.model();
    let c = idx
        .idx(candidate)
        .ok_or_else(|| format!("{} is not in the carrier", model.render(candidate)))?;
    let fc = f(candidate);
    if fc != *candidate {
        return Err(format!(
            "{} is not a fixed point: it maps to {}",
            model.render(candidate),
            model.render(&fc)
        ));
    }
    let n = idx.len();
    let images: Vec<Option<usize>> = exec.map(n, |i| idx.idx(&f(idx.elem(i))));
    match exec.find_first(n, |z| match images[z] {
        None => Some(format!("the image of {} leaves the carrier", idx.render(z))),
        Some(fz) => (idx.sqle(fz, z) && !idx.sqle(c, z)).then(|| {
            format!(
                "{} is a pre-fixed point not above {}",
                idx.render(z),
                idx.render(c)
            )
        }),
    }) {
        None => Ok(()),
        Some(w) => Err(w),
    }
}

/// Checks the defining properties of `y = f_α(x)` by enumeration: `x ⊑_α y`,
/// `f(y) =_α y`, `y` is `≤`-least in its class, and `y ⊑_α z` for every `z`
/// with `x ⊑_α z` and `f(z) ⊑_α z`.
pub fn verify_stage_result<M, F>(
    idx: &CarrierIndex<'_, M>,
    f: &F,
    stage: usize,
    x: &M::Elem,
    y: &M::Elem,
) -> Result<(), String>
where
    M: StratifiedLattice,
    F: Fn(&M::Elem) -> M::Elem,
{
    let model = idx.model();
    let s = idx.stage(stage);
    let render = |e: &M::Elem| model.render(e);
    if !model.sqle_alpha(s, x, y) {
        return Err(format!("start {} is not ⊑_{stage} result {}", render(x), render(y)));
    }
    if !model.eq_alpha(s, &f(y), y) {
        return Err(format!("result {} is not stationary at stage {stage}", render(y)));
    }
    if model.slice(y, s) != *y {
        return Err(format!("result {} is not the least element of its class", render(y)));
    }
    for z in idx.elems() {
        if model.sqle_alpha(s, x, z) && model.sqle_alpha(s, &f(z), z) && !model.sqle_alpha(s, y, z) {
            return Err(format!(
                "{} is a stage-{stage} pre-fixed point above the start but not above {}",
                render(z),
                render(y)
            ));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{TruthModelV, TruthValue, TruthValue::*};
    use crate::zoo::ClassicalModel;
    use crate::FiniteLattice;

    fn v(k: usize) -> TruthModelV {
        TruthModelV::new(k).unwrap()
    }

    #[test]
    fn identity_gives_bottom() {
        let m = v(3);
        let id = |x: &TruthValue| *x;
        let trace = lfp(&m, &id, IterationBudget::for_carrier(m.carrier_size())).unwrap();
        assert_eq!(trace.result, False(0));
        assert!(trace.stages.iter().all(|r| r.inner_steps == 1));
    }

    #[test]
    fn identity_stage_iterate_slices() {
        let m = v(4);
        let id = |x: &TruthValue| *x;
        let budget = IterationBudget::for_carrier(9);
        let idx = CarrierIndex::new(&m, 100, Exec::Sequential).unwrap();
        for s in m.stages() {
            for x in m.elements() {
                let (y, _) = stage_iterate(&m, &id, s, &x, budget).unwrap();
                assert_eq!(y, m.slice(&x, s));
                verify_stage_result(&idx, &id, s.value(), &x, &y).unwrap();
            }
        }
    }

    #[test]
    fn swap_is_not_monotonic() {
        let m = v(1);
        let idx = CarrierIndex::new(&m, 100, Exec::Sequential).unwrap();
        let swap = |x: &TruthValue| match x {
            False(0) => True(0),
            True(0) => False(0),
            other => *other,
        };
        let w = is_alpha_monotonic(&idx, &m, &swap, 0, Exec::Sequential).unwrap_err();
        assert!(w.contains("F0 ⊑_0"), "{w}");
    }

    #[test]
    fn negation_is_continuous_into_a_wider_model() {
        let m = v(3);
        let wide = v(4);
        let idx = CarrierIndex::new(&m, 100, Exec::Sequential).unwrap();
        let neg = |x: &TruthValue| x.negate();
        for a in 0..3 {
            is_alpha_continuous(&idx, &wide, &neg, a, Exec::Parallel).unwrap();
        }
    }

    #[test]
    fn top_is_not_least() {
        let m = v(2);
        let idx = CarrierIndex::new(&m, 100, Exec::Sequential).unwrap();
        let id = |x: &TruthValue| *x;
        let w = verify_least_prefix(&idx, &id, &True(0), Exec::Sequential).unwrap_err();
        assert!(w.starts_with("F0 "), "{w}");
        verify_least_prefix(&idx, &id, &False(0), Exec::Sequential).unwrap();
    }

    #[test]
    fn classical_closure() {
        let lat = FiniteLattice::powerset(3).unwrap();
        let m = ClassicalModel::new(lat, 2).unwrap();
        // add bit 1 whenever bit 0 is present, and always add bit 0
        let f = |x: &usize| {
            let mut y = *x | 1;
            if x & 1 != 0 {
                y |= 2;
            }
            y
        };
        let trace = lfp(&m, &f, IterationBudget::for_carrier(8)).unwrap();
        assert_eq!(trace.result, 3);
        assert_eq!(trace.stages[0].inner_steps, 3);
    }

    #[test]
    fn non_monotonic_start_is_reported() {
        let m = v(2);
        // the constant F0 leaves the stage-1 cone of T1
        let f = |_: &TruthValue| False(0);
        let err = stage_iterate(&m, &f, m.stage(1).unwrap(), &True(1), IterationBudget::for_carrier(5));
        assert!(matches!(err, Err(FixpointError::Precondition { stage: 1, .. })));
    }

    #[test]
    fn budget_defaults() {
        assert_eq!(
            IterationBudget::for_carrier(25),
            IterationBudget {
                limit_every: 26,
                max_steps: 250
            }
        );
    }
}
