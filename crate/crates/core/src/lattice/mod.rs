//! Stratified complete lattices.
//!
//! A model is a complete lattice `(L, ≤)` with a stage count `κ` and, for
//! every stage `α < κ`, a preorder `⊑_α` together with the stage supremum
//! `⊔_α` taken inside a cone `(x]_α`. Everything else (stage equivalence,
//! the strict stage relations, the global order `⊑`, slices, compatible
//! sequences and `⊑`-suprema) is derived here from those primitives.
//!
//! Stage counts are finite. Stages are addressed through [`StageIndex`],
//! which can only be obtained from a model and is therefore always in range.

mod finite;

pub use finite::FiniteLattice;

use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

/// Errors raised by lattice operations and model construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("stage {stage} is out of range for a model with kappa = {kappa}")]
    StageOutOfRange { stage: usize, kappa: usize },
    #[error("element {element} is not in the stage-{stage} cone of {anchor}")]
    OutsideCone {
        stage: usize,
        anchor: String,
        element: String,
    },
    #[error("not a compatible sequence: {0}")]
    InvalidSequence(String),
    #[error("{what} has {size} elements, above the limit of {limit}")]
    SizeLimit {
        what: String,
        size: u128,
        limit: u128,
    },
    #[error("invalid model: {0}")]
    Construction(String),
}

/// A stage ordinal `α < κ` of some model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StageIndex(usize);

impl StageIndex {
    pub fn value(self) -> usize {
        self.0
    }

    /// The stage zero, valid in every model (`κ > 0`).
    pub const ZERO: StageIndex = StageIndex(0);

    pub(crate) fn new_unchecked(value: usize) -> Self {
        StageIndex(value)
    }
}

impl std::fmt::Display for StageIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A sequence `(x_α)_{α<κ}` in which every `x_α` is the `≤`-least element of
/// its stage-`α` class and `x_α =_α x_β` whenever `α < β`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompatibleSequence<E> {
    entries: Vec<E>,
}

impl<E> CompatibleSequence<E> {
    /// Wraps raw entries without validation; [`StratifiedLattice::recompose`]
    /// validates before use.
    pub fn from_entries(entries: Vec<E>) -> Self {
        CompatibleSequence { entries }
    }

    pub fn entries(&self) -> &[E] {
        &self.entries
    }

    pub fn get(&self, stage: StageIndex) -> &E {
        &self.entries[stage.value()]
    }

    pub fn into_entries(self) -> Vec<E> {
        self.entries
    }
}

/// The contract every model implements.
///
/// Implementors provide the carrier, `≤`, `⋁`, `κ`, `⊑_α` and `⊔_α`; all
/// derived relations and constructions are provided methods. The carrier is
/// finite and enumerable, though some models (interpretation spaces) are too
/// large to enumerate in practice and are only used through the primitives.
pub trait StratifiedLattice: Sync {
    type Elem: Clone + Eq + Hash + Debug + Send + Sync;

    /// The stage count `κ ≥ 1`.
    fn kappa(&self) -> usize;

    /// Number of carrier elements.
    fn carrier_size(&self) -> u128;

    /// All carrier elements, in a fixed deterministic order.
    fn elements(&self) -> Vec<Self::Elem>;

    /// The lattice order `≤`.
    fn le(&self, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// `⋁xs`; the empty supremum is `⊥`.
    fn lub(&self, xs: &[&Self::Elem]) -> Self::Elem;

    /// The stage preorder `x ⊑_α y`.
    fn sqle_alpha(&self, stage: StageIndex, x: &Self::Elem, y: &Self::Elem) -> bool;

    /// `⊔_α xs`, computed inside the cone `(anchor]_α`. Fails when some
    /// element of `xs` lies outside that cone.
    fn alpha_lub(
        &self,
        stage: StageIndex,
        anchor: &Self::Elem,
        xs: &[&Self::Elem],
    ) -> Result<Self::Elem, LatticeError>;

    /// Human-readable rendering used in witnesses and reports.
    fn render(&self, x: &Self::Elem) -> String {
        format!("{x:?}")
    }

    fn bottom(&self) -> Self::Elem {
        self.lub(&[])
    }

    /// Validates a raw stage number against `κ`.
    fn stage(&self, value: usize) -> Result<StageIndex, LatticeError> {
        if value < self.kappa() {
            Ok(StageIndex(value))
        } else {
            Err(LatticeError::StageOutOfRange {
                stage: value,
                kappa: self.kappa(),
            })
        }
    }

    /// All stages `0..κ` in increasing order.
    fn stages(&self) -> Vec<StageIndex> {
        (0..self.kappa()).map(StageIndex).collect()
    }

    /// `x =_α y`: the equivalence determined by `⊑_α`.
    fn eq_alpha(&self, stage: StageIndex, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.sqle_alpha(stage, x, y) && self.sqle_alpha(stage, y, x)
    }

    /// `x ⊏_α y`: `x ⊑_α y` without `x =_α y`.
    fn lt_alpha(&self, stage: StageIndex, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.sqle_alpha(stage, x, y) && !self.sqle_alpha(stage, y, x)
    }

    /// The global partial order: `x = y` or `x ⊏_α y` for some stage.
    fn sqle(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y || (0..self.kappa()).any(|a| self.lt_alpha(StageIndex(a), x, y))
    }

    /// The unique stage at which `x ⊏_α y`, if any.
    fn strict_stage(&self, x: &Self::Elem, y: &Self::Elem) -> Option<StageIndex> {
        (0..self.kappa())
            .map(StageIndex)
            .find(|&a| self.lt_alpha(a, x, y))
    }

    /// `y ∈ (anchor]_α`, i.e. `anchor =_β y` for every `β < α`.
    fn in_cone(&self, stage: StageIndex, anchor: &Self::Elem, y: &Self::Elem) -> bool {
        (0..stage.0).all(|b| self.eq_alpha(StageIndex(b), anchor, y))
    }

    /// The slice `x|_α = ⊔_α {x}`: the `≤`-least element `=_α`-equivalent to `x`.
    fn slice(&self, x: &Self::Elem, stage: StageIndex) -> Self::Elem {
        self.alpha_lub(stage, x, &[x])
            .expect("an element always lies in its own cone")
    }

    /// `x ↦ (x|_α)_{α<κ}`.
    fn decompose(&self, x: &Self::Elem) -> CompatibleSequence<Self::Elem> {
        CompatibleSequence {
            entries: (0..self.kappa())
                .map(|a| self.slice(x, StageIndex(a)))
                .collect(),
        }
    }

    /// Checks the compatibility conditions on a candidate sequence.
    fn validate_sequence(&self, seq: &CompatibleSequence<Self::Elem>) -> Result<(), LatticeError> {
        let entries = seq.entries();
        if entries.len() != self.kappa() {
            return Err(LatticeError::InvalidSequence(format!(
                "expected {} entries, got {}",
                self.kappa(),
                entries.len()
            )));
        }
        for (a, x) in entries.iter().enumerate() {
            let stage = StageIndex(a);
            // x_α is ≤-least in [x_α]_α exactly when it is a fixed point of the slice map.
            if self.slice(x, stage) != *x {
                return Err(LatticeError::InvalidSequence(format!(
                    "entry {a} = {} is not the least element of its stage class",
                    self.render(x)
                )));
            }
            for (b, y) in entries.iter().enumerate().skip(a + 1) {
                if !self.eq_alpha(stage, x, y) {
                    return Err(LatticeError::InvalidSequence(format!(
                        "entries {a} and {b} disagree at stage {a}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `⋁_α x_α` of a validated compatible sequence.
    fn recompose(&self, seq: &CompatibleSequence<Self::Elem>) -> Result<Self::Elem, LatticeError> {
        self.validate_sequence(seq)?;
        let refs: Vec<&Self::Elem> = seq.entries().iter().collect();
        Ok(self.lub(&refs))
    }

    /// Least upper bound with respect to `⊑`, built stage by stage.
    ///
    /// At stage `α` the survivors `Y_α` are the elements that agreed with
    /// every earlier approximation; `x_α` is `⊔_α Y_α`, or the supremum of the
    /// earlier approximations once nothing survives. The result is the
    /// supremum of all approximations. `sq_lub(∅) = ⊥`.
    fn sq_lub(&self, xs: &[&Self::Elem]) -> Self::Elem {
        if xs.is_empty() {
            return self.bottom();
        }
        let mut survivors: Vec<&Self::Elem> = xs.to_vec();
        let mut approximations: Vec<Self::Elem> = Vec::with_capacity(self.kappa());
        for a in 0..self.kappa() {
            let stage = StageIndex(a);
            let x_alpha = if survivors.is_empty() {
                let refs: Vec<&Self::Elem> = approximations.iter().collect();
                self.lub(&refs)
            } else {
                self.alpha_lub(stage, survivors[0], &survivors)
                    .expect("survivors share their lower stages")
            };
            survivors.retain(|y| self.eq_alpha(stage, y, &x_alpha));
            approximations.push(x_alpha);
        }
        let refs: Vec<&Self::Elem> = approximations.iter().collect();
        self.lub(&refs)
    }

    /// Verifies by enumeration that `alpha_lub(stage, anchor, xs)` meets its
    /// defining property: it lies in `(anchor]_α`, bounds `xs` under `⊑_α`,
    /// and is both `⊑_α`-below and `≤`-below every other such bound.
    fn alpha_lub_valid(
        &self,
        stage: StageIndex,
        anchor: &Self::Elem,
        xs: &[&Self::Elem],
    ) -> Result<bool, LatticeError> {
        if let Some(out) = xs.iter().find(|x| !self.in_cone(stage, anchor, x)) {
            return Err(LatticeError::OutsideCone {
                stage: stage.0,
                anchor: self.render(anchor),
                element: self.render(out),
            });
        }
        let y = self.alpha_lub(stage, anchor, xs)?;
        if !self.in_cone(stage, anchor, &y) || !xs.iter().all(|x| self.sqle_alpha(stage, x, &y)) {
            return Ok(false);
        }
        let ok = self.elements().iter().all(|z| {
            !self.in_cone(stage, anchor, z)
                || !xs.iter().all(|x| self.sqle_alpha(stage, x, z))
                || (self.sqle_alpha(stage, &y, z) && self.le(&y, z))
        });
        Ok(ok)
    }
}

/// Fails with [`LatticeError::OutsideCone`] if any element escapes `(anchor]_α`.
pub(crate) fn ensure_in_cone<M: StratifiedLattice + ?Sized>(
    model: &M,
    stage: StageIndex,
    anchor: &M::Elem,
    xs: &[&M::Elem],
) -> Result<(), LatticeError> {
    match xs.iter().find(|x| !model.in_cone(stage, anchor, x)) {
        None => Ok(()),
        Some(out) => Err(LatticeError::OutsideCone {
            stage: stage.value(),
            anchor: model.render(anchor),
            element: model.render(out),
        }),
    }
}
