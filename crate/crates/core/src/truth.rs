//! The infinite-valued truth lattice, truncated to finitely many stages.
//!
//! Values are `F_β` and `T_β` for `β < κ` plus the undefined value `0`,
//! ordered `F_0 < F_1 < … < 0 < … < T_1 < T_0`. The order of `F_β` and
//! `T_β` is `β`; the undefined value has infinite order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lattice::{ensure_in_cone, LatticeError, StageIndex, StratifiedLattice};

/// A truth value. Orders are unbounded here; a [`TruthModelV`] fixes the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TruthValue {
    False(u32),
    True(u32),
    Undefined,
}

pub use TruthValue::{False, True, Undefined};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TruthError {
    #[error("value of order {order} does not fit below kappa = {kappa}")]
    Truncation { order: u32, kappa: usize },
    #[error("cannot parse truth value {0:?}")]
    Parse(String),
}

impl TruthValue {
    /// `None` stands for the infinite order of the undefined value.
    pub fn order(self) -> Option<u32> {
        match self {
            False(b) | True(b) => Some(b),
            Undefined => None,
        }
    }

    /// `order(self) ≥ alpha`, with the undefined value above everything.
    pub fn order_at_least(self, alpha: usize) -> bool {
        self.order().is_none_or(|b| b as usize >= alpha)
    }

    /// `order(self) > alpha`.
    pub fn order_above(self, alpha: usize) -> bool {
        self.order().is_none_or(|b| b as usize > alpha)
    }

    fn rank(self) -> (u8, i64) {
        match self {
            False(b) => (0, b as i64),
            Undefined => (1, 0),
            True(b) => (2, -(b as i64)),
        }
    }

    /// Negation without a stage bound: `F_β ↦ T_{β+1}`, `T_β ↦ F_{β+1}`, `0 ↦ 0`.
    pub fn negate(self) -> TruthValue {
        match self {
            False(b) => True(b + 1),
            True(b) => False(b + 1),
            Undefined => Undefined,
        }
    }

    /// Whether the value exists in the model with `kappa` stages.
    pub fn fits(self, kappa: usize) -> bool {
        self.order().is_none_or(|b| (b as usize) < kappa)
    }

    /// Maps values of order `≥ kappa` to the undefined value.
    pub fn saturate(self, kappa: usize) -> TruthValue {
        if self.fits(kappa) {
            self
        } else {
            Undefined
        }
    }

    pub fn is_true(self) -> bool {
        matches!(self, True(_))
    }

    pub fn is_false(self) -> bool {
        matches!(self, False(_))
    }
}

impl Ord for TruthValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank().cmp(&other.rank())
    }
}

impl PartialOrd for TruthValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            False(b) => write!(f, "F{b}"),
            True(b) => write!(f, "T{b}"),
            Undefined => write!(f, "0"),
        }
    }
}

impl FromStr for TruthValue {
    type Err = TruthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TruthError::Parse(s.to_string());
        if s == "0" {
            return Ok(Undefined);
        }
        let (head, digits) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let order: u32 = digits.parse().map_err(|_| bad())?;
        match head {
            "F" => Ok(False(order)),
            "T" => Ok(True(order)),
            _ => Err(bad()),
        }
    }
}

impl serde::Serialize for TruthValue {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `a ≤ b` in the truth order.
pub fn tv_le(a: TruthValue, b: TruthValue) -> bool {
    a <= b
}

/// Conjunction: the minimum.
pub fn tv_and(a: TruthValue, b: TruthValue) -> TruthValue {
    a.min(b)
}

/// Disjunction: the maximum.
pub fn tv_or(a: TruthValue, b: TruthValue) -> TruthValue {
    a.max(b)
}

/// Supremum of a collection; `F_0` when empty.
pub fn tv_sup<I: IntoIterator<Item = TruthValue>>(xs: I) -> TruthValue {
    xs.into_iter().fold(False(0), tv_or)
}

/// The stage preorder on truth values: `a ⊑_α b` iff `a = b`, or both have
/// order `≥ α` and either both have order `> α`, `a = F_α`, or `b = T_α`.
pub fn tv_sqle_alpha(alpha: usize, a: TruthValue, b: TruthValue) -> bool {
    if a == b {
        return true;
    }
    if !a.order_at_least(alpha) || !b.order_at_least(alpha) {
        return false;
    }
    let at = alpha as u32;
    (a.order_above(alpha) && b.order_above(alpha)) || a == False(at) || b == True(at)
}

/// The stage supremum on truth values in a model with `kappa` stages, taken
/// inside the cone of `anchor`. Elements are assumed to lie in that cone.
///
/// Below the anchor's order the cone is a singleton. Otherwise the cone is
/// every value of order `≥ α`: the result is `T_α` if present, `F_α` if the
/// set is empty or consists of `F_α` alone, and the stage default otherwise
/// (`F_{α+1}`, or `0` at the top stage).
pub(crate) fn tv_alpha_lub_unchecked<I>(kappa: usize, alpha: usize, anchor: TruthValue, xs: I) -> TruthValue
where
    I: IntoIterator<Item = TruthValue>,
{
    if !anchor.order_at_least(alpha) {
        return anchor;
    }
    let at = alpha as u32;
    let mut has_true = false;
    let mut only_false = true;
    for x in xs {
        has_true |= x == True(at);
        only_false &= x == False(at);
    }
    if has_true {
        True(at)
    } else if only_false {
        False(at)
    } else {
        stage_default(kappa, alpha)
    }
}

/// The least value of order `> α`: `F_{α+1}`, or `0` when `α` is the top stage.
pub fn stage_default(kappa: usize, alpha: usize) -> TruthValue {
    if alpha + 1 < kappa {
        False(alpha as u32 + 1)
    } else {
        Undefined
    }
}

/// The model of truth values with `kappa` stages.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruthModelV {
    kappa: usize,
}

impl TruthModelV {
    pub fn new(kappa: usize) -> Result<Self, LatticeError> {
        if kappa == 0 {
            return Err(LatticeError::Construction("kappa must be at least 1".into()));
        }
        if kappa > u32::MAX as usize {
            return Err(LatticeError::Construction("kappa is too large".into()));
        }
        Ok(TruthModelV { kappa })
    }

    /// Bounded negation; fails instead of leaving the model.
    pub fn neg(&self, a: TruthValue) -> Result<TruthValue, TruthError> {
        let n = a.negate();
        if n.fits(self.kappa) {
            Ok(n)
        } else {
            Err(TruthError::Truncation {
                order: n.order().unwrap_or(0),
                kappa: self.kappa,
            })
        }
    }

    pub fn contains(&self, a: TruthValue) -> bool {
        a.fits(self.kappa)
    }
}

impl StratifiedLattice for TruthModelV {
    type Elem = TruthValue;

    fn kappa(&self) -> usize {
        self.kappa
    }

    fn carrier_size(&self) -> u128 {
        2 * self.kappa as u128 + 1
    }

    fn elements(&self) -> Vec<TruthValue> {
        let k = self.kappa as u32;
        (0..k)
            .map(False)
            .chain(std::iter::once(Undefined))
            .chain((0..k).rev().map(True))
            .collect()
    }

    fn le(&self, x: &TruthValue, y: &TruthValue) -> bool {
        x <= y
    }

    fn lub(&self, xs: &[&TruthValue]) -> TruthValue {
        tv_sup(xs.iter().map(|x| **x))
    }

    fn sqle_alpha(&self, stage: StageIndex, x: &TruthValue, y: &TruthValue) -> bool {
        tv_sqle_alpha(stage.value(), *x, *y)
    }

    fn alpha_lub(
        &self,
        stage: StageIndex,
        anchor: &TruthValue,
        xs: &[&TruthValue],
    ) -> Result<TruthValue, LatticeError> {
        ensure_in_cone(self, stage, anchor, xs)?;
        Ok(tv_alpha_lub_unchecked(
            self.kappa,
            stage.value(),
            *anchor,
            xs.iter().map(|x| **x),
        ))
    }

    fn render(&self, x: &TruthValue) -> String {
        x.to_string()
    }

    // Cones have a closed form; skip the stage-by-stage scan.
    fn in_cone(&self, stage: StageIndex, anchor: &TruthValue, y: &TruthValue) -> bool {
        if anchor.order_at_least(stage.value()) {
            y.order_at_least(stage.value())
        } else {
            anchor == y
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(k: usize) -> TruthModelV {
        TruthModelV::new(k).unwrap()
    }

    fn st(m: &TruthModelV, a: usize) -> StageIndex {
        m.stage(a).unwrap()
    }

    #[test]
    fn order_chain() {
        assert!(tv_le(False(0), True(0)));
        assert!(tv_le(Undefined, True(5)));
        assert!(tv_le(False(7), Undefined));
        assert!(tv_le(True(3), True(2)));
        assert!(!tv_le(True(0), True(1)));
        let elems = v(3).elements();
        assert!(elems.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(elems.len(), 7);
    }

    #[test]
    fn negation() {
        let m = v(3);
        assert_eq!(m.neg(False(0)), Ok(True(1)));
        assert_eq!(m.neg(Undefined), Ok(Undefined));
        assert_eq!(m.neg(m.neg(False(0)).unwrap()), Ok(False(2)));
        assert_eq!(
            m.neg(True(2)),
            Err(TruthError::Truncation { order: 3, kappa: 3 })
        );
    }

    #[test]
    fn connectives() {
        assert_eq!(tv_and(True(1), False(2)), False(2));
        assert_eq!(tv_or(True(1), False(2)), True(1));
        assert_eq!(tv_sup([False(0)]), False(0));
        assert_eq!(tv_sup([]), False(0));
        assert_eq!(tv_sup([False(1), Undefined, True(3)]), True(3));
    }

    #[test]
    fn stage_preorder_cases() {
        assert!(tv_sqle_alpha(1, False(1), Undefined));
        assert!(!tv_sqle_alpha(0, True(0), False(0)));
        assert!(tv_sqle_alpha(2, False(0), False(0)));
        assert!(tv_sqle_alpha(0, False(0), True(0)));
        assert!(!tv_sqle_alpha(1, False(0), True(0)));
        assert!(tv_sqle_alpha(1, Undefined, True(1)));
        assert!(tv_sqle_alpha(1, False(3), Undefined));
    }

    #[test]
    fn derived_relations_on_v3() {
        let m = v(3);
        assert!(m.eq_alpha(st(&m, 0), &True(1), &False(1)));
        assert!(!m.eq_alpha(st(&m, 1), &True(1), &False(1)));
        assert!(m.lt_alpha(st(&m, 0), &False(0), &True(0)));
        assert!(!m.lt_alpha(st(&m, 1), &False(0), &True(0)));
        assert!(!m.lt_alpha(st(&m, 2), &True(2), &True(2)));
        // F_2 ⊏_1 T_1 through the "y = T_α" branch.
        assert!(m.lt_alpha(st(&m, 1), &False(2), &True(1)));
        assert!(m.sqle(&False(2), &True(1)));
        assert!(m.elements().iter().all(|x| m.sqle(&False(0), x)));
    }

    #[test]
    fn stage_out_of_range() {
        assert_eq!(
            v(3).stage(3),
            Err(LatticeError::StageOutOfRange { stage: 3, kappa: 3 })
        );
    }

    #[test]
    fn alpha_lub_cases() {
        let m = v(4);
        assert_eq!(
            m.alpha_lub(st(&m, 0), &False(1), &[&False(1), &True(1)]),
            Ok(False(1))
        );
        assert_eq!(
            m.alpha_lub(st(&m, 2), &True(2), &[&True(2), &False(3)]),
            Ok(True(2))
        );
        assert_eq!(m.alpha_lub(st(&m, 0), &True(3), &[]), Ok(False(0)));
        // the empty stage supremum is the least value of the cone
        assert_eq!(m.alpha_lub(st(&m, 2), &Undefined, &[]), Ok(False(2)));
        assert_eq!(m.alpha_lub(st(&m, 3), &Undefined, &[&Undefined]), Ok(Undefined));
        assert!(matches!(
            m.alpha_lub(st(&m, 2), &True(2), &[&True(1)]),
            Err(LatticeError::OutsideCone { .. })
        ));
    }

    #[test]
    fn slices() {
        let m = v(4);
        assert_eq!(m.slice(&True(3), st(&m, 1)), False(2));
        assert_eq!(m.slice(&False(1), st(&m, 3)), False(1));
        assert_eq!(m.slice(&True(3), st(&m, 3)), True(3));
        assert_eq!(m.slice(&Undefined, st(&m, 3)), Undefined);
        for a in m.stages() {
            assert_eq!(m.slice(&False(0), a), False(0));
        }
        let v2 = v(2);
        assert_eq!(v2.decompose(&True(1)).entries(), &[False(1), True(1)]);
        assert_eq!(v2.decompose(&False(0)).entries(), &[False(0), False(0)]);
    }

    #[test]
    fn slice_closed_form() {
        for k in 1..6 {
            let m = v(k);
            for a in m.stages() {
                for x in m.elements() {
                    let expected = if x.order().is_some_and(|o| o as usize <= a.value()) {
                        x
                    } else {
                        stage_default(k, a.value())
                    };
                    assert_eq!(m.slice(&x, a), expected, "k={k} a={a} x={x}");
                }
            }
        }
    }

    #[test]
    fn sq_lub_examples() {
        let m = v(2);
        assert_eq!(m.sq_lub(&[&True(1)]), True(1));
        assert_eq!(m.sq_lub(&[&False(1), &True(1)]), True(1));
        let all = m.elements();
        let refs: Vec<&TruthValue> = all.iter().collect();
        assert_eq!(m.sq_lub(&refs), True(0));
        assert_eq!(m.sq_lub(&[]), False(0));
    }

    #[test]
    fn parse_and_render() {
        for s in ["F0", "T3", "0", "F12"] {
            assert_eq!(s.parse::<TruthValue>().unwrap().to_string(), s);
        }
        for s in ["", "F", "X1", "T-1", "01", "Tx"] {
            assert!(s.parse::<TruthValue>().is_err(), "{s}");
        }
    }

    #[test]
    fn alpha_lub_valid_on_small_models() {
        for k in 1..4 {
            let m = v(k);
            let elems = m.elements();
            for a in m.stages() {
                for anchor in &elems {
                    let cone: Vec<&TruthValue> =
                        elems.iter().filter(|y| m.in_cone(a, anchor, y)).collect();
                    assert_eq!(m.alpha_lub_valid(a, anchor, &[]), Ok(true));
                    for x in &cone {
                        assert_eq!(m.alpha_lub_valid(a, anchor, &[x]), Ok(true));
                    }
                    assert_eq!(m.alpha_lub_valid(a, anchor, &cone), Ok(true));
                }
            }
        }
    }
}
