use std::fmt;

use crate::lattice::{ensure_in_cone, LatticeError, StageIndex, StratifiedLattice};
use crate::truth::{self, TruthModelV, TruthValue};

/// A total assignment of truth values to the atoms of a universe, indexed by
/// atom position. The universe itself lives in the owning model or program.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    values: Vec<TruthValue>,
}

impl Interpretation {
    pub fn new(values: Vec<TruthValue>) -> Self {
        Interpretation { values }
    }

    /// Every atom mapped to `v`.
    pub fn constant(len: usize, v: TruthValue) -> Self {
        Interpretation {
            values: vec![v; len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, atom: usize) -> TruthValue {
        self.values[atom]
    }

    pub fn set(&mut self, atom: usize, v: TruthValue) {
        self.values[atom] = v;
    }

    pub fn values(&self) -> &[TruthValue] {
        &self.values
    }

    pub fn into_values(self) -> Vec<TruthValue> {
        self.values
    }

    /// `I ∥ v`: the atoms mapped to `v`.
    pub fn level_set(&self, v: TruthValue) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| self.values[i] == v).collect()
    }

    /// Renders as `{p: F2, q: T1}` with the given atom names.
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

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The standard model: interpretations over a finite universe with the
/// pointwise order and the truth-value stage relations applied atom by atom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpretationModel {
    atoms: Vec<String>,
    v: TruthModelV,
}

impl InterpretationModel {
    pub fn new(atoms: Vec<String>, kappa: usize) -> Result<Self, LatticeError> {
        if atoms.is_empty() {
            return Err(LatticeError::Construction("the universe must not be empty".into()));
        }
        Ok(InterpretationModel {
            atoms,
            v: TruthModelV::new(kappa)?,
        })
    }

    /// Universe `z0, z1, …` of the given size.
    pub fn with_size(natoms: usize, kappa: usize) -> Result<Self, LatticeError> {
        Self::new((0..natoms).map(|i| format!("z{i}")).collect(), kappa)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn truth_model(&self) -> &TruthModelV {
        &self.v
    }

    pub fn contains(&self, i: &Interpretation) -> bool {
        i.len() == self.atoms.len() && i.values().iter().all(|v| self.v.contains(*v))
    }

    /// The `index`-th interpretation in the order of [`StratifiedLattice::elements`].
    pub fn from_index(&self, mut index: u128) -> Interpretation {
        let tvs = self.v.elements();
        let base = tvs.len() as u128;
        let mut values = vec![TruthValue::Undefined; self.atoms.len()];
        for slot in values.iter_mut().rev() {
            *slot = tvs[(index % base) as usize];
            index /= base;
        }
        Interpretation::new(values)
    }
}

impl StratifiedLattice for InterpretationModel {
    type Elem = Interpretation;

    fn kappa(&self) -> usize {
        self.v.kappa()
    }

    fn carrier_size(&self) -> u128 {
        let base = self.v.carrier_size();
        (0..self.atoms.len()).try_fold(1u128, |acc, _| acc.checked_mul(base)).unwrap_or(u128::MAX)
    }

    fn elements(&self) -> Vec<Interpretation> {
        let n = self.carrier_size();
        (0..n).map(|i| self.from_index(i)).collect()
    }

    fn le(&self, x: &Interpretation, y: &Interpretation) -> bool {
        x.values.iter().zip(&y.values).all(|(a, b)| a <= b)
    }

    fn lub(&self, xs: &[&Interpretation]) -> Interpretation {
        let values = (0..self.atoms.len())
            .map(|z| truth::tv_sup(xs.iter().map(|x| x.values[z])))
            .collect();
        Interpretation::new(values)
    }

    fn sqle_alpha(&self, stage: StageIndex, x: &Interpretation, y: &Interpretation) -> bool {
        x.values
            .iter()
            .zip(&y.values)
            .all(|(a, b)| truth::tv_sqle_alpha(stage.value(), *a, *b))
    }

    fn alpha_lub(
        &self,
        stage: StageIndex,
        anchor: &Interpretation,
        xs: &[&Interpretation],
    ) -> Result<Interpretation, LatticeError> {
        ensure_in_cone(self, stage, anchor, xs)?;
        let values = (0..self.atoms.len())
            .map(|z| {
                truth::tv_alpha_lub_unchecked(
                    self.kappa(),
                    stage.value(),
                    anchor.values[z],
                    xs.iter().map(|x| x.values[z]),
                )
            })
            .collect();
        Ok(Interpretation::new(values))
    }

    fn render(&self, x: &Interpretation) -> String {
        x.render_with(&self.atoms)
    }

    fn in_cone(&self, stage: StageIndex, anchor: &Interpretation, y: &Interpretation) -> bool {
        anchor
            .values
            .iter()
            .zip(&y.values)
            .all(|(a, b)| self.v.in_cone(stage, a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{False, True, Undefined};

    fn interp(vs: &[TruthValue]) -> Interpretation {
        Interpretation::new(vs.to_vec())
    }

    #[test]
    fn singleton_universe_has_v_carrier() {
        let m = InterpretationModel::with_size(1, 2).unwrap();
        let elems: Vec<TruthValue> = m.elements().into_iter().map(|i| i.get(0)).collect();
        assert_eq!(elems, vec![False(0), False(1), Undefined, True(1), True(0)]);
    }

    #[test]
    fn empty_universe_rejected() {
        assert!(InterpretationModel::new(vec![], 2).is_err());
    }

    #[test]
    fn alpha_lub_formula() {
        let m = InterpretationModel::with_size(2, 2).unwrap();
        let i = interp(&[True(0), False(0)]);
        let j = interp(&[False(0), False(0)]);
        let got = m.alpha_lub(StageIndex::ZERO, &i, &[&i, &j]).unwrap();
        assert_eq!(got, interp(&[True(0), False(0)]));
        let s1 = m.stage(1).unwrap();
        let a = interp(&[False(0), Undefined]);
        assert_eq!(m.alpha_lub(s1, &a, &[]).unwrap(), interp(&[False(0), False(1)]));
    }

    #[test]
    fn index_round_trip() {
        let m = InterpretationModel::with_size(3, 2).unwrap();
        let elems = m.elements();
        assert_eq!(elems.len(), 125);
        assert_eq!(elems[0], m.bottom());
        assert_eq!(elems[124], Interpretation::constant(3, True(0)));
    }

    #[test]
    fn render() {
        let m = InterpretationModel::new(vec!["p".into(), "q".into()], 3).unwrap();
        assert_eq!(m.render(&interp(&[False(2), Undefined])), "{p: F2, q: 0}");
    }
}
