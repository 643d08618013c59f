use crate::lattice::{ensure_in_cone, FiniteLattice, LatticeError, StageIndex, StratifiedLattice};

/// A finite lattice seen as a model in which stage 0 compares by `≤` and
/// every later stage is plain equality. Fixed points in this model are the
/// classical least fixed points of monotone maps.
#[derive(Clone, Debug)]
pub struct ClassicalModel {
    lattice: FiniteLattice,
    kappa: usize,
}

impl ClassicalModel {
    pub fn new(lattice: FiniteLattice, kappa: usize) -> Result<Self, LatticeError> {
        if kappa == 0 {
            return Err(LatticeError::Construction("kappa must be at least 1".into()));
        }
        Ok(ClassicalModel { lattice, kappa })
    }

    /// The one-element model.
    pub fn trivial() -> Self {
        ClassicalModel {
            lattice: FiniteLattice::chain(&["*"]).expect("a point is a lattice"),
            kappa: 1,
        }
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }
}

impl StratifiedLattice for ClassicalModel {
    type Elem = usize;

    fn kappa(&self) -> usize {
        self.kappa
    }

    fn carrier_size(&self) -> u128 {
        self.lattice.len() as u128
    }

    fn elements(&self) -> Vec<usize> {
        (0..self.lattice.len()).collect()
    }

    fn le(&self, x: &usize, y: &usize) -> bool {
        self.lattice.le(*x, *y)
    }

    fn lub(&self, xs: &[&usize]) -> usize {
        self.lattice.join_all(xs.iter().map(|x| **x))
    }

    fn sqle_alpha(&self, stage: StageIndex, x: &usize, y: &usize) -> bool {
        if stage.value() == 0 {
            self.lattice.le(*x, *y)
        } else {
            x == y
        }
    }

    fn alpha_lub(&self, stage: StageIndex, anchor: &usize, xs: &[&usize]) -> Result<usize, LatticeError> {
        ensure_in_cone(self, stage, anchor, xs)?;
        if stage.value() == 0 {
            Ok(self.lub(xs))
        } else {
            Ok(*anchor)
        }
    }

    fn render(&self, x: &usize) -> String {
        self.lattice.name(*x).to_string()
    }
}
