use crate::lattice::{ensure_in_cone, FiniteLattice, LatticeError, StageIndex, StratifiedLattice};

/// One coordinate of a non-standard product: a carrier with its lattice order
/// `≤` and a second lattice order `⪯` used for the stage relation.
#[derive(Clone, Debug)]
struct Coordinate {
    base: FiniteLattice,
    stage: FiniteLattice,
}

/// The product `∏_α L_α` ordered pointwise by `≤`, where `x ⊑_α y` iff
/// `x` and `y` agree below `α` and `x(α) ⪯ y(α)`.
#[derive(Clone, Debug)]
pub struct NonStandardProduct {
    coords: Vec<Coordinate>,
}

impl NonStandardProduct {
    /// One `(≤, ⪯)` pair per stage over the same element names. Fails unless
    /// `≤` extends `⪯` in every coordinate, reporting the first pair that breaks it.
    pub fn new(pairs: Vec<(FiniteLattice, FiniteLattice)>) -> Result<Self, LatticeError> {
        for (a, (base, stage)) in pairs.iter().enumerate() {
            if let Err((x, y)) = base.extends(stage) {
                return Err(LatticeError::Construction(format!(
                    "coordinate {a}: {} ⪯ {} but not {} ≤ {}",
                    stage.name(x),
                    stage.name(y),
                    base.name(x),
                    base.name(y)
                )));
            }
        }
        Self::new_unvalidated(pairs)
    }

    /// Same as [`NonStandardProduct::new`] without the extension check; the
    /// result may violate the stage-supremum axiom.
    pub fn new_unvalidated(pairs: Vec<(FiniteLattice, FiniteLattice)>) -> Result<Self, LatticeError> {
        if pairs.is_empty() {
            return Err(LatticeError::Construction("kappa must be at least 1".into()));
        }
        for (a, (base, stage)) in pairs.iter().enumerate() {
            if base.names() != stage.names() {
                return Err(LatticeError::Construction(format!(
                    "coordinate {a}: both orders must share one carrier"
                )));
            }
        }
        Ok(NonStandardProduct {
            coords: pairs
                .into_iter()
                .map(|(base, stage)| Coordinate { base, stage })
                .collect(),
        })
    }

    /// Every coordinate uses the same lattice for both orders.
    pub fn uniform(lattice: FiniteLattice, kappa: usize) -> Result<Self, LatticeError> {
        Self::new(vec![(lattice.clone(), lattice); kappa])
    }

    /// Every coordinate is the chain `0 < a < b < 1` for `≤` and the diamond
    /// with `a`, `b` incomparable for `⪯`.
    pub fn chain4_diamond4(kappa: usize) -> Result<Self, LatticeError> {
        let names = ["0", "a", "b", "1"];
        let chain = FiniteLattice::chain(&names)?;
        let diamond = FiniteLattice::from_covers(&names, &[(0, 1), (0, 2), (1, 3), (2, 3)])?;
        Self::new(vec![(chain, diamond); kappa])
    }
}

impl StratifiedLattice for NonStandardProduct {
    type Elem = Vec<usize>;

    fn kappa(&self) -> usize {
        self.coords.len()
    }

    fn carrier_size(&self) -> u128 {
        self.coords
            .iter()
            .try_fold(1u128, |acc, c| acc.checked_mul(c.base.len() as u128))
            .unwrap_or(u128::MAX)
    }

    fn elements(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        for c in &self.coords {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<usize>| {
                    (0..c.base.len()).map(move |e| {
                        let mut next = prefix.clone();
                        next.push(e);
                        next
                    })
                })
                .collect();
        }
        out
    }

    fn le(&self, x: &Vec<usize>, y: &Vec<usize>) -> bool {
        self.coords
            .iter()
            .enumerate()
            .all(|(a, c)| c.base.le(x[a], y[a]))
    }

    fn lub(&self, xs: &[&Vec<usize>]) -> Vec<usize> {
        self.coords
            .iter()
            .enumerate()
            .map(|(a, c)| c.base.join_all(xs.iter().map(|x| x[a])))
            .collect()
    }

    fn sqle_alpha(&self, stage: StageIndex, x: &Vec<usize>, y: &Vec<usize>) -> bool {
        let a = stage.value();
        x[..a] == y[..a] && self.coords[a].stage.le(x[a], y[a])
    }

    fn alpha_lub(
        &self,
        stage: StageIndex,
        anchor: &Vec<usize>,
        xs: &[&Vec<usize>],
    ) -> Result<Vec<usize>, LatticeError> {
        ensure_in_cone(self, stage, anchor, xs)?;
        let a = stage.value();
        let mut out = anchor[..a].to_vec();
        out.push(self.coords[a].stage.join_all(xs.iter().map(|x| x[a])));
        out.extend(self.coords[a + 1..].iter().map(|c| c.base.bottom()));
        Ok(out)
    }

    fn render(&self, x: &Vec<usize>) -> String {
        let parts: Vec<&str> = x
            .iter()
            .zip(&self.coords)
            .map(|(e, c)| c.base.name(*e))
            .collect();
        format!("({})", parts.join(","))
    }

    fn in_cone(&self, stage: StageIndex, anchor: &Vec<usize>, y: &Vec<usize>) -> bool {
        anchor[..stage.value()] == y[..stage.value()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_diamond_shape() {
        let m = NonStandardProduct::chain4_diamond4(2).unwrap();
        assert_eq!(m.carrier_size(), 16);
        let x = vec![1, 0];
        let y = vec![2, 0];
        assert!(m.le(&x, &y));
        assert!(!m.sqle(&x, &y));
        assert_eq!(m.render(&x), "(a,0)");
    }

    #[test]
    fn extension_is_required() {
        let names = ["0", "a", "b", "1"];
        let chain = FiniteLattice::chain(&names).unwrap();
        let diamond =
            FiniteLattice::from_covers(&names, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let err = NonStandardProduct::new(vec![(diamond.clone(), chain.clone())]).unwrap_err();
        assert!(err.to_string().contains("a ⪯ b"), "{err}");
        assert!(NonStandardProduct::new_unvalidated(vec![(diamond, chain)]).is_ok());
    }

    #[test]
    fn stage_lub_is_stage_join() {
        let m = NonStandardProduct::chain4_diamond4(2).unwrap();
        let s0 = StageIndex::ZERO;
        assert_eq!(m.alpha_lub(s0, &vec![0, 0], &[&vec![1, 2], &vec![2, 3]]), Ok(vec![3, 0]));
        let s1 = m.stage(1).unwrap();
        assert_eq!(m.alpha_lub(s1, &vec![2, 0], &[&vec![2, 1]]), Ok(vec![2, 1]));
        assert_eq!(m.alpha_lub(s1, &vec![2, 3], &[]), Ok(vec![2, 0]));
    }
}
