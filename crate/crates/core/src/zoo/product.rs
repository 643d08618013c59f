use crate::lattice::{ensure_in_cone, LatticeError, StageIndex, StratifiedLattice};

/// The coordinatewise product of models sharing one stage count.
#[derive(Clone, Debug)]
pub struct ProductModel<M> {
    factors: Vec<M>,
    kappa: usize,
}

impl<M: StratifiedLattice> ProductModel<M> {
    pub fn new(factors: Vec<M>) -> Result<Self, LatticeError> {
        let kappa = match factors.first() {
            Some(f) => f.kappa(),
            None => return Err(LatticeError::Construction("a product needs at least one factor".into())),
        };
        if let Some(bad) = factors.iter().position(|f| f.kappa() != kappa) {
            return Err(LatticeError::Construction(format!(
                "factor {bad} has kappa = {}, expected {kappa}",
                factors[bad].kappa()
            )));
        }
        Ok(ProductModel { factors, kappa })
    }

    pub fn factors(&self) -> &[M] {
        &self.factors
    }

    fn column<'a>(xs: &[&'a Vec<M::Elem>], i: usize) -> Vec<&'a M::Elem> {
        xs.iter().map(|x| &x[i]).collect()
    }
}

impl<M: StratifiedLattice> StratifiedLattice for ProductModel<M> {
    type Elem = Vec<M::Elem>;

    fn kappa(&self) -> usize {
        self.kappa
    }

    fn carrier_size(&self) -> u128 {
        self.factors
            .iter()
            .try_fold(1u128, |acc, f| acc.checked_mul(f.carrier_size()))
            .unwrap_or(u128::MAX)
    }

    fn elements(&self) -> Vec<Self::Elem> {
        let mut out: Vec<Self::Elem> = vec![Vec::new()];
        for f in &self.factors {
            let fe = f.elements();
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    fe.iter().map(move |e| {
                        let mut next = prefix.clone();
                        next.push(e.clone());
                        next
                    })
                })
                .collect();
        }
        out
    }

    fn le(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.factors
            .iter()
            .enumerate()
            .all(|(i, f)| f.le(&x[i], &y[i]))
    }

    fn lub(&self, xs: &[&Self::Elem]) -> Self::Elem {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| f.lub(&Self::column(xs, i)))
            .collect()
    }

    fn sqle_alpha(&self, stage: StageIndex, x: &Self::Elem, y: &Self::Elem) -> bool {
        self.factors
            .iter()
            .enumerate()
            .all(|(i, f)| f.sqle_alpha(stage, &x[i], &y[i]))
    }

    fn alpha_lub(
        &self,
        stage: StageIndex,
        anchor: &Self::Elem,
        xs: &[&Self::Elem],
    ) -> Result<Self::Elem, LatticeError> {
        ensure_in_cone(self, stage, anchor, xs)?;
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| f.alpha_lub(stage, &anchor[i], &Self::column(xs, i)))
            .collect()
    }

    fn render(&self, x: &Self::Elem) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(x)
            .map(|(f, e)| f.render(e))
            .collect();
        format!("<{}>", parts.join(", "))
    }

    fn in_cone(&self, stage: StageIndex, anchor: &Self::Elem, y: &Self::Elem) -> bool {
        self.factors
            .iter()
            .enumerate()
            .all(|(i, f)| f.in_cone(stage, &anchor[i], &y[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::truth::{TruthModelV, TruthValue};

    #[test]
    fn mismatched_kappa_rejected() {
        let err = ProductModel::new(vec![TruthModelV::new(2).unwrap(), TruthModelV::new(3).unwrap()]);
        assert!(matches!(err, Err(LatticeError::Construction(_))));
        assert!(ProductModel::<TruthModelV>::new(vec![]).is_err());
    }

    #[test]
    fn single_factor_matches_factor() {
        let v = TruthModelV::new(3).unwrap();
        let p = ProductModel::new(vec![v]).unwrap();
        let ve = v.elements();
        let pe = p.elements();
        assert_eq!(pe.len(), ve.len());
        for (a, pa) in ve.iter().zip(&pe) {
            assert_eq!(pa, &vec![*a]);
            for (b, pb) in ve.iter().zip(&pe) {
                assert_eq!(v.le(a, b), p.le(pa, pb));
                for s in v.stages() {
                    assert_eq!(v.sqle_alpha(s, a, b), p.sqle_alpha(s, pa, pb));
                    if v.in_cone(s, a, b) {
                        let lv: TruthValue = v.alpha_lub(s, a, &[b]).unwrap();
                        assert_eq!(p.alpha_lub(s, pa, &[pb]).unwrap(), vec![lv]);
                    }
                }
            }
        }
    }
}
