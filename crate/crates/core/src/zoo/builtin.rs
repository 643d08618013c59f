use std::fmt;

use super::{Interpretation, InterpretationModel, NonStandardProduct, ProductModel};
use crate::lattice::{LatticeError, StageIndex, StratifiedLattice};
use crate::truth::{TruthModelV, TruthValue};

/// The model-spec grammar accepted by [`builtin_model`].
pub const CATALOGUE: &str = "V:<k> | VZ:<k>:<natoms> | NSP:chain4-diamond4:<k> | PROD:<spec>,<spec>,... (factors are V, VZ or NSP specs)";

/// A single non-product catalogue model.
#[derive(Clone, Debug)]
pub enum FactorModel {
    V(TruthModelV),
    Vz(InterpretationModel),
    Nsp(NonStandardProduct),
}

/// Element of a [`FactorModel`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FactorElem {
    Tv(TruthValue),
    Interp(Interpretation),
    Tuple(Vec<usize>),
}

/// A parsed catalogue model. Each variant is a concrete model type so callers
/// can dispatch to generic code with a `match`.
#[derive(Clone, Debug)]
pub enum BuiltinModel {
    V(TruthModelV),
    Vz(InterpretationModel),
    Nsp(NonStandardProduct),
    Prod(ProductModel<FactorModel>),
}

impl fmt::Display for BuiltinModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinModel::V(m) => write!(f, "V with kappa = {}", m.kappa()),
            BuiltinModel::Vz(m) => write!(
                f,
                "interpretations over {} atoms with kappa = {}",
                m.atoms().len(),
                m.kappa()
            ),
            BuiltinModel::Nsp(m) => write!(f, "non-standard product with kappa = {}", m.kappa()),
            BuiltinModel::Prod(m) => write!(
                f,
                "product of {} factors with kappa = {}",
                m.factors().len(),
                m.kappa()
            ),
        }
    }
}

/// Evaluates `$body` with `$m` bound to the concrete model inside a
/// [`BuiltinModel`] reference.
#[macro_export]
macro_rules! with_builtin {
    ($model:expr, |$m:ident| $body:expr) => {
        match $model {
            $crate::zoo::BuiltinModel::V($m) => $body,
            $crate::zoo::BuiltinModel::Vz($m) => $body,
            $crate::zoo::BuiltinModel::Nsp($m) => $body,
            $crate::zoo::BuiltinModel::Prod($m) => $body,
        }
    };
}

fn bad(spec: &str, why: &str) -> LatticeError {
    LatticeError::Construction(format!("{why} in model spec {spec:?}; expected {CATALOGUE}"))
}

fn number(spec: &str, s: &str) -> Result<usize, LatticeError> {
    s.parse().map_err(|_| bad(spec, &format!("{s:?} is not a number")))
}

fn positive(spec: &str, s: &str) -> Result<usize, LatticeError> {
    match number(spec, s)? {
        0 => Err(bad(spec, "kappa must be at least 1")),
        k => Ok(k),
    }
}

fn factor(spec: &str) -> Result<FactorModel, LatticeError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["V", k] => Ok(FactorModel::V(TruthModelV::new(positive(spec, k)?)?)),
        ["VZ", k, n] => {
            let n = number(spec, n)?;
            if n == 0 {
                return Err(bad(spec, "the universe must not be empty"));
            }
            Ok(FactorModel::Vz(InterpretationModel::with_size(n, positive(spec, k)?)?))
        }
        ["NSP", "chain4-diamond4", k] => {
            Ok(FactorModel::Nsp(NonStandardProduct::chain4_diamond4(positive(spec, k)?)?))
        }
        _ => Err(bad(spec, "unknown model")),
    }
}

/// Parses a catalogue spec such as `V:3`, `VZ:2:2`, `NSP:chain4-diamond4:2`
/// or `PROD:V:2,V:2`.
pub fn builtin_model(spec: &str) -> Result<BuiltinModel, LatticeError> {
    let spec = spec.trim();
    if let Some(rest) = spec.strip_prefix("PROD:") {
        let factors = rest
            .split(',')
            .map(|f| factor(f.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(BuiltinModel::Prod(ProductModel::new(factors)?));
    }
    Ok(match factor(spec)? {
        FactorModel::V(m) => BuiltinModel::V(m),
        FactorModel::Vz(m) => BuiltinModel::Vz(m),
        FactorModel::Nsp(m) => BuiltinModel::Nsp(m),
    })
}

macro_rules! pair {
    ($self:expr, $x:expr, $y:expr, |$m:ident, $a:ident, $b:ident| $body:expr) => {
        match ($self, $x, $y) {
            (FactorModel::V($m), FactorElem::Tv($a), FactorElem::Tv($b)) => $body,
            (FactorModel::Vz($m), FactorElem::Interp($a), FactorElem::Interp($b)) => $body,
            (FactorModel::Nsp($m), FactorElem::Tuple($a), FactorElem::Tuple($b)) => $body,
            _ => panic!("element does not belong to this model"),
        }
    };
}

impl FactorModel {
    fn unwrap_tv<'a>(xs: &[&'a FactorElem]) -> Vec<&'a TruthValue> {
        xs.iter()
            .map(|x| match x {
                FactorElem::Tv(v) => v,
                _ => panic!("element does not belong to this model"),
            })
            .collect()
    }

    fn unwrap_interp<'a>(xs: &[&'a FactorElem]) -> Vec<&'a Interpretation> {
        xs.iter()
            .map(|x| match x {
                FactorElem::Interp(v) => v,
                _ => panic!("element does not belong to this model"),
            })
            .collect()
    }

    fn unwrap_tuple<'a>(xs: &[&'a FactorElem]) -> Vec<&'a Vec<usize>> {
        xs.iter()
            .map(|x| match x {
                FactorElem::Tuple(v) => v,
                _ => panic!("element does not belong to this model"),
            })
            .collect()
    }
}

impl StratifiedLattice for FactorModel {
    type Elem = FactorElem;

    fn kappa(&self) -> usize {
        match self {
            FactorModel::V(m) => m.kappa(),
            FactorModel::Vz(m) => m.kappa(),
            FactorModel::Nsp(m) => m.kappa(),
        }
    }

    fn carrier_size(&self) -> u128 {
        match self {
            FactorModel::V(m) => m.carrier_size(),
            FactorModel::Vz(m) => m.carrier_size(),
            FactorModel::Nsp(m) => m.carrier_size(),
        }
    }

    fn elements(&self) -> Vec<FactorElem> {
        match self {
            FactorModel::V(m) => m.elements().into_iter().map(FactorElem::Tv).collect(),
            FactorModel::Vz(m) => m.elements().into_iter().map(FactorElem::Interp).collect(),
            FactorModel::Nsp(m) => m.elements().into_iter().map(FactorElem::Tuple).collect(),
        }
    }

    fn le(&self, x: &FactorElem, y: &FactorElem) -> bool {
        pair!(self, x, y, |m, a, b| m.le(a, b))
    }

    fn lub(&self, xs: &[&FactorElem]) -> FactorElem {
        match self {
            FactorModel::V(m) => FactorElem::Tv(m.lub(&Self::unwrap_tv(xs))),
            FactorModel::Vz(m) => FactorElem::Interp(m.lub(&Self::unwrap_interp(xs))),
            FactorModel::Nsp(m) => FactorElem::Tuple(m.lub(&Self::unwrap_tuple(xs))),
        }
    }

    fn sqle_alpha(&self, stage: StageIndex, x: &FactorElem, y: &FactorElem) -> bool {
        pair!(self, x, y, |m, a, b| m.sqle_alpha(stage, a, b))
    }

    fn alpha_lub(
        &self,
        stage: StageIndex,
        anchor: &FactorElem,
        xs: &[&FactorElem],
    ) -> Result<FactorElem, LatticeError> {
        match (self, anchor) {
            (FactorModel::V(m), FactorElem::Tv(a)) => {
                m.alpha_lub(stage, a, &Self::unwrap_tv(xs)).map(FactorElem::Tv)
            }
            (FactorModel::Vz(m), FactorElem::Interp(a)) => {
                m.alpha_lub(stage, a, &Self::unwrap_interp(xs)).map(FactorElem::Interp)
            }
            (FactorModel::Nsp(m), FactorElem::Tuple(a)) => {
                m.alpha_lub(stage, a, &Self::unwrap_tuple(xs)).map(FactorElem::Tuple)
            }
            _ => panic!("element does not belong to this model"),
        }
    }

    fn render(&self, x: &FactorElem) -> String {
        match (self, x) {
            (FactorModel::V(m), FactorElem::Tv(a)) => m.render(a),
            (FactorModel::Vz(m), FactorElem::Interp(a)) => m.render(a),
            (FactorModel::Nsp(m), FactorElem::Tuple(a)) => m.render(a),
            _ => format!("{x:?}"),
        }
    }

    fn in_cone(&self, stage: StageIndex, anchor: &FactorElem, y: &FactorElem) -> bool {
        pair!(self, anchor, y, |m, a, b| m.in_cone(stage, a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_lookups() {
        assert!(matches!(builtin_model("V:3"), Ok(BuiltinModel::V(m)) if m.kappa() == 3));
        match builtin_model("VZ:2:2").unwrap() {
            BuiltinModel::Vz(m) => assert_eq!(m.carrier_size(), 25),
            other => panic!("{other}"),
        }
        match builtin_model("NSP:chain4-diamond4:2").unwrap() {
            BuiltinModel::Nsp(m) => assert_eq!(m.carrier_size(), 16),
            other => panic!("{other}"),
        }
        match builtin_model("PROD:V:2,VZ:2:1").unwrap() {
            BuiltinModel::Prod(m) => assert_eq!(m.carrier_size(), 25),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn catalogue_errors() {
        for spec in ["V:0", "V", "W:2", "VZ:2:0", "PROD:V:2,V:3", "PROD:PROD:V:1", "V:x"] {
            let err = builtin_model(spec).unwrap_err();
            assert!(matches!(err, LatticeError::Construction(_)), "{spec}: {err}");
        }
        assert!(builtin_model("W:2").unwrap_err().to_string().contains("VZ:<k>:<natoms>"));
    }

    #[test]
    fn factor_elements_round_trip_through_product() {
        let BuiltinModel::Prod(m) = builtin_model("PROD:V:1,NSP:chain4-diamond4:1").unwrap() else {
            panic!()
        };
        let elems = m.elements();
        assert_eq!(elems.len(), 12);
        let top = m.lub(&elems.iter().collect::<Vec<_>>());
        assert_eq!(m.render(&top), "<T0, (1)>");
    }
}
