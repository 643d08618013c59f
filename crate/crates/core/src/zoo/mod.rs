//! Concrete models: interpretation spaces, products, non-standard products,
//! classical lattices and the named catalogue used by the command line.

mod builtin;
mod classical;
mod interpretation;
mod nonstandard;
mod product;

pub use builtin::{builtin_model, BuiltinModel, FactorElem, FactorModel, CATALOGUE};
pub use classical::ClassicalModel;
pub use interpretation::{Interpretation, InterpretationModel};
pub use nonstandard::NonStandardProduct;
pub use product::ProductModel;
