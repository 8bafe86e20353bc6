//! Axiom laboratory: group value functionals and executable property checks.

mod functional;
mod properties;
mod smoke;

pub use functional::{
    counterexample_alpha, counterexample_product, counterexample_shift, functional_by_name,
    AdditiveGroupValue, AlphaFunctional, BasisFunctional, GroupValueFunctional,
    ProductFunctional, ShapleyGroupValue, ShiftFunctional,
};
pub use properties::{
    cbc_sides, check_all, check_property, Property, PropertyReport, SuiteSpec, Verdict, Witness,
};
pub use smoke::{characterization_smoke, SmokeReport};
