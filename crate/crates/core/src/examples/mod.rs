//! Example systems and the normal-form change of unknowns.

pub mod catalog;
pub mod cosim;
pub mod gamma;
pub mod transform;

pub use catalog::{catalog, export_fixtures, extras, fixture, ExampleFixture, Expected};
pub use transform::{normal_form_transform, shift_value, TransformError, Transformed};
pub use cosim::{co_simulate, CoSimError, CoSimReport, CoSimSample};
