//! System specifications: jet variables, quadratic forms, polynomial tails
//! and the JSON file format.

pub mod expr;
pub mod form;
pub mod poly;
pub mod spec;
pub mod split;
pub mod var;

pub use expr::parse_polynomial;
pub use form::QuadraticForm;
pub use poly::Polynomial;
pub use spec::{load_spec, save_spec, Equation, Invariant, LinearForm, QuasilinearCoefficients, SpecError, SystemSpec};
pub use split::{split_form, validate_symmetricity, SplitForm, SymmetricityReport};
pub use var::{Deriv, VarRef, JET_WIDTH};
