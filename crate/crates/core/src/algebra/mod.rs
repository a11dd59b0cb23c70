//! Exact field, polynomial, and matrix arithmetic underlying everything else.

pub mod field;
pub mod matrix;
pub mod poly;

pub use field::{Field, FieldElem, FieldError};
pub use matrix::{all_commute, AlgebraError, MatConst, MatPoly};
pub use poly::{Poly1, Poly2};
