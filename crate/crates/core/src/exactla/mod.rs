//! Exact dense linear algebra over the rationals and prime fields.

mod field;
mod matrix;
mod rat;
mod reduce;

pub use field::{is_prime, Field, FieldConfig, PrimeField, Rationals, DEFAULT_PRIME};
pub use matrix::Matrix;
pub use rat::Rat;
pub use reduce::{
    cohomology, cohomology_dim, column_space_basis, greedy_extend, kernel_basis, left_inverse,
    rank, rref, standard_complement, Cohomology, Echelon,
};
