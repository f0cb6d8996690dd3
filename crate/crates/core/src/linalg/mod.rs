//! Exact integer linear algebra: matrices, normal forms and lattices.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::{
    kernel_lattice, lattice_intersect, lattice_sum, quotient_group, quotient_invariants, LatticeBasis, QuotientGroup,
};
pub use matrix::{big_vec, IntegerMatrix};
pub use normal_form::{abs_det, ext_gcd, hnf, snf, unimodular_inverse, Hermite, Smith};
