//! Exact integer linear algebra: matrices over arbitrary-precision integers,
//! Smith normal form, lattice solving, and the category of finitely generated
//! abelian groups presented as cokernels of relation matrices.

mod group;
mod matrix;
mod snf;

pub use group::{
    cokernel, direct_sum, homology_at, is_isomorphic, kernel, AbHom, DirectSum, FgAbGroup,
    HomError, InvariantFactors,
};
pub use matrix::{BlockMatrix, IntMatrix, MatrixError};
pub use snf::{kernel_basis, lattice_solve, smith_normal_form, SmithDecomposition};
