//! Exact-arithmetic engine for equivariant homological computations over
//! finite index categories: Smith normal form and finitely generated abelian
//! groups, coefficient functors and colimits, Bredon homology of orbit cell
//! complexes, E1/E2 pages of the skeletal spectral sequence, and the cokernel
//! recipes that compute degree-zero K-groups from fundamental-domain data.

pub mod ahss;
pub mod bredon;
pub mod exactla;
pub mod fincat;
pub mod mvcube;
pub mod recipe;

pub use exactla::{AbHom, FgAbGroup, IntMatrix, InvariantFactors, SmithDecomposition};
pub use fincat::{CatFunctor, CoeffSystem, FinCategory};
