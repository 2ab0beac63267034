use super::matrix::{IntMatrix, MatrixError};
use super::snf::{kernel_basis, lattice_solve, smith_normal_form};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HomError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("homomorphism is not well-defined: column {0} of matrix * relations is not in the target relation lattice")]
    IllDefined(usize),
    #[error("source/target presentations do not match")]
    GroupMismatch,
    #[error("composite map is not zero on the presented groups")]
    CompositeNonzero,
}

impl From<MatrixError> for HomError {
    fn from(e: MatrixError) -> Self {
        HomError::Dimension(e.to_string())
    }
}

/// Canonical form of a finitely generated abelian group: free rank plus the
/// torsion coefficients d1 | d2 | ... with each di >= 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InvariantFactors {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl InvariantFactors {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for InvariantFactors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{}", r)),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{}", d));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Finitely generated abelian group presented as the cokernel of an integer
/// relation matrix: g generators, columns of `relations` are the relators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FgAbGroup {
    generators: usize,
    relations: IntMatrix,
    invariants: InvariantFactors,
}

impl FgAbGroup {
    pub fn new(generators: usize, relations: IntMatrix) -> Result<Self, HomError> {
        if relations.rows() != generators {
            return Err(HomError::Dimension(format!(
                "relation matrix has {} rows for {} generators",
                relations.rows(),
                generators
            )));
        }
        let invariants = invariant_factors_of(generators, &relations);
        Ok(FgAbGroup {
            generators,
            relations,
            invariants,
        })
    }

    pub fn trivial() -> Self {
        FgAbGroup::new(0, IntMatrix::zeros(0, 0)).unwrap()
    }

    pub fn free(rank: usize) -> Self {
        FgAbGroup::new(rank, IntMatrix::zeros(rank, 0)).unwrap()
    }

    pub fn cyclic(order: u64) -> Self {
        let m = IntMatrix::from_rows(&[vec![order as i64]]);
        FgAbGroup::new(1, m).unwrap()
    }

    /// Diagonal presentation Z^rank + Z/d1 + Z/d2 + ...
    pub fn from_parts(free_rank: usize, torsion: &[u64]) -> Self {
        let g = free_rank + torsion.len();
        let mut rel = IntMatrix::zeros(g, torsion.len());
        for (j, &d) in torsion.iter().enumerate() {
            rel.set(free_rank + j, j, BigInt::from(d));
        }
        FgAbGroup::new(g, rel).unwrap()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn invariant_factors(&self) -> &InvariantFactors {
        &self.invariants
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_trivial()
    }

    /// Canonical rendering, e.g. "Z^2 + Z/2 + Z/6" or "0".
    pub fn render(&self) -> String {
        self.invariants.to_string()
    }

    /// Presentational equality: identical generators and relation matrix.
    pub fn same_presentation(&self, other: &FgAbGroup) -> bool {
        self.generators == other.generators && self.relations == other.relations
    }

    /// Membership of a generator-level vector in the relation lattice.
    fn in_relation_lattice(&self, v: &[BigInt]) -> Result<bool, MatrixError> {
        Ok(lattice_solve(&self.relations, v)?.is_some())
    }
}

fn invariant_factors_of(generators: usize, relations: &IntMatrix) -> InvariantFactors {
    let dec = smith_normal_form(relations);
    let diag = dec.diagonal();
    let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
    let torsion: Vec<BigInt> = diag
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    InvariantFactors {
        free_rank: generators - nonzero,
        torsion,
    }
}

/// Groups are isomorphic iff their invariant factors coincide.
pub fn is_isomorphic(a: &FgAbGroup, b: &FgAbGroup) -> bool {
    a.invariant_factors() == b.invariant_factors()
}

/// Homomorphism between presented groups, given on generators by an integer
/// matrix (target generators x source generators). Construction certifies
/// well-definedness: the matrix must carry source relations into the target
/// relation lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbHom {
    source: FgAbGroup,
    target: FgAbGroup,
    matrix: IntMatrix,
}

impl AbHom {
    pub fn new(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Result<Self, HomError> {
        if matrix.rows() != target.generators() || matrix.cols() != source.generators() {
            return Err(HomError::Dimension(format!(
                "hom matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.generators(),
                source.generators()
            )));
        }
        let image_of_relations = matrix.mul(source.relations())?;
        for j in 0..image_of_relations.cols() {
            if !target.in_relation_lattice(&image_of_relations.column(j))? {
                return Err(HomError::IllDefined(j));
            }
        }
        Ok(AbHom {
            source,
            target,
            matrix,
        })
    }

    /// Skips the well-definedness certificate; for maps that are well-defined
    /// by construction (canonical projections, computed lifts).
    pub fn new_unchecked(source: FgAbGroup, target: FgAbGroup, matrix: IntMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), target.generators());
        debug_assert_eq!(matrix.cols(), source.generators());
        AbHom {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(group: &FgAbGroup) -> Self {
        AbHom::new_unchecked(
            group.clone(),
            group.clone(),
            IntMatrix::identity(group.generators()),
        )
    }

    pub fn zero(source: &FgAbGroup, target: &FgAbGroup) -> Self {
        AbHom::new_unchecked(
            source.clone(),
            target.clone(),
            IntMatrix::zeros(target.generators(), source.generators()),
        )
    }

    pub fn source(&self) -> &FgAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FgAbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    /// g . f, requiring f.target and g.source to be the same presentation.
    pub fn compose(g: &AbHom, f: &AbHom) -> Result<AbHom, HomError> {
        if !g.source.same_presentation(&f.target) {
            return Err(HomError::GroupMismatch);
        }
        Ok(AbHom::new_unchecked(
            f.source.clone(),
            g.target.clone(),
            g.matrix.mul(&f.matrix)?,
        ))
    }

    /// True iff this map is zero on the presented groups, i.e. every matrix
    /// column lies in the target relation lattice.
    pub fn is_zero_map(&self) -> Result<bool, MatrixError> {
        for j in 0..self.matrix.cols() {
            if !self.target.in_relation_lattice(&self.matrix.column(j))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as maps of presented groups (matrices agree modulo target
    /// relations), not as matrices.
    pub fn same_map(&self, other: &AbHom) -> Result<bool, HomError> {
        if !self.source.same_presentation(&other.source)
            || !self.target.same_presentation(&other.target)
        {
            return Err(HomError::GroupMismatch);
        }
        let diff = AbHom::new_unchecked(
            self.source.clone(),
            self.target.clone(),
            self.matrix.sub(&other.matrix)?,
        );
        Ok(diff.is_zero_map()?)
    }

    pub fn negate(&self) -> AbHom {
        AbHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.neg())
    }
}

/// Cokernel target/(image h) together with the canonical projection.
pub fn cokernel(h: &AbHom) -> Result<(FgAbGroup, AbHom), HomError> {
    let relations = h.matrix().hstack(h.target().relations())?;
    let group = FgAbGroup::new(h.target().generators(), relations)?;
    let projection = AbHom::new_unchecked(
        h.target().clone(),
        group.clone(),
        IntMatrix::identity(h.target().generators()),
    );
    Ok((group, projection))
}

/// Generating set for the free-cover lattice {x : M x in col-span(B)}.
fn preimage_lattice(m: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix, MatrixError> {
    let stacked = m.hstack(b)?;
    let ker = kernel_basis(&stacked);
    Ok(ker.submatrix(0..m.cols(), 0..ker.cols()))
}

/// Kernel of a map between presented groups, with its inclusion. Computed on
/// free covers: generators are lattice generators of {x : M x in span(B_t)},
/// relations are their coincidences modulo the source relations.
pub fn kernel(h: &AbHom) -> Result<(FgAbGroup, AbHom), HomError> {
    let gens = preimage_lattice(h.matrix(), h.target().relations())?;
    let relations = preimage_lattice(&gens, h.source().relations())?;
    let group = FgAbGroup::new(gens.cols(), relations)?;
    let inclusion = AbHom::new_unchecked(group.clone(), h.source().clone(), gens);
    Ok((group, inclusion))
}

/// Homology ker(d_out)/im(d_in) at the shared middle group. Requires
/// d_out . d_in to be zero on the presented groups.
pub fn homology_at(d_out: &AbHom, d_in: &AbHom) -> Result<FgAbGroup, HomError> {
    if !d_out.source().same_presentation(d_in.target()) {
        return Err(HomError::GroupMismatch);
    }
    let composite = AbHom::compose(d_out, d_in)?;
    if !composite.is_zero_map()? {
        return Err(HomError::CompositeNonzero);
    }
    let (ker_group, inclusion) = kernel(d_out)?;
    // Lift each generator image of d_in through the kernel generators. The
    // solve is exact because the composite is zero, so every column lies in
    // the kernel lattice modulo target relations.
    let gens = inclusion.matrix();
    let solve_matrix = gens.hstack(d_in.target().relations())?;
    let mut lift = IntMatrix::zeros(ker_group.generators(), d_in.source().generators());
    for j in 0..d_in.matrix().cols() {
        let col = d_in.matrix().column(j);
        let w = lattice_solve(&solve_matrix, &col)?
            .expect("zero composite guarantees a lift through the kernel lattice");
        for i in 0..ker_group.generators() {
            lift.set(i, j, w[i].clone());
        }
    }
    let lifted = AbHom::new_unchecked(d_in.source().clone(), ker_group, lift);
    Ok(cokernel(&lifted)?.0)
}

/// Block direct sum with its canonical injections and projections.
pub struct DirectSum {
    pub group: FgAbGroup,
    pub injections: Vec<AbHom>,
    pub projections: Vec<AbHom>,
    offsets: Vec<usize>,
}

impl DirectSum {
    /// Generator offset of the i-th summand inside the sum.
    pub fn offset(&self, i: usize) -> usize {
        self.offsets[i]
    }
}

pub fn direct_sum(groups: &[FgAbGroup]) -> Result<DirectSum, HomError> {
    let total_gens: usize = groups.iter().map(|g| g.generators()).sum();
    let total_rels: usize = groups.iter().map(|g| g.relations().cols()).sum();
    let mut relations = IntMatrix::zeros(total_gens, total_rels);
    let mut offsets = Vec::with_capacity(groups.len());
    let (mut ro, mut co) = (0, 0);
    for g in groups {
        offsets.push(ro);
        for i in 0..g.generators() {
            for j in 0..g.relations().cols() {
                relations.set(ro + i, co + j, g.relations().get(i, j).clone());
            }
        }
        ro += g.generators();
        co += g.relations().cols();
    }
    let sum = FgAbGroup::new(total_gens, relations)?;
    let mut injections = Vec::with_capacity(groups.len());
    let mut projections = Vec::with_capacity(groups.len());
    for (idx, g) in groups.iter().enumerate() {
        let off = offsets[idx];
        let inj = IntMatrix::from_fn(total_gens, g.generators(), |i, j| {
            if i == off + j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        injections.push(AbHom::new_unchecked(g.clone(), sum.clone(), inj));
        let proj = IntMatrix::from_fn(g.generators(), total_gens, |i, j| {
            if j == off + i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        projections.push(AbHom::new_unchecked(sum.clone(), g.clone(), proj));
    }
    Ok(DirectSum {
        group: sum,
        injections,
        projections,
        offsets,
    })
}
