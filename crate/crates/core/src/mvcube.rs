//! Chain-level shadows of the homotopy-colimit models: the face-poset chain
//! complex of an ordered simplicial complex with stabilizer data, a checker
//! for candidate long exact sequences, and the degree-0 tail solver for the
//! two-vertex pushout square.
//!
//! Connecting maps in positive degrees are user inputs — the sequence
//! checker verifies exactness of supplied data, it does not derive boundary
//! maps.

use crate::bredon::{apply_coefficients, ChainComplex, ComplexError, SimplicialOrbitData};
use crate::exactla::{cokernel, direct_sum, homology_at, AbHom, BlockMatrix, FgAbGroup, HomError};
use crate::fincat::{CoeffSystem, Report};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MvError {
    #[error("invalid sequence: {0}")]
    Invalid(String),
    #[error("composite at position {0} is nonzero")]
    CompositeNonzero(usize),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Face-poset model: an ordered simplicial complex where each face carries
/// a stabilizer object (modeling the intersection of its vertex stabilizers)
/// and each face relation an inclusion-induced morphism, plus a coefficient
/// system over the same category.
#[derive(Debug, Clone)]
pub struct PosetChainModel {
    pub data: SimplicialOrbitData,
    pub coeff: CoeffSystem,
}

/// The chain complex whose degree-p group is the sum of the coefficient
/// values over p-faces, with alternating-sign inclusion-induced
/// differentials.
pub fn poset_chain_complex(model: &PosetChainModel) -> Result<ChainComplex, MvError> {
    let complex = model.data.to_cell_complex()?;
    Ok(apply_coefficients(&complex, &model.coeff)?)
}

/// A candidate exact sequence segment: groups[0] -> groups[1] -> ... with
/// maps[i] : groups[i] -> groups[i+1].
#[derive(Debug, Clone)]
pub struct ExactSequenceInstance {
    pub groups: Vec<FgAbGroup>,
    pub maps: Vec<AbHom>,
}

impl ExactSequenceInstance {
    pub fn validate(&self) -> Result<(), MvError> {
        if self.groups.len() < 2 || self.maps.len() + 1 != self.groups.len() {
            return Err(MvError::Invalid(format!(
                "{} groups with {} maps",
                self.groups.len(),
                self.maps.len()
            )));
        }
        for (i, m) in self.maps.iter().enumerate() {
            if !m.source().same_presentation(&self.groups[i])
                || !m.target().same_presentation(&self.groups[i + 1])
            {
                return Err(MvError::Invalid(format!(
                    "map {i} does not connect groups {i} -> {}",
                    i + 1
                )));
            }
        }
        for i in 0..self.maps.len().saturating_sub(1) {
            let composite = AbHom::compose(&self.maps[i + 1], &self.maps[i])?;
            if !composite.is_zero_map().map_err(HomError::from)? {
                return Err(MvError::CompositeNonzero(i + 1));
            }
        }
        Ok(())
    }
}

/// Per-interior-position exactness: position i is exact iff the homology of
/// the sequence at groups[i] is trivial. Returns a report listing the
/// positions that fail, with the homology that obstructs.
pub fn check_exactness(seq: &ExactSequenceInstance) -> Result<Report, MvError> {
    seq.validate()?;
    let mut violations = Vec::new();
    for i in 1..seq.groups.len() - 1 {
        let h = homology_at(&seq.maps[i], &seq.maps[i - 1])?;
        if !h.is_trivial() {
            violations.push(format!(
                "not exact at position {i} ({}): homology {}",
                seq.groups[i].render(),
                h.render()
            ));
        }
    }
    Ok(Report { violations })
}

/// Completes the degree-0 tail of the pushout square: given the two legs
/// out of the overlap group, returns the cokernel of the combined map
/// (-f0, f1) into the sum of the two vertex groups — the unique group
/// finishing the sequence ... -> B0 + B1 -> K -> 0.
pub fn solve_degree0(f0: &AbHom, f1: &AbHom) -> Result<FgAbGroup, MvError> {
    if !f0.source().same_presentation(f1.source()) {
        return Err(MvError::Invalid(
            "the two legs must share their source group".into(),
        ));
    }
    let source = f0.source().clone();
    let targets = [f0.target().clone(), f1.target().clone()];
    let row_sizes: Vec<usize> = targets.iter().map(|g| g.generators()).collect();
    let mut block = BlockMatrix::new(&row_sizes, &[source.generators()]);
    block.add_block(0, 0, &f0.matrix().neg());
    block.add_block(1, 0, f1.matrix());
    let target = direct_sum(&targets)?.group;
    let combined = AbHom::new_unchecked(source, target, block.finish());
    Ok(cokernel(&combined)?.0)
}
