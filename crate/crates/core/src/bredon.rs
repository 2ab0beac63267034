//! Equivariant cell structures over a finite index category, the chain
//! complexes of presented abelian groups obtained by applying a coefficient
//! system, their homology, and the explicit dimension-1 differential.
//!
//! Boundary data is stored in the covariant-coefficient convention: each
//! incidence carries a formal Z-linear combination of category morphisms from
//! the stabilizer of the higher cell to the stabilizer of the face. Signs in
//! dimension >= 2 are the user's responsibility; the engine only enforces
//! d . d = 0. For simplicial input the alternating-sign helper below fixes a
//! convention.

use crate::exactla::{direct_sum, homology_at, AbHom, BlockMatrix, FgAbGroup, HomError};
use crate::fincat::{CoeffSystem, FinCategory};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("invalid cell complex: {0}")]
    Invalid(String),
    #[error("coefficient system does not match the complex: {0}")]
    CoefficientMismatch(String),
    #[error("d . d is nonzero: {0}")]
    BoundarySquare(String),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Finite formal Z-linear combination of morphism ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalSum(pub Vec<(BigInt, usize)>);

impl FormalSum {
    pub fn single(coeff: i64, morphism: usize) -> Self {
        FormalSum(vec![(BigInt::from(coeff), morphism)])
    }

    pub fn terms(&self) -> &[(BigInt, usize)] {
        &self.0
    }
}

#[derive(Debug, Clone)]
pub struct OrbitCell {
    pub label: String,
    pub stabilizer: usize,
}

/// An equivariant cell structure: orbit cells per dimension, each with a
/// stabilizer object, and boundary incidences as formal sums of morphisms.
/// `boundaries[n-1]` maps (cell index in dim n, cell index in dim n-1).
#[derive(Debug, Clone)]
pub struct CellOrbitComplex {
    category: Arc<FinCategory>,
    cells: Vec<Vec<OrbitCell>>,
    boundaries: Vec<BTreeMap<(usize, usize), FormalSum>>,
}

impl CellOrbitComplex {
    pub fn new(
        category: Arc<FinCategory>,
        cells: Vec<Vec<OrbitCell>>,
        boundaries: Vec<BTreeMap<(usize, usize), FormalSum>>,
    ) -> Result<Self, ComplexError> {
        if !cells.is_empty() && boundaries.len() + 1 != cells.len() {
            return Err(ComplexError::Invalid(format!(
                "{} cell dimensions but {} boundary layers",
                cells.len(),
                boundaries.len()
            )));
        }
        let complex = CellOrbitComplex {
            category,
            cells,
            boundaries,
        };
        complex.check_references()?;
        complex.check_boundary_square()?;
        Ok(complex)
    }

    fn check_references(&self) -> Result<(), ComplexError> {
        for (d, layer) in self.cells.iter().enumerate() {
            for cell in layer {
                if cell.stabilizer >= self.category.objects().len() {
                    return Err(ComplexError::Invalid(format!(
                        "cell {} in dimension {d} references unknown object",
                        cell.label
                    )));
                }
            }
        }
        for (n_minus_1, layer) in self.boundaries.iter().enumerate() {
            let n = n_minus_1 + 1;
            for (&(i, j), sum) in layer {
                let hi = self.cells.get(n).and_then(|c| c.get(i)).ok_or_else(|| {
                    ComplexError::Invalid(format!("no cell {i} in dimension {n}"))
                })?;
                let lo = self
                    .cells
                    .get(n - 1)
                    .and_then(|c| c.get(j))
                    .ok_or_else(|| {
                        ComplexError::Invalid(format!("no cell {j} in dimension {}", n - 1))
                    })?;
                for (_, m) in sum.terms() {
                    let mor =
                        self.category.morphisms().get(*m).ok_or_else(|| {
                            ComplexError::Invalid(format!("unknown morphism id {m}"))
                        })?;
                    if mor.source != hi.stabilizer || mor.target != lo.stabilizer {
                        return Err(ComplexError::Invalid(format!(
                            "morphism {} has endpoints {} -> {}, expected {} -> {} (cells {}, {})",
                            mor.name,
                            self.category.objects()[mor.source],
                            self.category.objects()[mor.target],
                            self.category.objects()[hi.stabilizer],
                            self.category.objects()[lo.stabilizer],
                            hi.label,
                            lo.label
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// d . d = 0 in the universal free-module presentation: composite formal
    /// sums of morphisms must cancel term by term.
    fn check_boundary_square(&self) -> Result<(), ComplexError> {
        for n in 2..self.cells.len() {
            for i in 0..self.cells[n].len() {
                for k in 0..self.cells[n - 2].len() {
                    let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
                    for j in 0..self.cells[n - 1].len() {
                        let (Some(a), Some(b)) = (
                            self.boundaries[n - 1].get(&(i, j)),
                            self.boundaries[n - 2].get(&(j, k)),
                        ) else {
                            continue;
                        };
                        for (c1, m1) in a.terms() {
                            for (c2, m2) in b.terms() {
                                let composite =
                                    self.category.compose(*m2, *m1).ok_or_else(|| {
                                        ComplexError::Invalid(format!(
                                            "missing composite {} . {}",
                                            self.category.morphisms()[*m2].name,
                                            self.category.morphisms()[*m1].name
                                        ))
                                    })?;
                                *acc.entry(composite).or_default() += c1 * c2;
                            }
                        }
                    }
                    if acc.values().any(|c| !c.is_zero()) {
                        return Err(ComplexError::BoundarySquare(format!(
                            "cells ({n},{i}) -> ({},{k})",
                            n - 2
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    /// Topological dimension; the empty complex reports None.
    pub fn dimension(&self) -> Option<usize> {
        if self.cells.is_empty() {
            None
        } else {
            Some(self.cells.len() - 1)
        }
    }

    pub fn cells(&self, dim: usize) -> &[OrbitCell] {
        self.cells.get(dim).map(|c| c.as_slice()).unwrap_or(&[])
    }

    pub fn boundary(&self, n: usize, i: usize, j: usize) -> Option<&FormalSum> {
        self.boundaries
            .get(n - 1)
            .and_then(|layer| layer.get(&(i, j)))
    }

    /// Objects that occur as stabilizers of some cell.
    pub fn isotropy_objects(&self) -> std::collections::BTreeSet<usize> {
        self.cells.iter().flatten().map(|c| c.stabilizer).collect()
    }
}

/// Chain complex of presented abelian groups; `differentials[n-1]` is
/// d_n : C_n -> C_{n-1}.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub groups: Vec<FgAbGroup>,
    pub differentials: Vec<AbHom>,
}

impl ChainComplex {
    pub fn group(&self, n: isize) -> FgAbGroup {
        if n < 0 || n as usize >= self.groups.len() {
            FgAbGroup::trivial()
        } else {
            self.groups[n as usize].clone()
        }
    }

    pub fn differential(&self, n: usize) -> Option<&AbHom> {
        if n == 0 {
            None
        } else {
            self.differentials.get(n - 1)
        }
    }

    /// Homology at degree n; trivial outside [0, top].
    pub fn homology(&self, n: isize) -> Result<FgAbGroup, HomError> {
        if n < 0 || self.groups.is_empty() || n as usize >= self.groups.len() {
            return Ok(FgAbGroup::trivial());
        }
        let n = n as usize;
        let group = &self.groups[n];
        let d_out = match self.differential(n) {
            Some(d) => d.clone(),
            None => AbHom::zero(group, &FgAbGroup::trivial()),
        };
        let d_in = match self.differentials.get(n) {
            Some(d) => d.clone(),
            None => AbHom::zero(&FgAbGroup::trivial(), group),
        };
        homology_at(&d_out, &d_in)
    }
}

/// Tensors the cell structure with a coefficient system: degree-n chain group
/// is the direct sum of F(stabilizer) over n-cells, differential entries are
/// the F-images of the boundary formal sums.
pub fn apply_coefficients(
    complex: &CellOrbitComplex,
    coeff: &CoeffSystem,
) -> Result<ChainComplex, ComplexError> {
    if !Arc::ptr_eq(complex.category(), coeff.category())
        && complex.category().objects() != coeff.category().objects()
    {
        return Err(ComplexError::CoefficientMismatch(
            "coefficient system lives over a different category".into(),
        ));
    }
    let mut groups = Vec::new();
    for layer in &complex.cells {
        let summands: Vec<FgAbGroup> = layer
            .iter()
            .map(|c| coeff.value(c.stabilizer).clone())
            .collect();
        groups.push(direct_sum(&summands)?.group);
    }
    let mut differentials = Vec::new();
    for n in 1..complex.cells.len() {
        let row_sizes: Vec<usize> = complex.cells[n - 1]
            .iter()
            .map(|c| coeff.value(c.stabilizer).generators())
            .collect();
        let col_sizes: Vec<usize> = complex.cells[n]
            .iter()
            .map(|c| coeff.value(c.stabilizer).generators())
            .collect();
        let mut block = BlockMatrix::new(&row_sizes, &col_sizes);
        for (&(i, j), sum) in &complex.boundaries[n - 1] {
            for (c, m) in sum.terms() {
                block.add_block(j, i, &coeff.hom(*m).matrix().scale(c));
            }
        }
        differentials.push(AbHom::new_unchecked(
            groups[n].clone(),
            groups[n - 1].clone(),
            block.finish(),
        ));
    }
    // d . d = 0 as maps of the presented groups
    for n in 1..differentials.len() {
        let square = AbHom::compose(&differentials[n - 1], &differentials[n])?;
        if !square.is_zero_map().map_err(HomError::from)? {
            return Err(ComplexError::BoundarySquare(format!(
                "applied differential in degree {}",
                n + 1
            )));
        }
    }
    Ok(ChainComplex {
        groups,
        differentials,
    })
}

/// Bredon homology of the complex with the given coefficients in degree n.
pub fn bredon_homology(
    complex: &CellOrbitComplex,
    coeff: &CoeffSystem,
    n: isize,
) -> Result<FgAbGroup, ComplexError> {
    let chain = apply_coefficients(complex, coeff)?;
    Ok(chain.homology(n)?)
}

/// The 1-skeleton pushout data: vertex orbits and edge orbits, each edge
/// carrying its two endpoint vertices with attaching morphisms.
#[derive(Debug, Clone)]
pub struct OneSkeletonData {
    pub category: Arc<FinCategory>,
    pub vertices: Vec<OrbitCell>,
    pub edges: Vec<EdgeOrbit>,
}

#[derive(Debug, Clone)]
pub struct EdgeOrbit {
    pub label: String,
    pub stabilizer: usize,
    /// (endpoint vertex index, morphism from edge stabilizer to its stabilizer)
    pub minus: (usize, usize),
    pub plus: (usize, usize),
}

impl OneSkeletonData {
    fn check(&self) -> Result<(), ComplexError> {
        for e in &self.edges {
            for (v, m) in [e.minus, e.plus] {
                let vertex = self.vertices.get(v).ok_or_else(|| {
                    ComplexError::Invalid(format!("edge {} references unknown vertex {v}", e.label))
                })?;
                let mor = self
                    .category
                    .morphisms()
                    .get(m)
                    .ok_or_else(|| ComplexError::Invalid(format!("unknown morphism id {m}")))?;
                if mor.source != e.stabilizer || mor.target != vertex.stabilizer {
                    return Err(ComplexError::Invalid(format!(
                        "endpoint morphism {} of edge {} has wrong endpoints",
                        mor.name, e.label
                    )));
                }
            }
        }
        Ok(())
    }

    /// The corresponding 1-dimensional cell orbit complex, with the standard
    /// three-case incidence: -[m_minus] at the minus endpoint, +[m_plus] at
    /// the plus endpoint, combined into a difference when they coincide.
    pub fn to_cell_complex(&self) -> Result<CellOrbitComplex, ComplexError> {
        self.check()?;
        let mut boundary: BTreeMap<(usize, usize), FormalSum> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            let (jm, mm) = e.minus;
            let (jp, mp) = e.plus;
            if jm == jp {
                boundary.insert(
                    (i, jm),
                    FormalSum(vec![(BigInt::from(1), mp), (BigInt::from(-1), mm)]),
                );
            } else {
                boundary.insert((i, jm), FormalSum::single(-1, mm));
                boundary.insert((i, jp), FormalSum::single(1, mp));
            }
        }
        CellOrbitComplex::new(
            self.category.clone(),
            vec![
                self.vertices.clone(),
                self.edges
                    .iter()
                    .map(|e| OrbitCell {
                        label: e.label.clone(),
                        stabilizer: e.stabilizer,
                    })
                    .collect(),
            ],
            vec![boundary],
        )
    }
}

/// The explicit first differential: block map from the sum of F(edge
/// stabilizers) to the sum of F(vertex stabilizers), with -F(m_minus) at the
/// minus endpoint, +F(m_plus) at the plus endpoint, and their difference when
/// the endpoints coincide.
pub fn first_differential(
    data: &OneSkeletonData,
    coeff: &CoeffSystem,
) -> Result<AbHom, ComplexError> {
    data.check()?;
    let vertex_groups: Vec<FgAbGroup> = data
        .vertices
        .iter()
        .map(|v| coeff.value(v.stabilizer).clone())
        .collect();
    let edge_groups: Vec<FgAbGroup> = data
        .edges
        .iter()
        .map(|e| coeff.value(e.stabilizer).clone())
        .collect();
    let row_sizes: Vec<usize> = vertex_groups.iter().map(|g| g.generators()).collect();
    let col_sizes: Vec<usize> = edge_groups.iter().map(|g| g.generators()).collect();
    let mut block = BlockMatrix::new(&row_sizes, &col_sizes);
    for (i, e) in data.edges.iter().enumerate() {
        let (jm, mm) = e.minus;
        let (jp, mp) = e.plus;
        block.add_block(jm, i, &coeff.hom(mm).matrix().neg());
        block.add_block(jp, i, coeff.hom(mp).matrix());
    }
    let source = direct_sum(&edge_groups)?.group;
    let target = direct_sum(&vertex_groups)?.group;
    Ok(AbHom::new_unchecked(source, target, block.finish()))
}

/// Simplicial input: faces with ordered vertex sets, a stabilizer object per
/// face, and a morphism per (face, facet) incidence. The boundary uses the
/// standard alternating-sign convention on the position of the omitted
/// vertex; this is a convention of the encoding, not forced by the cell data.
#[derive(Debug, Clone)]
pub struct SimplicialOrbitData {
    pub category: Arc<FinCategory>,
    /// faces[d] lists the d-dimensional faces; vertex lists must be sorted
    pub faces: Vec<Vec<SimplicialFace>>,
    /// (dim, face index, omitted position) -> morphism id
    pub inclusions: BTreeMap<(usize, usize, usize), usize>,
}

#[derive(Debug, Clone)]
pub struct SimplicialFace {
    pub vertices: Vec<usize>,
    pub stabilizer: usize,
}

impl SimplicialOrbitData {
    pub fn to_cell_complex(&self) -> Result<CellOrbitComplex, ComplexError> {
        let mut cells = Vec::new();
        for (d, layer) in self.faces.iter().enumerate() {
            cells.push(
                layer
                    .iter()
                    .map(|f| OrbitCell {
                        label: format!(
                            "[{}]",
                            f.vertices
                                .iter()
                                .map(|v| v.to_string())
                                .collect::<Vec<_>>()
                                .join(",")
                        ),
                        stabilizer: f.stabilizer,
                    })
                    .collect::<Vec<_>>(),
            );
            for f in layer {
                if f.vertices.len() != d + 1 || !f.vertices.windows(2).all(|w| w[0] < w[1]) {
                    return Err(ComplexError::Invalid(format!(
                        "face {:?} in dimension {d} is not a sorted {d}-simplex",
                        f.vertices
                    )));
                }
            }
        }
        let mut boundaries = Vec::new();
        for d in 1..self.faces.len() {
            let mut layer: BTreeMap<(usize, usize), FormalSum> = BTreeMap::new();
            for (i, f) in self.faces[d].iter().enumerate() {
                for omit in 0..f.vertices.len() {
                    let mut facet = f.vertices.clone();
                    facet.remove(omit);
                    let j = self.faces[d - 1]
                        .iter()
                        .position(|g| g.vertices == facet)
                        .ok_or_else(|| {
                            ComplexError::Invalid(format!(
                                "facet {:?} of {:?} is missing",
                                facet, f.vertices
                            ))
                        })?;
                    let m = *self.inclusions.get(&(d, i, omit)).ok_or_else(|| {
                        ComplexError::Invalid(format!(
                            "no inclusion morphism for face {i} in dimension {d}, omitted position {omit}"
                        ))
                    })?;
                    let sign = if omit % 2 == 0 { 1 } else { -1 };
                    layer
                        .entry((i, j))
                        .or_default()
                        .0
                        .push((BigInt::from(sign), m));
                }
            }
            boundaries.push(layer);
        }
        CellOrbitComplex::new(self.category.clone(), cells, boundaries)
    }
}

/// Downward closure of a set of simplices, grouped by dimension with sorted
/// vertex lists. Input faces may be given in any order.
pub fn simplicial_closure(faces: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    use std::collections::BTreeSet;
    let mut all: BTreeSet<Vec<usize>> = BTreeSet::new();
    fn insert_with_faces(all: &mut BTreeSet<Vec<usize>>, face: &[usize]) {
        let mut sorted = face.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.is_empty() || !all.insert(sorted.clone()) {
            return;
        }
        if sorted.len() > 1 {
            for omit in 0..sorted.len() {
                let mut sub = sorted.clone();
                sub.remove(omit);
                insert_with_faces(all, &sub);
            }
        }
    }
    for f in faces {
        insert_with_faces(&mut all, f);
    }
    let max_dim = all.iter().map(|f| f.len()).max().unwrap_or(0);
    let mut out = vec![Vec::new(); max_dim];
    for f in all {
        let d = f.len() - 1;
        out[d].push(f);
    }
    for layer in &mut out {
        layer.sort();
    }
    out
}

/// Builds a complex over the one-object trivial category from a plain
/// simplicial complex; every stabilizer is the unique object. Pairs with
/// constant coefficients to compute ordinary cellular homology.
pub fn trivial_simplicial_complex(faces: &[Vec<usize>]) -> Result<CellOrbitComplex, ComplexError> {
    let category = Arc::new(FinCategory::discrete(vec!["pt".into()]));
    let id = category.identity_of(0);
    let closed = simplicial_closure(faces);
    let mut data = SimplicialOrbitData {
        category,
        faces: closed
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|v| SimplicialFace {
                        vertices: v.clone(),
                        stabilizer: 0,
                    })
                    .collect()
            })
            .collect(),
        inclusions: BTreeMap::new(),
    };
    for (d, layer) in data.faces.iter().enumerate().skip(1) {
        for (i, f) in layer.iter().enumerate() {
            for omit in 0..f.vertices.len() {
                data.inclusions.insert((d, i, omit), id);
            }
        }
    }
    data.to_cell_complex()
}
