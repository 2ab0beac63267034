//! The on-disk instance format: a JSON document holding a finite category,
//! a matrix-presented coefficient system (optionally graded), one structure
//! block, and the user-asserted hypotheses the engine cannot verify itself.
//!
//! All cross-references are by name; matrices are nested integer arrays in
//! row-major order. A presentation lists its relators as rows; internally a
//! relator becomes one column of the relation matrix.

use kbredon::ahss::GradedCoeffSystem;
use kbredon::bredon::{
    CellOrbitComplex, FormalSum, OrbitCell, SimplicialFace, SimplicialOrbitData,
};
use kbredon::exactla::{AbHom, FgAbGroup, IntMatrix};
use kbredon::fincat::{CoeffSystem, FinCategory};
use kbredon::mvcube::{ExactSequenceInstance, PosetChainModel};
use kbredon::recipe::{CentralExtInstance, EdgeLabel, RecipeEdge, RecipeInstance, VertexOrbit};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

pub const FORMAT_VERSION: u32 = 1;

/// Diagnostic code attached to every failure; drives the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Code {
    Io,
    Parse,
    DanglingRef,
    Functoriality,
    WrongKind,
    Internal,
}

impl Code {
    pub fn name(self) -> &'static str {
        match self {
            Code::Io => "IO",
            Code::Parse => "PARSE",
            Code::DanglingRef => "DANGLING_REF",
            Code::Functoriality => "FUNCTORIALITY",
            Code::WrongKind => "WRONG_KIND",
            Code::Internal => "INTERNAL",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Code::Io => 4,
            Code::Parse | Code::DanglingRef | Code::Functoriality => 2,
            Code::WrongKind => 3,
            Code::Internal => 5,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: Code,
    pub message: String,
}

impl Failure {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type Result<T> = std::result::Result<T, Failure>;

// ---------------------------------------------------------------------------
// serde layer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InstanceDocument {
    pub version: u32,
    pub category: CategoryDoc,
    pub coefficients: CoefficientsDoc,
    pub structure: StructureDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assertions: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub composition: Vec<CompositeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MorphismDoc {
    pub name: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CompositeDoc {
    /// g . f = equals, with g applied second
    pub g: String,
    pub f: String,
    pub equals: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CoefficientsDoc {
    /// presentation per object name
    pub values: BTreeMap<String, PresentationDoc>,
    /// matrix per non-identity morphism name
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
    /// optional graded window for spectral-page commands
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graded: Option<GradedDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PresentationDoc {
    pub generators: usize,
    /// each relator is a row vector of length `generators`
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relators: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct GradedDoc {
    pub q_min: i64,
    pub degrees: Vec<DegreeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DegreeDoc {
    pub values: BTreeMap<String, PresentationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum StructureDoc {
    CellComplex {
        /// cells[d] lists the d-dimensional orbit cells
        cells: Vec<Vec<CellDoc>>,
        /// boundaries[d-1] holds the incidences from dimension d to d-1
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        boundaries: Vec<Vec<IncidenceDoc>>,
    },
    Recipe {
        vertices: Vec<CellDoc>,
        edges: Vec<EdgeDoc>,
    },
    CentralExt {
        vertices: Vec<CellDoc>,
        edges: Vec<EdgeDoc>,
        m: usize,
        /// residues[edge][label] in 0..m
        residues: Vec<Vec<usize>>,
    },
    Poset {
        /// faces[d] lists d-faces with sorted vertex lists
        faces: Vec<Vec<FaceDoc>>,
        inclusions: Vec<InclusionDoc>,
    },
    ExactSequence {
        groups: Vec<PresentationDoc>,
        /// maps[i] : groups[i] -> groups[i+1]
        maps: Vec<Vec<Vec<i64>>>,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellDoc {
    pub label: String,
    pub stabilizer: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct IncidenceDoc {
    pub from: usize,
    pub to: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermDoc {
    pub coeff: i64,
    pub morphism: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EdgeDoc {
    pub v: usize,
    pub w: usize,
    pub labels: Vec<LabelDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LabelDoc {
    pub name: String,
    pub intersection: String,
    pub incl: String,
    pub conj: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FaceDoc {
    pub vertices: Vec<usize>,
    pub stabilizer: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InclusionDoc {
    pub dim: usize,
    pub face: usize,
    pub omit: usize,
    pub morphism: String,
}

// ---------------------------------------------------------------------------
// construction of engine values from a document
// ---------------------------------------------------------------------------

pub struct Built {
    pub category: Arc<FinCategory>,
    pub coeff: CoeffSystem,
    pub graded: Option<GradedCoeffSystem>,
    pub structure: BuiltStructure,
    pub assertions: Vec<String>,
}

pub enum BuiltStructure {
    CellComplex(CellOrbitComplex),
    Recipe(RecipeInstance),
    CentralExt(CentralExtInstance),
    Poset(PosetChainModel),
    ExactSequence(ExactSequenceInstance),
}

impl BuiltStructure {
    pub fn kind_name(&self) -> &'static str {
        match self {
            BuiltStructure::CellComplex(_) => "cell-complex",
            BuiltStructure::Recipe(_) => "recipe",
            BuiltStructure::CentralExt(_) => "central-ext",
            BuiltStructure::Poset(_) => "poset",
            BuiltStructure::ExactSequence(_) => "exact-sequence",
        }
    }
}

fn to_matrix(rows: &[Vec<i64>], expect_cols: Option<usize>) -> Result<IntMatrix> {
    let cols = match (rows.first(), expect_cols) {
        (Some(r), _) => r.len(),
        (None, Some(c)) => c,
        (None, None) => 0,
    };
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Failure::new(Code::Parse, "ragged matrix rows"));
    }
    Ok(IntMatrix::from_fn(rows.len(), cols, |i, j| {
        BigInt::from(rows[i][j])
    }))
}

fn to_group(p: &PresentationDoc) -> Result<FgAbGroup> {
    // relators are stored as rows; the relation matrix has one column per
    // relator
    for r in &p.relators {
        if r.len() != p.generators {
            return Err(Failure::new(
                Code::Parse,
                format!(
                    "relator of length {} for a presentation on {} generators",
                    r.len(),
                    p.generators
                ),
            ));
        }
    }
    let relations = IntMatrix::from_fn(p.generators, p.relators.len(), |i, j| {
        BigInt::from(p.relators[j][i])
    });
    FgAbGroup::new(p.generators, relations).map_err(|e| Failure::new(Code::Parse, e.to_string()))
}

fn from_group(g: &FgAbGroup) -> PresentationDoc {
    let rel = g.relations();
    PresentationDoc {
        generators: g.generators(),
        relators: (0..rel.cols())
            .map(|j| {
                (0..rel.rows())
                    .map(|i| {
                        // instance files are desk scale; i64 is plenty
                        i64::try_from(rel.get(i, j)).expect("relation entry exceeds i64")
                    })
                    .collect()
            })
            .collect(),
    }
}

fn from_matrix(m: &IntMatrix) -> Vec<Vec<i64>> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| i64::try_from(m.get(i, j)).expect("matrix entry exceeds i64"))
                .collect()
        })
        .collect()
}

struct Names {
    objects: BTreeMap<String, usize>,
    morphisms: BTreeMap<String, usize>,
}

impl Names {
    fn object(&self, name: &str, context: &str) -> Result<usize> {
        self.objects.get(name).copied().ok_or_else(|| {
            Failure::new(
                Code::DanglingRef,
                format!("{context}: unknown object \"{name}\""),
            )
        })
    }

    fn morphism(&self, name: &str, context: &str) -> Result<usize> {
        self.morphisms.get(name).copied().ok_or_else(|| {
            Failure::new(
                Code::DanglingRef,
                format!("{context}: unknown morphism \"{name}\""),
            )
        })
    }
}

fn build_category(doc: &CategoryDoc) -> Result<(Arc<FinCategory>, Names)> {
    let mut objects = BTreeMap::new();
    for (i, o) in doc.objects.iter().enumerate() {
        if objects.insert(o.clone(), i).is_some() {
            return Err(Failure::new(
                Code::Parse,
                format!("duplicate object \"{o}\""),
            ));
        }
    }
    let mut cat = FinCategory::discrete(doc.objects.clone());
    let mut names = Names {
        objects,
        morphisms: BTreeMap::new(),
    };
    // identities are addressable as id_<object>
    for (i, o) in doc.objects.iter().enumerate() {
        names
            .morphisms
            .insert(format!("id_{o}"), cat.identity_of(i));
    }
    for m in &doc.morphisms {
        let source = names.object(&m.source, "morphism source")?;
        let target = names.object(&m.target, "morphism target")?;
        if names.morphisms.contains_key(&m.name) {
            return Err(Failure::new(
                Code::Parse,
                format!("duplicate morphism \"{}\"", m.name),
            ));
        }
        let id = cat.add_morphism(m.name.clone(), source, target);
        names.morphisms.insert(m.name.clone(), id);
    }
    for c in &doc.composition {
        let g = names.morphism(&c.g, "composition")?;
        let f = names.morphism(&c.f, "composition")?;
        let gf = names.morphism(&c.equals, "composition")?;
        cat.set_composite(g, f, gf);
    }
    let report = cat.validate();
    if !report.ok() {
        return Err(Failure::new(
            Code::Functoriality,
            report.first().unwrap_or("invalid category").to_string(),
        ));
    }
    Ok((Arc::new(cat), names))
}

fn build_system(
    cat: &Arc<FinCategory>,
    names: &Names,
    values_doc: &BTreeMap<String, PresentationDoc>,
    maps_doc: &BTreeMap<String, Vec<Vec<i64>>>,
) -> Result<CoeffSystem> {
    let mut values = Vec::with_capacity(cat.objects().len());
    for o in cat.objects() {
        let p = values_doc.get(o).ok_or_else(|| {
            Failure::new(
                Code::DanglingRef,
                format!("no coefficient value for object \"{o}\""),
            )
        })?;
        values.push(to_group(p)?);
    }
    for name in maps_doc.keys() {
        names.morphism(name, "coefficient map")?;
    }
    let mut homs = Vec::with_capacity(cat.morphisms().len());
    for (id, m) in cat.morphisms().iter().enumerate() {
        if cat.is_identity(id) {
            homs.push(AbHom::identity(&values[m.source]));
            continue;
        }
        let rows = maps_doc.get(&m.name).ok_or_else(|| {
            Failure::new(
                Code::DanglingRef,
                format!("no coefficient matrix for morphism \"{}\"", m.name),
            )
        })?;
        let matrix = to_matrix(rows, Some(values[m.source].generators()))?;
        let hom = AbHom::new(values[m.source].clone(), values[m.target].clone(), matrix).map_err(
            |e| {
                Failure::new(
                    Code::Functoriality,
                    format!("map for morphism \"{}\": {e}", m.name),
                )
            },
        )?;
        homs.push(hom);
    }
    let system = CoeffSystem::new(cat.clone(), values, homs)
        .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
    let report = system.validate();
    if !report.ok() {
        return Err(Failure::new(
            Code::Functoriality,
            report.first().unwrap_or("invalid coefficients").to_string(),
        ));
    }
    Ok(system)
}

pub fn build(doc: &InstanceDocument) -> Result<Built> {
    if doc.version != FORMAT_VERSION {
        return Err(Failure::new(
            Code::Parse,
            format!("unrecognized format version {}", doc.version),
        ));
    }
    let (category, names) = build_category(&doc.category)?;
    let coeff = build_system(
        &category,
        &names,
        &doc.coefficients.values,
        &doc.coefficients.maps,
    )?;
    let graded = match &doc.coefficients.graded {
        None => None,
        Some(g) => {
            let mut systems = Vec::new();
            for d in &g.degrees {
                systems.push(build_system(&category, &names, &d.values, &d.maps)?);
            }
            Some(
                GradedCoeffSystem::new(g.q_min, systems)
                    .map_err(|e| Failure::new(Code::Parse, e.to_string()))?,
            )
        }
    };
    let structure = build_structure(&doc.structure, &category, &coeff, &names)?;
    Ok(Built {
        category,
        coeff,
        graded,
        structure,
        assertions: doc.assertions.clone(),
    })
}

fn build_structure(
    doc: &StructureDoc,
    category: &Arc<FinCategory>,
    coeff: &CoeffSystem,
    names: &Names,
) -> Result<BuiltStructure> {
    match doc {
        StructureDoc::CellComplex { cells, boundaries } => {
            let mut built_cells = Vec::new();
            for layer in cells {
                let mut l = Vec::new();
                for c in layer {
                    l.push(OrbitCell {
                        label: c.label.clone(),
                        stabilizer: names.object(&c.stabilizer, "cell stabilizer")?,
                    });
                }
                built_cells.push(l);
            }
            let mut built_boundaries = Vec::new();
            for layer in boundaries {
                let mut map: BTreeMap<(usize, usize), FormalSum> = BTreeMap::new();
                for inc in layer {
                    let mut terms = Vec::new();
                    for t in &inc.terms {
                        terms.push((
                            BigInt::from(t.coeff),
                            names.morphism(&t.morphism, "boundary term")?,
                        ));
                    }
                    map.insert((inc.from, inc.to), FormalSum(terms));
                }
                built_boundaries.push(map);
            }
            let complex = CellOrbitComplex::new(category.clone(), built_cells, built_boundaries)
                .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
            Ok(BuiltStructure::CellComplex(complex))
        }
        StructureDoc::Recipe { vertices, edges } => Ok(BuiltStructure::Recipe(build_recipe(
            vertices, edges, coeff, names,
        )?)),
        StructureDoc::CentralExt {
            vertices,
            edges,
            m,
            residues,
        } => {
            let base = build_recipe(vertices, edges, coeff, names)?;
            let inst = CentralExtInstance {
                base,
                m: *m,
                residues: residues.clone(),
            };
            inst.validate()
                .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
            Ok(BuiltStructure::CentralExt(inst))
        }
        StructureDoc::Poset { faces, inclusions } => {
            let mut built_faces = Vec::new();
            for layer in faces {
                let mut l = Vec::new();
                for f in layer {
                    l.push(SimplicialFace {
                        vertices: f.vertices.clone(),
                        stabilizer: names.object(&f.stabilizer, "face stabilizer")?,
                    });
                }
                built_faces.push(l);
            }
            let mut incl = BTreeMap::new();
            for i in inclusions {
                incl.insert(
                    (i.dim, i.face, i.omit),
                    names.morphism(&i.morphism, "face inclusion")?,
                );
            }
            let data = SimplicialOrbitData {
                category: category.clone(),
                faces: built_faces,
                inclusions: incl,
            };
            // surface malformed posets at build time
            data.to_cell_complex()
                .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
            Ok(BuiltStructure::Poset(PosetChainModel {
                data,
                coeff: coeff.clone(),
            }))
        }
        StructureDoc::ExactSequence { groups, maps } => {
            let built_groups: Result<Vec<FgAbGroup>> = groups.iter().map(to_group).collect();
            let built_groups = built_groups?;
            if maps.len() + 1 != built_groups.len() {
                return Err(Failure::new(
                    Code::Parse,
                    "an exact sequence needs one map per consecutive pair of groups",
                ));
            }
            let mut built_maps = Vec::new();
            for (i, rows) in maps.iter().enumerate() {
                let matrix = to_matrix(rows, Some(built_groups[i].generators()))?;
                built_maps.push(
                    AbHom::new(built_groups[i].clone(), built_groups[i + 1].clone(), matrix)
                        .map_err(|e| Failure::new(Code::Functoriality, format!("map {i}: {e}")))?,
                );
            }
            let seq = ExactSequenceInstance {
                groups: built_groups,
                maps: built_maps,
            };
            seq.validate()
                .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
            Ok(BuiltStructure::ExactSequence(seq))
        }
    }
}

fn build_recipe(
    vertices: &[CellDoc],
    edges: &[EdgeDoc],
    coeff: &CoeffSystem,
    names: &Names,
) -> Result<RecipeInstance> {
    let mut built_vertices = Vec::new();
    for v in vertices {
        built_vertices.push(VertexOrbit {
            label: v.label.clone(),
            stabilizer: names.object(&v.stabilizer, "vertex stabilizer")?,
        });
    }
    let mut built_edges = Vec::new();
    for e in edges {
        let mut labels = Vec::new();
        for l in &e.labels {
            labels.push(EdgeLabel {
                name: l.name.clone(),
                intersection: names.object(&l.intersection, "edge intersection")?,
                incl: names.morphism(&l.incl, "edge inclusion")?,
                conj: names.morphism(&l.conj, "edge conjugation")?,
            });
        }
        built_edges.push(RecipeEdge {
            v: e.v,
            w: e.w,
            labels,
        });
    }
    let inst = RecipeInstance {
        coeff: coeff.clone(),
        vertices: built_vertices,
        edges: built_edges,
    };
    inst.validate()
        .map_err(|e| Failure::new(Code::Functoriality, e.to_string()))?;
    Ok(inst)
}

// ---------------------------------------------------------------------------
// skeleton emission for the instance subcommand
// ---------------------------------------------------------------------------

/// Serializes a recipe instance back into a document, recovering names from
/// the category. Used to emit editable skeleton files with placeholder
/// coefficient data.
pub fn document_from_recipe(inst: &RecipeInstance, assertions: Vec<String>) -> InstanceDocument {
    let (category, coefficients) = category_and_coefficients(&inst.coeff);
    InstanceDocument {
        version: FORMAT_VERSION,
        category,
        coefficients,
        structure: recipe_structure_doc(inst),
        assertions,
    }
}

pub fn document_from_central(
    inst: &CentralExtInstance,
    assertions: Vec<String>,
) -> InstanceDocument {
    let (category, coefficients) = category_and_coefficients(&inst.base.coeff);
    let (vertices, edges) = recipe_blocks(&inst.base);
    InstanceDocument {
        version: FORMAT_VERSION,
        category,
        coefficients,
        structure: StructureDoc::CentralExt {
            vertices,
            edges,
            m: inst.m,
            residues: inst.residues.clone(),
        },
        assertions,
    }
}

fn category_and_coefficients(coeff: &CoeffSystem) -> (CategoryDoc, CoefficientsDoc) {
    let cat = coeff.category();
    let identity_names: BTreeSet<usize> = (0..cat.objects().len())
        .map(|o| cat.identity_of(o))
        .collect();
    let category = CategoryDoc {
        objects: cat.objects().to_vec(),
        morphisms: cat
            .morphisms()
            .iter()
            .enumerate()
            .filter(|(id, _)| !identity_names.contains(id))
            .map(|(_, m)| MorphismDoc {
                name: m.name.clone(),
                source: cat.objects()[m.source].clone(),
                target: cat.objects()[m.target].clone(),
            })
            .collect(),
        composition: Vec::new(),
    };
    let values = cat
        .objects()
        .iter()
        .enumerate()
        .map(|(o, name)| (name.clone(), from_group(coeff.value(o))))
        .collect();
    let maps = cat
        .morphisms()
        .iter()
        .enumerate()
        .filter(|(id, _)| !identity_names.contains(id))
        .map(|(id, m)| (m.name.clone(), from_matrix(coeff.hom(id).matrix())))
        .collect();
    (
        category,
        CoefficientsDoc {
            values,
            maps,
            graded: None,
        },
    )
}

fn recipe_blocks(inst: &RecipeInstance) -> (Vec<CellDoc>, Vec<EdgeDoc>) {
    let cat = inst.coeff.category();
    let vertices = inst
        .vertices
        .iter()
        .map(|v| CellDoc {
            label: v.label.clone(),
            stabilizer: cat.objects()[v.stabilizer].clone(),
        })
        .collect();
    let edges = inst
        .edges
        .iter()
        .map(|e| EdgeDoc {
            v: e.v,
            w: e.w,
            labels: e
                .labels
                .iter()
                .map(|l| LabelDoc {
                    name: l.name.clone(),
                    intersection: cat.objects()[l.intersection].clone(),
                    incl: cat.morphisms()[l.incl].name.clone(),
                    conj: cat.morphisms()[l.conj].name.clone(),
                })
                .collect(),
        })
        .collect();
    (vertices, edges)
}

fn recipe_structure_doc(inst: &RecipeInstance) -> StructureDoc {
    let (vertices, edges) = recipe_blocks(inst);
    StructureDoc::Recipe { vertices, edges }
}
