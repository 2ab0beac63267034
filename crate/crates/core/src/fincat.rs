//! Finitely presented index categories, coefficient functors into presented
//! abelian groups, the projection to a subgroup-style quotient category, and
//! colimits presented as coequalizer cokernels.
//!
//! Categories are given by full finite data (explicit composition tables);
//! validation is exhaustive rather than symbolic.

use crate::exactla::{cokernel, direct_sum, AbHom, BlockMatrix, FgAbGroup, HomError};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatError {
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("invalid functor: {0}")]
    InvalidFunctor(String),
    #[error("pushdown failed: {0}")]
    Pushdown(String),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Outcome of an exhaustive validation pass. `violations` lists every failure
/// found, first one first.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub violations: Vec<String>,
}

impl Report {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&str> {
        self.violations.first().map(|s| s.as_str())
    }

    fn push(&mut self, v: String) {
        self.violations.push(v);
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "valid")
        } else {
            write!(f, "{}", self.violations.join("; "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category: labeled objects, labeled morphisms with endpoints, a
/// distinguished identity per object, and a full composition table keyed by
/// (second, first).
#[derive(Debug, Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<usize>,
    composition: BTreeMap<(usize, usize), usize>,
}

impl FinCategory {
    /// Creates a category with identity morphisms only. Identities are named
    /// `id_<object>`.
    pub fn discrete(objects: Vec<String>) -> Self {
        let mut morphisms = Vec::with_capacity(objects.len());
        let mut identities = Vec::with_capacity(objects.len());
        for (i, o) in objects.iter().enumerate() {
            identities.push(morphisms.len());
            morphisms.push(Morphism {
                name: format!("id_{}", o),
                source: i,
                target: i,
            });
        }
        FinCategory {
            objects,
            morphisms,
            identities,
            composition: BTreeMap::new(),
        }
    }

    /// Adds an object together with its identity morphism; returns the
    /// object index.
    pub fn add_object(&mut self, name: impl Into<String>) -> usize {
        let name = name.into();
        let index = self.objects.len();
        self.identities.push(self.morphisms.len());
        self.morphisms.push(Morphism {
            name: format!("id_{}", name),
            source: index,
            target: index,
        });
        self.objects.push(name);
        index
    }

    /// Adds a non-identity morphism and returns its id.
    pub fn add_morphism(&mut self, name: impl Into<String>, source: usize, target: usize) -> usize {
        let id = self.morphisms.len();
        self.morphisms.push(Morphism {
            name: name.into(),
            source,
            target,
        });
        id
    }

    /// Declares g . f = gf for non-identity composable pairs. Identity
    /// composites are implicit.
    pub fn set_composite(&mut self, g: usize, f: usize, gf: usize) {
        self.composition.insert((g, f), gf);
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism_index(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    pub fn identity_of(&self, object: usize) -> usize {
        self.identities[object]
    }

    pub fn is_identity(&self, morphism: usize) -> bool {
        self.identities.contains(&morphism)
    }

    pub fn non_identity_morphisms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.morphisms.len()).filter(|m| !self.is_identity(*m))
    }

    /// Composite g . f if defined. Identity composites are resolved without a
    /// table entry.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        if self.morphisms[f].target != self.morphisms[g].source {
            return None;
        }
        if self.is_identity(f) {
            return Some(g);
        }
        if self.is_identity(g) {
            return Some(f);
        }
        self.composition.get(&(g, f)).copied()
    }

    /// Exhaustive validation: endpoint consistency of identities and the
    /// composition table, table completeness, unit laws, associativity.
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        for (i, &id) in self.identities.iter().enumerate() {
            let m = &self.morphisms[id];
            if m.source != i || m.target != i {
                report.push(format!(
                    "identity of object {} has endpoints {} -> {}",
                    self.objects[i], self.objects[m.source], self.objects[m.target]
                ));
            }
        }
        for (&(g, f), &gf) in &self.composition {
            if g >= self.morphisms.len() || f >= self.morphisms.len() || gf >= self.morphisms.len()
            {
                report.push(format!(
                    "composition table references unknown morphism ids ({g}, {f}) -> {gf}"
                ));
                continue;
            }
            let (mf, mg, mgf) = (&self.morphisms[f], &self.morphisms[g], &self.morphisms[gf]);
            if mf.target != mg.source {
                report.push(format!(
                    "table entry {} . {} is not composable",
                    mg.name, mf.name
                ));
            } else if mgf.source != mf.source || mgf.target != mg.target {
                report.push(format!(
                    "composite {} . {} = {} has wrong endpoints",
                    mg.name, mf.name, mgf.name
                ));
            }
        }
        // completeness over non-identity pairs
        for f in self.non_identity_morphisms() {
            for g in self.non_identity_morphisms() {
                if self.morphisms[f].target == self.morphisms[g].source
                    && !self.composition.contains_key(&(g, f))
                {
                    report.push(format!(
                        "missing composite {} . {}",
                        self.morphisms[g].name, self.morphisms[f].name
                    ));
                }
            }
        }
        if !report.ok() {
            return report;
        }
        // associativity h . (g . f) = (h . g) . f on all composable triples
        for f in 0..self.morphisms.len() {
            for g in 0..self.morphisms.len() {
                if self.morphisms[f].target != self.morphisms[g].source {
                    continue;
                }
                for h in 0..self.morphisms.len() {
                    if self.morphisms[g].target != self.morphisms[h].source {
                        continue;
                    }
                    let left = self.compose(g, f).and_then(|gf| self.compose(h, gf));
                    let right = self.compose(h, g).and_then(|hg| self.compose(hg, f));
                    if left != right || left.is_none() {
                        report.push(format!(
                            "associativity fails on ({}, {}, {})",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        ));
                    }
                }
            }
        }
        report
    }

    /// Full subcategory on the given objects. Returns the category plus maps
    /// from old object/morphism indices to new ones.
    pub fn full_subcategory(
        &self,
        keep: &BTreeSet<usize>,
    ) -> (FinCategory, BTreeMap<usize, usize>, BTreeMap<usize, usize>) {
        let mut object_map = BTreeMap::new();
        let mut objects = Vec::new();
        for &o in keep {
            object_map.insert(o, objects.len());
            objects.push(self.objects[o].clone());
        }
        let mut sub = FinCategory::discrete(objects);
        let mut morphism_map = BTreeMap::new();
        for (old, &new_obj) in &object_map {
            morphism_map.insert(self.identities[*old], sub.identities[new_obj]);
        }
        for m in self.non_identity_morphisms() {
            let mor = &self.morphisms[m];
            if keep.contains(&mor.source) && keep.contains(&mor.target) {
                let id = sub.add_morphism(
                    mor.name.clone(),
                    object_map[&mor.source],
                    object_map[&mor.target],
                );
                morphism_map.insert(m, id);
            }
        }
        for (&(g, f), &gf) in &self.composition {
            if let (Some(&ng), Some(&nf), Some(&ngf)) = (
                morphism_map.get(&g),
                morphism_map.get(&f),
                morphism_map.get(&gf),
            ) {
                sub.set_composite(ng, nf, ngf);
            }
        }
        (sub, object_map, morphism_map)
    }
}

/// Functor between finite categories, given by full object and morphism maps.
#[derive(Debug, Clone)]
pub struct CatFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl CatFunctor {
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        if self.object_map.len() != self.source.objects().len()
            || self.morphism_map.len() != self.source.morphisms().len()
        {
            report.push("object/morphism map sizes do not match the source category".into());
            return report;
        }
        for (m, &fm) in self.morphism_map.iter().enumerate() {
            let src = &self.source.morphisms()[m];
            let img = &self.target.morphisms()[fm];
            if img.source != self.object_map[src.source]
                || img.target != self.object_map[src.target]
            {
                report.push(format!("image of {} has wrong endpoints", src.name));
            }
        }
        for (o, &fo) in self.object_map.iter().enumerate() {
            if self.morphism_map[self.source.identity_of(o)] != self.target.identity_of(fo) {
                report.push(format!(
                    "identity of {} is not sent to an identity",
                    self.source.objects()[o]
                ));
            }
        }
        for f in 0..self.source.morphisms().len() {
            for g in 0..self.source.morphisms().len() {
                if let Some(gf) = self.source.compose(g, f) {
                    let img = self
                        .target
                        .compose(self.morphism_map[g], self.morphism_map[f]);
                    if img != Some(self.morphism_map[gf]) {
                        report.push(format!(
                            "functor does not preserve composite {} . {}",
                            self.source.morphisms()[g].name,
                            self.source.morphisms()[f].name
                        ));
                    }
                }
            }
        }
        report
    }
}

/// Covariant coefficient functor: a presented abelian group per object and a
/// homomorphism per morphism. Morphisms listed in `central_flags` are the
/// ones the user asserts are collapsed on passage to the subgroup-style
/// category; they must act as the identity.
#[derive(Debug, Clone)]
pub struct CoeffSystem {
    category: Arc<FinCategory>,
    values: Vec<FgAbGroup>,
    homs: Vec<AbHom>,
    central_flags: BTreeSet<usize>,
}

impl CoeffSystem {
    pub fn new(
        category: Arc<FinCategory>,
        values: Vec<FgAbGroup>,
        homs: Vec<AbHom>,
    ) -> Result<Self, CatError> {
        if values.len() != category.objects().len() {
            return Err(CatError::InvalidFunctor(format!(
                "{} values for {} objects",
                values.len(),
                category.objects().len()
            )));
        }
        if homs.len() != category.morphisms().len() {
            return Err(CatError::InvalidFunctor(format!(
                "{} homs for {} morphisms",
                homs.len(),
                category.morphisms().len()
            )));
        }
        Ok(CoeffSystem {
            category,
            values,
            homs,
            central_flags: BTreeSet::new(),
        })
    }

    /// Constant system: value A at every object, identity on every morphism.
    pub fn constant(category: Arc<FinCategory>, value: FgAbGroup) -> Self {
        let values = vec![value.clone(); category.objects().len()];
        let homs = category
            .morphisms()
            .iter()
            .map(|_| AbHom::identity(&value))
            .collect();
        CoeffSystem {
            category,
            values,
            homs,
            central_flags: BTreeSet::new(),
        }
    }

    pub fn with_central_flags(mut self, flags: BTreeSet<usize>) -> Self {
        self.central_flags = flags;
        self
    }

    pub fn category(&self) -> &Arc<FinCategory> {
        &self.category
    }

    pub fn value(&self, object: usize) -> &FgAbGroup {
        &self.values[object]
    }

    pub fn hom(&self, morphism: usize) -> &AbHom {
        &self.homs[morphism]
    }

    /// Functoriality validation: endpoints, identity homs, composites, and
    /// identity action on flagged central morphisms.
    pub fn validate(&self) -> Report {
        let mut report = Report::default();
        for (m, hom) in self.homs.iter().enumerate() {
            let mor = &self.category.morphisms()[m];
            if !hom.source().same_presentation(&self.values[mor.source])
                || !hom.target().same_presentation(&self.values[mor.target])
            {
                report.push(format!(
                    "hom of {} has wrong source/target groups",
                    mor.name
                ));
            }
        }
        if !report.ok() {
            return report;
        }
        for o in 0..self.values.len() {
            let id = self.category.identity_of(o);
            if !self.homs[id]
                .same_map(&AbHom::identity(&self.values[o]))
                .unwrap_or(false)
            {
                report.push(format!(
                    "identity of {} is not sent to the identity hom",
                    self.category.objects()[o]
                ));
            }
        }
        for f in 0..self.homs.len() {
            for g in 0..self.homs.len() {
                if let Some(gf) = self.category.compose(g, f) {
                    let composed = match AbHom::compose(&self.homs[g], &self.homs[f]) {
                        Ok(c) => c,
                        Err(e) => {
                            report.push(format!("cannot compose hom images: {e}"));
                            continue;
                        }
                    };
                    if !composed.same_map(&self.homs[gf]).unwrap_or(false) {
                        report.push(format!(
                            "functoriality fails on pair ({}, {})",
                            self.category.morphisms()[g].name,
                            self.category.morphisms()[f].name
                        ));
                    }
                }
            }
        }
        for &m in &self.central_flags {
            let mor = &self.category.morphisms()[m];
            if mor.source != mor.target {
                report.push(format!(
                    "flagged central morphism {} is not an endomorphism",
                    mor.name
                ));
                continue;
            }
            if !self.homs[m]
                .same_map(&AbHom::identity(&self.values[mor.source]))
                .unwrap_or(false)
            {
                report.push(format!(
                    "flagged central morphism {} does not act as the identity",
                    mor.name
                ));
            }
        }
        report
    }

    /// Restriction to a full subcategory (for isotropy restriction).
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> CoeffSystem {
        let (sub, object_map, morphism_map) = self.category.full_subcategory(keep);
        let sub = Arc::new(sub);
        let mut values = vec![FgAbGroup::trivial(); sub.objects().len()];
        for (&old, &new) in &object_map {
            values[new] = self.values[old].clone();
        }
        let mut homs: Vec<Option<AbHom>> = vec![None; sub.morphisms().len()];
        for (&old, &new) in &morphism_map {
            homs[new] = Some(self.homs[old].clone());
        }
        let homs = homs
            .into_iter()
            .map(|h| h.expect("full subcategory covers all morphisms"))
            .collect();
        let central_flags = self
            .central_flags
            .iter()
            .filter_map(|m| morphism_map.get(m).copied())
            .collect();
        CoeffSystem {
            category: sub,
            values,
            homs,
            central_flags,
        }
    }
}

/// Pushes a coefficient system along a projection functor P: the returned
/// system N satisfies N . P = F on the nose. Fails when P is not surjective
/// or when two morphisms with equal image carry different homs (the
/// uniqueness the passage to the subgroup category requires).
pub fn pushdown(f: &CoeffSystem, p: &CatFunctor) -> Result<CoeffSystem, CatError> {
    let report = p.validate();
    if !report.ok() {
        return Err(CatError::InvalidFunctor(report.to_string()));
    }
    let target = &p.target;
    let mut values: Vec<Option<FgAbGroup>> = vec![None; target.objects().len()];
    for (o, &po) in p.object_map.iter().enumerate() {
        match &values[po] {
            None => values[po] = Some(f.value(o).clone()),
            Some(existing) => {
                if !existing.same_presentation(f.value(o)) {
                    return Err(CatError::Pushdown(format!(
                        "objects with equal image under P carry different groups at {}",
                        target.objects()[po]
                    )));
                }
            }
        }
    }
    let values: Vec<FgAbGroup> = values
        .into_iter()
        .enumerate()
        .map(|(o, v)| {
            v.ok_or_else(|| CatError::Pushdown(format!("P misses object {}", target.objects()[o])))
        })
        .collect::<Result<_, _>>()?;
    let mut homs: Vec<Option<AbHom>> = vec![None; target.morphisms().len()];
    for (m, &pm) in p.morphism_map.iter().enumerate() {
        match &homs[pm] {
            None => homs[pm] = Some(f.hom(m).clone()),
            Some(existing) => {
                if !existing.same_map(f.hom(m)).unwrap_or(false) {
                    return Err(CatError::Pushdown(format!(
                        "morphisms with equal image under P carry different homs at {}",
                        target.morphisms()[pm].name
                    )));
                }
            }
        }
    }
    let homs: Vec<AbHom> = homs
        .into_iter()
        .enumerate()
        .map(|(m, h)| {
            h.ok_or_else(|| {
                CatError::Pushdown(format!("P misses morphism {}", target.morphisms()[m].name))
            })
        })
        .collect::<Result<_, _>>()?;
    CoeffSystem::new(p.target.clone(), values, homs)
}

/// Colimit of a coefficient system, presented as the cokernel of the map
/// with an F(source f) block per non-identity morphism f, sent to
/// (injection at target) . F(f) - (injection at source).
pub fn colimit(f: &CoeffSystem) -> Result<FgAbGroup, CatError> {
    let cat = f.category();
    let object_sizes: Vec<usize> = (0..cat.objects().len())
        .map(|o| f.value(o).generators())
        .collect();
    let morphisms: Vec<usize> = cat.non_identity_morphisms().collect();
    let morphism_sizes: Vec<usize> = morphisms
        .iter()
        .map(|&m| f.value(cat.morphisms()[m].source).generators())
        .collect();
    let mut block = BlockMatrix::new(&object_sizes, &morphism_sizes);
    for (col, &m) in morphisms.iter().enumerate() {
        let mor = &cat.morphisms()[m];
        block.add_block(mor.target, col, f.hom(m).matrix());
        block.add_block(
            mor.source,
            col,
            &crate::exactla::IntMatrix::identity(f.value(mor.source).generators()).neg(),
        );
    }
    let groups: Vec<FgAbGroup> = (0..cat.objects().len())
        .map(|o| f.value(o).clone())
        .collect();
    let sum = direct_sum(&groups)?;
    let sources: Vec<FgAbGroup> = morphisms
        .iter()
        .map(|&m| f.value(cat.morphisms()[m].source).clone())
        .collect();
    let domain = direct_sum(&sources)?;
    let hom = AbHom::new_unchecked(domain.group, sum.group, block.finish());
    Ok(cokernel(&hom)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{is_isomorphic, IntMatrix};

    fn poset_two() -> FinCategory {
        let mut c = FinCategory::discrete(vec!["a".into(), "b".into()]);
        c.add_morphism("f", 0, 1);
        c
    }

    #[test]
    fn validate_category_basics() {
        let c = FinCategory::discrete(vec!["x".into()]);
        assert!(c.validate().ok());
        assert!(poset_two().validate().ok());

        // composite pointing at a morphism with wrong endpoints
        let mut bad = FinCategory::discrete(vec!["a".into(), "b".into(), "c".into()]);
        let f = bad.add_morphism("f", 0, 1);
        let g = bad.add_morphism("g", 1, 2);
        // g . f should go a -> c but we point it at f (a -> b)
        bad.set_composite(g, f, f);
        let report = bad.validate();
        assert!(!report.ok());
        assert!(report.first().unwrap().contains("wrong endpoints"));

        // missing composite
        let mut missing = FinCategory::discrete(vec!["a".into(), "b".into(), "c".into()]);
        missing.add_morphism("f", 0, 1);
        missing.add_morphism("g", 1, 2);
        assert!(!missing.validate().ok());
    }

    #[test]
    fn validate_functoriality() {
        let cat = Arc::new(poset_two());
        let constant = CoeffSystem::constant(cat.clone(), FgAbGroup::free(1));
        assert!(constant.validate().ok());

        // a system where a composite disagrees: c has f: a -> b, g: b -> c,
        // gf: a -> c with hom(gf) != hom(g) . hom(f)
        let mut c = FinCategory::discrete(vec!["a".into(), "b".into(), "c".into()]);
        let f = c.add_morphism("f", 0, 1);
        let g = c.add_morphism("g", 1, 2);
        let gf = c.add_morphism("gf", 0, 2);
        c.set_composite(g, f, gf);
        assert!(c.validate().ok());
        let cat = Arc::new(c);
        let z = FgAbGroup::free(1);
        let two = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let mut homs = vec![AbHom::identity(&z); cat.morphisms().len()];
        homs[f] = two.clone();
        homs[g] = two.clone();
        homs[gf] = two; // should be x4
        let sys = CoeffSystem::new(cat, vec![z.clone(), z.clone(), z.clone()], homs).unwrap();
        let report = sys.validate();
        assert!(!report.ok());
        assert!(report.first().unwrap().contains("functoriality"));
    }

    #[test]
    fn central_flag_enforced() {
        let mut c = FinCategory::discrete(vec!["a".into()]);
        let t = c.add_morphism("t", 0, 0);
        c.set_composite(t, t, c.identity_of(0));
        // t . t = id requires hom(t)^2 = id; -1 works but is flagged central,
        // which demands the identity on the nose.
        let cat = Arc::new(c);
        let z = FgAbGroup::free(1);
        let minus = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![-1]])).unwrap();
        let mut homs = vec![AbHom::identity(&z); cat.morphisms().len()];
        homs[t] = minus;
        let sys = CoeffSystem::new(cat, vec![z], homs)
            .unwrap()
            .with_central_flags([t].into_iter().collect());
        let report = sys.validate();
        assert!(!report.ok());
        assert!(report.first().unwrap().contains("identity"));
    }

    #[test]
    fn pushdown_identity_and_constant() {
        // P an isomorphism: relabeled system
        let src = Arc::new(poset_two());
        let tgt = Arc::new(poset_two());
        let p = CatFunctor {
            source: src.clone(),
            target: tgt.clone(),
            object_map: vec![0, 1],
            morphism_map: vec![0, 1, 2],
        };
        let f = CoeffSystem::constant(src.clone(), FgAbGroup::cyclic(4));
        let n = pushdown(&f, &p).unwrap();
        assert!(n.validate().ok());
        assert_eq!(n.value(0).render(), "Z/4");

        // two morphisms with equal image but different homs
        let mut big = FinCategory::discrete(vec!["a".into(), "b".into()]);
        let f1 = big.add_morphism("f1", 0, 1);
        let f2 = big.add_morphism("f2", 0, 1);
        let big = Arc::new(big);
        let z = FgAbGroup::free(1);
        let mut homs = vec![AbHom::identity(&z); big.morphisms().len()];
        homs[f2] = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let _ = f1;
        let sys = CoeffSystem::new(big.clone(), vec![z.clone(), z], homs).unwrap();
        let p = CatFunctor {
            source: big,
            target: tgt,
            object_map: vec![0, 1],
            morphism_map: vec![0, 1, 2, 2],
        };
        assert!(matches!(pushdown(&sys, &p), Err(CatError::Pushdown(_))));
    }

    #[test]
    fn colimit_examples() {
        // one object, identity only, value A
        let cat = Arc::new(FinCategory::discrete(vec!["x".into()]));
        let a = FgAbGroup::from_parts(1, &[2]);
        let f = CoeffSystem::constant(cat, a.clone());
        assert!(is_isomorphic(&colimit(&f).unwrap(), &a));

        // pushout shape b <- a -> c with x2, x3 out of Z: colimit Z
        // (cokernel of [2; -3] via the SNF oracle is Z on two generators)
        let mut c = FinCategory::discrete(vec!["a".into(), "b".into(), "c".into()]);
        let f1 = c.add_morphism("f1", 0, 1);
        let f2 = c.add_morphism("f2", 0, 2);
        let cat = Arc::new(c);
        let z = FgAbGroup::free(1);
        let mut homs = vec![AbHom::identity(&z); cat.morphisms().len()];
        homs[f1] = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        homs[f2] = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![3]])).unwrap();
        let sys = CoeffSystem::new(cat, vec![z.clone(), z.clone(), z.clone()], homs).unwrap();
        assert!(sys.validate().ok());
        assert!(is_isomorphic(&colimit(&sys).unwrap(), &z));

        // one object with an order-2 automorphism acting by -1 on Z: Z/2
        // (cokernel of -2 : Z -> Z)
        let mut c = FinCategory::discrete(vec!["x".into()]);
        let t = c.add_morphism("t", 0, 0);
        c.set_composite(t, t, c.identity_of(0));
        let cat = Arc::new(c);
        let mut homs = vec![AbHom::identity(&z); cat.morphisms().len()];
        homs[t] = AbHom::new(z.clone(), z.clone(), IntMatrix::from_rows(&[vec![-1]])).unwrap();
        let sys = CoeffSystem::new(cat, vec![z.clone()], homs).unwrap();
        assert!(sys.validate().ok());
        assert!(is_isomorphic(
            &colimit(&sys).unwrap(),
            &FgAbGroup::cyclic(2)
        ));
    }

    #[test]
    fn colimit_of_connected_constant_is_value() {
        let mut c = FinCategory::discrete(vec!["a".into(), "b".into(), "c".into()]);
        c.add_morphism("f", 0, 1);
        c.add_morphism("g", 2, 1);
        let cat = Arc::new(c);
        let a = FgAbGroup::from_parts(2, &[3]);
        let sys = CoeffSystem::constant(cat, a.clone());
        assert!(is_isomorphic(&colimit(&sys).unwrap(), &a));
    }
}
