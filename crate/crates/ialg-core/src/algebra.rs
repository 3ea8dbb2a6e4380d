//! Algebras over an index poset.
//!
//! Two flavours.  A *presented* algebra is given by generators and
//! homogeneous relations; its graded component between two indices is
//! computed exactly by listing every composable generator word and reducing
//! the finite slice of relation consequences, pivoting on the latest word in
//! the canonical order so that the surviving basis is the greedy
//! earliest-word choice.  A *table* algebra carries explicit structure
//! constants on a finite support and is what Hom-algebra reconstruction
//! emits; both sit behind the [`Algebra`] handle so modules and checks do
//! not care which one they are over.
//!
//! Canonical word order: shorter words first, ties by generator declaration
//! order, left to right.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::cache::Memo;
use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::linalg::{PivotScan, SparseEchelon, SparseVec};
use crate::poset::{IndexElement, Poset};
use crate::Limits;

/// Degree data of a generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorDegree {
    /// Translation-invariant generator on a lattice poset: a strictly
    /// positive degree shift, acting between every pair `i -> i + shift`.
    Shift(Vec<i64>),
    /// A single arrow between two fixed indices, strictly increasing.
    Arrow { from: IndexElement, to: IndexElement },
    /// On a lattice x finite product poset: translate by `shift` in the
    /// lattice factor while moving `from -> to` in the finite factor, at
    /// every lattice position.  At least one of the two parts must move.
    Mixed { shift: Vec<i64>, from: IndexElement, to: IndexElement },
}

/// Which shape of presentation an algebra uses; all generators and
/// relations of one algebra share it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PresKind {
    Invariant,
    Arrowed,
    Mixed,
}

impl PresKind {
    fn of(degree: &GeneratorDegree) -> PresKind {
        match degree {
            GeneratorDegree::Shift(_) => PresKind::Invariant,
            GeneratorDegree::Arrow { .. } => PresKind::Arrowed,
            GeneratorDegree::Mixed { .. } => PresKind::Mixed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub degree: GeneratorDegree,
}

/// A composable word of generator indices.  Ordered by length, then
/// lexicographically by declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Where a relation lives: a degree shift (invariant kind), a fixed pair of
/// endpoints (arrow kind), or a shift with finite-factor endpoints (mixed).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationSpan {
    Shift(Vec<i64>),
    Arrow { from: IndexElement, to: IndexElement },
    Mixed { shift: Vec<i64>, from: IndexElement, to: IndexElement },
}

/// A relation as the caller writes it: coefficient/word pairs with words
/// given by generator names.
#[derive(Clone, Debug)]
pub struct RelationInput<F: Field> {
    pub span: RelationSpan,
    pub terms: Vec<(F::Elem, Vec<String>)>,
}

#[derive(Clone, Debug)]
struct Relation<F: Field> {
    span: RelationSpan,
    terms: Vec<(F::Elem, Word)>,
}

/// A homogeneous element of the algebra: coordinates over the canonical
/// basis of the component `from -> to`.
#[derive(Clone, Debug, PartialEq)]
pub struct Element<F: Field> {
    pub from: IndexElement,
    pub to: IndexElement,
    pub coords: Vec<F::Elem>,
}

/// One graded component of a presented algebra.
#[derive(Debug)]
pub struct AlgebraComponent<F: Field> {
    /// Every composable word, in canonical order.
    pub paths: Vec<Word>,
    /// Positions into `paths` forming the basis (the non-pivot words).
    pub basis: Vec<usize>,
    /// For each eliminated word position, its expansion over `basis`
    /// positions (sparse, pairs of basis index and coefficient).
    reductions: BTreeMap<usize, Vec<(usize, F::Elem)>>,
}

impl<F: Field> AlgebraComponent<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn path_position(&self, w: &Word) -> Option<usize> {
        self.paths.binary_search(w).ok()
    }

    /// Accumulate `c` times the normal form of the path at `pos` into
    /// basis-coordinate vector `acc`.
    fn add_path(&self, field: &F, acc: &mut [F::Elem], pos: usize, c: &F::Elem) {
        if let Ok(b) = self.basis.binary_search(&pos) {
            acc[b] = field.add(&acc[b], c);
        } else if let Some(expansion) = self.reductions.get(&pos) {
            for (b, v) in expansion {
                acc[*b] = field.add_mul(&acc[*b], c, v);
            }
        } else {
            unreachable!("every path position is basis or eliminated");
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum CompKey {
    Shift(Vec<i64>),
    Pair(IndexElement, IndexElement),
    Mixed(Vec<i64>, IndexElement, IndexElement),
}

/// An algebra presented by generators and homogeneous relations.
#[derive(Debug)]
pub struct PresentedAlgebra<F: Field> {
    name: String,
    poset: Arc<Poset>,
    field: F,
    generators: Vec<Generator>,
    relations: Vec<Relation<F>>,
    kind: PresKind,
    limits: Limits,
    paths: Memo<CompKey, Vec<Word>>,
    comps: Memo<CompKey, AlgebraComponent<F>>,
}

impl<F: Field> PresentedAlgebra<F> {
    pub fn new(
        name: &str,
        poset: Arc<Poset>,
        field: F,
        generators: Vec<Generator>,
        relations: Vec<RelationInput<F>>,
        limits: Limits,
    ) -> Result<Arc<Self>> {
        let kind = match generators.first() {
            None => {
                if poset.is_lattice() {
                    PresKind::Invariant
                } else if poset.product_parts().is_some() {
                    PresKind::Mixed
                } else {
                    PresKind::Arrowed
                }
            }
            Some(g) => PresKind::of(&g.degree),
        };
        let mut seen = BTreeMap::new();
        for (idx, g) in generators.iter().enumerate() {
            if g.name.is_empty() {
                return Err(EngineError::InvalidPresentation { reason: "generator with empty name".into() });
            }
            if seen.insert(g.name.clone(), idx).is_some() {
                return Err(EngineError::InvalidPresentation {
                    reason: alloc::format!("duplicate generator `{}`", g.name),
                });
            }
            if PresKind::of(&g.degree) != kind {
                return Err(EngineError::InvalidPresentation {
                    reason: "cannot mix generator degree kinds in one presentation".into(),
                });
            }
            match &g.degree {
                GeneratorDegree::Shift(d) => {
                    let rank = poset.rank().ok_or_else(|| EngineError::InvalidPresentation {
                        reason: "shift generators need a lattice poset".into(),
                    })?;
                    if d.len() != rank {
                        return Err(EngineError::InvalidPresentation {
                            reason: alloc::format!("generator `{}` has a degree of wrong rank", g.name),
                        });
                    }
                    if d.iter().any(|&c| c < 0) || d.iter().all(|&c| c == 0) {
                        return Err(EngineError::InvalidPresentation {
                            reason: alloc::format!(
                                "generator `{}` must have a strictly positive degree",
                                g.name
                            ),
                        });
                    }
                }
                GeneratorDegree::Arrow { from, to } => {
                    poset.check_member(from)?;
                    poset.check_member(to)?;
                    if !poset.lt_raw(from, to) {
                        return Err(EngineError::InvalidPresentation {
                            reason: alloc::format!(
                                "arrow `{}` must go strictly upward, got {from} -> {to}",
                                g.name
                            ),
                        });
                    }
                }
                GeneratorDegree::Mixed { shift, from, to } => {
                    let (lat, fin) = mixed_factors(&poset)?;
                    if shift.len() != lat.rank().unwrap_or(0) {
                        return Err(EngineError::InvalidPresentation {
                            reason: alloc::format!("generator `{}` has a shift of wrong rank", g.name),
                        });
                    }
                    fin.check_member(from)?;
                    fin.check_member(to)?;
                    if shift.iter().any(|&c| c < 0)
                        || !fin.leq_raw(from, to)
                        || (shift.iter().all(|&c| c == 0) && from == to)
                    {
                        return Err(EngineError::InvalidPresentation {
                            reason: alloc::format!(
                                "generator `{}` must move strictly upward in shift or finite part",
                                g.name
                            ),
                        });
                    }
                }
            }
        }

        let alg = PresentedAlgebra {
            name: String::from(name),
            poset,
            field,
            generators,
            relations: Vec::new(),
            kind,
            limits,
            paths: Memo::new(),
            comps: Memo::new(),
        };

        let mut compiled = Vec::new();
        for (ri, r) in relations.into_iter().enumerate() {
            compiled.push(alg.compile_relation(ri, r)?);
        }
        let mut alg = alg;
        alg.relations = compiled;
        Ok(Arc::new(alg))
    }

    /// A translation-invariant algebra over ℤ^rank from a positively graded
    /// ring presentation: one index object per lattice point, with the
    /// ring's generators acting between them.
    pub fn from_graded_ring(
        name: &str,
        field: F,
        rank: usize,
        generators: Vec<(String, Vec<i64>)>,
        relations: Vec<RelationInput<F>>,
        limits: Limits,
    ) -> Result<Arc<Self>> {
        let poset = Poset::lattice(rank)?;
        let gens = generators
            .into_iter()
            .map(|(name, shift)| Generator { name, degree: GeneratorDegree::Shift(shift) })
            .collect();
        Self::new(name, poset, field, gens, relations, limits)
    }

    fn compile_relation(&self, ri: usize, r: RelationInput<F>) -> Result<Relation<F>> {
        let label = |r: &RelationInput<F>| match &r.span {
            RelationSpan::Shift(d) => alloc::format!("relation #{} at shift {:?}", ri + 1, d),
            RelationSpan::Arrow { from, to } => alloc::format!("relation #{} at {from} -> {to}", ri + 1),
            RelationSpan::Mixed { shift, from, to } => {
                alloc::format!("relation #{} at shift {:?}, {from} -> {to}", ri + 1, shift)
            }
        };
        let span_kind = match &r.span {
            RelationSpan::Shift(_) => PresKind::Invariant,
            RelationSpan::Arrow { .. } => PresKind::Arrowed,
            RelationSpan::Mixed { .. } => PresKind::Mixed,
        };
        if span_kind != self.kind {
            return Err(EngineError::InvalidPresentation {
                reason: alloc::format!("{}: span kind does not match the generators", label(&r)),
            });
        }
        match &r.span {
            RelationSpan::Shift(d) => {
                let rank = self.poset.rank().ok_or_else(|| EngineError::InvalidPresentation {
                    reason: "shift relations need a lattice poset".into(),
                })?;
                if d.len() != rank || d.iter().any(|&c| c < 0) || d.iter().all(|&c| c == 0) {
                    return Err(EngineError::InvalidPresentation {
                        reason: alloc::format!("{}: span must be a strictly positive shift", label(&r)),
                    });
                }
            }
            RelationSpan::Arrow { from, to } => {
                self.poset.check_member(from)?;
                self.poset.check_member(to)?;
                if !self.poset.lt_raw(from, to) {
                    return Err(EngineError::InvalidPresentation {
                        reason: alloc::format!("{}: span must go strictly upward", label(&r)),
                    });
                }
            }
            RelationSpan::Mixed { shift, from, to } => {
                let (lat, fin) = mixed_factors(&self.poset)?;
                let rank = lat.rank().unwrap_or(0);
                fin.check_member(from)?;
                fin.check_member(to)?;
                if shift.len() != rank
                    || shift.iter().any(|&c| c < 0)
                    || !fin.leq_raw(from, to)
                    || (shift.iter().all(|&c| c == 0) && from == to)
                {
                    return Err(EngineError::InvalidPresentation {
                        reason: alloc::format!("{}: span must move strictly upward", label(&r)),
                    });
                }
            }
        }
        let mut terms: Vec<(F::Elem, Word)> = Vec::new();
        for (c, names) in &r.terms {
            if self.field.is_zero(c) {
                continue;
            }
            let word = self.word_from_names(names)?;
            let homogeneous = match &r.span {
                RelationSpan::Shift(d) => self.word_span(&word) == Some(RelationSpan::Shift(d.clone())),
                RelationSpan::Arrow { from, to } => {
                    self.arrow_word_target(&word, from).as_ref() == Some(to)
                }
                RelationSpan::Mixed { shift, from, to } => {
                    matches!(self.mixed_word_walk(&word, from), Some((ws, wend)) if ws == *shift && wend == *to)
                }
            };
            if !homogeneous {
                return Err(EngineError::InvalidPresentation {
                    reason: alloc::format!("{}: inhomogeneous or non-composing term", label(&r)),
                });
            }
            match terms.iter_mut().find(|(_, w)| w == &word) {
                Some((acc, _)) => *acc = self.field.add(acc, c),
                None => terms.push((c.clone(), word)),
            }
        }
        terms.retain(|(c, _)| !self.field.is_zero(c));
        if terms.is_empty() {
            return Err(EngineError::InvalidPresentation {
                reason: alloc::format!("{}: all terms cancel", label(&r)),
            });
        }
        Ok(Relation { span: r.span, terms })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    pub fn word_from_names(&self, names: &[String]) -> Result<Word> {
        let mut idxs = Vec::with_capacity(names.len());
        for n in names {
            idxs.push(self.generator_index(n).ok_or_else(|| EngineError::InvalidPresentation {
                reason: alloc::format!("unknown generator `{n}`"),
            })?);
        }
        Ok(Word(idxs))
    }

    /// Total degree of a word, as a relation span (shift kind only).
    fn word_span(&self, w: &Word) -> Option<RelationSpan> {
        if self.kind != PresKind::Invariant {
            return None;
        }
        let rank = self.poset.rank()?;
        let mut total = vec![0i64; rank];
        for &g in &w.0 {
            if let GeneratorDegree::Shift(d) = &self.generators[g].degree {
                for (t, c) in total.iter_mut().zip(d.iter()) {
                    *t += c;
                }
            }
        }
        Some(RelationSpan::Shift(total))
    }

    /// Where an arrow word ends when started at `from`; `None` if it does
    /// not compose.
    fn arrow_word_target(&self, w: &Word, from: &IndexElement) -> Option<IndexElement> {
        let mut cur = from.clone();
        for &g in &w.0 {
            match &self.generators[g].degree {
                GeneratorDegree::Arrow { from: f, to } => {
                    if *f != cur {
                        return None;
                    }
                    cur = to.clone();
                }
                _ => return None,
            }
        }
        Some(cur)
    }

    /// Total shift and finite endpoint of a mixed word starting at the given
    /// finite-factor position; `None` if it does not compose.
    fn mixed_word_walk(&self, w: &Word, fin_start: &IndexElement) -> Option<(Vec<i64>, IndexElement)> {
        let rank = self.poset.product_parts()?.0.rank()?;
        let mut total = vec![0i64; rank];
        let mut cur = fin_start.clone();
        for &g in &w.0 {
            let GeneratorDegree::Mixed { shift, from, to } = &self.generators[g].degree else {
                return None;
            };
            if *from != cur {
                return None;
            }
            for (t, c) in total.iter_mut().zip(shift.iter()) {
                *t += c;
            }
            cur = to.clone();
        }
        Some((total, cur))
    }

    /// Where a word lands when anchored at `from`; `None` if it does not
    /// compose there.
    pub fn word_target(&self, w: &Word, from: &IndexElement) -> Option<IndexElement> {
        match self.kind {
            PresKind::Invariant => {
                let Some(RelationSpan::Shift(d)) = self.word_span(w) else { return None };
                let cs = from.coords()?;
                Some(IndexElement::Lattice(cs.iter().zip(d.iter()).map(|(x, s)| x + s).collect()))
            }
            PresKind::Arrowed => self.arrow_word_target(w, from),
            PresKind::Mixed => {
                let (lf, pf) = from.parts()?;
                let (shift, end) = self.mixed_word_walk(w, pf)?;
                let cs = lf.coords()?;
                Some(IndexElement::pair(
                    IndexElement::Lattice(cs.iter().zip(shift.iter()).map(|(x, s)| x + s).collect()),
                    end,
                ))
            }
        }
    }

    fn comp_key(&self, i: &IndexElement, j: &IndexElement) -> CompKey {
        match self.kind {
            PresKind::Invariant => {
                let (IndexElement::Lattice(a), IndexElement::Lattice(b)) = (i, j) else {
                    unreachable!("invariant algebras live on lattice posets");
                };
                CompKey::Shift(a.iter().zip(b.iter()).map(|(x, y)| y - x).collect())
            }
            PresKind::Arrowed => CompKey::Pair(i.clone(), j.clone()),
            PresKind::Mixed => {
                let ((la, pa), (lb, pb)) = (i.parts().unwrap(), j.parts().unwrap());
                let (ca, cb) = (la.coords().unwrap(), lb.coords().unwrap());
                CompKey::Mixed(
                    ca.iter().zip(cb.iter()).map(|(x, y)| y - x).collect(),
                    pa.clone(),
                    pb.clone(),
                )
            }
        }
    }

    fn paths_for(&self, key: &CompKey) -> Result<Arc<Vec<Word>>> {
        self.paths.get_or_try_insert_with(key, || {
            let mut out = Vec::new();
            let mut prefix = Vec::new();
            match key {
                CompKey::Shift(delta) => {
                    self.enumerate_shift_words(delta, &mut prefix, &mut out)?;
                }
                CompKey::Pair(i, j) => {
                    self.enumerate_arrow_words(i, j, &mut prefix, &mut out)?;
                }
                CompKey::Mixed(delta, p, q) => {
                    let fin = mixed_factors(&self.poset)?.1.clone();
                    self.enumerate_mixed_words(&fin, delta, p, q, &mut prefix, &mut out)?;
                }
            }
            out.sort();
            Ok(out)
        })
    }

    fn enumerate_shift_words(
        &self,
        remaining: &[i64],
        prefix: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if remaining.iter().all(|&c| c == 0) {
            if out.len() >= self.limits.max_paths {
                return Err(EngineError::LimitExceeded {
                    what: "path count",
                    used: out.len() + 1,
                    limit: self.limits.max_paths,
                });
            }
            out.push(Word(prefix.clone()));
            return Ok(());
        }
        for (gi, g) in self.generators.iter().enumerate() {
            let GeneratorDegree::Shift(d) = &g.degree else { continue };
            if d.iter().zip(remaining.iter()).all(|(a, b)| a <= b) {
                let next: Vec<i64> = remaining.iter().zip(d.iter()).map(|(r, a)| r - a).collect();
                prefix.push(gi);
                self.enumerate_shift_words(&next, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    fn enumerate_mixed_words(
        &self,
        fin: &Arc<Poset>,
        remaining: &[i64],
        at: &IndexElement,
        target: &IndexElement,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if remaining.iter().all(|&c| c == 0) && at == target {
            // No generator moves strictly downward, so nothing extends a
            // word that has already arrived.
            if out.len() >= self.limits.max_paths {
                return Err(EngineError::LimitExceeded {
                    what: "path count",
                    used: out.len() + 1,
                    limit: self.limits.max_paths,
                });
            }
            out.push(Word(prefix.clone()));
            return Ok(());
        }
        for (gi, g) in self.generators.iter().enumerate() {
            let GeneratorDegree::Mixed { shift, from, to } = &g.degree else { continue };
            if from == at
                && shift.iter().zip(remaining.iter()).all(|(a, b)| a <= b)
                && fin.leq_raw(to, target)
            {
                let next: Vec<i64> = remaining.iter().zip(shift.iter()).map(|(r, a)| r - a).collect();
                prefix.push(gi);
                self.enumerate_mixed_words(fin, &next, to, target, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    fn enumerate_arrow_words(
        &self,
        at: &IndexElement,
        target: &IndexElement,
        prefix: &mut Vec<usize>,
        out: &mut Vec<Word>,
    ) -> Result<()> {
        if at == target {
            if out.len() >= self.limits.max_paths {
                return Err(EngineError::LimitExceeded {
                    what: "path count",
                    used: out.len() + 1,
                    limit: self.limits.max_paths,
                });
            }
            out.push(Word(prefix.clone()));
            return Ok(());
        }
        for (gi, g) in self.generators.iter().enumerate() {
            let GeneratorDegree::Arrow { from, to } = &g.degree else { continue };
            if from == at && self.poset.leq_raw(to, target) {
                prefix.push(gi);
                self.enumerate_arrow_words(to, target, prefix, out)?;
                prefix.pop();
            }
        }
        Ok(())
    }

    /// The graded component `i -> j`.
    pub fn component(&self, i: &IndexElement, j: &IndexElement) -> Result<Arc<AlgebraComponent<F>>> {
        self.poset.check_member(i)?;
        self.poset.check_member(j)?;
        if !self.poset.leq_raw(i, j) {
            return Ok(Arc::new(AlgebraComponent {
                paths: Vec::new(),
                basis: Vec::new(),
                reductions: BTreeMap::new(),
            }));
        }
        if i == j {
            return Ok(Arc::new(AlgebraComponent {
                paths: vec![Word::empty()],
                basis: vec![0],
                reductions: BTreeMap::new(),
            }));
        }
        let key = self.comp_key(i, j);
        // The slice of relation consequences is anchored at (i, j) for arrow
        // presentations; for invariant ones everything depends on the shift
        // only, so the cache key collapses and we may anchor at i.
        let anchor_i = i.clone();
        let anchor_j = j.clone();
        self.comps.get_or_try_insert_with(&key, || self.build_component(&anchor_i, &anchor_j))
    }

    fn build_component(&self, i: &IndexElement, j: &IndexElement) -> Result<AlgebraComponent<F>> {
        let key = self.comp_key(i, j);
        let paths = self.paths_for(&key)?;
        if paths.is_empty() {
            return Ok(AlgebraComponent { paths: Vec::new(), basis: Vec::new(), reductions: BTreeMap::new() });
        }
        let mut ech = SparseEchelon::new(self.field.clone(), PivotScan::Reverse);
        for rel in &self.relations {
            self.insert_relation_slice(rel, i, j, &paths, &mut ech)?;
        }
        let (basis, reductions) = crate::linalg::quotient_reductions(&self.field, paths.len(), &ech);
        if basis.len() > self.limits.max_dim {
            return Err(EngineError::LimitExceeded {
                what: "component dimension",
                used: basis.len(),
                limit: self.limits.max_dim,
            });
        }
        Ok(AlgebraComponent { paths: (*paths).clone(), basis, reductions })
    }

    fn insert_relation_slice(
        &self,
        rel: &Relation<F>,
        i: &IndexElement,
        j: &IndexElement,
        paths: &[Word],
        ech: &mut SparseEchelon<F>,
    ) -> Result<()> {
        let position = |w: &Word| paths.binary_search(w).expect("consequence word is a listed path");
        match &rel.span {
            RelationSpan::Shift(s) => {
                let CompKey::Shift(delta) = self.comp_key(i, j) else { unreachable!() };
                let room: Vec<i64> = delta.iter().zip(s.iter()).map(|(d, r)| d - r).collect();
                if room.iter().any(|&c| c < 0) {
                    return Ok(());
                }
                for alpha in lattice_box(&room) {
                    let beta: Vec<i64> = room.iter().zip(alpha.iter()).map(|(r, a)| r - a).collect();
                    let left = self.paths_for(&CompKey::Shift(alpha))?;
                    let right = self.paths_for(&CompKey::Shift(beta))?;
                    for u in left.iter() {
                        for v in right.iter() {
                            let mut row: SparseVec<F> = BTreeMap::new();
                            for (c, w) in &rel.terms {
                                let full = u.concat(w).concat(v);
                                let pos = position(&full);
                                let e = row.entry(pos).or_insert_with(|| self.field.zero());
                                *e = self.field.add(e, c);
                            }
                            row.retain(|_, v| !self.field.is_zero(v));
                            ech.insert(row);
                        }
                    }
                }
            }
            RelationSpan::Arrow { from, to } => {
                if !(self.poset.leq_raw(i, from) && self.poset.leq_raw(to, j)) {
                    return Ok(());
                }
                let left = self.paths_for(&CompKey::Pair(i.clone(), from.clone()))?;
                let right = self.paths_for(&CompKey::Pair(to.clone(), j.clone()))?;
                for u in left.iter() {
                    for v in right.iter() {
                        let mut row: SparseVec<F> = BTreeMap::new();
                        for (c, w) in &rel.terms {
                            let full = u.concat(w).concat(v);
                            let pos = position(&full);
                            let e = row.entry(pos).or_insert_with(|| self.field.zero());
                            *e = self.field.add(e, c);
                        }
                        row.retain(|_, v| !self.field.is_zero(v));
                        ech.insert(row);
                    }
                }
            }
            RelationSpan::Mixed { shift, from, to } => {
                let CompKey::Mixed(delta, pa, pb) = self.comp_key(i, j) else { unreachable!() };
                let room: Vec<i64> = delta.iter().zip(shift.iter()).map(|(d, r)| d - r).collect();
                if room.iter().any(|&c| c < 0) {
                    return Ok(());
                }
                for alpha in lattice_box(&room) {
                    let beta: Vec<i64> = room.iter().zip(alpha.iter()).map(|(r, a)| r - a).collect();
                    let left = self.paths_for(&CompKey::Mixed(alpha, pa.clone(), from.clone()))?;
                    let right = self.paths_for(&CompKey::Mixed(beta, to.clone(), pb.clone()))?;
                    for u in left.iter() {
                        for v in right.iter() {
                            let mut row: SparseVec<F> = BTreeMap::new();
                            for (c, w) in &rel.terms {
                                let full = u.concat(w).concat(v);
                                let pos = position(&full);
                                let e = row.entry(pos).or_insert_with(|| self.field.zero());
                                *e = self.field.add(e, c);
                            }
                            row.retain(|_, v| !self.field.is_zero(v));
                            ech.insert(row);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Dimension of `i -> j` by degreewise induction over the interval:
    /// the span of all products through strictly intermediate indices,
    /// together with the declared generators landing exactly at `j`, must
    /// fill the component.  Returns that span's rank, which agrees with
    /// `component(i, j).dim()` precisely when the induction identity holds.
    pub fn dim_via_induction(&self, i: &IndexElement, j: &IndexElement) -> Result<usize> {
        self.poset.check_member(i)?;
        self.poset.check_member(j)?;
        if !self.poset.leq_raw(i, j) {
            return Ok(0);
        }
        if i == j {
            return Ok(1);
        }
        let comp = self.component(i, j)?;
        let mut span = SparseEchelon::new(self.field.clone(), PivotScan::Forward);
        for r in self.poset.interval(i, j, self.limits.max_window)? {
            if &r == i || &r == j {
                continue;
            }
            let left = self.component(i, &r)?;
            let right = self.component(&r, j)?;
            for &bu in &left.basis {
                for &bv in &right.basis {
                    let w = left.paths[bu].concat(&right.paths[bv]);
                    let pos = comp.path_position(&w).expect("product of paths is a path");
                    let mut dense = vec![self.field.zero(); comp.dim()];
                    comp.add_path(&self.field, &mut dense, pos, &self.field.one());
                    ech_insert_dense(&self.field, &mut span, &dense);
                }
            }
        }
        for gi in 0..self.generators.len() {
            if self.word_target(&Word(vec![gi]), i).as_ref() == Some(j) {
                let pos = comp.path_position(&Word(vec![gi])).expect("generator word is a path");
                let mut dense = vec![self.field.zero(); comp.dim()];
                comp.add_path(&self.field, &mut dense, pos, &self.field.one());
                ech_insert_dense(&self.field, &mut span, &dense);
            }
        }
        Ok(span.rank())
    }
}

fn ech_insert_dense<F: Field>(field: &F, ech: &mut SparseEchelon<F>, row: &[F::Elem]) -> bool {
    ech.insert(crate::linalg::dense_to_sparse(field, row))
}

/// Enumerate all lattice vectors `0 <= v <= hi` in odometer order.
fn lattice_box(hi: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = vec![0i64; hi.len()];
    loop {
        out.push(cur.clone());
        let mut k = hi.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                for c in cur.iter_mut().skip(k + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// An algebra given by explicit structure constants on a finite support.
#[derive(Debug)]
pub struct TableAlgebra<F: Field> {
    name: String,
    poset: Arc<Poset>,
    field: F,
    limits: Limits,
    support: Vec<IndexElement>,
    dims: BTreeMap<(IndexElement, IndexElement), usize>,
    labels: BTreeMap<(IndexElement, IndexElement), Vec<String>>,
    /// `(i, j, l) -> [k1][k2] ->` coordinates of the product in `i -> l`.
    table: BTreeMap<(IndexElement, IndexElement, IndexElement), Vec<Vec<Vec<F::Elem>>>>,
}

impl<F: Field> TableAlgebra<F> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        name: &str,
        poset: Arc<Poset>,
        field: F,
        limits: Limits,
        support: Vec<IndexElement>,
        dims: BTreeMap<(IndexElement, IndexElement), usize>,
        labels: BTreeMap<(IndexElement, IndexElement), Vec<String>>,
        table: BTreeMap<(IndexElement, IndexElement, IndexElement), Vec<Vec<Vec<F::Elem>>>>,
    ) -> Result<Arc<Self>> {
        for e in &support {
            poset.check_member(e)?;
        }
        for ((i, j), &d) in &dims {
            if i == j && d != 1 {
                return Err(EngineError::InvalidPresentation {
                    reason: alloc::format!("diagonal component at {i} must be one-dimensional, got {d}"),
                });
            }
            if i != j && !poset.lt_raw(i, j) && d != 0 {
                return Err(EngineError::InvalidPresentation {
                    reason: alloc::format!("component {i} -> {j} must vanish (indices not increasing)"),
                });
            }
            if let Some(ls) = labels.get(&(i.clone(), j.clone())) {
                if ls.len() != d {
                    return Err(EngineError::InvalidPresentation {
                        reason: alloc::format!("label count mismatch at {i} -> {j}"),
                    });
                }
            }
        }
        Ok(Arc::new(TableAlgebra { name: String::from(name), poset, field, limits, support, dims, labels, table }))
    }

    pub fn support(&self) -> &[IndexElement] {
        &self.support
    }

    fn dim_of(&self, i: &IndexElement, j: &IndexElement) -> usize {
        if i == j {
            return 1;
        }
        if !self.poset.lt_raw(i, j) {
            return 0;
        }
        self.dims.get(&(i.clone(), j.clone())).copied().unwrap_or(0)
    }

    fn label_of(&self, i: &IndexElement, j: &IndexElement, k: usize) -> String {
        if i == j {
            return "e".to_string();
        }
        self.labels
            .get(&(i.clone(), j.clone()))
            .and_then(|ls| ls.get(k).cloned())
            .unwrap_or_else(|| alloc::format!("b{k}"))
    }

    fn mul_basis(&self, i: &IndexElement, j: &IndexElement, l: &IndexElement, k1: usize, k2: usize) -> Vec<(usize, F::Elem)> {
        if i == j {
            return vec![(k2, self.field.one())];
        }
        if j == l {
            return vec![(k1, self.field.one())];
        }
        match self.table.get(&(i.clone(), j.clone(), l.clone())) {
            Some(t) => t[k1][k2]
                .iter()
                .enumerate()
                .filter(|(_, v)| !self.field.is_zero(v))
                .map(|(k, v)| (k, v.clone()))
                .collect(),
            None => Vec::new(),
        }
    }
}

/// Shared handle over the two algebra flavours.
#[derive(Debug)]
pub enum Algebra<F: Field> {
    Presented(Arc<PresentedAlgebra<F>>),
    Table(Arc<TableAlgebra<F>>),
}

impl<F: Field> Clone for Algebra<F> {
    fn clone(&self) -> Self {
        match self {
            Algebra::Presented(a) => Algebra::Presented(a.clone()),
            Algebra::Table(a) => Algebra::Table(a.clone()),
        }
    }
}

impl<F: Field> Algebra<F> {
    pub fn name(&self) -> &str {
        match self {
            Algebra::Presented(a) => &a.name,
            Algebra::Table(a) => &a.name,
        }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        match self {
            Algebra::Presented(a) => &a.poset,
            Algebra::Table(a) => &a.poset,
        }
    }

    pub fn field(&self) -> &F {
        match self {
            Algebra::Presented(a) => &a.field,
            Algebra::Table(a) => &a.field,
        }
    }

    pub fn limits(&self) -> &Limits {
        match self {
            Algebra::Presented(a) => &a.limits,
            Algebra::Table(a) => &a.limits,
        }
    }

    pub fn as_presented(&self) -> Option<&Arc<PresentedAlgebra<F>>> {
        match self {
            Algebra::Presented(a) => Some(a),
            Algebra::Table(_) => None,
        }
    }

    /// Dimension of the component `i -> j`.
    pub fn dim(&self, i: &IndexElement, j: &IndexElement) -> Result<usize> {
        match self {
            Algebra::Presented(a) => Ok(a.component(i, j)?.dim()),
            Algebra::Table(a) => {
                a.poset.check_member(i)?;
                a.poset.check_member(j)?;
                Ok(a.dim_of(i, j))
            }
        }
    }

    /// Display label of the `k`-th basis element of `i -> j`.
    pub fn basis_label(&self, i: &IndexElement, j: &IndexElement, k: usize) -> Result<String> {
        match self {
            Algebra::Presented(a) => {
                let comp = a.component(i, j)?;
                let pos = comp.basis[k];
                Ok(a.format_word(&comp.paths[pos]))
            }
            Algebra::Table(a) => Ok(a.label_of(i, j, k)),
        }
    }

    /// Product of basis elements, as sparse coordinates in `i -> l`.
    pub fn mul_basis(
        &self,
        i: &IndexElement,
        j: &IndexElement,
        l: &IndexElement,
        k1: usize,
        k2: usize,
    ) -> Result<Vec<(usize, F::Elem)>> {
        match self {
            Algebra::Presented(a) => {
                let left = a.component(i, j)?;
                let right = a.component(j, l)?;
                let out = a.component(i, l)?;
                let w = left.paths[left.basis[k1]].concat(&right.paths[right.basis[k2]]);
                let pos = out.path_position(&w).expect("product of paths is a path");
                let mut dense = vec![self.field().zero(); out.dim()];
                out.add_path(a.field(), &mut dense, pos, &self.field().one());
                Ok(dense
                    .into_iter()
                    .enumerate()
                    .filter(|(_, v)| !self.field().is_zero(v))
                    .collect())
            }
            Algebra::Table(a) => Ok(a.mul_basis(i, j, l, k1, k2)),
        }
    }

    pub fn zero_element(&self, from: &IndexElement, to: &IndexElement) -> Result<Element<F>> {
        let d = self.dim(from, to)?;
        Ok(Element { from: from.clone(), to: to.clone(), coords: vec![self.field().zero(); d] })
    }

    pub fn element(&self, from: &IndexElement, to: &IndexElement, coords: Vec<F::Elem>) -> Result<Element<F>> {
        let d = self.dim(from, to)?;
        if coords.len() != d {
            return Err(EngineError::DegreeMismatch {
                context: "element construction",
                detail: alloc::format!("expected {d} coordinates at {from} -> {to}, got {}", coords.len()),
            });
        }
        Ok(Element { from: from.clone(), to: to.clone(), coords })
    }

    /// The local unit at `i`.
    pub fn unit(&self, i: &IndexElement) -> Result<Element<F>> {
        self.poset().check_member(i)?;
        Ok(Element { from: i.clone(), to: i.clone(), coords: vec![self.field().one()] })
    }

    pub fn basis_element(&self, from: &IndexElement, to: &IndexElement, k: usize) -> Result<Element<F>> {
        let mut e = self.zero_element(from, to)?;
        e.coords[k] = self.field().one();
        Ok(e)
    }

    pub fn is_zero_element(&self, e: &Element<F>) -> bool {
        e.coords.iter().all(|c| self.field().is_zero(c))
    }

    pub fn add_elements(&self, a: &Element<F>, b: &Element<F>) -> Result<Element<F>> {
        if a.from != b.from || a.to != b.to {
            return Err(EngineError::DegreeMismatch {
                context: "element sum",
                detail: alloc::format!("{} -> {} vs {} -> {}", a.from, a.to, b.from, b.to),
            });
        }
        Ok(Element {
            from: a.from.clone(),
            to: a.to.clone(),
            coords: a.coords.iter().zip(b.coords.iter()).map(|(x, y)| self.field().add(x, y)).collect(),
        })
    }

    pub fn scale_element(&self, c: &F::Elem, a: &Element<F>) -> Element<F> {
        Element {
            from: a.from.clone(),
            to: a.to.clone(),
            coords: a.coords.iter().map(|x| self.field().mul(c, x)).collect(),
        }
    }

    /// Composition product; requires `a.to == b.from`.
    pub fn mul(&self, a: &Element<F>, b: &Element<F>) -> Result<Element<F>> {
        if a.to != b.from {
            return Err(EngineError::DegreeMismatch {
                context: "product",
                detail: alloc::format!("left ends at {}, right starts at {}", a.to, b.from),
            });
        }
        let mut out = self.zero_element(&a.from, &b.to)?;
        for (k1, c1) in a.coords.iter().enumerate() {
            if self.field().is_zero(c1) {
                continue;
            }
            for (k2, c2) in b.coords.iter().enumerate() {
                if self.field().is_zero(c2) {
                    continue;
                }
                let c = self.field().mul(c1, c2);
                for (k, v) in self.mul_basis(&a.from, &a.to, &b.to, k1, k2)? {
                    out.coords[k] = self.field().add_mul(&out.coords[k], &c, &v);
                }
            }
        }
        Ok(out)
    }

    /// A declared generator as an element anchored at `from`; for arrow and
    /// mixed kinds the anchor must match the generator's source.
    pub fn generator_element(&self, gen: usize, from: &IndexElement) -> Result<Element<F>> {
        let Algebra::Presented(a) = self else {
            return Err(EngineError::MissingInput { reason: "table algebras have no declared generators".into() });
        };
        let g = a.generators.get(gen).ok_or_else(|| EngineError::MissingInput {
            reason: alloc::format!("no generator #{gen}"),
        })?;
        a.poset.check_member(from)?;
        let to = a.word_target(&Word(vec![gen]), from).ok_or_else(|| EngineError::DegreeMismatch {
            context: "generator element",
            detail: alloc::format!("generator `{}` does not start at {from}", g.name),
        })?;
        let comp = a.component(from, &to)?;
        let pos = comp.path_position(&Word(vec![gen])).expect("generator word is a path");
        let mut coords = vec![a.field.zero(); comp.dim()];
        comp.add_path(&a.field, &mut coords, pos, &a.field.one());
        Ok(Element { from: from.clone(), to, coords })
    }

    /// Element from coefficient/word terms starting at `from` (presented only).
    pub fn element_from_words(
        &self,
        from: &IndexElement,
        terms: &[(F::Elem, Vec<String>)],
    ) -> Result<Element<F>> {
        let Algebra::Presented(a) = self else {
            return Err(EngineError::MissingInput { reason: "table algebras have no generator words".into() });
        };
        a.poset.check_member(from)?;
        let mut to: Option<IndexElement> = None;
        let mut compiled = Vec::new();
        for (c, names) in terms {
            let w = a.word_from_names(names)?;
            let target = a.word_target(&w, from).ok_or_else(|| EngineError::DegreeMismatch {
                context: "element term",
                detail: alloc::format!("word does not compose from {from}"),
            })?;
            match &to {
                None => to = Some(target),
                Some(t) if *t == target => {}
                Some(t) => {
                    return Err(EngineError::DegreeMismatch {
                        context: "element term",
                        detail: alloc::format!("terms end at both {t} and {target}"),
                    })
                }
            }
            compiled.push((c.clone(), w));
        }
        let to = to.ok_or_else(|| EngineError::MissingInput { reason: "element needs at least one term".into() })?;
        let comp = a.component(from, &to)?;
        let mut coords = vec![a.field.zero(); comp.dim()];
        for (c, w) in compiled {
            let pos = comp.path_position(&w).ok_or_else(|| EngineError::DegreeMismatch {
                context: "element term",
                detail: alloc::format!("word is not composable from {from}"),
            })?;
            comp.add_path(&a.field, &mut coords, pos, &c);
        }
        Ok(Element { from: from.clone(), to, coords })
    }

    /// Human form of an element over the component's basis labels.
    pub fn format_element(&self, e: &Element<F>) -> Result<String> {
        let field = self.field();
        let mut out = String::new();
        for (k, c) in e.coords.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            let label = self.basis_label(&e.from, &e.to, k)?;
            let formatted = field.format(c);
            let (sign, mag) = match formatted.strip_prefix('-') {
                Some(rest) => ("-", String::from(rest)),
                None => ("+", formatted),
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            if mag == "1" {
                out.push_str(&label);
            } else {
                out.push_str(&alloc::format!("{mag}*{label}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        Ok(out)
    }

    /// Is every diagonal component one-dimensional?  Presented algebras are
    /// connected by construction (the only diagonal word is the empty one);
    /// table algebras are checked entry by entry.
    pub fn check_connected(&self) -> crate::outcome::CheckOutcome<ConnectednessCertificate> {
        match self {
            Algebra::Presented(_) => crate::outcome::CheckOutcome::verified(
                None,
                ConnectednessCertificate { diagonal_dims: Vec::new() },
            ),
            Algebra::Table(a) => {
                let mut diag = Vec::new();
                for i in &a.support {
                    diag.push((i.clone(), a.dim_of(i, i)));
                }
                if let Some((i, d)) = diag.iter().find(|(_, d)| *d != 1) {
                    let cert = ConnectednessCertificate { diagonal_dims: vec![(i.clone(), *d)] };
                    return crate::outcome::CheckOutcome::refuted(None, cert);
                }
                crate::outcome::CheckOutcome::verified(None, ConnectednessCertificate { diagonal_dims: diag })
            }
        }
    }
}

/// Diagonal dimensions observed by a connectedness check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConnectednessCertificate {
    pub diagonal_dims: Vec<(IndexElement, usize)>,
}

impl<F: Field> PresentedAlgebra<F> {
    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn limits(&self) -> &Limits {
        &self.limits
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Translation-invariant in every poset direction (pure shift kind)?
    pub fn is_invariant(&self) -> bool {
        self.kind == PresKind::Invariant
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.0.is_empty() {
            return "e".to_string();
        }
        w.0.iter().map(|&g| self.generators[g].name.as_str()).collect::<Vec<_>>().join("*")
    }

    /// Target indices of the declared generators applicable at `i`.
    pub fn generator_targets_from(&self, i: &IndexElement) -> Result<Vec<(usize, IndexElement)>> {
        self.poset.check_member(i)?;
        let mut out = Vec::new();
        for gi in 0..self.generators.len() {
            if let Some(to) = self.word_target(&Word(vec![gi]), i) {
                out.push((gi, to));
            }
        }
        Ok(out)
    }
}

fn mixed_factors(poset: &Arc<Poset>) -> Result<(&Arc<Poset>, &Arc<Poset>)> {
    let (a, b) = poset.product_parts().ok_or_else(|| EngineError::InvalidPresentation {
        reason: "mixed generators need a lattice x finite product poset".into(),
    })?;
    if a.rank().is_none() || !b.is_finite() {
        return Err(EngineError::InvalidPresentation {
            reason: "mixed generators need the lattice factor first and a finite factor second".into(),
        });
    }
    Ok((a, b))
}

impl<F: Field> fmt::Display for Algebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_integer(n)
    }

    fn lat(cs: &[i64]) -> IndexElement {
        IndexElement::lattice(cs)
    }

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1u64;
        for i in 0..k {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    fn free_xy() -> Arc<PresentedAlgebra<Rationals>> {
        PresentedAlgebra::from_graded_ring(
            "free_xy",
            Rationals,
            2,
            alloc::vec![("x".to_string(), alloc::vec![1, 0]), ("y".to_string(), alloc::vec![0, 1])],
            alloc::vec![],
            Limits::default(),
        )
        .unwrap()
    }

    fn poly_xy() -> Arc<PresentedAlgebra<Rationals>> {
        PresentedAlgebra::from_graded_ring(
            "poly_xy",
            Rationals,
            2,
            alloc::vec![("x".to_string(), alloc::vec![1, 0]), ("y".to_string(), alloc::vec![0, 1])],
            alloc::vec![RelationInput {
                span: RelationSpan::Shift(alloc::vec![1, 1]),
                terms: alloc::vec![
                    (q(1), alloc::vec!["x".to_string(), "y".to_string()]),
                    (q(-1), alloc::vec!["y".to_string(), "x".to_string()]),
                ],
            }],
            Limits::default(),
        )
        .unwrap()
    }

    #[test]
    fn free_component_dims_are_binomial() {
        let a = Algebra::Presented(free_xy());
        for s in 0..=4i64 {
            for t in 0..=4i64 {
                let d = a.dim(&lat(&[0, 0]), &lat(&[s, t])).unwrap();
                assert_eq!(d as u64, binom((s + t) as u64, s as u64), "at ({s},{t})");
                // translation invariance
                assert_eq!(d, a.dim(&lat(&[-1, 2]), &lat(&[s - 1, t + 2])).unwrap());
            }
        }
        assert_eq!(a.dim(&lat(&[1, 0]), &lat(&[0, 0])).unwrap(), 0);
    }

    #[test]
    fn free_basis_order_is_len_then_declaration() {
        let a = Algebra::Presented(free_xy());
        assert_eq!(a.basis_label(&lat(&[0, 0]), &lat(&[1, 1]), 0).unwrap(), "x*y");
        assert_eq!(a.basis_label(&lat(&[0, 0]), &lat(&[1, 1]), 1).unwrap(), "y*x");
        let xy = a.mul(
            &a.generator_element(0, &lat(&[0, 0])).unwrap(),
            &a.generator_element(1, &lat(&[1, 0])).unwrap(),
        )
        .unwrap();
        assert_eq!(xy.coords, alloc::vec![q(1), q(0)]);
    }

    #[test]
    fn poly_components_collapse_to_dimension_one() {
        let a = Algebra::Presented(poly_xy());
        for s in 0..=4i64 {
            for t in 0..=4i64 {
                assert_eq!(a.dim(&lat(&[0, 0]), &lat(&[s, t])).unwrap(), 1, "at ({s},{t})");
            }
        }
        assert_eq!(a.basis_label(&lat(&[0, 0]), &lat(&[1, 1]), 0).unwrap(), "x*y");
        let x = a.generator_element(0, &lat(&[0, 0])).unwrap();
        let y_up = a.generator_element(1, &lat(&[1, 0])).unwrap();
        let y = a.generator_element(1, &lat(&[0, 0])).unwrap();
        let x_up = a.generator_element(0, &lat(&[0, 1])).unwrap();
        assert_eq!(a.mul(&x, &y_up).unwrap(), a.mul(&y, &x_up).unwrap());
    }

    #[test]
    fn q_twisted_normal_form() {
        // x*y = 2*y*x, so y*x reduces to (1/2)*x*y.
        let a = Algebra::Presented(
            PresentedAlgebra::from_graded_ring(
                "q_poly_xy",
                Rationals,
                2,
                alloc::vec![("x".to_string(), alloc::vec![1, 0]), ("y".to_string(), alloc::vec![0, 1])],
                alloc::vec![RelationInput {
                    span: RelationSpan::Shift(alloc::vec![1, 1]),
                    terms: alloc::vec![
                        (q(1), alloc::vec!["x".to_string(), "y".to_string()]),
                        (q(-2), alloc::vec!["y".to_string(), "x".to_string()]),
                    ],
                }],
                Limits::default(),
            )
            .unwrap(),
        );
        let y = a.generator_element(1, &lat(&[0, 0])).unwrap();
        let x_up = a.generator_element(0, &lat(&[0, 1])).unwrap();
        let yx = a.mul(&y, &x_up).unwrap();
        assert_eq!(yx.coords, alloc::vec![BigRational::new(1.into(), 2.into())]);
        assert_eq!(a.format_element(&yx).unwrap(), "1/2*x*y");
        assert_eq!(a.dim(&lat(&[0, 0]), &lat(&[2, 2])).unwrap(), 1);
    }

    #[test]
    fn q_twisted_over_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let a = Algebra::Presented(
            PresentedAlgebra::from_graded_ring(
                "q_poly_xy",
                f.clone(),
                2,
                alloc::vec![("x".to_string(), alloc::vec![1, 0]), ("y".to_string(), alloc::vec![0, 1])],
                alloc::vec![RelationInput {
                    span: RelationSpan::Shift(alloc::vec![1, 1]),
                    terms: alloc::vec![
                        (1, alloc::vec!["x".to_string(), "y".to_string()]),
                        (f.from_integer(-2), alloc::vec!["y".to_string(), "x".to_string()]),
                    ],
                }],
                Limits::default(),
            )
            .unwrap(),
        );
        let y = a.generator_element(1, &lat(&[0, 0])).unwrap();
        let x_up = a.generator_element(0, &lat(&[0, 1])).unwrap();
        // 1/2 = 3 mod 5
        assert_eq!(a.mul(&y, &x_up).unwrap().coords, alloc::vec![3]);
    }

    #[test]
    fn redundant_generator_is_kept_as_basis() {
        // z duplicates x*y; the relation z - x*y pivots on the longer word,
        // so z itself survives in the basis and x*y reduces to it.
        let a = Algebra::Presented(
            PresentedAlgebra::from_graded_ring(
                "with_z",
                Rationals,
                2,
                alloc::vec![
                    ("x".to_string(), alloc::vec![1, 0]),
                    ("y".to_string(), alloc::vec![0, 1]),
                    ("z".to_string(), alloc::vec![1, 1]),
                ],
                alloc::vec![RelationInput {
                    span: RelationSpan::Shift(alloc::vec![1, 1]),
                    terms: alloc::vec![
                        (q(1), alloc::vec!["z".to_string()]),
                        (q(-1), alloc::vec!["x".to_string(), "y".to_string()]),
                    ],
                }],
                Limits::default(),
            )
            .unwrap(),
        );
        assert_eq!(a.dim(&lat(&[0, 0]), &lat(&[1, 1])).unwrap(), 2);
        assert_eq!(a.basis_label(&lat(&[0, 0]), &lat(&[1, 1]), 0).unwrap(), "z");
        assert_eq!(a.basis_label(&lat(&[0, 0]), &lat(&[1, 1]), 1).unwrap(), "y*x");
        let x = a.generator_element(0, &lat(&[0, 0])).unwrap();
        let y_up = a.generator_element(1, &lat(&[1, 0])).unwrap();
        assert_eq!(a.mul(&x, &y_up).unwrap().coords, alloc::vec![q(1), q(0)]);
    }

    #[test]
    fn arrow_algebra_on_a_chain() {
        let p = Poset::finite(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let at = IndexElement::atom;
        let gens = alloc::vec![
            Generator { name: "f".into(), degree: GeneratorDegree::Arrow { from: at("a"), to: at("b") } },
            Generator { name: "f2".into(), degree: GeneratorDegree::Arrow { from: at("a"), to: at("b") } },
            Generator { name: "g".into(), degree: GeneratorDegree::Arrow { from: at("b"), to: at("c") } },
            Generator { name: "g2".into(), degree: GeneratorDegree::Arrow { from: at("b"), to: at("c") } },
        ];
        let rels = alloc::vec![RelationInput {
            span: RelationSpan::Arrow { from: at("a"), to: at("c") },
            terms: alloc::vec![
                (q(1), alloc::vec!["f".to_string(), "g".to_string()]),
                (q(-1), alloc::vec!["f2".to_string(), "g2".to_string()]),
            ],
        }];
        let a = Algebra::Presented(
            PresentedAlgebra::new("square", p, Rationals, gens, rels, Limits::default()).unwrap(),
        );
        assert_eq!(a.dim(&at("a"), &at("b")).unwrap(), 2);
        assert_eq!(a.dim(&at("a"), &at("c")).unwrap(), 3);
        assert_eq!(a.dim(&at("a"), &at("a")).unwrap(), 1);
        assert_eq!(a.dim(&at("b"), &at("a")).unwrap(), 0);
    }

    #[test]
    fn mixed_product_algebra_with_commuting_squares() {
        let zc = Poset::product(
            Poset::lattice(1).unwrap(),
            Poset::finite(&["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap(),
        );
        let at = |n: i64, p: &str| IndexElement::pair(lat(&[n]), IndexElement::atom(p));
        let md = |s: i64, f: &str, t: &str| GeneratorDegree::Mixed {
            shift: alloc::vec![s],
            from: IndexElement::atom(f),
            to: IndexElement::atom(t),
        };
        let gens = alloc::vec![
            Generator { name: "ta".into(), degree: md(1, "a", "a") },
            Generator { name: "tb".into(), degree: md(1, "b", "b") },
            Generator { name: "tc".into(), degree: md(1, "c", "c") },
            Generator { name: "f".into(), degree: md(0, "a", "b") },
            Generator { name: "g".into(), degree: md(0, "b", "c") },
        ];
        let rels = alloc::vec![
            RelationInput {
                span: RelationSpan::Mixed {
                    shift: alloc::vec![1],
                    from: IndexElement::atom("a"),
                    to: IndexElement::atom("b"),
                },
                terms: alloc::vec![
                    (q(1), alloc::vec!["f".into(), "tb".into()]),
                    (q(-1), alloc::vec!["ta".into(), "f".into()]),
                ],
            },
            RelationInput {
                span: RelationSpan::Mixed {
                    shift: alloc::vec![1],
                    from: IndexElement::atom("b"),
                    to: IndexElement::atom("c"),
                },
                terms: alloc::vec![
                    (q(1), alloc::vec!["g".into(), "tc".into()]),
                    (q(-1), alloc::vec!["tb".into(), "g".into()]),
                ],
            },
        ];
        let a = Algebra::Presented(
            PresentedAlgebra::new("chain3", zc, Rationals, gens, rels, Limits::default()).unwrap(),
        );
        // squares commute, so every component collapses to one path class
        for n in 0..=3i64 {
            assert_eq!(a.dim(&at(0, "a"), &at(n, "a")).unwrap(), 1);
            assert_eq!(a.dim(&at(0, "a"), &at(n, "b")).unwrap(), 1);
            assert_eq!(a.dim(&at(0, "a"), &at(n, "c")).unwrap(), 1);
        }
        assert_eq!(a.dim(&at(0, "b"), &at(2, "a")).unwrap(), 0);
        assert_eq!(a.dim(&at(5, "a"), &at(7, "c")).unwrap(), 1);
        let f0 = a.generator_element(3, &at(0, "a")).unwrap();
        let tb = a.generator_element(1, &at(0, "b")).unwrap();
        let ta = a.generator_element(0, &at(0, "a")).unwrap();
        let f1 = a.generator_element(3, &at(1, "a")).unwrap();
        assert_eq!(a.mul(&f0, &tb).unwrap(), a.mul(&ta, &f1).unwrap());
        assert_eq!(a.basis_label(&at(0, "a"), &at(1, "b"), 0).unwrap(), "ta*f");
    }

    #[test]
    fn induction_dimension_agrees() {
        for alg in [free_xy(), poly_xy()] {
            let a = Algebra::Presented(alg.clone());
            for s in 0..=3i64 {
                for t in 0..=3i64 {
                    let via = alg.dim_via_induction(&lat(&[0, 0]), &lat(&[s, t])).unwrap();
                    let direct = a.dim(&lat(&[0, 0]), &lat(&[s, t])).unwrap();
                    assert_eq!(via, direct, "{} at ({s},{t})", alg.name());
                }
            }
        }
    }

    #[test]
    fn presentation_validation_rejects_bad_input() {
        let zero_gen = PresentedAlgebra::from_graded_ring(
            "bad",
            Rationals,
            2,
            alloc::vec![("x".to_string(), alloc::vec![0, 0])],
            alloc::vec![],
            Limits::default(),
        );
        assert!(matches!(zero_gen, Err(EngineError::InvalidPresentation { .. })));

        let inhomogeneous = PresentedAlgebra::from_graded_ring(
            "bad",
            Rationals,
            2,
            alloc::vec![("x".to_string(), alloc::vec![1, 0]), ("y".to_string(), alloc::vec![0, 1])],
            alloc::vec![RelationInput {
                span: RelationSpan::Shift(alloc::vec![1, 1]),
                terms: alloc::vec![(q(1), alloc::vec!["x".to_string()])],
            }],
            Limits::default(),
        );
        assert!(matches!(inhomogeneous, Err(EngineError::InvalidPresentation { .. })));
    }

    #[test]
    fn path_limit_is_enforced() {
        let a = PresentedAlgebra::from_graded_ring(
            "free_xy",
            Rationals,
            2,
            alloc::vec![("x".to_string(), alloc::vec![1, 0]), ("y".to_string(), alloc::vec![0, 1])],
            alloc::vec![],
            Limits { max_paths: 10, ..Limits::default() },
        )
        .unwrap();
        let r = Algebra::Presented(a).dim(&lat(&[0, 0]), &lat(&[3, 3]));
        assert!(matches!(r, Err(EngineError::LimitExceeded { what: "path count", .. })));
    }

    #[test]
    fn element_formatting() {
        let a = Algebra::Presented(free_xy());
        let e = a
            .element_from_words(
                &lat(&[0, 0]),
                &[
                    (q(1), alloc::vec!["x".to_string(), "y".to_string()]),
                    (q(-3), alloc::vec!["y".to_string(), "x".to_string()]),
                ],
            )
            .unwrap();
        assert_eq!(a.format_element(&e).unwrap(), "x*y - 3*y*x");
        assert_eq!(a.format_element(&a.unit(&lat(&[0, 0])).unwrap()).unwrap(), "e");
        let z = a.zero_element(&lat(&[0, 0]), &lat(&[1, 0])).unwrap();
        assert_eq!(a.format_element(&z).unwrap(), "0");
    }

    #[test]
    fn connectedness_checks() {
        assert!(Algebra::Presented(free_xy()).check_connected().is_verified());
    }
}
