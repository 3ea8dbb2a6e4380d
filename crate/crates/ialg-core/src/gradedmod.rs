//! Graded right modules over an indexed algebra.
//!
//! A module here is pointwise finite-dimensional and window-computable: it
//! answers questions component by component, with exact linear algebra over
//! the algebra's field.  The flavours are the free modules `P_i = e_i·A`,
//! finitely presented quotients of sums of those, simple modules, tails
//! `M_{>d}`, and quotients by window-torsion.
//!
//! Conventions shared with the algebra layer: every quotient picks the
//! earliest surviving coordinate positions as its basis (pivots fall on the
//! latest positions), so bases and labels are deterministic.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::Algebra;
use crate::cache::Memo;
use crate::error::{EngineError, Result};
use crate::field::Field;
use crate::linalg::{
    left_kernel, quotient_reductions, sparse_to_dense, Echelon, Matrix, PivotScan, SparseEchelon,
    SparseVec,
};
use crate::poset::{IndexElement, Window};

#[derive(Clone, Debug)]
pub struct ModuleGenerator {
    pub name: String,
    pub at: IndexElement,
}

/// A module relation: an element of the free cover `⊕_k g_k·A`, homogeneous
/// at index `at`.  Each term pairs a generator with dense coordinates over
/// the algebra component from that generator's index to `at`.
#[derive(Clone, Debug)]
pub struct PresRelation<F: Field> {
    pub at: IndexElement,
    pub terms: Vec<(usize, Vec<F::Elem>)>,
}

#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    pub gens: Vec<ModuleGenerator>,
    pub rels: Vec<PresRelation<F>>,
}

/// One graded component of a module.  Quotient components divide a concrete
/// coordinate space (the "cover": generator blocks for presented modules,
/// the base module's coordinates for quotients) by an eliminated span.
/// Kernel components are instead submodules of the cover, stored as fully
/// reduced canonical rows.
#[derive(Debug)]
pub struct ModComp<F: Field> {
    /// Block start offsets per cover block, plus the total as last entry.
    pub offsets: Vec<usize>,
    /// Surviving cover positions (quotients) or canonical-row pivot
    /// positions (kernels), ascending; their count is the dimension.
    pub basis: Vec<usize>,
    reductions: BTreeMap<usize, Vec<(usize, F::Elem)>>,
    /// Canonical rows over the cover, kernel components only.  Fully reduced
    /// with pivots on the latest coordinates, so a cover vector inside the
    /// span has its coefficients sitting at the pivot positions.
    rows: Vec<Vec<F::Elem>>,
    pub labels: Vec<String>,
}

impl<F: Field> ModComp<F> {
    fn identity(offsets: Vec<usize>, labels: Vec<String>) -> Self {
        let total = *offsets.last().unwrap_or(&0);
        ModComp {
            offsets,
            basis: (0..total).collect(),
            reductions: BTreeMap::new(),
            rows: Vec::new(),
            labels,
        }
    }

    fn empty() -> Self {
        ModComp {
            offsets: vec![0],
            basis: Vec::new(),
            reductions: BTreeMap::new(),
            rows: Vec::new(),
            labels: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// Canonical rows of a kernel component over its cover; empty for
    /// quotient components.
    pub fn kernel_rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }

    /// Which cover block and in-block position a cover position belongs to.
    pub fn unflatten(&self, pos: usize) -> (usize, usize) {
        let block = self.offsets.partition_point(|&o| o <= pos) - 1;
        (block, pos - self.offsets[block])
    }

    /// Accumulate `c` times the image of cover position `pos` into
    /// basis-coordinate vector `acc`.
    pub fn add_position(&self, field: &F, acc: &mut [F::Elem], pos: usize, c: &F::Elem) {
        if let Ok(b) = self.basis.binary_search(&pos) {
            acc[b] = field.add(&acc[b], c);
        } else if let Some(expansion) = self.reductions.get(&pos) {
            for (b, v) in expansion {
                acc[*b] = field.add_mul(&acc[*b], c, v);
            }
        } else {
            unreachable!("every cover position is basis or eliminated");
        }
    }

    /// Image of a sparse cover vector in basis coordinates.
    pub fn project(&self, field: &F, cover: &SparseVec<F>) -> Vec<F::Elem> {
        let mut acc = vec![field.zero(); self.dim()];
        for (&pos, c) in cover {
            self.add_position(field, &mut acc, pos, c);
        }
        acc
    }
}

#[derive(Debug)]
enum ModuleKind<F: Field> {
    Free { at: IndexElement },
    Presented { pres: Presentation<F> },
    Simple { at: IndexElement },
    Tail { base: Arc<Module<F>>, cutoff: IndexElement, strict: bool },
    TorsionQuotient { base: Arc<Module<F>>, window: Window },
    /// Kernel of a map from a finite free cover into `target`, the map given
    /// by one image per cover generator.
    MapKernel { gens: Vec<ModuleGenerator>, images: Vec<Vec<F::Elem>>, target: Arc<Module<F>> },
}

/// A degreewise map `⊕_k P_{gens[k].at} -> target`, determined by the image
/// of each cover generator.
#[derive(Clone, Debug)]
pub struct ModuleMap<F: Field> {
    pub name: String,
    pub gens: Vec<ModuleGenerator>,
    /// Coordinates of each generator's image in `target` at that generator's
    /// index.
    pub images: Vec<Vec<F::Elem>>,
    pub target: Arc<Module<F>>,
}

impl<F: Field> ModuleMap<F> {
    pub fn kernel(&self, name: &str) -> Result<Arc<Module<F>>> {
        Module::map_kernel(self.gens.clone(), self.images.clone(), &self.target, name)
    }
}

/// A graded right module, evaluated lazily component by component.
#[derive(Debug)]
pub struct Module<F: Field> {
    name: String,
    algebra: Algebra<F>,
    kind: ModuleKind<F>,
    comps: Memo<IndexElement, Arc<ModComp<F>>>,
}

impl<F: Field> Module<F> {
    /// The free module `P_i = e_i·A`.
    pub fn free(algebra: Algebra<F>, at: &IndexElement, name: &str) -> Result<Arc<Self>> {
        algebra.poset().check_member(at)?;
        Ok(Arc::new(Module {
            name: String::from(name),
            algebra,
            kind: ModuleKind::Free { at: at.clone() },
            comps: Memo::new(),
        }))
    }

    /// The simple module supported at one index.
    pub fn simple(algebra: Algebra<F>, at: &IndexElement, name: &str) -> Result<Arc<Self>> {
        algebra.poset().check_member(at)?;
        Ok(Arc::new(Module {
            name: String::from(name),
            algebra,
            kind: ModuleKind::Simple { at: at.clone() },
            comps: Memo::new(),
        }))
    }

    /// A finitely presented module.
    pub fn presented(algebra: Algebra<F>, pres: Presentation<F>, name: &str) -> Result<Arc<Self>> {
        for g in &pres.gens {
            algebra.poset().check_member(&g.at)?;
        }
        for (ri, r) in pres.rels.iter().enumerate() {
            algebra.poset().check_member(&r.at)?;
            if r.terms.is_empty() {
                return Err(EngineError::InvalidPresentation {
                    reason: alloc::format!("module relation #{} has no terms", ri + 1),
                });
            }
            for (k, coords) in &r.terms {
                let g = pres.gens.get(*k).ok_or_else(|| EngineError::InvalidPresentation {
                    reason: alloc::format!("module relation #{} uses unknown generator #{k}", ri + 1),
                })?;
                let want = algebra.dim(&g.at, &r.at)?;
                if coords.len() != want {
                    return Err(EngineError::InvalidPresentation {
                        reason: alloc::format!(
                            "module relation #{}: term for `{}` has {} coordinates, component {} -> {} has dimension {want}",
                            ri + 1,
                            g.name,
                            coords.len(),
                            g.at,
                            r.at
                        ),
                    });
                }
            }
        }
        Ok(Arc::new(Module {
            name: String::from(name),
            algebra,
            kind: ModuleKind::Presented { pres },
            comps: Memo::new(),
        }))
    }

    /// The tail of a module above a cutoff: components at `u > cutoff`
    /// (or `u >= cutoff` when not strict), zero elsewhere.
    pub fn tail(base: &Arc<Module<F>>, cutoff: &IndexElement, strict: bool, name: &str) -> Result<Arc<Self>> {
        base.algebra.poset().check_member(cutoff)?;
        Ok(Arc::new(Module {
            name: String::from(name),
            algebra: base.algebra.clone(),
            kind: ModuleKind::Tail { base: base.clone(), cutoff: cutoff.clone(), strict },
            comps: Memo::new(),
        }))
    }

    /// The quotient of a module by its torsion approximant over a window.
    /// Only components inside that window can be asked for.
    pub fn torsion_quotient(base: &Arc<Module<F>>, window: &Window, name: &str) -> Result<Arc<Self>> {
        Ok(Arc::new(Module {
            name: String::from(name),
            algebra: base.algebra.clone(),
            kind: ModuleKind::TorsionQuotient { base: base.clone(), window: window.clone() },
            comps: Memo::new(),
        }))
    }

    /// The kernel of the map `⊕_k P_{gens[k].at} -> target` sending the
    /// `k`-th cover generator to `images[k]`.
    pub fn map_kernel(
        gens: Vec<ModuleGenerator>,
        images: Vec<Vec<F::Elem>>,
        target: &Arc<Module<F>>,
        name: &str,
    ) -> Result<Arc<Self>> {
        if gens.len() != images.len() {
            return Err(EngineError::InvalidPresentation {
                reason: alloc::format!("{} generators but {} images", gens.len(), images.len()),
            });
        }
        for (g, img) in gens.iter().zip(&images) {
            target.algebra.poset().check_member(&g.at)?;
            let want = target.dim(&g.at)?;
            if img.len() != want {
                return Err(EngineError::InvalidPresentation {
                    reason: alloc::format!(
                        "image of `{}` has {} coordinates, target component at {} has dimension {want}",
                        g.name,
                        img.len(),
                        g.at
                    ),
                });
            }
        }
        Ok(Arc::new(Module {
            name: String::from(name),
            algebra: target.algebra.clone(),
            kind: ModuleKind::MapKernel { gens, images, target: target.clone() },
            comps: Memo::new(),
        }))
    }

    /// First syzygies of a presented module: the kernel of its own defining
    /// cover map.
    pub fn syzygies(base: &Arc<Module<F>>, name: &str) -> Result<Arc<Self>> {
        let pres = base.presentation().ok_or_else(|| EngineError::MissingInput {
            reason: "syzygies need a presented base module".into(),
        })?;
        let gens = pres.gens.clone();
        let mut images = Vec::with_capacity(gens.len());
        for (k, g) in gens.iter().enumerate() {
            let comp = base.component(&g.at)?;
            let unit: SparseVec<F> =
                [(comp.offsets[k], base.field().one())].into_iter().collect();
            images.push(comp.project(base.field(), &unit));
        }
        Module::map_kernel(gens, images, base, name)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn algebra(&self) -> &Algebra<F> {
        &self.algebra
    }

    fn field(&self) -> &F {
        self.algebra.field()
    }

    pub fn presentation(&self) -> Option<&Presentation<F>> {
        match &self.kind {
            ModuleKind::Presented { pres } => Some(pres),
            _ => None,
        }
    }

    /// A finite presentation compatible with this module's component layout:
    /// the declared one for presented modules, a single free generator for
    /// `P_i`, and the generator-annihilating quotient for simples.  Other
    /// kinds have no finite presentation available.
    pub fn implicit_presentation(&self) -> Result<Presentation<F>> {
        match &self.kind {
            ModuleKind::Presented { pres } => Ok(pres.clone()),
            ModuleKind::Free { at } => Ok(Presentation {
                gens: vec![ModuleGenerator { name: String::from("g"), at: at.clone() }],
                rels: Vec::new(),
            }),
            ModuleKind::Simple { at } => {
                let Some(pa) = self.algebra.as_presented() else {
                    return Err(EngineError::MissingInput {
                        reason: "simple modules over table algebras have no derived presentation".into(),
                    });
                };
                // Every positive-length word factors through a first letter,
                // so killing each applicable generator kills the whole tail.
                let mut rels = Vec::new();
                for (gi, _) in pa.generator_targets_from(at)? {
                    let e = self.algebra.generator_element(gi, at)?;
                    rels.push(PresRelation { at: e.to.clone(), terms: vec![(0, e.coords.clone())] });
                }
                Ok(Presentation {
                    gens: vec![ModuleGenerator { name: String::from("g"), at: at.clone() }],
                    rels,
                })
            }
            _ => Err(EngineError::MissingInput {
                reason: alloc::format!("module {} has no finite presentation available", self.name),
            }),
        }
    }

    /// Indices to anchor sweep windows at: where the module's generators
    /// (or its truncation cutoff) sit.
    pub fn anchor_indices(&self) -> Vec<IndexElement> {
        match &self.kind {
            ModuleKind::Free { at } | ModuleKind::Simple { at } => vec![at.clone()],
            ModuleKind::Presented { pres } => {
                let mut out: Vec<IndexElement> = Vec::new();
                for g in &pres.gens {
                    if !out.contains(&g.at) {
                        out.push(g.at.clone());
                    }
                }
                out
            }
            ModuleKind::Tail { cutoff, .. } => vec![cutoff.clone()],
            ModuleKind::TorsionQuotient { base, .. } => base.anchor_indices(),
            ModuleKind::MapKernel { gens, .. } => {
                let mut out: Vec<IndexElement> = Vec::new();
                for g in gens {
                    if !out.contains(&g.at) {
                        out.push(g.at.clone());
                    }
                }
                out
            }
        }
    }

    pub fn component(&self, j: &IndexElement) -> Result<Arc<ModComp<F>>> {
        self.algebra.poset().check_member(j)?;
        let owned = j.clone();
        self.comps
            .get_or_try_insert_with(&owned, || self.build_component(j).map(Arc::new))
            .map(|arc| (*arc).clone())
    }

    pub fn dim(&self, j: &IndexElement) -> Result<usize> {
        Ok(self.component(j)?.dim())
    }

    pub fn basis_label(&self, j: &IndexElement, k: usize) -> Result<String> {
        let comp = self.component(j)?;
        Ok(comp.labels[k].clone())
    }

    fn build_component(&self, j: &IndexElement) -> Result<ModComp<F>> {
        match &self.kind {
            ModuleKind::Free { at } => {
                let d = self.algebra.dim(at, j)?;
                let mut labels = Vec::with_capacity(d);
                for k in 0..d {
                    labels.push(self.algebra.basis_label(at, j, k)?);
                }
                Ok(ModComp::identity(vec![0, d], labels))
            }
            ModuleKind::Simple { at } => {
                if at == j {
                    Ok(ModComp::identity(vec![0, 1], vec![String::from("e")]))
                } else {
                    Ok(ModComp::empty())
                }
            }
            ModuleKind::Presented { pres } => self.build_presented_component(pres, j),
            ModuleKind::Tail { base, cutoff, strict } => {
                let inside = self.algebra.poset().leq_raw(cutoff, j) && !(*strict && cutoff == j);
                if inside {
                    base.component(j)
                        .map(|arc| ModComp {
                            offsets: arc.offsets.clone(),
                            basis: arc.basis.clone(),
                            reductions: arc.reductions.clone(),
                            rows: arc.rows.clone(),
                            labels: arc.labels.clone(),
                        })
                } else {
                    Ok(ModComp::empty())
                }
            }
            ModuleKind::TorsionQuotient { base, window } => {
                if !window.contains(j) {
                    return Err(EngineError::InvalidWindow {
                        reason: alloc::format!("index {j} lies outside the torsion window {window}"),
                    });
                }
                let rows = torsion_rows(base, window, j)?;
                let base_comp = base.component(j)?;
                let mut ech = SparseEchelon::new(self.field().clone(), PivotScan::Reverse);
                for r in &rows {
                    ech.insert(crate::linalg::dense_to_sparse(self.field(), r));
                }
                let (basis, reductions) = quotient_reductions(self.field(), base_comp.dim(), &ech);
                let labels = basis.iter().map(|&p| base_comp.labels[base_comp.basis[p]].clone()).collect();
                Ok(ModComp {
                    offsets: vec![0, base_comp.dim()],
                    basis,
                    reductions,
                    rows: Vec::new(),
                    labels,
                })
            }
            ModuleKind::MapKernel { gens, images, target } => {
                self.build_kernel_component(gens, images, target, j)
            }
        }
    }

    fn build_kernel_component(
        &self,
        gens: &[ModuleGenerator],
        images: &[Vec<F::Elem>],
        target: &Arc<Module<F>>,
        j: &IndexElement,
    ) -> Result<ModComp<F>> {
        let field = self.field();
        let mut offsets = vec![0usize];
        for g in gens {
            offsets.push(offsets.last().unwrap() + self.algebra.dim(&g.at, j)?);
        }
        let total = *offsets.last().unwrap();
        if total == 0 {
            return Ok(ModComp::empty());
        }
        let dim_t = target.dim(j)?;
        // One evaluation row per cover position: the image of g_k · (s-th
        // basis element of A_{g_k.at, j}) in the target component.
        let mut ev: Vec<SparseVec<F>> = Vec::with_capacity(total);
        for (k, g) in gens.iter().enumerate() {
            let d = offsets[k + 1] - offsets[k];
            for s in 0..d {
                let mut acc: SparseVec<F> = BTreeMap::new();
                for (t, c) in images[k].iter().enumerate() {
                    if field.is_zero(c) {
                        continue;
                    }
                    for (u, v) in target.act_basis(&g.at, j, t, s)? {
                        let e = acc.entry(u).or_insert_with(|| field.zero());
                        *e = field.add_mul(e, c, &v);
                    }
                }
                acc.retain(|_, v| !field.is_zero(v));
                ev.push(acc);
            }
        }
        let kernel = left_kernel(field, dim_t, &ev);
        let mut ech = Echelon::new(field.clone(), total, PivotScan::Reverse);
        for v in kernel {
            ech.insert(v);
        }
        let rows = ech.canonical_rows();
        let mut basis = Vec::with_capacity(rows.len());
        let mut labels = Vec::with_capacity(rows.len());
        for r in &rows {
            let p = (0..total).rev().find(|&p| !field.is_zero(&r[p])).expect("canonical row is nonzero");
            let block = offsets.partition_point(|&o| o <= p) - 1;
            let s = p - offsets[block];
            let alg_label = self.algebra.basis_label(&gens[block].at, j, s)?;
            labels.push(if alg_label == "e" {
                gens[block].name.clone()
            } else {
                alloc::format!("{}*{}", gens[block].name, alg_label)
            });
            basis.push(p);
        }
        Ok(ModComp { offsets, basis, reductions: BTreeMap::new(), rows, labels })
    }

    fn build_presented_component(&self, pres: &Presentation<F>, j: &IndexElement) -> Result<ModComp<F>> {
        let field = self.field();
        let mut offsets = vec![0usize];
        for g in &pres.gens {
            let d = self.algebra.dim(&g.at, j)?;
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = *offsets.last().unwrap();
        if total == 0 {
            return Ok(ModComp::empty());
        }
        let mut ech = SparseEchelon::new(field.clone(), PivotScan::Reverse);
        for rel in &pres.rels {
            if !self.algebra.poset().leq_raw(&rel.at, j) {
                continue;
            }
            let translate_dim = self.algebra.dim(&rel.at, j)?;
            for ak in 0..translate_dim {
                let mut row: SparseVec<F> = BTreeMap::new();
                for (k, coords) in &rel.terms {
                    let gat = &pres.gens[*k].at;
                    for (s, c) in coords.iter().enumerate() {
                        if field.is_zero(c) {
                            continue;
                        }
                        for (t, v) in self.algebra.mul_basis(gat, &rel.at, j, s, ak)? {
                            let pos = offsets[*k] + t;
                            let e = row.entry(pos).or_insert_with(|| field.zero());
                            *e = field.add_mul(e, c, &v);
                        }
                    }
                }
                row.retain(|_, v| !field.is_zero(v));
                ech.insert(row);
            }
        }
        let (basis, reductions) = quotient_reductions(field, total, &ech);
        let mut labels = Vec::with_capacity(basis.len());
        for &pos in &basis {
            let block = offsets.partition_point(|&o| o <= pos) - 1;
            let s = pos - offsets[block];
            let alg_label = self.algebra.basis_label(&pres.gens[block].at, j, s)?;
            labels.push(if alg_label == "e" {
                pres.gens[block].name.clone()
            } else {
                alloc::format!("{}*{}", pres.gens[block].name, alg_label)
            });
        }
        Ok(ModComp { offsets, basis, reductions, rows: Vec::new(), labels })
    }

    /// Image of the `mk`-th basis vector of `M_j` under the `ak`-th basis
    /// element of the algebra component `j -> l`, as sparse coordinates over
    /// the basis of `M_l`.
    pub fn act_basis(&self, j: &IndexElement, l: &IndexElement, mk: usize, ak: usize) -> Result<SparseVec<F>> {
        let field = self.field().clone();
        match &self.kind {
            ModuleKind::Free { at } => {
                let comp_j = self.component(j)?;
                check_basis_index(comp_j.dim(), mk, "module basis")?;
                let out = self.algebra.mul_basis(at, j, l, mk, ak)?;
                Ok(out.into_iter().collect())
            }
            ModuleKind::Simple { at } => {
                check_basis_index(self.dim(j)?, mk, "module basis")?;
                if at == l {
                    // j == l == at: the only algebra element is the unit.
                    Ok([(0, field.one())].into_iter().collect())
                } else {
                    Ok(BTreeMap::new())
                }
            }
            ModuleKind::Presented { pres } => {
                let comp_j = self.component(j)?;
                let comp_l = self.component(l)?;
                check_basis_index(comp_j.dim(), mk, "module basis")?;
                let pos = comp_j.basis[mk];
                let (block, s) = comp_j.unflatten(pos);
                let mut acc = vec![field.zero(); comp_l.dim()];
                for (t, v) in self.algebra.mul_basis(&pres.gens[block].at, j, l, s, ak)? {
                    comp_l.add_position(&field, &mut acc, comp_l.offsets[block] + t, &v);
                }
                Ok(crate::linalg::dense_to_sparse(&field, &acc))
            }
            ModuleKind::Tail { base, .. } => {
                // Tail components are nonzero only inside an upper set, which
                // the action cannot leave.
                if self.dim(j)? == 0 {
                    return Err(EngineError::DegreeMismatch {
                        context: "module action",
                        detail: alloc::format!("component of {} at {j} is zero", self.name),
                    });
                }
                base.act_basis(j, l, mk, ak)
            }
            ModuleKind::TorsionQuotient { base, .. } => {
                let comp_j = self.component(j)?;
                let comp_l = self.component(l)?;
                check_basis_index(comp_j.dim(), mk, "module basis")?;
                let base_pos = comp_j.basis[mk];
                let image = base.act_basis(j, l, base_pos, ak)?;
                let mut acc = vec![field.zero(); comp_l.dim()];
                for (pos, c) in &image {
                    comp_l.add_position(&field, &mut acc, *pos, c);
                }
                Ok(crate::linalg::dense_to_sparse(&field, &acc))
            }
            ModuleKind::MapKernel { gens, .. } => {
                let comp_j = self.component(j)?;
                let comp_l = self.component(l)?;
                check_basis_index(comp_j.dim(), mk, "module basis")?;
                // Act on the canonical row inside the cover, then read the
                // result's coefficients off the pivot positions: the kernel is
                // action-closed and its canonical rows are fully reduced.
                let mut acc = vec![field.zero(); comp_l.total()];
                for (p, c) in comp_j.rows[mk].iter().enumerate() {
                    if field.is_zero(c) {
                        continue;
                    }
                    let (block, s) = comp_j.unflatten(p);
                    for (t, v) in self.algebra.mul_basis(&gens[block].at, j, l, s, ak)? {
                        let q = comp_l.offsets[block] + t;
                        acc[q] = field.add_mul(&acc[q], c, &v);
                    }
                }
                let mut out: SparseVec<F> = BTreeMap::new();
                for (m, &p) in comp_l.basis.iter().enumerate() {
                    if !field.is_zero(&acc[p]) {
                        out.insert(m, acc[p].clone());
                    }
                }
                #[cfg(debug_assertions)]
                {
                    let mut residue = acc.clone();
                    for (m, c) in &out {
                        for (q, v) in comp_l.rows[*m].iter().enumerate() {
                            let prod = field.mul(c, v);
                            residue[q] = field.sub(&residue[q], &prod);
                        }
                    }
                    debug_assert!(
                        residue.iter().all(|c| field.is_zero(c)),
                        "kernel action left the canonical span"
                    );
                }
                Ok(out)
            }
        }
    }

    /// Image of a whole coordinate vector of `M_j` under one algebra basis
    /// element of `j -> l`, densely over the basis of `M_l`.
    pub fn act_vector(&self, j: &IndexElement, l: &IndexElement, coords: &[F::Elem], ak: usize) -> Result<Vec<F::Elem>> {
        let field = self.field().clone();
        let dim_l = self.dim(l)?;
        let mut acc = vec![field.zero(); dim_l];
        for (mk, c) in coords.iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            for (t, v) in self.act_basis(j, l, mk, ak)? {
                acc[t] = field.add_mul(&acc[t], c, &v);
            }
        }
        Ok(acc)
    }

    /// Total dimension over a window.
    pub fn total_dim_over(&self, window: &Window) -> Result<usize> {
        let mut total = 0;
        for j in window.elements() {
            total += self.dim(j)?;
        }
        Ok(total)
    }

    /// Per-index dimensions over a window, in window order.
    pub fn dims_over(&self, window: &Window) -> Result<Vec<(IndexElement, usize)>> {
        window.elements().iter().map(|j| Ok((j.clone(), self.dim(j)?))).collect()
    }
}

fn check_basis_index(dim: usize, k: usize, what: &'static str) -> Result<()> {
    if k >= dim {
        return Err(EngineError::DegreeMismatch {
            context: what,
            detail: alloc::format!("index {k} out of range for dimension {dim}"),
        });
    }
    Ok(())
}

/// Per-index count of fresh generators over a window: the part of each
/// component not reached by the action from strictly lower window indices.
pub fn generation_report<F: Field>(m: &Module<F>, window: &Window) -> Result<Vec<(IndexElement, usize)>> {
    let mut out = Vec::with_capacity(window.len());
    for j in window.elements() {
        let fresh = fresh_generator_positions(m, window, j)?;
        out.push((j.clone(), fresh.len()));
    }
    Ok(out)
}

/// Chosen representatives of fresh generators: for each window index, the
/// basis positions that survive modulo the image of lower components
/// (earliest positions win).
pub fn min_generators<F: Field>(m: &Module<F>, window: &Window) -> Result<Vec<(IndexElement, Vec<usize>)>> {
    let mut out = Vec::new();
    for j in window.elements() {
        let fresh = fresh_generator_positions(m, window, j)?;
        if !fresh.is_empty() {
            out.push((j.clone(), fresh));
        }
    }
    Ok(out)
}

fn fresh_generator_positions<F: Field>(
    m: &Module<F>,
    window: &Window,
    j: &IndexElement,
) -> Result<Vec<usize>> {
    let dim_j = m.dim(j)?;
    if dim_j == 0 {
        return Ok(Vec::new());
    }
    let poset = m.algebra().poset().clone();
    let mut ech = SparseEchelon::new(m.algebra().field().clone(), PivotScan::Reverse);
    for i in window.elements() {
        if !poset.lt_raw(i, j) {
            continue;
        }
        let dim_i = m.dim(i)?;
        if dim_i == 0 {
            continue;
        }
        let adim = m.algebra().dim(i, j)?;
        for mk in 0..dim_i {
            for ak in 0..adim {
                ech.insert(m.act_basis(i, j, mk, ak)?);
            }
        }
    }
    Ok((0..dim_j).filter(|p| !ech.is_pivot(*p)).collect())
}

/// Basis rows of the torsion approximant of `M_j` over a window: everything
/// annihilated by the algebra into each maximal window index above `j`.
/// Canonical form: fully reduced, pivots on the latest coordinates.
pub fn torsion_rows<F: Field>(m: &Module<F>, window: &Window, j: &IndexElement) -> Result<Vec<Vec<F::Elem>>> {
    let field = m.algebra().field().clone();
    let poset = m.algebra().poset().clone();
    let dim_j = m.dim(j)?;
    if dim_j == 0 {
        return Ok(Vec::new());
    }
    let mut total = Echelon::new(field.clone(), dim_j, PivotScan::Reverse);
    for mu in window.maximal_elements() {
        if !poset.lt_raw(j, &mu) {
            continue;
        }
        // Kernel of M_j -> Hom(A_{j,mu}, M_mu), intersected one algebra
        // basis element at a time; candidate rows stay sparse.
        let mut rows: Vec<SparseVec<F>> = (0..dim_j)
            .map(|k| [(k, field.one())].into_iter().collect())
            .collect();
        let adim = m.algebra().dim(j, &mu)?;
        let dim_mu = m.dim(&mu)?;
        for ak in 0..adim {
            if rows.is_empty() {
                break;
            }
            let mut images = Vec::with_capacity(rows.len());
            for r in &rows {
                let mut img: SparseVec<F> = BTreeMap::new();
                for (&k, c) in r {
                    for (t, v) in m.act_basis(j, &mu, k, ak)? {
                        let e = img.entry(t).or_insert_with(|| field.zero());
                        *e = field.add_mul(e, c, &v);
                    }
                }
                img.retain(|_, v| !field.is_zero(v));
                images.push(img);
            }
            let kernel = left_kernel(&field, dim_mu, &images);
            rows = kernel
                .into_iter()
                .map(|c| {
                    let mut combo: SparseVec<F> = BTreeMap::new();
                    for (ci, r) in c.iter().zip(rows.iter()) {
                        if !field.is_zero(ci) {
                            crate::linalg::sparse_add_mul(&field, &mut combo, ci, r);
                        }
                    }
                    combo
                })
                .collect();
        }
        for r in &rows {
            total.insert(sparse_to_dense(&field, dim_j, r));
        }
    }
    Ok(total.canonical_rows())
}

/// The earliest window index `d` (window order) whose whole upper cone the
/// given row annihilates, certifying the torsion claim.  `None` when no
/// single in-window cut works.
pub fn least_torsion_witness<F: Field>(
    m: &Module<F>,
    window: &Window,
    j: &IndexElement,
    row: &[F::Elem],
) -> Result<Option<IndexElement>> {
    let field = m.algebra().field().clone();
    let poset = m.algebra().poset().clone();
    'cuts: for d in window.elements() {
        if poset.leq_raw(d, j) {
            continue;
        }
        let cone: Vec<&IndexElement> = window
            .elements()
            .iter()
            .filter(|u| poset.leq_raw(d, u) && poset.leq_raw(j, u))
            .collect();
        if cone.is_empty() {
            continue;
        }
        for u in cone {
            let adim = m.algebra().dim(j, u)?;
            for ak in 0..adim {
                let img = m.act_vector(j, u, row, ak)?;
                if img.iter().any(|c| !field.is_zero(c)) {
                    continue 'cuts;
                }
            }
        }
        return Ok(Some(d.clone()));
    }
    Ok(None)
}

/// Torsion of one component with per-row witnesses.
#[derive(Clone, Debug)]
pub struct TorsionComponent<F: Field> {
    pub at: IndexElement,
    pub rows: Vec<Vec<F::Elem>>,
    pub witnesses: Vec<Option<IndexElement>>,
}

#[derive(Clone, Debug)]
pub struct TorsionReport<F: Field> {
    pub components: Vec<TorsionComponent<F>>,
}

impl<F: Field> TorsionReport<F> {
    pub fn total_dim(&self) -> usize {
        self.components.iter().map(|c| c.rows.len()).sum()
    }

    pub fn dim_at(&self, j: &IndexElement) -> usize {
        self.components.iter().find(|c| &c.at == j).map_or(0, |c| c.rows.len())
    }
}

/// Torsion approximant across a whole window; only indices with nonzero
/// torsion appear.
pub fn torsion_report<F: Field>(m: &Module<F>, window: &Window) -> Result<TorsionReport<F>> {
    let mut components = Vec::new();
    for j in window.elements() {
        let rows = torsion_rows(m, window, j)?;
        if rows.is_empty() {
            continue;
        }
        let mut witnesses = Vec::with_capacity(rows.len());
        for r in &rows {
            witnesses.push(least_torsion_witness(m, window, j, r)?);
        }
        components.push(TorsionComponent { at: j.clone(), rows, witnesses });
    }
    Ok(TorsionReport { components })
}

/// Basis of degree-zero module maps from a presented module into `target`:
/// each element lists, per source generator, the image's coordinates in the
/// target component at that generator's index.
pub fn hom_space<F: Field>(pres: &Presentation<F>, target: &Module<F>) -> Result<Vec<Vec<Vec<F::Elem>>>> {
    let field = target.algebra().field().clone();
    let mut offsets = vec![0usize];
    for g in &pres.gens {
        offsets.push(offsets.last().unwrap() + target.dim(&g.at)?);
    }
    let unknowns = *offsets.last().unwrap();
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    for rel in &pres.rels {
        let dim_at = target.dim(&rel.at)?;
        // One constraint per coordinate of the relation's image.
        let mut images: Vec<Vec<F::Elem>> = vec![vec![field.zero(); dim_at]; unknowns];
        for (k, coords) in &rel.terms {
            let gat = &pres.gens[*k].at;
            let dim_g = target.dim(gat)?;
            for s in 0..dim_g {
                for (aidx, c) in coords.iter().enumerate() {
                    if field.is_zero(c) {
                        continue;
                    }
                    for (t, v) in target.act_basis(gat, &rel.at, s, aidx)? {
                        let cell = &mut images[offsets[*k] + s][t];
                        *cell = field.add_mul(cell, c, &v);
                    }
                }
            }
        }
        for t in 0..dim_at {
            rows.push(images.iter().map(|img| img[t].clone()).collect());
        }
    }
    let mat = Matrix::from_rows(unknowns, rows);
    let mut out = Vec::new();
    for v in mat.nullspace(&field) {
        let mut per_gen = Vec::with_capacity(pres.gens.len());
        for k in 0..pres.gens.len() {
            per_gen.push(v[offsets[k]..offsets[k + 1]].to_vec());
        }
        out.push(per_gen);
    }
    Ok(out)
}

/// Evaluate a hom element (given by generator images) on the source
/// component at `j`: one image row in `target_{j}` coordinates per basis
/// vector of the source component.  The source's components must be laid
/// out over the cover blocks of `pres` (its own presentation, or the
/// implicit one for free and simple modules).
pub fn evaluate_hom<F: Field>(
    pres: &Presentation<F>,
    source: &Module<F>,
    target: &Module<F>,
    hom: &[Vec<F::Elem>],
    j: &IndexElement,
) -> Result<Vec<Vec<F::Elem>>> {
    let field = target.algebra().field().clone();
    let comp = source.component(j)?;
    if comp.offsets.len() != pres.gens.len() + 1 {
        return Err(EngineError::DegreeMismatch {
            context: "hom evaluation",
            detail: alloc::format!(
                "source component at {j} has {} cover blocks, presentation has {} generators",
                comp.offsets.len() - 1,
                pres.gens.len()
            ),
        });
    }
    let dim_t = target.dim(j)?;
    let mut out = Vec::with_capacity(comp.dim());
    for mk in 0..comp.dim() {
        let (block, s) = comp.unflatten(comp.basis[mk]);
        let gat = &pres.gens[block].at;
        let mut acc = vec![field.zero(); dim_t];
        for (t, c) in hom[block].iter().enumerate() {
            if field.is_zero(c) {
                continue;
            }
            for (u, v) in target.act_basis(gat, j, t, s)? {
                acc[u] = field.add_mul(&acc[u], c, &v);
            }
        }
        out.push(acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{PresentedAlgebra, RelationInput, RelationSpan};
    use crate::field::Rationals;
    use crate::poset::Poset;
    use crate::Limits;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        Rationals.from_integer(n)
    }

    fn lat(cs: &[i64]) -> IndexElement {
        IndexElement::lattice(cs)
    }

    fn free_xy() -> Algebra<Rationals> {
        Algebra::Presented(
            PresentedAlgebra::from_graded_ring(
                "free_xy",
                Rationals,
                2,
                alloc::vec![("x".into(), alloc::vec![1, 0]), ("y".into(), alloc::vec![0, 1])],
                alloc::vec![],
                Limits::default(),
            )
            .unwrap(),
        )
    }

    fn poly_xy() -> Algebra<Rationals> {
        Algebra::Presented(
            PresentedAlgebra::from_graded_ring(
                "poly_xy",
                Rationals,
                2,
                alloc::vec![("x".into(), alloc::vec![1, 0]), ("y".into(), alloc::vec![0, 1])],
                alloc::vec![RelationInput {
                    span: RelationSpan::Shift(alloc::vec![1, 1]),
                    terms: alloc::vec![
                        (q(1), alloc::vec!["x".into(), "y".into()]),
                        (q(-1), alloc::vec!["y".into(), "x".into()]),
                    ],
                }],
                Limits::default(),
            )
            .unwrap(),
        )
    }

    fn window(p: &Arc<Poset>, lo: &[i64], hi: &[i64]) -> Window {
        Window::interval_box(p, &lat(lo), &lat(hi), &Limits::default()).unwrap()
    }

    /// k[y] as a column: the polynomial free module with x killed.
    fn column_module(a: &Algebra<Rationals>) -> Arc<Module<Rationals>> {
        Module::presented(
            a.clone(),
            Presentation {
                gens: alloc::vec![ModuleGenerator { name: "m".into(), at: lat(&[0, 0]) }],
                rels: alloc::vec![PresRelation { at: lat(&[1, 0]), terms: alloc::vec![(0, alloc::vec![q(1)])] }],
            },
            "col",
        )
        .unwrap()
    }

    #[test]
    fn free_module_components_mirror_the_algebra() {
        let a = free_xy();
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        assert_eq!(p0.dim(&lat(&[2, 1])).unwrap(), 3);
        assert_eq!(p0.basis_label(&lat(&[1, 1]), 0).unwrap(), "x*y");
        assert_eq!(p0.basis_label(&lat(&[0, 0]), 0).unwrap(), "e");
        // right action: (x*y) . x = x*y*x at position 2 of {xxy,xyx,xyy? ...}
        let img = p0.act_basis(&lat(&[1, 1]), &lat(&[2, 1]), 0, 0).unwrap();
        let comp = a.as_presented().unwrap().component(&lat(&[0, 0]), &lat(&[2, 1])).unwrap();
        let labels: Vec<String> = comp
            .basis
            .iter()
            .map(|&p| a.as_presented().unwrap().format_word(&comp.paths[p]))
            .collect();
        assert_eq!(labels, alloc::vec!["x*x*y", "x*y*x", "y*x*x"]);
        assert_eq!(img, [(1, q(1))].into_iter().collect::<SparseVec<Rationals>>());
    }

    #[test]
    fn presented_quotient_kills_the_relation_orbit() {
        let a = poly_xy();
        let col = column_module(&a);
        for s in 0..=3i64 {
            for t in 0..=3i64 {
                let want = if s == 0 { 1 } else { 0 };
                assert_eq!(col.dim(&lat(&[s, t])).unwrap(), want, "at ({s},{t})");
            }
        }
        assert_eq!(col.basis_label(&lat(&[0, 2]), 0).unwrap(), "m*y*y");
        // acting by y moves along the column
        let img = col.act_basis(&lat(&[0, 1]), &lat(&[0, 2]), 0, 0).unwrap();
        assert_eq!(img, [(0, q(1))].into_iter().collect::<SparseVec<Rationals>>());
    }

    #[test]
    fn generation_of_free_and_tail_modules() {
        let a = free_xy();
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        let w = window(a.poset(), &[0, 0], &[3, 3]);
        let report = generation_report(&p0, &w).unwrap();
        let total: usize = report.iter().map(|(_, n)| n).sum();
        assert_eq!(total, 1);
        assert_eq!(report[0], (lat(&[0, 0]), 1));

        let tail = Module::tail(&p0, &lat(&[0, 0]), true, "P0_tail").unwrap();
        let gens = min_generators(&tail, &w).unwrap();
        assert_eq!(
            gens,
            alloc::vec![(lat(&[0, 1]), alloc::vec![0]), (lat(&[1, 0]), alloc::vec![0])]
        );
    }

    #[test]
    fn deep_tail_of_the_free_algebra_keeps_growing() {
        // Tail of P_(0,0) above (1,1): new generators persist along the
        // (1,t) and (s,1) rays, 9 inside [(0,0),(4,3)].
        let a = free_xy();
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        let tail = Module::tail(&p0, &lat(&[1, 1]), true, "tail").unwrap();
        let w = window(a.poset(), &[0, 0], &[4, 3]);
        let report = generation_report(&tail, &w).unwrap();
        let nonzero: Vec<(IndexElement, usize)> =
            report.into_iter().filter(|(_, n)| *n > 0).collect();
        assert_eq!(
            nonzero,
            alloc::vec![
                (lat(&[1, 2]), 3),
                (lat(&[2, 1]), 3),
                (lat(&[1, 3]), 1),
                (lat(&[3, 1]), 1),
                (lat(&[4, 1]), 1),
            ]
        );
    }

    #[test]
    fn torsion_of_the_column_module() {
        let a = poly_xy();
        let col = column_module(&a);
        let w = window(a.poset(), &[0, 0], &[3, 3]);
        let report = torsion_report(&col, &w).unwrap();
        assert_eq!(report.total_dim(), 4); // (0,0) .. (0,3)
        for c in &report.components {
            assert_eq!(c.rows, alloc::vec![alloc::vec![q(1)]]);
            assert_eq!(c.witnesses, alloc::vec![Some(lat(&[1, 0]))]);
        }
        // the free module has no torsion
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        assert_eq!(torsion_report(&p0, &w).unwrap().total_dim(), 0);
    }

    #[test]
    fn simple_modules_are_pure_torsion() {
        let a = free_xy();
        let s0 = Module::simple(a.clone(), &lat(&[0, 0]), "S0").unwrap();
        let w = window(a.poset(), &[0, 0], &[2, 2]);
        let report = torsion_report(&s0, &w).unwrap();
        assert_eq!(report.total_dim(), 1);
        assert_eq!(report.components[0].at, lat(&[0, 0]));
        assert_eq!(report.components[0].witnesses, alloc::vec![Some(lat(&[0, 1]))]);
    }

    #[test]
    fn torsion_quotient_strips_exactly_the_torsion() {
        let a = poly_xy();
        // P0 plus a simple summand: gens p (free) and s (killed by x and y).
        let m = Module::presented(
            a.clone(),
            Presentation {
                gens: alloc::vec![
                    ModuleGenerator { name: "p".into(), at: lat(&[0, 0]) },
                    ModuleGenerator { name: "s".into(), at: lat(&[0, 0]) },
                ],
                rels: alloc::vec![
                    PresRelation { at: lat(&[1, 0]), terms: alloc::vec![(1, alloc::vec![q(1)])] },
                    PresRelation { at: lat(&[0, 1]), terms: alloc::vec![(1, alloc::vec![q(1)])] },
                ],
            },
            "p_plus_s",
        )
        .unwrap();
        let w = window(a.poset(), &[0, 0], &[3, 3]);
        assert_eq!(m.dim(&lat(&[0, 0])).unwrap(), 2);
        let report = torsion_report(&m, &w).unwrap();
        assert_eq!(report.total_dim(), 1);
        assert_eq!(report.components[0].rows, alloc::vec![alloc::vec![q(0), q(1)]]);
        let quo = Module::torsion_quotient(&m, &w, "m_mod_tau").unwrap();
        assert_eq!(quo.dim(&lat(&[0, 0])).unwrap(), 1);
        assert_eq!(quo.basis_label(&lat(&[0, 0]), 0).unwrap(), "p");
        for s in 0..=2i64 {
            for t in 0..=2i64 {
                assert_eq!(quo.dim(&lat(&[s, t])).unwrap(), 1);
            }
        }
    }

    #[test]
    fn hom_from_free_module_is_the_component() {
        let a = poly_xy();
        let col = column_module(&a);
        let pres = Presentation::<Rationals> {
            gens: alloc::vec![ModuleGenerator { name: "g".into(), at: lat(&[0, 2]) }],
            rels: alloc::vec![],
        };
        // Hom(P_(0,2), col) = col_(0,2), one-dimensional.
        let homs = hom_space(&pres, &col).unwrap();
        assert_eq!(homs.len(), 1);
        assert_eq!(homs[0], alloc::vec![alloc::vec![q(1)]]);
        let pres_at_1 = Presentation::<Rationals> {
            gens: alloc::vec![ModuleGenerator { name: "g".into(), at: lat(&[1, 0]) }],
            rels: alloc::vec![],
        };
        assert!(hom_space(&pres_at_1, &col).unwrap().is_empty());
    }

    #[test]
    fn koszul_syzygy_spans_the_kernel() {
        // Kernel of (x, y): P_(1,0) + P_(0,1) -> P_(0,0) over k[x,y]: one
        // generator at (1,1), nothing else fresh in the window.
        let a = poly_xy();
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        let f = ModuleMap {
            name: "xy_cover".into(),
            gens: alloc::vec![
                ModuleGenerator { name: "c0".into(), at: lat(&[1, 0]) },
                ModuleGenerator { name: "c1".into(), at: lat(&[0, 1]) },
            ],
            images: alloc::vec![alloc::vec![q(1)], alloc::vec![q(1)]],
            target: p0,
        };
        let ker = f.kernel("koszul").unwrap();
        assert_eq!(ker.dim(&lat(&[1, 0])).unwrap(), 0);
        assert_eq!(ker.dim(&lat(&[1, 1])).unwrap(), 1);
        assert_eq!(ker.dim(&lat(&[2, 2])).unwrap(), 1);
        assert_eq!(ker.basis_label(&lat(&[1, 1]), 0).unwrap(), "c1*x");
        let w = window(a.poset(), &[0, 0], &[3, 3]);
        assert_eq!(min_generators(&ker, &w).unwrap(), alloc::vec![(lat(&[1, 1]), alloc::vec![0])]);

        // The same shape over the free algebra has no syzygies at all.
        let b = free_xy();
        let pb = Module::free(b.clone(), &lat(&[0, 0]), "P0").unwrap();
        let g = ModuleMap {
            name: "xy_cover".into(),
            gens: f.gens.clone(),
            images: alloc::vec![alloc::vec![q(1)], alloc::vec![q(1)]],
            target: pb,
        };
        let kb = g.kernel("no_syzygy").unwrap();
        let wb = window(b.poset(), &[0, 0], &[3, 3]);
        assert_eq!(kb.total_dim_over(&wb).unwrap(), 0);
    }

    #[test]
    fn syzygies_of_the_column_module() {
        let a = poly_xy();
        let col = column_module(&a);
        let syz = Module::syzygies(&col, "syz").unwrap();
        assert_eq!(syz.dim(&lat(&[0, 2])).unwrap(), 0);
        assert_eq!(syz.dim(&lat(&[2, 1])).unwrap(), 1);
        assert_eq!(syz.basis_label(&lat(&[1, 0]), 0).unwrap(), "m*x");
        let w = window(a.poset(), &[0, 0], &[3, 3]);
        // x·P_0 is free on the single syzygy at (1,0).
        assert_eq!(min_generators(&syz, &w).unwrap(), alloc::vec![(lat(&[1, 0]), alloc::vec![0])]);
    }

    #[test]
    fn implicit_presentations_round_trip_through_hom() {
        let a = poly_xy();
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        let s0 = Module::simple(a.clone(), &lat(&[0, 0]), "S0").unwrap();
        // Hom(S0, S0) = k, Hom(S0, P0) = 0, Hom(P0, S0) = k.
        let spres = s0.implicit_presentation().unwrap();
        assert_eq!(spres.rels.len(), 2);
        assert_eq!(hom_space(&spres, &s0).unwrap().len(), 1);
        assert!(hom_space(&spres, &p0).unwrap().is_empty());
        let fpres = p0.implicit_presentation().unwrap();
        let homs = hom_space(&fpres, &s0).unwrap();
        assert_eq!(homs.len(), 1);
        let rows = evaluate_hom(&fpres, &p0, &s0, &homs[0], &lat(&[0, 0])).unwrap();
        assert_eq!(rows, alloc::vec![alloc::vec![q(1)]]);
    }

    #[test]
    fn hom_respects_relations() {
        let a = poly_xy();
        // Source: the column module's own presentation. Hom(col, col) = k.
        let col = column_module(&a);
        let pres = col.presentation().unwrap().clone();
        let homs = hom_space(&pres, &col).unwrap();
        assert_eq!(homs.len(), 1);
        // Hom(col, P0) = 0: the image of m must be killed by x, but P0 has
        // no x-torsion.
        let p0 = Module::free(a.clone(), &lat(&[0, 0]), "P0").unwrap();
        assert!(hom_space(&pres, &p0).unwrap().is_empty());
        // evaluation of the identity hom on a component
        let rows = evaluate_hom(&pres, &col, &col, &homs[0], &lat(&[0, 2])).unwrap();
        assert_eq!(rows, alloc::vec![alloc::vec![q(1)]]);
    }
}
