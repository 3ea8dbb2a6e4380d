//! Index posets and windows.
//!
//! Three poset shapes: ℤ^r with the product order, finite explicitly listed
//! orders, and binary products.  All of them are directed (any two elements
//! have an upper bound) and locally finite (intervals are finite); the
//! constructors reject anything else.
//!
//! A *window* is a finite order-convex subset, the arena every enumeration
//! runs in.  Window elements are listed in a fixed linear extension: on a
//! lattice this is degree-then-lexicographic order, on a finite poset the
//! declaration order refined to a topological order, and on a product the
//! lexicographic pairing of the factors' orders.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{EngineError, Result};
use crate::outcome::CheckOutcome;
use crate::Limits;

/// An element of an index poset.
///
/// The derived `Ord` is structural (for use as a map key) and has nothing to
/// do with the partial order; use [`Poset::leq`] for that.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexElement {
    /// A point of ℤ^r.
    Lattice(Vec<i64>),
    /// A named element of a finite poset.
    Atom(String),
    /// An element of a product poset.
    Pair(Arc<IndexElement>, Arc<IndexElement>),
}

impl IndexElement {
    pub fn lattice(coords: &[i64]) -> Self {
        IndexElement::Lattice(coords.to_vec())
    }

    pub fn atom(name: &str) -> Self {
        IndexElement::Atom(String::from(name))
    }

    pub fn pair(a: IndexElement, b: IndexElement) -> Self {
        IndexElement::Pair(Arc::new(a), Arc::new(b))
    }

    /// The two halves of a product-poset element.
    pub fn parts(&self) -> Option<(&IndexElement, &IndexElement)> {
        match self {
            IndexElement::Pair(a, b) => Some((a.as_ref(), b.as_ref())),
            _ => None,
        }
    }

    /// Lattice coordinates, when this is a lattice element.
    pub fn coords(&self) -> Option<&[i64]> {
        match self {
            IndexElement::Lattice(cs) => Some(cs),
            _ => None,
        }
    }

    /// Flatten into a list of scalar parts, the display/parse form.
    fn flatten_into(&self, out: &mut Vec<String>) {
        match self {
            IndexElement::Lattice(cs) => out.extend(cs.iter().map(|c| c.to_string())),
            IndexElement::Atom(s) => out.push(s.clone()),
            IndexElement::Pair(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
        }
    }
}

impl fmt::Display for IndexElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexElement::Atom(s) => write!(f, "{s}"),
            _ => {
                let mut parts = Vec::new();
                self.flatten_into(&mut parts);
                write!(f, "({})", parts.join(","))
            }
        }
    }
}

/// Sort key realizing the linear extension; ordered derivation matches the
/// documented extension for elements of one poset.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LinextKey {
    Lattice(i64, Vec<i64>),
    Pos(usize),
    Pair(Arc<LinextKey>, Arc<LinextKey>),
}

#[derive(Debug)]
enum PosetKind {
    Lattice { rank: usize },
    Finite(FinitePoset),
    Product(Arc<Poset>, Arc<Poset>),
}

#[derive(Debug)]
struct FinitePoset {
    labels: Vec<String>,
    index: BTreeMap<String, usize>,
    /// Reflexive-transitive closure, row-major `labels.len()` square.
    leq: Vec<bool>,
    /// Positions in declaration-order-refined topological order.
    topo: Vec<usize>,
    /// topo_rank[i] = position of element i in `topo`.
    topo_rank: Vec<usize>,
}

/// Witness for a poset law violation: the offending elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetWitness {
    pub law: &'static str,
    pub elements: Vec<IndexElement>,
}

#[derive(Debug)]
pub struct Poset {
    kind: PosetKind,
}

impl Poset {
    /// ℤ^rank with the product order.
    pub fn lattice(rank: usize) -> Result<Arc<Poset>> {
        if rank == 0 {
            return Err(EngineError::InvalidPoset { reason: "lattice rank must be at least 1".into() });
        }
        Ok(Arc::new(Poset { kind: PosetKind::Lattice { rank } }))
    }

    /// Finite poset from labels and `a <= b` pairs (transitively closed here).
    /// Fails fast if the result is not a directed partial order.
    pub fn finite(labels: &[&str], relations: &[(&str, &str)]) -> Result<Arc<Poset>> {
        let outcome = Self::validate_finite(labels, relations);
        if let Some(w) = outcome.certificate {
            return Err(EngineError::InvalidPoset {
                reason: alloc::format!(
                    "{} (witness: {})",
                    w.law,
                    w.elements.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(", ")
                ),
            });
        }
        let fp = Self::build_finite(labels, relations)?;
        Ok(Arc::new(Poset { kind: PosetKind::Finite(fp) }))
    }

    /// Check the directed-partial-order laws for candidate finite-poset data
    /// without constructing anything.  `Refuted` carries the witness.
    pub fn validate_finite(labels: &[&str], relations: &[(&str, &str)]) -> CheckOutcome<PosetWitness> {
        let fp = match Self::build_finite(labels, relations) {
            Ok(fp) => fp,
            Err(e) => {
                return CheckOutcome::inconclusive(
                    None,
                    crate::outcome::InconclusiveReason::WindowExhausted {
                        detail: alloc::format!("{e}"),
                    },
                )
            }
        };
        let n = fp.labels.len();
        for a in 0..n {
            for b in 0..n {
                if a != b && fp.leq[a * n + b] && fp.leq[b * n + a] {
                    return CheckOutcome::refuted(
                        None,
                        PosetWitness {
                            law: "antisymmetry fails (order cycle)",
                            elements: vec![
                                IndexElement::atom(&fp.labels[a]),
                                IndexElement::atom(&fp.labels[b]),
                            ],
                        },
                    );
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if !(0..n).any(|u| fp.leq[a * n + u] && fp.leq[b * n + u]) {
                    return CheckOutcome::refuted(
                        None,
                        PosetWitness {
                            law: "not directed (pair with no upper bound)",
                            elements: vec![
                                IndexElement::atom(&fp.labels[a]),
                                IndexElement::atom(&fp.labels[b]),
                            ],
                        },
                    );
                }
            }
        }
        CheckOutcome { verdict: crate::outcome::Verdict::Verified, window: None, certificate: None }
    }

    fn build_finite(labels: &[&str], relations: &[(&str, &str)]) -> Result<FinitePoset> {
        if labels.is_empty() {
            return Err(EngineError::InvalidPoset { reason: "finite poset needs at least one element".into() });
        }
        let mut index = BTreeMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.to_string(), i).is_some() {
                return Err(EngineError::InvalidPoset { reason: alloc::format!("duplicate element `{l}`") });
            }
        }
        let n = labels.len();
        let mut leq = vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for (a, b) in relations {
            let &ia = index.get(*a).ok_or_else(|| EngineError::InvalidPoset {
                reason: alloc::format!("unknown element `{a}` in relation"),
            })?;
            let &ib = index.get(*b).ok_or_else(|| EngineError::InvalidPoset {
                reason: alloc::format!("unknown element `{b}` in relation"),
            })?;
            leq[ia * n + ib] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if leq[i * n + k] {
                    for j in 0..n {
                        if leq[k * n + j] {
                            leq[i * n + j] = true;
                        }
                    }
                }
            }
        }
        // Declaration order refined to a topological order (Kahn, picking the
        // smallest declaration index among minimal remaining elements).  With
        // a cycle present some elements never become minimal; append them in
        // declaration order so validation can still report the cycle.
        let mut topo = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        loop {
            let next = (0..n).find(|&i| {
                !placed[i]
                    && (0..n).all(|j| placed[j] || j == i || !(leq[j * n + i] && !leq[i * n + j]))
            });
            match next {
                Some(i) => {
                    placed[i] = true;
                    topo.push(i);
                }
                None => break,
            }
        }
        for i in 0..n {
            if !placed[i] {
                topo.push(i);
            }
        }
        let mut topo_rank = vec![0; n];
        for (pos, &i) in topo.iter().enumerate() {
            topo_rank[i] = pos;
        }
        Ok(FinitePoset { labels: labels.iter().map(|s| s.to_string()).collect(), index, leq, topo, topo_rank })
    }

    pub fn product(a: Arc<Poset>, b: Arc<Poset>) -> Arc<Poset> {
        Arc::new(Poset { kind: PosetKind::Product(a, b) })
    }

    /// Re-run the law checks.  Constructed posets always pass; this exists so
    /// reports can carry an explicit verdict.
    pub fn validate(&self) -> CheckOutcome<PosetWitness> {
        match &self.kind {
            PosetKind::Lattice { .. } => {
                CheckOutcome { verdict: crate::outcome::Verdict::Verified, window: None, certificate: None }
            }
            PosetKind::Finite(fp) => {
                let labels: Vec<&str> = fp.labels.iter().map(|s| s.as_str()).collect();
                let mut rels = Vec::new();
                for a in 0..fp.labels.len() {
                    for b in 0..fp.labels.len() {
                        if a != b && fp.leq[a * fp.labels.len() + b] {
                            rels.push((labels[a], labels[b]));
                        }
                    }
                }
                Self::validate_finite(&labels, &rels)
            }
            PosetKind::Product(a, b) => {
                let va = a.validate();
                if !va.is_verified() {
                    return va;
                }
                b.validate()
            }
        }
    }

    pub fn rank(&self) -> Option<usize> {
        match &self.kind {
            PosetKind::Lattice { rank } => Some(*rank),
            _ => None,
        }
    }

    pub fn is_lattice(&self) -> bool {
        matches!(self.kind, PosetKind::Lattice { .. })
    }

    /// The two factors of a product poset.
    pub fn product_parts(&self) -> Option<(&Arc<Poset>, &Arc<Poset>)> {
        match &self.kind {
            PosetKind::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Finite posets (and products of finite posets) can be enumerated
    /// exhaustively, which turns window policies into exact answers.
    pub fn is_finite(&self) -> bool {
        match &self.kind {
            PosetKind::Lattice { .. } => false,
            PosetKind::Finite(_) => true,
            PosetKind::Product(a, b) => a.is_finite() && b.is_finite(),
        }
    }

    pub fn contains(&self, el: &IndexElement) -> bool {
        match (&self.kind, el) {
            (PosetKind::Lattice { rank }, IndexElement::Lattice(cs)) => cs.len() == *rank,
            (PosetKind::Finite(fp), IndexElement::Atom(s)) => fp.index.contains_key(s),
            (PosetKind::Product(a, b), IndexElement::Pair(x, y)) => a.contains(x) && b.contains(y),
            _ => false,
        }
    }

    pub fn check_member(&self, el: &IndexElement) -> Result<()> {
        if self.contains(el) {
            Ok(())
        } else {
            Err(EngineError::NotInPoset { element: el.to_string() })
        }
    }

    pub fn leq(&self, a: &IndexElement, b: &IndexElement) -> Result<bool> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(self.leq_raw(a, b))
    }

    pub(crate) fn leq_raw(&self, a: &IndexElement, b: &IndexElement) -> bool {
        match (&self.kind, a, b) {
            (PosetKind::Lattice { .. }, IndexElement::Lattice(x), IndexElement::Lattice(y)) => {
                x.iter().zip(y.iter()).all(|(p, q)| p <= q)
            }
            (PosetKind::Finite(fp), IndexElement::Atom(s), IndexElement::Atom(t)) => {
                let n = fp.labels.len();
                fp.leq[fp.index[s] * n + fp.index[t]]
            }
            (PosetKind::Product(pa, pb), IndexElement::Pair(x1, y1), IndexElement::Pair(x2, y2)) => {
                pa.leq_raw(x1, x2) && pb.leq_raw(y1, y2)
            }
            _ => unreachable!("membership checked before order comparison"),
        }
    }

    pub(crate) fn lt_raw(&self, a: &IndexElement, b: &IndexElement) -> bool {
        a != b && self.leq_raw(a, b)
    }

    pub fn lt(&self, a: &IndexElement, b: &IndexElement) -> Result<bool> {
        Ok(self.leq(a, b)? && a != b)
    }

    /// Some upper bound of the pair: the componentwise maximum on a lattice,
    /// the earliest common upper bound in the linear extension on a finite
    /// poset, and the pair of those on a product.
    pub fn upper_bound(&self, a: &IndexElement, b: &IndexElement) -> Result<IndexElement> {
        self.check_member(a)?;
        self.check_member(b)?;
        Ok(self.upper_bound_raw(a, b))
    }

    fn upper_bound_raw(&self, a: &IndexElement, b: &IndexElement) -> IndexElement {
        match (&self.kind, a, b) {
            (PosetKind::Lattice { .. }, IndexElement::Lattice(x), IndexElement::Lattice(y)) => {
                IndexElement::Lattice(x.iter().zip(y.iter()).map(|(p, q)| *p.max(q)).collect())
            }
            (PosetKind::Finite(fp), IndexElement::Atom(s), IndexElement::Atom(t)) => {
                let n = fp.labels.len();
                let (ia, ib) = (fp.index[s], fp.index[t]);
                let u = fp
                    .topo
                    .iter()
                    .copied()
                    .find(|&u| fp.leq[ia * n + u] && fp.leq[ib * n + u])
                    .expect("directedness was checked at construction");
                IndexElement::atom(&fp.labels[u])
            }
            (PosetKind::Product(pa, pb), IndexElement::Pair(x1, y1), IndexElement::Pair(x2, y2)) => {
                IndexElement::pair(pa.upper_bound_raw(x1, x2), pb.upper_bound_raw(y1, y2))
            }
            _ => unreachable!("membership checked before upper bound"),
        }
    }

    /// The interval `[a, b]`, listed in the linear extension.  Errors if it
    /// would exceed `max` elements.
    pub fn interval(&self, a: &IndexElement, b: &IndexElement, max: usize) -> Result<Vec<IndexElement>> {
        self.check_member(a)?;
        self.check_member(b)?;
        if !self.leq_raw(a, b) {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        self.interval_raw(a, b, max, &mut out)?;
        out.sort_by_key(|e| self.linext_key(e));
        Ok(out)
    }

    fn interval_raw(
        &self,
        a: &IndexElement,
        b: &IndexElement,
        max: usize,
        out: &mut Vec<IndexElement>,
    ) -> Result<()> {
        match (&self.kind, a, b) {
            (PosetKind::Lattice { rank }, IndexElement::Lattice(x), IndexElement::Lattice(y)) => {
                let mut count: usize = 1;
                for k in 0..*rank {
                    let side = (y[k] - x[k] + 1) as usize;
                    count = count.saturating_mul(side);
                    if count > max {
                        return Err(EngineError::LimitExceeded { what: "interval size", used: count, limit: max });
                    }
                }
                let mut cur = x.clone();
                loop {
                    out.push(IndexElement::Lattice(cur.clone()));
                    let mut k = *rank;
                    loop {
                        if k == 0 {
                            return Ok(());
                        }
                        k -= 1;
                        if cur[k] < y[k] {
                            cur[k] += 1;
                            for j in k + 1..*rank {
                                cur[j] = x[j];
                            }
                            break;
                        }
                    }
                }
            }
            (PosetKind::Finite(fp), IndexElement::Atom(_), IndexElement::Atom(_)) => {
                let n = fp.labels.len();
                for u in 0..n {
                    let e = IndexElement::atom(&fp.labels[u]);
                    if self.leq_raw(a, &e) && self.leq_raw(&e, b) {
                        out.push(e);
                        if out.len() > max {
                            return Err(EngineError::LimitExceeded { what: "interval size", used: out.len(), limit: max });
                        }
                    }
                }
                Ok(())
            }
            (PosetKind::Product(pa, pb), IndexElement::Pair(x1, y1), IndexElement::Pair(x2, y2)) => {
                let left = {
                    let mut l = Vec::new();
                    pa.interval_raw(x1, x2, max, &mut l)?;
                    l
                };
                let right = {
                    let mut r = Vec::new();
                    pb.interval_raw(y1, y2, max, &mut r)?;
                    r
                };
                let total = left.len().saturating_mul(right.len());
                if total > max {
                    return Err(EngineError::LimitExceeded { what: "interval size", used: total, limit: max });
                }
                for l in &left {
                    for r in &right {
                        out.push(IndexElement::pair(l.clone(), r.clone()));
                    }
                }
                Ok(())
            }
            _ => unreachable!("membership checked before interval"),
        }
    }

    /// Number of elements of `[a, b]` (0 when `a ≰ b`), subject to `max`.
    pub fn interval_size(&self, a: &IndexElement, b: &IndexElement, max: usize) -> Result<usize> {
        Ok(self.interval(a, b, max)?.len())
    }

    /// Key for the documented linear extension of the poset order.
    pub fn linext_key(&self, el: &IndexElement) -> LinextKey {
        match (&self.kind, el) {
            (PosetKind::Lattice { .. }, IndexElement::Lattice(cs)) => {
                LinextKey::Lattice(cs.iter().sum(), cs.clone())
            }
            (PosetKind::Finite(fp), IndexElement::Atom(s)) => LinextKey::Pos(fp.topo_rank[fp.index[s]]),
            (PosetKind::Product(a, b), IndexElement::Pair(x, y)) => {
                LinextKey::Pair(Arc::new(a.linext_key(x)), Arc::new(b.linext_key(y)))
            }
            _ => unreachable!("membership checked before key computation"),
        }
    }

    /// All elements of a finite poset, in the linear extension.
    pub fn all_elements(&self) -> Option<Vec<IndexElement>> {
        match &self.kind {
            PosetKind::Lattice { .. } => None,
            PosetKind::Finite(fp) => {
                Some(fp.topo.iter().map(|&i| IndexElement::atom(&fp.labels[i])).collect())
            }
            PosetKind::Product(a, b) => {
                let (l, r) = (a.all_elements()?, b.all_elements()?);
                let mut out = Vec::with_capacity(l.len() * r.len());
                for x in &l {
                    for y in &r {
                        out.push(IndexElement::pair(x.clone(), y.clone()));
                    }
                }
                out.sort_by_key(|e| self.linext_key(e));
                Some(out)
            }
        }
    }

    /// The greatest element of a finite poset (it exists by directedness).
    pub fn top(&self) -> Option<IndexElement> {
        match &self.kind {
            PosetKind::Lattice { .. } => None,
            PosetKind::Finite(fp) => {
                let n = fp.labels.len();
                (0..n)
                    .find(|&t| (0..n).all(|i| fp.leq[i * n + t]))
                    .map(|t| IndexElement::atom(&fp.labels[t]))
            }
            PosetKind::Product(a, b) => Some(IndexElement::pair(a.top()?, b.top()?)),
        }
    }

    /// Upper corner for an anchored growth window: `steps` added to every
    /// lattice coordinate of `base`; finite factors jump to their top.
    pub fn grown_top(&self, base: &IndexElement, steps: i64) -> Result<IndexElement> {
        self.check_member(base)?;
        Ok(self.grown_top_raw(base, steps))
    }

    fn grown_top_raw(&self, base: &IndexElement, steps: i64) -> IndexElement {
        match (&self.kind, base) {
            (PosetKind::Lattice { .. }, IndexElement::Lattice(cs)) => {
                IndexElement::Lattice(cs.iter().map(|c| c + steps).collect())
            }
            (PosetKind::Finite(_), _) => self.top().expect("finite posets have a top"),
            (PosetKind::Product(a, b), IndexElement::Pair(x, y)) => {
                IndexElement::pair(a.grown_top_raw(x, steps), b.grown_top_raw(y, steps))
            }
            _ => unreachable!("membership checked before growth"),
        }
    }

    /// Step the upper corner of a box down by `steps` in every lattice
    /// coordinate (finite factors are left alone).  `None` if nothing moves.
    fn stepped_down(&self, hi: &IndexElement, steps: i64) -> Option<IndexElement> {
        match (&self.kind, hi) {
            (PosetKind::Lattice { .. }, IndexElement::Lattice(cs)) => {
                Some(IndexElement::Lattice(cs.iter().map(|c| c - steps).collect()))
            }
            (PosetKind::Finite(_), _) => None,
            (PosetKind::Product(a, b), IndexElement::Pair(x, y)) => {
                match (a.stepped_down(x, steps), b.stepped_down(y, steps)) {
                    (None, None) => None,
                    (sx, sy) => Some(IndexElement::pair(
                        sx.unwrap_or_else(|| (**x).clone()),
                        sy.unwrap_or_else(|| (**y).clone()),
                    )),
                }
            }
            _ => None,
        }
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PosetKind::Lattice { rank } => write!(f, "Z^{rank}"),
            PosetKind::Finite(fp) => write!(f, "finite({})", fp.labels.join(",")),
            PosetKind::Product(a, b) => write!(f, "{a} x {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum WindowShape {
    Box { lo: IndexElement, hi: IndexElement },
    Explicit,
}

/// A finite order-convex subset of a poset, with its elements listed in the
/// linear extension.
#[derive(Clone, Debug)]
pub struct Window {
    poset: Arc<Poset>,
    shape: WindowShape,
    elements: Vec<IndexElement>,
    position: BTreeMap<IndexElement, usize>,
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.poset, &other.poset) && self.elements == other.elements
    }
}
impl Eq for Window {}

impl Window {
    /// The box `[lo, hi]`; requires `lo <= hi`.
    pub fn interval_box(
        poset: &Arc<Poset>,
        lo: &IndexElement,
        hi: &IndexElement,
        limits: &Limits,
    ) -> Result<Window> {
        poset.check_member(lo)?;
        poset.check_member(hi)?;
        if !poset.leq_raw(lo, hi) {
            return Err(EngineError::InvalidWindow {
                reason: alloc::format!("box corners out of order: {lo} is not below {hi}"),
            });
        }
        let elements = poset.interval(lo, hi, limits.max_window)?;
        Ok(Self::from_sorted(
            poset.clone(),
            WindowShape::Box { lo: lo.clone(), hi: hi.clone() },
            elements,
        ))
    }

    /// An explicit element list; must be order-convex.
    pub fn from_elements(
        poset: &Arc<Poset>,
        elements: &[IndexElement],
        limits: &Limits,
    ) -> Result<Window> {
        if elements.is_empty() {
            return Err(EngineError::InvalidWindow { reason: "window cannot be empty".into() });
        }
        if elements.len() > limits.max_window {
            return Err(EngineError::LimitExceeded {
                what: "window size",
                used: elements.len(),
                limit: limits.max_window,
            });
        }
        for e in elements {
            poset.check_member(e)?;
        }
        let mut sorted: Vec<IndexElement> = elements.to_vec();
        sorted.sort_by_key(|e| poset.linext_key(e));
        sorted.dedup();
        let member: alloc::collections::BTreeSet<&IndexElement> = sorted.iter().collect();
        for a in &sorted {
            for b in &sorted {
                if poset.leq_raw(a, b) {
                    for x in poset.interval(a, b, limits.max_window)? {
                        if !member.contains(&x) {
                            return Err(EngineError::InvalidWindow {
                                reason: alloc::format!("not order-convex: {x} lies between {a} and {b} but is missing"),
                            });
                        }
                    }
                }
            }
        }
        Ok(Self::from_sorted(poset.clone(), WindowShape::Explicit, sorted))
    }

    /// The whole poset as a window — only for finite posets, where window
    /// policies become exact.
    pub fn full(poset: &Arc<Poset>, limits: &Limits) -> Result<Window> {
        let elements = poset.all_elements().ok_or_else(|| EngineError::InvalidWindow {
            reason: "full windows exist only for finite posets".into(),
        })?;
        if elements.len() > limits.max_window {
            return Err(EngineError::LimitExceeded {
                what: "window size",
                used: elements.len(),
                limit: limits.max_window,
            });
        }
        Ok(Self::from_sorted(poset.clone(), WindowShape::Explicit, elements))
    }

    fn from_sorted(poset: Arc<Poset>, shape: WindowShape, elements: Vec<IndexElement>) -> Window {
        let position = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Window { poset, shape, elements, position }
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    /// Elements in the linear extension.
    pub fn elements(&self) -> &[IndexElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, el: &IndexElement) -> bool {
        self.position.contains_key(el)
    }

    pub fn position(&self, el: &IndexElement) -> Option<usize> {
        self.position.get(el).copied()
    }

    pub fn box_corners(&self) -> Option<(&IndexElement, &IndexElement)> {
        match &self.shape {
            WindowShape::Box { lo, hi } => Some((lo, hi)),
            WindowShape::Explicit => None,
        }
    }

    /// Window elements strictly above `d` (`d` need not lie in the window).
    pub fn strict_upper_set(&self, d: &IndexElement) -> Result<Vec<IndexElement>> {
        self.poset.check_member(d)?;
        Ok(self.elements.iter().filter(|e| self.poset.lt_raw(d, e)).cloned().collect())
    }

    /// Window elements `>= d`.
    pub fn weak_upper_set(&self, d: &IndexElement) -> Result<Vec<IndexElement>> {
        self.poset.check_member(d)?;
        Ok(self.elements.iter().filter(|e| self.poset.leq_raw(d, e)).cloned().collect())
    }

    /// Is the subset of window elements above `d` nonempty?  Cuts with an
    /// empty upper set certify nothing and are skipped by torsion scans.
    pub fn cut_is_admissible(&self, d: &IndexElement) -> bool {
        self.elements.iter().any(|e| self.poset.lt_raw(d, e))
    }

    /// Shrink toward the lower corner.  Boxes step their upper corner down in
    /// every lattice coordinate; explicit windows drop their maximal
    /// elements.  `None` once nothing smaller exists.
    pub fn shrunk(&self, steps: i64) -> Option<Window> {
        match &self.shape {
            WindowShape::Box { lo, hi } => {
                let hi2 = self.poset.stepped_down(hi, steps)?;
                if !self.poset.leq_raw(lo, &hi2) {
                    return None;
                }
                let limits = Limits { max_window: self.elements.len(), ..Limits::default() };
                Window::interval_box(&self.poset, lo, &hi2, &limits).ok()
            }
            WindowShape::Explicit => {
                let mut remaining = self.elements.clone();
                for _ in 0..steps.max(0) {
                    let maximal: Vec<IndexElement> = remaining
                        .iter()
                        .filter(|e| !remaining.iter().any(|f| self.poset.lt_raw(e, f)))
                        .cloned()
                        .collect();
                    remaining.retain(|e| !maximal.contains(e));
                    if remaining.is_empty() {
                        return None;
                    }
                }
                Some(Self::from_sorted(self.poset.clone(), WindowShape::Explicit, remaining))
            }
        }
    }

    /// Nested chain of up to `len` windows ending in this one, innermost
    /// first.  Shorter if shrinking bottoms out.
    pub fn nested_chain(&self, len: usize) -> Vec<Window> {
        let mut chain = vec![self.clone()];
        for step in 1..len as i64 {
            match self.shrunk(step) {
                Some(w) if w.elements != chain.last().unwrap().elements => chain.push(w),
                _ => break,
            }
        }
        chain.reverse();
        chain
    }

    /// Is every element of `self` also in `other`?
    pub fn subset_of(&self, other: &Window) -> bool {
        self.elements.iter().all(|e| other.contains(e))
    }

    /// Elements with nothing above them inside the window (boxes have
    /// exactly one, the upper corner).
    pub fn maximal_elements(&self) -> Vec<IndexElement> {
        self.elements
            .iter()
            .filter(|e| !self.elements.iter().any(|f| self.poset.lt_raw(e, f)))
            .cloned()
            .collect()
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.shape {
            WindowShape::Box { lo, hi } => write!(f, "[{lo},{hi}]"),
            WindowShape::Explicit => {
                write!(f, "{{")?;
                for (i, e) in self.elements.iter().take(8).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{e}")?;
                }
                if self.elements.len() > 8 {
                    write!(f, ",… {} elements", self.elements.len())?;
                }
                write!(f, "}}")
            }
        }
    }
}
