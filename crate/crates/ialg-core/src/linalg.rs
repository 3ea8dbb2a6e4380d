//! Dense exact linear algebra: row reduction, kernels, solving, and an
//! incremental echelon form that the graded-component machinery leans on.
//!
//! Everything is deterministic: given the same rows in the same order the
//! reduced forms, pivot choices and kernel bases are identical down to the
//! last coefficient.

use alloc::vec;
use alloc::vec::Vec;

use crate::field::Field;

/// Dense row-major matrix over an exact field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn zero(field: &F, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![field.zero(); rows * cols] }
    }

    /// Build from explicit rows; `cols` disambiguates the empty case.
    pub fn from_rows(cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == cols));
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for r in rows {
            data.extend(r);
        }
        Matrix { rows: nrows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        &self.data[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, v: F::Elem) {
        self.data[r * self.cols + c] = v;
    }
    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self, field: &F) -> Matrix<F> {
        let mut t = Matrix::zero(field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    /// In-place reduced row echelon form, scanning columns left to right.
    /// Returns the pivot columns in scan order.
    pub fn rref(&mut self, field: &F) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            let Some(pr) = (next_row..self.rows).find(|&r| !field.is_zero(self.get(r, col)))
            else {
                continue;
            };
            self.swap_rows(pr, next_row);
            let inv = field.inv(self.get(next_row, col)).expect("pivot is nonzero");
            self.scale_row(field, next_row, &inv);
            for r in 0..self.rows {
                if r != next_row && !field.is_zero(self.get(r, col)) {
                    let c = field.neg(self.get(r, col));
                    self.add_multiple(field, r, next_row, &c);
                }
            }
            pivots.push(col);
            next_row += 1;
            if next_row == self.rows {
                break;
            }
        }
        pivots
    }

    pub fn rank(&self, field: &F) -> usize {
        self.clone().rref(field).len()
    }

    /// Canonical basis of the right kernel: one vector per free column, in
    /// ascending free-column order, with a 1 in the free position.
    pub fn nullspace(&self, field: &F) -> Vec<Vec<F::Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![field.zero(); self.cols];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// A solution of `self * x = b` with all free variables zero, or `None`
    /// if the system is inconsistent.
    pub fn solve(&self, field: &F, b: &[F::Elem]) -> Option<Vec<F::Elem>> {
        debug_assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zero(field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let pivots = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(r, self.cols).clone();
        }
        Some(x)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn scale_row(&mut self, field: &F, r: usize, by: &F::Elem) {
        for c in 0..self.cols {
            let v = field.mul(self.get(r, c), by);
            self.set(r, c, v);
        }
    }

    /// row[r] += c * row[src]
    fn add_multiple(&mut self, field: &F, r: usize, src: usize, c: &F::Elem) {
        for col in 0..self.cols {
            let v = field.add_mul(self.get(r, col), c, self.get(src, col));
            self.set(r, col, v);
        }
    }
}

/// Which end of a row the pivot is chosen from.
///
/// `Reverse` pivots on the *largest* column, which is what quotient bases
/// want: eliminated coordinates are the late ones, surviving basis
/// coordinates the early ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotScan {
    Forward,
    Reverse,
}

/// Incrementally maintained reduced echelon basis of a row space.
///
/// Invariant: rows are normalized (pivot entry 1) and fully reduced — every
/// row is zero at every other row's pivot.  For a fixed scan direction the
/// stored basis depends only on the row space, not on insertion order.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    field: F,
    cols: usize,
    scan: PivotScan,
    rows: Vec<Vec<F::Elem>>,
    /// pivot column -> index into `rows`
    pivots: alloc::collections::BTreeMap<usize, usize>,
}

impl<F: Field> Echelon<F> {
    pub fn new(field: F, cols: usize, scan: PivotScan) -> Self {
        Echelon { field, cols, scan, rows: Vec::new(), pivots: alloc::collections::BTreeMap::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivots.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivots.contains_key(&col)
    }

    /// The stored row whose pivot is `col`.
    pub fn row_for_pivot(&self, col: usize) -> Option<&[F::Elem]> {
        self.pivots.get(&col).map(|&i| self.rows[i].as_slice())
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, mut row: Vec<F::Elem>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        self.reduce(&mut row);
        let Some(p) = self.find_pivot(&row) else { return false };
        let inv = self.field.inv(&row[p]).expect("pivot is nonzero");
        for v in row.iter_mut() {
            *v = self.field.mul(v, &inv);
        }
        for other in self.rows.iter_mut() {
            if !self.field.is_zero(&other[p]) {
                let c = self.field.neg(&other[p]);
                for (o, n) in other.iter_mut().zip(row.iter()) {
                    *o = self.field.add_mul(o, &c, n);
                }
            }
        }
        self.pivots.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Eliminate the pivot coordinates of `row` against the stored basis.
    pub fn reduce(&self, row: &mut [F::Elem]) {
        debug_assert_eq!(row.len(), self.cols);
        for (&p, &i) in self.pivots.iter() {
            if self.field.is_zero(&row[p]) {
                continue;
            }
            let c = self.field.neg(&row[p]);
            let basis_row = &self.rows[i];
            for (o, n) in row.iter_mut().zip(basis_row.iter()) {
                *o = self.field.add_mul(o, &c, n);
            }
        }
    }

    pub fn contains(&self, row: &[F::Elem]) -> bool {
        let mut r = row.to_vec();
        self.reduce(&mut r);
        r.iter().all(|v| self.field.is_zero(v))
    }

    /// Coefficients of `row` over the canonical rows (see [`Self::canonical_rows`]),
    /// or `None` if it is outside the span.
    pub fn express(&self, row: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let mut r = row.to_vec();
        let mut coeffs = Vec::with_capacity(self.rows.len());
        for (&p, &i) in self.pivots.iter() {
            let c = r[p].clone();
            if !self.field.is_zero(&c) {
                let neg = self.field.neg(&c);
                let basis_row = &self.rows[i];
                for (o, n) in r.iter_mut().zip(basis_row.iter()) {
                    *o = self.field.add_mul(o, &neg, n);
                }
            }
            coeffs.push(c);
        }
        if r.iter().all(|v| self.field.is_zero(v)) {
            Some(coeffs)
        } else {
            None
        }
    }

    /// The unique reduced basis, ordered by ascending pivot column.  This is
    /// the order `express` coefficients refer to.
    pub fn canonical_rows(&self) -> Vec<Vec<F::Elem>> {
        self.pivots.values().map(|&i| self.rows[i].clone()).collect()
    }

    fn find_pivot(&self, row: &[F::Elem]) -> Option<usize> {
        match self.scan {
            PivotScan::Forward => row.iter().position(|v| !self.field.is_zero(v)),
            PivotScan::Reverse => row.iter().rposition(|v| !self.field.is_zero(v)),
        }
    }
}

/// Sparse vector: column -> nonzero value.  Helpers below keep the "no zero
/// entries stored" invariant.
pub type SparseVec<F> = alloc::collections::BTreeMap<usize, <F as Field>::Elem>;

pub fn sparse_add_mul<F: Field>(
    field: &F,
    acc: &mut SparseVec<F>,
    c: &F::Elem,
    row: &SparseVec<F>,
) {
    for (&col, v) in row {
        let entry = acc.entry(col).or_insert_with(|| field.zero());
        *entry = field.add_mul(entry, c, v);
        if field.is_zero(entry) {
            acc.remove(&col);
        }
    }
}

pub fn sparse_to_dense<F: Field>(field: &F, cols: usize, row: &SparseVec<F>) -> Vec<F::Elem> {
    let mut out = vec![field.zero(); cols];
    for (&c, v) in row {
        out[c] = v.clone();
    }
    out
}

pub fn dense_to_sparse<F: Field>(field: &F, row: &[F::Elem]) -> SparseVec<F> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !field.is_zero(v))
        .map(|(c, v)| (c, v.clone()))
        .collect()
}

/// Incremental echelon basis over sparse rows.
///
/// Unlike [`Echelon`] the stored rows are only *head*-normalized: each row's
/// pivot (its extreme nonzero column in scan direction) is unique and has
/// coefficient 1, but tails may mention other pivots and are eliminated
/// lazily.  That keeps binomial-style relation systems sparse through the
/// whole reduction, which is what makes large graded components affordable.
#[derive(Clone, Debug)]
pub struct SparseEchelon<F: Field> {
    field: F,
    scan: PivotScan,
    rows: alloc::collections::BTreeMap<usize, SparseVec<F>>,
}

impl<F: Field> SparseEchelon<F> {
    pub fn new(field: F, scan: PivotScan) -> Self {
        SparseEchelon { field, scan, rows: alloc::collections::BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_cols(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Head-normalized stored row for a pivot column.  With `Reverse` scan
    /// every tail column is strictly below the pivot.
    pub fn row_for_pivot(&self, col: usize) -> Option<&SparseVec<F>> {
        self.rows.get(&col)
    }

    fn head(&self, row: &SparseVec<F>) -> Option<usize> {
        match self.scan {
            PivotScan::Forward => row.keys().next().copied(),
            PivotScan::Reverse => row.keys().next_back().copied(),
        }
    }

    /// Insert a row; returns whether the rank grew.
    pub fn insert(&mut self, mut row: SparseVec<F>) -> bool {
        loop {
            let Some(h) = self.head(&row) else { return false };
            match self.rows.get(&h) {
                Some(stored) => {
                    let c = self.field.neg(&row[&h]);
                    let stored = stored.clone();
                    sparse_add_mul(&self.field, &mut row, &c, &stored);
                    debug_assert!(!row.contains_key(&h));
                }
                None => {
                    let inv = self.field.inv(&row[&h]).expect("head entry is nonzero");
                    let normalized: SparseVec<F> =
                        row.iter().map(|(&c, v)| (c, self.field.mul(v, &inv))).collect();
                    self.rows.insert(h, normalized);
                    return true;
                }
            }
        }
    }

    /// Fully eliminate every pivot column from `row`.
    pub fn reduce(&self, row: &mut SparseVec<F>) {
        loop {
            // Find the extreme remaining column that is a pivot; eliminating
            // it only introduces columns further along the scan direction.
            let hit = match self.scan {
                PivotScan::Forward => row.keys().copied().find(|c| self.rows.contains_key(c)),
                PivotScan::Reverse => row.keys().rev().copied().find(|c| self.rows.contains_key(c)),
            };
            let Some(col) = hit else { return };
            let c = self.field.neg(&row[&col]);
            let stored = self.rows[&col].clone();
            sparse_add_mul(&self.field, row, &c, &stored);
            debug_assert!(!row.contains_key(&col));
        }
    }

    pub fn contains(&self, row: &SparseVec<F>) -> bool {
        let mut r = row.clone();
        self.reduce(&mut r);
        r.is_empty()
    }

    /// The unique fully reduced basis rows, keyed by ascending pivot column.
    pub fn canonical_rows(&self) -> Vec<(usize, SparseVec<F>)> {
        let mut out: Vec<(usize, SparseVec<F>)> = Vec::with_capacity(self.rows.len());
        for (&p, row) in &self.rows {
            let mut r = row.clone();
            loop {
                let other = r.keys().copied().find(|&c| c != p && self.rows.contains_key(&c));
                let Some(col) = other else { break };
                let c = self.field.neg(&r[&col]);
                let stored = self.rows[&col].clone();
                sparse_add_mul(&self.field, &mut r, &c, &stored);
            }
            out.push((p, r));
        }
        out
    }
}

/// Quotient of a coordinate space by the span held in a reverse-scan
/// echelon: the non-pivot columns survive as the quotient basis (earliest
/// columns win) and every pivot column gets an expansion over them.
/// Expansions are computed in ascending pivot order; under `Reverse` scan a
/// stored row's tail only mentions earlier columns, so earlier expansions
/// are always available for substitution.
pub fn quotient_reductions<F: Field>(
    field: &F,
    ncols: usize,
    ech: &SparseEchelon<F>,
) -> (Vec<usize>, alloc::collections::BTreeMap<usize, Vec<(usize, F::Elem)>>) {
    debug_assert!(matches!(ech.scan, PivotScan::Reverse));
    let basis: Vec<usize> = (0..ncols).filter(|c| !ech.is_pivot(*c)).collect();
    let mut reductions: alloc::collections::BTreeMap<usize, Vec<(usize, F::Elem)>> =
        alloc::collections::BTreeMap::new();
    for p in ech.pivot_cols().collect::<Vec<_>>() {
        let row = ech.row_for_pivot(p).expect("pivot row exists").clone();
        let mut acc: alloc::collections::BTreeMap<usize, F::Elem> = alloc::collections::BTreeMap::new();
        for (&col, v) in row.iter().filter(|(&c, _)| c != p) {
            let c = field.neg(v);
            match basis.binary_search(&col) {
                Ok(b) => {
                    let e = acc.entry(b).or_insert_with(|| field.zero());
                    *e = field.add(e, &c);
                }
                Err(_) => {
                    for (b, w) in &reductions[&col] {
                        let e = acc.entry(*b).or_insert_with(|| field.zero());
                        *e = field.add_mul(e, &c, w);
                    }
                }
            }
        }
        acc.retain(|_, v| !field.is_zero(v));
        reductions.insert(p, acc.into_iter().collect());
    }
    (basis, reductions)
}

/// Basis of `{c : sum_i c_i row_i = 0}` for sparse rows over `cols` real
/// columns, by eliminating identity-augmented rows: stored rows whose pivot
/// landed beyond the real columns have zero real part, and their tracking
/// parts are the kernel combinations.
pub fn left_kernel<F: Field>(field: &F, cols: usize, rows: &[SparseVec<F>]) -> Vec<Vec<F::Elem>> {
    let mut e = SparseEchelon::new(field.clone(), PivotScan::Forward);
    for (i, r) in rows.iter().enumerate() {
        let mut aug = r.clone();
        aug.insert(cols + i, field.one());
        e.insert(aug);
    }
    let mut out = Vec::new();
    for (_, row) in e.rows.range(cols..) {
        let mut c = vec![field.zero(); rows.len()];
        for (&col, v) in row {
            debug_assert!(col >= cols);
            c[col - cols] = v.clone();
        }
        out.push(c);
    }
    out
}

/// Convenience: an echelon basis spanning the given rows.
pub fn span<F: Field>(field: &F, cols: usize, rows: &[Vec<F::Elem>], scan: PivotScan) -> Echelon<F> {
    let mut e = Echelon::new(field.clone(), cols, scan);
    for r in rows {
        e.insert(r.clone());
    }
    e
}

/// Do two sets of rows span the same subspace?
pub fn same_span<F: Field>(field: &F, cols: usize, a: &[Vec<F::Elem>], b: &[Vec<F::Elem>]) -> bool {
    let ea = span(field, cols, a, PivotScan::Forward);
    let eb = span(field, cols, b, PivotScan::Forward);
    ea.rank() == eb.rank() && a.iter().all(|r| eb.contains(r)) && b.iter().all(|r| ea.contains(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn q(n: i64) -> num_rational::BigRational {
        Rationals.from_integer(n)
    }

    #[test]
    fn rref_and_rank() {
        let f = Rationals;
        let mut m = Matrix::<Rationals>::from_rows(
            3,
            alloc::vec![
                alloc::vec![q(2), q(4), q(2)],
                alloc::vec![q(1), q(2), q(3)],
                alloc::vec![q(3), q(6), q(5)],
            ],
        );
        let pivots = m.rref(&f);
        assert_eq!(pivots, alloc::vec![0, 2]);
        assert_eq!(m.rank(&f), 2);
        assert_eq!(*m.get(0, 1), q(2)); // reduced: x + 2y, z
        assert_eq!(*m.get(0, 2), q(0));
    }

    #[test]
    fn nullspace_is_canonical_and_correct() {
        let f = Rationals;
        let m = Matrix::<Rationals>::from_rows(
            3,
            alloc::vec![alloc::vec![q(1), q(2), q(1)], alloc::vec![q(2), q(4), q(2)]],
        );
        let ns = m.nullspace(&f);
        assert_eq!(ns, alloc::vec![alloc::vec![q(-2), q(1), q(0)], alloc::vec![q(-1), q(0), q(1)]]);
        for v in &ns {
            for r in 0..m.nrows() {
                let mut acc = f.zero();
                for c in 0..3 {
                    acc = f.add_mul(&acc, m.get(r, c), &v[c]);
                }
                assert!(f.is_zero(&acc));
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = Rationals;
        let m = Matrix::<Rationals>::from_rows(
            2,
            alloc::vec![alloc::vec![q(1), q(1)], alloc::vec![q(0), q(2)]],
        );
        let x = m.solve(&f, &[q(3), q(4)]).unwrap();
        assert_eq!(x, alloc::vec![q(1), q(2)]);
        let bad = Matrix::<Rationals>::from_rows(
            2,
            alloc::vec![alloc::vec![q(1), q(1)], alloc::vec![q(2), q(2)]],
        );
        assert!(bad.solve(&f, &[q(1), q(3)]).is_none());
    }

    #[test]
    fn reverse_scan_pivots_late_columns() {
        // One relation row over path columns [xy, yx]: xy - yx = 0.
        // Reverse scan must pivot on yx, leaving xy as the surviving basis column.
        let f = Rationals;
        let mut e = Echelon::new(f.clone(), 2, PivotScan::Reverse);
        assert!(e.insert(alloc::vec![q(1), q(-1)]));
        assert!(e.is_pivot(1));
        assert!(!e.is_pivot(0));
        // stored row is normalized: -xy + yx = 0  =>  yx = xy
        assert_eq!(e.row_for_pivot(1).unwrap(), &[q(-1), q(1)][..]);
        assert!(!e.insert(alloc::vec![q(-2), q(2)]));
    }

    #[test]
    fn express_over_canonical_rows() {
        let f = PrimeField::new(5).unwrap();
        let mut e = Echelon::new(f.clone(), 3, PivotScan::Forward);
        e.insert(alloc::vec![1, 2, 0]);
        e.insert(alloc::vec![0, 1, 1]);
        let c = e.express(&[1, 4, 2]).unwrap();
        // canonical rows: [1,0,3], [0,1,1]; 1*[1,0,3] + 4*[0,1,1] = [1,4,2] mod 5
        assert_eq!(c, alloc::vec![1, 4]);
        assert!(e.express(&[0, 0, 1]).is_none());
        assert!(e.contains(&[2, 4, 0]));
    }

    #[test]
    fn same_span_detects_equality() {
        let f = Rationals;
        let a = alloc::vec![alloc::vec![q(1), q(1)], alloc::vec![q(0), q(1)]];
        let b = alloc::vec![alloc::vec![q(1), q(0)], alloc::vec![q(3), q(1)]];
        let c = alloc::vec![alloc::vec![q(1), q(1)]];
        assert!(same_span(&f, 2, &a, &b));
        assert!(!same_span(&f, 2, &a, &c));
    }

    fn sv(entries: &[(usize, i64)]) -> SparseVec<Rationals> {
        entries.iter().map(|&(c, v)| (c, q(v))).collect()
    }

    #[test]
    fn sparse_echelon_matches_dense_rank() {
        let f = Rationals;
        let rows = alloc::vec![
            sv(&[(0, 1), (3, -1)]),
            sv(&[(1, 2), (3, 2)]),
            sv(&[(0, 1), (1, 2), (3, 1)]),
            sv(&[(2, 5)]),
        ];
        for scan in [PivotScan::Forward, PivotScan::Reverse] {
            let mut e = SparseEchelon::new(f.clone(), scan);
            let mut grew = 0;
            for r in &rows {
                if e.insert(r.clone()) {
                    grew += 1;
                }
            }
            assert_eq!(e.rank(), 3);
            assert_eq!(grew, 3);
            assert!(e.contains(&sv(&[(0, 2), (1, 4), (3, 2)])));
            assert!(!e.contains(&sv(&[(3, 1)])));
        }
    }

    #[test]
    fn sparse_reverse_scan_pivots_on_latest_column() {
        let f = Rationals;
        let mut e = SparseEchelon::new(f.clone(), PivotScan::Reverse);
        e.insert(sv(&[(0, 1), (1, -1)]));
        assert!(e.is_pivot(1));
        assert!(!e.is_pivot(0));
        // head-normalized: pivot coefficient 1, tail on earlier columns
        assert_eq!(e.row_for_pivot(1).unwrap(), &sv(&[(0, -1), (1, 1)]));
        let mut r = sv(&[(0, 3), (1, 2)]);
        e.reduce(&mut r);
        assert_eq!(r, sv(&[(0, 5)]));
    }

    #[test]
    fn sparse_canonical_rows_are_fully_reduced() {
        let f = Rationals;
        let mut e = SparseEchelon::new(f.clone(), PivotScan::Forward);
        e.insert(sv(&[(0, 1), (1, 2), (2, 1)]));
        e.insert(sv(&[(1, 1), (2, 1)]));
        let canon = e.canonical_rows();
        assert_eq!(canon, alloc::vec![(0, sv(&[(0, 1), (2, -1)])), (1, sv(&[(1, 1), (2, 1)]))]);
    }

    #[test]
    fn sparse_dense_round_trips() {
        let f = Rationals;
        let dense = alloc::vec![q(0), q(3), q(0), q(-1)];
        let sp = dense_to_sparse(&f, &dense);
        assert_eq!(sp.len(), 2);
        assert_eq!(sparse_to_dense(&f, 4, &sp), dense);
    }
}
