use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::sparse::{RationalMatrix, SparseVec};
use crate::rational::Rational;

static DENSE_THRESHOLD: AtomicUsize = AtomicUsize::new(64);

/// Column count at or below which kernels are computed with dense elimination.
pub fn dense_threshold() -> usize {
    DENSE_THRESHOLD.load(Ordering::Relaxed)
}

pub fn set_dense_threshold(cols: usize) {
    DENSE_THRESHOLD.store(cols, Ordering::Relaxed);
}

/// Incrementally maintained reduced row echelon form.
///
/// Every row has leading coefficient 1 at its pivot and zeros at every other
/// row's pivot, so a finished basis is canonical for its span.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Subtracts the span's component: the result vanishes at every pivot.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Rational)> = v
            .iter()
            .filter_map(|(i, x)| self.pivot_row.get(&i).map(|&r| (r, x.clone())))
            .collect();
        let mut out = v.clone();
        for (r, x) in hits {
            out = out.axpy(&-x, &self.rows[r]);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Inserts `v`; returns true if the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let w = self.reduce(v);
        let Some((p, lead)) = w.leading() else {
            return false;
        };
        let w = w.scale(&lead.recip());
        for row in self.rows.iter_mut() {
            let c = row.get(p);
            if !c.is_zero() {
                *row = row.axpy(&-c, &w);
            }
        }
        self.pivot_row.insert(p, self.rows.len());
        self.rows.push(w);
        true
    }

    /// Canonical rows sorted by pivot.
    pub fn into_sorted_rows(self) -> Vec<SparseVec> {
        let mut rows = self.rows;
        rows.sort_by_key(|r| r.leading().map(|(i, _)| i));
        rows
    }
}

/// Canonical RREF rows of the span of `vectors`.
pub fn rref_rows<'a, I: IntoIterator<Item = &'a SparseVec>>(vectors: I) -> Vec<SparseVec> {
    let mut e = Echelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.into_sorted_rows()
}

/// Kernel vectors read off from RREF rows of a matrix with `ncols` columns.
fn kernel_from_rref(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let pivots: Vec<usize> = rows.iter().map(|r| r.leading().unwrap().0).collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    // Column f of the RREF, restricted to pivot rows.
    let mut col_entries: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for (j, x) in row.iter() {
            if !is_pivot[j] {
                col_entries[j].push((pivots[r], -x));
            }
        }
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut e = std::mem::take(&mut col_entries[f]);
            e.push((f, Rational::ONE));
            SparseVec::from_entries(e)
        })
        .collect()
}

/// Sparse path: kernel basis (not yet canonical) of the matrix given by its rows.
pub fn kernel_sparse(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let r = rref_rows(rows.iter());
    kernel_from_rref(&r, ncols)
}

/// Dense path: Gauss-Jordan elimination on a dense copy.
pub fn kernel_dense(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    let mut a: Vec<Vec<Rational>> = rows.iter().filter(|r| !r.is_zero()).map(|r| r.to_dense(ncols)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pr) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = a[rank][col].recip();
        for x in a[rank].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[rank].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &(&c * y);
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == a.len() {
            break;
        }
    }
    let rref: Vec<SparseVec> = a[..rank].iter().map(|r| SparseVec::from_dense(r)).collect();
    kernel_from_rref(&rref, ncols)
}

/// Kernel basis of a matrix given by rows, dispatching on the dense threshold.
pub fn kernel_of_rows(rows: &[SparseVec], ncols: usize) -> Vec<SparseVec> {
    if ncols <= dense_threshold() {
        kernel_dense(rows, ncols)
    } else {
        kernel_sparse(rows, ncols)
    }
}

/// Linear relations among `cols`: coefficient vectors `c` with `Σ c_j cols[j] = 0`.
pub fn relations(cols: &[SparseVec]) -> Vec<SparseVec> {
    let nrows = cols.iter().filter_map(|c| c.max_index()).max().map_or(0, |m| m + 1);
    let m = RationalMatrix::from_columns(nrows, cols.to_vec());
    kernel_of_rows(&m.row_vectors(), cols.len())
}

/// Records how each echelon row was formed from the inserted generators, so
/// members of the span can be written as combinations of the generators.
#[derive(Clone, Debug, Default)]
pub struct SpanSolver {
    rows: Vec<SparseVec>,
    history: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
    generators: usize,
}

impl SpanSolver {
    pub fn new<'a, I: IntoIterator<Item = &'a SparseVec>>(gens: I) -> Self {
        let mut s = SpanSolver::default();
        for g in gens {
            s.push(g);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    fn push(&mut self, g: &SparseVec) {
        let idx = self.generators;
        self.generators += 1;
        let (w, h) = self.reduce_with_history(g, SparseVec::unit(idx));
        if let Some((p, lead)) = w.leading() {
            let inv = lead.recip();
            self.pivot_row.insert(p, self.rows.len());
            self.rows.push(w.scale(&inv));
            self.history.push(h.scale(&inv));
        }
    }

    /// Leading-term reduction; rows are in semi-echelon form only.
    fn reduce_with_history(&self, v: &SparseVec, mut hist: SparseVec) -> (SparseVec, SparseVec) {
        let mut w = v.clone();
        let mut floor = 0usize;
        loop {
            let next = w.iter().find(|(i, _)| *i >= floor && self.pivot_row.contains_key(i));
            let Some((i, x)) = next else { break };
            let x = x.clone();
            let r = self.pivot_row[&i];
            w = w.axpy(&-&x, &self.rows[r]);
            hist = hist.axpy(&-&x, &self.history[r]);
            floor = i + 1;
        }
        (w, hist)
    }

    /// Coefficients over the generators reproducing `v`, or `None` if `v` is outside the span.
    pub fn solve(&self, v: &SparseVec) -> Option<SparseVec> {
        let (w, hist) = self.reduce_with_history(v, SparseVec::new());
        if w.is_zero() {
            Some(hist.scale(&Rational::from_int(-1)))
        } else {
            None
        }
    }
}
