use std::collections::BTreeMap;

use crate::algebra::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{self, Dense};

type SparseRow = BTreeMap<usize, Scalar>;

/// Column-major sparse matrix over ℚ(i).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    columns: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, columns: vec![SparseRow::new(); cols] }
    }

    /// Entries equal to zero are dropped; row indices must be `< rows`.
    pub fn from_columns(rows: usize, columns: Vec<SparseRow>) -> Result<Self> {
        let mut out = Vec::with_capacity(columns.len());
        for col in columns {
            if col.keys().next_back().is_some_and(|&r| r >= rows) {
                return Err(Error::Structural(format!("row index out of range for a {rows}-row matrix")));
            }
            out.push(col.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(SparseMatrix { rows, columns: out })
    }

    pub fn from_dense(m: &Dense, cols: usize) -> Self {
        let mut columns = vec![SparseRow::new(); cols];
        for (r, row) in m.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    columns[c].insert(r, v.clone());
                }
            }
        }
        SparseMatrix { rows: m.len(), columns }
    }

    pub fn to_dense(&self) -> Dense {
        let mut d = linalg::zeros(self.rows, self.cols());
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                d[r][c] = v.clone();
            }
        }
        d
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &BTreeMap<usize, Scalar> {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c].get(&r).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }

    /// `self · other`.
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols() != other.rows {
            return Err(Error::Structural(format!(
                "cannot multiply {}×{} by {}×{}",
                self.rows,
                self.cols(),
                other.rows,
                other.cols()
            )));
        }
        let columns = other
            .columns
            .iter()
            .map(|oc| {
                let mut acc = SparseRow::new();
                for (&k, b) in oc {
                    for (&r, a) in &self.columns[k] {
                        *acc.entry(r).or_insert_with(Scalar::zero) += a * b;
                    }
                }
                acc.retain(|_, v| !v.is_zero());
                acc
            })
            .collect();
        Ok(SparseMatrix { rows: self.rows, columns })
    }

    fn row_major(&self) -> Vec<SparseRow> {
        let mut rows = vec![SparseRow::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for (&r, v) in col {
                rows[r].insert(c, v.clone());
            }
        }
        rows
    }
}

fn sub_scaled(r: &mut SparseRow, p: &SparseRow, f: &Scalar) {
    for (&c, v) in p {
        let e = r.entry(c).or_insert_with(Scalar::zero);
        *e -= &(v * f);
        if e.is_zero() {
            r.remove(&c);
        }
    }
}

/// Exact rank and a right-kernel basis (one vector per free column, with a 1
/// at that column and 0 at every other free column).
///
/// Rows are reduced in index order against pivots keyed by their leading
/// column, so the result depends only on the matrix.
pub fn exact_rank_kernel(m: &SparseMatrix) -> (usize, Vec<Vec<Scalar>>) {
    let r = reduce(m);
    (r.rank, r.kernel)
}

/// Outcome of the elimination: `kernel[k]` belongs to `free[k]`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub rank: usize,
    pub free: Vec<usize>,
    pub kernel: Vec<Vec<Scalar>>,
}

pub fn reduce(m: &SparseMatrix) -> Reduction {
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut r in m.row_major() {
        while let Some((&c, v)) = r.iter().next() {
            if let Some(p) = pivots.get(&c) {
                let f = v.clone();
                sub_scaled(&mut r, p, &f);
            } else {
                let inv = v.inv().expect("nonzero leading entry");
                for x in r.values_mut() {
                    *x = &*x * &inv;
                }
                pivots.insert(c, r);
                break;
            }
        }
    }
    // back substitution; pivot rows already carry zeros at larger pivot columns
    let cols: Vec<usize> = pivots.keys().copied().collect();
    for (idx, &c) in cols.iter().enumerate().rev() {
        let p = pivots[&c].clone();
        for &lower in &cols[..idx] {
            let row = pivots.get_mut(&lower).expect("pivot present");
            if let Some(f) = row.get(&c).cloned() {
                sub_scaled(row, &p, &f);
            }
        }
    }
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains_key(c)).collect();
    let kernel = free
        .iter()
        .map(|&free| {
            let mut v = vec![Scalar::zero(); m.cols()];
            v[free] = Scalar::one();
            for (&pc, row) in &pivots {
                if let Some(x) = row.get(&free) {
                    v[pc] = -x;
                }
            }
            v
        })
        .collect();
    Reduction { rank: pivots.len(), free, kernel }
}
