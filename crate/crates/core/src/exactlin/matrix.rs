use super::scalar::{Field, Scalar};
use super::sparse::SparseVector;
use super::LinAlgError;

/// Below this density the sparse elimination path is used; once fill-in pushes the
/// partial echelon form above it, elimination restarts on a dense copy.
pub const DEFAULT_DENSITY_THRESHOLD: f64 = 0.25;

/// Row-major sparse matrix over a fixed field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    nrows: usize,
    ncols: usize,
    data: Vec<SparseVector>,
}

/// Reduced row echelon form: row `k` has a leading one in column `pivots[k]` and zeros in
/// every other pivot column. Pivots are strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub ncols: usize,
    pub pivots: Vec<usize>,
    pub rows: Vec<SparseVector>,
}

impl Matrix {
    pub fn zeros(field: Field, nrows: usize, ncols: usize) -> Self {
        Self { field, nrows, ncols, data: vec![SparseVector::new(); nrows] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let data = (0..n).map(|i| SparseVector::unit(i, field.one())).collect();
        Self { field, nrows: n, ncols: n, data }
    }

    pub fn from_rows(field: Field, ncols: usize, rows: Vec<SparseVector>) -> Self {
        debug_assert!(rows.iter().all(|r| r.entries().last().is_none_or(|(c, _)| *c < ncols)));
        Self { field, nrows: rows.len(), ncols, data: rows }
    }

    /// Repeated `(row, col)` positions are summed.
    pub fn from_triplets(
        field: Field,
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Scalar)>,
    ) -> Result<Self, LinAlgError> {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); nrows];
        for (r, c, x) in triplets {
            if r >= nrows || c >= ncols {
                return Err(LinAlgError::DimensionMismatch {
                    context: "triplet",
                    expected: (nrows, ncols),
                    found: (r, c),
                });
            }
            buckets[r].push((c, x));
        }
        let data = buckets.into_iter().map(SparseVector::from_entries).collect();
        Ok(Self { field, nrows, ncols, data })
    }

    pub fn from_dense(field: Field, ncols: usize, rows: &[Vec<Scalar>]) -> Result<Self, LinAlgError> {
        let mut data = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != ncols {
                return Err(LinAlgError::DimensionMismatch {
                    context: "dense row",
                    expected: (rows.len(), ncols),
                    found: (rows.len(), row.len()),
                });
            }
            data.push(SparseVector::from_sorted(row.iter().cloned().enumerate().collect()));
        }
        Ok(Self { field, nrows: rows.len(), ncols, data })
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let dense: Vec<Vec<Scalar>> =
            rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_dense(field, ncols, &dense).expect("ragged rows")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn row(&self, r: usize) -> &SparseVector {
        &self.data[r]
    }

    pub fn rows(&self) -> &[SparseVector] {
        &self.data
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(SparseVector::nnz).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.data[r].get(c).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn density(&self) -> f64 {
        if self.nrows == 0 || self.ncols == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.nrows as f64 * self.ncols as f64)
    }

    pub fn transpose(&self) -> Matrix {
        let mut buckets: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); self.ncols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, x) in row.iter() {
                buckets[c].push((r, x.clone()));
            }
        }
        let data = buckets.into_iter().map(SparseVector::from_sorted).collect();
        Matrix { field: self.field, nrows: self.ncols, ncols: self.nrows, data }
    }

    pub fn mul_vec(&self, v: &SparseVector) -> SparseVector {
        let entries = self
            .data
            .iter()
            .enumerate()
            .filter_map(|(r, row)| sparse_dot(row, v).map(|x| (r, x)))
            .collect();
        SparseVector::from_sorted(entries)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinAlgError> {
        if self.ncols != other.nrows {
            return Err(LinAlgError::DimensionMismatch {
                context: "product",
                expected: (self.ncols, self.ncols),
                found: (other.nrows, other.ncols),
            });
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc = SparseVector::new();
                for (k, x) in row.iter() {
                    acc = acc.axpy(x, &other.data[k]);
                }
                acc
            })
            .collect();
        Ok(Matrix { field: self.field, nrows: self.nrows, ncols: other.ncols, data })
    }

    pub fn rref(&self) -> Rref {
        self.rref_with_threshold(DEFAULT_DENSITY_THRESHOLD)
    }

    pub fn rref_with_threshold(&self, threshold: f64) -> Rref {
        if self.density() > threshold && self.nrows * self.ncols > 0 {
            return dense_rref(self);
        }
        match sparse_echelon(self, Some(threshold)) {
            Some(mut ech) => {
                ech.back_substitute();
                ech.into_rref()
            }
            None => dense_rref(self),
        }
    }

    pub fn rank(&self) -> usize {
        match sparse_echelon(self, Some(DEFAULT_DENSITY_THRESHOLD)) {
            Some(ech) => ech.rows.len(),
            None => dense_rref(self).pivots.len(),
        }
    }

    /// Exact basis of the null space, one vector per free column in increasing order.
    pub fn kernel_basis(&self) -> Vec<SparseVector> {
        self.rref().kernel_basis(self.field)
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &SparseVector) -> Result<Option<SparseVector>, LinAlgError> {
        if b.entries().last().is_some_and(|(i, _)| *i >= self.nrows) {
            return Err(LinAlgError::DimensionMismatch {
                context: "right-hand side",
                expected: (self.nrows, 1),
                found: (b.entries().last().unwrap().0 + 1, 1),
            });
        }
        let aug_col = self.ncols;
        let rows = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| match b.get(r) {
                Some(x) => {
                    let mut e = row.entries().to_vec();
                    e.push((aug_col, x.clone()));
                    SparseVector::from_sorted(e)
                }
                None => row.clone(),
            })
            .collect();
        let aug = Matrix::from_rows(self.field, self.ncols + 1, rows);
        let rref = aug.rref();
        if rref.pivots.last() == Some(&aug_col) {
            return Ok(None);
        }
        let entries = rref
            .pivots
            .iter()
            .zip(&rref.rows)
            .filter_map(|(&p, row)| row.get(aug_col).map(|x| (p, x.clone())))
            .collect();
        Ok(Some(SparseVector::from_sorted(entries)))
    }
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn kernel_basis(&self, field: Field) -> Vec<SparseVector> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let mut free_slot = vec![usize::MAX; self.ncols];
        let free: Vec<usize> = (0..self.ncols).filter(|&c| !is_pivot[c]).collect();
        for (k, &f) in free.iter().enumerate() {
            free_slot[f] = k;
        }
        let mut vecs: Vec<Vec<(usize, Scalar)>> = free.iter().map(|&f| vec![(f, field.one())]).collect();
        for (&p, row) in self.pivots.iter().zip(&self.rows) {
            for (c, x) in row.iter() {
                if c != p {
                    vecs[free_slot[c]].push((p, -x));
                }
            }
        }
        vecs.into_iter().map(SparseVector::from_entries).collect()
    }
}

pub(crate) fn sparse_dot(a: &SparseVector, b: &SparseVector) -> Option<Scalar> {
    let (x, y) = (a.entries(), b.entries());
    let (mut p, mut q) = (0, 0);
    let mut acc: Option<Scalar> = None;
    while p < x.len() && q < y.len() {
        if x[p].0 < y[q].0 {
            p += 1;
        } else if y[q].0 < x[p].0 {
            q += 1;
        } else {
            let t = &x[p].1 * &y[q].1;
            acc = Some(match acc {
                None => t,
                Some(s) => &s + &t,
            });
            p += 1;
            q += 1;
        }
    }
    acc.filter(|s| !s.is_zero())
}

/// Row echelon form built by inserting rows in index order; each stored row is
/// normalized to a leading one.
/// Incrementally built row echelon basis of a span.
pub struct SparseEchelon {
    ncols: usize,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<SparseVector>,
    nnz: usize,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, pivot_row: vec![None; ncols], rows: Vec::new(), nnz: 0 }
    }

    /// Subtracts pivot rows from `v` until no entry of `v` sits in a pivot column.
    pub fn reduce(&self, mut v: SparseVector) -> SparseVector {
        let mut from = 0usize;
        loop {
            let hit = v
                .entries()
                .iter()
                .skip_while(|(c, _)| *c < from)
                .find(|(c, _)| self.pivot_row[*c].is_some())
                .map(|(c, x)| (*c, x.clone()));
            match hit {
                None => return v,
                Some((c, x)) => {
                    let r = self.pivot_row[c].unwrap();
                    v = v.axpy(&-&x, &self.rows[r]);
                    from = c + 1;
                }
            }
        }
    }

    /// Returns true when `v` was independent of the rows so far.
    pub fn insert(&mut self, v: SparseVector) -> bool {
        let v = self.reduce(v);
        let Some((lead, x)) = v.leading() else {
            return false;
        };
        let v = v.scale(&x.inv().unwrap());
        self.pivot_row[lead] = Some(self.rows.len());
        self.nnz += v.nnz();
        self.rows.push(v);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn back_substitute(&mut self) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| std::cmp::Reverse(self.rows[r].leading().unwrap().0));
        for r in order {
            let lead = self.rows[r].leading().unwrap().0;
            let mut v = self.rows[r].clone();
            let mut from = lead + 1;
            loop {
                let hit = v
                    .entries()
                    .iter()
                    .skip_while(|(c, _)| *c < from)
                    .find(|(c, _)| self.pivot_row[*c].is_some())
                    .map(|(c, x)| (*c, x.clone()));
                match hit {
                    None => break,
                    Some((c, x)) => {
                        let q = self.pivot_row[c].unwrap();
                        v = v.axpy(&-&x, &self.rows[q]);
                        from = c + 1;
                    }
                }
            }
            self.rows[r] = v;
        }
    }

    fn into_rref(self) -> Rref {
        let mut pairs: Vec<(usize, SparseVector)> =
            self.rows.into_iter().map(|r| (r.leading().unwrap().0, r)).collect();
        pairs.sort_by_key(|(p, _)| *p);
        let (pivots, rows) = pairs.into_iter().unzip();
        Rref { ncols: self.ncols, pivots, rows }
    }
}

/// `None` when fill-in crossed the threshold and the caller should go dense.
fn sparse_echelon(m: &Matrix, threshold: Option<f64>) -> Option<SparseEchelon> {
    let mut ech = SparseEchelon::new(m.ncols);
    for row in &m.data {
        ech.insert(row.clone());
        if let Some(t) = threshold {
            let k = ech.rows.len();
            if k >= 16 && m.ncols >= 16 && ech.nnz as f64 > t * (k as f64) * (m.ncols as f64) {
                return None;
            }
        }
    }
    Some(ech)
}

fn dense_rref(m: &Matrix) -> Rref {
    let zero = m.field.zero();
    let mut a: Vec<Vec<Scalar>> = m.data.iter().map(|r| r.to_dense(m.ncols, &zero)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().unwrap();
        for x in a[r][c..].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rows = a
        .into_iter()
        .take(pivots.len())
        .map(|row| SparseVector::from_sorted(row.into_iter().enumerate().collect()))
        .collect();
    Rref { ncols: m.ncols, pivots, rows }
}
