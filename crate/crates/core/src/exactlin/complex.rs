use std::collections::BTreeMap;

use rayon::prelude::*;

use super::cohomology::CohomologyDegree;
use super::matrix::Matrix;
use super::scalar::Field;
use super::sparse::SparseVector;
use super::LinAlgError;

/// A finite cochain complex given by the degree of each basis vector and `d` on each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    field: Field,
    degrees: Vec<i64>,
    diff: Vec<SparseVector>,
    by_degree: BTreeMap<i64, Vec<usize>>,
    slot: Vec<usize>,
}

/// One cohomology group, with representatives in the global basis.
#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: i64,
    pub reps: Vec<SparseVector>,
    slice: Vec<usize>,
    slot: BTreeMap<usize, usize>,
    inner: CohomologyDegree,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cocycle `z` in the basis `reps`.
    pub fn coordinates(&self, z: &SparseVector) -> Result<SparseVector, LinAlgError> {
        let mut local = Vec::with_capacity(z.nnz());
        for (s, x) in z.iter() {
            match self.slot.get(&s) {
                Some(&k) => local.push((k, x.clone())),
                None => return Err(LinAlgError::NotACocycle),
            }
        }
        self.inner.coordinates(&SparseVector::from_entries(local))
    }

    pub fn basis_slice(&self) -> &[usize] {
        &self.slice
    }
}

impl CochainComplex {
    pub fn new(field: Field, degrees: Vec<i64>, diff: Vec<SparseVector>) -> Self {
        assert_eq!(degrees.len(), diff.len());
        let mut by_degree: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        let mut slot = vec![0; degrees.len()];
        for (s, &d) in degrees.iter().enumerate() {
            let v = by_degree.entry(d).or_default();
            slot[s] = v.len();
            v.push(s);
        }
        Self { field, degrees, diff, by_degree, slot }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, s: usize) -> i64 {
        self.degrees[s]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn diff(&self) -> &[SparseVector] {
        &self.diff
    }

    pub fn in_degree(&self, k: i64) -> &[usize] {
        self.by_degree.get(&k).map_or(&[], |v| v.as_slice())
    }

    pub fn occupied_degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn apply(&self, v: &SparseVector) -> SparseVector {
        let mut acc = Vec::new();
        for (s, x) in v.iter() {
            for (t, y) in self.diff[s].iter() {
                acc.push((t, x * y));
            }
        }
        SparseVector::from_entries(acc)
    }

    /// True when `d ∘ d = 0` on every basis vector.
    pub fn is_complex(&self) -> bool {
        (0..self.dim()).into_par_iter().all(|s| self.apply(&self.diff[s]).is_zero())
    }

    /// `d: C^k -> C^{k+1}` in the degree-sliced bases.
    pub fn slice_matrix(&self, k: i64) -> Matrix {
        let src = self.in_degree(k);
        let tgt_len = self.in_degree(k + 1).len();
        let cols = src.iter().enumerate().flat_map(|(c, &s)| {
            self.diff[s].iter().map(move |(t, x)| (self.slot[t], c, x.clone()))
        });
        Matrix::from_triplets(self.field, tgt_len, src.len(), cols).expect("differential raises degree by one")
    }

    /// Cohomology dimensions per degree, zero entries omitted.
    pub fn dims(&self) -> Vec<(i64, usize)> {
        let occupied: Vec<i64> = self.occupied_degrees().collect();
        let ranks: BTreeMap<i64, usize> =
            occupied.par_iter().map(|&k| (k, self.slice_matrix(k).rank())).collect();
        occupied
            .iter()
            .map(|&k| {
                let out = ranks[&k];
                let inc = ranks.get(&(k - 1)).copied().unwrap_or(0);
                (k, self.in_degree(k).len() - out - inc)
            })
            .filter(|&(_, n)| n > 0)
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.dims().is_empty()
    }

    pub fn cohomology(&self, k: i64) -> Cohomology {
        let slice = self.in_degree(k).to_vec();
        let inner = CohomologyDegree::compute(self.field, slice.len(), &self.slice_matrix(k - 1), &self.slice_matrix(k));
        let reps = inner.reps.iter().map(|r| r.map_indices(|c| slice[c])).collect();
        let slot = slice.iter().enumerate().map(|(c, &s)| (s, c)).collect();
        Cohomology { degree: k, reps, slice, slot, inner }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_and_representatives() {
        let q = Field::Rational;
        // basis a(0), b(1), c(1), e(2): d a = b + c, d b = e, d c = -e
        let one = q.one();
        let diff = vec![
            SparseVector::from_entries(vec![(1, one.clone()), (2, one.clone())]),
            SparseVector::unit(3, one.clone()),
            SparseVector::unit(3, -&one),
            SparseVector::new(),
        ];
        let c = CochainComplex::new(q, vec![0, 1, 1, 2], diff);
        assert!(c.is_complex());
        assert!(c.dims().is_empty());
        let h1 = c.cohomology(1);
        assert_eq!(h1.dim(), 0);
        assert!(h1.coordinates(&SparseVector::unit(1, one.clone()).add(&SparseVector::unit(2, one))).unwrap().is_zero());
    }
}
