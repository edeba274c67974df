use super::matrix::{Matrix, SparseEchelon};
use super::scalar::Field;
use super::sparse::SparseVector;
use super::LinAlgError;

/// Cohomology of `C^{k-1} -> C^k -> C^{k+1}` at the middle term, with cocycle
/// representatives and a reducer that expresses any cocycle in the chosen basis.
#[derive(Clone, Debug)]
pub struct CohomologyDegree {
    pub reps: Vec<SparseVector>,
    reducer: ClassReducer,
}

impl CohomologyDegree {
    /// `incoming` is `C^{k-1} -> C^k` (rows indexed by `C^k`), `outgoing` is `C^k -> C^{k+1}`.
    pub fn compute(field: Field, dim: usize, incoming: &Matrix, outgoing: &Matrix) -> Self {
        debug_assert_eq!(incoming.nrows(), dim);
        debug_assert_eq!(outgoing.ncols(), dim);
        let mut reducer = ClassReducer::new(field, dim);
        for col in incoming.transpose().rows() {
            reducer.insert_boundary(col.clone());
        }
        let mut reps = Vec::new();
        for z in outgoing.kernel_basis() {
            if reducer.insert_class(z.clone()) {
                reps.push(z);
            }
        }
        Self { reps, reducer }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of `z` in the basis `reps`.
    pub fn coordinates(&self, z: &SparseVector) -> Result<SparseVector, LinAlgError> {
        self.reducer.coordinates(z)
    }

    /// True when `z` is a coboundary.
    pub fn is_exact(&self, z: &SparseVector) -> Result<bool, LinAlgError> {
        Ok(self.coordinates(z)?.is_zero())
    }
}

/// `dim C^k - rank(outgoing) - rank(incoming)`, without representatives.
pub fn cohomology_dim(dim: usize, incoming: &Matrix, outgoing: &Matrix) -> usize {
    dim - outgoing.rank() - incoming.rank()
}

/// Echelon basis of `image + span(reps)` where every row remembers which combination
/// of representatives it carries.
#[derive(Clone, Debug)]
struct ClassReducer {
    field: Field,
    pivot_row: Vec<Option<usize>>,
    rows: Vec<(SparseVector, SparseVector)>,
    nclasses: usize,
}

impl ClassReducer {
    fn new(field: Field, dim: usize) -> Self {
        Self { field, pivot_row: vec![None; dim], rows: Vec::new(), nclasses: 0 }
    }

    fn reduce(&self, mut v: SparseVector) -> (SparseVector, SparseVector) {
        let mut tag = SparseVector::new();
        let mut from = 0;
        loop {
            let hit = v
                .entries()
                .iter()
                .skip_while(|(c, _)| *c < from)
                .find(|(c, _)| self.pivot_row[*c].is_some())
                .map(|(c, x)| (*c, x.clone()));
            let Some((c, x)) = hit else {
                return (v, tag);
            };
            let (row, row_tag) = &self.rows[self.pivot_row[c].unwrap()];
            let m = -&x;
            v = v.axpy(&m, row);
            tag = tag.axpy(&m, row_tag);
            from = c + 1;
        }
    }

    fn push(&mut self, v: SparseVector, tag: SparseVector) -> bool {
        let Some((lead, x)) = v.leading() else {
            return false;
        };
        let inv = x.inv().unwrap();
        self.pivot_row[lead] = Some(self.rows.len());
        self.rows.push((v.scale(&inv), tag.scale(&inv)));
        true
    }

    fn insert_boundary(&mut self, v: SparseVector) {
        let (v, tag) = self.reduce(v);
        self.push(v, tag);
    }

    fn insert_class(&mut self, z: SparseVector) -> bool {
        let (v, tag) = self.reduce(z);
        // v = z + combination of earlier rows, so its class is e_new + tag
        let new_tag = SparseVector::unit(self.nclasses, self.field.one()).add(&tag);
        if self.push(v, new_tag) {
            self.nclasses += 1;
            true
        } else {
            false
        }
    }

    fn coordinates(&self, z: &SparseVector) -> Result<SparseVector, LinAlgError> {
        let (rest, tag) = self.reduce(z.clone());
        if !rest.is_zero() {
            return Err(LinAlgError::NotACocycle);
        }
        Ok(tag.scale(&self.field.from_i64(-1)))
    }
}

/// Rank of a set of vectors, computed incrementally.
pub fn span_rank(ncols: usize, vectors: impl IntoIterator<Item = SparseVector>) -> usize {
    let mut ech = SparseEchelon::new(ncols);
    vectors.into_iter().filter(|v| ech.insert(v.clone())).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_term_acyclic() {
        let q = Field::Rational;
        // 0 -> k --(2)--> k -> 0
        let d = Matrix::from_i64(q, &[&[2]]);
        let h0 = CohomologyDegree::compute(q, 1, &Matrix::zeros(q, 1, 0), &d);
        let h1 = CohomologyDegree::compute(q, 1, &d, &Matrix::zeros(q, 0, 1));
        assert_eq!((h0.dim(), h1.dim()), (0, 0));
    }

    #[test]
    fn coordinates_modulo_boundaries() {
        let q = Field::Rational;
        // C^0 = k, C^1 = k^3 with d(e) = (1,1,0), C^2 = 0
        let incoming = Matrix::from_i64(q, &[&[1], &[1], &[0]]);
        let outgoing = Matrix::zeros(q, 0, 3);
        let h = CohomologyDegree::compute(q, 3, &incoming, &outgoing);
        assert_eq!(h.dim(), 2);
        let boundary = SparseVector::from_entries(vec![(0, q.from_i64(3)), (1, q.from_i64(3))]);
        assert!(h.is_exact(&boundary).unwrap());
        for (k, rep) in h.reps.iter().enumerate() {
            let c = h.coordinates(&rep.add(&boundary)).unwrap();
            assert_eq!(c, SparseVector::unit(k, q.one()));
        }
    }

    #[test]
    fn coordinates_with_overlapping_representatives() {
        let q = Field::Rational;
        // zero differential on k^3: kernel basis e0, e1, e2; classes must be recovered exactly
        let h = CohomologyDegree::compute(q, 3, &Matrix::zeros(q, 3, 0), &Matrix::zeros(q, 0, 3));
        let z = SparseVector::from_entries(vec![(0, q.from_i64(2)), (1, q.from_i64(-1)), (2, q.from_i64(5))]);
        let c = h.coordinates(&z).unwrap();
        let mut back = SparseVector::new();
        for (k, x) in c.iter() {
            back = back.axpy(x, &h.reps[k]);
        }
        assert_eq!(back, z);
        // a boundary that is not a coordinate vector
        let incoming = Matrix::from_i64(q, &[&[1], &[-1], &[0]]);
        let h = CohomologyDegree::compute(q, 3, &incoming, &Matrix::zeros(q, 0, 3));
        let c = h.coordinates(&z).unwrap();
        let mut back = SparseVector::new();
        for (k, x) in c.iter() {
            back = back.axpy(x, &h.reps[k]);
        }
        assert!(h.is_exact(&back.axpy(&q.from_i64(-1), &z)).unwrap());
    }
}
