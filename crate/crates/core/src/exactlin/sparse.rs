use super::scalar::Scalar;

/// A sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVector {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self { entries: Vec::new() }
    }

    /// Builds from unsorted, possibly repeated entries; repeated indices are summed.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, x) in entries {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y = &*y + &x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        Self { entries: out }
    }

    /// Builds from entries already sorted by index with no duplicates; zeros are dropped.
    pub fn from_sorted(entries: Vec<(usize, Scalar)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        let mut entries = entries;
        entries.retain(|(_, x)| !x.is_zero());
        Self { entries }
    }

    pub fn unit(index: usize, one: Scalar) -> Self {
        Self { entries: vec![(index, one)] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, Scalar)> {
        self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.entries.iter().map(|(i, x)| (*i, x))
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, index: usize) -> Option<&Scalar> {
        self.entries
            .binary_search_by_key(&index, |(i, _)| *i)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn scale(&self, a: &Scalar) -> Self {
        if a.is_zero() {
            return Self::new();
        }
        Self { entries: self.entries.iter().map(|(i, x)| (*i, a * x)).collect() }
    }

    /// `self + a * other`.
    pub fn axpy(&self, a: &Scalar, other: &SparseVector) -> Self {
        if a.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (x, y) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(x.len() + y.len());
        let (mut p, mut q) = (0, 0);
        while p < x.len() || q < y.len() {
            if q == y.len() || (p < x.len() && x[p].0 < y[q].0) {
                out.push(x[p].clone());
                p += 1;
            } else if p == x.len() || y[q].0 < x[p].0 {
                out.push((y[q].0, a * &y[q].1));
                q += 1;
            } else {
                let s = &x[p].1 + &(a * &y[q].1);
                if !s.is_zero() {
                    out.push((x[p].0, s));
                }
                p += 1;
                q += 1;
            }
        }
        Self { entries: out }
    }

    pub fn add(&self, other: &SparseVector) -> Self {
        match other.entries.first() {
            None => self.clone(),
            Some((_, x)) => self.axpy(&x.field().one(), other),
        }
    }

    pub fn dot_dense(&self, dense: &[Scalar]) -> Option<Scalar> {
        let mut acc: Option<Scalar> = None;
        for (i, x) in &self.entries {
            let t = x * &dense[*i];
            acc = Some(match acc {
                None => t,
                Some(a) => &a + &t,
            });
        }
        acc
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_entries(self.entries.iter().map(|(i, x)| (f(*i), x.clone())).collect())
    }

    pub fn to_dense(&self, len: usize, zero: &Scalar) -> Vec<Scalar> {
        let mut v = vec![zero.clone(); len];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::Field;

    #[test]
    fn axpy_cancels() {
        let q = Field::Rational;
        let a = SparseVector::from_entries(vec![(0, q.from_i64(1)), (3, q.from_i64(2))]);
        let b = SparseVector::from_entries(vec![(3, q.from_i64(1)), (5, q.from_i64(1))]);
        let c = a.axpy(&q.from_i64(-2), &b);
        assert_eq!(c.entries(), &[(0, q.from_i64(1)), (5, q.from_i64(-2))]);
    }

    #[test]
    fn duplicates_are_summed() {
        let q = Field::Rational;
        let v = SparseVector::from_entries(vec![(2, q.one()), (1, q.one()), (2, q.from_i64(-1))]);
        assert_eq!(v.entries(), &[(1, q.one())]);
    }
}
