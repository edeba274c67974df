use std::collections::BTreeMap;

use crate::exactlin::{CohomologyDegree, Field, Matrix, Scalar, SparseVector};
use crate::report::DimTable;

use super::PresentationError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisElement {
    pub name: String,
    pub degree: i64,
}

/// A finite graded basis of one hom complex, with its differential.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HomSpace {
    pub basis: Vec<BasisElement>,
    /// `diff[s]` is `d(e_s)` in this basis.
    pub diff: Vec<SparseVector>,
    by_degree: BTreeMap<i64, Vec<usize>>,
}

impl HomSpace {
    pub fn new(basis: Vec<BasisElement>) -> Self {
        let n = basis.len();
        let mut h = Self { basis, diff: vec![SparseVector::new(); n], by_degree: BTreeMap::new() };
        h.reindex();
        h
    }

    fn reindex(&mut self) {
        self.by_degree.clear();
        for (s, e) in self.basis.iter().enumerate() {
            self.by_degree.entry(e.degree).or_default().push(s);
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, s: usize) -> i64 {
        self.basis[s].degree
    }

    pub fn in_degree(&self, deg: i64) -> &[usize] {
        self.by_degree.get(&deg).map_or(&[], |v| v.as_slice())
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.by_degree.keys().copied()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|e| e.name == name)
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(SparseVector::is_zero)
    }

    pub fn basis_table(&self) -> DimTable {
        DimTable::from_pairs(self.by_degree.iter().map(|(d, v)| (*d, v.len())))
    }

    /// Matrix of `d: C^deg -> C^{deg+1}` in the degree-sliced bases.
    pub fn diff_matrix(&self, field: Field, deg: i64) -> Matrix {
        let src = self.in_degree(deg);
        let tgt = self.in_degree(deg + 1);
        let pos: BTreeMap<usize, usize> = tgt.iter().enumerate().map(|(k, &t)| (t, k)).collect();
        let triplets = src.iter().enumerate().flat_map(|(c, &s)| {
            let pos = &pos;
            self.diff[s].iter().map(move |(t, x)| (pos[&t], c, x.clone()))
        });
        Matrix::from_triplets(field, tgt.len(), src.len(), triplets).expect("degree slice")
    }

    pub fn cohomology_table(&self, field: Field) -> DimTable {
        if self.has_zero_differential() {
            return self.basis_table();
        }
        let mut t = DimTable::new();
        for deg in self.degrees().collect::<Vec<_>>() {
            let h = CohomologyDegree::compute(
                field,
                self.in_degree(deg).len(),
                &self.diff_matrix(field, deg - 1),
                &self.diff_matrix(field, deg),
            );
            t.add(deg, h.dim());
        }
        t
    }
}

/// Structure constants of `hom(j,k) ⊗ hom(i,j) -> hom(i,k)`: entry `(a, b)` is `g_a ∘ f_b`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompositionTable {
    pub left_dim: usize,
    pub right_dim: usize,
    pub products: Vec<SparseVector>,
}

impl CompositionTable {
    pub fn zero(left_dim: usize, right_dim: usize) -> Self {
        Self { left_dim, right_dim, products: vec![SparseVector::new(); left_dim * right_dim] }
    }

    pub fn get(&self, a: usize, b: usize) -> &SparseVector {
        &self.products[a * self.right_dim + b]
    }

    pub fn set(&mut self, a: usize, b: usize, v: SparseVector) {
        self.products[a * self.right_dim + b] = v;
    }
}

/// A finite dg category given by bases, differentials and composition constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    field: Field,
    objects: Vec<String>,
    homs: Vec<HomSpace>,
    compositions: Vec<CompositionTable>,
    units: Vec<usize>,
}

impl Presentation {
    /// Assembles a presentation with zero compositions; units must be indices into `hom(i,i)`.
    pub fn new(
        field: Field,
        objects: Vec<String>,
        homs: Vec<HomSpace>,
        units: Vec<usize>,
    ) -> Result<Self, PresentationError> {
        let l = objects.len();
        if homs.len() != l * l {
            return Err(PresentationError::Shape(format!("expected {} hom spaces, got {}", l * l, homs.len())));
        }
        if units.len() != l {
            return Err(PresentationError::Shape(format!("expected {l} units, got {}", units.len())));
        }
        for (i, &u) in units.iter().enumerate() {
            let h = &homs[i * l + i];
            if u >= h.dim() || h.degree(u) != 0 {
                return Err(PresentationError::Shape(format!("unit of object {i} is not a degree-0 basis element")));
            }
        }
        let mut compositions = Vec::with_capacity(l * l * l);
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    compositions.push(CompositionTable::zero(homs[j * l + k].dim(), homs[i * l + j].dim()));
                }
            }
        }
        Ok(Self { field, objects, homs, compositions, units })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn hom(&self, i: usize, j: usize) -> &HomSpace {
        &self.homs[i * self.len() + j]
    }

    pub fn hom_mut(&mut self, i: usize, j: usize) -> &mut HomSpace {
        let l = self.len();
        &mut self.homs[i * l + j]
    }

    pub fn unit(&self, i: usize) -> usize {
        self.units[i]
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn table(&self, i: usize, j: usize, k: usize) -> &CompositionTable {
        let l = self.len();
        &self.compositions[(i * l + j) * l + k]
    }

    pub fn table_mut(&mut self, i: usize, j: usize, k: usize) -> &mut CompositionTable {
        let l = self.len();
        &mut self.compositions[(i * l + j) * l + k]
    }

    /// `g_a ∘ f_b` for `g_a ∈ hom(j,k)`, `f_b ∈ hom(i,j)`.
    pub fn compose(&self, i: usize, j: usize, k: usize, a: usize, b: usize) -> &SparseVector {
        self.table(i, j, k).get(a, b)
    }

    /// Bilinear extension of `compose` to arbitrary vectors.
    pub fn compose_vec(&self, i: usize, j: usize, k: usize, g: &SparseVector, f: &SparseVector) -> SparseVector {
        let t = self.table(i, j, k);
        let mut acc = Vec::new();
        for (a, x) in g.iter() {
            for (b, y) in f.iter() {
                let p = t.get(a, b);
                if !p.is_zero() {
                    let xy = x * y;
                    acc.extend(p.iter().map(|(c, z)| (c, &xy * z)));
                }
            }
        }
        SparseVector::from_entries(acc)
    }

    pub fn set_differential(&mut self, i: usize, j: usize, s: usize, image: SparseVector) {
        self.hom_mut(i, j).diff[s] = image;
    }

    pub fn set_composition(&mut self, i: usize, j: usize, k: usize, a: usize, b: usize, v: SparseVector) {
        self.table_mut(i, j, k).set(a, b, v);
    }

    /// Fills `id ∘ f = f` and `f ∘ id = f` for every basis element.
    pub fn fill_unit_compositions(&mut self) {
        let l = self.len();
        let one = self.field.one();
        for i in 0..l {
            for j in 0..l {
                let n = self.hom(i, j).dim();
                let (ui, uj) = (self.units[i], self.units[j]);
                for f in 0..n {
                    self.set_composition(i, j, j, uj, f, SparseVector::unit(f, one.clone()));
                    self.set_composition(i, i, j, f, ui, SparseVector::unit(f, one.clone()));
                }
            }
        }
    }

    pub fn scalar(&self, n: i64) -> Scalar {
        self.field.from_i64(n)
    }

    /// Basis dimensions per degree for each ordered pair of objects.
    pub fn basis_tables(&self) -> BTreeMap<(usize, usize), DimTable> {
        let l = self.len();
        (0..l)
            .flat_map(|i| (0..l).map(move |j| (i, j)))
            .map(|(i, j)| ((i, j), self.hom(i, j).basis_table()))
            .collect()
    }

    /// Directed: no backward homs and scalar endomorphisms.
    pub fn is_directed(&self) -> bool {
        let l = self.len();
        (0..l).all(|i| {
            self.hom(i, i).dim() == 1 && (0..i).all(|j| self.hom(i, j).dim() == 0)
        })
    }

    /// Reinterprets every structure constant in another field.
    pub fn with_field(&self, field: Field) -> Result<Self, PresentationError> {
        if field == self.field {
            return Ok(self.clone());
        }
        let conv = |v: &SparseVector| -> Result<SparseVector, PresentationError> {
            let entries = v
                .iter()
                .map(|(i, x)| field.parse(&x.to_string()).map(|y| (i, y)))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(SparseVector::from_entries(entries))
        };
        let mut out = self.clone();
        out.field = field;
        for h in &mut out.homs {
            for d in &mut h.diff {
                *d = conv(d)?;
            }
        }
        for t in &mut out.compositions {
            for p in &mut t.products {
                *p = conv(p)?;
            }
        }
        Ok(out)
    }
}

impl HomSpace {
    /// `d(v)` for an arbitrary vector in this basis.
    pub fn apply_d(&self, v: &SparseVector) -> SparseVector {
        let mut acc = SparseVector::new();
        for (s, x) in v.iter() {
            if !self.diff[s].is_zero() {
                acc = acc.axpy(x, &self.diff[s]);
            }
        }
        acc
    }

    /// Degree of a nonzero homogeneous vector, or `None` if it mixes degrees.
    pub fn vector_degree(&self, v: &SparseVector) -> Option<i64> {
        let mut it = v.iter().map(|(s, _)| self.degree(s));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }
}

impl HomSpace {
    /// Cohomology in one degree with representatives, in the global basis of this space.
    pub fn cohomology_at(&self, field: Field, deg: i64) -> (Vec<usize>, CohomologyDegree) {
        let slice = self.in_degree(deg).to_vec();
        let h = CohomologyDegree::compute(
            field,
            slice.len(),
            &self.diff_matrix(field, deg - 1),
            &self.diff_matrix(field, deg),
        );
        (slice, h)
    }
}
