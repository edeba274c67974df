use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::exactlin::{CochainComplex, Cohomology, Scalar, SparseVector};
use crate::report::DimTable;

use super::{same_presentation, sign, TwcxError, TwistedComplex};

/// A homogeneous morphism given by its components `(r, s)`: from source generator `s`
/// to target generator `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub degree: i64,
    pub components: BTreeMap<(usize, usize), SparseVector>,
}

impl Morphism {
    pub fn zero(degree: i64) -> Self {
        Self { degree, components: BTreeMap::new() }
    }

    pub fn identity(x: &TwistedComplex) -> Self {
        let p = x.presentation();
        let one = p.field().one();
        let components =
            x.gens().iter().enumerate().map(|(r, g)| ((r, r), SparseVector::unit(p.unit(g.object), one.clone()))).collect();
        Self { degree: 0, components }
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(SparseVector::is_zero)
    }

    pub fn scale(&self, a: &Scalar) -> Self {
        let components =
            self.components.iter().map(|(k, v)| (*k, v.scale(a))).filter(|(_, v)| !v.is_zero()).collect();
        Self { degree: self.degree, components }
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree, other.degree);
        let mut components = self.components.clone();
        for (k, v) in &other.components {
            let e = components.entry(*k).or_default();
            *e = e.add(v);
        }
        components.retain(|_, v| !v.is_zero());
        Self { degree: self.degree, components }
    }

    /// `D(f)` for `f: x -> y`.
    pub fn differential(&self, x: &TwistedComplex, y: &TwistedComplex) -> Morphism {
        let p = &**x.presentation();
        let k = self.degree;
        let mut acc: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        let y_src = y.by_source();
        let x_tgt = x.by_target();
        let back = -sign(p, k);
        for (&(r, s), f) in &self.components {
            let (o_r, o_s) = (y.gens()[r].object, x.gens()[s].object);
            let df = p.hom(o_s, o_r).apply_d(f).scale(&sign(p, y.gens()[r].shift));
            acc.entry((r, s)).or_default().extend(df.into_entries());
            for &(t, dl) in &y_src[r] {
                let o_t = y.gens()[t].object;
                acc.entry((t, s)).or_default().extend(p.compose_vec(o_s, o_r, o_t, dl, f).into_entries());
            }
            for &(u, dr) in &x_tgt[s] {
                let o_u = x.gens()[u].object;
                let prod = p.compose_vec(o_u, o_s, o_r, f, dr).scale(&back);
                acc.entry((r, u)).or_default().extend(prod.into_entries());
            }
        }
        let components = acc
            .into_iter()
            .map(|(key, v)| (key, SparseVector::from_entries(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Morphism { degree: k + 1, components }
    }

    pub fn is_closed(&self, x: &TwistedComplex, y: &TwistedComplex) -> bool {
        self.differential(x, y).is_zero()
    }

    /// `self ∘ other`, where `other: x -> y` and `self: y -> z`.
    pub fn compose(&self, other: &Morphism, x: &TwistedComplex, y: &TwistedComplex, z: &TwistedComplex) -> Morphism {
        let p = &**x.presentation();
        let mut by_source: BTreeMap<usize, Vec<(usize, &SparseVector)>> = BTreeMap::new();
        for (&(t, r), g) in &self.components {
            by_source.entry(r).or_default().push((t, g));
        }
        let mut acc: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&(r, s), f) in &other.components {
            if let Some(list) = by_source.get(&r) {
                for &(t, g) in list {
                    let (o_s, o_r, o_t) = (x.gens()[s].object, y.gens()[r].object, z.gens()[t].object);
                    acc.entry((t, s)).or_default().extend(p.compose_vec(o_s, o_r, o_t, g, f).into_entries());
                }
            }
        }
        let components = acc
            .into_iter()
            .map(|(key, v)| (key, SparseVector::from_entries(v)))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        Morphism { degree: self.degree + other.degree, components }
    }
}

/// `hom(X, Y)` with basis the matrix units `(r, s, b)`, `b` a basis element of
/// `hom(E_{o_s}, E_{o_r})`, in degree `|b| − n_r + n_s`.
#[derive(Clone, Debug)]
pub struct HomComplex {
    nsource: usize,
    offsets: Vec<usize>,
    complex: CochainComplex,
}

impl HomComplex {
    pub fn new(x: &TwistedComplex, y: &TwistedComplex) -> Result<Self, TwcxError> {
        if !same_presentation(x.presentation(), y.presentation()) {
            return Err(TwcxError::PresentationMismatch);
        }
        let p = &**x.presentation();
        let (nr, ns) = (y.len(), x.len());
        let mut offsets = Vec::with_capacity(nr * ns + 1);
        let mut degrees = Vec::new();
        offsets.push(0);
        for gr in y.gens() {
            for gs in x.gens() {
                let h = p.hom(gs.object, gr.object);
                degrees.extend(h.basis.iter().map(|e| e.degree - gr.shift + gs.shift));
                offsets.push(degrees.len());
            }
        }
        let y_src = y.by_source();
        let x_tgt = x.by_target();
        let blocks: Vec<(usize, usize)> = (0..nr).flat_map(|r| (0..ns).map(move |s| (r, s))).collect();
        let diff: Vec<SparseVector> = blocks
            .par_iter()
            .flat_map_iter(|&(r, s)| {
                let (gr, gs) = (y.gens()[r], x.gens()[s]);
                let (o_r, o_s) = (gr.object, gs.object);
                let h = p.hom(o_s, o_r);
                let pos = |t: usize, u: usize| offsets[t * ns + u];
                let sr = sign(p, gr.shift);
                let mut cols = Vec::with_capacity(h.dim());
                for b in 0..h.dim() {
                    let k = h.degree(b) - gr.shift + gs.shift;
                    let mut e: Vec<(usize, Scalar)> = Vec::new();
                    let base = pos(r, s);
                    e.extend(h.diff[b].iter().map(|(c, z)| (base + c, z * &sr)));
                    for &(t, dl) in &y_src[r] {
                        let o_t = y.gens()[t].object;
                        let table = p.table(o_s, o_r, o_t);
                        let base = pos(t, s);
                        for (a, z) in dl.iter() {
                            e.extend(table.get(a, b).iter().map(|(c, w)| (base + c, z * w)));
                        }
                    }
                    let back = -sign(p, k);
                    for &(u, dr) in &x_tgt[s] {
                        let o_u = x.gens()[u].object;
                        let table = p.table(o_u, o_s, o_r);
                        let base = pos(r, u);
                        for (a, z) in dr.iter() {
                            let zb = z * &back;
                            e.extend(table.get(b, a).iter().map(|(c, w)| (base + c, &zb * w)));
                        }
                    }
                    cols.push(SparseVector::from_entries(e));
                }
                cols
            })
            .collect();
        let complex = CochainComplex::new(p.field(), degrees, diff);
        debug_assert!(complex.is_complex(), "D² ≠ 0");
        Ok(Self { nsource: ns, offsets, complex })
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    pub fn dims(&self) -> DimTable {
        DimTable::from_pairs(self.complex.dims())
    }

    pub fn cohomology(&self, k: i64) -> Cohomology {
        self.complex.cohomology(k)
    }

    /// Global basis index of `(r, s, b)`.
    pub fn index(&self, r: usize, s: usize, b: usize) -> usize {
        self.offsets[r * self.nsource + s] + b
    }

    pub fn to_vector(&self, f: &Morphism) -> SparseVector {
        let entries =
            f.components.iter().flat_map(|(&(r, s), v)| v.iter().map(move |(b, x)| (self.index(r, s, b), x.clone())));
        SparseVector::from_entries(entries.collect())
    }

    /// Reads a homogeneous vector of degree `degree` back as a morphism.
    pub fn to_morphism(&self, v: &SparseVector, degree: i64) -> Morphism {
        let mut acc: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (i, x) in v.iter() {
            let block = self.offsets.partition_point(|&o| o <= i) - 1;
            let (r, s) = (block / self.nsource, block % self.nsource);
            acc.entry((r, s)).or_default().push((i - self.offsets[block], x.clone()));
        }
        let components = acc.into_iter().map(|(k, v)| (k, SparseVector::from_entries(v))).collect();
        Morphism { degree, components }
    }
}

/// Cohomology dimensions of `hom(x, y)`.
pub fn hom_dims(x: &TwistedComplex, y: &TwistedComplex) -> Result<DimTable, TwcxError> {
    Ok(HomComplex::new(x, y)?.dims())
}
