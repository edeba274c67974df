//! Exceptional and spherical collections, mutations, dual collections and helices.

mod helix;

pub use helix::{extend_helix, is_acyclic_helix, HelixWindow, Recipe};

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::dgpres::{BasisElement, HomSpace, Presentation, PresentationError};
use crate::exactlin::SparseVector;
use crate::report::{DimTable, VerificationReport};
use crate::twcx::{hom_dims, left_twist, quasi_equivalence, right_twist, TwcxError, TwistedComplex, Verdict};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CollectionError {
    #[error(transparent)]
    Twcx(#[from] TwcxError),
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error("slot {slot} is not valid for a collection of length {len}")]
    InvalidSlot { slot: usize, len: usize },
    #[error("collection invariant fails: {0}")]
    Invariant(String),
    #[error("helix object {index} could not be built: {source}")]
    Mutation { index: i64, source: TwcxError },
    #[error("window [{0}, {1}] must contain the foundation [1, {2}]")]
    BadWindow(i64, i64, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Exceptional,
    Spherical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Debug)]
pub struct CollectionState {
    pub base: Arc<Presentation>,
    pub members: Vec<TwistedComplex>,
    pub d: i64,
    pub kind: Kind,
}

/// `hom_A(i,j) = hom_B(i,j)` for `i < j`, scalars on the diagonal, zero below.
pub fn directed_subcategory(b: &Presentation) -> Result<Presentation, PresentationError> {
    let l = b.len();
    let mut homs = Vec::with_capacity(l * l);
    for i in 0..l {
        for j in 0..l {
            homs.push(if i < j {
                b.hom(i, j).clone()
            } else if i == j {
                let u = &b.hom(i, i).basis[b.unit(i)];
                HomSpace::new(vec![BasisElement { name: u.name.clone(), degree: 0 }])
            } else {
                HomSpace::default()
            });
        }
    }
    let mut a = Presentation::new(b.field(), b.objects().to_vec(), homs, vec![0; l])?;
    let index = |i: usize, j: usize, s: usize| if i == j { 0 } else { s };
    let keep = |i: usize, j: usize, s: usize| i < j || (i == j && s == b.unit(i));
    for i in 0..l {
        for j in i..l {
            for k in j..l {
                let t = b.table(i, j, k);
                for g in 0..b.hom(j, k).dim() {
                    if !keep(j, k, g) {
                        continue;
                    }
                    for f in 0..b.hom(i, j).dim() {
                        if !keep(i, j, f) {
                            continue;
                        }
                        let v = t.get(g, f);
                        let v = if i == k {
                            SparseVector::from_entries(
                                v.iter().filter(|(c, _)| *c == b.unit(i)).map(|(_, x)| (0, x.clone())).collect(),
                            )
                        } else {
                            v.clone()
                        };
                        a.set_composition(i, j, k, index(j, k, g), index(i, j, f), v);
                    }
                }
            }
        }
    }
    Ok(a)
}

impl CollectionState {
    /// The generators of a directed presentation as an exceptional collection.
    pub fn exceptional(base: Arc<Presentation>, d: i64) -> Result<Self, CollectionError> {
        let members = (0..base.len()).map(|i| TwistedComplex::generator(base.clone(), i)).collect::<Result<_, _>>()?;
        let c = Self { base, members, d, kind: Kind::Exceptional };
        c.verify()?;
        Ok(c)
    }

    /// The generators of a presentation as a spherical collection of dimension `d`.
    pub fn spherical(base: Arc<Presentation>, d: i64) -> Result<Self, CollectionError> {
        let members = (0..base.len()).map(|i| TwistedComplex::generator(base.clone(), i)).collect::<Result<_, _>>()?;
        let c = Self { base, members, d, kind: Kind::Spherical };
        c.verify()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Re-checks the defining hom conditions of the collection kind.
    pub fn verify(&self) -> Result<(), CollectionError> {
        let l = self.len();
        let pairs: Vec<(usize, usize)> = (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).collect();
        let tables: Vec<((usize, usize), DimTable)> = pairs
            .par_iter()
            .filter(|&&(i, j)| i == j || (self.kind == Kind::Exceptional && i > j))
            .map(|&(i, j)| Ok(((i, j), hom_dims(&self.members[i], &self.members[j])?)))
            .collect::<Result<_, TwcxError>>()?;
        for ((i, j), t) in tables {
            let want = match (self.kind, i == j) {
                (Kind::Exceptional, true) => DimTable::from_pairs([(0, 1)]),
                (Kind::Exceptional, false) => DimTable::new(),
                (Kind::Spherical, _) => sphere_table(self.d),
            };
            if t != want {
                return Err(CollectionError::Invariant(format!("hom(X_{}, X_{}) = {t}, expected {want}", i + 1, j + 1)));
            }
        }
        Ok(())
    }

    fn check_slot(&self, i: usize) -> Result<(), CollectionError> {
        if i + 1 >= self.len() {
            return Err(CollectionError::InvalidSlot { slot: i, len: self.len() });
        }
        Ok(())
    }

    /// `L_{X_i} X_{i+1}`.
    pub fn left_mutation_object(&self, i: usize) -> Result<TwistedComplex, CollectionError> {
        self.check_slot(i)?;
        Ok(left_twist(&self.members[i], &self.members[i + 1])?)
    }

    /// `R_{X_{i+1}} X_i`.
    pub fn right_mutation_object(&self, i: usize) -> Result<TwistedComplex, CollectionError> {
        self.check_slot(i)?;
        Ok(right_twist(&self.members[i + 1], &self.members[i])?)
    }

    /// Left: `(X_i, X_{i+1}) -> (L_{X_i} X_{i+1}, X_i)`. Right: `(X_i, X_{i+1}) -> (X_{i+1}, R_{X_{i+1}} X_i)`.
    pub fn mutate(&self, i: usize, dir: Direction) -> Result<Self, CollectionError> {
        let mut members = self.members.clone();
        match dir {
            Direction::Left => {
                members[i] = self.left_mutation_object(i)?;
                members[i + 1] = self.members[i].clone();
            }
            Direction::Right => {
                members[i + 1] = self.right_mutation_object(i)?;
                members[i] = self.members[i + 1].clone();
            }
        }
        let c = Self { base: self.base.clone(), members, d: self.d, kind: self.kind };
        c.verify()?;
        Ok(c)
    }

    /// Member-wise quasi-equivalence verdicts against another collection.
    pub fn compare(&self, other: &Self) -> Result<Vec<Verdict>, CollectionError> {
        self.members
            .par_iter()
            .zip(other.members.par_iter())
            .map(|(x, y)| Ok(quasi_equivalence(x, y)?.0))
            .collect()
    }

    /// Cohomology tables `hom(X_i, X_j)` for all pairs.
    pub fn hom_tables(&self) -> Result<Vec<Vec<DimTable>>, CollectionError> {
        let l = self.len();
        (0..l)
            .map(|i| (0..l).into_par_iter().map(|j| Ok(hom_dims(&self.members[i], &self.members[j])?)).collect())
            .collect()
    }

    /// Matrix of Euler forms `χ(hom(X_i, X_j))`.
    pub fn euler_matrix(&self) -> Result<Vec<Vec<i64>>, CollectionError> {
        Ok(self.hom_tables()?.iter().map(|row| row.iter().map(DimTable::euler).collect()).collect())
    }
}

/// `{0:1, d:1}`.
pub fn sphere_table(d: i64) -> DimTable {
    DimTable::from_pairs([(0, 1), (d, 1)])
}

/// Euler matrix predicted after a left mutation at slot `i`:
/// `[L_{X_i} X_{i+1}] = [X_{i+1}] − χ(X_i, X_{i+1}) [X_i]`, then the two slots swap.
pub fn euler_after_left_mutation(chi: &[Vec<i64>], i: usize) -> Vec<Vec<i64>> {
    let l = chi.len();
    let mut p = vec![vec![0i64; l]; l];
    for (k, row) in p.iter_mut().enumerate() {
        if k != i && k != i + 1 {
            row[k] = 1;
        }
    }
    p[i][i + 1] = 1;
    p[i][i] = -chi[i][i + 1];
    p[i + 1][i] = 1;
    let mut out = vec![vec![0i64; l]; l];
    for a in 0..l {
        for b in 0..l {
            let mut s = 0;
            for x in 0..l {
                for y in 0..l {
                    s += p[a][x] * chi[x][y] * p[b][y];
                }
            }
            out[a][b] = s;
        }
    }
    out
}

/// `F_j = L_{E_1} ⋯ L_{E_{j−1}}(E_j)`, with biorthogonality `hom(E_i, F_j) = 𝕜·δ_ij` verified.
pub fn right_dual_collection(c: &CollectionState) -> Result<(Vec<TwistedComplex>, VerificationReport), CollectionError> {
    if c.kind != Kind::Exceptional {
        return Err(CollectionError::Invariant("right dual collections need an exceptional collection".into()));
    }
    let l = c.len();
    let duals: Vec<TwistedComplex> = (0..l)
        .into_par_iter()
        .map(|j| {
            let mut x = c.members[j].clone();
            for k in (0..j).rev() {
                x = left_twist(&c.members[k], &x)?;
            }
            Ok(x)
        })
        .collect::<Result<_, CollectionError>>()?;
    let mut report = VerificationReport::new();
    for i in 0..l {
        let row: Vec<DimTable> = (0..l)
            .into_par_iter()
            .map(|j| hom_dims(&c.members[i], &duals[j]))
            .collect::<Result<_, _>>()?;
        for (j, t) in row.into_iter().enumerate() {
            let want = if i == j { DimTable::from_pairs([(0, 1)]) } else { DimTable::new() };
            report.check(format!("hom(E_{}, F_{})", i + 1, j + 1), t == want, json!({"dims": t, "expected": want}));
        }
    }
    if !report.all_pass() {
        return Err(CollectionError::Invariant("right dual collection is not biorthogonal".into()));
    }
    Ok((duals, report))
}

#[cfg(test)]
mod tests;
