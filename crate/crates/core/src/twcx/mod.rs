//! One-sided twisted complexes over a presentation.
//!
//! A generator `(o, n)` stands for `E_o[n]`. A degree-`k` morphism component from
//! generator `s` to generator `r` is an element of `hom^{k + n_r - n_s}(E_{o_s}, E_{o_r})`,
//! and composition is the plain product of these matrices. The differential of a
//! component picks up `(−1)^{n_r}`, so `D(φ) = d′φ + δ_Y φ − (−1)^k φ δ_X` and the
//! Maurer–Cartan equation reads `d′δ + δδ = 0`.

mod equiv;
mod hom;
mod minimize;
mod ops;

pub use equiv::{is_contractible, is_contractible_by_homotopy, probe_tables, quasi_equivalence, ProbeTables, Verdict};
pub use hom::{hom_dims, HomComplex, Morphism};
pub use minimize::minimize;
pub use ops::{coevaluation, cohomology_basis, cone, evaluation, left_twist, right_twist, twist_by_subcomplex};

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::dgpres::Presentation;
use crate::exactlin::{Scalar, SparseVector};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TwcxError {
    #[error("object index {index} out of range for {len} objects")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("twisted complexes live over different presentations")]
    PresentationMismatch,
    #[error("morphism is not closed")]
    NotClosed,
    #[error("morphism has degree {found}, expected {expected}")]
    WrongDegree { expected: i64, found: i64 },
    #[error("Maurer–Cartan equation fails at component ({0}, {1})")]
    MaurerCartan(usize, usize),
    #[error("delta is not strictly lower-triangular at ({0}, {1})")]
    NotTriangular(usize, usize),
    #[error("component ({0}, {1}) has the wrong degree")]
    ComponentDegree(usize, usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub object: usize,
    pub shift: i64,
}

/// Generators in filtration order with a strictly lower-triangular `delta`:
/// entry `(r, s)` with `r > s` lies in `hom(E_{o_s}, E_{o_r})`.
#[derive(Clone, Debug)]
pub struct TwistedComplex {
    pres: Arc<Presentation>,
    gens: Vec<Generator>,
    delta: BTreeMap<(usize, usize), SparseVector>,
}

pub(crate) fn sign(p: &Presentation, k: i64) -> Scalar {
    p.field().one().signed(k)
}

pub(crate) fn same_presentation(a: &Arc<Presentation>, b: &Arc<Presentation>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl PartialEq for TwistedComplex {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.delta == other.delta && same_presentation(&self.pres, &other.pres)
    }
}

impl TwistedComplex {
    /// Checks degrees, triangularity and the Maurer–Cartan equation.
    pub fn new(
        pres: Arc<Presentation>,
        gens: Vec<Generator>,
        delta: BTreeMap<(usize, usize), SparseVector>,
    ) -> Result<Self, TwcxError> {
        for g in &gens {
            if g.object >= pres.len() {
                return Err(TwcxError::IndexOutOfRange { index: g.object, len: pres.len() });
            }
        }
        let x = Self::new_unchecked(pres, gens, delta);
        x.check()?;
        Ok(x)
    }

    pub(crate) fn new_unchecked(
        pres: Arc<Presentation>,
        gens: Vec<Generator>,
        mut delta: BTreeMap<(usize, usize), SparseVector>,
    ) -> Self {
        delta.retain(|_, v| !v.is_zero());
        Self { pres, gens, delta }
    }

    /// A single generator `E_i`.
    pub fn generator(pres: Arc<Presentation>, i: usize) -> Result<Self, TwcxError> {
        if i >= pres.len() {
            return Err(TwcxError::IndexOutOfRange { index: i, len: pres.len() });
        }
        Ok(Self { pres, gens: vec![Generator { object: i, shift: 0 }], delta: BTreeMap::new() })
    }

    pub fn zero(pres: Arc<Presentation>) -> Self {
        Self { pres, gens: Vec::new(), delta: BTreeMap::new() }
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn delta(&self) -> &BTreeMap<(usize, usize), SparseVector> {
        &self.delta
    }

    pub fn delta_entry(&self, r: usize, s: usize) -> Option<&SparseVector> {
        self.delta.get(&(r, s))
    }

    /// `delta` entries grouped by source generator: `out[s]` lists `(r, δ_rs)`.
    pub(crate) fn by_source(&self) -> Vec<Vec<(usize, &SparseVector)>> {
        let mut out = vec![Vec::new(); self.len()];
        for (&(r, s), v) in &self.delta {
            out[s].push((r, v));
        }
        out
    }

    /// `delta` entries grouped by target generator: `out[r]` lists `(s, δ_rs)`.
    pub(crate) fn by_target(&self) -> Vec<Vec<(usize, &SparseVector)>> {
        let mut out = vec![Vec::new(); self.len()];
        for (&(r, s), v) in &self.delta {
            out[r].push((s, v));
        }
        out
    }

    fn check(&self) -> Result<(), TwcxError> {
        let p = &*self.pres;
        for (&(r, s), v) in &self.delta {
            if r <= s || r >= self.len() {
                return Err(TwcxError::NotTriangular(r, s));
            }
            let (gr, gs) = (self.gens[r], self.gens[s]);
            let h = p.hom(gs.object, gr.object);
            let want = 1 + gr.shift - gs.shift;
            if v.iter().any(|(b, _)| b >= h.dim() || h.degree(b) != want) {
                return Err(TwcxError::ComponentDegree(r, s));
            }
        }
        if let Some((r, s)) = self.maurer_cartan_defect() {
            return Err(TwcxError::MaurerCartan(r, s));
        }
        Ok(())
    }

    /// First component where `d′δ + δδ` is nonzero.
    pub fn maurer_cartan_defect(&self) -> Option<(usize, usize)> {
        let p = &*self.pres;
        let mut acc: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
        for (&(r, s), v) in &self.delta {
            let (gr, gs) = (self.gens[r], self.gens[s]);
            let dv = p.hom(gs.object, gr.object).apply_d(v).scale(&sign(p, gr.shift));
            acc.entry((r, s)).or_default().extend(dv.into_entries());
        }
        let by_source = self.by_source();
        for (&(m, s), right) in &self.delta {
            for &(r, left) in &by_source[m] {
                let (o_s, o_m, o_r) = (self.gens[s].object, self.gens[m].object, self.gens[r].object);
                let prod = p.compose_vec(o_s, o_m, o_r, left, right);
                acc.entry((r, s)).or_default().extend(prod.into_entries());
            }
        }
        acc.into_iter().find(|(_, v)| !SparseVector::from_entries(v.clone()).is_zero()).map(|(k, _)| k)
    }

    /// `X[n]`: shifts grow by `n`, `delta` picks up `(−1)^n`.
    pub fn shifted(&self, n: i64) -> Self {
        let s = sign(&self.pres, n);
        Self {
            pres: self.pres.clone(),
            gens: self.gens.iter().map(|g| Generator { object: g.object, shift: g.shift + n }).collect(),
            delta: self.delta.iter().map(|(k, v)| (*k, v.scale(&s))).collect(),
        }
    }

    /// `X ⊕ Y` with the generators of `X` first.
    pub fn direct_sum(&self, other: &Self) -> Result<Self, TwcxError> {
        if !same_presentation(&self.pres, &other.pres) {
            return Err(TwcxError::PresentationMismatch);
        }
        let off = self.len();
        let mut gens = self.gens.clone();
        gens.extend_from_slice(&other.gens);
        let mut delta = self.delta.clone();
        delta.extend(other.delta.iter().map(|(&(r, s), v)| ((r + off, s + off), v.clone())));
        Ok(Self { pres: self.pres.clone(), gens, delta })
    }

    /// Generators and `delta` with basis names, for reports.
    pub fn to_json(&self) -> Value {
        let p = &*self.pres;
        let gens: Vec<Value> = self
            .gens
            .iter()
            .map(|g| json!({"object": p.objects()[g.object], "shift": g.shift}))
            .collect();
        let delta: Vec<Value> = self
            .delta
            .iter()
            .map(|(&(r, s), v)| {
                let h = p.hom(self.gens[s].object, self.gens[r].object);
                let terms: Vec<Value> =
                    v.iter().map(|(b, x)| json!([x.to_string(), h.basis[b].name])).collect();
                json!({"row": r, "col": s, "terms": terms})
            })
            .collect();
        json!({"generators": gens, "delta": delta})
    }

    /// Number of generators per object, as a compact size summary.
    pub fn generator_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.pres.len()];
        for g in &self.gens {
            c[g.object] += 1;
        }
        c
    }
}

#[cfg(test)]
mod tests;
