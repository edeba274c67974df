//! The helix Z-algebra, the tensor algebra of `θ`, graded resolutions, AS-Gorenstein
//! certificates and Hilbert functions.

mod gorenstein;
mod hilbert;
mod resolution;

pub use gorenstein::{adjunction_check, as_gorenstein_check, GorensteinCertificate};
pub use hilbert::{hilbert_function, HilbertFunction};
pub use resolution::{global_dimension_window, simple_resolution, Resolution};

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::collections::{CollectionError, HelixWindow};
use crate::dgpres::cohomology_table;
use crate::exactlin::{Cohomology, SparseVector};
use crate::report::{DimTable, VerificationReport};
use crate::twcx::{hom_dims, HomComplex, Morphism, TwcxError, TwistedComplex};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TensorError {
    #[error(transparent)]
    Collection(#[from] CollectionError),
    #[error(transparent)]
    Twcx(#[from] TwcxError),
    #[error("index {index} is outside the window [{lo}, {hi}]")]
    OutOfRange { index: i64, lo: i64, hi: i64 },
}

/// `θ^k(E_i) = E_{i+kℓ}`.
pub fn theta_apply(w: &HelixWindow, k: i64, i: i64) -> Result<&TwistedComplex, TensorError> {
    let index = i + k * w.ell as i64;
    w.object(index).ok_or(TensorError::OutOfRange { index, lo: w.lo, hi: w.hi })
}

/// Index of the foundation object `E_j`, `j ∈ [1, ℓ]`, that `E_q` is a `θ`-power of.
pub fn fold(q: i64, ell: usize) -> i64 {
    (q - 1).rem_euclid(ell as i64) + 1
}

struct Piece {
    hom: HomComplex,
    /// cocycle representatives of a basis of the cohomology, grouped by degree
    basis: Vec<(i64, Morphism)>,
    start: BTreeMap<i64, usize>,
    classes: BTreeMap<i64, Cohomology>,
}

type MultTable = Arc<Vec<Vec<SparseVector>>>;

/// `A_{pq} = H(hom(E_q, E_p))` for `q ≤ p` in a helix window, with compositions
/// `A_{pq} ⊗ A_{qr} -> A_{pr}` computed on demand.
pub struct ZAlgebraWindow {
    helix: HelixWindow,
    pieces: BTreeMap<(i64, i64), OnceLock<Piece>>,
    mult: Mutex<HashMap<(i64, i64, i64), MultTable>>,
    grading: Option<BTreeMap<i64, i64>>,
    report: VerificationReport,
}

impl ZAlgebraWindow {
    pub fn helix(&self) -> &HelixWindow {
        &self.helix
    }

    pub fn lo(&self) -> i64 {
        self.helix.lo
    }

    pub fn hi(&self) -> i64 {
        self.helix.hi
    }

    pub fn ell(&self) -> usize {
        self.helix.ell
    }

    pub fn d(&self) -> i64 {
        self.helix.d
    }

    pub fn report(&self) -> &VerificationReport {
        &self.report
    }

    pub fn contains(&self, p: i64) -> bool {
        self.helix.contains(p)
    }

    pub fn dims(&self, p: i64, q: i64) -> Option<&DimTable> {
        if q > p {
            return None;
        }
        self.helix.hom(q, p)
    }

    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.dims(p, q).map_or(0, DimTable::total)
    }

    /// Shifts `δ` with `A_{pq}` concentrated in degree `δ(q) − δ(p)` for every piece, when they exist.
    pub fn grading(&self) -> Option<&BTreeMap<i64, i64>> {
        self.grading.as_ref()
    }

    fn piece(&self, p: i64, q: i64) -> &Piece {
        self.pieces[&(p, q)].get_or_init(|| {
            let (x, y) = (self.helix.object(q).expect("in window"), self.helix.object(p).expect("in window"));
            let hom = HomComplex::new(x, y).expect("same presentation");
            let mut basis = Vec::new();
            let mut start = BTreeMap::new();
            let mut classes = BTreeMap::new();
            for (k, _) in hom.complex().dims() {
                let c = hom.cohomology(k);
                start.insert(k, basis.len());
                basis.extend(c.reps.iter().map(|r| (k, hom.to_morphism(r, k))));
                classes.insert(k, c);
            }
            Piece { hom, basis, start, classes }
        })
    }

    /// Degrees of the basis classes of `A_{pq}`.
    pub fn basis_degrees(&self, p: i64, q: i64) -> Vec<i64> {
        self.piece(p, q).basis.iter().map(|(k, _)| *k).collect()
    }

    /// `mult(p,q,r)[a][b]`: coordinates in `A_{pr}` of the product of basis classes `a ∈ A_{pq}`, `b ∈ A_{qr}`.
    pub fn mult(&self, p: i64, q: i64, r: i64) -> MultTable {
        if let Some(t) = self.mult.lock().unwrap().get(&(p, q, r)) {
            return t.clone();
        }
        let (left, right, target) = (self.piece(p, q), self.piece(q, r), self.piece(p, r));
        let (er, eq, ep) = (
            self.helix.object(r).expect("in window"),
            self.helix.object(q).expect("in window"),
            self.helix.object(p).expect("in window"),
        );
        let table: Vec<Vec<SparseVector>> = left
            .basis
            .par_iter()
            .map(|(ka, a)| {
                right
                    .basis
                    .iter()
                    .map(|(kb, b)| {
                        let k = ka + kb;
                        let Some(c) = target.classes.get(&k) else { return SparseVector::new() };
                        let v = target.hom.to_vector(&a.compose(b, er, eq, ep));
                        c.coordinates(&v).expect("product of cocycles").map_indices(|i| i + target.start[&k])
                    })
                    .collect()
            })
            .collect();
        let t = Arc::new(table);
        self.mult.lock().unwrap().insert((p, q, r), t.clone());
        t
    }

    /// Bilinear extension of `mult` to coordinate vectors.
    pub fn multiply(&self, p: i64, q: i64, r: i64, u: &SparseVector, v: &SparseVector) -> SparseVector {
        let t = self.mult(p, q, r);
        let mut out = SparseVector::new();
        for (a, x) in u.iter() {
            for (b, y) in v.iter() {
                out = out.axpy(&(x * y), &t[a][b]);
            }
        }
        out
    }

    /// `(ab)c = a(bc)` on basis classes for all `p ≥ q ≥ r ≥ s` in the window with `p − s ≤ span`.
    pub fn check_associativity(&self, span: i64) -> VerificationReport {
        let (lo, hi) = (self.lo(), self.hi());
        let quads: Vec<(i64, i64, i64, i64)> = (lo..=hi)
            .flat_map(|s| (s..=hi.min(s + span)).flat_map(move |r| (r..=hi.min(s + span)).map(move |q| (s, r, q))))
            .flat_map(|(s, r, q)| (q..=hi.min(s + span)).map(move |p| (p, q, r, s)))
            .filter(|&(p, q, r, s)| self.dim(p, q) * self.dim(q, r) * self.dim(r, s) > 0)
            .collect();
        let field = self.helix.base.field();
        let failure = quads.par_iter().find_map_first(|&(p, q, r, s)| {
            let unit = |n: usize| SparseVector::unit(n, field.one());
            for a in 0..self.dim(p, q) {
                for b in 0..self.dim(q, r) {
                    let ab = self.multiply(p, q, r, &unit(a), &unit(b));
                    for c in 0..self.dim(r, s) {
                        let lhs = self.multiply(p, r, s, &ab, &unit(c));
                        let bc = self.multiply(q, r, s, &unit(b), &unit(c));
                        let rhs = self.multiply(p, q, s, &unit(a), &bc);
                        if lhs != rhs {
                            return Some(json!({"indices": [p, q, r, s], "basis": [a, b, c]}));
                        }
                    }
                }
            }
            None
        });
        let mut rep = VerificationReport::new();
        rep.check(
            "associativity",
            failure.is_none(),
            json!({"span": span, "quadruples": quads.len(), "failure": failure}),
        );
        rep
    }

    pub fn to_json(&self) -> Value {
        let mut pieces = Vec::new();
        for p in self.lo()..=self.hi() {
            for q in self.lo()..=p {
                pieces.push(json!({"p": p, "q": q, "dims": self.dims(p, q)}));
            }
        }
        json!({
            "range": [self.lo(), self.hi()],
            "ell": self.ell(),
            "d": self.d(),
            "grading": self.grading.as_ref().map(|g| g.iter().map(|(p, s)| json!([p, s])).collect::<Vec<_>>()),
            "pieces": pieces,
        })
    }
}

/// Solves `c_{pq} + δ(p) − δ(q) = 0` along nonzero pieces, each concentrated in one degree `c_{pq}`.
fn compress(w: &HelixWindow) -> Option<BTreeMap<i64, i64>> {
    let mut delta: BTreeMap<i64, i64> = BTreeMap::new();
    let mut c = BTreeMap::new();
    for p in w.lo..=w.hi {
        for q in w.lo..=p {
            let t = w.hom(q, p)?;
            let mut degs = t.iter().map(|(k, _)| k);
            match (degs.next(), degs.next()) {
                (None, _) => {}
                (Some(k), None) => {
                    c.insert((p, q), k);
                }
                _ => return None,
            }
        }
    }
    delta.insert(w.lo, 0);
    let mut changed = true;
    while changed {
        changed = false;
        for (&(p, q), &k) in &c {
            match (delta.get(&p).copied(), delta.get(&q).copied()) {
                (None, Some(dq)) => {
                    delta.insert(p, dq - k);
                    changed = true;
                }
                (Some(dp), None) => {
                    delta.insert(q, dp + k);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let consistent = c.iter().all(|(&(p, q), &k)| match (delta.get(&p), delta.get(&q)) {
        (Some(dp), Some(dq)) => k + dp - dq == 0,
        _ => false,
    });
    (consistent && delta.len() as i64 == w.hi - w.lo + 1).then_some(delta)
}

/// Builds the Z-algebra of a helix window and checks unitality, `ℓ`-periodicity and
/// associativity on quadruples spanning at most `ℓ + 1` steps.
pub fn build_zalgebra(w: &HelixWindow) -> ZAlgebraWindow {
    let l = w.ell as i64;
    let mut pieces = BTreeMap::new();
    for p in w.lo..=w.hi {
        for q in w.lo..=p {
            pieces.insert((p, q), OnceLock::new());
        }
    }
    let mut report = VerificationReport::new();
    let bad_units: Vec<i64> =
        (w.lo..=w.hi).filter(|&p| w.hom(p, p) != Some(&DimTable::from_pairs([(0, 1)]))).collect();
    report.check("unital_diagonal", bad_units.is_empty(), json!({"failures": bad_units}));
    let mut bad_period = Vec::new();
    for p in w.lo..=w.hi - l {
        for q in w.lo..=p {
            if w.hom(q, p) != w.hom(q + l, p + l) {
                bad_period.push(json!({"p": p, "q": q, "dims": w.hom(q, p), "shifted": w.hom(q + l, p + l)}));
            }
        }
    }
    report.check("periodicity", bad_period.is_empty(), json!({"failures": bad_period}));
    let z = ZAlgebraWindow {
        helix: w.clone(),
        pieces,
        mult: Mutex::new(HashMap::new()),
        grading: compress(w),
        report,
    };
    let assoc = z.check_associativity(l + 1);
    ZAlgebraWindow { report: { let mut r = z.report.clone(); r.extend(assoc); r }, ..z }
}

/// Degree-`m` pieces `⊕_{j,k} hom(E_j, θ^m E_k)` of the tensor algebra, `j, k ∈ [1, ℓ]`.
#[derive(Clone, Debug)]
pub struct TensorAlgebraWindow {
    pub max_degree: usize,
    pub blocks: Vec<BTreeMap<(i64, i64), DimTable>>,
    pub totals: Vec<DimTable>,
    pub report: VerificationReport,
}

impl TensorAlgebraWindow {
    pub fn to_json(&self) -> Value {
        let degrees: Vec<Value> = self
            .totals
            .iter()
            .enumerate()
            .map(|(m, t)| json!({"tensor_degree": m, "dims": t, "total": t.total()}))
            .collect();
        json!({"max_degree": self.max_degree, "pieces": degrees})
    }
}

pub fn tensor_window(z: &ZAlgebraWindow, max_degree: usize) -> Result<TensorAlgebraWindow, TensorError> {
    let w = z.helix();
    let l = z.ell() as i64;
    let need = (max_degree as i64 + 1) * l;
    if need > z.hi() {
        return Err(TensorError::OutOfRange { index: need, lo: z.lo(), hi: z.hi() });
    }
    let mut blocks = Vec::new();
    let mut totals = Vec::new();
    let mut compressed = Vec::new();
    for m in 0..=max_degree as i64 {
        let mut b = BTreeMap::new();
        let mut total = DimTable::new();
        for j in 1..=l {
            for k in 1..=l {
                let t = hom_dims(w.object(j).expect("in window"), theta_apply(w, m, k)?)?;
                total = total.sum(&t);
                b.insert((j, k), t);
            }
        }
        let mut a_prime = DimTable::new();
        for q in 1..=l {
            for p in 1 + m * l..=(m + 1) * l {
                a_prime = a_prime.sum(&z.dims(p, q).cloned().unwrap_or_default());
            }
        }
        compressed.push(json!({"tensor_degree": m, "blocks": total, "compressed": a_prime}));
        blocks.push(b);
        totals.push(total);
    }
    let mut report = VerificationReport::new();
    let agree = compressed.iter().all(|v| v["blocks"] == v["compressed"]);
    report.check("compression", agree, json!(compressed));
    let base = w.base.clone();
    let members_are_generators =
        (1..=l).all(|j| w.object(j) == TwistedComplex::generator(base.clone(), (j - 1) as usize).ok().as_ref());
    if members_are_generators {
        let a = cohomology_table(&base);
        let ok = blocks[0].iter().all(|(&(j, k), t)| {
            a.get(&((j - 1) as usize, (k - 1) as usize)).cloned().unwrap_or_default() == *t
        });
        report.check("degree_zero_is_base", ok, json!({"total": totals[0].total()}));
    }
    Ok(TensorAlgebraWindow { max_degree, blocks, totals, report })
}

/// Degree-`m` dims of the rolled-up algebra two ways: hom complexes into `θ^m(E_k)` computed
/// afresh, and the window's cached `hom(E_j, E_k)` with `k` in the `m`-th foundation block.
pub fn rolled_up_check(z: &ZAlgebraWindow, max_degree: usize) -> Result<VerificationReport, TensorError> {
    let w = z.helix();
    let l = z.ell() as i64;
    let rows: Vec<(usize, DimTable, DimTable)> = (0..=max_degree)
        .into_par_iter()
        .map(|m| {
            let mut theta = DimTable::new();
            let mut direct = DimTable::new();
            for j in 1..=l {
                for k in 1..=l {
                    let e = w.object(j).expect("in window");
                    theta = theta.sum(&hom_dims(e, theta_apply(w, m as i64, k)?)?);
                    let kk = k + m as i64 * l;
                    direct = direct.sum(w.hom(j, kk).ok_or(TensorError::OutOfRange { index: kk, lo: w.lo, hi: w.hi })?);
                }
            }
            Ok((m, theta, direct))
        })
        .collect::<Result<_, TensorError>>()?;
    let mut r = VerificationReport::new();
    for (m, theta, direct) in rows {
        r.check(
            format!("degree {m}"),
            theta == direct,
            json!({"theta_powers": theta, "foundation_blocks": direct, "total": direct.total()}),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests;
