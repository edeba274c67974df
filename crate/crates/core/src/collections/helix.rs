use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::dgpres::Presentation;
use crate::report::{DimTable, VerificationReport};
use crate::twcx::{hom_dims, left_twist, right_twist, TwistedComplex};

use super::{CollectionError, CollectionState, Kind};

/// How one helix object was obtained: twists by `by` (innermost first) applied to
/// `source` shifted by `shift`. Leftward objects twist first and shift last.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub index: i64,
    pub source: i64,
    pub by: Vec<i64>,
    pub leftward: bool,
    pub shift: i64,
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, shift) = (if self.leftward { "L" } else { "R" }, self.shift);
        write!(f, "E_{} = ", self.index)?;
        for k in self.by.iter().rev() {
            write!(f, "{op}_{{E_{k}}} ")?;
        }
        if self.leftward {
            write!(f, "(E_{})[{shift}]", self.source)
        } else {
            write!(f, "(E_{}[{shift}])", self.source)
        }
    }
}

/// Helix objects on `[lo, hi]` with all pairwise hom tables.
#[derive(Clone, Debug)]
pub struct HelixWindow {
    pub base: Arc<Presentation>,
    pub d: i64,
    pub ell: usize,
    pub lo: i64,
    pub hi: i64,
    pub kind: Kind,
    objects: BTreeMap<i64, TwistedComplex>,
    trace: BTreeMap<i64, Recipe>,
    tables: BTreeMap<(i64, i64), DimTable>,
    serre: VerificationReport,
}

impl HelixWindow {
    pub fn object(&self, i: i64) -> Option<&TwistedComplex> {
        self.objects.get(&i)
    }

    pub fn objects(&self) -> &BTreeMap<i64, TwistedComplex> {
        &self.objects
    }

    pub fn recipe(&self, i: i64) -> Option<&Recipe> {
        self.trace.get(&i)
    }

    pub fn trace(&self) -> impl Iterator<Item = &Recipe> {
        self.trace.values()
    }

    /// `H(hom(E_i, E_j))` for `i, j` in the window.
    pub fn hom(&self, i: i64, j: i64) -> Option<&DimTable> {
        self.tables.get(&(i, j))
    }

    pub fn contains(&self, i: i64) -> bool {
        (self.lo..=self.hi).contains(&i)
    }

    /// Serre-duality dimension checks; empty for spherical windows.
    pub fn serre_report(&self) -> &VerificationReport {
        &self.serre
    }

    pub fn to_json(&self) -> Value {
        let homs: Vec<Value> = self
            .tables
            .iter()
            .map(|(&(i, j), t)| json!({"source": i, "target": j, "dims": t}))
            .collect();
        let objects: Vec<Value> = self
            .objects
            .iter()
            .map(|(&i, x)| {
                json!({
                    "index": i,
                    "generators": x.len(),
                    "recipe": self.trace.get(&i).map(|r| r.to_string()),
                })
            })
            .collect();
        json!({"range": [self.lo, self.hi], "ell": self.ell, "d": self.d, "objects": objects, "homs": homs})
    }
}

/// Extends a collection to the helix window `[lo, hi]`, which must contain `[1, ℓ]`.
/// Leftward: `E_{i−ℓ} = L_{E_{i−ℓ+1}} ⋯ L_{E_{i−1}}(E_i)[−d−1]`.
/// Rightward: `E_{i+ℓ} = R_{E_{i+ℓ−1}} ⋯ R_{E_{i+1}}(E_i[d+1])`.
/// For a spherical collection the same recurrence uses twists and dual twists.
pub fn extend_helix(c: &CollectionState, lo: i64, hi: i64) -> Result<HelixWindow, CollectionError> {
    let ell = c.len();
    let l = ell as i64;
    if ell == 0 || lo > 1 || hi < l {
        return Err(CollectionError::BadWindow(lo, hi, ell));
    }
    let mut objects: BTreeMap<i64, TwistedComplex> = BTreeMap::new();
    let mut trace = BTreeMap::new();
    for (k, m) in c.members.iter().enumerate() {
        objects.insert(k as i64 + 1, m.clone());
    }
    for k in (lo..=0).rev() {
        let i = k + l;
        let by: Vec<i64> = (k + 1..i).rev().collect();
        let mut x = objects[&i].clone();
        for j in &by {
            x = left_twist(&objects[j], &x).map_err(|source| CollectionError::Mutation { index: k, source })?;
        }
        objects.insert(k, x.shifted(-c.d - 1));
        trace.insert(k, Recipe { index: k, source: i, by, leftward: true, shift: -c.d - 1 });
    }
    for k in l + 1..=hi {
        let i = k - l;
        let by: Vec<i64> = (i + 1..k).collect();
        let mut x = objects[&i].shifted(c.d + 1);
        for j in &by {
            x = right_twist(&objects[j], &x).map_err(|source| CollectionError::Mutation { index: k, source })?;
        }
        objects.insert(k, x);
        trace.insert(k, Recipe { index: k, source: i, by, leftward: false, shift: c.d + 1 });
    }
    let pairs: Vec<(i64, i64)> = (lo..=hi).flat_map(|i| (lo..=hi).map(move |j| (i, j))).collect();
    let tables = pairs
        .par_iter()
        .map(|&(i, j)| Ok(((i, j), hom_dims(&objects[&i], &objects[&j])?)))
        .collect::<Result<BTreeMap<_, _>, CollectionError>>()?;
    let mut w = HelixWindow {
        base: c.base.clone(),
        d: c.d,
        ell,
        lo,
        hi,
        kind: c.kind,
        objects,
        trace,
        tables,
        serre: VerificationReport::new(),
    };
    if c.kind == Kind::Exceptional {
        w.serre = serre_check(&w);
    }
    Ok(w)
}

/// `dim Hom^n(E_i, E_j) = dim Hom^{d+1−n}(E_j, E_{i−ℓ})` wherever all three indices lie in the window.
fn serre_check(w: &HelixWindow) -> VerificationReport {
    let l = w.ell as i64;
    let mut mismatches = Vec::new();
    let mut checked = 0usize;
    for i in w.lo + l..=w.hi {
        for j in w.lo..=w.hi {
            checked += 1;
            let lhs = &w.tables[&(i, j)];
            let rhs = w.tables[&(j, i - l)].dual().shifted(-(w.d + 1));
            if *lhs != rhs {
                mismatches.push(json!({"i": i, "j": j, "hom": lhs, "dual": w.tables[&(j, i - l)]}));
            }
        }
    }
    let mut r = VerificationReport::new();
    r.check("serre_duality", mismatches.is_empty(), json!({"pairs": checked, "mismatches": mismatches}));
    r
}

/// Passes iff `hom(E_i, E_j)` is concentrated in degree 0 for all `i < j` in the window.
pub fn is_acyclic_helix(w: &HelixWindow) -> VerificationReport {
    let mut failures = Vec::new();
    for i in w.lo..=w.hi {
        for j in i + 1..=w.hi {
            for (deg, dim) in w.tables[&(i, j)].iter() {
                if deg != 0 {
                    failures.push(json!({"i": i, "j": j, "degree": deg, "dim": dim}));
                }
            }
        }
    }
    let mut r = VerificationReport::new();
    r.check(
        "acyclic",
        failures.is_empty(),
        json!({"range": [w.lo, w.hi], "failures": failures}),
    );
    r
}
