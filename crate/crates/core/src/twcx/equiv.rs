use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exactlin::SparseVector;
use crate::report::DimTable;

use super::hom::{HomComplex, Morphism};
use super::minimize::minimize;
use super::ops::cone;
use super::{TwcxError, TwistedComplex};

/// `hom(E_o, X)` and `hom(X, E_o)` for every object `o` of the presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeTables {
    pub from_generators: Vec<DimTable>,
    pub to_generators: Vec<DimTable>,
}

impl ProbeTables {
    pub fn to_json(&self) -> Value {
        json!({"from_generators": self.from_generators, "to_generators": self.to_generators})
    }
}

pub fn probe_tables(x: &TwistedComplex) -> ProbeTables {
    let p = x.presentation();
    let probes: Vec<TwistedComplex> =
        (0..p.len()).map(|o| TwistedComplex::generator(p.clone(), o).expect("in range")).collect();
    let from_generators =
        probes.par_iter().map(|g| HomComplex::new(g, x).expect("same presentation").dims()).collect();
    let to_generators = probes.par_iter().map(|g| HomComplex::new(x, g).expect("same presentation").dims()).collect();
    ProbeTables { from_generators, to_generators }
}

/// `X ≃ 0`, tested by `hom(E_o, X)` being acyclic for every object `o`.
pub fn is_contractible(x: &TwistedComplex) -> bool {
    let m = minimize(x);
    if m.is_empty() {
        return true;
    }
    let p = m.presentation().clone();
    (0..p.len()).into_par_iter().all(|o| {
        let g = TwistedComplex::generator(p.clone(), o).expect("in range");
        HomComplex::new(&g, &m).expect("same presentation").complex().is_acyclic()
    })
}

/// `X ≃ 0`, tested by the identity of `X` being a boundary in `end(X)`.
pub fn is_contractible_by_homotopy(x: &TwistedComplex) -> bool {
    let hom = HomComplex::new(x, x).expect("same presentation");
    let id = hom.to_vector(&Morphism::identity(x));
    hom.cohomology(0).coordinates(&id).expect("identity is closed").is_zero()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    NotEquivalent,
    Undetermined,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equivalent => "equivalent",
            Verdict::NotEquivalent => "not equivalent (dimension obstruction)",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// Compares probe tables, then searches degree-0 classes of `hom(X, Y)` for one whose cone
/// is contractible. Returns the verdict and a witness.
pub fn quasi_equivalence(x: &TwistedComplex, y: &TwistedComplex) -> Result<(Verdict, Value), TwcxError> {
    let (px, py) = (probe_tables(x), probe_tables(y));
    if px != py {
        return Ok((Verdict::NotEquivalent, json!({"source": px.to_json(), "target": py.to_json()})));
    }
    let hom = HomComplex::new(x, y)?;
    let reps = hom.cohomology(0).reps;
    let field = x.presentation().field();
    let mut candidates: Vec<(String, SparseVector)> =
        reps.iter().enumerate().map(|(k, r)| (format!("basis {k}"), r.clone())).collect();
    if reps.len() > 1 {
        let weights: [(&str, fn(usize) -> i64); 3] =
            [("sum", |_| 1), ("linear", |k| k as i64 + 1), ("powers", |k| 1 << (k % 30))];
        for (name, w) in weights {
            let mut v = SparseVector::new();
            for (k, r) in reps.iter().enumerate() {
                v = v.axpy(&field.from_i64(w(k)), r);
            }
            candidates.push((name.to_string(), v));
        }
    }
    for (name, v) in &candidates {
        let f = hom.to_morphism(v, 0);
        if is_contractible(&cone(x, y, &f)?) {
            return Ok((Verdict::Equivalent, json!({"morphism": name, "classes": reps.len()})));
        }
    }
    Ok((Verdict::Undetermined, json!({"classes": reps.len(), "candidates": candidates.len()})))
}
