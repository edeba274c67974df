use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exactlin::SparseVector;
use crate::report::VerificationReport;

use super::presentation::Presentation;

fn names(p: &Presentation, pairs: &[(usize, usize, usize)]) -> Value {
    pairs.iter().map(|&(i, j, s)| Value::String(p.hom(i, j).basis[s].name.clone())).collect()
}

fn first_violation<T, F>(items: Vec<T>, f: F) -> Option<Value>
where
    T: Send,
    F: Fn(T) -> Option<Value> + Sync + Send,
{
    items.into_par_iter().map(f).collect::<Vec<_>>().into_iter().flatten().next()
}

fn entry(violation: Option<Value>) -> (bool, Value) {
    match violation {
        None => (true, Value::Null),
        Some(w) => (false, w),
    }
}

/// Checks the grading, d² = 0, Leibniz, associativity and unitality.
pub fn validate(p: &Presentation) -> VerificationReport {
    let l = p.len();
    let pairs: Vec<(usize, usize)> = (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).collect();
    let triples: Vec<(usize, usize, usize)> =
        pairs.iter().flat_map(|&(i, j)| (0..l).map(move |k| (i, j, k))).collect();
    let mut report = VerificationReport::new();

    let grading = first_violation(triples.clone(), |(i, j, k)| {
        let (hg, hf, hc) = (p.hom(j, k), p.hom(i, j), p.hom(i, k));
        if k == 0 {
            let h = p.hom(i, j);
            for (s, v) in h.diff.iter().enumerate() {
                if !v.is_zero() && h.vector_degree(v) != Some(h.degree(s) + 1) {
                    return Some(json!({"kind": "differential", "objects": [i, j], "basis": names(p, &[(i, j, s)])}));
                }
            }
        }
        for a in 0..hg.dim() {
            for b in 0..hf.dim() {
                let v = p.compose(i, j, k, a, b);
                if !v.is_zero() && hc.vector_degree(v) != Some(hg.degree(a) + hf.degree(b)) {
                    return Some(json!({
                        "kind": "composition",
                        "objects": [i, j, k],
                        "basis": names(p, &[(j, k, a), (i, j, b)]),
                    }));
                }
            }
        }
        None
    });
    let (ok, w) = entry(grading);
    report.check("grading", ok, w);

    let d2 = first_violation(pairs.clone(), |(i, j)| {
        let h = p.hom(i, j);
        (0..h.dim())
            .find(|&s| !h.apply_d(&h.diff[s]).is_zero())
            .map(|s| json!({"objects": [i, j], "basis": names(p, &[(i, j, s)])}))
    });
    let (ok, w) = entry(d2);
    report.check("d_squared", ok, w);

    let one = p.field().one();
    let leibniz = first_violation(triples.clone(), |(i, j, k)| {
        let (hg, hf, hc) = (p.hom(j, k), p.hom(i, j), p.hom(i, k));
        for a in 0..hg.dim() {
            for b in 0..hf.dim() {
                let lhs = hc.apply_d(p.compose(i, j, k, a, b));
                let g = SparseVector::unit(a, one.clone());
                let f = SparseVector::unit(b, one.clone());
                let sign = p.scalar(if hg.degree(a).rem_euclid(2) == 0 { 1 } else { -1 });
                let rhs = p
                    .compose_vec(i, j, k, &hg.diff[a], &f)
                    .axpy(&sign, &p.compose_vec(i, j, k, &g, &hf.diff[b]));
                if lhs != rhs {
                    return Some(json!({"objects": [i, j, k], "basis": names(p, &[(j, k, a), (i, j, b)])}));
                }
            }
        }
        None
    });
    let (ok, w) = entry(leibniz);
    report.check("leibniz", ok, w);

    let quads: Vec<(usize, usize, usize, usize)> =
        triples.iter().flat_map(|&(h, i, j)| (0..l).map(move |k| (h, i, j, k))).collect();
    let assoc = first_violation(quads, |(h, i, j, k)| {
        let (hf, hg, hx) = (p.hom(h, i), p.hom(i, j), p.hom(j, k));
        if hf.dim() == 0 || hg.dim() == 0 || hx.dim() == 0 {
            return None;
        }
        for x in 0..hx.dim() {
            for g in 0..hg.dim() {
                let xg = p.compose(i, j, k, x, g);
                for f in 0..hf.dim() {
                    let gf = p.compose(h, i, j, g, f);
                    let lhs = p.compose_vec(h, i, k, xg, &SparseVector::unit(f, one.clone()));
                    let rhs = p.compose_vec(h, j, k, &SparseVector::unit(x, one.clone()), gf);
                    if lhs != rhs {
                        return Some(json!({
                            "objects": [h, i, j, k],
                            "basis": names(p, &[(j, k, x), (i, j, g), (h, i, f)]),
                        }));
                    }
                }
            }
        }
        None
    });
    let (ok, w) = entry(assoc);
    report.check("associativity", ok, w);

    let unital = first_violation(pairs, |(i, j)| {
        let h = p.hom(i, j);
        for f in 0..h.dim() {
            let e = SparseVector::unit(f, one.clone());
            if *p.compose(i, j, j, p.unit(j), f) != e {
                return Some(json!({"side": "left", "objects": [i, j], "basis": names(p, &[(i, j, f)])}));
            }
            if *p.compose(i, i, j, f, p.unit(i)) != e {
                return Some(json!({"side": "right", "objects": [i, j], "basis": names(p, &[(i, j, f)])}));
            }
        }
        None
    });
    let (ok, w) = entry(unital);
    report.check("unitality", ok, w);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgpres::{BasisElement, HomSpace};
    use crate::exactlin::Field;
    use crate::report::Status;

    fn dual_numbers(deg: i64) -> Presentation {
        let q = Field::Rational;
        let h = HomSpace::new(vec![
            BasisElement { name: "id".into(), degree: 0 },
            BasisElement { name: "eps".into(), degree: deg },
        ]);
        let mut p = Presentation::new(q, vec!["X".into()], vec![h], vec![0]).unwrap();
        p.fill_unit_compositions();
        p
    }

    #[test]
    fn graded_dual_numbers_pass() {
        let r = validate(&dual_numbers(2));
        assert!(r.all_pass(), "{r:?}");
        assert_eq!(r.checks.len(), 5);
    }

    #[test]
    fn misgraded_square_is_reported() {
        let mut p = dual_numbers(2);
        p.set_composition(0, 0, 0, 1, 1, SparseVector::unit(1, p.field().one()));
        let r = validate(&p);
        assert_eq!(r.get("grading").unwrap().status, Status::Fail);
        assert_eq!(r.get("grading").unwrap().witness["basis"], json!(["eps", "eps"]));
    }

    #[test]
    fn nonzero_d_squared() {
        let q = Field::Rational;
        let mut h = HomSpace::new(vec![
            BasisElement { name: "id".into(), degree: 0 },
            BasisElement { name: "a".into(), degree: 1 },
            BasisElement { name: "b".into(), degree: 2 },
            BasisElement { name: "c".into(), degree: 3 },
        ]);
        h.diff[1] = SparseVector::unit(2, q.one());
        h.diff[2] = SparseVector::unit(3, q.one());
        let mut p = Presentation::new(q, vec!["X".into()], vec![h], vec![0]).unwrap();
        p.fill_unit_compositions();
        let r = validate(&p);
        assert_eq!(r.get("d_squared").unwrap().status, Status::Fail);
        assert_eq!(r.get("d_squared").unwrap().witness["basis"], json!(["a"]));
    }
}
