use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::exactlin::{Field, Matrix, Scalar, SparseVector};
use crate::report::{DimTable, Status, VerificationReport};

use super::presentation::{BasisElement, CompositionTable, HomSpace, Presentation};
use super::PresentationError;

/// A dg bimodule over a presentation. `left(i,j,k)` is `A(j,k) ⊗ M(i,j) -> M(i,k)` and
/// `right(i,j,k)` is `M(j,k) ⊗ A(i,j) -> M(i,k)`, both with the layout of [`CompositionTable`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bimodule {
    field: Field,
    len: usize,
    pieces: Vec<HomSpace>,
    left: Vec<CompositionTable>,
    right: Vec<CompositionTable>,
}

fn sign(field: Field, k: i64) -> Scalar {
    field.one().signed(k)
}

fn pairs(l: usize) -> Vec<(usize, usize)> {
    (0..l).flat_map(|i| (0..l).map(move |j| (i, j))).collect()
}

impl Bimodule {
    fn empty_tables(a: &Presentation, pieces: &[HomSpace]) -> (Vec<CompositionTable>, Vec<CompositionTable>) {
        let l = a.len();
        let mut left = Vec::with_capacity(l * l * l);
        let mut right = Vec::with_capacity(l * l * l);
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    left.push(CompositionTable::zero(a.hom(j, k).dim(), pieces[i * l + j].dim()));
                    right.push(CompositionTable::zero(pieces[j * l + k].dim(), a.hom(i, j).dim()));
                }
            }
        }
        (left, right)
    }

    /// `A` as a bimodule over itself.
    pub fn diagonal(a: &Presentation) -> Self {
        let l = a.len();
        let pieces: Vec<HomSpace> = pairs(l).into_iter().map(|(i, j)| a.hom(i, j).clone()).collect();
        let mut left = Vec::with_capacity(l * l * l);
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    left.push(a.table(i, j, k).clone());
                }
            }
        }
        Self { field: a.field(), len: l, pieces, right: left.clone(), left }
    }

    /// The linear dual bimodule `A*`, with `A*(i,j) = hom(j,i)^∨`.
    pub fn dualize(a: &Presentation) -> Self {
        Self::diagonal(a).dual(a)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn piece(&self, i: usize, j: usize) -> &HomSpace {
        &self.pieces[i * self.len + j]
    }

    pub fn left(&self, i: usize, j: usize, k: usize) -> &CompositionTable {
        &self.left[(i * self.len + j) * self.len + k]
    }

    pub fn right(&self, i: usize, j: usize, k: usize) -> &CompositionTable {
        &self.right[(i * self.len + j) * self.len + k]
    }

    /// `M^∨(i,j) = M(j,i)^∨` with `(a·φ)(x) = (−1)^{|a|} φ(x·a)` and `(φ·b)(x) = φ(b·x)`.
    pub fn dual(&self, a: &Presentation) -> Self {
        let l = self.len;
        let f = self.field;
        let mut pieces: Vec<HomSpace> = pairs(l)
            .into_iter()
            .map(|(i, j)| {
                let src = self.piece(j, i);
                HomSpace::new(
                    src.basis
                        .iter()
                        .map(|e| BasisElement { name: dual_name(&e.name), degree: -e.degree })
                        .collect(),
                )
            })
            .collect();
        for (i, j) in pairs(l) {
            let src = self.piece(j, i);
            let mut cols: Vec<Vec<(usize, Scalar)>> = vec![Vec::new(); src.dim()];
            for (x, dx) in src.diff.iter().enumerate() {
                for (e, c) in dx.iter() {
                    cols[e].push((x, c * &sign(f, src.degree(e) + 1)));
                }
            }
            let piece = &mut pieces[i * l + j];
            for (e, col) in cols.into_iter().enumerate() {
                piece.diff[e] = SparseVector::from_entries(col);
            }
        }
        let (mut left, mut right) = Self::empty_tables(a, &pieces);
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    // left: a ∈ A(j,k), x ∈ M(k,i), x·a ∈ M(j,i)
                    let t = self.right(j, k, i);
                    let mut acc: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
                    for x in 0..t.left_dim {
                        for ai in 0..t.right_dim {
                            let s = sign(f, a.hom(j, k).degree(ai));
                            for (e, c) in t.get(x, ai).iter() {
                                acc.entry((ai, e)).or_default().push((x, c * &s));
                            }
                        }
                    }
                    let table = &mut left[(i * l + j) * l + k];
                    for ((ai, e), v) in acc {
                        table.set(ai, e, SparseVector::from_entries(v));
                    }
                    // right: b ∈ A(i,j), φ ∈ M^∨(j,k), x ∈ M(k,i), b·x ∈ M(k,j)
                    let t = self.left(k, i, j);
                    let mut acc: BTreeMap<(usize, usize), Vec<(usize, Scalar)>> = BTreeMap::new();
                    for b in 0..t.left_dim {
                        for x in 0..t.right_dim {
                            for (e, c) in t.get(b, x).iter() {
                                acc.entry((e, b)).or_default().push((x, c.clone()));
                            }
                        }
                    }
                    let table = &mut right[(i * l + j) * l + k];
                    for ((e, b), v) in acc {
                        table.set(e, b, SparseVector::from_entries(v));
                    }
                }
            }
        }
        Self { field: f, len: l, pieces, left, right }
    }

    /// `M[n]`: degrees drop by `n`, the differential picks up `(−1)^n`, the left action `(−1)^{n|a|}`.
    pub fn shifted(&self, n: i64, a: &Presentation) -> Self {
        let l = self.len;
        let s = sign(self.field, n);
        let pieces = self
            .pieces
            .iter()
            .map(|h| {
                let mut out = HomSpace::new(
                    h.basis.iter().map(|e| BasisElement { name: e.name.clone(), degree: e.degree - n }).collect(),
                );
                out.diff = h.diff.iter().map(|v| v.scale(&s)).collect();
                out
            })
            .collect();
        let mut left = self.left.clone();
        for i in 0..l {
            for j in 0..l {
                for k in 0..l {
                    let t = &mut left[(i * l + j) * l + k];
                    for ai in 0..t.left_dim {
                        let s = sign(self.field, n * a.hom(j, k).degree(ai));
                        for m in 0..t.right_dim {
                            let v = t.get(ai, m).scale(&s);
                            t.set(ai, m, v);
                        }
                    }
                }
            }
        }
        Self { field: self.field, len: l, pieces, left, right: self.right.clone() }
    }

    pub fn basis_tables(&self) -> BTreeMap<(usize, usize), DimTable> {
        pairs(self.len).into_iter().map(|(i, j)| ((i, j), self.piece(i, j).basis_table())).collect()
    }

    pub fn cohomology_tables(&self) -> BTreeMap<(usize, usize), DimTable> {
        pairs(self.len)
            .into_par_iter()
            .map(|(i, j)| ((i, j), self.piece(i, j).cohomology_table(self.field)))
            .collect()
    }
}

fn dual_name(name: &str) -> String {
    format!("{name}*")
}

/// `A ⊕ M` with `M·M = 0`.
pub fn square_zero_extension(a: &Presentation, m: &Bimodule) -> Result<Presentation, PresentationError> {
    let l = a.len();
    let homs: Vec<HomSpace> = pairs(l)
        .into_iter()
        .map(|(i, j)| {
            let (ha, hm) = (a.hom(i, j), m.piece(i, j));
            let na = ha.dim();
            let mut h = HomSpace::new(ha.basis.iter().chain(hm.basis.iter()).cloned().collect());
            for (s, v) in ha.diff.iter().enumerate() {
                h.diff[s] = v.clone();
            }
            for (s, v) in hm.diff.iter().enumerate() {
                h.diff[na + s] = v.map_indices(|t| t + na);
            }
            h
        })
        .collect();
    for h in &homs {
        let mut seen = std::collections::HashSet::new();
        if let Some(e) = h.basis.iter().find(|e| !seen.insert(e.name.as_str())) {
            return Err(PresentationError::Shape(format!("duplicate basis name {:?}", e.name)));
        }
    }
    let mut b = Presentation::new(a.field(), a.objects().to_vec(), homs, a.units().to_vec())?;
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                let (ng, nf, nc) = (a.hom(j, k).dim(), a.hom(i, j).dim(), a.hom(i, k).dim());
                let aa = a.table(i, j, k);
                let lt = m.left(i, j, k);
                let rt = m.right(i, j, k);
                let t = b.table_mut(i, j, k);
                for g in 0..ng {
                    for f in 0..nf {
                        t.set(g, f, aa.get(g, f).clone());
                    }
                    for f in 0..lt.right_dim {
                        t.set(g, nf + f, lt.get(g, f).map_indices(|c| c + nc));
                    }
                }
                for g in 0..rt.left_dim {
                    for f in 0..nf {
                        t.set(ng + g, f, rt.get(g, f).map_indices(|c| c + nc));
                    }
                }
            }
        }
    }
    Ok(b)
}

/// `B = A ⊕ A*[−d]`, the trivial extension of a directed presentation.
pub fn trivial_extension(a: &Presentation, d: i64) -> Result<Presentation, PresentationError> {
    if d == 0 {
        return Err(PresentationError::ZeroDimension);
    }
    if d < 0 {
        return Err(PresentationError::Shape(format!("dimension must be positive, got {d}")));
    }
    if !a.is_directed() {
        return Err(PresentationError::NotDirected("expected hom(i,j) = 0 for i > j and hom(i,i) = k·id".into()));
    }
    square_zero_extension(a, &Bimodule::dualize(a).shifted(-d, a))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QuotientOptions {
    /// Also search for a closed degree-0 bimodule map `B/A -> A*[−d]` that is a quasi-isomorphism.
    pub witness: bool,
}

/// Positions of `a`'s basis inside `b`'s, matched by name.
fn inclusion(b: &Presentation, a: &Presentation) -> Result<Vec<Vec<usize>>, PresentationError> {
    if a.objects() != b.objects() {
        return Err(PresentationError::ObjectMismatch(format!("{:?} vs {:?}", a.objects(), b.objects())));
    }
    let l = a.len();
    pairs(l)
        .into_iter()
        .map(|(i, j)| {
            let (ha, hb) = (a.hom(i, j), b.hom(i, j));
            ha.basis
                .iter()
                .map(|e| match hb.index_of(&e.name) {
                    Some(s) if hb.degree(s) == e.degree => Ok(s),
                    _ => Err(PresentationError::ObjectMismatch(format!(
                        "basis element {:?} of hom({i},{j}) has no counterpart",
                        e.name
                    ))),
                })
                .collect()
        })
        .collect()
}

/// Quotient bimodule `B/A` in the basis complementary to the image of `A`.
fn quotient(b: &Presentation, a: &Presentation, inc: &[Vec<usize>]) -> Bimodule {
    let l = a.len();
    let f = a.field();
    // position of each B basis element in the complement, if any
    let comp: Vec<Vec<Option<usize>>> = pairs(l)
        .into_iter()
        .map(|(i, j)| {
            let n = b.hom(i, j).dim();
            let mut marks = vec![false; n];
            for &s in &inc[i * l + j] {
                marks[s] = true;
            }
            let mut next = 0;
            marks
                .into_iter()
                .map(|m| {
                    (!m).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let project = |i: usize, j: usize, v: &SparseVector| -> SparseVector {
        SparseVector::from_sorted(
            v.iter().filter_map(|(s, x)| comp[i * l + j][s].map(|t| (t, x.clone()))).collect(),
        )
    };
    let mut pieces: Vec<HomSpace> = pairs(l)
        .into_iter()
        .map(|(i, j)| {
            let hb = b.hom(i, j);
            HomSpace::new(
                (0..hb.dim()).filter(|&s| comp[i * l + j][s].is_some()).map(|s| hb.basis[s].clone()).collect(),
            )
        })
        .collect();
    for (i, j) in pairs(l) {
        let hb = b.hom(i, j);
        for s in 0..hb.dim() {
            if let Some(t) = comp[i * l + j][s] {
                pieces[i * l + j].diff[t] = project(i, j, &hb.diff[s]);
            }
        }
    }
    let (mut left, mut right) = Bimodule::empty_tables(a, &pieces);
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                let t = b.table(i, j, k);
                let lt = &mut left[(i * l + j) * l + k];
                for (ga, &g) in inc[j * l + k].iter().enumerate() {
                    for fb in 0..b.hom(i, j).dim() {
                        if let Some(m) = comp[i * l + j][fb] {
                            lt.set(ga, m, project(i, k, t.get(g, fb)));
                        }
                    }
                }
                let rt = &mut right[(i * l + j) * l + k];
                for g in 0..b.hom(j, k).dim() {
                    if let Some(m) = comp[j * l + k][g] {
                        for (fa, &fb) in inc[i * l + j].iter().enumerate() {
                            rt.set(m, fa, project(i, k, t.get(g, fb)));
                        }
                    }
                }
            }
        }
    }
    Bimodule { field: f, len: l, pieces, left, right }
}

/// Checks that `A` sits in `B` as a dg subcategory, with matching differentials and products.
fn subcategory_violation(b: &Presentation, a: &Presentation, inc: &[Vec<usize>]) -> Option<Value> {
    let l = a.len();
    let lift = |i: usize, j: usize, v: &SparseVector| v.map_indices(|s| inc[i * l + j][s]);
    for (i, j) in pairs(l) {
        let (ha, hb) = (a.hom(i, j), b.hom(i, j));
        for s in 0..ha.dim() {
            if lift(i, j, &ha.diff[s]) != hb.diff[inc[i * l + j][s]] {
                return Some(json!({"kind": "differential", "objects": [i, j], "basis": ha.basis[s].name}));
            }
        }
        if a.unit(i) < a.hom(i, i).dim() && i == j && inc[i * l + i][a.unit(i)] != b.unit(i) {
            return Some(json!({"kind": "unit", "objects": [i, i]}));
        }
    }
    for i in 0..l {
        for j in 0..l {
            for k in 0..l {
                for g in 0..a.hom(j, k).dim() {
                    for f in 0..a.hom(i, j).dim() {
                        let lhs = lift(i, k, a.compose(i, j, k, g, f));
                        let rhs = b.compose(i, j, k, inc[j * l + k][g], inc[i * l + j][f]);
                        if &lhs != rhs {
                            return Some(json!({
                                "kind": "composition",
                                "objects": [i, j, k],
                                "basis": [a.hom(j, k).basis[g].name, a.hom(i, j).basis[f].name],
                            }));
                        }
                    }
                }
            }
        }
    }
    None
}

/// Compares `cone(A -> B) ≃ B/A` with `A*[−d]` degreewise on every pair.
pub fn quotient_check(
    b: &Presentation,
    a: &Presentation,
    d: i64,
    opts: QuotientOptions,
) -> Result<VerificationReport, PresentationError> {
    if a.field() != b.field() {
        return Err(PresentationError::ObjectMismatch("presentations are over different fields".into()));
    }
    let inc = inclusion(b, a)?;
    let mut report = VerificationReport::new();
    let sub = subcategory_violation(b, a, &inc);
    report.check("subcategory", sub.is_none(), sub.unwrap_or(Value::Null));

    let q = quotient(b, a, &inc);
    let target = Bimodule::dualize(a).shifted(-d, a);
    let qt = q.cohomology_tables();
    let tt = target.cohomology_tables();
    let mut mismatches = Vec::new();
    for ((i, j), got) in &qt {
        let want = &tt[&(*i, *j)];
        if got != want {
            mismatches.push(json!({"pair": [i, j], "quotient": got, "expected": want}));
        }
    }
    let witness = if mismatches.is_empty() {
        json!({"pairs": qt.len(), "d": d})
    } else {
        json!({"d": d, "mismatches": mismatches})
    };
    let dims_ok = mismatches.is_empty();
    report.check("dimensions", dims_ok, witness);

    if opts.witness {
        if !dims_ok {
            report.push("quasi_isomorphism", Status::Skipped, json!("dimension tables differ"));
        } else {
            let (status, w) = search_quasi_isomorphism(a, &q, &target);
            report.push("quasi_isomorphism", status, w);
        }
    }
    Ok(report)
}

/// Unknowns of a degree-0 map `M -> N`: one per pair of same-degree basis elements.
struct MapUnknowns {
    index: HashMap<(usize, usize, usize), BTreeMap<usize, usize>>,
    count: usize,
}

impl MapUnknowns {
    fn new(m: &Bimodule, n: &Bimodule) -> Self {
        let mut index = HashMap::new();
        let mut count = 0;
        for (i, j) in pairs(m.len) {
            let (pm, pn) = (m.piece(i, j), n.piece(i, j));
            for s in 0..pm.dim() {
                let row: BTreeMap<usize, usize> = pn
                    .in_degree(pm.degree(s))
                    .iter()
                    .map(|&t| {
                        count += 1;
                        (t, count - 1)
                    })
                    .collect();
                index.insert((i, j, s), row);
            }
        }
        Self { index, count }
    }

    fn targets(&self, i: usize, j: usize, s: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.index[&(i, j, s)].iter().map(|(t, u)| (*t, *u))
    }
}

/// Adds the row for each target coordinate of `φ(v_src) − w(φ)`.
type Rows = BTreeMap<usize, Vec<(usize, Scalar)>>;

fn push_image(rows: &mut Rows, un: &MapUnknowns, ij: (usize, usize), v: &SparseVector, sgn: &Scalar) {
    for (s, x) in v.iter() {
        for (t, u) in un.targets(ij.0, ij.1, s) {
            rows.entry(t).or_default().push((u, x * sgn));
        }
    }
}

fn map_constraints(a: &Presentation, m: &Bimodule, n: &Bimodule, un: &MapUnknowns) -> Vec<SparseVector> {
    let l = m.len;
    let f = m.field;
    let one = f.one();
    let minus = -&one;
    let triples: Vec<(usize, usize, usize)> =
        pairs(l).into_iter().flat_map(|(i, j)| (0..l).map(move |k| (i, j, k))).collect();
    let mut out: Vec<SparseVector> = pairs(l)
        .into_par_iter()
        .flat_map_iter(|(i, j)| {
            let (pm, pn) = (m.piece(i, j), n.piece(i, j));
            let mut rows_all = Vec::new();
            for s in 0..pm.dim() {
                // d φ(s) − φ(d s)
                let mut rows = Rows::new();
                for (t, u) in un.targets(i, j, s) {
                    for (t2, x) in pn.diff[t].iter() {
                        rows.entry(t2).or_default().push((u, x.clone()));
                    }
                }
                push_image(&mut rows, un, (i, j), &pm.diff[s], &minus);
                rows_all.extend(rows.into_values().map(SparseVector::from_entries));
            }
            rows_all
        })
        .collect();
    let action_rows: Vec<SparseVector> = triples
        .into_par_iter()
        .flat_map_iter(|(i, j, k)| {
            let mut rows_all = Vec::new();
            // φ(a·x) − a·φ(x), a ∈ A(j,k), x ∈ M(i,j)
            let (lm, ln) = (m.left(i, j, k), n.left(i, j, k));
            for ai in 0..a.hom(j, k).dim() {
                for x in 0..m.piece(i, j).dim() {
                    let mut rows = Rows::new();
                    push_image(&mut rows, un, (i, k), lm.get(ai, x), &one);
                    for (t, u) in un.targets(i, j, x) {
                        for (t2, c) in ln.get(ai, t).iter() {
                            rows.entry(t2).or_default().push((u, -c));
                        }
                    }
                    rows_all.extend(rows.into_values().map(SparseVector::from_entries));
                }
            }
            // φ(x·b) − φ(x)·b, x ∈ M(j,k), b ∈ A(i,j)
            let (rm, rn) = (m.right(i, j, k), n.right(i, j, k));
            for x in 0..m.piece(j, k).dim() {
                for bi in 0..a.hom(i, j).dim() {
                    let mut rows = Rows::new();
                    push_image(&mut rows, un, (i, k), rm.get(x, bi), &one);
                    for (t, u) in un.targets(j, k, x) {
                        for (t2, c) in rn.get(t, bi).iter() {
                            rows.entry(t2).or_default().push((u, -c));
                        }
                    }
                    rows_all.extend(rows.into_values().map(SparseVector::from_entries));
                }
            }
            rows_all
        })
        .collect();
    out.extend(action_rows);
    out.retain(|r| !r.is_zero());
    out
}

/// True when the map given by `sol` induces isomorphisms on every cohomology group.
fn induces_isomorphism(m: &Bimodule, n: &Bimodule, un: &MapUnknowns, sol: &SparseVector) -> bool {
    let f = m.field;
    pairs(m.len).into_par_iter().all(|(i, j)| {
        let (pm, pn) = (m.piece(i, j), n.piece(i, j));
        let degrees: Vec<i64> = pm.degrees().chain(pn.degrees()).collect();
        degrees.into_iter().all(|deg| {
            let (src_slice, hs) = pm.cohomology_at(f, deg);
            let (tgt_slice, ht) = pn.cohomology_at(f, deg);
            if hs.dim() != ht.dim() {
                return false;
            }
            let tpos: HashMap<usize, usize> = tgt_slice.iter().enumerate().map(|(k, &t)| (t, k)).collect();
            let images = hs.reps.iter().map(|rep| {
                let mut img: Vec<(usize, Scalar)> = Vec::new();
                for (k, x) in rep.iter() {
                    let s = src_slice[k];
                    for (t, u) in un.targets(i, j, s) {
                        if let Some(c) = sol.get(u) {
                            img.push((tpos[&t], x * c));
                        }
                    }
                }
                ht.coordinates(&SparseVector::from_entries(img)).expect("closed map sends cocycles to cocycles")
            });
            crate::exactlin::span_rank(ht.dim(), images) == hs.dim()
        })
    })
}

fn search_quasi_isomorphism(a: &Presentation, m: &Bimodule, n: &Bimodule) -> (Status, Value) {
    let f = m.field;
    let un = MapUnknowns::new(m, n);
    let rows = map_constraints(a, m, n, &un);
    let nrows = rows.len();
    let kernel = Matrix::from_rows(f, un.count, rows).kernel_basis();
    if kernel.is_empty() {
        return (
            Status::Fail,
            json!({"unknowns": un.count, "constraints": nrows, "closed_maps": 0}),
        );
    }
    let patterns: [fn(usize) -> i64; 4] = [|_| 1, |k| k as i64 + 1, |k| 1 << (k % 30), |k| ((k * 7 + 3) % 11) as i64 + 1];
    for (attempt, pat) in patterns.iter().enumerate() {
        let mut sol = SparseVector::new();
        for (k, v) in kernel.iter().enumerate() {
            sol = sol.axpy(&f.from_i64(pat(k)), v);
        }
        if induces_isomorphism(m, n, &un, &sol) {
            return (
                Status::Pass,
                json!({
                    "unknowns": un.count,
                    "constraints": nrows,
                    "closed_maps": kernel.len(),
                    "combination": attempt,
                }),
            );
        }
    }
    (
        Status::Inconclusive,
        json!({"unknowns": un.count, "constraints": nrows, "closed_maps": kernel.len(), "combinations_tried": patterns.len()}),
    )
}
