use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::exactlin::{Matrix, SparseEchelon, SparseVector};
use crate::report::{DimTable, Status};

use super::{fold, ZAlgebraWindow};

/// A free right module `⊕_t P_{g_t}` restricted to the indices `[lo, top]`; its component
/// at `r` is `⊕_t A_{g_t r}`.
struct Free {
    gens: Vec<i64>,
    offsets: BTreeMap<i64, Vec<usize>>,
    dims: BTreeMap<i64, usize>,
}

impl Free {
    fn new(z: &ZAlgebraWindow, gens: Vec<i64>, lo: i64, top: i64) -> Self {
        let mut offsets = BTreeMap::new();
        let mut dims = BTreeMap::new();
        for r in lo..=top {
            let mut o = Vec::with_capacity(gens.len());
            let mut n = 0;
            for &g in &gens {
                o.push(n);
                if r <= g {
                    n += z.dim(g, r);
                }
            }
            offsets.insert(r, o);
            dims.insert(r, n);
        }
        Self { gens, offsets, dims }
    }

    /// Splits `x` in the component at `r` into `(t, coordinates in A_{g_t r})`.
    fn split(&self, z: &ZAlgebraWindow, x: &SparseVector, r: i64) -> Vec<(usize, SparseVector)> {
        let o = &self.offsets[&r];
        let mut out = Vec::new();
        for (t, &g) in self.gens.iter().enumerate() {
            if r > g {
                continue;
            }
            let n = z.dim(g, r);
            let part: Vec<_> =
                x.iter().filter(|(i, _)| *i >= o[t] && *i < o[t] + n).map(|(i, c)| (i - o[t], c.clone())).collect();
            if !part.is_empty() {
                out.push((t, SparseVector::from_entries(part)));
            }
        }
        out
    }

    /// `x · a` for `x` in the component at `from` and the basis class `a` of `A_{from, to}`.
    fn act(&self, z: &ZAlgebraWindow, x: &SparseVector, from: i64, to: i64, a: usize) -> SparseVector {
        let one = z.helix().base.field().one();
        let mut out = SparseVector::new();
        let (of, ot) = (&self.offsets[&from], &self.offsets[&to]);
        for (t, &g) in self.gens.iter().enumerate() {
            if from > g {
                continue;
            }
            let n = z.dim(g, from);
            let part: Vec<_> = x.iter().filter(|(i, _)| *i >= of[t] && *i < of[t] + n).collect();
            if part.is_empty() {
                continue;
            }
            let u = SparseVector::from_entries(part.into_iter().map(|(i, c)| (i - of[t], c.clone())).collect());
            let prod = z.multiply(g, from, to, &u, &SparseVector::unit(a, one.clone()));
            out = out.add(&prod.map_indices(|i| i + ot[t]));
        }
        out
    }
}

/// A minimal projective resolution of the simple `S_i`, truncated to the window below `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    pub simple: i64,
    /// generator indices of the free module in each homological position
    pub terms: Vec<Vec<i64>>,
    pub status: Status,
    pub reason: Option<String>,
    /// `maps[k][t]`: image of generator `t` of position `k + 1`, split over the generators of position `k`
    maps: Vec<Vec<Vec<(usize, SparseVector)>>>,
}

impl Resolution {
    pub fn length(&self) -> Option<usize> {
        (self.status == Status::Pass).then(|| self.terms.len() - 1)
    }

    /// Multiplicity of each `P_q` in each position.
    pub fn multiplicities(&self) -> Vec<BTreeMap<i64, usize>> {
        self.terms
            .iter()
            .map(|t| {
                let mut m = BTreeMap::new();
                for &q in t {
                    *m.entry(q).or_insert(0) += 1;
                }
                m
            })
            .collect()
    }

    /// `Ext^k(S_i, P_p)` for `p` from the lowest generator to the top of the window, folded to
    /// the foundation index of `p` in total degree `k + δ(i) − δ(p)`.
    pub fn ext_table(&self, z: &ZAlgebraWindow) -> Option<BTreeMap<i64, DimTable>> {
        let delta = z.grading()?;
        let field = z.helix().base.field();
        let mut out: BTreeMap<i64, DimTable> = (1..=z.ell() as i64).map(|j| (j, DimTable::new())).collect();
        let lowest = self.terms.iter().flatten().copied().min()?;
        for p in lowest..=z.hi() {
            // cochains Hom(F_k, P_p) = ⊕_t A_{p g_t}
            let offsets: Vec<Vec<usize>> = self
                .terms
                .iter()
                .map(|gens| {
                    gens.iter()
                        .scan(0, |acc, &g| {
                            let o = *acc;
                            *acc += z.dim(p, g);
                            Some(o)
                        })
                        .collect()
                })
                .collect();
            let dims: Vec<usize> =
                self.terms.iter().map(|gens| gens.iter().map(|&g| z.dim(p, g)).sum()).collect();
            let mut ranks = vec![0; self.terms.len() + 1];
            for k in 1..self.terms.len() {
                let (src, tgt) = (&self.terms[k - 1], &self.terms[k]);
                let mut rows = Vec::with_capacity(dims[k - 1]);
                for (s, &h) in src.iter().enumerate() {
                    for a in 0..z.dim(p, h) {
                        let phi = SparseVector::unit(a, field.one());
                        let mut img = SparseVector::new();
                        for (t, parts) in self.maps[k - 1].iter().enumerate() {
                            for (s2, v) in parts {
                                if *s2 == s {
                                    let prod = z.multiply(p, h, tgt[t], &phi, v);
                                    img = img.add(&prod.map_indices(|i| i + offsets[k][t]));
                                }
                            }
                        }
                        rows.push(img);
                    }
                }
                ranks[k] = Matrix::from_rows(field, dims[k], rows).rank();
            }
            for (k, &n) in dims.iter().enumerate() {
                let h = n - ranks[k] - ranks[k + 1];
                if h > 0 {
                    let deg = k as i64 + delta[&self.simple] - delta[&p];
                    out.get_mut(&fold(p, z.ell())).unwrap().add(deg, h);
                }
            }
        }
        Some(out)
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .multiplicities()
            .iter()
            .enumerate()
            .map(|(k, m)| json!({"position": k, "projectives": m.iter().map(|(q, n)| json!({"index": q, "multiplicity": n})).collect::<Vec<_>>()}))
            .collect();
        json!({"simple": self.simple, "status": self.status, "length": self.length(), "reason": self.reason, "terms": terms})
    }
}

/// Iterated kernel-cover of `S_i` by projectives, generators chosen greedily by index
/// descending then basis order.
pub fn simple_resolution(z: &ZAlgebraWindow, i: i64, maxlen: usize) -> Resolution {
    let inconclusive = |terms: Vec<Vec<i64>>, why: &str| Resolution {
        simple: i,
        terms,
        status: Status::Inconclusive,
        reason: Some(why.to_string()),
        maps: Vec::new(),
    };
    if z.grading().is_none() {
        return inconclusive(Vec::new(), "pieces are not concentrated in single degrees; formula route only");
    }
    if !z.contains(i) {
        return inconclusive(Vec::new(), "simple outside the window");
    }
    let (lo, top) = (z.lo(), i);
    let field = z.helix().base.field();
    let mut free = Free::new(z, vec![i], lo, top);
    let mut terms = vec![vec![i]];
    let mut maps = Vec::new();
    // kernel of P_i -> S_i: everything below i
    let mut kernel: BTreeMap<i64, Vec<SparseVector>> = (lo..top)
        .map(|r| (r, (0..free.dims[&r]).map(|n| SparseVector::unit(n, field.one())).collect()))
        .collect();
    loop {
        let mut chosen: Vec<(i64, SparseVector)> = Vec::new();
        for r in (lo..=top).rev() {
            let Some(kr) = kernel.get(&r).filter(|k| !k.is_empty()) else { continue };
            let mut span = SparseEchelon::new(free.dims[&r]);
            for (from, v) in &chosen {
                for a in 0..z.dim(*from, r) {
                    span.insert(free.act(z, v, *from, r, a));
                }
            }
            for v in kr {
                if span.insert(v.clone()) {
                    chosen.push((r, v.clone()));
                }
            }
        }
        if chosen.is_empty() {
            let lowest = terms.iter().flatten().copied().min().unwrap_or(i);
            if lowest < lo + z.ell() as i64 {
                return inconclusive(terms, "window exhausted: too few indices below the last generator");
            }
            return Resolution { simple: i, terms, status: Status::Pass, reason: None, maps };
        }
        if terms.len() > maxlen {
            return inconclusive(terms, "maximum length reached");
        }
        let gens: Vec<i64> = chosen.iter().map(|(r, _)| *r).collect();
        let next = Free::new(z, gens.clone(), lo, top);
        let mut next_kernel = BTreeMap::new();
        for r in lo..=top {
            let images: Vec<SparseVector> = chosen
                .iter()
                .flat_map(|(g, v)| {
                    let n = if r <= *g { z.dim(*g, r) } else { 0 };
                    (0..n).map(move |a| (g, v, a))
                })
                .map(|(g, v, a)| free.act(z, v, *g, r, a))
                .collect();
            debug_assert_eq!(images.len(), next.dims[&r]);
            if images.is_empty() {
                continue;
            }
            let m = Matrix::from_rows(field, free.dims[&r], images).transpose();
            next_kernel.insert(r, m.kernel_basis());
        }
        maps.push(chosen.iter().map(|(r, v)| free.split(z, v, *r)).collect());
        terms.push(gens);
        free = next;
        kernel = next_kernel;
    }
}

/// Largest resolution length over the foundation simples.
pub fn global_dimension_window(z: &ZAlgebraWindow, maxlen: usize) -> (Status, Option<usize>, Vec<Resolution>) {
    let res: Vec<Resolution> = (1..=z.ell() as i64).map(|i| simple_resolution(z, i, maxlen)).collect();
    if res.iter().any(|r| r.status != Status::Pass) {
        return (Status::Inconclusive, None, res);
    }
    let g = res.iter().filter_map(Resolution::length).max();
    (Status::Pass, g, res)
}
