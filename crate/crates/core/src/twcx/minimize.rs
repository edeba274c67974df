use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashSet};

use crate::exactlin::{Scalar, SparseVector};

use super::{Generator, TwistedComplex};

struct State {
    gens: Vec<Generator>,
    alive: Vec<bool>,
    /// `rows[r][s] = δ_rs`
    rows: Vec<BTreeMap<usize, SparseVector>>,
    /// `cols[s]` = targets `r` with `δ_rs ≠ 0`
    cols: Vec<BTreeSet<usize>>,
    /// position of each live generator in the filtration order
    pos: Vec<usize>,
}

impl State {
    /// Topological order of the live generators under `edges`, preferring earlier positions.
    fn reorder(&self, extra: &[(usize, usize)], removed: (usize, usize)) -> Option<Vec<usize>> {
        let n = self.gens.len();
        let live = |i: usize| self.alive[i] && i != removed.0 && i != removed.1;
        let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for s in 0..n {
            if !live(s) {
                continue;
            }
            for &r in &self.cols[s] {
                if live(r) {
                    succ[s].insert(r);
                }
            }
        }
        for &(b, a) in extra {
            succ[a].insert(b);
        }
        let mut indeg = vec![0usize; n];
        for s in 0..n {
            for &r in &succ[s] {
                indeg[r] += 1;
            }
        }
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
            (0..n).filter(|&i| live(i) && indeg[i] == 0).map(|i| Reverse((self.pos[i], i))).collect();
        let mut order = Vec::new();
        while let Some(Reverse((_, i))) = heap.pop() {
            order.push(i);
            for &r in &succ[i] {
                indeg[r] -= 1;
                if indeg[r] == 0 {
                    heap.push(Reverse((self.pos[r], r)));
                }
            }
        }
        let nlive = (0..n).filter(|&i| live(i)).count();
        (order.len() == nlive).then_some(order)
    }
}

/// Gaussian elimination of `delta` components that are invertible multiples of an
/// identity, one pair of generators at a time. The result is homotopy equivalent.
pub fn minimize(x: &TwistedComplex) -> TwistedComplex {
    let p = x.presentation().clone();
    let n = x.len();
    let mut st = State {
        gens: x.gens().to_vec(),
        alive: vec![true; n],
        rows: vec![BTreeMap::new(); n],
        cols: vec![BTreeSet::new(); n],
        pos: (0..n).collect(),
    };
    for (&(r, s), v) in x.delta() {
        st.rows[r].insert(s, v.clone());
        st.cols[s].insert(r);
    }
    let mut rejected: HashSet<(usize, usize)> = HashSet::new();
    loop {
        let mut order: Vec<usize> = (0..n).filter(|&i| st.alive[i]).collect();
        order.sort_by_key(|&i| st.pos[i]);
        let pivot = order.iter().find_map(|&s| {
            st.cols[s].iter().find_map(|&r| {
                let v = &st.rows[r][&s];
                let o = st.gens[s].object;
                let is_unit = st.gens[r].object == o && v.nnz() == 1 && v.entries()[0].0 == p.unit(o);
                (is_unit && !rejected.contains(&(r, s))).then(|| (r, s, v.entries()[0].1.clone()))
            })
        });
        let Some((r, s, c)) = pivot else { break };
        let cinv: Scalar = -&c.inv().expect("nonzero pivot");
        // δ'_ba = δ_ba − δ_bs c^{-1} δ_ra
        let sources: Vec<(usize, SparseVector)> =
            st.rows[r].iter().filter(|(&a, _)| a != s).map(|(&a, v)| (a, v.clone())).collect();
        let targets: Vec<usize> = st.cols[s].iter().copied().filter(|&b| b != r).collect();
        let mut updates: Vec<((usize, usize), SparseVector)> = Vec::new();
        for &b in &targets {
            let dbs = &st.rows[b][&s];
            let o = st.gens[s].object;
            for (a, dra) in &sources {
                let prod = p.compose_vec(st.gens[*a].object, o, st.gens[b].object, dbs, dra);
                if prod.is_zero() {
                    continue;
                }
                let old = st.rows[b].get(a).cloned().unwrap_or_default();
                updates.push(((b, *a), old.axpy(&cinv, &prod)));
            }
        }
        let new_edges: Vec<(usize, usize)> =
            updates.iter().filter(|(_, v)| !v.is_zero()).map(|(k, _)| *k).collect();
        let needs_reorder = new_edges.iter().any(|&(b, a)| st.pos[b] < st.pos[a]);
        let new_order = if needs_reorder {
            match st.reorder(&new_edges, (r, s)) {
                Some(o) => Some(o),
                None => {
                    rejected.insert((r, s));
                    continue;
                }
            }
        } else {
            None
        };
        for ((b, a), v) in updates {
            if v.is_zero() {
                st.rows[b].remove(&a);
                st.cols[a].remove(&b);
            } else {
                st.rows[b].insert(a, v);
                st.cols[a].insert(b);
            }
        }
        for dead in [r, s] {
            st.alive[dead] = false;
            let row: Vec<usize> = st.rows[dead].keys().copied().collect();
            for a in row {
                st.cols[a].remove(&dead);
            }
            st.rows[dead].clear();
            let col: Vec<usize> = st.cols[dead].iter().copied().collect();
            for b in col {
                st.rows[b].remove(&dead);
            }
            st.cols[dead].clear();
        }
        if let Some(order) = new_order {
            for (k, i) in order.into_iter().enumerate() {
                st.pos[i] = k;
            }
            rejected.clear();
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| st.alive[i]).collect();
    order.sort_by_key(|&i| st.pos[i]);
    let mut index = vec![usize::MAX; n];
    for (k, &i) in order.iter().enumerate() {
        index[i] = k;
    }
    let gens = order.iter().map(|&i| st.gens[i]).collect();
    let mut delta = BTreeMap::new();
    for &r in &order {
        for (&s, v) in &st.rows[r] {
            delta.insert((index[r], index[s]), v.clone());
        }
    }
    TwistedComplex::new(p, gens, delta).expect("elimination preserves the Maurer–Cartan equation")
}
