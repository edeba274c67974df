use std::collections::BTreeMap;

use crate::exactlin::SparseVector;

use super::hom::{HomComplex, Morphism};
use super::minimize::minimize;
use super::{sign, Generator, TwcxError, TwistedComplex};

/// Cocycle representatives of a basis of `H(hom)`, with their degrees.
pub fn cohomology_basis(hom: &HomComplex) -> Vec<(i64, SparseVector)> {
    let mut out = Vec::new();
    for (k, _) in hom.complex().dims() {
        for rep in hom.cohomology(k).reps {
            out.push((k, rep));
        }
    }
    out
}

pub fn cone(x: &TwistedComplex, y: &TwistedComplex, f: &Morphism) -> Result<TwistedComplex, TwcxError> {
    if f.degree != 0 {
        return Err(TwcxError::WrongDegree { expected: 0, found: f.degree });
    }
    if !f.is_closed(x, y) {
        return Err(TwcxError::NotClosed);
    }
    let sx = x.shifted(1);
    let nx = x.len();
    let mut gens = sx.gens().to_vec();
    gens.extend_from_slice(y.gens());
    let mut delta = sx.delta().clone();
    delta.extend(y.delta().iter().map(|(&(r, s), v)| ((r + nx, s + nx), v.clone())));
    delta.extend(f.components.iter().map(|(&(r, s), v)| ((r + nx, s), v.clone())));
    TwistedComplex::new(x.presentation().clone(), gens, delta)
}

/// `V ⊗ G -> X` for a subcomplex `V` of `hom(G, X)` spanned by `elems`, where `dv[v]`
/// expresses `D(elems[v])` in the same basis. Blocks `G[−|v|]` are ordered by degree.
pub fn evaluation(
    g: &TwistedComplex,
    hom: &HomComplex,
    elems: &[(i64, SparseVector)],
    dv: &[SparseVector],
) -> Result<(TwistedComplex, Morphism), TwcxError> {
    let p = g.presentation().clone();
    let ng = g.len();
    let mut order: Vec<usize> = (0..elems.len()).collect();
    order.sort_by_key(|&v| elems[v].0);
    let mut pos = vec![0; elems.len()];
    for (q, &v) in order.iter().enumerate() {
        pos[v] = q;
    }
    let mut gens = Vec::with_capacity(ng * elems.len());
    let mut delta = BTreeMap::new();
    let mut components = BTreeMap::new();
    for (q, &v) in order.iter().enumerate() {
        let deg = elems[v].0;
        gens.extend(g.gens().iter().map(|gen| Generator { object: gen.object, shift: gen.shift - deg }));
        let sg = sign(&p, deg);
        for (&(r, s), d) in g.delta() {
            delta.insert((q * ng + r, q * ng + s), d.scale(&sg));
        }
        for (w, c) in dv[v].iter() {
            debug_assert!(pos[w] > q);
            for (s, gen) in g.gens().iter().enumerate() {
                let e = SparseVector::unit(p.unit(gen.object), c.clone());
                delta.insert((pos[w] * ng + s, q * ng + s), e);
            }
        }
        let f = hom.to_morphism(&elems[v].1, deg);
        for ((r, s), comp) in f.components {
            components.insert((r, q * ng + s), comp);
        }
    }
    let tensor = TwistedComplex::new(p, gens, delta)?;
    Ok((tensor, Morphism { degree: 0, components }))
}

/// `Y -> V^∨ ⊗ G` for cocycles `elems` of `hom(Y, G)`, blocks `G[|v|]`.
pub fn coevaluation(
    g: &TwistedComplex,
    hom: &HomComplex,
    elems: &[(i64, SparseVector)],
) -> Result<(TwistedComplex, Morphism), TwcxError> {
    let p = g.presentation().clone();
    let ng = g.len();
    let mut gens = Vec::with_capacity(ng * elems.len());
    let mut delta = BTreeMap::new();
    let mut components = BTreeMap::new();
    for (q, (deg, v)) in elems.iter().enumerate() {
        gens.extend(g.gens().iter().map(|gen| Generator { object: gen.object, shift: gen.shift + deg }));
        let sg = sign(&p, *deg);
        for (&(r, s), d) in g.delta() {
            delta.insert((q * ng + r, q * ng + s), d.scale(&sg));
        }
        let f = hom.to_morphism(v, *deg);
        for ((r, s), comp) in f.components {
            components.insert((q * ng + r, s), comp);
        }
    }
    let tensor = TwistedComplex::new(p, gens, delta)?;
    Ok((tensor, Morphism { degree: 0, components }))
}

/// `Cone(H(hom(G, X)) ⊗ G -> X)`, minimized. Left mutation and spherical twist.
pub fn left_twist(g: &TwistedComplex, x: &TwistedComplex) -> Result<TwistedComplex, TwcxError> {
    let hom = HomComplex::new(g, x)?;
    let elems = cohomology_basis(&hom);
    let dv = vec![SparseVector::new(); elems.len()];
    let (t, ev) = evaluation(g, &hom, &elems, &dv)?;
    Ok(minimize(&cone(&t, x, &ev)?))
}

/// `Cone(Y -> H(hom(Y, G))^∨ ⊗ G)[−1]`, minimized. Right mutation and dual twist.
pub fn right_twist(g: &TwistedComplex, y: &TwistedComplex) -> Result<TwistedComplex, TwcxError> {
    let hom = HomComplex::new(y, g)?;
    let elems = cohomology_basis(&hom);
    let (t, coev) = coevaluation(g, &hom, &elems)?;
    Ok(minimize(&cone(y, &t, &coev)?.shifted(-1)))
}

/// `Cone(V ⊗ G -> X)` for the subcomplex `V` of `hom(G, X)` spanned by the basis
/// vectors `basis`, which must be closed under the differential. Not minimized.
pub fn twist_by_subcomplex(
    g: &TwistedComplex,
    x: &TwistedComplex,
    hom: &HomComplex,
    basis: &[usize],
) -> Result<TwistedComplex, TwcxError> {
    let c = hom.complex();
    let slot: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(k, &b)| (b, k)).collect();
    let one = c.field().one();
    let mut dv = Vec::with_capacity(basis.len());
    for &b in basis {
        let mut e = Vec::new();
        for (t, z) in c.diff()[b].iter() {
            match slot.get(&t) {
                Some(&k) => e.push((k, z.clone())),
                None => return Err(TwcxError::NotClosed),
            }
        }
        dv.push(SparseVector::from_entries(e));
    }
    let elems: Vec<(i64, SparseVector)> =
        basis.iter().map(|&b| (c.degree(b), SparseVector::unit(b, one.clone()))).collect();
    let (t, ev) = evaluation(g, hom, &elems, &dv)?;
    cone(&t, x, &ev)
}
