//! Generated example presentations.

use std::collections::HashMap;

use crate::dgpres::{trivial_extension, BasisElement, HomSpace, Metadata, Presentation, PresentationError};
use crate::exactlin::{Field, SparseVector};

/// A generated directed category together with its trivial extension.
#[derive(Clone, Debug)]
pub struct Family {
    pub directed: Presentation,
    pub extension: Presentation,
    pub metadata: Metadata,
}

fn monomials(nvars: usize, degree: usize) -> Vec<Vec<usize>> {
    if nvars == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials(nvars - 1, degree - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn monomial_name(exps: &[usize]) -> String {
    let s: String = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { format!("x{v}") } else { format!("x{v}^{e}") })
        .collect();
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Objects `O(0), ..., O(n)` with homs the monomials of degree `j − i` in `n + 1` variables.
pub fn beilinson_directed(n: usize, field: Field) -> Presentation {
    let l = n + 1;
    let mut bases: Vec<Vec<Vec<usize>>> = Vec::with_capacity(l * l);
    for i in 0..l {
        for j in 0..l {
            bases.push(if j >= i { monomials(n + 1, j - i) } else { Vec::new() });
        }
    }
    let index: Vec<HashMap<Vec<usize>, usize>> =
        bases.iter().map(|b| b.iter().enumerate().map(|(k, m)| (m.clone(), k)).collect()).collect();
    let homs = bases
        .iter()
        .map(|b| HomSpace::new(b.iter().map(|m| BasisElement { name: monomial_name(m), degree: 0 }).collect()))
        .collect();
    let objects = (0..l).map(|i| format!("O({i})")).collect();
    let mut p = Presentation::new(field, objects, homs, vec![0; l]).expect("well-formed");
    for i in 0..l {
        for j in i..l {
            for k in j..l {
                for (a, g) in bases[j * l + k].iter().enumerate() {
                    for (b, f) in bases[i * l + j].iter().enumerate() {
                        let prod: Vec<usize> = g.iter().zip(f).map(|(x, y)| x + y).collect();
                        let c = index[i * l + k][&prod];
                        p.set_composition(i, j, k, a, b, SparseVector::unit(c, field.one()));
                    }
                }
            }
        }
    }
    p
}

/// Two objects with `m` degree-zero arrows between them.
pub fn kronecker_directed(m: usize, field: Field) -> Presentation {
    let id = |name: &str| HomSpace::new(vec![BasisElement { name: name.into(), degree: 0 }]);
    let arrows = HomSpace::new((0..m).map(|k| BasisElement { name: format!("a{k}"), degree: 0 }).collect());
    let homs = vec![id("id0"), arrows, HomSpace::default(), id("id1")];
    let mut p = Presentation::new(field, vec!["P0".into(), "P1".into()], homs, vec![0, 0]).expect("well-formed");
    p.fill_unit_compositions();
    p
}

pub fn point(field: Field) -> Presentation {
    let h = HomSpace::new(vec![BasisElement { name: "1".into(), degree: 0 }]);
    let mut p = Presentation::new(field, vec!["pt".into()], vec![h], vec![0]).expect("well-formed");
    p.fill_unit_compositions();
    p
}

fn family(directed: Presentation, d: i64, name: &str, params: Vec<i64>) -> Result<Family, PresentationError> {
    let extension = trivial_extension(&directed, d)?;
    let metadata = Metadata { family: name.into(), params, ell: directed.len(), d };
    Ok(Family { directed, extension, metadata })
}

/// Beilinson quiver of `P^n` extended with `d = n − 1`.
pub fn beilinson(n: usize, field: Field) -> Result<Family, PresentationError> {
    if n < 2 {
        return Err(PresentationError::Shape(format!("beilinson needs n >= 2, got {n}")));
    }
    family(beilinson_directed(n, field), n as i64 - 1, "beilinson", vec![n as i64])
}

/// The point extended by a dual element of degree `d`: graded dual numbers.
pub fn dual_numbers(d: i64, field: Field) -> Result<Family, PresentationError> {
    family(point(field), d, "dualnumbers", vec![d])
}

pub fn m_kronecker(m: usize, d: i64, field: Field) -> Result<Family, PresentationError> {
    family(kronecker_directed(m, field), d, "mkronecker", vec![m as i64, d])
}

/// Dispatches on a family name and integer parameters.
pub fn generate(name: &str, params: &[i64], field: Field) -> Result<Family, PresentationError> {
    let bad = || PresentationError::Shape(format!("bad parameters {params:?} for family {name}"));
    let nonneg = |x: i64| usize::try_from(x).map_err(|_| bad());
    match (name, params) {
        ("beilinson", [n]) => beilinson(nonneg(*n)?, field),
        ("dualnumbers", [d]) => dual_numbers(*d, field),
        ("mkronecker", [m, d]) => m_kronecker(nonneg(*m)?, *d, field),
        _ => Err(bad()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgpres::validate;
    use crate::report::DimTable;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn beilinson_dims_are_binomial() {
        for n in 2..=3 {
            let a = beilinson_directed(n, Field::Rational);
            for i in 0..=n {
                for j in i..=n {
                    assert_eq!(a.hom(i, j).dim(), binomial(j - i + n, n));
                }
            }
        }
    }

    #[test]
    fn extensions_validate() {
        let q = Field::Rational;
        for f in [beilinson(2, q), beilinson(3, q), dual_numbers(2, q), m_kronecker(2, 1, q)] {
            let f = f.unwrap();
            let r = validate(&f.extension);
            assert!(r.all_pass(), "{}: {r:?}", f.metadata.family);
        }
    }

    #[test]
    fn b2_hom_tables() {
        let b = beilinson(2, Field::Rational).unwrap().extension;
        assert_eq!(b.hom(0, 0).cohomology_table(b.field()), DimTable::from_pairs([(0, 1), (1, 1)]));
        assert_eq!(b.hom(2, 0).cohomology_table(b.field()), DimTable::from_pairs([(1, 6)]));
        assert_eq!(b.hom(0, 1).cohomology_table(b.field()), DimTable::from_pairs([(0, 3)]));
    }

    #[test]
    fn small_beilinson_rejected() {
        assert!(beilinson(1, Field::Rational).is_err());
    }
}
