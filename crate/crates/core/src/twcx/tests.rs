use std::sync::Arc;

use super::*;
use crate::exactlin::Field;
use crate::families::{beilinson, beilinson_directed};
use crate::report::DimTable;

fn b2_directed() -> Arc<Presentation> {
    Arc::new(beilinson_directed(2, Field::Rational))
}

fn gen(p: &Arc<Presentation>, i: usize) -> TwistedComplex {
    TwistedComplex::generator(p.clone(), i).unwrap()
}

fn euler(t: &DimTable) -> i64 {
    t.euler()
}

#[test]
fn generator_homs() {
    let p = b2_directed();
    assert_eq!(hom_dims(&gen(&p, 0), &gen(&p, 1)).unwrap(), DimTable::from_pairs([(0, 3)]));
    assert_eq!(hom_dims(&gen(&p, 0), &gen(&p, 2)).unwrap(), DimTable::from_pairs([(0, 6)]));
    assert_eq!(hom_dims(&gen(&p, 1), &gen(&p, 1)).unwrap(), DimTable::from_pairs([(0, 1)]));
    assert_eq!(
        TwistedComplex::generator(p.clone(), 3),
        Err(TwcxError::IndexOutOfRange { index: 3, len: 3 })
    );
}

#[test]
fn left_mutation_is_left_orthogonal() {
    let p = b2_directed();
    let x = left_twist(&gen(&p, 0), &gen(&p, 1)).unwrap();
    assert!(hom_dims(&gen(&p, 0), &x).unwrap().is_empty());
    assert_eq!(hom_dims(&gen(&p, 1), &x).unwrap(), DimTable::from_pairs([(0, 1)]));
    // unminimized cone agrees
    let hom = HomComplex::new(&gen(&p, 0), &gen(&p, 1)).unwrap();
    let elems = cohomology_basis(&hom);
    let dv = vec![SparseVector::new(); elems.len()];
    let (t, ev) = evaluation(&gen(&p, 0), &hom, &elems, &dv).unwrap();
    let raw = cone(&t, &gen(&p, 1), &ev).unwrap();
    assert_eq!(raw.len(), 4);
    assert_eq!(probe_tables(&raw), probe_tables(&x));
}

#[test]
fn cones_of_identity_and_zero() {
    let p = b2_directed();
    let e = gen(&p, 0);
    let c = cone(&e, &e, &Morphism::identity(&e)).unwrap();
    assert!(is_contractible(&c));
    assert!(is_contractible_by_homotopy(&c));
    assert!(minimize(&c).is_empty());
    let z = cone(&gen(&p, 0), &gen(&p, 1), &Morphism::zero(0)).unwrap();
    assert!(!is_contractible(&z));
    assert!(!is_contractible_by_homotopy(&z));
    assert_eq!(z, gen(&p, 0).shifted(1).direct_sum(&gen(&p, 1)).unwrap());
    assert!(!is_contractible(&gen(&p, 2)));
}

#[test]
fn minimize_strips_contractible_summand() {
    let p = b2_directed();
    let x = left_twist(&gen(&p, 0), &gen(&p, 2)).unwrap();
    let e = gen(&p, 1);
    let junk = cone(&e, &e, &Morphism::identity(&e)).unwrap();
    let m = minimize(&x.direct_sum(&junk).unwrap());
    assert_eq!(m, x);
}

#[test]
fn shift_displaces_degrees() {
    let p = b2_directed();
    let e = gen(&p, 0);
    assert_eq!(hom_dims(&e, &e.shifted(2)).unwrap(), DimTable::from_pairs([(-2, 1)]));
    assert_eq!(e.shifted(0), e);
    let x = left_twist(&gen(&p, 0), &gen(&p, 1)).unwrap();
    assert_eq!(x.shifted(1).shifted(-1), x);
    for n in -2..=2 {
        for o in 0..3 {
            let g = gen(&p, o);
            assert_eq!(hom_dims(&g, &x.shifted(n)).unwrap(), hom_dims(&g, &x).unwrap().shifted(n));
        }
    }
}

#[test]
fn euler_additivity_and_quasi_equivalence() {
    let p = b2_directed();
    let (e0, e1) = (gen(&p, 0), gen(&p, 1));
    let hom = HomComplex::new(&e0, &e1).unwrap();
    for rep in hom.cohomology(0).reps {
        let f = hom.to_morphism(&rep, 0);
        let c = cone(&e0, &e1, &f).unwrap();
        for o in 0..3 {
            let g = gen(&p, o);
            let lhs = euler(&hom_dims(&g, &c).unwrap());
            let rhs = euler(&hom_dims(&g, &e1).unwrap()) - euler(&hom_dims(&g, &e0).unwrap());
            assert_eq!(lhs, rhs);
        }
    }
    let x = left_twist(&e0, &e1).unwrap();
    let (v, _) = quasi_equivalence(&x, &x).unwrap();
    assert_eq!(v, Verdict::Equivalent);
    let (v, _) = quasi_equivalence(&x, &e1).unwrap();
    assert_eq!(v, Verdict::NotEquivalent);
}

#[test]
fn twists_over_trivial_extension() {
    let b = Arc::new(beilinson(2, Field::Rational).unwrap().extension);
    let s: Vec<TwistedComplex> = (0..3).map(|i| gen(&b, i)).collect();
    let t = left_twist(&s[0], &s[1]).unwrap();
    assert!(t.maurer_cartan_defect().is_none());
    let back = right_twist(&s[0], &t).unwrap();
    let (v, _) = quasi_equivalence(&back, &s[1]).unwrap();
    assert_eq!(v, Verdict::Equivalent);
    // twisting a spherical object by itself shifts it by 1 - d, here d = 1
    let ts = left_twist(&s[0], &s[0]).unwrap();
    let (v, _) = quasi_equivalence(&ts, &s[0]).unwrap();
    assert_eq!(v, Verdict::Equivalent);
}

#[test]
fn hom_complex_squares_to_zero() {
    let b = Arc::new(beilinson(2, Field::Rational).unwrap().extension);
    let x = left_twist(&gen(&b, 0), &gen(&b, 2)).unwrap();
    let y = right_twist(&gen(&b, 1), &gen(&b, 0)).unwrap();
    for (a, c) in [(&x, &y), (&y, &x), (&x, &x)] {
        assert!(HomComplex::new(a, c).unwrap().complex().is_complex());
    }
}
