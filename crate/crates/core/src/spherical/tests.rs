use std::sync::Arc;

use super::*;
use crate::exactlin::Field;
use crate::families::{beilinson, beilinson_directed, dual_numbers};

fn b2() -> Arc<Presentation> {
    Arc::new(beilinson(2, Field::Rational).unwrap().extension)
}

fn gens(p: &Arc<Presentation>) -> Vec<TwistedComplex> {
    (0..p.len()).map(|i| TwistedComplex::generator(p.clone(), i).unwrap()).collect()
}

#[test]
fn certificates() {
    let b = b2();
    for s in gens(&b) {
        assert_eq!(is_spherical(&s, 1).verdict, Status::Pass);
        assert_eq!(is_spherical(&s, 2).verdict, Status::Fail);
    }
    let a = Arc::new(beilinson_directed(2, Field::Rational));
    assert_eq!(is_spherical(&gens(&a)[0], 1).verdict, Status::Fail);
    let dn = Arc::new(dual_numbers(2, Field::Rational).unwrap().extension);
    let c = is_spherical(&gens(&dn)[0], 2);
    assert_eq!(c.verdict, Status::Pass);
    assert_eq!(c.to_json()["serre_condition"], "assumed");
}

#[test]
fn twist_and_dual_twist_are_inverse() {
    let b = b2();
    let s = gens(&b);
    let t = twist(&s[0], &s[1]).unwrap();
    let (v, _) = quasi_equivalence(&dual_twist(&s[0], &t).unwrap(), &s[1]).unwrap();
    assert_eq!(v, Verdict::Equivalent);
    let u = dual_twist(&s[2], &s[0]).unwrap();
    let (v, _) = quasi_equivalence(&twist(&s[2], &u).unwrap(), &s[0]).unwrap();
    assert_eq!(v, Verdict::Equivalent);
}

#[test]
fn cotwist_matches_twist_composite() {
    let b = b2();
    let c = CollectionState::spherical(b.clone(), 1).unwrap();
    let r = cotwist_comparison(&c, &gens(&b), false).unwrap();
    assert_eq!(r.checks.len(), 3);
    assert!(r.all_pass(), "{r:?}");
}

#[test]
fn cotwist_of_a_single_sphere_is_its_twist() {
    let dn = Arc::new(dual_numbers(1, Field::Rational).unwrap().extension);
    let c = CollectionState::spherical(dn.clone(), 1).unwrap();
    let s = &gens(&dn)[0];
    let (v, _) = quasi_equivalence(&dual_cotwist(&c, s).unwrap(), &twist(s, s).unwrap()).unwrap();
    assert_eq!(v, Verdict::Equivalent);
    assert!(cotwist_comparison(&c, std::slice::from_ref(s), true).unwrap().all_pass());
}

#[test]
fn spherical_helix_of_b2() {
    let c = CollectionState::spherical(b2(), 1).unwrap();
    let (w, steps) = extend_spherical_helix(&c, -2, 6).unwrap();
    assert!(steps.all_pass(), "{steps:?}");
    assert_eq!(w.hom(1, 2).unwrap(), &DimTable::from_pairs([(0, 3)]));
    assert_eq!(w.hom(1, 1).unwrap(), &sphere_table(1));
    // one period apart the backward summand sits in degree -1
    assert_eq!(w.hom(1, 4).unwrap(), &DimTable::from_pairs([(-1, 1), (0, 10)]));
    assert!(!is_acyclic_spherical_helix(&w).all_pass());
    let (f, _) = extend_spherical_helix(&c, 1, 3).unwrap();
    assert!(is_acyclic_spherical_helix(&f).all_pass());
}

#[test]
fn spherical_helix_of_a_single_sphere_is_shifts() {
    let dn = Arc::new(dual_numbers(1, Field::Rational).unwrap().extension);
    let c = CollectionState::spherical(dn, 1).unwrap();
    let (w, _) = extend_spherical_helix(&c, 0, 2).unwrap();
    assert_eq!(w.object(0).unwrap(), &c.members[0].shifted(-2));
    assert!(!is_acyclic_spherical_helix(&w).all_pass());
    let (w, _) = extend_spherical_helix(&c, 1, 1).unwrap();
    assert!(is_acyclic_spherical_helix(&w).all_pass());
}

#[test]
fn theorem_instance_on_b2() {
    let r = theorem_check(b2(), 1, -1, 4).unwrap();
    assert!(r.all_pass(), "{r:?}");
    let pairs = r.get("dims").unwrap().witness["pairs"].as_array().unwrap().clone();
    let at = |i: i64, j: i64| pairs.iter().find(|p| p["i"] == i && p["j"] == j).unwrap()["spherical"].clone();
    assert_eq!(at(1, 2), serde_json::json!({"0": 3}));
    assert_eq!(at(1, 1), serde_json::json!({"0": 1, "1": 1}));
    assert_eq!(at(2, 1), serde_json::json!({"1": 3}));
}

#[test]
fn theorem_check_needs_a_split_extension() {
    let mut b = (*b2()).clone();
    // make a dual element compose into the directed part
    let c = b.hom(1, 0).basis.iter().position(|e| e.name.ends_with('*')).unwrap();
    let a = b.hom(0, 1).basis.iter().position(|e| !e.name.ends_with('*')).unwrap();
    let unit = crate::exactlin::SparseVector::unit(b.unit(0), b.scalar(1));
    b.set_composition(0, 1, 0, c, a, unit);
    let r = theorem_check(Arc::new(b), 1, 1, 3).unwrap();
    assert_eq!(r.get("canonical_morphism").unwrap().status, Status::Fail);
    assert_eq!(r.get("dims").unwrap().status, Status::Skipped);
}
