use std::sync::Arc;

use super::*;
use crate::dgpres::validate;
use crate::exactlin::Field;
use crate::families::{beilinson, beilinson_directed, dual_numbers, m_kronecker, point};

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (1..=k).fold(1usize, |acc, t| acc * (n - k + t) as usize / t as usize)
}

fn b2_collection() -> CollectionState {
    CollectionState::exceptional(Arc::new(beilinson_directed(2, Field::Rational)), 1).unwrap()
}

#[test]
fn directed_part_of_b2() {
    let b = beilinson(2, Field::Rational).unwrap().extension;
    let a = directed_subcategory(&b).unwrap();
    assert!(a.is_directed());
    assert!(validate(&a).all_pass());
    let t = a.basis_tables();
    assert_eq!(t[&(0, 1)], DimTable::from_pairs([(0, 3)]));
    assert_eq!(t[&(1, 2)], DimTable::from_pairs([(0, 3)]));
    assert_eq!(t[&(0, 2)], DimTable::from_pairs([(0, 6)]));
    assert_eq!(t[&(1, 1)], DimTable::from_pairs([(0, 1)]));
    assert!(t.get(&(2, 0)).is_none_or(DimTable::is_empty));
    assert_eq!(a, beilinson_directed(2, Field::Rational));
}

#[test]
fn mutations_on_b2() {
    let c = b2_collection();
    let x = c.left_mutation_object(0).unwrap();
    assert!(hom_dims(&c.members[0], &x).unwrap().is_empty());
    assert_eq!(hom_dims(&x, &x).unwrap(), DimTable::from_pairs([(0, 1)]));
    let l = c.mutate(0, Direction::Left).unwrap();
    let back = l.mutate(0, Direction::Right).unwrap();
    assert!(back.compare(&c).unwrap().iter().all(|v| *v == Verdict::Equivalent));
    let r = c.mutate(1, Direction::Right).unwrap();
    let back = r.mutate(1, Direction::Left).unwrap();
    assert!(back.compare(&c).unwrap().iter().all(|v| *v == Verdict::Equivalent));
    assert_eq!(c.mutate(2, Direction::Left).unwrap_err(), CollectionError::InvalidSlot { slot: 2, len: 3 });
}

#[test]
fn zero_hom_mutation_is_identity() {
    let k = CollectionState::exceptional(Arc::new(m_kronecker(0, 1, Field::Rational).unwrap().directed), 1).unwrap();
    let x = k.left_mutation_object(0).unwrap();
    assert_eq!(x, k.members[1]);
    let y = k.right_mutation_object(0).unwrap();
    assert_eq!(y, k.members[0]);
}

#[test]
fn euler_law_under_left_mutation() {
    let c = b2_collection();
    let chi = c.euler_matrix().unwrap();
    for i in 0..2 {
        let m = c.mutate(i, Direction::Left).unwrap();
        assert_eq!(m.euler_matrix().unwrap(), euler_after_left_mutation(&chi, i));
    }
}

#[test]
fn right_dual_is_biorthogonal() {
    let c = b2_collection();
    let (f, report) = right_dual_collection(&c).unwrap();
    assert_eq!(f.len(), 3);
    assert!(report.all_pass());
    assert_eq!(f[0], c.members[0]);
    let p = CollectionState::exceptional(Arc::new(point(Field::Rational)), 1).unwrap();
    let (f, _) = right_dual_collection(&p).unwrap();
    assert_eq!(f[0], p.members[0]);
}

#[test]
fn b2_helix_window() {
    let c = b2_collection();
    let w = extend_helix(&c, -3, 6).unwrap();
    for i in -3..=6 {
        for j in -3..=6 {
            let t = w.hom(i, j).unwrap();
            if i <= j {
                assert_eq!(*t, DimTable::from_pairs([(0, binom(j - i + 2, 2))]), "({i},{j})");
            } else if i - j < 3 {
                assert!(t.is_empty(), "({i},{j}) {t}");
            }
        }
    }
    assert_eq!(w.hom(1, 4).unwrap(), &DimTable::from_pairs([(0, 10)]));
    assert_eq!(w.hom(-2, 1), w.hom(1, 4));
    assert_eq!(w.hom(2, -2).unwrap().get(2), 3);
    assert!(w.serre_report().all_pass());
    assert!(is_acyclic_helix(&w).all_pass());
    let r = w.recipe(-2).unwrap();
    assert_eq!((r.source, r.by.clone(), r.shift), (1, vec![0, -1], -2));
    assert_eq!(r.to_string(), "E_-2 = L_{E_-1} L_{E_0} (E_1)[-2]");
}

#[test]
fn point_helix_is_shifts() {
    let p = CollectionState::exceptional(Arc::new(point(Field::Rational)), 1).unwrap();
    let w = extend_helix(&p, -1, 2).unwrap();
    assert_eq!(w.object(0).unwrap(), &p.members[0].shifted(-2));
    assert_eq!(w.object(2).unwrap(), &p.members[0].shifted(2));
    let r = is_acyclic_helix(&w);
    assert!(!r.all_pass());
    let fails = &r.get("acyclic").unwrap().witness["failures"];
    assert!(fails.as_array().unwrap().iter().any(|f| f["i"] == 1 && f["j"] == 2 && f["degree"] == -2));
}

#[test]
fn kronecker_with_wrong_dimension_is_not_acyclic() {
    let k = CollectionState::exceptional(Arc::new(m_kronecker(2, 1, Field::Rational).unwrap().directed), 1).unwrap();
    let w = extend_helix(&k, -2, 5).unwrap();
    let r = is_acyclic_helix(&w);
    assert!(!r.all_pass());
    let fails = r.get("acyclic").unwrap().witness["failures"].as_array().unwrap().clone();
    assert!(fails.iter().any(|f| f["degree"].as_i64().unwrap() < 0));
}

#[test]
fn bad_windows() {
    let c = b2_collection();
    assert_eq!(extend_helix(&c, 2, 6).unwrap_err(), CollectionError::BadWindow(2, 6, 3));
    assert_eq!(extend_helix(&c, 1, 2).unwrap_err(), CollectionError::BadWindow(1, 2, 3));
}

#[test]
fn spherical_collection_of_dual_numbers() {
    let b = Arc::new(dual_numbers(2, Field::Rational).unwrap().extension);
    let s = CollectionState::spherical(b.clone(), 2).unwrap();
    assert!(CollectionState::spherical(b, 1).is_err());
    assert!(s.mutate(0, Direction::Left).is_err());
}
