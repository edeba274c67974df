use std::sync::Arc;

use num_rational::BigRational;

use super::*;
use crate::collections::{extend_helix, right_dual_collection, CollectionState};
use crate::exactlin::Field;
use crate::families::{beilinson_directed, m_kronecker, point};
use crate::report::Status;

fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (1..=k).fold(1usize, |acc, t| acc * (n - k + t) as usize / t as usize)
}

fn b2() -> CollectionState {
    CollectionState::exceptional(Arc::new(beilinson_directed(2, Field::Rational)), 1).unwrap()
}

fn window(c: &CollectionState, lo: i64, hi: i64) -> ZAlgebraWindow {
    build_zalgebra(&extend_helix(c, lo, hi).unwrap())
}

#[test]
fn b2_pieces_and_products() {
    let z = window(&b2(), -5, 9);
    assert!(z.report().all_pass(), "{:?}", z.report());
    for p in -5..=9i64 {
        for q in -5..=p {
            assert_eq!(z.dims(p, q).unwrap(), &DimTable::from_pairs([(0, binom(p - q + 2, 2))]).into_iter_nonzero());
        }
    }
    assert!(z.grading().unwrap().values().all(|&s| s == 0));
    // x_i x_j = x_j x_i: degree-one products land in the 6-dimensional degree-two piece with rank 6
    let t = z.mult(3, 2, 1);
    let images: Vec<_> = t.iter().flatten().cloned().collect();
    assert_eq!(images.len(), 9);
    assert_eq!(crate::exactlin::span_rank(6, images), 6);
}

trait NonZero {
    fn into_iter_nonzero(self) -> DimTable;
}

impl NonZero for DimTable {
    fn into_iter_nonzero(self) -> DimTable {
        DimTable::from_pairs(self.iter().filter(|&(_, n)| n > 0))
    }
}

#[test]
fn theta_and_tensor_pieces() {
    let w = extend_helix(&b2(), -2, 9).unwrap();
    assert!(theta_apply(&w, 2, 3).unwrap() == w.object(9).unwrap());
    assert!(matches!(theta_apply(&w, 3, 1), Err(TensorError::OutOfRange { index: 10, .. })));
    let z = build_zalgebra(&w);
    let t = tensor_window(&z, 1).unwrap();
    assert!(t.report.all_pass(), "{:?}", t.report);
    assert_eq!(t.totals[0].total(), 15);
    assert_eq!(t.totals[1].total(), 96);
    assert!(tensor_window(&z, 3).is_err());
    assert!(rolled_up_check(&z, 2).unwrap().all_pass());
}

#[test]
fn b2_resolution_of_a_simple() {
    let z = window(&b2(), -5, 9);
    let r = simple_resolution(&z, 3, 8);
    assert_eq!(r.status, Status::Pass, "{:?}", r.reason);
    assert_eq!(r.terms, vec![vec![3], vec![2, 2, 2], vec![1, 1, 1], vec![0]]);
    assert_eq!(r.length(), Some(3));
    let (status, g, _) = global_dimension_window(&z, 8);
    assert_eq!((status, g), (Status::Pass, Some(3)));
    // too little room below the simple
    let small = window(&b2(), -2, 6);
    let r = simple_resolution(&small, 1, 8);
    assert_eq!(r.status, Status::Inconclusive);
}

#[test]
fn b2_is_gorenstein() {
    let c = b2();
    let z = window(&c, -5, 9);
    let (duals, rep) = right_dual_collection(&c).unwrap();
    assert!(rep.all_pass());
    for i in 1..=3 {
        let g = as_gorenstein_check(&z, &duals, i, 8).unwrap();
        assert_eq!(g.verdict, Status::Pass, "{}", g.to_json());
        assert_eq!((g.total_a, g.total_b), (1, Some(1)));
        assert_eq!(g.route_a[&i], DimTable::from_pairs([(3, 1)]));
    }
    assert!(adjunction_check(&z, &duals, 8).unwrap().all_pass());
}

#[test]
fn b2_hilbert_function() {
    let z = window(&b2(), -5, 9);
    let h = hilbert_function(&z, 9, 8).unwrap();
    assert_eq!(h.values, (0..8).map(|k| binom(k + 2, 2)).collect::<Vec<_>>());
    assert_eq!(h.degree(), Some(2));
    let half = BigRational::new(1.into(), 2.into());
    assert_eq!(h.fit.as_ref().unwrap()[2], half);
    assert!(hilbert_function(&z, 9, 20).is_err());
}

#[test]
fn point_algebra() {
    let c = CollectionState::exceptional(Arc::new(point(Field::Rational)), 2).unwrap();
    let z = window(&c, -4, 4);
    assert!(z.report().all_pass());
    assert_eq!(z.grading().unwrap()[&1] - z.grading().unwrap()[&0], 3);
    let r = simple_resolution(&z, 1, 4);
    assert_eq!(r.length(), Some(1));
    let h = hilbert_function(&z, 4, 6).unwrap();
    assert_eq!(h.values, vec![1; 6]);
    assert_eq!(h.degree(), Some(0));
    let (duals, _) = right_dual_collection(&c).unwrap();
    assert!(adjunction_check(&z, &duals, 4).unwrap().all_pass());
}

#[test]
fn kronecker_with_wrong_dimension_is_not_certified() {
    let c = CollectionState::exceptional(Arc::new(m_kronecker(2, 1, Field::Rational).unwrap().directed), 1).unwrap();
    let z = window(&c, -3, 6);
    let (duals, _) = right_dual_collection(&c).unwrap();
    let g = as_gorenstein_check(&z, &duals, 1, 6).unwrap();
    assert_ne!(g.verdict, Status::Pass);
}
