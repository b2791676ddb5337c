mod common;

use common::*;
use locprod::{FiniteSpace, PointSet, ProductSpace, Subset};
use proptest::prelude::*;

#[test]
fn product_order_is_componentwise_and_boxes_are_minimal() {
    for nx in 1..=3 {
        for ny in 1..=2 {
            for x in all_spaces(nx) {
                for y in all_spaces(ny) {
                    let p = ProductSpace::new(x.clone(), y.clone()).unwrap();
                    for s in 0..p.len() {
                        let (a, b) = p.pair(s);
                        for t in 0..p.len() {
                            let (c, d) = p.pair(t);
                            assert_eq!(p.space().leq(s, t), x.leq(a, c) && y.leq(b, d));
                        }
                        let boxed = p.rectangle(&x.minimal_open(a).unwrap(), &y.minimal_open(b).unwrap());
                        assert_eq!(p.space().minimal_open(s).unwrap(), boxed);
                    }
                }
            }
        }
    }
}

#[test]
fn certificate_matches_open_box_search_small() {
    for (nx, ny) in [(1, 2), (2, 1), (2, 2), (1, 3), (3, 1)] {
        for x in all_spaces(nx) {
            for y in all_spaces(ny) {
                let p = ProductSpace::new(x.clone(), y.clone()).unwrap();
                for mask in 0..1u64 << p.len() {
                    let c = Subset::from_bits(&p, mask);
                    assert_eq!(
                        c.local_product_certificate().is_ok(),
                        locally_product_by_search(&x, &y, &grid(nx, ny, mask)),
                        "{x:?} {y:?} {mask:b}"
                    );
                }
            }
        }
    }
}

#[test]
fn rectangles_restrict_to_rectangles_on_open_boxes() {
    for (nx, ny) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
        for x in all_spaces(nx) {
            for y in all_spaces(ny) {
                let p = ProductSpace::new(x.clone(), y.clone()).unwrap();
                let ox = x.all_opens();
                let oy = y.all_opens();
                for a in 0..1u64 << nx {
                    for b in 0..1u64 << ny {
                        let s = p.rectangle(&PointSet::from_bits(nx, a), &PointSet::from_bits(ny, b));
                        for u in &ox {
                            for v in &oy {
                                let restricted = s.intersection(&p.rectangle(u, v));
                                assert!(Subset::new(&p, restricted).unwrap().is_rectangle());
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn decomposition_contains_subset_and_exact_iff_rectangle() {
    for x in all_spaces(3) {
        for y in all_spaces(2) {
            let p = ProductSpace::new(x.clone(), y).unwrap();
            for mask in 0..1u64 << p.len() {
                let c = Subset::from_bits(&p, mask);
                let d = c.decompose();
                assert!(c.members().is_subset(&p.rectangle(&d.a, &d.b)));
                assert_eq!(d.exact, c.is_rectangle());
                assert_eq!(d.exact, c.members().count() == d.a.count() * d.b.count());
            }
        }
    }
}

fn arb_space(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..2 * n)
            .prop_map(move |pairs| FiniteSpace::from_relation(n, pairs).unwrap())
    })
}

proptest! {
    #[test]
    fn theorem_holds_on_random_small_products(
        x in arb_space(4),
        y in arb_space(3),
        mask in any::<u64>(),
    ) {
        let p = ProductSpace::new(x, y).unwrap();
        let c = Subset::from_bits(&p, mask);
        let verdict = c.theorem_verdict();
        prop_assert!(verdict.is_ok());
        let v = verdict.unwrap();
        prop_assert_eq!(v.conclusion_holds, v.decomposition.exact);
        prop_assert_eq!(v.certificate.is_ok(), v.hypotheses.locally_product);
    }

    #[test]
    fn certificate_witnesses_are_rectangles_inside_boxes(
        x in arb_space(3),
        y in arb_space(3),
        mask in any::<u64>(),
    ) {
        let p = ProductSpace::new(x, y).unwrap();
        let c = Subset::from_bits(&p, mask);
        let cert = c.local_product_certificate();
        for w in &cert.witnesses {
            prop_assert!(w.i.is_subset(&w.u) && w.j.is_subset(&w.v));
            let local = c.members().intersection(&p.rectangle(&w.u, &w.v));
            prop_assert_eq!(w.rectangle, local == p.rectangle(&w.i, &w.j));
        }
    }
}
