mod common;

use common::*;
use locprod::two_space::{Chart, TwoMap, TwoSpace};
use locprod::{FiniteSpace, PointSet, ProductSpace, Subset};

/// Order automorphisms of a space, by brute force over permutations.
fn automorphisms(space: &FiniteSpace) -> Vec<Vec<usize>> {
    fn permute(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for k in 0..n {
            if !prefix.contains(&k) {
                prefix.push(k);
                permute(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut perms = Vec::new();
    permute(&mut Vec::new(), space.len(), &mut perms);
    perms
        .into_iter()
        .filter(|p| {
            space
                .points()
                .all(|x| space.points().all(|y| space.leq(x, y) == space.leq(p[x], p[y])))
        })
        .collect()
}

/// Chart sending an open subset `w` of the base to `w × {pt}`.
fn flattened_chart(base: &FiniteSpace, w: &PointSet) -> Chart {
    let (sub, points) = base.subspace(w);
    Chart::new(
        base.len(),
        sub,
        FiniteSpace::discrete(1),
        points.iter().enumerate().map(|(k, &p)| (p, (k, 0))),
    )
    .unwrap()
}

/// Whether `tau` (in `first`'s coordinates) splits on some open box around
/// `(u0, v0)`; searches every open box.
fn splits_on_some_open_box<F>(first: &Chart, (u0, v0): (usize, usize), tau: F) -> bool
where
    F: Fn(usize, usize) -> Option<(usize, usize)>,
{
    let us = opens_by_definition(&first.u_space);
    let vs = opens_by_definition(&first.v_space);
    us.iter().filter(|m| m[u0]).any(|m| {
        vs.iter().filter(|n| n[v0]).any(|n| {
            let ms: Vec<usize> = (0..m.len()).filter(|&i| m[i]).collect();
            let ns: Vec<usize> = (0..n.len()).filter(|&j| n[j]).collect();
            let mut f = vec![None; m.len()];
            let mut g = vec![None; n.len()];
            for &u in &ms {
                for &v in &ns {
                    let Some((fu, gv)) = tau(u, v) else { return false };
                    if *f[u].get_or_insert(fu) != fu || *g[v].get_or_insert(gv) != gv {
                        return false;
                    }
                }
            }
            true
        })
    })
}

fn small_atlases() -> Vec<TwoSpace> {
    let mut out = Vec::new();
    for (nu, nv) in [(1, 2), (2, 1), (2, 2), (1, 3), (3, 1), (2, 3), (3, 2)] {
        for u in all_spaces(nu) {
            for v in all_spaces(nv) {
                let model = TwoSpace::single_chart(u.clone(), v.clone()).unwrap();
                for sigma in automorphisms(&model.base) {
                    let mut m = model.clone();
                    let nv = v.len();
                    m.charts.push(
                        Chart::new(
                            m.base.len(),
                            u.clone(),
                            v.clone(),
                            (0..m.base.len()).map(|w| (w, (sigma[w] / nv, sigma[w] % nv))),
                        )
                        .unwrap(),
                    );
                    out.push(m);
                }
                for w in model.base.all_opens().into_iter().filter(|w| !w.is_empty()) {
                    let mut m = model.clone();
                    m.charts.push(flattened_chart(&model.base, &w));
                    out.push(m);
                }
            }
        }
    }
    out
}

#[test]
fn compatibility_minimal_box_matches_open_box_search() {
    let mut failures = 0;
    let mut checks = 0;
    for model in small_atlases() {
        assert!(model.base.len() <= 6);
        for (i, first) in model.charts.iter().enumerate() {
            assert_eq!(first.check(&model.base), Ok(()));
            for (j, second) in model.charts.iter().enumerate() {
                for c in first.domain.intersection(&second.domain).iter() {
                    let fast = model.check_compatibility(i, j, c).unwrap();
                    let slow = splits_on_some_open_box(first, first.apply(c).unwrap(), |u, v| {
                        first.invert(u, v).and_then(|w| second.apply(w))
                    });
                    assert_eq!(fast, slow, "{model:?} charts {i}->{j} at {c}");
                    checks += 1;
                    failures += usize::from(!fast);
                }
            }
        }
    }
    // the fixtures must exercise both outcomes
    assert!(failures > 100 && checks - failures > 100, "{failures}/{checks}");
}

#[test]
fn two_map_minimal_box_matches_open_box_search() {
    let models: Vec<TwoSpace> = small_atlases()
        .into_iter()
        .filter(|m| m.base.len() <= 3)
        .collect();
    let mut rejected = 0;
    let mut accepted = 0;
    for source in &models {
        for target in models.iter().step_by(3) {
            let (n, m) = (source.base.len(), target.base.len());
            for code in 0..m.pow(n as u32) {
                let h: Vec<usize> = (0..n).map(|i| code / m.pow(i as u32) % m).collect();
                if !continuous_by_definition(&source.base, &target.base, &h) {
                    continue;
                }
                let mut oracle = true;
                'outer: for c in 0..n {
                    for first in &source.charts {
                        let Some(start) = first.apply(c) else { continue };
                        for second in &target.charts {
                            if !second.domain.contains(h[c]) {
                                continue;
                            }
                            if !splits_on_some_open_box(first, start, |u, v| {
                                first.invert(u, v).and_then(|w| second.apply(h[w]))
                            }) {
                                oracle = false;
                                break 'outer;
                            }
                        }
                    }
                }
                let report = TwoMap::new(source, target, h.clone()).unwrap().check();
                assert_eq!(report.is_two_map, oracle, "{source:?} -> {target:?} via {h:?}");
                if oracle {
                    accepted += 1;
                } else {
                    rejected += 1;
                }
            }
        }
    }
    assert!(accepted > 0 && rejected > 0);
}

#[test]
fn strict_mode_agrees_on_valid_models() {
    for model in small_atlases() {
        assert_eq!(model.validate().valid, model.validate_strict().valid);
    }
}

#[test]
fn compatibility_is_symmetric_on_fixtures() {
    let mut asymmetric = 0;
    for model in small_atlases() {
        for i in 0..model.charts.len() {
            for j in 0..i {
                let overlap = model.charts[i].domain.intersection(&model.charts[j].domain);
                for c in overlap.iter() {
                    if model.check_compatibility(i, j, c).unwrap()
                        != model.check_compatibility(j, i, c).unwrap()
                    {
                        asymmetric += 1;
                    }
                }
            }
        }
    }
    assert_eq!(asymmetric, 0);
}

#[test]
fn example_two_models_validate_small() {
    for (nx, ny) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        for x in all_spaces(nx) {
            for y in all_spaces(ny) {
                let p = ProductSpace::new(x.clone(), y.clone()).unwrap();
                for mask in 0..1u64 << p.len() {
                    let c = Subset::from_bits(&p, mask);
                    if !c.is_locally_product() {
                        assert!(TwoSpace::from_locally_product_subset(&c).is_err());
                        continue;
                    }
                    let model = TwoSpace::from_locally_product_subset(&c).unwrap();
                    assert_eq!(model.base.len(), c.members().count());
                    assert!(model.validate().valid, "{x:?} {y:?} {mask:b}");
                    assert!(TwoMap::identity(&model).check().is_two_map);
                }
            }
        }
    }
}

fn fixture_models() -> Vec<TwoSpace> {
    let s2 = FiniteSpace::sierpinski;
    let pt = || FiniteSpace::discrete(1);
    let mut out = vec![
        TwoSpace::single_chart(pt(), pt()).unwrap(),
        TwoSpace::single_chart(s2(), pt()).unwrap(),
        TwoSpace::single_chart(pt(), s2()).unwrap(),
        TwoSpace::single_chart(FiniteSpace::indiscrete(2), pt()).unwrap(),
        TwoSpace::single_chart(s2(), s2()).unwrap(),
        TwoSpace::single_chart(FiniteSpace::discrete(2), s2()).unwrap(),
    ];
    let p = ProductSpace::new(s2(), s2()).unwrap();
    out.push(
        TwoSpace::from_locally_product_subset(&Subset::from_pairs(&p, [(0, 1), (1, 1)]).unwrap()).unwrap(),
    );
    let d = ProductSpace::new(FiniteSpace::discrete(2), FiniteSpace::discrete(2)).unwrap();
    out.push(
        TwoSpace::from_locally_product_subset(&Subset::from_pairs(&d, [(0, 0), (1, 1)]).unwrap()).unwrap(),
    );
    out
}

fn two_maps<'a>(source: &'a TwoSpace, target: &'a TwoSpace) -> Vec<TwoMap<'a>> {
    let (n, m) = (source.base.len(), target.base.len());
    (0..m.pow(n as u32))
        .map(|code| (0..n).map(|i| code / m.pow(i as u32) % m).collect())
        .filter_map(|h| TwoMap::new(source, target, h).ok())
        .filter(|map| map.check().is_two_map)
        .collect()
}

#[test]
fn identity_is_a_two_map_and_composites_stay_two_maps() {
    let models = fixture_models();
    for model in &models {
        assert!(model.validate().valid);
        assert!(TwoMap::identity(model).check().is_two_map);
    }
    let mut composites = 0;
    for a in &models {
        for b in &models {
            let first = two_maps(a, b);
            if first.is_empty() {
                continue;
            }
            for c in &models {
                for second in two_maps(b, c) {
                    for g in &first {
                        let composite = g.then(&second).unwrap();
                        assert!(composite.check().is_two_map, "{:?} then {:?}", g.map, second.map);
                        composites += 1;
                    }
                }
            }
        }
    }
    assert!(composites > 1000);
}

#[test]
fn two_product_reshuffles_coordinates() {
    let p = FiniteSpace::pseudocircle();
    let a = TwoSpace::single_chart(FiniteSpace::sierpinski(), FiniteSpace::discrete(1)).unwrap();
    let b = TwoSpace::single_chart(FiniteSpace::discrete(1), p).unwrap();
    let ab = a.two_product(&b).unwrap();
    let chart = &ab.charts[0];
    // w = (1, 3) is index 7; ((u1, u2), (v1, v2)) = ((1, 0), (0, 3)) flattens to (1, 3)
    assert_eq!(chart.apply(7), Some((1, 3)));
    assert_eq!(chart.u_space, FiniteSpace::sierpinski());
    assert_eq!(chart.v_space, FiniteSpace::pseudocircle());
    assert!(ab.validate().valid);
}
