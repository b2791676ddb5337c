//! Brute-force oracles shared by the integration tests. They only use
//! `FiniteSpace::leq` and plain vectors, never the bitmask machinery they
//! are checked against.
#![allow(dead_code)]

use locprod::FiniteSpace;

/// A subset as a membership vector.
pub type Members = Vec<bool>;

pub fn members(n: usize, mask: u64) -> Members {
    (0..n).map(|i| mask >> i & 1 == 1).collect()
}

pub fn to_mask(m: &[bool]) -> u64 {
    m.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold(0, |acc, (i, _)| acc | 1 << i)
}

/// Opens straight from the definition: sets closed upward under `leq`.
pub fn opens_by_definition(space: &FiniteSpace) -> Vec<Members> {
    let n = space.len();
    (0..1u64 << n)
        .map(|mask| members(n, mask))
        .filter(|s| (0..n).all(|x| !s[x] || (0..n).all(|y| !space.leq(x, y) || s[y])))
        .collect()
}

/// Every family of subsets of `{0..n}` that contains the empty and full
/// sets and is closed under pairwise union and intersection. On a finite
/// set these are exactly the topologies.
pub fn count_topologies_by_closure_systems(n: usize) -> usize {
    let subsets = 1usize << n;
    let full = subsets - 1;
    // each family is a bitmask over the 2^n subsets
    let mut count = 0;
    for family in 0u64..1 << subsets {
        let has = |s: usize| family >> s & 1 == 1;
        if !has(0) || !has(full) {
            continue;
        }
        let closed = (0..subsets)
            .filter(|&s| has(s))
            .all(|s| (0..subsets).filter(|&t| has(t)).all(|t| has(s | t) && has(s & t)));
        if closed {
            count += 1;
        }
    }
    count
}

/// `C ∩ (U × V)` is a rectangle, with sets given as vectors over X, Y and
/// `c[a][b]` membership.
pub fn box_is_rectangle(c: &[Vec<bool>], u: &[bool], v: &[bool]) -> bool {
    let nx = u.len();
    let ny = v.len();
    let inside = |a: usize, b: usize| u[a] && v[b] && c[a][b];
    let rows: Vec<usize> = (0..nx).filter(|&a| (0..ny).any(|b| inside(a, b))).collect();
    let cols: Vec<usize> = (0..ny).filter(|&b| (0..nx).any(|a| inside(a, b))).collect();
    rows.iter().all(|&a| cols.iter().all(|&b| inside(a, b)))
}

pub fn grid(nx: usize, ny: usize, mask: u64) -> Vec<Vec<bool>> {
    (0..nx)
        .map(|a| (0..ny).map(|b| mask >> (a * ny + b) & 1 == 1).collect())
        .collect()
}

/// Local product hypothesis by existential search over every open box.
pub fn locally_product_by_search(x: &FiniteSpace, y: &FiniteSpace, c: &[Vec<bool>]) -> bool {
    let ox = opens_by_definition(x);
    let oy = opens_by_definition(y);
    (0..x.len()).all(|a| {
        (0..y.len()).all(|b| {
            ox.iter()
                .filter(|u| u[a])
                .any(|u| oy.iter().filter(|v| v[b]).any(|v| box_is_rectangle(c, u, v)))
        })
    })
}

/// Closedness from the definition: the complement is open.
pub fn closed_by_definition(space: &FiniteSpace, s: &[bool]) -> bool {
    let complement: Vec<bool> = s.iter().map(|b| !b).collect();
    opens_by_definition(space).contains(&complement)
}

/// Preimage-of-opens continuity.
pub fn continuous_by_definition(dom: &FiniteSpace, cod: &FiniteSpace, f: &[usize]) -> bool {
    let dom_opens = opens_by_definition(dom);
    opens_by_definition(cod).iter().all(|v| {
        let pre: Vec<bool> = (0..dom.len()).map(|x| v[f[x]]).collect();
        dom_opens.contains(&pre)
    })
}

/// All labeled preorders on `n` points via brute force over relations.
pub fn all_spaces(n: usize) -> Vec<FiniteSpace> {
    locprod::enumerate_preorders(n).unwrap()
}
