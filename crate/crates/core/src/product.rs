//! Product spaces, subsets of them, and the local/global product checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, PointSet, MAX_POINTS};

/// `X × Y` with the componentwise preorder. The pair `(a, b)` is stored at
/// flat index `a * |Y| + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpace {
    x: FiniteSpace,
    y: FiniteSpace,
    view: FiniteSpace,
}

impl ProductSpace {
    pub fn new(x: FiniteSpace, y: FiniteSpace) -> Result<Self> {
        let (nx, ny) = (x.len(), y.len());
        if nx * ny > MAX_POINTS {
            return Err(Error::TooLarge(nx * ny));
        }
        let up = (0..nx * ny)
            .map(|p| {
                let (a, b) = (p / ny, p % ny);
                box_bits(ny, x.up_bits(a), y.up_bits(b))
            })
            .collect();
        let view = FiniteSpace::from_up_sets(up);
        Ok(ProductSpace { x, y, view })
    }

    pub fn x(&self) -> &FiniteSpace {
        &self.x
    }

    pub fn y(&self) -> &FiniteSpace {
        &self.y
    }

    /// The product as a plain finite space.
    pub fn space(&self) -> &FiniteSpace {
        &self.view
    }

    pub fn len(&self) -> usize {
        self.view.len()
    }

    pub fn is_empty(&self) -> bool {
        self.view.is_empty()
    }

    pub fn index(&self, a: usize, b: usize) -> Result<usize> {
        if a >= self.x.len() {
            return Err(Error::PointOutOfRange {
                index: a,
                len: self.x.len(),
            });
        }
        if b >= self.y.len() {
            return Err(Error::PointOutOfRange {
                index: b,
                len: self.y.len(),
            });
        }
        Ok(a * self.y.len() + b)
    }

    pub fn pair(&self, p: usize) -> (usize, usize) {
        (p / self.y.len(), p % self.y.len())
    }

    /// `minimal_open(a) × minimal_open(b)` as a set of product points.
    pub fn minimal_box(&self, a: usize, b: usize) -> Result<PointSet> {
        let p = self.index(a, b)?;
        let ny = self.y.len();
        Ok(PointSet::from_bits(
            self.len(),
            box_bits(ny, self.x.up_bits(p / ny), self.y.up_bits(p % ny)),
        ))
    }

    /// `u × v` for point sets of the two factors.
    pub fn rectangle(&self, u: &PointSet, v: &PointSet) -> PointSet {
        PointSet::from_bits(self.len(), box_bits(self.y.len(), u.bits(), v.bits()))
    }

    pub fn project_x(&self, s: &PointSet) -> PointSet {
        PointSet::from_bits(self.x.len(), project_x_bits(self.y.len(), s.bits()))
    }

    pub fn project_y(&self, s: &PointSet) -> PointSet {
        PointSet::from_bits(self.y.len(), project_y_bits(self.y.len(), s.bits()))
    }
}

#[inline]
pub(crate) fn box_bits(ny: usize, u: u64, v: u64) -> u64 {
    let mut out = 0u64;
    let mut rows = u;
    while rows != 0 {
        let a = rows.trailing_zeros() as usize;
        rows &= rows - 1;
        out |= v << (a * ny);
    }
    out
}

#[inline]
pub(crate) fn project_x_bits(ny: usize, s: u64) -> u64 {
    if ny == 0 {
        return 0;
    }
    let row = if ny >= 64 { u64::MAX } else { (1u64 << ny) - 1 };
    let mut out = 0u64;
    let mut a = 0;
    let mut rest = s;
    while rest != 0 {
        if rest & row != 0 {
            out |= 1 << a;
        }
        rest = rest.checked_shr(ny as u32).unwrap_or(0);
        a += 1;
    }
    out
}

#[inline]
pub(crate) fn project_y_bits(ny: usize, s: u64) -> u64 {
    if ny == 0 {
        return 0;
    }
    let row = if ny >= 64 { u64::MAX } else { (1u64 << ny) - 1 };
    let mut out = 0u64;
    let mut rest = s;
    while rest != 0 {
        out |= rest & row;
        rest = rest.checked_shr(ny as u32).unwrap_or(0);
    }
    out
}

/// Whether `s` equals the product of its two projections.
#[inline]
pub(crate) fn is_rectangle_bits(ny: usize, s: u64) -> bool {
    let px = project_x_bits(ny, s).count_ones();
    let py = project_y_bits(ny, s).count_ones();
    s.count_ones() == px * py
}

/// A subset `C` of a product space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Subset<'a> {
    product: &'a ProductSpace,
    members: PointSet,
}

impl<'a> Subset<'a> {
    pub fn new(product: &'a ProductSpace, members: PointSet) -> Result<Self> {
        if members.ambient_len() != product.len() {
            return Err(Error::Precondition(format!(
                "subset is over {} points, product has {}",
                members.ambient_len(),
                product.len()
            )));
        }
        Ok(Subset { product, members })
    }

    pub fn from_pairs<I>(product: &'a ProductSpace, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut members = PointSet::empty(product.len());
        for (a, b) in pairs {
            members.insert(product.index(a, b)?);
        }
        Ok(Subset { product, members })
    }

    pub fn from_bits(product: &'a ProductSpace, bits: u64) -> Self {
        Subset {
            product,
            members: PointSet::from_bits(product.len(), bits),
        }
    }

    pub fn product(&self) -> &'a ProductSpace {
        self.product
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.product
            .index(a, b)
            .map(|p| self.members.contains(p))
            .unwrap_or(false)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.members.iter().map(|p| self.product.pair(p)).collect()
    }

    pub fn is_rectangle(&self) -> bool {
        is_rectangle_bits(self.product.y.len(), self.members.bits())
    }

    /// The projections `A`, `B` of `C` and whether `C = A × B`.
    pub fn decompose(&self) -> Decomposition {
        let a = self.product.project_x(&self.members);
        let b = self.product.project_y(&self.members);
        Decomposition {
            exact: self.members.count() == a.count() * b.count(),
            a,
            b,
        }
    }

    /// Checks, at every point of the ambient product, that `C` meets the
    /// minimal open box around that point in a rectangle.
    ///
    /// Minimal boxes suffice: every open box around `(a, b)` contains the
    /// minimal one, and a rectangle intersected with an open box is again a
    /// rectangle, so some box works iff the minimal box does.
    pub fn local_product_certificate(&self) -> LocalProductCertificate {
        let ny = self.product.y.len();
        let c = self.members.bits();
        let mut witnesses = Vec::with_capacity(self.product.len());
        let mut failing = None;
        for p in 0..self.product.len() {
            let (a, b) = self.product.pair(p);
            let u = self.product.x.up_bits(a);
            let v = self.product.y.up_bits(b);
            let local = c & box_bits(ny, u, v);
            let rectangle = is_rectangle_bits(ny, local);
            if !rectangle && failing.is_none() {
                failing = Some((a, b));
            }
            witnesses.push(BoxWitness {
                point: (a, b),
                u: PointSet::from_bits(self.product.x.len(), u),
                v: PointSet::from_bits(ny, v),
                i: PointSet::from_bits(self.product.x.len(), project_x_bits(ny, local)),
                j: PointSet::from_bits(ny, project_y_bits(ny, local)),
                rectangle,
            });
        }
        LocalProductCertificate { failing, witnesses }
    }

    pub fn is_locally_product(&self) -> bool {
        first_nonlocal_point(self.product, self.members.bits()).is_none()
    }

    pub fn is_closed(&self) -> bool {
        self.product.view.is_closed(&self.members)
    }

    pub fn is_path_connected(&self) -> bool {
        self.product.view.is_path_connected(&self.members)
    }

    /// Evaluates all three hypotheses and the conclusion without enforcing
    /// the implication between them.
    pub fn evaluate(&self, options: VerdictOptions) -> TheoremVerdict {
        let (hypotheses, _) = quick_check(self.product, self.members.bits(), options);
        TheoremVerdict {
            hypotheses,
            conclusion_holds: self.is_rectangle(),
            decomposition: self.decompose(),
            certificate: self.local_product_certificate(),
        }
    }

    /// Like [`Subset::evaluate`], but fails with [`Error::TheoremViolation`]
    /// if all hypotheses hold and `C` is not a product.
    pub fn theorem_verdict(&self) -> Result<TheoremVerdict> {
        let verdict = self.evaluate(VerdictOptions::default());
        if verdict.hypotheses.all() && !verdict.conclusion_holds {
            return Err(Error::TheoremViolation(format!(
                "C = {:?} is closed, path-connected and locally a product but not a product",
                self.pairs()
            )));
        }
        Ok(verdict)
    }

    /// For a fence `path` inside `C`, whether every mixed pair
    /// `(x of path[i], y of path[j])` lies in `C`.
    pub fn mixed_pair_property(&self, path: &[(usize, usize)]) -> Result<bool> {
        let view = &self.product.view;
        let mut prev: Option<usize> = None;
        for (k, &(a, b)) in path.iter().enumerate() {
            let p = self
                .product
                .index(a, b)
                .map_err(|e| Error::InvalidFence(format!("step {k}: {e}")))?;
            if !self.members.contains(p) {
                return Err(Error::InvalidFence(format!("step {k}: ({a},{b}) is not in C")));
            }
            if let Some(q) = prev {
                if !view.comparable(q, p) {
                    let (qa, qb) = self.product.pair(q);
                    return Err(Error::InvalidFence(format!(
                        "steps {} and {k}: ({qa},{qb}) and ({a},{b}) are incomparable",
                        k - 1
                    )));
                }
            }
            prev = Some(p);
        }
        Ok(mixed_pairs_in(self.product, self.members.bits(), path))
    }
}

pub(crate) fn mixed_pairs_in(product: &ProductSpace, c: u64, path: &[(usize, usize)]) -> bool {
    let ny = product.y.len();
    path.iter()
        .all(|&(a, _)| path.iter().all(|&(_, b)| c >> (a * ny + b) & 1 == 1))
}

/// The first point (flat order) whose minimal box meets `c` in a
/// non-rectangle.
pub(crate) fn first_nonlocal_point(product: &ProductSpace, c: u64) -> Option<usize> {
    (0..product.len()).find(|&p| !is_rectangle_bits(product.y.len(), c & product.view.up_bits(p)))
}

/// Hypothesis flags and exactness for a raw subset mask.
pub(crate) fn quick_check(product: &ProductSpace, c: u64, options: VerdictOptions) -> (Hypotheses, bool) {
    let view = &product.view;
    let hypotheses = Hypotheses {
        closed: view.closure_bits(c) == c,
        path_connected: if c == 0 {
            options.empty_is_connected
        } else {
            view.fence_connected_bits(c)
        },
        locally_product: first_nonlocal_point(product, c).is_none(),
    };
    (hypotheses, is_rectangle_bits(product.y.len(), c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerdictOptions {
    /// Whether the empty subset counts as path-connected.
    pub empty_is_connected: bool,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        VerdictOptions {
            empty_is_connected: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoxWitness {
    pub point: (usize, usize),
    pub u: PointSet,
    pub v: PointSet,
    pub i: PointSet,
    pub j: PointSet,
    pub rectangle: bool,
}

/// Per-point evidence for (or against) `C` being locally a product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalProductCertificate {
    /// First point, in flat order, whose minimal box is not a witness.
    pub failing: Option<(usize, usize)>,
    pub witnesses: Vec<BoxWitness>,
}

impl LocalProductCertificate {
    pub fn is_ok(&self) -> bool {
        self.failing.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub a: PointSet,
    pub b: PointSet,
    pub exact: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub closed: bool,
    pub path_connected: bool,
    pub locally_product: bool,
}

impl Hypotheses {
    pub fn all(&self) -> bool {
        self.closed && self.path_connected && self.locally_product
    }
}

/// Which hypotheses a search or sweep requires.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisMask {
    pub closed: bool,
    pub path_connected: bool,
    pub locally_product: bool,
}

impl HypothesisMask {
    pub const FULL: HypothesisMask = HypothesisMask {
        closed: true,
        path_connected: true,
        locally_product: true,
    };

    pub fn is_full(&self) -> bool {
        *self == Self::FULL
    }

    pub fn admits(&self, h: &Hypotheses) -> bool {
        (!self.closed || h.closed)
            && (!self.path_connected || h.path_connected)
            && (!self.locally_product || h.locally_product)
    }

    /// Parses a comma-separated list drawn from `closed`, `connected`,
    /// `local` (or `all` / `none`).
    pub fn parse(text: &str) -> Result<Self> {
        let mut mask = HypothesisMask {
            closed: false,
            path_connected: false,
            locally_product: false,
        };
        for part in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match part {
                "all" => mask = Self::FULL,
                "none" => {}
                "closed" => mask.closed = true,
                "connected" | "path_connected" => mask.path_connected = true,
                "local" | "locally_product" => mask.locally_product = true,
                other => {
                    return Err(Error::Config(format!("unknown hypothesis `{other}`")));
                }
            }
        }
        Ok(mask)
    }
}

impl Default for HypothesisMask {
    fn default() -> Self {
        Self::FULL
    }
}

impl std::fmt::Display for HypothesisMask {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names: Vec<&str> = [
            (self.closed, "closed"),
            (self.path_connected, "connected"),
            (self.locally_product, "local"),
        ]
        .iter()
        .filter(|(on, _)| *on)
        .map(|&(_, name)| name)
        .collect();
        if names.is_empty() {
            write!(f, "none")
        } else {
            write!(f, "{}", names.join(","))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub hypotheses: Hypotheses,
    pub conclusion_holds: bool,
    pub decomposition: Decomposition,
    pub certificate: LocalProductCertificate,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2xs2() -> ProductSpace {
        ProductSpace::new(FiniteSpace::sierpinski(), FiniteSpace::sierpinski()).unwrap()
    }

    fn discrete2x2() -> ProductSpace {
        ProductSpace::new(FiniteSpace::discrete(2), FiniteSpace::discrete(2)).unwrap()
    }

    #[test]
    fn product_minimal_open_of_bottom_is_everything() {
        let p = s2xs2();
        assert_eq!(p.space().minimal_open(0).unwrap(), PointSet::full(4));
        assert_eq!(p.minimal_box(0, 0).unwrap(), PointSet::full(4));
        assert_eq!(p.minimal_box(1, 1).unwrap().to_vec(), vec![3]);
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let x = FiniteSpace::pseudocircle();
        let p = ProductSpace::new(x.clone(), FiniteSpace::indiscrete(1)).unwrap();
        assert_eq!(p.space(), &x);
        let d = discrete2x2();
        assert_eq!(d.space(), &FiniteSpace::discrete(4));
    }

    #[test]
    fn rectangles() {
        let p = discrete2x2();
        let full = Subset::from_pairs(&p, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(full.is_rectangle());
        let diag = Subset::from_pairs(&p, [(0, 0), (1, 1)]).unwrap();
        assert!(!diag.is_rectangle());
        assert!(Subset::from_bits(&p, 0).is_rectangle());
    }

    #[test]
    fn certificate_examples() {
        let p = s2xs2();
        let top_row = Subset::from_pairs(&p, [(0, 1), (1, 1)]).unwrap();
        assert!(top_row.local_product_certificate().is_ok());

        let l = Subset::from_pairs(&p, [(0, 1), (1, 0), (1, 1)]).unwrap();
        let cert = l.local_product_certificate();
        assert_eq!(cert.failing, Some((0, 0)));
        assert_eq!(cert.witnesses[0].u, PointSet::full(2));
        assert!(!cert.witnesses[0].rectangle);

        let d = discrete2x2();
        let diag = Subset::from_pairs(&d, [(0, 0), (1, 1)]).unwrap();
        assert!(diag.local_product_certificate().is_ok());
    }

    #[test]
    fn decompose_examples() {
        let p = s2xs2();
        let top_row = Subset::from_pairs(&p, [(0, 1), (1, 1)]).unwrap();
        let d = top_row.decompose();
        assert_eq!((d.a.to_vec(), d.b.to_vec(), d.exact), (vec![0, 1], vec![1], true));

        let diag = Subset::from_pairs(&p, [(0, 0), (1, 1)]).unwrap();
        let d = diag.decompose();
        assert_eq!(
            (d.a.to_vec(), d.b.to_vec(), d.exact),
            (vec![0, 1], vec![0, 1], false)
        );

        let d = Subset::from_bits(&p, 0).decompose();
        assert!(d.a.is_empty() && d.b.is_empty() && d.exact);
    }

    #[test]
    fn verdict_examples() {
        let p = s2xs2();
        let closure_of_top = p
            .space()
            .closure(&PointSet::singleton(4, p.index(1, 1).unwrap()).unwrap());
        let full = Subset::new(&p, closure_of_top).unwrap();
        let v = full.theorem_verdict().unwrap();
        assert!(v.hypotheses.all() && v.conclusion_holds);

        let d = discrete2x2();
        let diag = Subset::from_pairs(&d, [(0, 0), (1, 1)]).unwrap();
        let v = diag.theorem_verdict().unwrap();
        assert_eq!(
            v.hypotheses,
            Hypotheses {
                closed: true,
                path_connected: false,
                locally_product: true
            }
        );
        assert!(!v.conclusion_holds);

        let top_row = Subset::from_pairs(&p, [(0, 1), (1, 1)]).unwrap();
        let v = top_row.theorem_verdict().unwrap();
        assert_eq!(
            v.hypotheses,
            Hypotheses {
                closed: false,
                path_connected: true,
                locally_product: true
            }
        );
        assert!(v.conclusion_holds);
    }

    #[test]
    fn empty_connectivity_toggle() {
        let p = s2xs2();
        let empty = Subset::from_bits(&p, 0);
        assert!(
            empty
                .evaluate(VerdictOptions::default())
                .hypotheses
                .path_connected
        );
        let off = VerdictOptions {
            empty_is_connected: false,
        };
        assert!(!empty.evaluate(off).hypotheses.path_connected);
    }

    #[test]
    fn mixed_pairs() {
        let p = s2xs2();
        let full = Subset::new(&p, PointSet::full(4)).unwrap();
        assert!(full.mixed_pair_property(&[(1, 1)]).unwrap());
        assert!(full.mixed_pair_property(&[(0, 0), (0, 1), (1, 1)]).unwrap());
        // (0,1) ⊑ (1,1) ⊒ (1,0) is a fence; (0,0) is missing from C
        let l = Subset::from_pairs(&p, [(0, 1), (1, 0), (1, 1)]).unwrap();
        assert!(!l.mixed_pair_property(&[(0, 1), (1, 1), (1, 0)]).unwrap());
        assert!(matches!(
            l.mixed_pair_property(&[(0, 1), (1, 0)]),
            Err(Error::InvalidFence(_))
        ));
        assert!(matches!(
            l.mixed_pair_property(&[(0, 0)]),
            Err(Error::InvalidFence(_))
        ));
    }

    #[test]
    fn mask_parsing() {
        assert_eq!(HypothesisMask::parse("all").unwrap(), HypothesisMask::FULL);
        let m = HypothesisMask::parse("closed,local").unwrap();
        assert!(m.closed && !m.path_connected && m.locally_product);
        assert_eq!(m.to_string(), "closed,local");
        assert!(HypothesisMask::parse("bogus").is_err());
    }
}
