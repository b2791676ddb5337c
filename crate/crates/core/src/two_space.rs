//! Finite models of 2-spaces: spaces covered by charts onto products whose
//! transition maps split coordinatewise.
//!
//! All checks use the minimal open box around the chart image of a point.
//! Any witness box `M × N` contains the minimal one, landing inside the
//! target domain is inherited by sub-boxes, and a split map stays split when
//! restricted, so the minimal box is a witness iff some open box is.
//!
//! Two maps `h0, h1` between 2-spaces are 2-homotopic when a continuous
//! `H: [0,1] × W1 → W2` joins them through 2-maps; that notion quantifies
//! over continuum families and has no finite check here.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::product::{ProductSpace, Subset};
use crate::space::{FiniteSpace, PointSet};

/// Why a chart is not a homeomorphism from an open set onto `U × V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartDefect {
    NotOpen,
    NotBijective,
    NotContinuous,
    InverseNotContinuous,
}

impl std::fmt::Display for ChartDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ChartDefect::NotOpen => "not-open",
            ChartDefect::NotBijective => "not-bijective",
            ChartDefect::NotContinuous => "not-continuous",
            ChartDefect::InverseNotContinuous => "inverse-not-continuous",
        })
    }
}

/// A chart `φ: W_φ → U_φ × V_φ`. Pairs `(u, v)` are indexed `u * |V| + v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    pub domain: PointSet,
    pub u_space: FiniteSpace,
    pub v_space: FiniteSpace,
    /// Indexed by base point; `None` outside the domain.
    pub forward: Vec<Option<(usize, usize)>>,
    /// Indexed by pair index.
    pub inverse: Vec<Option<usize>>,
}

impl Chart {
    /// Builds a chart from its forward map; the inverse is tabulated from it.
    /// A non-injective map yields a chart that fails [`Chart::check`].
    pub fn new<I>(base_len: usize, u_space: FiniteSpace, v_space: FiniteSpace, map: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, (usize, usize))>,
    {
        let nv = v_space.len();
        let mut domain = PointSet::empty(base_len);
        let mut forward = vec![None; base_len];
        let mut inverse = vec![None; u_space.len() * nv];
        for (w, (u, v)) in map {
            if w >= base_len {
                return Err(Error::PointOutOfRange {
                    index: w,
                    len: base_len,
                });
            }
            if u >= u_space.len() || v >= nv {
                return Err(Error::Precondition(format!(
                    "chart image ({u},{v}) of {w} lies outside {}x{}",
                    u_space.len(),
                    nv
                )));
            }
            if forward[w].is_some() {
                return Err(Error::Precondition(format!("chart maps point {w} twice")));
            }
            domain.insert(w);
            forward[w] = Some((u, v));
            inverse[u * nv + v].get_or_insert(w);
        }
        Ok(Chart {
            domain,
            u_space,
            v_space,
            forward,
            inverse,
        })
    }

    /// The identity chart of the product `U × V` onto itself.
    pub fn identity(u_space: FiniteSpace, v_space: FiniteSpace) -> Self {
        let nv = v_space.len();
        let n = u_space.len() * nv;
        Chart::new(n, u_space, v_space, (0..n).map(|w| (w, (w / nv, w % nv))))
            .expect("identity chart is well formed")
    }

    pub fn pair_index(&self, u: usize, v: usize) -> usize {
        u * self.v_space.len() + v
    }

    pub fn apply(&self, w: usize) -> Option<(usize, usize)> {
        self.forward.get(w).copied().flatten()
    }

    pub fn invert(&self, u: usize, v: usize) -> Option<usize> {
        self.inverse.get(self.pair_index(u, v)).copied().flatten()
    }

    /// Checks that the chart is a homeomorphism from an open subset of
    /// `base` onto `U × V`.
    pub fn check(&self, base: &FiniteSpace) -> std::result::Result<(), ChartDefect> {
        let nu = self.u_space.len();
        let nv = self.v_space.len();
        if self.domain.ambient_len() != base.len()
            || self.forward.len() != base.len()
            || self.inverse.len() != nu * nv
        {
            return Err(ChartDefect::NotBijective);
        }
        if !base.is_open(&self.domain) {
            return Err(ChartDefect::NotOpen);
        }
        for w in base.points() {
            match (self.domain.contains(w), self.forward[w]) {
                (true, Some((u, v))) => {
                    if u >= nu || v >= nv || self.inverse[u * nv + v] != Some(w) {
                        return Err(ChartDefect::NotBijective);
                    }
                }
                (false, None) => {}
                _ => return Err(ChartDefect::NotBijective),
            }
        }
        for s in 0..nu * nv {
            match self.inverse[s] {
                Some(w) if w < base.len() && self.forward[w] == Some((s / nv, s % nv)) => {}
                _ => return Err(ChartDefect::NotBijective),
            }
        }
        let members = self.domain.to_vec();
        for &p in &members {
            for &q in &members {
                if base.leq(p, q) {
                    let (up, vp) = self.forward[p].unwrap();
                    let (uq, vq) = self.forward[q].unwrap();
                    if !(self.u_space.leq(up, uq) && self.v_space.leq(vp, vq)) {
                        return Err(ChartDefect::NotContinuous);
                    }
                }
            }
        }
        for s in 0..nu * nv {
            for t in 0..nu * nv {
                let below = self.u_space.leq(s / nv, t / nv) && self.v_space.leq(s % nv, t % nv);
                if below && !base.leq(self.inverse[s].unwrap(), self.inverse[t].unwrap()) {
                    return Err(ChartDefect::InverseNotContinuous);
                }
            }
        }
        Ok(())
    }
}

/// How a map expressed in charts fails to split on the minimal box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SplitDefect {
    /// The preimage of the box is not inside the target chart's domain.
    LeavesTarget { u: usize, v: usize },
    /// The U-output at `u` changes with the V-coordinate.
    UDependsOnV { u: usize, v1: usize, v2: usize },
    /// The V-output at `v` changes with the U-coordinate.
    VDependsOnU { v: usize, u1: usize, u2: usize },
    /// Strict mode: the U-component map is not continuous on the box.
    UComponentNotContinuous,
    /// Strict mode: the V-component map is not continuous on the box.
    VComponentNotContinuous,
}

/// Evaluates `tau` on the minimal box around `(u0, v0)` in `source` chart
/// coordinates and checks it splits as `(f(u), g(v))`.
fn split_on_minimal_box<F>(
    source: &Chart,
    target: &Chart,
    (u0, v0): (usize, usize),
    strict: bool,
    tau: F,
) -> Option<SplitDefect>
where
    F: Fn(usize, usize) -> Option<(usize, usize)>,
{
    let m = source
        .u_space
        .minimal_open(u0)
        .expect("chart image in range")
        .to_vec();
    let n = source
        .v_space
        .minimal_open(v0)
        .expect("chart image in range")
        .to_vec();
    let mut table = vec![(0, 0); m.len() * n.len()];
    for (i, &u) in m.iter().enumerate() {
        for (j, &v) in n.iter().enumerate() {
            match tau(u, v) {
                Some(out) => table[i * n.len() + j] = out,
                None => return Some(SplitDefect::LeavesTarget { u, v }),
            }
        }
    }
    for (i, &u) in m.iter().enumerate() {
        for j in 1..n.len() {
            if table[i * n.len() + j].0 != table[i * n.len()].0 {
                return Some(SplitDefect::UDependsOnV {
                    u,
                    v1: n[0],
                    v2: n[j],
                });
            }
        }
    }
    for (j, &v) in n.iter().enumerate() {
        for i in 1..m.len() {
            if table[i * n.len() + j].1 != table[j].1 {
                return Some(SplitDefect::VDependsOnU {
                    v,
                    u1: m[0],
                    u2: m[i],
                });
            }
        }
    }
    if strict {
        let f = |i: usize| table[i * n.len()].0;
        let g = |j: usize| table[j].1;
        for (i, &a) in m.iter().enumerate() {
            for (k, &b) in m.iter().enumerate() {
                if source.u_space.leq(a, b) && !target.u_space.leq(f(i), f(k)) {
                    return Some(SplitDefect::UComponentNotContinuous);
                }
            }
        }
        for (j, &a) in n.iter().enumerate() {
            for (k, &b) in n.iter().enumerate() {
                if source.v_space.leq(a, b) && !target.v_space.leq(g(j), g(k)) {
                    return Some(SplitDefect::VComponentNotContinuous);
                }
            }
        }
    }
    None
}

/// First reason a model fails to be a 2-space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ModelFailure {
    Chart {
        chart: usize,
        defect: ChartDefect,
    },
    Coverage {
        point: usize,
    },
    Compatibility {
        first: usize,
        second: usize,
        point: usize,
        defect: SplitDefect,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub valid: bool,
    pub failure: Option<ModelFailure>,
}

impl Validation {
    fn from_failure(failure: Option<ModelFailure>) -> Self {
        Validation {
            valid: failure.is_none(),
            failure,
        }
    }
}

/// A finite space with an atlas of product charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoSpace {
    pub base: FiniteSpace,
    pub charts: Vec<Chart>,
}

impl TwoSpace {
    pub fn new(base: FiniteSpace, charts: Vec<Chart>) -> Self {
        TwoSpace { base, charts }
    }

    /// `U × V` with its identity chart as the whole atlas.
    pub fn single_chart(u_space: FiniteSpace, v_space: FiniteSpace) -> Result<Self> {
        let base = ProductSpace::new(u_space.clone(), v_space.clone())?
            .space()
            .clone();
        Ok(TwoSpace {
            base,
            charts: vec![Chart::identity(u_space, v_space)],
        })
    }

    /// The 2-space carried by a locally-product subset `C ⊆ X × Y`: the base
    /// is `C` as a subspace, and each point `(a, b)` of `C` contributes the
    /// chart `C ∩ (U_a × V_b) → I × J` given by the coordinates.
    pub fn from_locally_product_subset(c: &Subset<'_>) -> Result<Self> {
        let certificate = c.local_product_certificate();
        if let Some((a, b)) = certificate.failing {
            return Err(Error::Precondition(format!(
                "subset is not locally a product at ({a},{b})"
            )));
        }
        let product = c.product();
        let (base, members) = product.space().subspace(c.members());
        let mut charts = Vec::with_capacity(members.len());
        for &p in &members {
            let (a, b) = product.pair(p);
            let witness = &certificate.witnesses[p];
            let (u_space, i_points) = product.x().subspace(&witness.i);
            let (v_space, j_points) = product.y().subspace(&witness.j);
            let local = product.minimal_box(a, b)?;
            let map = members
                .iter()
                .enumerate()
                .filter(|(_, &q)| local.contains(q))
                .map(|(k, &q)| {
                    let (x, y) = product.pair(q);
                    let u = i_points.binary_search(&x).expect("x in I");
                    let v = j_points.binary_search(&y).expect("y in J");
                    (k, (u, v))
                });
            charts.push(Chart::new(base.len(), u_space, v_space, map)?);
        }
        Ok(TwoSpace { base, charts })
    }

    fn chart(&self, index: usize) -> Result<&Chart> {
        self.charts.get(index).ok_or_else(|| {
            Error::Precondition(format!(
                "chart index {index} out of range ({} charts)",
                self.charts.len()
            ))
        })
    }

    /// Whether the transition from chart `i` to chart `j` splits near `c`.
    pub fn check_compatibility(&self, i: usize, j: usize, c: usize) -> Result<bool> {
        Ok(self.compatibility_defect(i, j, c, false)?.is_none())
    }

    /// The reason the transition from chart `i` to chart `j` fails to split
    /// near `c`, if any. `strict` also demands continuous components.
    pub fn compatibility_defect(
        &self,
        i: usize,
        j: usize,
        c: usize,
        strict: bool,
    ) -> Result<Option<SplitDefect>> {
        let first = self.chart(i)?;
        let second = self.chart(j)?;
        if !(first.domain.contains(c) && second.domain.contains(c)) {
            return Err(Error::Precondition(format!(
                "point {c} is not in the overlap of charts {i} and {j}"
            )));
        }
        let start = first.apply(c).expect("domain point has an image");
        Ok(split_on_minimal_box(first, second, start, strict, |u, v| {
            first.invert(u, v).and_then(|w| second.apply(w))
        }))
    }

    pub fn validate(&self) -> Validation {
        Validation::from_failure(self.first_failure(false))
    }

    /// Validation that also requires the split components to be continuous.
    pub fn validate_strict(&self) -> Validation {
        Validation::from_failure(self.first_failure(true))
    }

    fn first_failure(&self, strict: bool) -> Option<ModelFailure> {
        for (index, chart) in self.charts.iter().enumerate() {
            if let Err(defect) = chart.check(&self.base) {
                return Some(ModelFailure::Chart { chart: index, defect });
            }
        }
        let covered = self
            .charts
            .iter()
            .fold(PointSet::empty(self.base.len()), |acc, ch| acc.union(&ch.domain));
        if let Some(point) = covered.complement().iter().next() {
            return Some(ModelFailure::Coverage { point });
        }
        for i in 0..self.charts.len() {
            for j in 0..self.charts.len() {
                let overlap = self.charts[i].domain.intersection(&self.charts[j].domain);
                for c in overlap.iter() {
                    let defect = self
                        .compatibility_defect(i, j, c, strict)
                        .expect("overlap point satisfies the precondition");
                    if let Some(defect) = defect {
                        return Some(ModelFailure::Compatibility {
                            first: i,
                            second: j,
                            point: c,
                            defect,
                        });
                    }
                }
            }
        }
        None
    }

    /// The 2-product: base `W1 × W2`, one chart per pair of charts,
    /// `(w1, w2) ↦ ((u1, u2), (v1, v2))`.
    pub fn two_product(&self, other: &TwoSpace) -> Result<TwoSpace> {
        for (name, model) in [("first", self), ("second", other)] {
            if let Some(failure) = model.validate().failure {
                return Err(Error::InvalidModel(format!("{name} factor: {failure:?}")));
            }
        }
        let base_product = ProductSpace::new(self.base.clone(), other.base.clone())?;
        let n2 = other.base.len();
        let mut charts = Vec::with_capacity(self.charts.len() * other.charts.len());
        for c1 in &self.charts {
            for c2 in &other.charts {
                let u = ProductSpace::new(c1.u_space.clone(), c2.u_space.clone())?;
                let v = ProductSpace::new(c1.v_space.clone(), c2.v_space.clone())?;
                let (nu2, nv2) = (c2.u_space.len(), c2.v_space.len());
                let map = c1.domain.iter().flat_map(|w1| {
                    c2.domain.iter().map(move |w2| {
                        let (u1, v1) = c1.apply(w1).unwrap();
                        let (u2, v2) = c2.apply(w2).unwrap();
                        (w1 * n2 + w2, (u1 * nu2 + u2, v1 * nv2 + v2))
                    })
                });
                charts.push(Chart::new(
                    base_product.len(),
                    u.space().clone(),
                    v.space().clone(),
                    map,
                )?);
            }
        }
        Ok(TwoSpace {
            base: base_product.space().clone(),
            charts,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoMapFailure {
    pub point: usize,
    pub source_chart: usize,
    pub target_chart: usize,
    pub defect: SplitDefect,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwoMapReport {
    pub is_two_map: bool,
    pub continuous: bool,
    pub failure: Option<TwoMapFailure>,
}

/// A point map between the bases of two 2-spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoMap<'a> {
    pub source: &'a TwoSpace,
    pub target: &'a TwoSpace,
    pub map: Vec<usize>,
}

impl<'a> TwoMap<'a> {
    pub fn new(source: &'a TwoSpace, target: &'a TwoSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.base.len() {
            return Err(Error::Precondition(format!(
                "map has {} entries, source base has {} points",
                map.len(),
                source.base.len()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&w| w >= target.base.len()) {
            return Err(Error::PointOutOfRange {
                index: bad,
                len: target.base.len(),
            });
        }
        Ok(TwoMap { source, target, map })
    }

    pub fn identity(space: &'a TwoSpace) -> Self {
        TwoMap {
            source: space,
            target: space,
            map: space.base.points().collect(),
        }
    }

    /// `then ∘ self`.
    pub fn then<'b>(&self, then: &TwoMap<'b>) -> Result<TwoMap<'a>>
    where
        'b: 'a,
    {
        if self.target != then.source {
            return Err(Error::Precondition("maps are not composable".into()));
        }
        Ok(TwoMap {
            source: self.source,
            target: then.target,
            map: self.map.iter().map(|&w| then.map[w]).collect(),
        })
    }

    pub fn check(&self) -> TwoMapReport {
        self.check_with(false)
    }

    /// Checks continuity and, for every point `c` and charts `φ1 ∋ c`,
    /// `φ2 ∋ h(c)`, that `φ2 ∘ h ∘ φ1⁻¹` splits on the minimal box around
    /// `φ1(c)`. Reports the first failing `(c, φ1, φ2)`.
    pub fn check_with(&self, strict: bool) -> TwoMapReport {
        let continuous = crate::space::is_continuous(&self.source.base, &self.target.base, &self.map)
            .expect("map validated on construction");
        if !continuous {
            return TwoMapReport {
                is_two_map: false,
                continuous,
                failure: None,
            };
        }
        for c in self.source.base.points() {
            for (i, first) in self.source.charts.iter().enumerate() {
                let Some(start) = first.apply(c) else { continue };
                for (j, second) in self.target.charts.iter().enumerate() {
                    if !second.domain.contains(self.map[c]) {
                        continue;
                    }
                    let defect = split_on_minimal_box(first, second, start, strict, |u, v| {
                        first.invert(u, v).and_then(|w| second.apply(self.map[w]))
                    });
                    if let Some(defect) = defect {
                        return TwoMapReport {
                            is_two_map: false,
                            continuous,
                            failure: Some(TwoMapFailure {
                                point: c,
                                source_chart: i,
                                target_chart: j,
                                defect,
                            }),
                        };
                    }
                }
            }
        }
        TwoMapReport {
            is_two_map: true,
            continuous,
            failure: None,
        }
    }
}
