//! Exhaustive sweeps over all small finite topologies.
//!
//! Work is cut into blocks of `(X index, Y index, range of C masks)`. Blocks
//! are evaluated on a rayon pool and merged back in block order, so a
//! report never depends on the worker count.

use std::fmt;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::product::{mixed_pairs_in, quick_check, Hypotheses, HypothesisMask, ProductSpace, VerdictOptions};
use crate::space::FiniteSpace;

/// Largest point count accepted by [`enumerate_preorders`] and sweeps.
pub const MAX_SWEEP_POINTS: usize = 4;

/// Subsets per block; a block never straddles two `(X, Y)` pairs.
const BLOCK_SUBSETS: u64 = 1 << 9;

/// All labeled preorders (= topologies) on `n` points, ordered by the
/// bitmask of their non-reflexive pairs.
pub fn enumerate_preorders(n: usize) -> Result<Vec<FiniteSpace>> {
    if !(1..=MAX_SWEEP_POINTS).contains(&n) {
        return Err(Error::Config(format!(
            "enumeration needs 1 <= n <= {MAX_SWEEP_POINTS}, got {n}"
        )));
    }
    let off_diagonal: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << off_diagonal.len() {
        let mut up: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for (k, &(i, j)) in off_diagonal.iter().enumerate() {
            if mask >> k & 1 == 1 {
                up[i] |= 1 << j;
            }
        }
        let transitive = (0..n).all(|x| {
            (0..n)
                .filter(|&y| up[x] >> y & 1 == 1)
                .all(|y| up[y] & !up[x] == 0)
        });
        if transitive {
            out.push(FiniteSpace::from_up_sets(up));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepMode {
    /// Every admitted subset must be a product; failures are violations.
    Verify,
    /// Admitted subsets that are not products are collected as counterexamples.
    Search,
}

impl fmt::Display for SweepMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepMode::Verify => "verify",
            SweepMode::Search => "search",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepConfig {
    pub nx: usize,
    pub ny: usize,
    /// Hypotheses a subset must satisfy to be examined further.
    pub mask: HypothesisMask,
    pub mode: SweepMode,
    pub workers: usize,
    /// Required exactly when `nx` or `ny` is 4; selects random sampling.
    pub seed: Option<u64>,
    /// Number of `(X, Y, C)` draws in sampling mode.
    pub samples: u64,
    /// How many violations or counterexamples to keep in the report.
    pub max_findings: usize,
    /// Longest fence (in points) enumerated by [`fence_sweep`].
    pub fence_cap: usize,
    pub empty_is_connected: bool,
}

impl SweepConfig {
    pub fn new(nx: usize, ny: usize) -> Self {
        SweepConfig {
            nx,
            ny,
            mask: HypothesisMask::FULL,
            mode: SweepMode::Verify,
            workers: 1,
            seed: None,
            samples: 100_000,
            max_findings: 10,
            fence_cap: 4,
            empty_is_connected: true,
        }
    }

    pub fn mask(mut self, mask: HypothesisMask) -> Self {
        self.mask = mask;
        self
    }

    pub fn mode(mut self, mode: SweepMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn sampling(&self) -> bool {
        self.nx == MAX_SWEEP_POINTS || self.ny == MAX_SWEEP_POINTS
    }

    pub fn validate(&self) -> Result<()> {
        for (name, n) in [("nx", self.nx), ("ny", self.ny)] {
            if !(1..=MAX_SWEEP_POINTS).contains(&n) {
                return Err(Error::Config(format!(
                    "{name} must be between 1 and {MAX_SWEEP_POINTS}, got {n}"
                )));
            }
        }
        match (self.sampling(), self.seed) {
            (true, None) => {
                return Err(Error::Config(
                    "sweeps with 4-point factors are sampled and need a seed".into(),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::Config(
                    "a seed is only accepted when sampling 4-point factors".into(),
                ))
            }
            _ => {}
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        if self.fence_cap == 0 {
            return Err(Error::Config("fence cap must be at least 1".into()));
        }
        if self.sampling() && self.samples == 0 {
            return Err(Error::Config("sample count must be at least 1".into()));
        }
        Ok(())
    }

    fn options(&self) -> VerdictOptions {
        VerdictOptions {
            empty_is_connected: self.empty_is_connected,
        }
    }
}

/// A space as it appears in reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceDesc {
    pub points: usize,
    pub rel: Vec<(usize, usize)>,
}

impl From<&FiniteSpace> for SpaceDesc {
    fn from(space: &FiniteSpace) -> Self {
        SpaceDesc {
            points: space.len(),
            rel: space.relation_pairs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub x_index: usize,
    pub y_index: usize,
    pub x: SpaceDesc,
    pub y: SpaceDesc,
    pub c: Vec<(usize, usize)>,
    pub hypotheses: Hypotheses,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fence: Option<Vec<(usize, usize)>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sampling {
    pub seed: u64,
    pub samples: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub kind: &'static str,
    pub mode: SweepMode,
    pub nx: usize,
    pub ny: usize,
    pub mask: String,
    pub empty_is_connected: bool,
    pub exhaustive: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampling: Option<Sampling>,
    pub spaces_x: usize,
    pub spaces_y: usize,
    pub space_pairs: u64,
    pub subsets_examined: u64,
    pub hypothesis_satisfying: u64,
    pub conclusion_holding: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fence_cap: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fences_examined: Option<u64>,
    pub violation_count: u64,
    pub violations: Vec<Finding>,
    pub counterexample_count: u64,
    pub counterexamples: Vec<Finding>,
    pub status: String,
    /// Wall-clock time; kept out of serialized output so reports stay
    /// byte-identical between runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn is_success(&self) -> bool {
        self.violation_count == 0
    }

    /// Turns a report with violations into [`Error::TheoremViolation`]
    /// carrying the first offending `(X, Y, C)`.
    pub fn into_result(self) -> Result<SweepReport> {
        match self.violations.first() {
            Some(first) => Err(Error::TheoremViolation(
                serde_json::to_string(first).expect("finding serializes"),
            )),
            None => Ok(self),
        }
    }
}

/// A contiguous range of subset masks for one `(X, Y)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Block {
    pub x_index: usize,
    pub y_index: usize,
    pub start: u64,
    pub end: u64,
}

/// The exhaustive work partition for `nx × ny` sweeps.
pub fn partition_blocks(spaces_x: usize, spaces_y: usize, nx: usize, ny: usize) -> Vec<Block> {
    let total = 1u64 << (nx * ny);
    let step = BLOCK_SUBSETS.min(total);
    let mut blocks = Vec::new();
    for x_index in 0..spaces_x {
        for y_index in 0..spaces_y {
            let mut start = 0;
            while start < total {
                let end = (start + step).min(total);
                blocks.push(Block {
                    x_index,
                    y_index,
                    start,
                    end,
                });
                start = end;
            }
        }
    }
    blocks
}

#[derive(Default)]
struct Tally {
    examined: u64,
    satisfying: u64,
    holding: u64,
    fences: u64,
    violation_count: u64,
    violations: Vec<Finding>,
    counterexample_count: u64,
    counterexamples: Vec<Finding>,
}

impl Tally {
    fn absorb(&mut self, other: Tally, keep: usize) {
        self.examined += other.examined;
        self.satisfying += other.satisfying;
        self.holding += other.holding;
        self.fences += other.fences;
        self.violation_count += other.violation_count;
        self.counterexample_count += other.counterexample_count;
        for f in other.violations {
            if self.violations.len() < keep {
                self.violations.push(f);
            }
        }
        for f in other.counterexamples {
            if self.counterexamples.len() < keep {
                self.counterexamples.push(f);
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Theorem,
    Fences,
}

struct Tables {
    xs: Vec<FiniteSpace>,
    ys: Vec<FiniteSpace>,
    products: Vec<ProductSpace>,
}

impl Tables {
    fn build(cfg: &SweepConfig) -> Result<Self> {
        let xs = enumerate_preorders(cfg.nx)?;
        let ys = enumerate_preorders(cfg.ny)?;
        let mut products = Vec::with_capacity(xs.len() * ys.len());
        for x in &xs {
            for y in &ys {
                products.push(ProductSpace::new(x.clone(), y.clone())?);
            }
        }
        Ok(Tables { xs, ys, products })
    }

    fn product(&self, ix: usize, iy: usize) -> &ProductSpace {
        &self.products[ix * self.ys.len() + iy]
    }

    fn finding(&self, ix: usize, iy: usize, c: u64, hypotheses: Hypotheses) -> Finding {
        let product = self.product(ix, iy);
        let ny = self.ys[iy].len();
        let pairs = (0..product.len())
            .filter(|&p| c >> p & 1 == 1)
            .map(|p| (p / ny, p % ny))
            .collect();
        Finding {
            x_index: ix,
            y_index: iy,
            x: SpaceDesc::from(&self.xs[ix]),
            y: SpaceDesc::from(&self.ys[iy]),
            c: pairs,
            hypotheses,
            fence: None,
        }
    }
}

/// Checks the local-to-global product property over every `(X, Y, C)`
/// (or a seeded sample when a factor has four points).
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    sweep(cfg, Kind::Theorem)
}

/// For every admitted `C`, enumerates the fences in `C` of up to
/// `fence_cap` points and checks that all mixed coordinate pairs lie in `C`.
pub fn fence_sweep(cfg: &SweepConfig) -> Result<SweepReport> {
    if cfg.nx > 3 || cfg.ny > 3 {
        return Err(Error::Config(
            "fence sweeps support factors of at most 3 points".into(),
        ));
    }
    sweep(cfg, Kind::Fences)
}

fn sweep(cfg: &SweepConfig, kind: Kind) -> Result<SweepReport> {
    cfg.validate()?;
    let started = Instant::now();
    let tables = Tables::build(cfg)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;

    let jobs: Vec<Job> = match cfg.seed {
        Some(seed) => sample_jobs(&tables, cfg, seed),
        None => partition_blocks(tables.xs.len(), tables.ys.len(), cfg.nx, cfg.ny)
            .into_iter()
            .map(Job::Block)
            .collect(),
    };

    let tallies: Vec<Tally> = pool.install(|| {
        jobs.par_iter()
            .map(|job| run_job(&tables, cfg, kind, job))
            .collect()
    });
    let mut total = Tally::default();
    for t in tallies {
        total.absorb(t, cfg.max_findings);
    }

    let exhaustive = cfg.seed.is_none();
    let status = match (kind, cfg.mode) {
        (Kind::Fences, _) | (Kind::Theorem, SweepMode::Verify) => {
            if total.violation_count == 0 {
                "ok, no violations".to_string()
            } else {
                format!("{} violations", total.violation_count)
            }
        }
        (Kind::Theorem, SweepMode::Search) => match (total.counterexample_count, exhaustive) {
            (0, true) => "exhausted, none found at this scale".to_string(),
            (0, false) => "sampled, none found (non-exhaustive)".to_string(),
            (n, _) => format!("{n} counterexamples found"),
        },
    };

    Ok(SweepReport {
        kind: match kind {
            Kind::Theorem => "theorem",
            Kind::Fences => "fences",
        },
        mode: if kind == Kind::Fences {
            SweepMode::Verify
        } else {
            cfg.mode
        },
        nx: cfg.nx,
        ny: cfg.ny,
        mask: cfg.mask.to_string(),
        empty_is_connected: cfg.empty_is_connected,
        exhaustive,
        sampling: cfg.seed.map(|seed| Sampling {
            seed,
            samples: cfg.samples,
        }),
        spaces_x: tables.xs.len(),
        spaces_y: tables.ys.len(),
        space_pairs: tables.products.len() as u64,
        subsets_examined: total.examined,
        hypothesis_satisfying: total.satisfying,
        conclusion_holding: total.holding,
        fence_cap: (kind == Kind::Fences).then_some(cfg.fence_cap),
        fences_examined: (kind == Kind::Fences).then_some(total.fences),
        violation_count: total.violation_count,
        violations: total.violations,
        counterexample_count: total.counterexample_count,
        counterexamples: total.counterexamples,
        status,
        elapsed: started.elapsed(),
    })
}

enum Job {
    Block(Block),
    Samples(Vec<(usize, usize, u64)>),
}

fn sample_jobs(tables: &Tables, cfg: &SweepConfig, seed: u64) -> Vec<Job> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total = 1u64 << (cfg.nx * cfg.ny);
    let draws: Vec<(usize, usize, u64)> = (0..cfg.samples)
        .map(|_| {
            (
                rng.gen_range(0..tables.xs.len()),
                rng.gen_range(0..tables.ys.len()),
                rng.gen_range(0..total),
            )
        })
        .collect();
    draws
        .chunks(BLOCK_SUBSETS as usize)
        .map(|chunk| Job::Samples(chunk.to_vec()))
        .collect()
}

fn run_job(tables: &Tables, cfg: &SweepConfig, kind: Kind, job: &Job) -> Tally {
    let mut tally = Tally::default();
    match job {
        Job::Block(b) => {
            for c in b.start..b.end {
                examine(tables, cfg, kind, b.x_index, b.y_index, c, &mut tally);
            }
        }
        Job::Samples(draws) => {
            for &(ix, iy, c) in draws {
                examine(tables, cfg, kind, ix, iy, c, &mut tally);
            }
        }
    }
    tally
}

fn examine(tables: &Tables, cfg: &SweepConfig, kind: Kind, ix: usize, iy: usize, c: u64, tally: &mut Tally) {
    let product = tables.product(ix, iy);
    tally.examined += 1;
    let (hypotheses, exact) = quick_check(product, c, cfg.options());
    if !cfg.mask.admits(&hypotheses) {
        return;
    }
    tally.satisfying += 1;
    if exact {
        tally.holding += 1;
    }
    match kind {
        Kind::Theorem => {
            if exact {
                return;
            }
            match cfg.mode {
                SweepMode::Verify => {
                    tally.violation_count += 1;
                    if tally.violations.len() < cfg.max_findings {
                        tally.violations.push(tables.finding(ix, iy, c, hypotheses));
                    }
                }
                SweepMode::Search => {
                    tally.counterexample_count += 1;
                    if tally.counterexamples.len() < cfg.max_findings {
                        tally.counterexamples.push(tables.finding(ix, iy, c, hypotheses));
                    }
                }
            }
        }
        Kind::Fences => {
            let mut fence = Vec::with_capacity(cfg.fence_cap);
            let mut members = c;
            while members != 0 {
                let p = members.trailing_zeros() as usize;
                members &= members - 1;
                fence.push(p);
                walk_fences(tables, cfg, ix, iy, c, hypotheses, &mut fence, tally);
                fence.pop();
            }
        }
    }
}

/// Depth-first enumeration of fences extending `fence` inside `c`;
/// consecutive points are distinct and comparable.
#[allow(clippy::too_many_arguments)]
fn walk_fences(
    tables: &Tables,
    cfg: &SweepConfig,
    ix: usize,
    iy: usize,
    c: u64,
    hypotheses: Hypotheses,
    fence: &mut Vec<usize>,
    tally: &mut Tally,
) {
    let product = tables.product(ix, iy);
    let ny = tables.ys[iy].len();
    tally.fences += 1;
    let path: Vec<(usize, usize)> = fence.iter().map(|&p| (p / ny, p % ny)).collect();
    if !mixed_pairs_in(product, c, &path) {
        tally.violation_count += 1;
        if tally.violations.len() < cfg.max_findings {
            let mut finding = tables.finding(ix, iy, c, hypotheses);
            finding.fence = Some(path);
            tally.violations.push(finding);
        }
    }
    if fence.len() == cfg.fence_cap {
        return;
    }
    let last = *fence.last().expect("fence is nonempty");
    let view = product.space();
    let mut next = (view.up_bits(last) | view.down_bits(last)) & c & !(1u64 << last);
    while next != 0 {
        let p = next.trailing_zeros() as usize;
        next &= next - 1;
        fence.push(p);
        walk_fences(tables, cfg, ix, iy, c, hypotheses, fence, tally);
        fence.pop();
    }
}
