//! Command-line front end. The `locprod` binary only forwards to [`run`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::format::{self, NamedSpace};
use crate::harness::{self, SweepConfig, SweepMode, SweepReport};
use crate::product::{HypothesisMask, ProductSpace, Subset, VerdictOptions};
use crate::two_space::TwoMap;

/// Version of the structured (JSON) output document.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDING: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Structured,
}

#[derive(Debug, Parser)]
#[command(
    name = "locprod",
    version,
    about = "Finite topology and locally direct product checks"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: OutputFormat,
    /// Write the report here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,
    /// Reject input relations that are not already transitively closed.
    #[arg(long, global = true)]
    pub strict_relations: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every topology on a small number of points.
    Enumerate {
        #[arg(long)]
        points: usize,
    },
    /// Evaluate the hypotheses and conclusion for one subset file.
    Analyze {
        file: PathBuf,
        /// Treat the empty subset as not path-connected.
        #[arg(long)]
        empty_disconnected: bool,
    },
    /// Check that every admitted subset is a product.
    Verify(SweepArgs),
    /// Collect admitted subsets that are not products.
    Search(SweepArgs),
    /// Check the mixed-pair property along every short fence.
    Fences(SweepArgs),
    /// Validate a 2-space model file.
    #[command(name = "check-2space")]
    CheckTwoSpace {
        file: PathBuf,
        /// Also require the split component maps to be continuous.
        #[arg(long)]
        strict: bool,
    },
    /// Check whether a map between two models is a 2-map.
    #[command(name = "check-2map")]
    CheckTwoMap {
        file: PathBuf,
        #[arg(long)]
        strict: bool,
    },
    /// Build the 2-product of two model files.
    #[command(name = "2product")]
    TwoProduct {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, default_value = "product")]
        name: String,
    },
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Points in the first factor (1 to 4).
    #[arg(long)]
    pub nx: usize,
    /// Points in the second factor (1 to 4).
    #[arg(long)]
    pub ny: usize,
    /// Hypotheses to require: comma list of closed, connected, local (or all, none).
    #[arg(long, default_value = "all")]
    pub require: String,
    /// Worker threads.
    #[arg(long, env = "LOCPROD_WORKERS", default_value_t = 1)]
    pub workers: usize,
    /// Seed for sampling sweeps with a 4-point factor.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Random triples drawn when sampling.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Findings kept in the report.
    #[arg(long, default_value_t = 10)]
    pub max_findings: usize,
    /// Longest fence checked by `fences`.
    #[arg(long, default_value_t = 4)]
    pub fence_cap: usize,
    /// Treat the empty subset as not path-connected.
    #[arg(long)]
    pub empty_disconnected: bool,
}

impl SweepArgs {
    fn config(&self, mode: SweepMode) -> Result<SweepConfig> {
        Ok(SweepConfig {
            nx: self.nx,
            ny: self.ny,
            mask: HypothesisMask::parse(&self.require)?,
            mode,
            workers: self.workers,
            seed: self.seed,
            samples: self.samples,
            max_findings: self.max_findings,
            fence_cap: self.fence_cap,
            empty_is_connected: !self.empty_disconnected,
        })
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: rendered,
                }
            } else {
                Outcome {
                    code,
                    stdout: rendered,
                    stderr: String::new(),
                }
            };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let mut outcome = Outcome {
                code: report.code,
                stdout: String::new(),
                stderr: report.notes,
            };
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, &report.body) {
                        outcome.code = EXIT_USAGE;
                        outcome.stderr = format!("error: cannot write {}: {e}\n", path.display());
                    }
                }
                None => outcome.stdout = report.body,
            }
            outcome
        }
        Err(e) => Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// A rendered report plus its exit status.
pub struct Report {
    pub code: i32,
    pub body: String,
    /// Non-deterministic extras (timings) destined for stderr.
    pub notes: String,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

fn document(command: &str, result: impl Serialize) -> String {
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "locprod",
        "command": command,
        "result": result,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("report serializes");
    out.push('\n');
    out
}

pub fn execute(cli: &Cli) -> Result<Report> {
    let structured = cli.format == OutputFormat::Structured;
    match &cli.command {
        Command::Enumerate { points } => {
            let spaces = harness::enumerate_preorders(*points)?;
            let body = if structured {
                let descs: Vec<harness::SpaceDesc> = spaces.iter().map(Into::into).collect();
                document(
                    "enumerate",
                    json!({ "points": points, "count": spaces.len(), "spaces": descs }),
                )
            } else {
                let mut out = format!("# {} topologies on {} points\n", spaces.len(), points);
                for (k, space) in spaces.into_iter().enumerate() {
                    format::write_space(
                        &mut out,
                        &NamedSpace {
                            name: format!("T{points}_{k}"),
                            space,
                        },
                    );
                }
                out
            };
            Ok(Report {
                code: EXIT_OK,
                body,
                notes: String::new(),
            })
        }
        Command::Analyze {
            file,
            empty_disconnected,
        } => analyze(file, cli.strict_relations, *empty_disconnected, structured),
        Command::Verify(args) => sweep_command("verify", args.config(SweepMode::Verify)?, false, structured),
        Command::Search(args) => sweep_command("search", args.config(SweepMode::Search)?, false, structured),
        Command::Fences(args) => sweep_command("fences", args.config(SweepMode::Verify)?, true, structured),
        Command::CheckTwoSpace { file, strict } => {
            let named =
                format::parse_model(&read(file)?, cli.strict_relations).map_err(|e| with_path(file, e))?;
            let lenient = named.model.validate();
            let strict_verdict = strict.then(|| named.model.validate_strict());
            let ok = lenient.valid && strict_verdict.is_none_or(|v| v.valid);
            let body = if structured {
                document(
                    "check-2space",
                    json!({
                        "name": named.name,
                        "base_points": named.model.base.len(),
                        "charts": named.model.charts.len(),
                        "validation": lenient,
                        "strict_validation": strict_verdict,
                    }),
                )
            } else {
                let mut out = format!(
                    "model {}: {} base points, {} charts\nvalid: {}\n",
                    named.name,
                    named.model.base.len(),
                    named.model.charts.len(),
                    lenient.valid
                );
                if let Some(f) = lenient.failure {
                    writeln!(out, "first failure: {f:?}").unwrap();
                }
                if let Some(v) = strict_verdict {
                    writeln!(out, "strict valid: {}", v.valid).unwrap();
                    if let Some(f) = v.failure {
                        writeln!(out, "strict first failure: {f:?}").unwrap();
                    }
                }
                out
            };
            Ok(Report {
                code: if ok { EXIT_OK } else { EXIT_FINDING },
                body,
                notes: String::new(),
            })
        }
        Command::CheckTwoMap { file, strict } => {
            let map_file = format::parse_two_map(&read(file)?).map_err(|e| with_path(file, e))?;
            let dir = file.parent().unwrap_or_else(|| Path::new("."));
            let load = |name: &str| -> Result<format::NamedModel> {
                let path = dir.join(name);
                format::parse_model(&read(&path)?, cli.strict_relations).map_err(|e| with_path(&path, e))
            };
            let source = load(&map_file.source)?;
            let target = load(&map_file.target)?;
            let map = TwoMap::new(
                &source.model,
                &target.model,
                map_file.dense(source.model.base.len())?,
            )?;
            let lenient = map.check();
            let strict_report = strict.then(|| map.check_with(true));
            let ok = lenient.is_two_map && strict_report.is_none_or(|r| r.is_two_map);
            let body = if structured {
                document(
                    "check-2map",
                    json!({
                        "source": source.name,
                        "target": target.name,
                        "report": lenient,
                        "strict_report": strict_report,
                    }),
                )
            } else {
                let mut out = format!(
                    "map {} -> {}\ncontinuous: {}\n2-map: {}\n",
                    source.name, target.name, lenient.continuous, lenient.is_two_map
                );
                if let Some(f) = lenient.failure {
                    writeln!(
                        out,
                        "witness: point {} (source chart {}, target chart {}): {:?}",
                        f.point, f.source_chart, f.target_chart, f.defect
                    )
                    .unwrap();
                }
                if let Some(r) = strict_report {
                    writeln!(out, "strict 2-map: {}", r.is_two_map).unwrap();
                }
                out
            };
            Ok(Report {
                code: if ok { EXIT_OK } else { EXIT_FINDING },
                body,
                notes: String::new(),
            })
        }
        Command::TwoProduct { first, second, name } => {
            let a =
                format::parse_model(&read(first)?, cli.strict_relations).map_err(|e| with_path(first, e))?;
            let b = format::parse_model(&read(second)?, cli.strict_relations)
                .map_err(|e| with_path(second, e))?;
            let product = a.model.two_product(&b.model)?;
            let validation = product.validate();
            let text = format::write_model(name, &product);
            let body = if structured {
                document(
                    "2product",
                    json!({
                        "name": name,
                        "base_points": product.base.len(),
                        "charts": product.charts.len(),
                        "validation": validation,
                        "model": text,
                    }),
                )
            } else {
                text
            };
            Ok(Report {
                code: if validation.valid { EXIT_OK } else { EXIT_FINDING },
                body,
                notes: String::new(),
            })
        }
    }
}

fn analyze(file: &Path, strict: bool, empty_disconnected: bool, structured: bool) -> Result<Report> {
    let input = format::parse_analysis(&read(file)?, strict).map_err(|e| with_path(file, e))?;
    let product = ProductSpace::new(input.x.space.clone(), input.y.space.clone())?;
    let c = Subset::from_pairs(&product, input.subset.pairs.iter().copied())?;
    let verdict = c.evaluate(VerdictOptions {
        empty_is_connected: !empty_disconnected,
    });
    let violation = verdict.hypotheses.all() && !verdict.conclusion_holds;
    let body = if structured {
        let result: Value = json!({
            "x": input.x.name,
            "y": input.y.name,
            "subset": input.subset.name,
            "pairs": input.subset.pairs,
            "hypotheses": verdict.hypotheses,
            "a": verdict.decomposition.a,
            "b": verdict.decomposition.b,
            "exact": verdict.decomposition.exact,
            "failing_point": verdict.certificate.failing,
            "conclusion_holds": verdict.conclusion_holds,
        });
        document("analyze", result)
    } else {
        let h = verdict.hypotheses;
        let mut out = format!(
            "subset {} in {} x {} ({} pairs)\nclosed: {}\npath_connected: {}\nlocally_product: {}\n",
            input.subset.name,
            input.x.name,
            input.y.name,
            input.subset.pairs.len(),
            h.closed,
            h.path_connected,
            h.locally_product
        );
        if let Some((a, b)) = verdict.certificate.failing {
            writeln!(out, "failing point: ({a},{b})").unwrap();
        }
        writeln!(
            out,
            "A: {}\nB: {}\nexact (C = A x B): {}",
            verdict.decomposition.a, verdict.decomposition.b, verdict.decomposition.exact
        )
        .unwrap();
        out
    };
    Ok(Report {
        code: if violation { EXIT_FINDING } else { EXIT_OK },
        body,
        notes: String::new(),
    })
}

fn sweep_command(command: &str, cfg: SweepConfig, fences: bool, structured: bool) -> Result<Report> {
    let report = if fences {
        harness::fence_sweep(&cfg)?
    } else {
        harness::run_sweep(&cfg)?
    };
    let finding = report.violation_count > 0 || (cfg.mask.is_full() && report.counterexample_count > 0);
    let body = if structured {
        document(command, &report)
    } else {
        render_sweep(&report)
    };
    Ok(Report {
        code: if finding { EXIT_FINDING } else { EXIT_OK },
        body,
        notes: format!(
            "{command}: {:.3}s with {} worker(s)\n",
            report.elapsed.as_secs_f64(),
            cfg.workers
        ),
    })
}

fn render_sweep(r: &SweepReport) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{} sweep, {} mode, {}x{} points, require {}",
        r.kind, r.mode, r.nx, r.ny, r.mask
    )
    .unwrap();
    match &r.sampling {
        Some(s) => writeln!(
            out,
            "sampled (non-exhaustive): seed {}, {} draws",
            s.seed, s.samples
        )
        .unwrap(),
        None => writeln!(out, "exhaustive").unwrap(),
    }
    writeln!(
        out,
        "spaces: {} x {} ({} pairs)",
        r.spaces_x, r.spaces_y, r.space_pairs
    )
    .unwrap();
    writeln!(out, "subsets examined: {}", r.subsets_examined).unwrap();
    writeln!(out, "hypothesis satisfying: {}", r.hypothesis_satisfying).unwrap();
    writeln!(out, "conclusion holding: {}", r.conclusion_holding).unwrap();
    if let Some(f) = r.fences_examined {
        writeln!(out, "fences examined: {f}").unwrap();
    }
    writeln!(out, "violations: {}", r.violation_count).unwrap();
    for f in &r.violations {
        writeln!(
            out,
            "  X={:?} Y={:?} C={:?} fence={:?}",
            f.x.rel, f.y.rel, f.c, f.fence
        )
        .unwrap();
    }
    if r.mode == SweepMode::Search {
        writeln!(out, "counterexamples: {}", r.counterexample_count).unwrap();
        for f in &r.counterexamples {
            writeln!(
                out,
                "  X#{} rel={:?}  Y#{} rel={:?}  C={:?}  {:?}",
                f.x_index, f.x.rel, f.y_index, f.y.rel, f.c, f.hypotheses
            )
            .unwrap();
        }
    }
    writeln!(out, "status: {}", r.status).unwrap();
    out
}
