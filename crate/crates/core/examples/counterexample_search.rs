//! Drops one hypothesis at a time and looks for subsets that are not rectangles.

use locprod::{run_sweep, HypothesisMask, SweepConfig, SweepMode};

fn main() -> locprod::Result<()> {
    for require in ["all", "closed,local", "connected,local", "closed,connected"] {
        let cfg = SweepConfig::new(2, 2)
            .mask(HypothesisMask::parse(require)?)
            .mode(SweepMode::Search);
        let report = run_sweep(&cfg)?;
        println!("require {require}: {}", report.status);
        if let Some(first) = report.counterexamples.first() {
            println!(
                "  e.g. X rel {:?}, Y rel {:?}, C = {:?}",
                first.x.rel, first.y.rel, first.c
            );
        }
    }
    Ok(())
}
