//! Checks the statement on every subset of every product of two 3-point spaces.

use locprod::{run_sweep, SweepConfig};

fn main() -> locprod::Result<()> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let report = run_sweep(&SweepConfig::new(3, 3).workers(workers))?;
    println!(
        "{} space pairs, {} subsets, {} satisfy all hypotheses, {} violations ({:.2?})",
        report.space_pairs,
        report.subsets_examined,
        report.hypothesis_satisfying,
        report.violation_count,
        report.elapsed
    );
    println!("{}", report.status);
    Ok(())
}
