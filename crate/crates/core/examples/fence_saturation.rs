//! Checks that short fences inside closed, locally product subsets stay inside
//! the grid spanned by their endpoints.

use locprod::{fence_sweep, SweepConfig};

fn main() -> locprod::Result<()> {
    for n in 1..=3 {
        let report = fence_sweep(&SweepConfig::new(n, n))?;
        println!(
            "{n}x{n}: {} fences, {} violations",
            report.fences_examined.unwrap_or(0),
            report.violation_count
        );
    }
    Ok(())
}
