//! Deciding local productness and the global rectangle verdict for one subset.

use locprod::{FiniteSpace, ProductSpace, Subset};

fn report(label: &str, c: &Subset<'_>) -> locprod::Result<()> {
    let verdict = c.theorem_verdict()?;
    let d = &verdict.decomposition;
    println!("{label}: C = {:?}", c.pairs());
    println!("  hypotheses {:?}", verdict.hypotheses);
    if let Some(point) = verdict.certificate.failing {
        println!("  no product box at {point:?}");
    }
    println!("  A = {}, B = {}, C = A x B: {}", d.a, d.b, d.exact);
    Ok(())
}

fn main() -> locprod::Result<()> {
    let s = FiniteSpace::sierpinski();
    let p = ProductSpace::new(s.clone(), s)?;
    report("L shape", &Subset::from_pairs(&p, [(0, 1), (1, 0), (1, 1)])?)?;
    report("top row", &Subset::from_pairs(&p, [(0, 1), (1, 1)])?)?;

    let d = FiniteSpace::discrete(2);
    let q = ProductSpace::new(d.clone(), d)?;
    report("discrete diagonal", &Subset::from_pairs(&q, [(0, 0), (1, 1)])?)?;
    Ok(())
}
