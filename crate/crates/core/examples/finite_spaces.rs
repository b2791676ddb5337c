//! Opens, closures and path components of a few small spaces.

use locprod::{is_continuous, FiniteSpace, PointSet};

fn main() -> locprod::Result<()> {
    let circle = FiniteSpace::pseudocircle();
    println!("pseudocircle opens:");
    for open in circle.all_opens() {
        println!("  {open}");
    }
    for x in 0..circle.len() {
        let closure = circle.closure(&PointSet::singleton(circle.len(), x)?);
        println!("U_{x} = {}  cl{{{x}}} = {closure}", circle.minimal_open(x)?);
    }

    // 0 <= 1 and 2 <= 3, nothing across
    let two_chains = FiniteSpace::from_relation(4, [(0, 1), (2, 3)])?;
    println!(
        "components of two chains: {:?}",
        two_chains.components(&PointSet::full(4))
    );
    println!(
        "path connected: {}",
        two_chains.is_path_connected(&PointSet::full(4))
    );

    let s = FiniteSpace::sierpinski();
    println!("identity S -> S continuous: {}", is_continuous(&s, &s, &[0, 1])?);
    println!("flip S -> S continuous: {}", is_continuous(&s, &s, &[1, 0])?);
    Ok(())
}
