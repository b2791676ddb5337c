//! The identity on the pseudocircle is continuous, but not a 2-map from the
//! vertical model {pt} x S to the horizontal model S x {pt}.

use locprod::{FiniteSpace, TwoMap, TwoSpace};

fn main() -> locprod::Result<()> {
    let pt = FiniteSpace::discrete(1);
    let circle = FiniteSpace::pseudocircle();
    let vertical = TwoSpace::single_chart(pt.clone(), circle.clone())?;
    let horizontal = TwoSpace::single_chart(circle, pt)?;

    let swap = TwoMap::new(&vertical, &horizontal, vec![0, 1, 2, 3])?;
    let report = swap.check();
    println!("continuous: {}, 2-map: {}", report.continuous, report.is_two_map);
    if let Some(failure) = report.failure {
        println!("fails at point {}: {:?}", failure.point, failure.defect);
    }
    println!(
        "identity on vertical is a 2-map: {}",
        TwoMap::identity(&vertical).check().is_two_map
    );
    Ok(())
}
