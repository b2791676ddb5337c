//! Builds 2-spaces from locally product subsets and multiplies two of them.

use locprod::format::write_model;
use locprod::{FiniteSpace, ProductSpace, Subset, TwoSpace};

fn main() -> locprod::Result<()> {
    let s = FiniteSpace::sierpinski();
    let p = ProductSpace::new(s.clone(), s.clone())?;
    let row = Subset::from_pairs(&p, [(0, 1), (1, 1)])?;
    let model = TwoSpace::from_locally_product_subset(&row)?;
    println!("{} charts, valid: {}", model.charts.len(), model.validate().valid);

    let q = ProductSpace::new(FiniteSpace::discrete(2), FiniteSpace::discrete(2))?;
    let diagonal = Subset::from_pairs(&q, [(0, 0), (1, 1)])?;
    let other = TwoSpace::from_locally_product_subset(&diagonal)?;
    println!("diagonal model valid: {}", other.validate().valid);

    let product = model.two_product(&other)?;
    println!(
        "2-product has {} points, valid: {}",
        product.base.len(),
        product.validate().valid
    );
    print!("{}", write_model("row_times_diagonal", &product));
    Ok(())
}
