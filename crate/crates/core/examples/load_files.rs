//! Reads the bundled analysis and model files and reports on them.

use std::path::Path;

use locprod::format::{parse_analysis, parse_model};
use locprod::{ProductSpace, Subset};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    for name in ["s2xs2_l_shape.txt", "s2xs2_top_row.txt", "discrete_diagonal.txt"] {
        let input = parse_analysis(&std::fs::read_to_string(data.join(name))?, false)?;
        let product = ProductSpace::new(input.x.space, input.y.space)?;
        let c = Subset::from_pairs(&product, input.subset.pairs.iter().copied())?;
        let h = c.evaluate(Default::default()).hypotheses;
        println!(
            "{name} {}: {h:?}, rectangle {}",
            input.subset.name,
            c.is_rectangle()
        );
    }
    for name in ["s2_square.2s", "s2_square_twisted.2s"] {
        let named = parse_model(&std::fs::read_to_string(data.join(name))?, false)?;
        let v = named.model.validate();
        println!("{name} ({}): valid {} {:?}", named.name, v.valid, v.failure);
    }
    Ok(())
}
