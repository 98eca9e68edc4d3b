//! First and second fundamental forms of a corank-1 3-manifold jet.

use locusmith::forms::{first_form, second_form, UnitTangentSet};
use locusmith::{JetShape, MongeJet};

fn main() -> locusmith::Result<()> {
    let jet = MongeJet::from_terms(
        JetShape::new(3, 5, 1)?,
        &[(3, "x^2", 1.0), (3, "y*z", -2.0), (4, "y^2", 1.0), (4, "x*z", -2.0), (5, "z^2", 1.0), (5, "x*y", -2.0)],
    )?;
    println!("jet: {jet}");
    println!("unit tangents: {}", UnitTangentSet::of(&jet).describe());
    let i = first_form(&jet);
    println!("first form ({:?}):{}", i.signature, i.matrix);
    let ii = second_form(&jet);
    println!("second form columns (l, m, n, p, q, r):{}", ii.matrix);
    Ok(())
}
