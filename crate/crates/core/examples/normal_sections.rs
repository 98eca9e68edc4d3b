//! Normal sections of the Roman Steiner jet: segments on the axes,
//! ellipses on the diagonals.

use locusmith::manifest::jet_from_str;
use locusmith::sections::normal_section;
use locusmith::{classify_locus, ProjectiveDirection};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let jet = jet_from_str(include_str!("../fixtures/roman_steiner.ron"))?;
    for (label, u) in [
        ("X=0", [1.0, 0.0, 0.0]),
        ("Y=0", [0.0, 1.0, 0.0]),
        ("Z=0", [0.0, 0.0, 1.0]),
        ("X=Y", [1.0, -1.0, 0.0]),
        ("X=Z", [1.0, 0.0, -1.0]),
        ("Y=Z", [0.0, 1.0, -1.0]),
    ] {
        let section = normal_section(&jet, &ProjectiveDirection::new(u.to_vec())?)?;
        println!("{{{label}}}: {section} -> {}", classify_locus(&section).degenerate_type);
    }
    Ok(())
}
