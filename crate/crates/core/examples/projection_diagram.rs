//! Project a regular 3-manifold along a tangent direction and check the
//! diagram of projections and normal sections.

use locusmith::manifest::jet_from_str;
use locusmith::orbit::classify_orbit;
use locusmith::sections::{default_section_normal, project_along, verify_diagram, DiagramGrid};
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let jet = jet_from_str(include_str!("../fixtures/blowup.ron"))?;
    let u = DVector::from_vec(vec![0.0, 0.0, 1.0]);
    let projection = project_along(&jet, &u)?;
    println!("projection: {}", projection.jet);
    println!("orbit: {}", classify_orbit(&projection.jet)?.orbit);
    let report = verify_diagram(&jet, &u, &default_section_normal(&u), &DiagramGrid::default())?;
    for (key, value) in report.to_key_values() {
        println!("{key}={value}");
    }
    Ok(())
}
