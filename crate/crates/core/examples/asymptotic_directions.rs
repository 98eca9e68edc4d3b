//! Asymptotic directions and binormals of a corank-1 3-manifold and of one
//! of its normal sections.

use locusmith::asymptotic::{asymptotic_cubic, eta_at_infinity, is_asymptotic, surface_asymptotic};
use locusmith::manifest::jet_from_str;
use locusmith::sections::normal_section;
use locusmith::ProjectiveDirection;
use nalgebra::DVector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let jet = jet_from_str(include_str!("../fixtures/sing_cyclic.ron"))?;
    let cubic = asymptotic_cubic(&jet)?;
    println!("det A(u) coefficients: {:?}", cubic.coefficients);
    println!("{} root samples on the sphere", cubic.roots.len());

    let u = DVector::from_vec(vec![0.0, 1.0, -1.0]);
    let test = is_asymptotic(&jet, &u)?;
    println!("(0,1,-1) asymptotic: {}, binormal {:?}", test.asymptotic, test.witness().map(|b| b.as_slice()));

    let inf = eta_at_infinity(&jet)?;
    println!("eta(u_inf): {} {:?}", inf.case.as_str(), inf.value.as_slice());

    let section = normal_section(&jet, &ProjectiveDirection::new(vec![1.0, 0.0, 0.0])?)?;
    let s = surface_asymptotic(&section, &DVector::from_vec(vec![1.0, -1.0]))?;
    println!(
        "section {section}: (1,-1) asymptotic {}, degenerate {:?}",
        s.asymptotic,
        s.degenerate.iter().map(|d| d.as_slice().to_vec()).collect::<Vec<_>>()
    );
    Ok(())
}
