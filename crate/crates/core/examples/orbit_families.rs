//! Orbit labels of the six corank-1 normal forms and the loci of their
//! section families.

use locusmith::orbit::{classify_orbit, Orbit};
use locusmith::sections::{section_family_classifier, FamilySpec};

fn main() -> locusmith::Result<()> {
    let family = FamilySpec::midpoints(41, -5.0, 5.0);
    for orbit in Orbit::ALL {
        let jet = orbit.normal_form();
        let label = classify_orbit(&jet)?;
        let counts: Vec<String> = section_family_classifier(&jet, &family)?
            .counts()
            .into_iter()
            .map(|(t, n)| format!("{n} {t}"))
            .collect();
        println!("{}: rank alpha {}, sections: {}", label.orbit, label.rank_alpha, counts.join(", "));
    }
    Ok(())
}
