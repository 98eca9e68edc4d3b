//! Classify the curvature loci of a few fixtures and print a coarse sample.

use locusmith::manifest::jet_from_str;
use locusmith::{classify_locus, sample_locus, GridSpec};

const FIXTURES: [(&str, &str); 3] = [
    ("roman steiner", include_str!("../fixtures/roman_steiner.ron")),
    ("elliptic region", include_str!("../fixtures/elliptic_region.ron")),
    ("(x,y,z^2,xz,0)", include_str!("../fixtures/orbit_square_mixed.ron")),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (name, text) in FIXTURES {
        let jet = jet_from_str(text)?;
        let inv = classify_locus(&jet);
        println!(
            "{name}: {} dim N1={} dim Aff={} H={:?}",
            inv.degenerate_type,
            inv.dim_first_normal,
            inv.dim_affine_hull,
            inv.mean_curvature.as_slice()
        );
        let sample = sample_locus(&jet, &GridSpec::new(4, 3, 1.0))?;
        for ((t, s), p) in sample.params.iter().zip(&sample.points).take(4) {
            println!("  ({t:.3}, {s:.3}) -> {:?}", p.as_slice());
        }
    }
    Ok(())
}
