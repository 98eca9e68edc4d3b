//! Read a manifest, write its normal section back as a manifest, and export
//! the curvature locus as CSV and OBJ.

use locusmith::export::{write_csv, write_obj};
use locusmith::manifest::{jet_from_str, write_manifest};
use locusmith::sections::normal_section;
use locusmith::{sample_locus, GridSpec, ProjectiveDirection};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let jet = jet_from_str(include_str!("../fixtures/elliptic_region.ron"))?;
    let section = normal_section(&jet, &ProjectiveDirection::new(vec![1.0, 0.0, -1.0])?)?;
    let text = write_manifest(&section);
    print!("{text}");
    assert_eq!(jet_from_str(&text)?, section);

    let sample = sample_locus(&jet, &GridSpec::new(6, 4, 1.0))?;
    let mut csv = Vec::new();
    write_csv(&sample, &mut csv)?;
    println!("{} CSV lines", String::from_utf8(csv)?.lines().count());
    let mut obj = Vec::new();
    write_obj(&sample, &mut obj)?;
    println!("{} OBJ lines", String::from_utf8(obj)?.lines().count());
    Ok(())
}
