//! Command-line front end. Reports are `KEY=VALUE` lines; exit codes are
//! 0 (checks pass), 1 (a check failed), 2 (usage, parse or geometry error)
//! and 3 (I/O error).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::DVector;

use crate::asymptotic::{
    asymptotic_cubic_with, equivalence_check, eta_at_infinity, is_asymptotic,
    projection_asymptotic_correspondence, surface_asymptotic, surface_asymptotic_directions,
    ScanOptions,
};
use crate::error::GeometryError;
use crate::export::{write_csv, write_obj, ExportError};
use crate::jet::{ManifoldClass, MongeJet, ProjectiveDirection};
use crate::linalg::DEFAULT_TOL;
use crate::locus::{classify_locus_with_tolerance, h_in_ep, sample_locus, GridSpec};
use crate::manifest::{jet_from_str, write_manifest, ManifestError};
use crate::orbit::{classify_orbit_with_tolerance, classify_surface_jet_with_tolerance};
use crate::sections::{
    default_section_normal, normal_section, project_along, section_family_classifier,
    verify_diagram, DiagramGrid, FamilySpec,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Tolerance threshold for `verify` root and binormal comparisons.
const CORRESPONDENCE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "locusmith", version, about = "Curvature loci, sections, projections and asymptotic directions of 2-jets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Obj,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Jet manifest (RON).
    manifest: PathBuf,
    /// Output file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Locus invariants, orbit label and the `H in E_p` flag.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Sample the curvature locus.
    Locus {
        #[command(flatten)]
        common: Common,
        /// Grid counts `NxM` (theta by second parameter).
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
        /// Height range `[-Z, Z]` for singular loci.
        #[arg(long, default_value_t = 2.0)]
        height: f64,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Normal section by the hyperplane orthogonal to a direction, or a
    /// family of sections `{Y + aX = 0}`.
    Section {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        direction: Option<Components>,
        /// Classify `K` midpoint sections of `a` in `[-5, 5]` plus the axes.
        #[arg(long)]
        family_steps: Option<usize>,
    },
    /// Project along a tangent direction.
    Project {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        direction: Components,
    },
    /// Asymptotic directions and binormals.
    Asymptotic {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        direction: Option<Components>,
        /// Scan resolution `NxM` for the root search.
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
    },
    /// Run the consistency checks that apply to the jet.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Projection direction for the diagram check (default `0,0,1`).
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
        direction: Option<Components>,
        /// Diagram grid `NxM` (theta by phi).
        #[arg(long, value_parser = parse_grid)]
        grid: Option<(usize, usize)>,
    },
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (a, b) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got `{text}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad count `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad count `{b}`"))?;
    Ok((a, b))
}

#[derive(Debug, Clone, PartialEq)]
struct Components(Vec<f64>);

fn parse_vector(text: &str) -> Result<Components, String> {
    text.split(',')
        .map(|s| {
            let v: f64 = s.trim().parse().map_err(|_| format!("bad component `{s}`"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite component `{s}`"))
            }
        })
        .collect::<Result<_, _>>()
        .map(Components)
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Usage(format!("geometry error: {e}"))
    }
}

impl From<ManifestError> for Failure {
    fn from(e: ManifestError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<ExportError> for Failure {
    fn from(e: ExportError) -> Self {
        match e {
            ExportError::Geometry(g) => g.into(),
            ExportError::Io(io) => Failure::Io(io.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

struct Report<'a, W: Write> {
    out: &'a mut W,
}

impl<W: Write> Report<'_, W> {
    fn kv(&mut self, key: &str, value: impl std::fmt::Display) -> std::io::Result<()> {
        writeln!(self.out, "{key}={value}")
    }
}

fn fmt_vec(v: &DVector<f64>) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
    format!("({})", parts.join(","))
}

/// Tolerance from `LOCUSMITH_TOL`, or the default.
pub fn tolerance_from_env() -> Result<f64, String> {
    match std::env::var("LOCUSMITH_TOL") {
        Ok(text) => match text.trim().parse::<f64>() {
            Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
            _ => Err(format!("LOCUSMITH_TOL must be a positive number, got `{text}`")),
        },
        Err(_) => Ok(DEFAULT_TOL),
    }
}

fn load(path: &Path) -> Result<MongeJet, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    jet_from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

/// Run the command line `args` (including the program name), writing the
/// report to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let tol = match tolerance_from_env() {
        Ok(t) => t,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let result = dispatch(cli.command, tol, out);
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(msg)) => {
            let _ = writeln!(err, "io error: {msg}");
            EXIT_IO
        }
    }
}

fn dispatch<W: Write>(command: Command, tol: f64, out: &mut W) -> Outcome {
    let mut report = Report { out };
    match command {
        Command::Classify { common } => cmd_classify(&common, tol, &mut report),
        Command::Locus {
            common,
            grid,
            height,
            format,
        } => cmd_locus(&common, grid, height, format, &mut report),
        Command::Section {
            common,
            direction,
            family_steps,
        } => cmd_section(&common, direction.map(|c| c.0), family_steps, tol, &mut report),
        Command::Project { common, direction } => cmd_project(&common, direction.0, tol, &mut report),
        Command::Asymptotic {
            common,
            direction,
            grid,
        } => cmd_asymptotic(&common, direction.map(|c| c.0), grid, &mut report),
        Command::Verify {
            common,
            direction,
            grid,
        } => cmd_verify(&common, direction.map(|c| c.0), grid, tol, &mut report),
    }
}

fn cmd_classify<W: Write>(common: &Common, tol: f64, r: &mut Report<W>) -> Outcome {
    let jet = load(&common.manifest)?;
    let inv = classify_locus_with_tolerance(&jet, tol);
    r.kv("class", jet.class())?;
    r.kv("jet", &jet)?;
    r.kv("dim_first_normal", inv.dim_first_normal)?;
    r.kv("dim_affine_hull", inv.dim_affine_hull)?;
    r.kv("locus_type", inv.degenerate_type)?;
    if let Some(tag) = &inv.tag {
        r.kv("locus_tag", tag)?;
    }
    r.kv("mean_curvature", fmt_vec(&inv.mean_curvature))?;
    let mut summary = vec![jet.class().to_string()];
    match jet.class() {
        ManifoldClass::RegSurface | ManifoldClass::Reg3Manifold => {
            let flag = h_in_ep(&jet)?;
            r.kv("h_in_ep", flag)?;
            summary.push(format!("dim N1={}", inv.dim_first_normal));
            summary.push(format!("H in Ep={flag}"));
            summary.push(inv.degenerate_type.to_string());
        }
        ManifoldClass::Sing3Manifold => {
            if jet.ambient_dim() == 5 {
                let label = classify_orbit_with_tolerance(&jet, tol)?;
                r.kv("orbit", label.orbit)?;
                r.kv("rank_alpha", label.rank_alpha)?;
                summary.push(format!("orbit {}", label.orbit));
            }
            summary.push(inv.degenerate_type.to_string());
        }
        ManifoldClass::SingSurface => {
            let label = classify_surface_jet_with_tolerance(&jet, tol)?;
            r.kv("orbit", label.label)?;
            summary.push(format!("orbit {}", label.label));
            summary.push(inv.degenerate_type.to_string());
        }
    }
    r.kv("summary", summary.join("; "))?;
    Ok(true)
}

fn cmd_locus<W: Write>(
    common: &Common,
    grid: Option<(usize, usize)>,
    height: f64,
    format: Option<Format>,
    r: &mut Report<W>,
) -> Outcome {
    let jet = load(&common.manifest)?;
    let defaults = GridSpec::default();
    let (theta, second) = grid.unwrap_or((defaults.theta, defaults.second));
    let sample = sample_locus(&jet, &GridSpec::new(theta, second, height))?;
    let format = format.unwrap_or_else(|| match &common.out {
        Some(p) if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("obj")) => Format::Obj,
        _ => Format::Csv,
    });
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&sample, &mut buf)?,
        Format::Obj => write_obj(&sample, &mut buf)?,
    }
    match &common.out {
        Some(path) => {
            write_file(path, &buf)?;
            r.kv("class", jet.class())?;
            r.kv("samples", sample.len())?;
            r.kv("grid", format!("{}x{}", sample.grid_shape.1, sample.grid_shape.0))?;
            r.kv("out", path.display())?;
        }
        None => r.out.write_all(&buf)?,
    }
    Ok(true)
}

fn cmd_section<W: Write>(
    common: &Common,
    direction: Option<Vec<f64>>,
    family_steps: Option<usize>,
    tol: f64,
    r: &mut Report<W>,
) -> Outcome {
    let jet = load(&common.manifest)?;
    if let Some(steps) = family_steps {
        if steps == 0 {
            return Err(Failure::Usage("--family-steps must be positive".into()));
        }
        let family = section_family_classifier(&jet, &FamilySpec::midpoints(steps, -5.0, 5.0))?;
        r.kv("sections", family.entries.len())?;
        for entry in &family.entries {
            r.kv(&format!("section[{}]", entry.label), entry.locus_type)?;
        }
        for (t, n) in family.counts() {
            r.kv(&format!("count[{t}]"), n)?;
        }
        return Ok(true);
    }
    let direction =
        direction.ok_or_else(|| Failure::Usage("section needs --direction or --family-steps".into()))?;
    let u = ProjectiveDirection::new(direction)?;
    let section = normal_section(&jet, &u)?;
    let inv = classify_locus_with_tolerance(&section, tol);
    r.kv("direction", fmt_vec(u.components()))?;
    r.kv("class", section.class())?;
    r.kv("jet", &section)?;
    r.kv("locus_type", inv.degenerate_type)?;
    if let Some(path) = &common.out {
        write_file(path, write_manifest(&section).as_bytes())?;
        r.kv("out", path.display())?;
    }
    Ok(true)
}

fn cmd_project<W: Write>(common: &Common, direction: Vec<f64>, tol: f64, r: &mut Report<W>) -> Outcome {
    let jet = load(&common.manifest)?;
    let projection = project_along(&jet, &DVector::from_vec(direction))?;
    let p = &projection.jet;
    let inv = classify_locus_with_tolerance(p, tol);
    r.kv("class", p.class())?;
    r.kv("jet", p)?;
    r.kv("locus_type", inv.degenerate_type)?;
    r.kv("dim_affine_hull", inv.dim_affine_hull)?;
    if p.class() == ManifoldClass::Sing3Manifold && p.ambient_dim() == 5 {
        r.kv("orbit", classify_orbit_with_tolerance(p, tol)?.orbit)?;
    }
    if let Some(path) = &common.out {
        write_file(path, write_manifest(p).as_bytes())?;
        r.kv("out", path.display())?;
    }
    Ok(true)
}

fn cmd_asymptotic<W: Write>(
    common: &Common,
    direction: Option<Vec<f64>>,
    grid: Option<(usize, usize)>,
    r: &mut Report<W>,
) -> Outcome {
    let jet = load(&common.manifest)?;
    r.kv("class", jet.class())?;
    if jet.class() == ManifoldClass::SingSurface {
        let dirs = surface_asymptotic_directions(&jet)?;
        r.kv("identically_zero", dirs.identically_zero)?;
        r.kv("roots", dirs.directions.len())?;
        for d in &dirs.directions {
            r.kv("root", fmt_vec(d))?;
        }
        if let Some(u) = direction {
            let test = surface_asymptotic(&jet, &DVector::from_vec(u))?;
            r.kv("direction_asymptotic", test.asymptotic)?;
            for b in &test.binormals {
                r.kv("binormal", fmt_vec(b))?;
            }
            for d in &test.degenerate {
                r.kv("degenerate", fmt_vec(d))?;
            }
        }
        write_eta_infinity(&jet, r)?;
        return Ok(true);
    }
    let options = grid.map_or_else(ScanOptions::default, |(theta, phi)| ScanOptions { theta, phi });
    if options.theta == 0 || options.phi == 0 {
        return Err(GeometryError::EmptyGrid.into());
    }
    let cubic = asymptotic_cubic_with(&jet, options)?;
    let coeffs: Vec<String> = cubic.coefficients.iter().map(|c| format!("{c:?}")).collect();
    r.kv("cubic", coeffs.join(","))?;
    r.kv("identically_zero", cubic.identically_zero)?;
    r.kv("roots", cubic.roots.len())?;
    let mut table = String::from("a,b,c,nu1,nu2,nu3,sigma_ratio\n");
    for root in &cubic.roots {
        let nu = &root.binormals[0];
        table.push_str(&format!(
            "{:?},{:?},{:?},{:?},{:?},{:?},{:e}\n",
            root.direction[0], root.direction[1], root.direction[2], nu[0], nu[1], nu[2], root.sigma_ratio
        ));
    }
    match &common.out {
        Some(path) => {
            write_file(path, table.as_bytes())?;
            r.kv("out", path.display())?;
        }
        None => {
            for root in &cubic.roots {
                r.kv("root", format!("{}->{}", fmt_vec(&root.direction), fmt_vec(&root.binormals[0])))?;
            }
        }
    }
    if let Some(u) = direction {
        let test = is_asymptotic(&jet, &DVector::from_vec(u))?;
        r.kv("direction_asymptotic", test.asymptotic)?;
        r.kv("direction_sigma_ratio", format!("{:e}", test.sigma_ratio))?;
        if let Some(nu) = test.witness() {
            r.kv("binormal", fmt_vec(nu))?;
        }
    }
    if jet.corank() == 1 {
        write_eta_infinity(&jet, r)?;
    }
    Ok(true)
}

fn write_eta_infinity<W: Write>(jet: &MongeJet, r: &mut Report<W>) -> Result<(), Failure> {
    match eta_at_infinity(jet) {
        Ok(e) => {
            r.kv("eta_inf_case", e.case.as_str())?;
            r.kv("eta_inf", fmt_vec(&e.value))?;
            if let Some(d) = &e.d_theta {
                r.kv("eta_inf_d_theta", fmt_vec(d))?;
            }
            if let Some(d) = &e.d_phi {
                r.kv("eta_inf_d_phi", fmt_vec(d))?;
            }
            if let Some(flag) = e.u_inf_asymptotic {
                r.kv("u_inf_asymptotic", flag)?;
            }
        }
        Err(GeometryError::UndefinedForType(t)) => r.kv("eta_inf", format!("undefined ({t})"))?,
        Err(GeometryError::NonConvergentLimit(s)) => {
            r.kv("eta_inf", format!("nonconvergent (spread {s:e})"))?
        }
        Err(e) => return Err(e.into()),
    }
    Ok(())
}

fn cmd_verify<W: Write>(
    common: &Common,
    direction: Option<Vec<f64>>,
    grid: Option<(usize, usize)>,
    tol: f64,
    r: &mut Report<W>,
) -> Outcome {
    let jet = load(&common.manifest)?;
    r.kv("class", jet.class())?;
    let mut pass = true;
    let mut lines: Vec<(String, String)> = Vec::new();
    match (jet.class(), jet.ambient_dim()) {
        (ManifoldClass::Reg3Manifold, 6) => {
            let u = DVector::from_vec(direction.unwrap_or_else(|| vec![0.0, 0.0, 1.0]));
            if u.len() != 3 {
                return Err(GeometryError::DimensionMismatch("--direction needs 3 components".into()).into());
            }
            let w = default_section_normal(&u);
            let mut dgrid = DiagramGrid::default();
            if let Some((theta, phi)) = grid {
                dgrid.theta = theta;
                dgrid.phi = phi;
            }
            let diagram = verify_diagram(&jet, &u, &w, &dgrid)?;
            lines.extend(
                diagram
                    .to_key_values()
                    .into_iter()
                    .map(|(k, v)| (format!("diagram.{k}"), v)),
            );
            let ok = diagram.passes(tol);
            lines.push(("diagram.pass".into(), ok.to_string()));
            pass &= ok;

            let corr = projection_asymptotic_correspondence(&jet, &u)?;
            lines.push(("correspondence.u_asymptotic".into(), corr.u_asymptotic.to_string()));
            lines.push(("correspondence.orbit".into(), corr.orbit.orbit.to_string()));
            lines.push(("correspondence.det_alpha".into(), format!("{:e}", corr.det_alpha)));
            lines.push(("correspondence.root_distance".into(), format!("{:e}", corr.root_distance)));
            lines.push(("correspondence.binormal_distance".into(), format!("{:e}", corr.binormal_distance)));
            let ok = corr.passes(CORRESPONDENCE_TOL);
            lines.push(("correspondence.pass".into(), ok.to_string()));
            pass &= ok;
        }
        (ManifoldClass::Sing3Manifold, 5) => {}
        _ => {
            return Err(GeometryError::WrongManifoldClass {
                operation: "verify",
                found: format!("{} in R^{}", jet.class(), jet.ambient_dim()),
            }
            .into())
        }
    }
    let eq = equivalence_check(&jet)?;
    lines.push(("equivalence.samples".into(), eq.samples.len().to_string()));
    lines.push(("equivalence.disagreements".into(), eq.disagreements.len().to_string()));
    lines.push(("equivalence.pass".into(), eq.passes().to_string()));
    pass &= eq.passes();
    for (k, v) in lines {
        r.kv(&k, v)?;
    }
    r.kv("status", if pass { "pass" } else { "fail" })?;
    Ok(pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_and_vector_parsers() {
        assert_eq!(parse_grid("36x17").unwrap(), (36, 17));
        assert!(parse_grid("36").is_err());
        assert_eq!(parse_vector("0,1,-1").unwrap().0, vec![0.0, 1.0, -1.0]);
        assert!(parse_vector("0,a").is_err());
        assert!(parse_vector("inf,0").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        assert_eq!(run(["locusmith", "bogus"], &mut out, &mut err), EXIT_USAGE);
        assert_eq!(run(["locusmith", "--help"], &mut out, &mut err), EXIT_PASS);
    }

    #[test]
    fn missing_manifest_exits_three() {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(["locusmith", "classify", "/nonexistent/jet.ron"], &mut out, &mut err);
        assert_eq!(code, EXIT_IO);
    }
}
