//! Command-line interface: fan file format, subcommands, and exit codes.
//!
//! Fan files are JSON objects `{"rank": d, "rays": [[..], ..],
//! "max_cones": [[..], ..]}` with arbitrary-precision decimal integers.
//! [`serialize_fan`] always emits the canonical form: rays sorted
//! lexicographically, each cone as a sorted index set, cones sorted
//! lexicographically, no insignificant whitespace. Parsing followed by
//! serialization therefore normalizes any permutation of the same fan to
//! identical bytes.
//!
//! Exit codes: `0` success, `2` fan file syntax error, `3` semantic error
//! (validation failure or an unsatisfied precondition), `64` command-line
//! usage error, `74` I/O failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ColorChoice, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Deserialize;

use crate::builders;
use crate::classify::{self, IsoCheck};
use crate::divisor::{self, TDivisor};
use crate::error::Error;
use crate::fan::Fan;
use crate::lattice::{IntMatrix, LatticeVector};
use crate::mori;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SYNTAX: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_IO: i32 = 74;

/// A failure with the exit code it maps to. The message goes to stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    fn syntax(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit_code: EXIT_SYNTAX,
        }
    }

    fn semantic(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit_code: EXIT_SEMANTIC,
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit_code: EXIT_USAGE,
        }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            exit_code: EXIT_IO,
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::semantic(err.to_string())
    }
}

/// On-disk schema of a fan file.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FanFile {
    rank: usize,
    rays: Vec<Vec<serde_json::Number>>,
    max_cones: Vec<Vec<usize>>,
}

/// Decode the JSON structure without validating the fan. Malformed JSON
/// and non-integer coordinates are syntax errors.
fn fan_from_text(text: &str) -> Result<Fan, CliError> {
    let file: FanFile =
        serde_json::from_str(text).map_err(|e| CliError::syntax(e.to_string()))?;
    let mut rays = Vec::with_capacity(file.rays.len());
    for (i, row) in file.rays.iter().enumerate() {
        let mut coords = Vec::with_capacity(row.len());
        for (j, number) in row.iter().enumerate() {
            let literal = number.to_string();
            let value: BigInt = literal.parse().map_err(|_| {
                CliError::syntax(format!(
                    "ray {i}, coordinate {j}: not an integer: {literal}"
                ))
            })?;
            coords.push(value);
        }
        rays.push(LatticeVector::new(coords));
    }
    Ok(Fan::new(file.rank, rays, file.max_cones))
}

/// Parse a fan file and validate it. Validation failures are semantic
/// errors whose message lists every violation.
pub fn parse_fan(text: &str) -> Result<Fan, CliError> {
    let fan = fan_from_text(text)?;
    let report = fan.validate();
    if !report.is_valid() {
        let mut message = String::from("invalid fan");
        for violation in report.violations() {
            message.push_str("\nviolation: ");
            message.push_str(&violation.to_string());
        }
        return Err(CliError::semantic(message));
    }
    Ok(fan)
}

/// Canonical byte-exact serialization of a valid fan.
pub fn serialize_fan(fan: &Fan) -> String {
    let nrays = fan.rays().len();
    let mut order: Vec<usize> = (0..nrays).collect();
    order.sort_by(|&a, &b| fan.ray(a).cmp(fan.ray(b)));
    let mut new_index = vec![0usize; nrays];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new;
    }

    let rays_text = order
        .iter()
        .map(|&old| {
            let coords = fan
                .ray(old)
                .coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("[{coords}]")
        })
        .collect::<Vec<_>>()
        .join(",");

    let mut cones: Vec<Vec<usize>> = fan
        .max_cones()
        .iter()
        .map(|cone| {
            let mut mapped: Vec<usize> =
                cone.rays().iter().map(|&i| new_index[i]).collect();
            mapped.sort_unstable();
            mapped
        })
        .collect();
    cones.sort();
    let cones_text = cones
        .iter()
        .map(|cone| {
            let indices = cone
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(",");
            format!("[{indices}]")
        })
        .collect::<Vec<_>>()
        .join(",");

    format!(
        "{{\"rank\":{},\"rays\":[{}],\"max_cones\":[{}]}}\n",
        fan.rank(),
        rays_text,
        cones_text
    )
}

#[derive(Parser)]
#[command(
    name = "fanmori",
    bin_name = "fanmori",
    version,
    color = ColorChoice::Never,
    about = "Exact Mori-theoretic invariants and the contact classification \
             for smooth complete toric varieties given by lattice fans",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a reference fan and write it as a canonical fan file.
    Build {
        #[command(subcommand)]
        target: BuildTarget,
    },
    /// Validate a fan file; exit 0 when valid, 3 when not.
    Validate {
        /// Fan file to check.
        file: PathBuf,
        /// Emit one JSON object instead of key: value lines.
        #[arg(long)]
        machine: bool,
    },
    /// Report smoothness, completeness, projectivity, Picard rank, and
    /// the canonical class of a fan.
    Analyze {
        /// Fan file to analyze.
        file: PathBuf,
        /// Emit one JSON object instead of key: value lines.
        #[arg(long)]
        machine: bool,
    },
    /// List walls with their curve classes, the Mori cone generators,
    /// and the extremal rays with lengths and contraction profiles.
    Mori {
        /// Fan file to analyze.
        file: PathBuf,
        /// Emit one JSON object instead of key: value lines.
        #[arg(long)]
        machine: bool,
    },
    /// Decide whether the variety carries a contact structure; the first
    /// output line is the verdict.
    Classify {
        /// Fan file to classify.
        file: PathBuf,
        /// Run every reference comparison even when an earlier test
        /// already settles the verdict.
        #[arg(long)]
        full_evidence: bool,
        /// Emit one JSON object instead of key: value lines.
        #[arg(long)]
        machine: bool,
    },
}

#[derive(Subcommand)]
enum BuildTarget {
    /// Fan of the projective space P^dim.
    Pn {
        /// Dimension (must be >= 1).
        #[arg(long)]
        dim: usize,
        /// Output fan file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fan of the product (P^1)^m.
    P1pow {
        /// Number of factors (must be >= 1).
        #[arg(long)]
        m: usize,
        /// Output fan file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fan of the Hirzebruch surface F_a.
    Hirzebruch {
        /// Degree of the twisting line bundle.
        #[arg(long)]
        a: u64,
        /// Output fan file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fan of the projectivized tangent bundle of (P^1)^m.
    Ptangent {
        /// Number of P^1 factors of the base (must be >= 2).
        #[arg(long)]
        m: usize,
        /// Output fan file.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Fan of a projectivized sum of line bundles over an arbitrary
    /// smooth complete base fan.
    Pbundle {
        /// Fan file of the base.
        #[arg(long)]
        base: PathBuf,
        /// One divisor per summand, separated by ';'; each divisor lists
        /// one integer coefficient per base ray (in the ray order of the
        /// base file), separated by ','. The first divisor must be zero.
        /// Example for two summands on a 2-ray base: "0,0;0,2".
        #[arg(long)]
        degrees: String,
        /// Output fan file.
        #[arg(short, long)]
        output: PathBuf,
    },
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))
}

fn load_fan(path: &Path) -> Result<Fan, CliError> {
    parse_fan(&read_file(path)?)
}

fn parse_degrees(spec: &str) -> Result<Vec<TDivisor>, CliError> {
    let mut divisors = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        let mut coefficients = Vec::new();
        if !part.is_empty() {
            for token in part.split(',') {
                let token = token.trim();
                let value: BigInt = token.parse().map_err(|_| {
                    CliError::usage(format!(
                        "--degrees: not an integer: {token:?}"
                    ))
                })?;
                coefficients.push(value);
            }
        }
        divisors.push(TDivisor::new(coefficients));
    }
    Ok(divisors)
}

// Formatting helpers. Human-readable lists use ", " separators inside
// brackets; machine output is compact JSON built by hand so that the
// bytes cannot drift with library versions.

fn fmt_ints(values: &[BigInt]) -> String {
    let inner = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("[{inner}]")
}

fn fmt_indices(values: &[usize]) -> String {
    let inner = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    format!("[{inner}]")
}

fn fmt_matrix(matrix: &IntMatrix) -> String {
    let rows = (0..matrix.rows())
        .map(|r| fmt_ints(matrix.row_slice(r)))
        .collect::<Vec<_>>()
        .join(", ");
    format!("[{rows}]")
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn json_ints(values: &[BigInt]) -> String {
    let inner = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("[{inner}]")
}

fn json_indices(values: &[usize]) -> String {
    let inner = values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",");
    format!("[{inner}]")
}

fn json_matrix(matrix: &IntMatrix) -> String {
    let rows = (0..matrix.rows())
        .map(|r| json_ints(matrix.row_slice(r)))
        .collect::<Vec<_>>()
        .join(",");
    format!("[{rows}]")
}

fn json_opt_bool(value: Option<bool>) -> String {
    match value {
        Some(true) => "true".into(),
        Some(false) => "false".into(),
        None => "null".into(),
    }
}

fn cmd_build(target: BuildTarget) -> Result<(String, i32), CliError> {
    let (fan, output) = match target {
        BuildTarget::Pn { dim, output } => {
            (builders::fan_projective_space(dim)?, output)
        }
        BuildTarget::P1pow { m, output } => (builders::fan_p1_power(m)?, output),
        BuildTarget::Hirzebruch { a, output } => (builders::fan_hirzebruch(a), output),
        BuildTarget::Ptangent { m, output } => {
            (builders::fan_projectivized_tangent_p1_power(m)?, output)
        }
        BuildTarget::Pbundle {
            base,
            degrees,
            output,
        } => {
            let base_fan = load_fan(&base)?;
            let degree_divisors = parse_degrees(&degrees)?;
            (
                builders::fan_projectivized_split_bundle(&base_fan, &degree_divisors)?,
                output,
            )
        }
    };
    write_file(&output, &serialize_fan(&fan))?;
    Ok((String::new(), EXIT_OK))
}

fn cmd_validate(path: &Path, machine: bool) -> Result<(String, i32), CliError> {
    let fan = fan_from_text(&read_file(path)?)?;
    let report = fan.validate();
    let mut out = String::new();
    if machine {
        let violations = report
            .violations()
            .iter()
            .map(|v| json_string(&v.to_string()))
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "{{\"valid\":{},\"violations\":[{}]}}",
            report.is_valid(),
            violations
        );
    } else {
        let _ = writeln!(out, "valid: {}", report.is_valid());
        for violation in report.violations() {
            let _ = writeln!(out, "violation: {violation}");
        }
    }
    let code = if report.is_valid() { EXIT_OK } else { EXIT_SEMANTIC };
    Ok((out, code))
}

fn cmd_analyze(path: &Path, machine: bool) -> Result<(String, i32), CliError> {
    let fan = load_fan(path)?;
    let smooth = fan.is_smooth()?;
    let complete = fan.is_complete()?;
    let canonical = divisor::canonical_divisor(&fan)?;
    let (projective, picard_rank, canonical_class) = if smooth && complete {
        let projective = fan.is_projective()?;
        let rank = divisor::picard_rank(&fan)?;
        let class = divisor::class_of(&fan, &canonical)?;
        (
            Some(projective),
            Some(rank),
            Some(class.class_vector().to_vec()),
        )
    } else {
        (None, None, None)
    };

    let mut out = String::new();
    if machine {
        let _ = writeln!(
            out,
            "{{\"rank\":{},\"rays\":{},\"max_cones\":{},\"smooth\":{},\
             \"complete\":{},\"projective\":{},\"picard_rank\":{},\
             \"canonical_divisor\":{},\"canonical_class\":{}}}",
            fan.rank(),
            fan.rays().len(),
            fan.max_cones().len(),
            smooth,
            complete,
            json_opt_bool(projective),
            picard_rank.map_or("null".into(), |r| r.to_string()),
            json_ints(canonical.coefficients()),
            canonical_class
                .as_ref()
                .map_or("null".into(), |c| json_ints(c)),
        );
    } else {
        let _ = writeln!(out, "rank: {}", fan.rank());
        let _ = writeln!(out, "rays: {}", fan.rays().len());
        let _ = writeln!(out, "max_cones: {}", fan.max_cones().len());
        let _ = writeln!(out, "smooth: {smooth}");
        let _ = writeln!(out, "complete: {complete}");
        match projective {
            Some(p) => {
                let _ = writeln!(out, "projective: {p}");
            }
            None => {
                let _ = writeln!(out, "projective: n/a");
            }
        }
        match picard_rank {
            Some(r) => {
                let _ = writeln!(out, "picard_rank: {r}");
            }
            None => {
                let _ = writeln!(out, "picard_rank: n/a");
            }
        }
        let _ = writeln!(
            out,
            "canonical_divisor: {}",
            fmt_ints(canonical.coefficients())
        );
        match canonical_class.as_ref() {
            Some(class) => {
                let _ = writeln!(out, "canonical_class: {}", fmt_ints(class));
            }
            None => {
                let _ = writeln!(out, "canonical_class: n/a");
            }
        }
    }
    Ok((out, EXIT_OK))
}

fn cmd_mori(path: &Path, machine: bool) -> Result<(String, i32), CliError> {
    let fan = load_fan(path)?;
    let walls = fan.walls()?.to_vec();
    let mut wall_classes = Vec::with_capacity(walls.len());
    for wall in &walls {
        wall_classes.push(mori::curve_class(&fan, wall)?);
    }
    let generators = mori::mori_generators(&fan)?;
    let mut generator_degrees = Vec::with_capacity(generators.len());
    for class in &generators {
        generator_degrees.push(divisor::anticanonical_degree(&fan, class)?);
    }
    let extremal = mori::extremal_rays(&fan)?;
    let mut profiles = Vec::with_capacity(extremal.len());
    for ray in &extremal {
        profiles.push(mori::contraction_profile(&fan, ray)?);
    }

    let mut out = String::new();
    if machine {
        let wall_objects = walls
            .iter()
            .zip(&wall_classes)
            .map(|(wall, class)| {
                format!(
                    "{{\"tau\":{},\"sigma\":{},\"sigma_prime\":{},\
                     \"opposite\":{},\"class\":{}}}",
                    json_indices(wall.tau().rays()),
                    wall.sigma(),
                    wall.sigma_prime(),
                    json_indices(&[wall.opposite_rays().0, wall.opposite_rays().1]),
                    json_ints(class.entries()),
                )
            })
            .collect::<Vec<_>>()
            .join(",");
        let generator_objects = generators
            .iter()
            .zip(&generator_degrees)
            .map(|(class, degree)| {
                format!(
                    "{{\"class\":{},\"degree\":{}}}",
                    json_ints(class.entries()),
                    degree
                )
            })
            .collect::<Vec<_>>()
            .join(",");
        let extremal_objects = profiles
            .iter()
            .map(|p| {
                format!(
                    "{{\"class\":{},\"length\":{},\"kind\":{},\
                     \"fiber_dim\":{},\"locus_dim\":{},\"positive\":{},\
                     \"negative\":{},\"zero\":{}}}",
                    json_ints(p.ray.entries()),
                    p.length,
                    json_string(&p.kind.to_string()),
                    p.fiber_dim,
                    p.locus_dim,
                    p.pos_rays,
                    p.neg_rays,
                    p.zero_rays,
                )
            })
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "{{\"walls\":[{wall_objects}],\"generators\":[{generator_objects}],\
             \"extremal_rays\":[{extremal_objects}]}}"
        );
    } else {
        let _ = writeln!(out, "walls: {}", walls.len());
        for (i, (wall, class)) in walls.iter().zip(&wall_classes).enumerate() {
            let _ = writeln!(
                out,
                "wall {i}: tau={} sigma={} sigma_prime={} opposite={} class={}",
                fmt_indices(wall.tau().rays()),
                wall.sigma(),
                wall.sigma_prime(),
                fmt_indices(&[wall.opposite_rays().0, wall.opposite_rays().1]),
                fmt_ints(class.entries()),
            );
        }
        let _ = writeln!(out, "generators: {}", generators.len());
        for (i, (class, degree)) in
            generators.iter().zip(&generator_degrees).enumerate()
        {
            let _ = writeln!(
                out,
                "generator {i}: class={} degree={degree}",
                fmt_ints(class.entries())
            );
        }
        let _ = writeln!(out, "extremal_rays: {}", extremal.len());
        for (i, profile) in profiles.iter().enumerate() {
            let _ = writeln!(
                out,
                "ray {i}: class={} length={} kind={} fiber_dim={} \
                 locus_dim={} positive={} negative={} zero={}",
                fmt_ints(profile.ray.entries()),
                profile.length,
                profile.kind,
                profile.fiber_dim,
                profile.locus_dim,
                profile.pos_rays,
                profile.neg_rays,
                profile.zero_rays,
            );
        }
    }
    Ok((out, EXIT_OK))
}

fn iso_check_human(out: &mut String, label: &str, check: &IsoCheck) {
    match check {
        IsoCheck::Skipped => {
            let _ = writeln!(out, "{label}_check: skipped");
        }
        IsoCheck::Refuted => {
            let _ = writeln!(out, "{label}_check: refuted");
        }
        IsoCheck::Verified(iso) => {
            let _ = writeln!(out, "{label}_check: verified");
            let _ = writeln!(out, "{label}_matrix: {}", fmt_matrix(&iso.matrix));
            let _ = writeln!(
                out,
                "{label}_permutation: {}",
                fmt_indices(&iso.ray_permutation)
            );
        }
    }
}

fn iso_check_json(check: &IsoCheck) -> String {
    match check {
        IsoCheck::Skipped => "{\"status\":\"skipped\"}".into(),
        IsoCheck::Refuted => "{\"status\":\"refuted\"}".into(),
        IsoCheck::Verified(iso) => format!(
            "{{\"status\":\"verified\",\"matrix\":{},\"permutation\":{}}}",
            json_matrix(&iso.matrix),
            json_indices(&iso.ray_permutation)
        ),
    }
}

/// Machine-readable rendering of a classification report: one JSON
/// object, byte-deterministic.
pub fn render_classification_json(report: &classify::ClassificationReport) -> String {
    let evidence = &report.evidence;
    let mut out = String::new();
    {
        let extremal_objects = evidence
            .extremal_lengths
            .iter()
            .map(|(class, length)| {
                format!(
                    "{{\"class\":{},\"length\":{}}}",
                    json_ints(class.entries()),
                    length
                )
            })
            .collect::<Vec<_>>()
            .join(",");
        let _ = writeln!(
            out,
            "{{\"verdict\":{},\"dimension\":{},\"odd_dimension\":{},\"n\":{},\
             \"anticanonical_divisible\":{},\"extremal_rays\":[{}],\
             \"projective_space_check\":{},\"tangent_bundle_check\":{}}}",
            json_string(&report.verdict.to_string()),
            evidence.dimension,
            evidence.odd_dimension,
            evidence.n.map_or("null".into(), |n| n.to_string()),
            json_opt_bool(evidence.anticanonical_divisible),
            extremal_objects,
            iso_check_json(&evidence.projective_space_check),
            iso_check_json(&evidence.tangent_bundle_check),
        );
    }
    out
}

/// Human-readable rendering of a classification report: the verdict line
/// followed by `key: value` evidence lines.
pub fn render_classification_text(report: &classify::ClassificationReport) -> String {
    let evidence = &report.evidence;
    let mut out = String::new();
    {
        let _ = writeln!(out, "{}", report.verdict);
        let _ = writeln!(out, "dimension: {}", evidence.dimension);
        let _ = writeln!(out, "odd_dimension: {}", evidence.odd_dimension);
        match evidence.n {
            Some(n) => {
                let _ = writeln!(out, "n: {n}");
            }
            None => {
                let _ = writeln!(out, "n: n/a");
            }
        }
        match evidence.anticanonical_divisible {
            Some(v) => {
                let _ = writeln!(out, "anticanonical_divisible: {v}");
            }
            None => {
                let _ = writeln!(out, "anticanonical_divisible: n/a");
            }
        }
        let _ = writeln!(out, "extremal_rays: {}", evidence.extremal_lengths.len());
        for (i, (class, length)) in evidence.extremal_lengths.iter().enumerate() {
            let _ = writeln!(
                out,
                "ray {i}: class={} length={length}",
                fmt_ints(class.entries())
            );
        }
        iso_check_human(&mut out, "projective_space", &evidence.projective_space_check);
        iso_check_human(&mut out, "tangent_bundle", &evidence.tangent_bundle_check);
    }
    out
}

fn cmd_classify(
    path: &Path,
    full_evidence: bool,
    machine: bool,
) -> Result<(String, i32), CliError> {
    let fan = load_fan(path)?;
    let report = classify::classify_contact(&fan, full_evidence)?;
    let out = if machine {
        render_classification_json(&report)
    } else {
        render_classification_text(&report)
    };
    Ok((out, EXIT_OK))
}

fn dispatch(command: Command) -> Result<(String, i32), CliError> {
    match command {
        Command::Build { target } => cmd_build(target),
        Command::Validate { file, machine } => cmd_validate(&file, machine),
        Command::Analyze { file, machine } => cmd_analyze(&file, machine),
        Command::Mori { file, machine } => cmd_mori(&file, machine),
        Command::Classify {
            file,
            full_evidence,
            machine,
        } => cmd_classify(&file, full_evidence, machine),
    }
}

/// Run the CLI against explicit argument and output streams; returns the
/// process exit code. The first argument is the program name.
pub fn run_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{err}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{err}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((output, code)) => {
            if stdout.write_all(output.as_bytes()).is_err() {
                return EXIT_IO;
            }
            code
        }
        Err(err) => {
            let _ = writeln!(stderr, "error: {}", err.message);
            err.exit_code
        }
    }
}

/// Run the CLI on the process's real streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    run_with_args(args, &mut out, &mut err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{fan_p1_power, fan_projective_space};

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut stdout: Vec<u8> = Vec::new();
        let mut stderr: Vec<u8> = Vec::new();
        let full: Vec<String> = std::iter::once("fanmori".to_string())
            .chain(args.iter().map(|s| s.to_string()))
            .collect();
        let code = run_with_args(full, &mut stdout, &mut stderr);
        (
            code,
            String::from_utf8(stdout).unwrap(),
            String::from_utf8(stderr).unwrap(),
        )
    }

    #[test]
    fn serialization_matches_reference_form() {
        let p1 = fan_projective_space(1).unwrap();
        assert_eq!(
            serialize_fan(&p1),
            "{\"rank\":1,\"rays\":[[-1],[1]],\"max_cones\":[[0],[1]]}\n"
        );
    }

    #[test]
    fn parse_then_serialize_is_canonical_identity() {
        for fan in [
            fan_projective_space(2).unwrap(),
            fan_projective_space(3).unwrap(),
            fan_p1_power(2).unwrap(),
        ] {
            let text = serialize_fan(&fan);
            let reparsed = parse_fan(&text).unwrap();
            assert_eq!(serialize_fan(&reparsed), text);
        }
    }

    #[test]
    fn permuted_input_normalizes_to_the_same_bytes() {
        let a = r#"{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#;
        let b = r#"{"rank":2,"rays":[[0,1],[-1,-1],[1,0]],"max_cones":[[2,0],[0,1],[1,2]]}"#;
        let fan_a = parse_fan(a).unwrap();
        let fan_b = parse_fan(b).unwrap();
        assert_eq!(serialize_fan(&fan_a), serialize_fan(&fan_b));
    }

    #[test]
    fn parse_rejects_malformed_json_as_syntax() {
        let err = parse_fan("{\"rank\":2,").unwrap_err();
        assert_eq!(err.exit_code, EXIT_SYNTAX);
        let err = parse_fan("{\"rank\":2}").unwrap_err();
        assert_eq!(err.exit_code, EXIT_SYNTAX);
        let err = parse_fan(
            r#"{"rank":1,"rays":[[1.5]],"max_cones":[[0]]}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code, EXIT_SYNTAX);
        assert!(err.message.contains("not an integer"), "{}", err.message);
        let err = parse_fan(
            r#"{"rank":1,"rays":[[1]],"max_cones":[[0]],"extra":1}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code, EXIT_SYNTAX);
    }

    #[test]
    fn parse_rejects_violations_as_semantic() {
        let err = parse_fan(
            r#"{"rank":2,"rays":[[2,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code, EXIT_SEMANTIC);
        assert!(
            err.message.contains("non-primitive ray 0"),
            "{}",
            err.message
        );

        let err = parse_fan(
            r#"{"rank":2,"rays":[[1,0],[0,1],[-1,-1]],"max_cones":[[0,9],[1,2],[2,0]]}"#,
        )
        .unwrap_err();
        assert_eq!(err.exit_code, EXIT_SEMANTIC);
        assert!(err.message.contains("out of range"), "{}", err.message);
    }

    #[test]
    fn build_and_classify_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p3.fan");
        let path_str = path.to_str().unwrap();

        let (code, out, err) = run_capture(&["build", "pn", "--dim", "3", "-o", path_str]);
        assert_eq!((code, out.as_str(), err.as_str()), (0, "", ""));

        let (code, out, _) = run_capture(&["validate", path_str]);
        assert_eq!(code, 0);
        assert_eq!(out, "valid: true\n");

        let (code, out, _) = run_capture(&["classify", path_str]);
        assert_eq!(code, 0);
        assert!(out.starts_with("CONTACT: P^3\n"), "{out}");

        let (code, out, _) = run_capture(&["classify", path_str, "--machine"]);
        assert_eq!(code, 0);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["verdict"], "CONTACT: P^3");
        assert_eq!(value["dimension"], 3);
    }

    #[test]
    fn analyze_reports_flags_and_rank() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f1.fan");
        let path_str = path.to_str().unwrap();
        let (code, _, _) = run_capture(&["build", "hirzebruch", "--a", "1", "-o", path_str]);
        assert_eq!(code, 0);

        let (code, out, _) = run_capture(&["analyze", path_str]);
        assert_eq!(code, 0);
        assert!(out.contains("smooth: true"), "{out}");
        assert!(out.contains("complete: true"), "{out}");
        assert!(out.contains("projective: true"), "{out}");
        assert!(out.contains("picard_rank: 2"), "{out}");

        let (code, out, _) = run_capture(&["analyze", path_str, "--machine"]);
        assert_eq!(code, 0);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["picard_rank"], 2);
        assert_eq!(value["smooth"], true);
    }

    #[test]
    fn mori_lists_walls_generators_and_rays() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p2.fan");
        let path_str = path.to_str().unwrap();
        let (code, _, _) = run_capture(&["build", "pn", "--dim", "2", "-o", path_str]);
        assert_eq!(code, 0);

        let (code, out, _) = run_capture(&["mori", path_str]);
        assert_eq!(code, 0);
        assert!(out.starts_with("walls: 3\n"), "{out}");
        assert!(out.contains("generators: 1\n"), "{out}");
        assert!(
            out.contains("ray 0: class=[1, 1, 1] length=3 kind=fibration"),
            "{out}"
        );

        let (code, out, _) = run_capture(&["mori", path_str, "--machine"]);
        assert_eq!(code, 0);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["walls"].as_array().unwrap().len(), 3);
        assert_eq!(value["extremal_rays"][0]["length"], 3);
    }

    #[test]
    fn invalid_fan_file_fails_validate_with_exit_3() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.fan");
        fs::write(
            &path,
            r#"{"rank":2,"rays":[[2,0],[0,1],[-1,-1]],"max_cones":[[0,1],[1,2],[2,0]]}"#,
        )
        .unwrap();
        let (code, out, _) = run_capture(&["validate", path.to_str().unwrap()]);
        assert_eq!(code, 3);
        assert!(out.starts_with("valid: false\n"), "{out}");
        assert!(out.contains("violation: non-primitive ray 0"), "{out}");

        let (code, out, _) =
            run_capture(&["validate", path.to_str().unwrap(), "--machine"]);
        assert_eq!(code, 3);
        let value: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(value["valid"], false);
    }

    #[test]
    fn exit_codes_for_usage_syntax_semantic_and_io() {
        let (code, _, err) = run_capture(&["--definitely-not-a-flag"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(!err.is_empty());

        let (code, _, err) = run_capture(&["analyze", "/nonexistent/fan/file"]);
        assert_eq!(code, EXIT_IO);
        assert!(err.contains("error:"), "{err}");

        let dir = tempfile::tempdir().unwrap();
        let garbled = dir.path().join("garbled.fan");
        fs::write(&garbled, "not json at all").unwrap();
        let (code, _, err) = run_capture(&["analyze", garbled.to_str().unwrap()]);
        assert_eq!(code, EXIT_SYNTAX);
        assert!(err.contains("error:"), "{err}");

        let incomplete = dir.path().join("incomplete.fan");
        fs::write(
            &incomplete,
            r#"{"rank":2,"rays":[[1,0],[0,1]],"max_cones":[[0,1]]}"#,
        )
        .unwrap();
        let (code, _, err) = run_capture(&["mori", incomplete.to_str().unwrap()]);
        assert_eq!(code, EXIT_SEMANTIC);
        assert!(err.contains("not complete"), "{err}");
    }

    #[test]
    fn build_pbundle_from_base_file() {
        let dir = tempfile::tempdir().unwrap();
        let base = dir.path().join("p1.fan");
        let out_path = dir.path().join("bundle.fan");
        let (code, _, _) =
            run_capture(&["build", "p1pow", "--m", "1", "-o", base.to_str().unwrap()]);
        assert_eq!(code, 0);

        let (code, _, err) = run_capture(&[
            "build",
            "pbundle",
            "--base",
            base.to_str().unwrap(),
            "--degrees",
            "0,0;0,2",
            "-o",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        let bundle = parse_fan(&fs::read_to_string(&out_path).unwrap()).unwrap();
        assert_eq!(bundle.rank(), 2);
        assert_eq!(bundle.rays().len(), 4);

        // Degrees that are not normalized are a semantic error.
        let (code, _, err) = run_capture(&[
            "build",
            "pbundle",
            "--base",
            base.to_str().unwrap(),
            "--degrees",
            "1,0;0,2",
            "-o",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_SEMANTIC);
        assert!(err.contains("zero divisor"), "{err}");

        // Malformed degree literals are a usage error.
        let (code, _, _) = run_capture(&[
            "build",
            "pbundle",
            "--base",
            base.to_str().unwrap(),
            "--degrees",
            "0,x;0,2",
            "-o",
            out_path.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_USAGE);
    }

    #[test]
    fn outputs_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cube.fan");
        let path_str = path.to_str().unwrap();
        let (code, _, _) = run_capture(&["build", "p1pow", "--m", "3", "-o", path_str]);
        assert_eq!(code, 0);
        let first = run_capture(&["classify", path_str, "--full-evidence"]);
        let second = run_capture(&["classify", path_str, "--full-evidence"]);
        assert_eq!(first, second);
        assert!(first.1.starts_with("NOT-CONTACT\n"), "{}", first.1);
    }

    #[test]
    fn help_exits_zero_and_prints_subcommands() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        for name in ["build", "validate", "analyze", "mori", "classify"] {
            assert!(out.contains(name), "missing {name} in {out}");
        }
    }

    #[test]
    fn build_rejects_bad_arguments_semantically() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.fan");
        let (code, _, err) =
            run_capture(&["build", "pn", "--dim", "0", "-o", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_SEMANTIC);
        assert!(err.contains("error:"), "{err}");

        let (code, _, _) =
            run_capture(&["build", "ptangent", "--m", "1", "-o", path.to_str().unwrap()]);
        assert_eq!(code, EXIT_SEMANTIC);
    }
}
