//! Command-line front end. One verb per invocation; every number is an exact
//! `p/q` unless `--float` asks for decimal renderings as well. Reports go to
//! standard output (redirect to write files); warnings and errors go to
//! standard error. Exit codes: 0 success, 1 domain errors in the data,
//! 2 usage errors.

use std::io::{BufRead, Write};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::families::{self, FamilySpec, GridAxis, MinimizeOptions};
use crate::invariants::{self, ActionReport};
use crate::io::{read_polygon, write_polygon};
use crate::measures::PolygonMeasures;
use crate::polygon::{self, MomentPolygon};
use crate::rational::Rational;

#[derive(Parser)]
#[command(
    name = "delzant",
    version,
    about = "Exact invariants of Delzant moment polygons",
    color = clap::ColorChoice::Never,
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Seed for sampling-based verification paths (exact outputs never
    /// depend on it).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

/// Trailing polygon input: empty reads the text format from stdin, `file
/// <path>` reads it from a file, and `cp2 <a>`, `p1xp1 <a> <b>`,
/// `hirzebruch <k> <alpha>`, `twopoint <alpha> <beta>` generate in place.
#[derive(Args)]
struct InputArgs {
    spec: Vec<String>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Emit a CSV header and row instead of the text report.
    #[arg(long)]
    csv: bool,
    /// Additionally render decimal values.
    #[arg(long)]
    float: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check convexity and the Delzant corner condition
    Validate(InputArgs),
    /// Area, perimeter, barycenters, displacement, inertia matrix
    Measure(ReportArgs),
    /// Full invariant report: Futaki vector, virtual action, energy bounds
    Action(ReportArgs),
    /// Futaki vector and its norm
    Futaki(ReportArgs),
    /// Euler characteristic, signature and c1^2 (Delzant polygons only)
    Topology(ReportArgs),
    /// Write a polygon in the text format
    Gen(InputArgs),
    /// Chop the corner at VERTEX with lattice size EPS
    Blowup {
        vertex: usize,
        eps: String,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Exact action of a family on a parameter grid, as CSV
    Scan {
        /// Family: `hirzebruch <k>`, `twopoint`, or `symtwopoint`
        family: Vec<String>,
        /// Per-parameter grid `lo:hi:steps[,lo:hi:steps]` with rational bounds
        #[arg(long)]
        grid: String,
    },
    /// Locate a critical class of the action over a family
    Minimize {
        /// Family: `hirzebruch <k>`, `twopoint`, or `symtwopoint`
        family: Vec<String>,
        /// Per-parameter bracket `lo:hi[,lo:hi]` with rational bounds
        #[arg(long)]
        grid: Option<String>,
        /// Parameter tolerance of the search
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Emit a CSV header and row instead of the text report.
        #[arg(long)]
        csv: bool,
    },
}

/// Runs the CLI against explicit streams; returns the process exit code.
pub fn run(
    args: &[String],
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                2
            } else {
                let _ = write!(stdout, "{e}");
                0
            };
        }
    };
    match dispatch(cli, stdin, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// A parsed inline spec: either a concrete polygon or a parametrized family.
pub enum GenSpec {
    Polygon(MomentPolygon),
    Family(FamilySpec),
}

/// Parses the generator grammar shared by all verbs. Polygon forms:
/// `cp2 <a>`, `p1xp1 <a> <b>`, `hirzebruch <k> <alpha>`,
/// `twopoint <alpha> <beta>`, `file <path>`. Family forms (parameters left
/// free): `hirzebruch <k>`, `twopoint`, `symtwopoint`.
pub fn parse_generator_spec(words: &[String]) -> Result<GenSpec, Error> {
    let rational = |s: &String| {
        Rational::from_str(s).map_err(|_| Error::Usage(format!("malformed rational `{s}`")))
    };
    let arity = |name: &str, want: &str| {
        Error::Usage(format!("generator `{name}` takes {want}"))
    };
    match words {
        [] => Err(Error::Usage("empty generator spec".into())),
        [name, rest @ ..] => match (name.as_str(), rest) {
            ("cp2", [a]) => Ok(GenSpec::Polygon(polygon::gen_cp2(&rational(a)?)?)),
            ("cp2", _) => Err(arity("cp2", "one rational parameter")),
            ("p1xp1", [a, b]) => {
                Ok(GenSpec::Polygon(polygon::gen_p1xp1(&rational(a)?, &rational(b)?)?))
            }
            ("p1xp1", _) => Err(arity("p1xp1", "two rational parameters")),
            ("hirzebruch", [k, alpha]) => {
                let k = parse_k(k)?;
                Ok(GenSpec::Polygon(polygon::gen_hirzebruch(k, &rational(alpha)?)?))
            }
            ("hirzebruch", [k]) => Ok(GenSpec::Family(FamilySpec::hirzebruch(parse_k(k)?))),
            ("hirzebruch", _) => {
                Err(arity("hirzebruch", "an integer k plus an optional rational alpha"))
            }
            ("twopoint", [a, b]) => {
                Ok(GenSpec::Polygon(polygon::gen_two_point_blowup(&rational(a)?, &rational(b)?)?))
            }
            ("twopoint", []) => Ok(GenSpec::Family(FamilySpec::two_point())),
            ("twopoint", _) => Err(arity("twopoint", "two rational parameters, or none")),
            ("symtwopoint", []) => Ok(GenSpec::Family(FamilySpec::symmetric_two_point())),
            ("symtwopoint", _) => Err(arity("symtwopoint", "no parameters")),
            ("file", [path]) => {
                let text = std::fs::read_to_string(path)?;
                Ok(GenSpec::Polygon(read_polygon(&text)?))
            }
            ("file", _) => Err(arity("file", "one path")),
            (other, _) => Err(Error::UnknownGenerator(other.to_string())),
        },
    }
}

fn parse_k(s: &String) -> Result<u32, Error> {
    s.parse::<u32>()
        .map_err(|_| Error::Usage(format!("k must be a nonnegative integer, got `{s}`")))
}

fn resolve_polygon(spec: &[String], stdin: &mut dyn BufRead) -> Result<MomentPolygon, Error> {
    if spec.is_empty() {
        let mut text = String::new();
        stdin.read_to_string(&mut text)?;
        return read_polygon(&text);
    }
    match parse_generator_spec(spec)? {
        GenSpec::Polygon(p) => Ok(p),
        GenSpec::Family(f) => Err(Error::Usage(format!(
            "`{}` is a family; this command needs a polygon (add parameter values)",
            f.describe()
        ))),
    }
}

fn resolve_family(spec: &[String]) -> Result<FamilySpec, Error> {
    if spec.is_empty() {
        return Err(Error::Usage(
            "expected a family: `hirzebruch <k>`, `twopoint`, or `symtwopoint`".into(),
        ));
    }
    match parse_generator_spec(spec)? {
        GenSpec::Family(f) => Ok(f),
        GenSpec::Polygon(_) => Err(Error::Usage(
            "this command needs a family, not a single polygon (drop the parameter values)"
                .into(),
        )),
    }
}

fn warn_if_not_delzant(p: &MomentPolygon, stderr: &mut dyn Write) -> Result<(), Error> {
    if let Some(v) = p.delzant_violations().first() {
        writeln!(
            stderr,
            "warning: polygon is not Delzant at vertex {} {}: |corner determinant| = {} (want 1); topological invariants omitted",
            v.index,
            v.vertex,
            v.det.magnitude()
        )?;
    }
    Ok(())
}

fn float_suffix(enabled: bool, value: f64) -> String {
    if enabled {
        format!(" ({value})")
    } else {
        String::new()
    }
}

fn dispatch(
    cli: Cli,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), Error> {
    let _ = cli.seed; // reserved for sampling-based verification paths
    match cli.command {
        Cmd::Validate(input) => {
            let p = resolve_polygon(&input.spec, stdin)?;
            writeln!(stdout, "vertices = {}", p.vertex_count())?;
            let violations = p.delzant_violations();
            if violations.is_empty() {
                writeln!(stdout, "delzant = yes")?;
            } else {
                writeln!(stdout, "delzant = no")?;
                for v in &violations {
                    writeln!(
                        stdout,
                        "vertex {} {}: |corner determinant| = {} (want 1)",
                        v.index,
                        v.vertex,
                        v.det.magnitude()
                    )?;
                }
                let v = &violations[0];
                return Err(Error::NotDelzant {
                    index: v.index,
                    vertex: v.vertex.to_string(),
                    det: v.det.to_string(),
                });
            }
        }
        Cmd::Measure(args) => {
            let p = resolve_polygon(&args.input.spec, stdin)?;
            let m = PolygonMeasures::compute(&p);
            if args.csv {
                writeln!(stdout, "{}", PolygonMeasures::csv_header())?;
                writeln!(stdout, "{}", m.csv_row())?;
            } else {
                let f = args.float;
                writeln!(stdout, "area = {}{}", m.area, float_suffix(f, m.area.to_f64()))?;
                writeln!(
                    stdout,
                    "perimeter = {}{}",
                    m.lambda_perimeter,
                    float_suffix(f, m.lambda_perimeter.to_f64())
                )?;
                writeln!(stdout, "interior_barycenter = {}", m.interior_barycenter)?;
                writeln!(stdout, "boundary_barycenter = {}", m.boundary_barycenter)?;
                writeln!(stdout, "displacement = {}", m.displacement)?;
                writeln!(stdout, "inertia = {}", m.inertia)?;
            }
        }
        Cmd::Action(args) => {
            let p = resolve_polygon(&args.input.spec, stdin)?;
            warn_if_not_delzant(&p, stderr)?;
            let report = ActionReport::compute(&p);
            if args.csv {
                writeln!(stdout, "{}", ActionReport::csv_header(args.float))?;
                writeln!(stdout, "{}", report.csv_row(args.float))?;
            } else {
                let f = args.float;
                writeln!(stdout, "perimeter = {}", report.measures.lambda_perimeter)?;
                writeln!(stdout, "area = {}", report.measures.area)?;
                writeln!(stdout, "c1_dot_omega = {}", report.chern_pairing)?;
                writeln!(stdout, "omega_sq = {}", report.volume_pairing)?;
                writeln!(stdout, "displacement = {}", report.measures.displacement)?;
                writeln!(stdout, "quad_form = {}", report.quad_form)?;
                writeln!(stdout, "futaki = ({}, {})", report.futaki.0, report.futaki.1)?;
                writeln!(
                    stdout,
                    "futaki_norm_sq = {}{}",
                    report.futaki_norm_sq,
                    float_suffix(f, report.futaki_norm_sq.to_f64())
                )?;
                writeln!(
                    stdout,
                    "action = {}{}",
                    report.virtual_action,
                    float_suffix(f, report.virtual_action.to_f64())
                )?;
                writeln!(
                    stdout,
                    "calabi_bound = {}{}",
                    report.calabi_bound,
                    float_suffix(f, report.calabi_bound.to_f64())
                )?;
                if let Some(t) = report.topology {
                    writeln!(stdout, "euler = {}", t.euler)?;
                    writeln!(stdout, "signature = {}", t.signature)?;
                    let weyl = report.weyl_bound.as_ref().expect("present when Delzant");
                    let riem = report.riemann_bound.as_ref().expect("present when Delzant");
                    let ricci = report.ricci_bound.as_ref().expect("present when Delzant");
                    writeln!(stdout, "weyl_bound = {}{}", weyl, float_suffix(f, weyl.to_f64()))?;
                    writeln!(stdout, "riemann_bound = {riem}")?;
                    writeln!(stdout, "ricci_bound = {ricci}")?;
                }
            }
        }
        Cmd::Futaki(args) => {
            let p = resolve_polygon(&args.input.spec, stdin)?;
            warn_if_not_delzant(&p, stderr)?;
            let (f1, f2) = invariants::futaki_vector(&p);
            let norm = invariants::futaki_norm_sq(&p);
            if args.csv {
                writeln!(stdout, "futaki1_coeff,futaki2_coeff,norm_sq_coeff")?;
                writeln!(
                    stdout,
                    "{},{},{}",
                    f1.coefficient(),
                    f2.coefficient(),
                    norm.coefficient()
                )?;
            } else {
                writeln!(stdout, "futaki = ({f1}, {f2})")?;
                writeln!(
                    stdout,
                    "futaki_norm_sq = {}{}",
                    norm,
                    float_suffix(args.float, norm.to_f64())
                )?;
            }
        }
        Cmd::Topology(args) => {
            let p = resolve_polygon(&args.input.spec, stdin)?;
            let t = invariants::topology(&p)?;
            if args.csv {
                writeln!(stdout, "euler,signature,b2,c1_squared")?;
                writeln!(stdout, "{},{},{},{}", t.euler, t.signature, t.b2, t.c1_squared())?;
            } else {
                writeln!(stdout, "euler = {}", t.euler)?;
                writeln!(stdout, "signature = {}", t.signature)?;
                writeln!(stdout, "b2 = {}", t.b2)?;
                writeln!(stdout, "c1_squared = {}", t.c1_squared())?;
            }
        }
        Cmd::Gen(input) => {
            // With no spec this reads stdin, i.e. re-emits a polygon in
            // canonical form; generated output round-trips byte-identically.
            let p = resolve_polygon(&input.spec, stdin)?;
            write!(stdout, "{}", write_polygon(&p))?;
        }
        Cmd::Blowup { vertex, eps, input } => {
            let eps = Rational::from_str(&eps)
                .map_err(|_| Error::Usage(format!("malformed rational `{eps}`")))?;
            let p = resolve_polygon(&input.spec, stdin)?;
            let q = p.blow_up(vertex, &eps)?;
            write!(stdout, "{}", write_polygon(&q))?;
        }
        Cmd::Scan { family, grid } => {
            let family = resolve_family(&family)?;
            let axes = parse_grid(&grid, family.dimension(), true)?;
            let rows = scan_pool()?.install(|| families::scan(&family, &axes))?;
            let names = family.param_names();
            writeln!(stdout, "{},action,action_float", names.join(","))?;
            for row in rows {
                let params =
                    row.params.iter().map(Rational::to_string).collect::<Vec<_>>().join(",");
                writeln!(stdout, "{},{},{}", params, row.action, row.action.to_f64())?;
            }
        }
        Cmd::Minimize { family, grid, tol, csv } => {
            let family = resolve_family(&family)?;
            let brackets: Vec<(f64, f64)> = match grid {
                Some(g) => parse_grid(&g, family.dimension(), false)?
                    .iter()
                    .map(|a| (a.lo.to_f64(), a.hi.to_f64()))
                    .collect(),
                None => vec![(1e-3, 100.0); family.dimension()],
            };
            let opts = MinimizeOptions { param_tol: tol, ..Default::default() };
            let out = families::minimize(&family, &brackets, opts)?;
            let names = family.param_names();
            if csv {
                let witness_names =
                    names.iter().map(|n| format!("{n}_witness")).collect::<Vec<_>>();
                writeln!(
                    stdout,
                    "{},{},action_float,action_witness,gradient_norm,classification",
                    names.join(","),
                    witness_names.join(",")
                )?;
                let params =
                    out.params.iter().map(f64::to_string).collect::<Vec<_>>().join(",");
                let witness =
                    out.witness.iter().map(Rational::to_string).collect::<Vec<_>>().join(",");
                writeln!(
                    stdout,
                    "{},{},{},{},{},{}",
                    params,
                    witness,
                    out.action_value,
                    out.action_at_witness,
                    out.gradient_norm,
                    out.classification
                )?;
            } else {
                writeln!(stdout, "family = {}", family.describe())?;
                writeln!(stdout, "classification = {}", out.classification)?;
                for ((name, value), witness) in
                    names.iter().zip(&out.params).zip(&out.witness)
                {
                    writeln!(stdout, "{name} = {value}")?;
                    writeln!(stdout, "{name}_witness = {witness}")?;
                }
                writeln!(stdout, "action = {}", out.action_value)?;
                writeln!(stdout, "action_at_witness = {}", out.action_at_witness)?;
                writeln!(stdout, "gradient_norm = {}", out.gradient_norm)?;
            }
        }
    }
    Ok(())
}

/// Parses `lo:hi:steps[,lo:hi:steps]` (steps required iff `with_steps`).
fn parse_grid(text: &str, dimension: usize, with_steps: bool) -> Result<Vec<GridAxis>, Error> {
    let bad = |msg: String| Error::Usage(msg);
    let axes: Vec<GridAxis> = text
        .split(',')
        .map(|axis| {
            let parts: Vec<&str> = axis.split(':').collect();
            let rational = |s: &str| {
                Rational::from_str(s)
                    .map_err(|_| bad(format!("malformed rational `{s}` in grid `{text}`")))
            };
            match (parts.as_slice(), with_steps) {
                ([lo, hi, steps], true) => {
                    let steps = steps.parse::<usize>().map_err(|_| {
                        bad(format!("malformed step count `{steps}` in grid `{text}`"))
                    })?;
                    Ok(GridAxis { lo: rational(lo)?, hi: rational(hi)?, steps })
                }
                ([lo, hi], false) | ([lo, hi, _], false) => {
                    Ok(GridAxis { lo: rational(lo)?, hi: rational(hi)?, steps: 2 })
                }
                _ => Err(bad(format!(
                    "grid axis `{axis}` must be lo:hi{}",
                    if with_steps { ":steps" } else { "" }
                ))),
            }
        })
        .collect::<Result<_, _>>()?;
    if axes.len() != dimension {
        return Err(bad(format!(
            "family has {dimension} parameter(s), grid has {} axis(es)",
            axes.len()
        )));
    }
    for a in &axes {
        if a.hi < a.lo {
            return Err(bad(format!("grid axis has hi {} < lo {}", a.hi, a.lo)));
        }
    }
    Ok(axes)
}

/// Thread pool for scans, capped by `DELZANT_THREADS` when set.
fn scan_pool() -> Result<rayon::ThreadPool, Error> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var("DELZANT_THREADS") {
        let n: usize = raw
            .parse()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| Error::Usage(format!("DELZANT_THREADS must be a positive integer, got `{raw}`")))?;
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot build thread pool: {e}")))
}
