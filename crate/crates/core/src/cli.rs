//! Command-line front end shared by the binary and the integration tests.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::annulus::{approximate_laurent, approximate_polynomial_on_annulus};
use crate::circle::approximate_on_circle_fn;
use crate::counterexamples::{
    area_mean_iterated, boundary_pole_function, inner_circle_integral, mean_value_pv, re_identity_deviation,
    sup_bound_counterexample, sup_bound_expected, Check, CounterexampleReport,
};
use crate::disc::{approximate_poly_on, approximate_single_pole, ApproxResult};
use crate::error::ApproxError;
use crate::func::{classify_membership, DomainSpec, FunctionSpec};
use crate::mergelyan::{approximate_on_arc_fn, approximate_on_starlike, approximate_on_union_fn};
use crate::report::{error_svg, profile_csv, summary, ResultDocument, SCHEMA_VERSION};
use crate::sphere::ExtendedComplex;
use crate::sup::{sup_chordal, GridSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_APPROX_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "chordal-approx", version, about = "Uniform approximation in the chordal metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate a target on a domain and write result.json and profile.csv
    Approximate(ApproximateArgs),
    /// Re-check a stored result on a fresh grid
    Verify(VerifyArgs),
    /// Run one of the built-in counterexamples
    Counterexample(CounterexampleArgs),
    /// Summarise a stored result, optionally regenerating CSV and SVG
    Report(ReportArgs),
}

#[derive(clap::Args, Debug)]
struct ApproximateArgs {
    /// FunctionSpec as inline JSON or @path
    #[arg(long)]
    target: String,
    /// DomainSpec as inline JSON or @path
    #[arg(long)]
    domain: String,
    #[arg(long)]
    eps: f64,
    /// Construction grid as RADIALxANGULAR
    #[arg(long, default_value = "64x256")]
    grid: String,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write error.svg
    #[arg(long)]
    svg: bool,
    /// Seed for the grid phase (0 keeps the canonical grid)
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Family::Auto)]
    family: Family,
    /// Prescribed pole for --family pole-rational, as [re, im]
    #[arg(long)]
    pole: Option<String>,
    /// Sample count for circles and arcs
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    Auto,
    Polynomial,
    Laurent,
    PoleRational,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Auto => "auto",
            Family::Polynomial => "polynomial",
            Family::Laurent => "laurent",
            Family::PoleRational => "pole-rational",
        }
    }
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    /// result.json written by approximate
    #[arg(long)]
    result: PathBuf,
    /// Target to check against (defaults to the one stored in the result)
    #[arg(long)]
    target: Option<String>,
    /// Seed for the random grid phase
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Verify on a grid one refinement finer than the stored one
    #[arg(long)]
    finer: bool,
    /// Override the verification grid as RADIALxANGULAR
    #[arg(long)]
    grid: Option<String>,
}

#[derive(clap::Args, Debug)]
struct CounterexampleArgs {
    #[arg(value_enum)]
    name: CounterexampleName,
    #[arg(long, default_value_t = 100)]
    n: u32,
    #[arg(long, default_value_t = 0.5)]
    r: f64,
    #[arg(long, default_value_t = 4096)]
    quad_points: usize,
    #[arg(long, default_value_t = 256)]
    radial_points: usize,
    /// Unimodular poles for boundary-poles, as a JSON list of [re, im]
    #[arg(long)]
    poles: Option<String>,
    /// Multiplicities for boundary-poles, as a JSON list
    #[arg(long)]
    multiplicities: Option<String>,
    /// Seed for the random angles of the identity check
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write report.json into this directory
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CounterexampleName {
    SupBound,
    MeanValuePv,
    AreaMean,
    BoundaryPoles,
}

#[derive(clap::Args, Debug)]
struct ReportArgs {
    #[arg(long)]
    result: PathBuf,
    /// Directory for profile.csv (and error.svg with --svg)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: bool,
}

struct Failure {
    code: i32,
    kind: String,
    message: String,
}

impl From<ApproxError> for Failure {
    fn from(e: ApproxError) -> Self {
        let code = if e.is_validation() { EXIT_INVALID } else { EXIT_APPROX_FAILED };
        Failure { code, kind: e.kind().into(), message: e.to_string() }
    }
}

fn invalid(kind: &str, message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, kind: kind.into(), message: message.into() }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure { code: EXIT_APPROX_FAILED, kind: "io".into(), message: format!("{}: {e}", path.display()) }
}

fn error_json(f: &Failure) -> String {
    json!({"v": SCHEMA_VERSION, "error": {"kind": f.kind, "message": f.message, "exit_code": f.code}}).to_string()
}

/// Runs the CLI and returns `(exit code, stdout, stderr)`.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string(), String::new()),
                _ => (EXIT_INVALID, String::new(), error_json(&invalid("usage", e.to_string()))),
            };
        }
    };
    let outcome = match cli.command {
        Command::Approximate(a) => cmd_approximate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Counterexample(a) => cmd_counterexample(a),
        Command::Report(a) => cmd_report(a),
    };
    match outcome {
        Ok((code, out)) => (code, out, String::new()),
        Err(f) => (f.code, String::new(), error_json(&f)),
    }
}

fn read_arg(s: &str) -> Result<String, Failure> {
    match s.strip_prefix('@') {
        Some(path) => fs::read_to_string(path).map_err(|e| invalid("io", format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_str(&read_arg(s)?).map_err(|e| invalid("invalid_json", format!("{what}: {e}")))
}

fn parse_grid(s: &str) -> Result<GridSpec, Failure> {
    let bad = || invalid("invalid_input", format!("grid must look like 64x256, got {s:?}"));
    let (r, a) = s.split_once('x').ok_or_else(bad)?;
    let grid = GridSpec::new(r.trim().parse().map_err(|_| bad())?, a.trim().parse().map_err(|_| bad())?);
    grid.validate()?;
    Ok(grid)
}

/// Grid phase in `[0, 1)` drawn from the seed; seed 0 is the canonical grid.
fn seeded_phase(seed: u64) -> f64 {
    if seed == 0 {
        0.0
    } else {
        ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..1.0)
    }
}

fn timestamp() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| io_failure(path, e))
}

fn dispatch(a: &ApproximateArgs, f: &FunctionSpec, d: &DomainSpec, grid: &GridSpec) -> Result<ApproxResult, Failure> {
    let unit_disc = DomainSpec::unit_disc();
    let res = match (d, a.family) {
        (DomainSpec::ClosedDisc { .. }, Family::PoleRational) => {
            if *d != unit_disc {
                return Err(invalid("invalid_input", "pole-rational approximation is defined on the closed unit disc"));
            }
            let pole = a.pole.as_deref().ok_or_else(|| invalid("invalid_input", "--family pole-rational needs --pole"))?;
            let w: Complex64 = parse_json::<ExtendedComplex>("pole", pole)?
                .finite()
                .ok_or_else(|| invalid("invalid_input", "the prescribed pole must be finite"))?;
            approximate_single_pole(f, w, a.eps, grid)?
        }
        (DomainSpec::ClosedDisc { .. }, Family::Auto | Family::Polynomial) => approximate_poly_on(f, d, a.eps, grid)?,
        (DomainSpec::ClosedAnnulus { .. }, Family::Auto | Family::Laurent) => approximate_laurent(f, d, a.eps, grid)?,
        (DomainSpec::ClosedAnnulus { .. }, Family::Polynomial) => approximate_polynomial_on_annulus(f, d, a.eps, grid)?,
        (DomainSpec::Circle { .. }, Family::Auto | Family::Laurent) => {
            approximate_on_circle_fn(f, d, a.eps, a.samples.unwrap_or(1024))?
        }
        (DomainSpec::StarlikeCompact { .. }, Family::Auto | Family::Polynomial) => approximate_on_starlike(d, f, a.eps, grid)?,
        (DomainSpec::Arc { .. }, Family::Auto | Family::Polynomial) => {
            approximate_on_arc_fn(f, d, a.eps, a.samples.unwrap_or(257))?
        }
        (DomainSpec::DisjointUnion(_), Family::Auto | Family::Polynomial) => approximate_on_union_fn(f, d, a.eps, grid)?,
        (_, family) => {
            return Err(invalid("invalid_input", format!("family {} is not available on this domain", family.name())))
        }
    };
    Ok(res)
}

fn cmd_approximate(a: ApproximateArgs) -> Result<(i32, String), Failure> {
    let target: FunctionSpec = parse_json("target", &a.target)?;
    let domain: DomainSpec = parse_json("domain", &a.domain)?;
    target.validate()?;
    domain.validate()?;
    let grid = parse_grid(&a.grid)?.with_phase(seeded_phase(a.seed));
    let result = dispatch(&a, &target, &domain, &grid)?;
    let verification = result.achieved_error.grid_used;
    let doc = ResultDocument {
        v: SCHEMA_VERSION,
        target: target.clone(),
        domain: domain.clone(),
        eps: a.eps,
        family: a.family.name().into(),
        construction_grid: grid,
        result,
        timestamp: timestamp(),
    };
    fs::create_dir_all(&a.out).map_err(|e| io_failure(&a.out, e))?;
    let json = doc.to_json();
    write_file(&a.out.join("result.json"), &json)?;
    write_file(&a.out.join("profile.csv"), &profile_csv(&target, &doc.result.approximant, &domain, &verification))?;
    if a.svg {
        write_file(&a.out.join("error.svg"), &error_svg(&target, &doc.result.approximant, &domain, &grid))?;
    }
    Ok((EXIT_OK, json + "\n"))
}

fn load_result(path: &Path) -> Result<ResultDocument, Failure> {
    let text = fs::read_to_string(path).map_err(|e| invalid("io", format!("{}: {e}", path.display())))?;
    let doc = ResultDocument::from_json(&text).map_err(|e| invalid("invalid_json", format!("{}: {e}", path.display())))?;
    if doc.v != SCHEMA_VERSION {
        return Err(invalid("invalid_input", format!("unsupported schema version {}", doc.v)));
    }
    Ok(doc)
}

fn cmd_verify(a: VerifyArgs) -> Result<(i32, String), Failure> {
    let doc = load_result(&a.result)?;
    let target = match &a.target {
        Some(t) => parse_json("target", t)?,
        None => doc.target.clone(),
    };
    let mut grid = match &a.grid {
        Some(g) => parse_grid(g)?,
        None => doc.result.achieved_error.grid_used,
    };
    if a.finer {
        grid = grid.finer();
    }
    let grid = grid.with_phase(seeded_phase(a.seed));
    let est = sup_chordal(&target, &doc.result.approximant, &doc.domain, &grid);
    let pass = est.value < doc.eps;
    let out = json!({
        "v": SCHEMA_VERSION,
        "achieved_error": est,
        "eps": doc.eps,
        "pass": pass,
    });
    let code = if pass { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok((code, serde_json::to_string_pretty(&out).expect("serializable") + "\n"))
}

fn random_angles(seed: u64, count: usize, margin: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(margin..std::f64::consts::TAU - margin)).collect()
}

fn cmd_counterexample(a: CounterexampleArgs) -> Result<(i32, String), Failure> {
    let report = match a.name {
        CounterexampleName::SupBound => {
            let got = sup_bound_counterexample(a.n, a.r)?;
            let want = sup_bound_expected(a.n, a.r);
            CounterexampleReport::new(
                "sup-bound",
                vec![
                    Check::new("annulus_sup", got.annulus_sup, want.annulus_sup, 1e-12),
                    Check::new("global_sup", got.global_sup, want.global_sup, 1e-12),
                ],
                format!(
                    "f_n(z) = {}z against the constant infinity: the ratio global/annulus is {:.4}, unbounded in n",
                    a.n,
                    got.global_sup / got.annulus_sup
                ),
            )
        }
        CounterexampleName::MeanValuePv => {
            let pv = mean_value_pv(a.quad_points)?;
            let angles = random_angles(a.seed, 10_000, 1e-3);
            CounterexampleReport::new(
                "mean-value-pv",
                vec![
                    Check::new("pv_mean", pv.value, -0.5, 1e-6),
                    Check::new("pv_mean_imag", pv.imag, 0.0, 1e-8),
                    Check::new("re_identity_deviation", re_identity_deviation(&angles), 0.0, 1e-12),
                    Check::new("f_at_zero", pv.f_at_zero, -1.0, 0.0),
                ],
                "the principal-value boundary mean of 1/(z-1) differs from its value at 0".into(),
            )
        }
        CounterexampleName::AreaMean => {
            let am = area_mean_iterated(a.radial_points)?;
            let tau = std::f64::consts::TAU;
            CounterexampleReport::new(
                "area-mean",
                vec![
                    Check::new("area_mean", am.value, 1.0, 1e-4),
                    Check::new("inner_integral_r_0.5", inner_circle_integral(0.5).re, tau, 1e-10),
                    Check::new("inner_integral_r_0.99", inner_circle_integral(0.99).re, tau, 1e-6),
                ],
                "1/(z-1)^2 is not integrable on the disc, yet its iterated area mean equals f(0)".into(),
            )
        }
        CounterexampleName::BoundaryPoles => {
            let poles: Vec<ExtendedComplex> = match &a.poles {
                Some(p) => parse_json("poles", p)?,
                None => vec![ExtendedComplex::real(1.0)],
            };
            let poles: Vec<Complex64> = poles
                .into_iter()
                .map(|p| p.finite().ok_or_else(|| invalid("invalid_input", "poles must be finite")))
                .collect::<Result<_, _>>()?;
            let mult: Vec<u32> = match &a.multiplicities {
                Some(m) => parse_json("multiplicities", m)?,
                None => vec![1; poles.len()],
            };
            let f = boundary_pole_function(&poles, &mult)?;
            let member = classify_membership(&f, &DomainSpec::unit_disc()).member;
            let sharpness = poles
                .iter()
                .map(|&p| f.evaluate(p * (1.0 - 1e-3)).norm())
                .fold(f64::INFINITY, f64::min);
            let infinite_on_set = poles.iter().all(|&p| f.evaluate(p).is_infinite());
            CounterexampleReport::new(
                "boundary-poles",
                vec![
                    Check::new("member", member as u8 as f64, 1.0, 0.0),
                    Check::new("infinite_on_set", infinite_on_set as u8 as f64, 1.0, 0.0),
                    Check { quantity: "min_modulus_near_poles".into(), computed: sharpness, expected: 1e3, tolerance: 0.0, pass: sharpness > 1e3 },
                ],
                format!("f = {}", serde_json::to_string(&f).expect("serializable")),
            )
        }
    };
    let doc = json!({"v": SCHEMA_VERSION, "report": report});
    let text = serde_json::to_string_pretty(&doc).expect("serializable") + "\n";
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        write_file(&dir.join("report.json"), &text)?;
    }
    let code = if report.pass { EXIT_OK } else { EXIT_VERIFY_FAILED };
    Ok((code, text))
}

fn cmd_report(a: ReportArgs) -> Result<(i32, String), Failure> {
    let doc = load_result(&a.result)?;
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        let grid = doc.result.achieved_error.grid_used;
        write_file(&dir.join("profile.csv"), &profile_csv(&doc.target, &doc.result.approximant, &doc.domain, &grid))?;
        if a.svg {
            let svg = error_svg(&doc.target, &doc.result.approximant, &doc.domain, &doc.construction_grid);
            write_file(&dir.join("error.svg"), &svg)?;
        }
    }
    Ok((EXIT_OK, summary(&doc)))
}
