//! `pdfun`: batch tool for harmonic analysis of positive definite functions
//! on finite groups: Fourier transforms, positivity and separability checks,
//! map classification, and entanglement detection.
//!
//! Exit codes: verdict commands return 0/1 (and 2 for undecided separability);
//! 64 unknown command or bad usage, 65 malformed input file, 66 unreadable
//! file or domain/shape mismatch, 70 internal error.

use clap::{Parser, Subcommand, ValueEnum};
use pdfun_core::bundled;
use pdfun_core::detect::{
    check_ppt, check_separability, detect_with_map, make_separable_sample, SepVerdict,
};
use pdfun_core::group::{verify_group, verify_irrep_table, DEFAULT_TOL};
use pdfun_core::harmonic::{characteristic_function, fourier_forward, fourier_inverse};
use pdfun_core::io::{self, DomainSpec, FunctionFile, LoadError, MapFile};
use pdfun_core::maps::{apply_map, classify_map, ClassifyBudget, PdMapSpec, PdStatus};
use pdfun_core::positivity::{gns_construct, is_positive_definite};
use pdfun_core::{Error as CoreError, GroupData, GroupFunction, ProductGroup};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "pdfun",
    version,
    about = "Positive definite functions on finite groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Absolute tolerance for numerical checks (default: $PDE_TOL or 1e-9)
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Seed for all randomized operations
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the report to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Verify group axioms and the irrep table of a group
    VerifyGroup {
        #[arg(long, required = true)]
        group: Vec<String>,
    },
    /// Fourier-transform a function into its block family
    Fourier {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        function: PathBuf,
    },
    /// Reconstruct a function from a blocks file
    InvFourier {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        blocks: PathBuf,
    },
    /// Positive-definiteness verdict (block criterion)
    CheckPd {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        function: PathBuf,
    },
    /// GNS reconstruction of a positive definite function
    Gns {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        function: PathBuf,
    },
    /// PPT check of a PD function on a product group
    CheckPpt {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long, conflicts_with = "state")]
        function: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Per-block separability analysis of a normalized PD function
    CheckSep {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long, conflicts_with = "state")]
        function: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
    },
    /// Classify a map as PD/CPD via its Fourier blocks and Choi matrices
    ClassifyMap {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        map: String,
    },
    /// Apply a map to a function
    ApplyMap {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        map: String,
        #[arg(long)]
        function: PathBuf,
    },
    /// Run one detector: fired iff (id⊗Λ)φ is not positive definite
    Detect {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long, conflicts_with = "state")]
        function: Option<PathBuf>,
        #[arg(long)]
        state: Option<PathBuf>,
        #[arg(long)]
        map: String,
    },
    /// Sample a certified separable mixture of pure product functions
    SampleSep {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(short, default_value_t = 3)]
        k: usize,
    },
    /// Characteristic function of a state file
    Charfn {
        #[arg(long, required = true)]
        group: Vec<String>,
        #[arg(long)]
        state: PathBuf,
    },
}

enum Resolved {
    Single(GroupData),
    Product(Box<ProductGroup>),
}

impl Resolved {
    fn data(&self) -> &GroupData {
        match self {
            Resolved::Single(d) => d,
            Resolved::Product(p) => &p.data,
        }
    }

    fn product(&self) -> Result<&ProductGroup, CliError> {
        match self {
            Resolved::Product(p) => Ok(p),
            Resolved::Single(d) => Err(CliError::semantic(format!(
                "`{}` is not a product group; this command needs one (e.g. s3xs3 or two --group arguments)",
                d.id
            ))),
        }
    }
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn semantic(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 66,
        }
    }
}

impl From<LoadError> for CliError {
    fn from(e: LoadError) -> Self {
        let code = match &e {
            LoadError::Malformed { .. } => 65,
            LoadError::Io { .. } | LoadError::Semantic(_) => 66,
        };
        CliError {
            message: e.to_string(),
            code,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError {
            message: e.to_string(),
            code: 66,
        }
    }
}

fn resolve_one(spec: &str) -> Result<Resolved, CliError> {
    if let Some(d) = bundled::bundled_group(spec) {
        return Ok(Resolved::Single(d));
    }
    if let Some(p) = bundled::bundled_product(spec) {
        return Ok(Resolved::Product(Box::new(p.map_err(CliError::from)?)));
    }
    let path = Path::new(spec);
    if path.exists() {
        return Ok(Resolved::Single(io::load_group_file(path)?));
    }
    Err(CliError::semantic(format!(
        "`{spec}` is neither a bundled group nor a readable file"
    )))
}

fn resolve_groups(specs: &[String]) -> Result<Resolved, CliError> {
    match specs {
        [one] => resolve_one(one),
        [left, right] => {
            let l = match resolve_one(left)? {
                Resolved::Single(d) => d,
                Resolved::Product(_) => {
                    return Err(CliError::semantic("nested products are not supported here"))
                }
            };
            let r = match resolve_one(right)? {
                Resolved::Single(d) => d,
                Resolved::Product(_) => {
                    return Err(CliError::semantic("nested products are not supported here"))
                }
            };
            Ok(Resolved::Product(Box::new(
                ProductGroup::new(&l, &r).map_err(CliError::from)?,
            )))
        }
        _ => Err(CliError::semantic("--group takes one or two values")),
    }
}

fn load_function(path: &Path, resolved: &Resolved) -> Result<GroupFunction, CliError> {
    let file = io::load_function_file(path)?;
    let ok = match resolved {
        Resolved::Single(d) => file.domain.matches_single(d),
        Resolved::Product(p) => file.domain.matches_product(p),
    };
    if !ok {
        return Err(CliError::semantic(format!(
            "function domain {:?} does not match group `{}`",
            domain_name(&file.domain),
            resolved.data().id
        )));
    }
    let f = file.into_function()?;
    f.check_domain(resolved.data())?;
    Ok(f)
}

fn domain_name(d: &DomainSpec) -> String {
    match d {
        DomainSpec::Single(s) => s.clone(),
        DomainSpec::Pair([l, r]) => format!("{l}x{r}"),
    }
}

/// Load a function either directly or as the characteristic function of a state.
fn load_input_function(
    function: &Option<PathBuf>,
    state: &Option<PathBuf>,
    resolved: &Resolved,
) -> Result<GroupFunction, CliError> {
    match (function, state) {
        (Some(f), None) => load_function(f, resolved),
        (None, Some(s)) => {
            let pg = resolved.product()?;
            let file = io::load_state_file(s)?;
            let (block, rho) = file.into_parts(pg)?;
            Ok(characteristic_function(pg, block, &rho, true)?)
        }
        _ => Err(CliError::semantic(
            "exactly one of --function or --state is required",
        )),
    }
}

fn resolve_map(spec: &str, source: &GroupData, target: &GroupData) -> Result<PdMapSpec, CliError> {
    if spec == "theta" {
        return Ok(PdMapSpec::inversion());
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::semantic(format!(
            "`{spec}` is neither the bundled map `theta` nor a readable file"
        )));
    }
    let file: MapFile = io::load_map_file(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "map".into());
    Ok(file.into_spec(&name, source, target)?)
}

struct Report {
    json: String,
    text: String,
    exit: u8,
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let tol = cli
        .tol
        .or_else(|| std::env::var("PDE_TOL").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(DEFAULT_TOL);
    if tol <= 0.0 {
        return Err(CliError {
            message: "tolerance must be positive".into(),
            code: 64,
        });
    }

    match &cli.command {
        Command::VerifyGroup { group } => {
            let resolved = resolve_groups(group)?;
            let d = resolved.data();
            let gv = verify_group(&d.group);
            let tv = verify_irrep_table(&d.group, &d.table, tol)?;
            let report = io::VerificationJson::new(&gv, &tv);
            let mut text = format!(
                "group `{}`: {}\n",
                d.id,
                if report.valid {
                    "all axioms hold"
                } else {
                    "violations found"
                }
            );
            for v in report
                .group_violations
                .iter()
                .chain(&report.table_violations)
            {
                text.push_str(v);
                text.push('\n');
            }
            Ok(Report {
                json: io::to_json(&report),
                text,
                exit: u8::from(!report.valid),
            })
        }
        Command::Fourier { group, function } => {
            let resolved = resolve_groups(group)?;
            let f = load_function(function, &resolved)?;
            let blocks = fourier_forward(&f, resolved.data())?;
            let file = io::blocks_to_file(&blocks, resolved.data());
            Ok(Report {
                json: io::to_json(&file),
                text: format!("{} blocks written\n", file.len()),
                exit: 0,
            })
        }
        Command::InvFourier { group, blocks } => {
            let resolved = resolve_groups(group)?;
            let file = io::load_blocks_file(blocks)?;
            let fb = io::blocks_from_file(&file, resolved.data())?;
            let f = fourier_inverse(&fb, resolved.data())?;
            let out = match &resolved {
                Resolved::Single(d) => FunctionFile::from_single(d, &f),
                Resolved::Product(p) => FunctionFile::from_product(p, &f),
            };
            Ok(Report {
                json: io::to_json(&out),
                text: format!("function on {} elements\n", f.len()),
                exit: 0,
            })
        }
        Command::CheckPd { group, function } => {
            let resolved = resolve_groups(group)?;
            let f = load_function(function, &resolved)?;
            let verdict = is_positive_definite(&f, resolved.data(), tol)?;
            let json = io::to_json(&io::PdVerdictJson::from(&verdict));
            let text = format!(
                "positive definite: {} (min eigenvalue {:.6e}, reason {})\n",
                verdict.is_pd,
                verdict.min_eigenvalue,
                verdict.reason.as_str()
            );
            Ok(Report {
                json,
                text,
                exit: u8::from(!verdict.is_pd),
            })
        }
        Command::Gns { group, function } => {
            let resolved = resolve_groups(group)?;
            let f = load_function(function, &resolved)?;
            let gns = gns_construct(&f, &resolved.data().group, tol)?;
            let report = io::GnsJson::new(&gns, &f);
            let text = format!(
                "GNS dimension {} with reconstruction error {:.3e}\n",
                report.dimension, report.max_reconstruction_error
            );
            Ok(Report {
                json: io::to_json(&report),
                text,
                exit: 0,
            })
        }
        Command::CheckPpt {
            group,
            function,
            state,
        } => {
            let resolved = resolve_groups(group)?;
            let pg = resolved.product()?;
            let f = load_input_function(function, state, &resolved)?;
            let violations = check_ppt(&f, pg, tol)?;
            let report = io::PptReportJson::new(&violations);
            let mut text = format!("ppt holds: {}\n", report.ppt_holds);
            for v in &violations {
                text.push_str(&format!(
                    "block {}: eigenvalue {:.6e}\n",
                    v.block, v.eigenvalue
                ));
            }
            Ok(Report {
                json: io::to_json(&report),
                text,
                exit: u8::from(!report.ppt_holds),
            })
        }
        Command::CheckSep {
            group,
            function,
            state,
        } => {
            let resolved = resolve_groups(group)?;
            let pg = resolved.product()?;
            let f = load_input_function(function, state, &resolved)?;
            let report = check_separability(&f, pg, tol)?;
            let json = io::to_json(&io::SeparabilityReportJson::from(&report));
            let mut text = format!("verdict: {}\n", report.verdict.as_str());
            for b in &report.per_block {
                text.push_str(&format!(
                    "block {} ({}x{}): {} via {}\n",
                    b.block,
                    b.factor_dims.0,
                    b.factor_dims.1,
                    b.verdict.as_str(),
                    b.method.as_str()
                ));
            }
            if report.bound_entangled_candidate {
                text.push_str("bound entangled candidate\n");
            }
            let exit = match report.verdict {
                SepVerdict::Separable => 0,
                SepVerdict::Entangled => 1,
                SepVerdict::PptUndecided => 2,
            };
            Ok(Report { json, text, exit })
        }
        Command::ClassifyMap { group, map } => {
            let resolved = resolve_groups(group)?;
            let d = resolved.data();
            let spec = resolve_map(map, d, d)?;
            let budget = ClassifyBudget {
                seed: cli.seed,
                ..ClassifyBudget::default()
            };
            let cls = classify_map(&spec, d, d, &budget, tol)?;
            let json = io::to_json(&io::ClassificationJson::from(&cls));
            let text = format!(
                "map `{}`: is_pd = {}, is_cpd = {}\n",
                spec.name,
                cls.is_pd.as_str(),
                cls.is_cpd
            );
            Ok(Report {
                json,
                text,
                exit: 0,
            })
        }
        Command::ApplyMap {
            group,
            map,
            function,
        } => {
            let resolved = resolve_groups(group)?;
            let d = resolved.data();
            let spec = resolve_map(map, d, d)?;
            let f = load_function(function, &resolved)?;
            let out = apply_map(&spec, d, d, &f)?;
            let file = match &resolved {
                Resolved::Single(d) => FunctionFile::from_single(d, &out),
                Resolved::Product(p) => FunctionFile::from_product(p, &out),
            };
            Ok(Report {
                json: io::to_json(&file),
                text: format!("function on {} elements\n", out.len()),
                exit: 0,
            })
        }
        Command::Detect {
            group,
            function,
            state,
            map,
        } => {
            let resolved = resolve_groups(group)?;
            let pg = resolved.product()?;
            let f = load_input_function(function, state, &resolved)?;
            let spec = resolve_map(map, &pg.right, &pg.right)?;
            let budget = ClassifyBudget {
                seed: cli.seed,
                ..ClassifyBudget::default()
            };
            let cls = classify_map(&spec, &pg.right, &pg.right, &budget, tol)?;
            if cls.is_pd == PdStatus::CounterexampleFound {
                return Err(CliError::semantic(format!(
                    "map `{}` has a positive-definiteness counterexample; detection would be unsound",
                    spec.name
                )));
            }
            let det = detect_with_map(&f, pg, pg, &spec, &cls, tol)?;
            let json = io::to_json(&io::DetectionJson::from(&det));
            let text = match (&det.block, det.eigenvalue) {
                (Some(b), Some(e)) => {
                    format!(
                        "detector `{}` fired on block {b}: eigenvalue {e:.6e}\n",
                        spec.name
                    )
                }
                _ => format!("detector `{}` did not fire\n", spec.name),
            };
            Ok(Report {
                json,
                text,
                exit: u8::from(det.fired),
            })
        }
        Command::SampleSep { group, k } => {
            let resolved = resolve_groups(group)?;
            let pg = resolved.product()?;
            if *k == 0 {
                return Err(CliError {
                    message: "-k must be at least 1".into(),
                    code: 64,
                });
            }
            let f = make_separable_sample(pg, *k, cli.seed);
            let file = FunctionFile::from_product(pg, &f);
            Ok(Report {
                json: io::to_json(&file),
                text: format!("separable sample with {k} terms on `{}`\n", pg.data.id),
                exit: 0,
            })
        }
        Command::Charfn { group, state } => {
            let resolved = resolve_groups(group)?;
            let pg = resolved.product()?;
            let file = io::load_state_file(state)?;
            let (block, rho) = file.into_parts(pg)?;
            let f = characteristic_function(pg, block, &rho, true)?;
            let out = FunctionFile::from_product(pg, &f);
            Ok(Report {
                json: io::to_json(&out),
                text: format!("characteristic function on `{}`\n", pg.data.id),
                exit: 0,
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(64),
            };
        }
    };

    match run(&cli) {
        Ok(report) => {
            let body = match cli.format {
                Format::Json => {
                    let mut s = report.json;
                    s.push('\n');
                    s
                }
                Format::Text => report.text,
            };
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, &body) {
                    eprintln!("error: cannot write `{}`: {e}", path.display());
                    return ExitCode::from(70);
                }
            } else {
                print!("{body}");
            }
            ExitCode::from(report.exit)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
