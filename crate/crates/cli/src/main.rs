use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use compspec::compspec::DEFAULT_MAX_SCC;
use compspec::format::{parse_edge_list, to_dot, to_edge_list};
use compspec::sachs::sachs_char_poly;
use compspec::search::{find_cospectral_classes, SearchReport, Universe};
use compspec::spectral::char_poly_exact;
use compspec::verify::{self, Claim, Ranges};
use compspec::{
    complementarity_spectrum_with, is_isomorphic, CompSpectrum, Digraph, Error, FamilySpec,
    SpectrumOptions, DEFAULT_RADIUS_TOL,
};

/// Complementarity spectra of digraphs.
///
/// Inputs are edge-list files, `-` for standard input, or inline family
/// specs: `cycle:n`, `inf:r,s`, `theta:a,b,c`, `infhat:r,s`, `dj:n,j`.
#[derive(Parser)]
#[command(name = "compspec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complementarity spectrum with witness vertex sets.
    Spectrum {
        input: String,
        /// Width bound for each certified spectral radius.
        #[arg(long, default_value_t = DEFAULT_RADIUS_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
    /// Characteristic polynomial coefficients, constant term first.
    Charpoly {
        input: String,
        #[arg(long, value_enum, default_value_t = Method::Exact)]
        method: Method,
        #[arg(long)]
        json: bool,
    },
    /// Generates a family member.
    Gen {
        spec: FamilySpec,
        #[arg(long, conflicts_with = "edges")]
        dot: bool,
        #[arg(long)]
        edges: bool,
    },
    /// Exits 0 when the two digraphs are isomorphic, 1 otherwise.
    Iso { a: String, b: String },
    /// Groups all digraph classes of one order by complementarity spectrum.
    Search {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = UniverseArg::All)]
        universe: UniverseArg,
        /// Only keep classes holding two members with equal arc counts.
        #[arg(long)]
        equal_size: bool,
        #[arg(long)]
        json: bool,
    },
    /// Checks a construction over a parameter grid.
    Verify {
        claim: Claim,
        /// Grid overrides such as `r=2..4,s=3..6`.
        #[arg(long)]
        range: Option<Ranges>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Exact,
    Sachs,
    Closed,
}

#[derive(Clone, Copy, ValueEnum)]
enum UniverseArg {
    All,
    Scc,
}

/// A failure carrying its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SizeLimitExceeded { .. } => 3,
            Error::NonConvergence { .. } => 4,
            Error::SelfLoop(_)
            | Error::VertexOutOfRange { .. }
            | Error::EmptyDigraph
            | Error::InvalidFamilyParameters(_)
            | Error::InvalidTolerance(_)
            | Error::IncomparableTolerances { .. }
            | Error::Parse(_) => 2,
            Error::NotStronglyConnected | Error::NoRealRootAtOrAboveZero => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

/// Loaded input plus the family spec it came from, if inline.
fn load(arg: &str) -> Result<(Digraph, Option<FamilySpec>), Failure> {
    if arg == "-" {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("reading standard input: {e}")))?;
        return Ok((parse_edge_list(&text)?, None));
    }
    if is_inline_spec(arg) {
        let spec: FamilySpec = arg.parse()?;
        return Ok((spec.generate()?, Some(spec)));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))?;
    Ok((parse_edge_list(&text)?, None))
}

fn is_inline_spec(arg: &str) -> bool {
    arg.split_once(':')
        .is_some_and(|(name, _)| !name.is_empty() && name.chars().all(|c| c.is_ascii_alphabetic()))
}

fn spectrum_options(tol: f64) -> Result<SpectrumOptions, Failure> {
    let max_scc = match std::env::var("COMPSPEC_MAX_SCC") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("COMPSPEC_MAX_SCC must be an integer, got {v:?}")))?,
        Err(_) => DEFAULT_MAX_SCC,
    };
    Ok(SpectrumOptions {
        max_scc,
        ..SpectrumOptions::default().with_radius_tol(tol)
    })
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match writeln!(out, "{text}") {
        Ok(()) => Ok(()),
        // A closed pipe (`| head`) is the reader's choice, not a failure.
        Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
        Err(e) => Err(Failure {
            code: 1,
            message: format!("writing output: {e}"),
        }),
    }
}

fn json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map_err(|e| Failure {
        code: 1,
        message: format!("serializing output: {e}"),
    })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Spectrum {
            input,
            tol,
            json: as_json,
        } => {
            let (d, _) = load(&input)?;
            let s = complementarity_spectrum_with(&d, &spectrum_options(tol)?)?;
            emit(&if as_json {
                json(&s)?
            } else {
                spectrum_table(&s)
            })?;
            Ok(0)
        }
        Command::Charpoly {
            input,
            method,
            json: as_json,
        } => {
            let (d, spec) = load(&input)?;
            let p = match method {
                Method::Exact => char_poly_exact(&d),
                Method::Sachs => sachs_char_poly(&d)?,
                Method::Closed => spec
                    .ok_or_else(|| usage("--method closed needs an inline family spec"))?
                    .closed_form_charpoly()?,
            };
            let text = if as_json {
                json(&p)?
            } else {
                let coeffs: Vec<String> = p.coeffs().iter().map(ToString::to_string).collect();
                format!("[{}]", coeffs.join(", "))
            };
            emit(&text)?;
            Ok(0)
        }
        Command::Gen { spec, dot, .. } => {
            let d = spec.generate()?;
            let text = if dot { to_dot(&d) } else { to_edge_list(&d) };
            emit(text.trim_end())?;
            Ok(0)
        }
        Command::Iso { a, b } => {
            let (da, _) = load(&a)?;
            let (db, _) = load(&b)?;
            let iso = is_isomorphic(&da, &db)?;
            emit(if iso { "isomorphic" } else { "not isomorphic" })?;
            Ok(if iso { 0 } else { 1 })
        }
        Command::Search {
            order,
            universe,
            equal_size,
            json: as_json,
        } => {
            let universe = match universe {
                UniverseArg::All => Universe::All,
                UniverseArg::Scc => Universe::StronglyConnected,
            };
            let report = find_cospectral_classes(order, universe, equal_size)?;
            emit(&if as_json {
                json(&report)?
            } else {
                search_table(&report)
            })?;
            Ok(0)
        }
        Command::Verify {
            claim,
            range,
            json: as_json,
        } => {
            let report = verify::run(claim, &range.unwrap_or_default())?;
            emit(&if as_json {
                json(&report)?
            } else {
                report.to_string()
            })?;
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

fn spectrum_table(s: &CompSpectrum) -> String {
    let mut lines = Vec::with_capacity(s.len());
    for v in &s.values {
        let e = &v.estimate;
        let witness: Vec<String> = v.witness.iter().map(ToString::to_string).collect();
        lines.push(format!(
            "{:.15}  [{:.16e}, {:.16e}]  {{{}}}",
            e.value,
            e.lower,
            e.upper,
            witness.join(", ")
        ));
    }
    lines.join("\n")
}

fn search_table(report: &SearchReport) -> String {
    let mut lines = vec![format!(
        "order {} ({}): {} spectra, {} with several classes",
        report.order,
        report.universe.name(),
        report.classes.len(),
        report.nontrivial_classes.len()
    )];
    for class in report.nontrivial() {
        let values: Vec<String> = class
            .spectrum
            .midpoints()
            .iter()
            .map(|x| format!("{x:.9}"))
            .collect();
        lines.push(format!("{{{}}}", values.join(", ")));
        for m in &class.members {
            let arcs: Vec<String> = m.digraph.arcs().map(|(u, v)| format!("{u}->{v}")).collect();
            if arcs.is_empty() {
                lines.push("  (no arcs)".to_string());
            } else {
                lines.push(format!("  {}", arcs.join(" ")));
            }
        }
    }
    lines.join("\n")
}
